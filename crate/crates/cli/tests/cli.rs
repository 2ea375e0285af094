use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newtonquad")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn interactions(path: &Path) -> Output {
    run(&["interactions", "--n", "1", "--n-dst", "2", "--digits", "30", "--out", path.to_str().unwrap()])
}

#[test]
fn hackbusch_prints_the_reference_digits() {
    let o = run(&["hackbusch", "--digits", "60"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("value_50 181.43931117544219248665837073310890818752885155281\n"), "{text}");
    let kappa: f64 = text.lines().find_map(|l| l.strip_prefix("kappa ")).unwrap().parse().unwrap();
    assert!((0.55e8..2.2e8).contains(&kappa));
}

#[test]
fn hackbusch_double_mode_adds_two_lines() {
    let text = stdout(&run(&["hackbusch", "--digits", "30", "--double-mode"]));
    let double: f64 = text.lines().find_map(|l| l.strip_prefix("double ")).unwrap().parse().unwrap();
    assert!((double - 181.43931117544219).abs() < 1e-4, "{double}");
    assert!(text.contains("double_naive "));
}

#[test]
fn degenerate_boxes_print_zero() {
    let o = run(&["integrate3d", "--qx", "1,1:0,1:0,1", "--qy", "0,1:0,1:0,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["integrate2d", "--qx", "0,1:2,2", "--qy", "0,1:0,1"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn integrals_are_symmetric_under_box_exchange() {
    let a = stdout(&run(&["integrate3d", "--qx", "0,1:0,1:0,1", "--qy", "1,2:0,1/2:0,1", "--digits", "40"]));
    let b = stdout(&run(&["integrate3d", "--qy", "0,1:0,1:0,1", "--qx", "1,2:0,1/2:0,1", "--digits", "40"]));
    assert_eq!(a, b);
    let a = stdout(&run(&["integrate2d", "--qx", "0,1:0,1", "--qy", "2,3:0,1", "--digits", "40"]));
    let b = stdout(&run(&["integrate2d", "--qy", "0,1:0,1", "--qx", "2,3:0,1", "--digits", "40"]));
    assert_eq!(a, b);
    assert!(a.starts_with("1.3873152110670"), "{a}");
}

#[test]
fn summands_and_condition() {
    let text =
        stdout(&run(&["integrate3d", "--qx", "0,1:0,1:0,1", "--qy", "2,3:0,1:0,1", "--summands", "--condition"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 512 + 1);
    assert!(lines[1].starts_with("000000 P_Rinv "));
    assert!(lines[513].starts_with("kappa "));
}

#[test]
fn exit_codes() {
    // parse errors
    assert_eq!(run(&["integrate3d", "--qx", "0,1:0,1", "--qy", "0,1:0,1:0,1"]).status.code(), Some(2));
    assert_eq!(run(&["integrate3d", "--qx", "0,x:0,1:0,1", "--qy", "0,1:0,1:0,1"]).status.code(), Some(2));
    assert_eq!(run(&["integrate2d", "--lambda", "1", "--qx", "0,1:0,1", "--qy", "0,1:0,1"]).status.code(), Some(2));
    assert_eq!(run(&["hackbusch", "--digits", "5"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // invalid arguments
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    assert_eq!(run(&["interactions", "--n", "0", "--out", path.to_str().unwrap()]).status.code(), Some(1));
    // I/O
    let missing = dir.path().join("missing.json");
    let o = run(&["solve", "--k", "1", "--matrices", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["solve", "--k", "1", "--matrices", path.to_str().unwrap()]).status.code(), Some(4));
    let unwritable = dir.path().join("no/such/dir/m.json");
    assert_eq!(interactions(&unwritable).status.code(), Some(4));
}

#[test]
fn interactions_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(interactions(&a).status.success());
    assert!(interactions(&b).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.contains("\"version\""), "{}", &text[..200.min(text.len())]);

    let set = newtonquad::boxquad::InteractionMatrixSet::read(&a).unwrap();
    assert_eq!((set.n_src, set.n_dst, set.matrices.len()), (1, 2, 27));
    // the constant-constant entry at offset 0 is ∫∫ 1/|x−y| / 4π over the unit cube
    let cfg = newtonquad::EvalConfig::digits(30);
    let unit = newtonquad::boxquad::Box3::unit();
    let z = newtonquad::MultiIndex::ZERO;
    let direct = newtonquad::boxquad::definite_integral_3d(z, z, &unit, &unit, &cfg).unwrap().to_f64();
    let entry = set.matrix([0, 0, 0]).unwrap().to_f64_scaled(1.0)[0];
    assert!((entry - direct / (4.0 * std::f64::consts::PI)).abs() < 1e-14, "{entry}");
}

#[test]
fn matrices_of_the_wrong_order_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    assert!(interactions(&m).status.success());
    let o = run(&["solve", "--k", "1", "--n", "2", "--matrices", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_source_gives_zero_errors() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    assert!(interactions(&m).status.success());
    let out = dir.path().join("study");
    let args = [
        "--threads",
        "1",
        "solve",
        "--source",
        "zero",
        "--n",
        "1",
        "--P",
        "6",
        "--h",
        "1/2",
        "--matrices",
        m.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    let first = run(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let text = stdout(&first);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["k,fh,uh", "1,0.000000e0,0.000000e0"]);
    assert_eq!(std::fs::read_to_string(out.join("errors.csv")).unwrap(), text);
    assert!(std::fs::read_to_string(out.join("timings.csv")).unwrap().contains("NDOF"));
    assert_eq!(stdout(&run(&args)), text);
}

#[test]
fn convergence_writes_one_row_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    assert!(interactions(&m).status.success());
    let o =
        run(&["convergence", "--n", "1", "--P", "6", "--kmin", "1", "--kmax", "2", "--matrices", m.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip_while(|l| *l != "k,fh,uh")
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[1][0]), (1.0, 2.0));
    // piecewise constants still converge
    assert!(rows[1][1] < rows[0][1] && rows[1][2] < rows[0][2], "{text}");
}
