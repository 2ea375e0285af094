//! `newtonquad` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid arguments or data, 2 parse error,
//! 3 singular term during evaluation, 4 I/O error (including unreadable
//! matrix files).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use newtonquad::antideriv2d::integrate_box_kernel_2d;
use newtonquad::antideriv3d::integrate_box_kernel;
use newtonquad::boxquad::{
    condition_of_sum, corner_summands_3d, definite_integral_2d, definite_integral_of, hackbusch_example,
    interaction_matrices, Box2, Box3, InteractionMatrixSet,
};
use newtonquad::exactmath::{format_significant, BigFloat};
use newtonquad::fmm::{
    convergence_study, error_norms, mollifier_case, solve, write_errors_csv, write_timings_csv, SourceField,
    StudyConfig, StudyRow,
};
use newtonquad::{Antiderivative2, Antiderivative3, Error, EvalConfig, Idx2, Idx3, ParseError, Rational};

#[derive(Parser)]
#[command(
    name = "newtonquad",
    version,
    about = "Exact box integrals of the Newton potential and an FMM Poisson solver"
)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ∫_Qx ∫_Qy x^λ y^μ / |x−y| dy dx.
    Integrate3d(Integrate3d),
    /// ∫_Qx ∫_Qy x^λ y^μ ln|x−y|² dy dx.
    Integrate2d(Integrate2d),
    /// Hackbusch's cancellation example with its condition number.
    Hackbusch(Hackbusch),
    /// Precompute near-field interaction matrices at h = 1.
    Interactions(Interactions),
    /// Solve −Δu = f on one grid and report errors and timing.
    Solve(Solve),
    /// Solve on h = 2^-k for k = kmin..kmax.
    Convergence(Convergence),
}

#[derive(Args)]
struct Integrate3d {
    #[arg(long, default_value = "0,0,0")]
    lambda: String,
    #[arg(long, default_value = "0,0,0")]
    mu: String,
    /// Box "a,b:c,d:e,f"; endpoints are fractions or exact decimals.
    #[arg(long)]
    qx: String,
    #[arg(long)]
    qy: String,
    #[arg(long, default_value_t = 100)]
    digits: u32,
    /// Print the 512 signed corner summands.
    #[arg(long)]
    summands: bool,
    /// Print the condition number of the corner sum.
    #[arg(long)]
    condition: bool,
}

#[derive(Args)]
struct Integrate2d {
    #[arg(long, default_value = "0,0")]
    lambda: String,
    #[arg(long, default_value = "0,0")]
    mu: String,
    /// Box "a,b:c,d".
    #[arg(long)]
    qx: String,
    #[arg(long)]
    qy: String,
    #[arg(long, default_value_t = 100)]
    digits: u32,
}

#[derive(Args)]
struct Hackbusch {
    #[arg(long, default_value_t = 100)]
    digits: u32,
    /// Also evaluate with machine-double coefficients.
    #[arg(long)]
    double_mode: bool,
}

#[derive(Args)]
struct Interactions {
    /// Source basis order.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Destination basis order (default n + 2).
    #[arg(long)]
    n_dst: Option<usize>,
    #[arg(long, default_value_t = 120)]
    digits: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Mollifier,
    /// f ≡ 0 on [−1,1]³.
    Zero,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long = "P", default_value_t = 20)]
    order: usize,
    #[arg(long)]
    matrices: PathBuf,
    #[arg(long, value_enum, default_value = "mollifier")]
    source: Source,
    /// Directory receiving errors.csv and timings.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Solve {
    #[command(flatten)]
    study: StudyArgs,
    /// Mesh size 2^-k.
    #[arg(long, conflicts_with = "h")]
    k: Option<u32>,
    /// Mesh size as a dyadic fraction, e.g. 1/4.
    #[arg(long)]
    h: Option<String>,
}

#[derive(Args)]
struct Convergence {
    #[command(flatten)]
    study: StudyArgs,
    #[arg(long, default_value_t = 1)]
    kmin: u32,
    #[arg(long, default_value_t = 3)]
    kmax: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = std::io::stdout().lock();
    let result = match cli.command {
        Command::Integrate3d(a) => integrate3d(a, &mut out),
        Command::Integrate2d(a) => integrate2d(a, &mut out),
        Command::Hackbusch(a) => hackbusch(a, &mut out),
        Command::Interactions(a) => interactions(a, &mut out),
        Command::Solve(a) => cmd_solve(a, &mut out),
        Command::Convergence(a) => convergence(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::SingularTerm { .. } => 3,
        Error::Io(_) | Error::Json(_) => 4,
        Error::Invalid(_) => 1,
    }
}

fn precision(digits: u32) -> Result<EvalConfig, Error> {
    if digits < 16 {
        return Err(ParseError::Other(format!("--digits must be at least 16, got {digits}")).into());
    }
    Ok(EvalConfig::digits(digits))
}

fn parse_index<const N: usize>(s: &str) -> Result<newtonquad::MultiIndex<N>, Error> {
    Ok(s.parse()?)
}

fn show(x: &BigFloat, digits: u32) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        format_significant(x, digits as usize)
    }
}

fn integrate3d(a: Integrate3d, out: &mut impl Write) -> Result<(), Error> {
    let lambda: Idx3 = parse_index(&a.lambda)?;
    let mu: Idx3 = parse_index(&a.mu)?;
    let qx: Box3 = a.qx.parse()?;
    let qy: Box3 = a.qy.parse()?;
    let cfg = precision(a.digits)?;
    let f: Antiderivative3<Rational> = integrate_box_kernel(lambda, mu);
    let value: BigFloat = definite_integral_of(&f, &qy, &qx, &cfg)?;
    writeln!(out, "{}", show(&value, a.digits))?;
    if a.summands || a.condition {
        let s = corner_summands_3d::<Rational, BigFloat>(&f, &qy, &qx, &cfg)?;
        if a.summands {
            for (i, v) in s.iter().enumerate() {
                let term = newtonquad::Term3::ALL[i % 8];
                writeln!(out, "{:06b} {} {}", i / 8, term.label(), show(v, a.digits))?;
            }
        }
        if a.condition {
            let kappa = condition_of_sum(&s, cfg.precision);
            writeln!(out, "kappa {}", format_significant(&kappa, 10))?;
        }
    }
    Ok(())
}

fn integrate2d(a: Integrate2d, out: &mut impl Write) -> Result<(), Error> {
    let lambda: Idx2 = parse_index(&a.lambda)?;
    let mu: Idx2 = parse_index(&a.mu)?;
    let qx: Box2 = a.qx.parse()?;
    let qy: Box2 = a.qy.parse()?;
    let cfg = precision(a.digits)?;
    let _: Antiderivative2<Rational> = integrate_box_kernel_2d(lambda, mu);
    let value = definite_integral_2d(lambda, mu, &qy, &qx, &cfg)?;
    writeln!(out, "{}", show(&value, a.digits))?;
    Ok(())
}

fn hackbusch(a: Hackbusch, out: &mut impl Write) -> Result<(), Error> {
    let cfg = precision(a.digits)?;
    let r = hackbusch_example(&cfg, a.double_mode)?;
    writeln!(out, "value {}", show(&r.value, a.digits))?;
    // the reference value is quoted rounded to 50 digits
    if a.digits >= 50 {
        writeln!(out, "value_50 {}", show(&r.value, 50))?;
    }
    writeln!(out, "kappa {}", format_significant(&r.kappa, 10))?;
    if let (Some(d), Some(n)) = (r.double_value, r.double_naive) {
        writeln!(out, "double {d:.17e}")?;
        writeln!(out, "double_naive {n:.17e}")?;
    }
    Ok(())
}

fn interactions(a: Interactions, out: &mut impl Write) -> Result<(), Error> {
    let n_dst = a.n_dst.unwrap_or(a.n + 2);
    if a.n == 0 || n_dst == 0 {
        return Err(Error::Invalid("basis orders must be at least 1".into()));
    }
    let cfg = precision(a.digits)?;
    let set = interaction_matrices(a.n, n_dst, &cfg)?;
    set.write(&a.out)?;
    writeln!(out, "wrote {} matrices ({} x {}) to {}", set.matrices.len(), n_dst, a.n, a.out.display())?;
    Ok(())
}

fn source(s: Source) -> SourceField {
    match s {
        Source::Mollifier => mollifier_case(),
        Source::Zero => SourceField::zero([-1.0; 3], [1.0; 3]),
    }
}

fn load_matrices(path: &Path, n: usize) -> Result<InteractionMatrixSet, Error> {
    let set = InteractionMatrixSet::read(path)?;
    if set.n_src != n {
        return Err(Error::Invalid(format!(
            "{} holds matrices for source order {}, not {n}",
            path.display(),
            set.n_src
        )));
    }
    Ok(set)
}

fn study_config(s: &StudyArgs, set: &InteractionMatrixSet, kmin: u32, kmax: u32) -> StudyConfig {
    StudyConfig {
        source: match s.source {
            Source::Mollifier => "mollifier".into(),
            Source::Zero => "zero".into(),
        },
        n: s.n,
        order: s.order,
        kmin,
        kmax,
        n_dst: set.n_dst,
        matrix_precision_digits: set.precision.decimal_digits(),
    }
}

fn report(s: &StudyArgs, config: &StudyConfig, rows: &[StudyRow], out: &mut impl Write) -> Result<(), Error> {
    write_errors_csv(out, config, rows)?;
    if let Some(dir) = &s.out {
        std::fs::create_dir_all(dir)?;
        let mut e = BufWriter::new(File::create(dir.join("errors.csv"))?);
        write_errors_csv(&mut e, config, rows)?;
        e.flush()?;
        let mut t = BufWriter::new(File::create(dir.join("timings.csv"))?);
        write_timings_csv(&mut t, config, rows)?;
        t.flush()?;
    }
    Ok(())
}

fn mesh_level(a: &Solve) -> Result<u32, Error> {
    match (&a.k, &a.h) {
        (Some(k), _) => Ok(*k),
        (None, Some(h)) => {
            let q: Rational = h.parse()?;
            let (num, den) = (q.numer(), q.denom());
            if *num != 1 || !den.is_power_of_two() {
                return Err(ParseError::Other(format!("--h must be 2^-k, got {h}")).into());
            }
            Ok(den.significant_bits() - 1)
        }
        (None, None) => Err(ParseError::Other("one of --h or --k is required".into()).into()),
    }
}

fn cmd_solve(a: Solve, out: &mut impl Write) -> Result<(), Error> {
    let k = mesh_level(&a)?;
    let set = load_matrices(&a.study.matrices, a.study.n)?;
    let src = source(a.study.source);
    let h = 0.5f64.powi(k as i32);
    let sol = solve(&src, h, a.study.n, a.study.order, &set)?;
    let e = error_norms(&src, &sol)?;
    let row = StudyRow {
        k,
        h,
        cells: sol.diagnostics.cells,
        ndof: sol.diagnostics.ndof,
        seconds: sol.diagnostics.seconds,
        f_error: e.f,
        u_error: e.u,
    };
    let config = study_config(&a.study, &set, k, k);
    report(&a.study, &config, &[row], out)
}

fn convergence(a: Convergence, out: &mut impl Write) -> Result<(), Error> {
    let set = load_matrices(&a.study.matrices, a.study.n)?;
    let src = source(a.study.source);
    let rows = convergence_study(&src, a.study.n, a.study.order, a.kmin, a.kmax, &set)?;
    let config = study_config(&a.study, &set, a.kmin, a.kmax);
    report(&a.study, &config, &rows, out)
}
