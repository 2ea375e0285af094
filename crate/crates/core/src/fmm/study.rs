use std::io::Write;

use serde::Serialize;

use super::grid::SourceField;
use super::solve::{error_norms, solve};
use crate::boxquad::InteractionMatrixSet;
use crate::error::{Error, Result};

/// One refinement level of a convergence study.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyRow {
    pub k: u32,
    pub h: f64,
    pub cells: usize,
    pub ndof: usize,
    pub seconds: f64,
    pub f_error: f64,
    pub u_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StudyConfig {
    pub source: String,
    pub n: usize,
    #[serde(rename = "P")]
    pub order: usize,
    pub kmin: u32,
    pub kmax: u32,
    pub n_dst: usize,
    pub matrix_precision_digits: u32,
}

/// Solves on `h = 2^{−k}` for `k = kmin..=kmax` and records errors and
/// wall-clock times.
pub fn convergence_study(
    src: &SourceField,
    n: usize,
    order: usize,
    kmin: u32,
    kmax: u32,
    matrices: &InteractionMatrixSet,
) -> Result<Vec<StudyRow>> {
    if kmin > kmax {
        return Err(Error::Invalid(format!("empty level range {kmin}..{kmax}")));
    }
    let mut rows = Vec::new();
    for k in kmin..=kmax {
        let h = 0.5f64.powi(k as i32);
        let sol = solve(src, h, n, order, matrices)?;
        let e = error_norms(src, &sol)?;
        log::info!("k = {k}: {} cells, {:.3} s", sol.diagnostics.cells, sol.diagnostics.seconds);
        rows.push(StudyRow {
            k,
            h,
            cells: sol.diagnostics.cells,
            ndof: sol.diagnostics.ndof,
            seconds: sol.diagnostics.seconds,
            f_error: e.f,
            u_error: e.u,
        });
    }
    Ok(rows)
}

/// Observed orders `log₂(e_{k}/e_{k+1})` of `(f_h, ũ_h)` between successive
/// rows, assuming `h` halves from row to row.
pub fn observed_orders(rows: &[StudyRow]) -> Vec<(f64, f64)> {
    rows.windows(2).map(|w| ((w[0].f_error / w[1].f_error).log2(), (w[0].u_error / w[1].u_error).log2())).collect()
}

/// Least-squares slope of `log t` against `log N`.
pub fn fit_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn header(w: &mut impl Write, config: &StudyConfig) -> std::io::Result<()> {
    writeln!(w, "# {}", serde_json::to_string(config).expect("serializable"))
}

/// Rows `k,fh,uh`.
pub fn write_errors_csv(w: &mut impl Write, config: &StudyConfig, rows: &[StudyRow]) -> Result<()> {
    header(w, config)?;
    writeln!(w, "k,fh,uh")?;
    for r in rows {
        writeln!(w, "{},{:.6e},{:.6e}", r.k, r.f_error, r.u_error)?;
    }
    Ok(())
}

/// Rows `NDOF,time`.
pub fn write_timings_csv(w: &mut impl Write, config: &StudyConfig, rows: &[StudyRow]) -> Result<()> {
    header(w, config)?;
    writeln!(w, "NDOF,time")?;
    for r in rows {
        writeln!(w, "{},{:.6}", r.ndof, r.seconds)?;
    }
    Ok(())
}
