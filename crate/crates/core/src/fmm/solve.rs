use std::collections::HashMap;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{build_grid, neighbourhood, Grid, SourceField};
use super::harmonics::regular_harmonics;
use super::tree::{fmm_pass, Expansion, ExpansionKind};
use crate::boxquad::{legendre_basis, InteractionMatrixSet, LegendreBasis};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_cube;

const INV_4PI: f64 = 0.25 / std::f64::consts::PI;

/// Per-cell coefficient vectors of a piecewise polynomial in an orthonormal
/// Legendre basis of order `n` (`dim` functions per cell).
#[derive(Clone, Debug, PartialEq)]
pub struct CellCoefficients {
    pub order: usize,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl CellCoefficients {
    pub fn zeros(order: usize, cells: usize) -> Self {
        let dim = crate::boxquad::basis_dimension(order);
        CellCoefficients { order, dim, values: vec![0.0; dim * cells] }
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn cells(&self) -> usize {
        self.values.len() / self.dim
    }

    /// Value of the piecewise polynomial at `xi` in the reference cube of
    /// cell `i` of a grid with mesh size `h`.
    pub fn eval(&self, basis: &LegendreBasis, h: f64, i: usize, xi: [f64; 3]) -> f64 {
        let b = basis.eval(xi);
        h.powf(-1.5) * self.cell(i).iter().zip(&b).map(|(c, v)| c * v).sum::<f64>()
    }
}

/// Gauss points per axis used by [`project_source`].
pub fn projection_points(n: usize) -> usize {
    2 * n + 2
}

/// `L²` projection of `f` onto the piecewise polynomials of order `n`.
/// Boundary-layer cells lie outside the support and get zero coefficients.
pub fn project_source(src: &SourceField, grid: &Grid, n: usize) -> CellCoefficients {
    let basis = legendre_basis(n);
    let quad = gauss_legendre_cube(projection_points(n));
    let table: Vec<(Vec<f64>, f64, [f64; 3])> = quad.iter().map(|(x, w)| (basis.eval(*x), *w, *x)).collect();
    let h = grid.h;
    let scale = h.powf(1.5);
    let mut out = CellCoefficients::zeros(n, grid.len());
    let dim = out.dim;
    out.values.par_chunks_mut(dim).enumerate().for_each(|(i, c)| {
        if !grid.support[i] {
            return;
        }
        let lo = grid.lower(i);
        for (b, w, xi) in &table {
            let fx = (src.f)(std::array::from_fn(|a| lo[a] + h * xi[a]));
            if fx == 0.0 {
                continue;
            }
            for k in 0..dim {
                c[k] += scale * w * fx * b[k];
            }
        }
    });
    out
}

fn harmonic_points(order: usize, n: usize) -> usize {
    (order + n).div_ceil(2)
}

/// `T[(p,q)][k] = ∫_{[0,1]³} conj(Υ_p^q(ξ − ½)) b̂_k(ξ) dξ`, row-major with
/// `order²` rows; cell moments follow by scaling row `p` with `h^{3/2+p}/(4π)`.
pub fn p2m_matrix(n: usize, order: usize) -> Vec<Complex64> {
    moment_matrix(n, order, |xi| [xi[0] - 0.5, xi[1] - 0.5, xi[2] - 0.5])
}

/// `E[(p,q)][l] = ∫_{[0,1]³} conj(Υ_p^q(½ − ξ)) b̂_l(ξ) dξ`.
pub fn l2p_matrix(n: usize, order: usize) -> Vec<Complex64> {
    moment_matrix(n, order, |xi| [0.5 - xi[0], 0.5 - xi[1], 0.5 - xi[2]])
}

fn moment_matrix(n: usize, order: usize, arg: impl Fn([f64; 3]) -> [f64; 3]) -> Vec<Complex64> {
    let basis = legendre_basis(n);
    let dim = basis.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); order * order * dim];
    for (xi, w) in gauss_legendre_cube(harmonic_points(order, n)) {
        let u = regular_harmonics(arg(xi), order);
        let b = basis.eval(xi);
        for (r, y) in u.values.iter().enumerate() {
            let yc = y.conj() * w;
            for k in 0..dim {
                out[r * dim + k] += yc * b[k];
            }
        }
    }
    out
}

fn degree_of_row(order: usize) -> Vec<usize> {
    (0..order).flat_map(|p| std::iter::repeat(p).take(2 * p + 1)).collect()
}

/// Multipole moments `M_p^q = (1/4π) ∫_{Q_i} conj(Υ_p^q(y − y_i)) f_h(y) dy`
/// of every cell.
pub fn cell_multipoles(c: &CellCoefficients, grid: &Grid, order: usize) -> Vec<Expansion> {
    let t = p2m_matrix(c.order, order);
    let rows = degree_of_row(order);
    let h = grid.h;
    let scale: Vec<f64> = rows.iter().map(|&p| INV_4PI * h.powf(1.5 + p as f64)).collect();
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let ci = c.cell(i);
            let mut e = Expansion::zero(ExpansionKind::Multipole, order, grid.center(i));
            if ci.iter().any(|v| *v != 0.0) {
                for (r, out) in e.coeffs.iter_mut().enumerate() {
                    let row = &t[r * c.dim..(r + 1) * c.dim];
                    let s: Complex64 = row.iter().zip(ci).map(|(a, b)| a * b).sum();
                    *out = s * scale[r];
                }
            }
            e
        })
        .collect()
}

/// `d_Far,l = ∫_{Q_i} Σ L_p^q conj(Υ_p^q(y_i − x)) b_l(x) dx`.
pub fn far_coefficients(locals: &[Expansion], grid: &Grid, n_dst: usize) -> CellCoefficients {
    let mut out = CellCoefficients::zeros(n_dst, grid.len());
    let Some(order) = locals.first().map(|l| l.order) else {
        return out;
    };
    let e = l2p_matrix(n_dst, order);
    let rows = degree_of_row(order);
    let h = grid.h;
    let scale: Vec<f64> = rows.iter().map(|&p| h.powf(1.5 + p as f64)).collect();
    let dim = out.dim;
    out.values.par_chunks_mut(dim).zip(locals.par_iter()).for_each(|(d, loc)| {
        for (r, l) in loc.coeffs.iter().enumerate() {
            if *l == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ls = l * scale[r];
            let row = &e[r * dim..(r + 1) * dim];
            for k in 0..dim {
                d[k] += (ls * row[k]).re;
            }
        }
    });
    out
}

/// Near-field matrices in double precision, scaled to one mesh size.
#[derive(Clone, Debug)]
pub struct NearField {
    pub n_src: usize,
    pub n_dst: usize,
    rows: usize,
    cols: usize,
    matrices: HashMap<[i64; 3], Vec<f64>>,
}

impl NearField {
    /// Rounds `set` to `f64` and rescales from its cell size to `h`
    /// (entries scale with the square of the cell size).
    pub fn new(set: &InteractionMatrixSet, h: f64) -> Result<Self> {
        let h0 = set.h.inner().to_f64();
        let scale = (h / h0).powi(2);
        let mut matrices = HashMap::new();
        for o in neighbourhood() {
            let m = set
                .matrix(o)
                .ok_or_else(|| Error::Invalid(format!("interaction matrix for offset {o:?} is missing")))?;
            matrices.insert(o, m.to_f64_scaled(scale));
        }
        let first = &set.matrices[0];
        Ok(NearField { n_src: set.n_src, n_dst: set.n_dst, rows: first.rows, cols: first.cols, matrices })
    }

    pub fn matrix(&self, offset: [i64; 3]) -> &[f64] {
        &self.matrices[&offset]
    }
}

/// `d_Near(i) = Σ_{j ∈ Near(i)} A(j − i) c_j`.
pub fn near_coefficients(c: &CellCoefficients, grid: &Grid, near: &NearField) -> Result<CellCoefficients> {
    if c.dim != near.cols || c.order != near.n_src {
        return Err(Error::Invalid(format!(
            "source order {} does not match interaction matrices of order {}",
            c.order, near.n_src
        )));
    }
    let mut out = CellCoefficients::zeros(near.n_dst, grid.len());
    let (rows, cols) = (near.rows, near.cols);
    out.values.par_chunks_mut(rows).enumerate().for_each(|(i, d)| {
        let ci = grid.cells[i];
        for o in neighbourhood() {
            let Some(j) = grid.find([ci[0] + o[0], ci[1] + o[1], ci[2] + o[2]]) else {
                continue;
            };
            let cj = c.cell(j);
            if cj.iter().all(|v| *v == 0.0) {
                continue;
            }
            let a = near.matrix(o);
            for l in 0..rows {
                let row = &a[l * cols..(l + 1) * cols];
                d[l] += row.iter().zip(cj).map(|(x, y)| x * y).sum::<f64>();
            }
        }
    });
    Ok(out)
}

/// Wall-clock seconds per pipeline phase.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Timings {
    pub phases: Vec<(&'static str, f64)>,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.phases.iter().map(|p| p.1).sum()
    }

    fn record<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let v = f();
        self.phases.push((name, t.elapsed().as_secs_f64()));
        v
    }
}

/// `d = d_Near + d_Far` for given source coefficients on `grid`.
pub fn solve_coefficients(
    grid: &Grid,
    c: &CellCoefficients,
    order: usize,
    near: &NearField,
) -> Result<(CellCoefficients, Timings)> {
    let mut timings = Timings::default();
    let d_near = timings.record("near", || near_coefficients(c, grid, near))?;
    let moments = timings.record("p2m", || cell_multipoles(c, grid, order));
    let locals = timings.record("fmm", || fmm_pass(grid, &moments, order))?;
    let d_far = timings.record("l2p", || far_coefficients(&locals, grid, near.n_dst));
    let mut d = d_near;
    for (a, b) in d.values.iter_mut().zip(&d_far.values) {
        *a += b;
    }
    Ok((d, timings))
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub cells: usize,
    /// `dim V_h^n + dim V_h^{n+2}`.
    pub ndof: usize,
    pub seconds: f64,
    pub timings: Timings,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub grid: Grid,
    pub c: CellCoefficients,
    pub d: CellCoefficients,
    pub diagnostics: Diagnostics,
}

/// The whole pipeline: grid, projection, near and far field.
pub fn solve(src: &SourceField, h: f64, n: usize, order: usize, matrices: &InteractionMatrixSet) -> Result<Solution> {
    if matrices.n_src != n {
        return Err(Error::Invalid(format!("interaction matrices are for source order {}, not {n}", matrices.n_src)));
    }
    let start = Instant::now();
    let mut timings = Timings::default();
    let grid = timings.record("grid", || build_grid(src, h))?;
    let c = timings.record("projection", || project_source(src, &grid, n));
    let near = timings.record("matrices", || NearField::new(matrices, h))?;
    let (d, t) = solve_coefficients(&grid, &c, order, &near)?;
    timings.phases.extend(t.phases);
    let seconds = start.elapsed().as_secs_f64();
    let cells = grid.len();
    let ndof = cells * (c.dim + d.dim);
    Ok(Solution { grid, c, d, diagnostics: Diagnostics { cells, ndof, seconds, timings } })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    /// `‖f − f_h‖_{L²(Ω_h)}`
    pub f: f64,
    /// `‖u − ũ_h‖_{L²(Ω_h)}`
    pub u: f64,
}

/// Gauss points per axis for the error of a basis of order `n`.
pub fn error_points(n: usize) -> usize {
    n + 4
}

fn l2_error(field: &(dyn Fn([f64; 3]) -> f64 + Send + Sync), grid: &Grid, coeffs: &CellCoefficients) -> f64 {
    let basis = legendre_basis(coeffs.order);
    let quad = gauss_legendre_cube(error_points(coeffs.order));
    let table: Vec<(Vec<f64>, f64, [f64; 3])> = quad.iter().map(|(x, w)| (basis.eval(*x), *w, *x)).collect();
    let h = grid.h;
    let (scale, vol) = (h.powf(-1.5), h * h * h);
    let per_cell: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let lo = grid.lower(i);
            let ci = coeffs.cell(i);
            let mut s = 0.0;
            for (b, w, xi) in &table {
                let approx = scale * ci.iter().zip(b).map(|(c, v)| c * v).sum::<f64>();
                let exact = field(std::array::from_fn(|a| lo[a] + h * xi[a]));
                s += w * (exact - approx).powi(2);
            }
            s * vol
        })
        .collect();
    crate::exactmath::sum::correctly_rounded_sum(&per_cell).sqrt()
}

/// `L²(Ω_h)` errors of `f_h` and `ũ_h`.
pub fn error_norms(src: &SourceField, sol: &Solution) -> Result<ErrorNorms> {
    let exact = src.exact.as_ref().ok_or_else(|| Error::Invalid("source has no exact solution".into()))?;
    Ok(ErrorNorms { f: l2_error(&*src.f, &sol.grid, &sol.c), u: l2_error(&**exact, &sol.grid, &sol.d) })
}
