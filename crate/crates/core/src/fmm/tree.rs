//! Octree passes over the occupied cells: multipole-to-multipole upward,
//! multipole-to-local on interaction lists, local-to-local downward.

use std::collections::{BTreeMap, HashMap};

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{neighbourhood, Grid};
use super::harmonics::{regular_harmonics, singular_harmonics, SolidHarmonics};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    Multipole,
    Local,
}

/// `Σ Mₙᵐ Θₙᵐ(x − center)` (multipole) or `Σ Lₙᵐ conj(Υₙᵐ(center − x))`
/// (local), for `n < order`, coefficients stored at `n² + n + m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub kind: ExpansionKind,
    pub order: usize,
    pub center: [f64; 3],
    pub coeffs: Vec<Complex64>,
}

impl Expansion {
    pub fn zero(kind: ExpansionKind, order: usize, center: [f64; 3]) -> Self {
        Expansion { kind, order, center, coeffs: vec![Complex64::new(0.0, 0.0); order * order] }
    }

    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        self.coeffs[super::harmonics::harmonic_index(n, m)]
    }

    /// Value of the expansion at `x`.
    pub fn evaluate(&self, x: [f64; 3]) -> f64 {
        let c = self.center;
        let s: Complex64 = match self.kind {
            ExpansionKind::Multipole => {
                let Ok(t) = singular_harmonics([x[0] - c[0], x[1] - c[1], x[2] - c[2]], self.order) else {
                    return f64::NAN;
                };
                self.coeffs.iter().zip(&t.values).map(|(a, b)| a * b).sum()
            }
            ExpansionKind::Local => {
                let u = regular_harmonics([c[0] - x[0], c[1] - x[1], c[2] - x[2]], self.order);
                self.coeffs.iter().zip(&u.values).map(|(a, b)| a * b.conj()).sum()
            }
        };
        s.re
    }
}

#[inline]
fn idx(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

/// Restores the negative orders from `X_n^{−m} = (−1)^m conj(X_n^m)`.
fn mirror(order: usize, v: &mut [Complex64]) {
    for n in 0..order {
        for m in 1..=n {
            let c = v[n * n + n + m].conj();
            v[n * n + n - m] = if m % 2 == 0 { c } else { -c };
        }
    }
}

/// Adds to `out` the multipole of `src` re-centred by `d = old − new`.
fn m2m(order: usize, src: &[Complex64], ups: &SolidHarmonics, out: &mut [Complex64]) {
    for n in 0..order {
        for m in 0..=n as i64 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..=n {
                let j = n - k;
                for l in -(k as i64)..=k as i64 {
                    if (m - l).abs() <= j as i64 {
                        s += src[idx(k, l)] * ups.get(j, m - l).conj();
                    }
                }
            }
            out[idx(n, m)] += s;
        }
    }
}

/// Number of stored coefficients with `m ≥ 0`.
fn half_len(order: usize) -> usize {
    order * (order + 1) / 2
}

fn half_idx(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// Real matrix of the multipole-to-local map for `theta = Θ(w − z)`, the
/// target centre `w` minus the source centre `z`, up to degree
/// `2·order − 2`.
///
/// It acts on `[Re M; Im M]` restricted to `m ≥ 0` (the rest follows from
/// `M_n^{−m} = (−1)^m conj(M_n^m)`) and yields `[Re L; Im L]` for `l ≥ 0`.
/// Every stored moment feeds every local coefficient; cutting at
/// `n + k < order` instead costs about three digits at one cell of
/// separation.
fn m2l_matrix(order: usize, theta: &SolidHarmonics) -> Array2<f64> {
    let r = half_len(order);
    let mut a = Array2::zeros((2 * r, 2 * r));
    let i = Complex64::new(0.0, 1.0);
    for k in 0..order {
        for l in 0..=k {
            let row = half_idx(k, l);
            for n in 0..order {
                let t = n + k;
                for m in 0..=n {
                    let col = half_idx(n, m);
                    let pos = theta.get(t, (m + l) as i64);
                    let (mut ca, mut cb) = (pos, i * pos);
                    if m > 0 {
                        let neg = theta.get(t, l as i64 - m as i64) * if m % 2 == 0 { 1.0 } else { -1.0 };
                        ca += neg;
                        cb -= i * neg;
                    }
                    a[[row, col]] = ca.re;
                    a[[row, col + r]] = cb.re;
                    a[[row + r, col]] = ca.im;
                    a[[row + r, col + r]] = cb.im;
                }
            }
        }
    }
    a
}

/// `[Re M; Im M]` for `m ≥ 0`, one column per source.
fn gather_moments(order: usize, m: &[Complex64], sources: &[usize]) -> Array2<f64> {
    let (r, p2) = (half_len(order), order * order);
    let mut b = Array2::zeros((2 * r, sources.len()));
    for (col, &j) in sources.iter().enumerate() {
        let src = &m[j * p2..(j + 1) * p2];
        for n in 0..order {
            for k in 0..=n {
                let v = src[idx(n, k as i64)];
                b[[half_idx(n, k), col]] = v.re;
                b[[half_idx(n, k) + r, col]] = v.im;
            }
        }
    }
    b
}

/// Adds the local expansion `src` about `w` re-centred at `w'`, with
/// `ups = Υ(w − w')`.
fn l2l(order: usize, src: &[Complex64], ups: &SolidHarmonics, out: &mut [Complex64]) {
    for j in 0..order {
        for i in 0..=j as i64 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in j..order {
                let d = k - j;
                for l in -(k as i64)..=k as i64 {
                    if (l - i).abs() <= d as i64 {
                        s += src[idx(k, l)] * ups.get(d, l - i).conj();
                    }
                }
            }
            out[idx(j, i)] += s;
        }
    }
}

struct Level {
    size: f64,
    cells: Vec<[i64; 3]>,
    index: HashMap<[i64; 3], usize>,
}

impl Level {
    fn new(size: f64, mut cells: Vec<[i64; 3]>) -> Self {
        cells.sort_unstable();
        cells.dedup();
        let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Level { size, cells, index }
    }

    fn all_adjacent(&self) -> bool {
        (0..3).all(|a| {
            let lo = self.cells.iter().map(|c| c[a]).min().unwrap_or(0);
            let hi = self.cells.iter().map(|c| c[a]).max().unwrap_or(0);
            hi - lo <= 1
        })
    }

    fn parent_level(&self) -> Level {
        Level::new(self.size * 2.0, self.cells.iter().map(|c| parent(*c)).collect())
    }
}

fn parent(c: [i64; 3]) -> [i64; 3] {
    c.map(|v| v.div_euclid(2))
}

fn adjacent(a: [i64; 3], b: [i64; 3]) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= 1)
}

/// Source cells whose multipoles enter the local expansion of `cell` at
/// this level: children of the parent's neighbours that are not adjacent to
/// `cell`.
fn interaction_list(level: &Level, cell: [i64; 3]) -> Vec<usize> {
    let p = parent(cell);
    let mut out = Vec::new();
    for o in neighbourhood() {
        let q = [p[0] + o[0], p[1] + o[1], p[2] + o[2]];
        for b in 0..8 {
            let c = [2 * q[0] + (b >> 2) as i64, 2 * q[1] + ((b >> 1) & 1) as i64, 2 * q[2] + (b & 1) as i64];
            if !adjacent(c, cell) {
                if let Some(&j) = level.index.get(&c) {
                    out.push(j);
                }
            }
        }
    }
    out
}

/// Octree levels from the grid (first) up to the first level on which all
/// occupied cells are mutually adjacent (last).
fn build_levels(grid: &Grid) -> Vec<Level> {
    let mut levels = vec![Level::new(grid.h, grid.cells.clone())];
    while !levels.last().unwrap().all_adjacent() {
        let next = levels.last().unwrap().parent_level();
        levels.push(next);
    }
    levels
}

/// For every grid cell, the leaf-level cells reached through the M2L lists
/// at all levels (`Far`), exposed for structural checks.
pub fn far_partners(grid: &Grid) -> Vec<Vec<usize>> {
    let levels = build_levels(grid);
    let mut out = Vec::with_capacity(grid.len());
    for cell in &grid.cells {
        let mut partners = Vec::new();
        let mut c = *cell;
        for (li, level) in levels.iter().enumerate().take(levels.len() - 1) {
            for j in interaction_list(level, c) {
                // all leaf descendants of level cell j
                let src = level.cells[j];
                let shift = li as u32;
                for (g, leaf) in grid.cells.iter().enumerate() {
                    if leaf.map(|v| v >> shift) == src {
                        partners.push(g);
                    }
                }
            }
            c = parent(c);
        }
        partners.sort_unstable();
        out.push(partners);
    }
    out
}

fn centre(c: [i64; 3], size: f64) -> [f64; 3] {
    c.map(|v| (v as f64 + 0.5) * size)
}

/// Local expansions of the far field of every grid cell.
pub fn fmm_pass(grid: &Grid, multipoles: &[Expansion], order: usize) -> Result<Vec<Expansion>> {
    if multipoles.len() != grid.len() {
        return Err(Error::Invalid("one multipole expansion per grid cell is required".into()));
    }
    if multipoles.iter().any(|m| m.order != order || m.kind != ExpansionKind::Multipole) {
        return Err(Error::Invalid("multipole expansions of inconsistent order".into()));
    }
    let p2 = order * order;
    let zero = Complex64::new(0.0, 0.0);
    let levels = build_levels(grid);
    let top = levels.len() - 1;

    // upward
    let mut moments: Vec<Vec<Complex64>> = Vec::with_capacity(levels.len());
    moments.push(multipoles.iter().flat_map(|m| m.coeffs.iter().copied()).collect());
    for li in 1..levels.len() {
        let (child, level) = (&levels[li - 1], &levels[li]);
        let shifts: Vec<SolidHarmonics> = (0..8)
            .map(|b| {
                let d = [(b >> 2) & 1, (b >> 1) & 1, b & 1].map(|v| (v as f64 - 0.5) * child.size);
                regular_harmonics(d, order)
            })
            .collect();
        let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); level.cells.len()];
        for (ci, c) in child.cells.iter().enumerate() {
            let b = ((c[0].rem_euclid(2)) << 2 | (c[1].rem_euclid(2)) << 1 | c[2].rem_euclid(2)) as usize;
            children[level.index[&parent(*c)]].push((ci, b));
        }
        let below = &moments[li - 1];
        let mut m = vec![zero; level.cells.len() * p2];
        m.par_chunks_mut(p2).zip(children.par_iter()).for_each(|(out, kids)| {
            for &(ci, b) in kids {
                m2m(order, &below[ci * p2..(ci + 1) * p2], &shifts[b], out);
            }
            mirror(order, out);
        });
        moments.push(m);
    }

    // downward
    let mut local = vec![zero; levels[top].cells.len() * p2];
    for li in (0..top).rev() {
        let (level, up) = (&levels[li], &levels[li + 1]);
        let shifts: Vec<SolidHarmonics> = (0..8)
            .map(|b| {
                let d = [(b >> 2) & 1, (b >> 1) & 1, b & 1].map(|v| (0.5 - v as f64) * level.size);
                regular_harmonics(d, order)
            })
            .collect();
        // pairs grouped by offset, so that each offset is one matrix product
        let mut pairs: BTreeMap<[i64; 3], (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (ci, c) in level.cells.iter().enumerate() {
            for j in interaction_list(level, *c) {
                let s = level.cells[j];
                let entry = pairs.entry([c[0] - s[0], c[1] - s[1], c[2] - s[2]]).or_default();
                entry.0.push(ci);
                entry.1.push(j);
            }
        }
        let m = &moments[li];
        let parent_local = &local;
        let mut next = vec![zero; level.cells.len() * p2];
        next.par_chunks_mut(p2).enumerate().for_each(|(ci, out)| {
            let c = level.cells[ci];
            let pi = up.index[&parent(c)];
            let b = ((c[0].rem_euclid(2)) << 2 | (c[1].rem_euclid(2)) << 1 | c[2].rem_euclid(2)) as usize;
            l2l(order, &parent_local[pi * p2..(pi + 1) * p2], &shifts[b], out);
        });
        let r = half_len(order);
        let groups: Vec<_> = pairs.into_iter().collect();
        // a few offsets at a time bounds the memory held by the products
        for chunk in groups.chunks(rayon::current_num_threads().max(1) * 2) {
            let products: Vec<Array2<f64>> = chunk
                .par_iter()
                .map(|(o, (_, sources))| {
                    let theta = singular_harmonics(o.map(|v| v as f64 * level.size), 2 * order - 1).expect("separated");
                    m2l_matrix(order, &theta).dot(&gather_moments(order, m, sources))
                })
                .collect();
            for ((_, (targets, _)), prod) in chunk.iter().zip(&products) {
                for (col, &ci) in targets.iter().enumerate() {
                    let out = &mut next[ci * p2..(ci + 1) * p2];
                    for n in 0..order {
                        for k in 0..=n {
                            let row = half_idx(n, k);
                            out[idx(n, k as i64)] += Complex64::new(prod[[row, col]], prod[[row + r, col]]);
                        }
                    }
                }
            }
        }
        next.par_chunks_mut(p2).for_each(|out| mirror(order, out));
        local = next;
    }

    Ok((0..grid.len())
        .map(|i| Expansion {
            kind: ExpansionKind::Local,
            order,
            center: centre(grid.cells[i], grid.h),
            coeffs: local[i * p2..(i + 1) * p2].to_vec(),
        })
        .collect())
}
