use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarField = Arc<dyn Fn([f64; 3]) -> f64 + Send + Sync>;
/// Decides whether the closed box `[lo, hi]` meets the support.
pub type CellPredicate = Arc<dyn Fn([f64; 3], [f64; 3]) -> bool + Send + Sync>;

/// Samples per axis used by the default support detection.
pub const SUPPORT_SAMPLES: usize = 4;

/// A compactly supported right-hand side `f`, with the exact solution of
/// `−Δu = f` when it is known.
#[derive(Clone)]
pub struct SourceField {
    pub f: ScalarField,
    /// Bounding box of the support.
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    pub exact: Option<ScalarField>,
    /// Overrides the sampling-based support detection.
    pub support_test: Option<CellPredicate>,
}

impl fmt::Debug for SourceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceField")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl SourceField {
    /// `f ≡ 0` on the given box, with exact solution `u ≡ 0`. Every cell
    /// meeting the box counts as a support cell.
    pub fn zero(lower: [f64; 3], upper: [f64; 3]) -> Self {
        SourceField {
            f: Arc::new(|_| 0.0),
            lower,
            upper,
            exact: Some(Arc::new(|_| 0.0)),
            support_test: Some(Arc::new(move |lo: [f64; 3], hi: [f64; 3]| overlaps(lo, hi, lower, upper))),
        }
    }

    fn meets(&self, lo: [f64; 3], hi: [f64; 3]) -> bool {
        if !overlaps(lo, hi, self.lower, self.upper) {
            return false;
        }
        if let Some(t) = &self.support_test {
            return t(lo, hi);
        }
        let s = SUPPORT_SAMPLES;
        for i in 0..s * s * s {
            let k = [i / (s * s), (i / s) % s, i % s];
            let p = std::array::from_fn(|a| lo[a] + (hi[a] - lo[a]) * (k[a] as f64 + 0.5) / s as f64);
            if (self.f)(p) != 0.0 {
                return true;
            }
        }
        false
    }
}

fn overlaps(lo: [f64; 3], hi: [f64; 3], a: [f64; 3], b: [f64; 3]) -> bool {
    (0..3).all(|i| lo[i] < b[i] && a[i] < hi[i])
}

/// Uniform grid of cells `h·(i + [0,1]³)`: the support cells and their
/// `∞`-norm neighbours.
#[derive(Clone, Debug)]
pub struct Grid {
    pub h: f64,
    /// Cell indices in lexicographic order.
    pub cells: Vec<[i64; 3]>,
    pub support: Vec<bool>,
    index: HashMap<[i64; 3], usize>,
}

impl Grid {
    /// Grid on the given support cells plus their neighbour layer.
    pub fn from_support_cells(h: f64, support_cells: &[[i64; 3]]) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Invalid(format!("mesh size must be positive, got {h}")));
        }
        if support_cells.is_empty() {
            return Err(Error::Invalid("source has empty support".into()));
        }
        let mut all: std::collections::BTreeMap<[i64; 3], bool> = std::collections::BTreeMap::new();
        for c in support_cells {
            for o in neighbourhood() {
                all.entry([c[0] + o[0], c[1] + o[1], c[2] + o[2]]).or_insert(false);
            }
        }
        for c in support_cells {
            all.insert(*c, true);
        }
        let cells: Vec<[i64; 3]> = all.keys().copied().collect();
        let support = all.values().copied().collect();
        let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Ok(Grid { h, cells, support, index })
    }

    /// Grid on exactly the given cells, without the neighbour layer.
    pub fn from_cells(h: f64, cells: &[([i64; 3], bool)]) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Invalid(format!("mesh size must be positive, got {h}")));
        }
        let all: std::collections::BTreeMap<[i64; 3], bool> = cells.iter().copied().collect();
        if all.len() != cells.len() {
            return Err(Error::Invalid("duplicate grid cell".into()));
        }
        let cells: Vec<[i64; 3]> = all.keys().copied().collect();
        let support = all.values().copied().collect();
        let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Ok(Grid { h, cells, support, index })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn find(&self, cell: [i64; 3]) -> Option<usize> {
        self.index.get(&cell).copied()
    }

    pub fn lower(&self, i: usize) -> [f64; 3] {
        self.cells[i].map(|v| v as f64 * self.h)
    }

    pub fn center(&self, i: usize) -> [f64; 3] {
        self.cells[i].map(|v| (v as f64 + 0.5) * self.h)
    }

    pub fn support_count(&self) -> usize {
        self.support.iter().filter(|s| **s).count()
    }
}

/// `{−1,0,1}³` in lexicographic order.
pub(crate) fn neighbourhood() -> impl Iterator<Item = [i64; 3]> {
    (0..27).map(|s| [s / 9 - 1, (s / 3) % 3 - 1, s % 3 - 1])
}

/// Grid of mesh size `h` covering the support of `src`.
pub fn build_grid(src: &SourceField, h: f64) -> Result<Grid> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Invalid(format!("mesh size must be positive, got {h}")));
    }
    let lo: [i64; 3] = std::array::from_fn(|a| (src.lower[a] / h).floor() as i64);
    let hi: [i64; 3] = std::array::from_fn(|a| (src.upper[a] / h).ceil() as i64);
    let mut cells = Vec::new();
    for i in lo[0]..hi[0] {
        for j in lo[1]..hi[1] {
            for k in lo[2]..hi[2] {
                let c = [i, j, k];
                let a = c.map(|v| v as f64 * h);
                let b = c.map(|v| (v + 1) as f64 * h);
                if src.meets(a, b) {
                    cells.push(c);
                }
            }
        }
    }
    Grid::from_support_cells(h, &cells)
}

/// Friedrichs' mollifier `u(x) = exp(−1/(1−|x|²))` on the unit ball with
/// `f = −Δu`.
pub fn mollifier_case() -> SourceField {
    SourceField {
        f: Arc::new(mollifier_rhs),
        lower: [-1.0; 3],
        upper: [1.0; 3],
        exact: Some(Arc::new(mollifier)),
        support_test: Some(Arc::new(|lo: [f64; 3], hi: [f64; 3]| {
            // squared distance from the origin to the box
            let d2: f64 = (0..3).map(|a| (lo[a].max(0.0) + (-hi[a]).max(0.0)).powi(2)).sum();
            d2 < 1.0
        })),
    }
}

pub fn mollifier(x: [f64; 3]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if r2 >= 1.0 {
        return 0.0;
    }
    (-1.0 / (1.0 - r2)).exp()
}

/// `−Δu = u·(6/s² + 8r²/s³ − 4r²/s⁴)` with `s = 1 − r²`.
pub fn mollifier_rhs(x: [f64; 3]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if r2 >= 1.0 {
        return 0.0;
    }
    let s = 1.0 - r2;
    let u = (-1.0 / s).exp();
    if u == 0.0 {
        return 0.0;
    }
    let s2 = s * s;
    u * (6.0 / s2 + 8.0 * r2 / (s2 * s) - 4.0 * r2 / (s2 * s2))
}
