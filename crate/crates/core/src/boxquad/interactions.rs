//! Galerkin interaction matrices of the Newton kernel between Legendre bases
//! on neighbouring grid cells.
//!
//! All monomial double integrals `∫_{h(o+[0,1]³)} ∫_{h[0,1]³} x^λ y^μ / |x−y|`
//! needed for a set of offsets `o` are obtained from one antiderivative per
//! `(λ, μ)`. The x-integrations are shared between exponents with a common
//! prefix, and the corner sums are regrouped by the difference vector
//! `x − y`: the exact rational weights of every transcendental factor are
//! aggregated first, so each factor is evaluated once per difference.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid_eval::eval_on_grid;
use super::legendre::{graded_triples, legendre_basis, LegendreBasis};
use crate::antideriv3d::{Antiderivative3, EvalConfig, Geometry, Integrator3, Term3, Var3};
use crate::error::{Error, Result};
use crate::exactmath::{format_scientific, BigFloat, MultiIndex, Polynomial, Precision, Rational, Real};

pub const FORMAT_VERSION: u32 = 1;
const KERNEL: &str = "newton3d";
const CONSTANT: &str = "1/(4*pi)";
const BASIS: &str = "shifted-legendre-orthonormal-total-degree";

/// Raw-kernel monomial integrals, indexed by `(h, λ, μ, offset)`.
#[derive(Clone, Debug)]
pub struct MonomialIntegrals {
    pub lambdas: Vec<[u16; 3]>,
    pub mus: Vec<[u16; 3]>,
    pub offsets: Vec<[i64; 3]>,
    pub hs: Vec<Rational>,
    values: Vec<BigFloat>,
}

impl MonomialIntegrals {
    fn index(&self, h: usize, l: usize, m: usize, o: usize) -> usize {
        ((h * self.lambdas.len() + l) * self.mus.len() + m) * self.offsets.len() + o
    }

    /// `∫_{h(o+[0,1]³)} ∫_{h[0,1]³} x^λ y^μ / |x−y| dy dx` for
    /// `λ = lambdas[l]`, `μ = mus[m]`, `o = offsets[o]`, `h = hs[h]`.
    pub fn get(&self, h: usize, l: usize, m: usize, o: usize) -> &BigFloat {
        &self.values[self.index(h, l, m, o)]
    }
}

type FactorTable = HashMap<[i64; 3], [Option<BigFloat>; 8]>;

/// Transcendental factors at `x − y = h·D` for every difference `D` that
/// occurs between corners of the origin cell and the offset cells.
fn factor_table(offsets: &[[i64; 3]], h: &Rational, cfg: &EvalConfig) -> FactorTable {
    let mut table = FactorTable::new();
    for o in offsets {
        for s in 0..27 {
            let d = [o[0] + s / 9 - 1, o[1] + (s / 3) % 3 - 1, o[2] + s % 3 - 1];
            table.entry(d).or_insert_with(|| {
                let geo = Geometry::<Rational, BigFloat>::new(d.map(|v| h * &Rational::from_integer(v)), cfg.precision);
                Term3::ALL.map(|t| geo.factor(t, cfg).ok())
            });
        }
    }
    table
}

struct Layout {
    /// Smallest x-grid coordinate per axis, in cell units.
    x_min: [i64; 3],
    values: Vec<[Vec<Rational>; 6]>,
}

impl Layout {
    fn new(offsets: &[[i64; 3]], hs: &[Rational]) -> Self {
        let x_min: [i64; 3] = std::array::from_fn(|a| offsets.iter().map(|o| o[a]).min().unwrap_or(0));
        let x_max: [i64; 3] = std::array::from_fn(|a| offsets.iter().map(|o| o[a]).max().unwrap_or(0) + 1);
        let values = hs
            .iter()
            .map(|h| {
                std::array::from_fn(|v| {
                    if v < 3 {
                        (x_min[v]..=x_max[v]).map(|i| h * &Rational::from_integer(i)).collect()
                    } else {
                        vec![Rational::from_integer(0), h.clone()]
                    }
                })
            })
            .collect();
        Layout { x_min, values }
    }

    fn len(&self, v: usize) -> usize {
        self.values[0][v].len()
    }

    /// Flat grid index of corner `(x, y)` given in cell units.
    fn flat(&self, x: [i64; 3], y: [i64; 3]) -> usize {
        let mut idx = 0;
        for a in 0..3 {
            idx = idx * self.len(a) + (x[a] - self.x_min[a]) as usize;
        }
        for a in 0..3 {
            idx = idx * 2 + y[a] as usize;
        }
        idx
    }
}

/// Grid substitution order: y first, so the shallow levels of the
/// substitution tree stay small.
const SUBSTITUTION_ORDER: [usize; 6] = [3, 4, 5, 0, 1, 2];

fn definite_values(
    f: &Antiderivative3<Rational>,
    layout: &Layout,
    hi: usize,
    offsets: &[[i64; 3]],
    factors: &FactorTable,
    cfg: &EvalConfig,
) -> Result<Vec<BigFloat>> {
    let tables: Vec<Option<Vec<Rational>>> = f
        .iter()
        .map(|(_, p)| (!p.is_zero()).then(|| eval_on_grid(p, &layout.values[hi], &SUBSTITUTION_ORDER)))
        .collect();
    let mut out = Vec::with_capacity(offsets.len());
    for o in offsets {
        let mut w: BTreeMap<[i64; 3], [Rational; 8]> = BTreeMap::new();
        for s in 0..64usize {
            let cx = [(s >> 5) & 1, (s >> 4) & 1, (s >> 3) & 1].map(|b| b as i64);
            let cy = [(s >> 2) & 1, (s >> 1) & 1, s & 1].map(|b| b as i64);
            let lower = 6 - (cx.iter().sum::<i64>() + cy.iter().sum::<i64>());
            let x = [o[0] + cx[0], o[1] + cx[1], o[2] + cx[2]];
            let d = [x[0] - cy[0], x[1] - cy[1], x[2] - cy[2]];
            let idx = layout.flat(x, cy);
            let entry = w.entry(d).or_default();
            for (g, t) in tables.iter().enumerate() {
                if let Some(t) = t {
                    if lower % 2 == 1 {
                        entry[g] -= &t[idx];
                    } else {
                        entry[g] += &t[idx];
                    }
                }
            }
        }
        let mut terms = Vec::new();
        for (d, weights) in &w {
            let fac = &factors[d];
            for (g, wg) in weights.iter().enumerate() {
                if wg.is_zero() {
                    continue;
                }
                let Some(v) = &fac[g] else {
                    return Err(Error::SingularTerm { term: Term3::ALL[g].label() });
                };
                terms.push(BigFloat::from_rational(wg, cfg.precision) * v);
            }
        }
        out.push(<BigFloat as Real>::sum(&terms, cfg.precision));
    }
    Ok(out)
}

/// Monomial integrals for all combinations of `lambdas × mus × offsets × hs`.
pub fn monomial_integrals(
    lambdas: &[[u16; 3]],
    mus: &[[u16; 3]],
    offsets: &[[i64; 3]],
    hs: &[Rational],
    cfg: &EvalConfig,
) -> Result<MonomialIntegrals> {
    let layout = Layout::new(offsets, hs);
    let factors: Vec<FactorTable> = hs.iter().map(|h| factor_table(offsets, h, cfg)).collect();

    // per μ: values[h][λ][o]
    let per_mu: Vec<Result<Vec<Vec<Vec<BigFloat>>>>> = mus
        .par_iter()
        .map_init(Integrator3::<Rational>::new, |integ, mu| {
            let kernel = Antiderivative3::kernel(Polynomial::monomial(
                Rational::from_integer(1),
                MultiIndex::from_halves(&[0; 3], mu),
            ));
            let fy = integ.integrate_all(&kernel, &[Var3::Y1, Var3::Y2, Var3::Y3]);
            let mut a1: HashMap<u16, Antiderivative3<Rational>> = HashMap::new();
            let mut a2: HashMap<(u16, u16), Antiderivative3<Rational>> = HashMap::new();
            let mut out = vec![Vec::with_capacity(lambdas.len()); hs.len()];
            for lam in lambdas {
                if !a2.contains_key(&(lam[0], lam[1])) {
                    let first = a1
                        .entry(lam[0])
                        .or_insert_with(|| integ.integrate(&times_power(&fy, 0, lam[0]), Var3::X1))
                        .clone();
                    let second = integ.integrate(&times_power(&first, 1, lam[1]), Var3::X2);
                    a2.insert((lam[0], lam[1]), second);
                }
                let f = integ.integrate(&times_power(&a2[&(lam[0], lam[1])], 2, lam[2]), Var3::X3);
                for (hi, slot) in out.iter_mut().enumerate() {
                    slot.push(definite_values(&f, &layout, hi, offsets, &factors[hi], cfg)?);
                }
            }
            Ok(out)
        })
        .collect();

    let mut values = vec![BigFloat::new(cfg.precision.bits()); hs.len() * lambdas.len() * mus.len() * offsets.len()];
    let result = MonomialIntegrals {
        lambdas: lambdas.to_vec(),
        mus: mus.to_vec(),
        offsets: offsets.to_vec(),
        hs: hs.to_vec(),
        values: Vec::new(),
    };
    for (m, block) in per_mu.into_iter().enumerate() {
        for (hi, per_lambda) in block?.into_iter().enumerate() {
            for (l, per_offset) in per_lambda.into_iter().enumerate() {
                for (o, v) in per_offset.into_iter().enumerate() {
                    values[result.index(hi, l, m, o)] = v;
                }
            }
        }
    }
    Ok(MonomialIntegrals { values, ..result })
}

fn times_power(f: &Antiderivative3<Rational>, var: usize, k: u16) -> Antiderivative3<Rational> {
    if k == 0 {
        return f.clone();
    }
    let one = Rational::from_integer(1);
    f.map_weights(|p| p.mul_monomial(&one, MultiIndex::ZERO.with(var, k)))
}

/// Dense matrix for one cell offset, row-major, rows indexed by the
/// destination basis and columns by the source basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OffsetMatrix {
    pub offset: [i64; 3],
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigFloat>,
}

impl OffsetMatrix {
    pub fn get(&self, row: usize, col: usize) -> &BigFloat {
        &self.entries[row * self.cols + col]
    }

    /// Entries rounded to `f64` and multiplied by `scale`.
    pub fn to_f64_scaled(&self, scale: f64) -> Vec<f64> {
        self.entries.iter().map(|e| e.to_f64() * scale).collect()
    }
}

/// `A_lk(o) = (1/4π) ∫_{Q_0} ∫_{Q_o} b_k(y) b_l(x) / |x−y| dy dx`, where
/// `Q_o = h(o + [0,1]³)`, `b_k` runs over the source basis on `Q_o` and
/// `b_l` over the destination basis on `Q_0`, both orthonormal in `L²` of
/// their cell.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionMatrixSet {
    pub n_src: usize,
    pub n_dst: usize,
    pub h: Rational,
    pub precision: Precision,
    pub matrices: Vec<OffsetMatrix>,
}

impl InteractionMatrixSet {
    pub fn matrix(&self, offset: [i64; 3]) -> Option<&OffsetMatrix> {
        self.matrices.iter().find(|m| m.offset == offset)
    }

    pub fn to_json(&self) -> String {
        let digits = self.precision.decimal_digits() as usize;
        let doc = MatrixFile {
            version: FORMAT_VERSION,
            kernel: KERNEL.into(),
            constant: CONSTANT.into(),
            h: rational_text(&self.h),
            n_src: self.n_src,
            n_dst: self.n_dst,
            basis: BASIS.into(),
            precision_digits: self.precision.decimal_digits(),
            offsets: self
                .matrices
                .iter()
                .map(|m| OffsetEntry {
                    offset: m.offset,
                    rows: m.rows,
                    cols: m.cols,
                    entries: m.entries.iter().map(|e| format_scientific(e, digits)).collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MatrixFile = serde_json::from_str(text)?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::Invalid(format!("unsupported matrix file version {}", doc.version)));
        }
        if doc.kernel != KERNEL || doc.basis != BASIS || doc.constant != CONSTANT {
            return Err(Error::Invalid("matrix file describes a different kernel or basis".into()));
        }
        if doc.precision_digits < Precision::MIN_DIGITS {
            return Err(Error::Invalid(format!("precision_digits {} too small", doc.precision_digits)));
        }
        let precision = Precision::digits(doc.precision_digits);
        let h: Rational = doc.h.parse()?;
        let (rows, cols) = (super::legendre::basis_dimension(doc.n_dst), super::legendre::basis_dimension(doc.n_src));
        let mut matrices = Vec::with_capacity(doc.offsets.len());
        for e in doc.offsets {
            if e.rows != rows || e.cols != cols || e.entries.len() != rows * cols {
                return Err(Error::Invalid(format!("matrix for offset {:?} has the wrong shape", e.offset)));
            }
            let entries = e
                .entries
                .iter()
                .map(|s| {
                    BigFloat::parse(s)
                        .map(|v| BigFloat::with_val(precision.bits(), v))
                        .map_err(|_| Error::Invalid(format!("bad matrix entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            matrices.push(OffsetMatrix { offset: e.offset, rows, cols, entries });
        }
        Ok(InteractionMatrixSet { n_src: doc.n_src, n_dst: doc.n_dst, h, precision, matrices })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn rational_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    version: u32,
    kernel: String,
    constant: String,
    h: String,
    n_src: usize,
    n_dst: usize,
    basis: String,
    precision_digits: u32,
    offsets: Vec<OffsetEntry>,
}

#[derive(Serialize, Deserialize)]
struct OffsetEntry {
    offset: [i64; 3],
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

/// The 27 offsets of `{−1,0,1}³` in lexicographic order.
pub fn neighbour_offsets() -> Vec<[i64; 3]> {
    (0..27).map(|s| [s / 9 - 1, (s / 3) % 3 - 1, s % 3 - 1]).collect()
}

/// Coefficients of `b̂(x/h − o)` as a polynomial in `x`.
fn shifted_cell_polynomial(b: &Polynomial<Rational, 3>, h: &Rational, o: [i64; 3]) -> Polynomial<Rational, 3> {
    let inv_h = Rational::from_integer(1) / h.clone();
    let images: [Polynomial<Rational, 3>; 3] = std::array::from_fn(|a| {
        let mut p = Polynomial::monomial(inv_h.clone(), MultiIndex::unit(a));
        p.add_term(MultiIndex::ZERO, &Rational::from_integer(-o[a]));
        p
    });
    b.compose(&images)
}

fn coefficient_rows(
    basis: &LegendreBasis,
    exponents: &[[u16; 3]],
    h: &Rational,
    o: [i64; 3],
    prec: Precision,
) -> Vec<Vec<BigFloat>> {
    basis
        .functions
        .iter()
        .map(|f| {
            let p = shifted_cell_polynomial(&f.poly, h, o);
            exponents
                .iter()
                .map(|e| match p.coeff(&MultiIndex(*e)) {
                    Some(c) => BigFloat::from_rational(c, prec),
                    None => BigFloat::new(prec.bits()),
                })
                .collect()
        })
        .collect()
}

/// Interaction matrices for each cell size in `hs` and each offset, at the
/// working precision of `cfg`. The result has one set per `h`.
pub fn pair_matrices(
    n_src: usize,
    n_dst: usize,
    offsets: &[[i64; 3]],
    hs: &[Rational],
    cfg: &EvalConfig,
) -> Result<Vec<InteractionMatrixSet>> {
    if n_src == 0 || n_dst == 0 {
        return Err(Error::Invalid("basis orders must be at least 1".into()));
    }
    let prec = cfg.precision;
    let src = legendre_basis(n_src);
    let dst = legendre_basis(n_dst);
    let lambdas = graded_triples(n_dst as u16 - 1);
    let mus = graded_triples(n_src as u16 - 1);
    // x lives in the target cell Q_0 and y in Q_o; translating by −o puts y
    // in the origin cell, as the monomial table expects.
    let shifted: Vec<[i64; 3]> = offsets.iter().map(|o| o.map(|v| -v)).collect();
    let table = monomial_integrals(&lambdas, &mus, &shifted, hs, cfg)?;

    let four_pi = BigFloat::pi(prec) * 4u32;
    let mut sets = Vec::with_capacity(hs.len());
    for (hi, h) in hs.iter().enumerate() {
        let h3 = h.pow(3);
        let b = coefficient_rows(&src, &mus, h, [0; 3], prec);
        let norms: Vec<Vec<BigFloat>> = dst
            .functions
            .iter()
            .map(|fl| {
                src.functions
                    .iter()
                    .map(|fk| {
                        let n = BigFloat::with_val(prec.bits(), fl.norm_squared * fk.norm_squared).sqrt();
                        n / BigFloat::from_rational(&h3, prec) / &four_pi
                    })
                    .collect()
            })
            .collect();
        let mut matrices = Vec::with_capacity(offsets.len());
        for (oi, o) in shifted.iter().enumerate() {
            let a = coefficient_rows(&dst, &lambdas, h, *o, prec);
            // t[λ][k] = Σ_μ b[k][μ] I(λ, μ)
            let t: Vec<Vec<BigFloat>> = (0..lambdas.len())
                .map(|l| {
                    (0..src.dim())
                        .map(|k| {
                            let terms: Vec<BigFloat> = (0..mus.len())
                                .filter(|&m| !b[k][m].is_zero())
                                .map(|m| BigFloat::with_val(prec.bits(), &b[k][m] * table.get(hi, l, m, oi)))
                                .collect();
                            <BigFloat as Real>::sum(&terms, prec)
                        })
                        .collect()
                })
                .collect();
            let mut entries = Vec::with_capacity(dst.dim() * src.dim());
            for (l, row) in a.iter().enumerate() {
                for k in 0..src.dim() {
                    let terms: Vec<BigFloat> = (0..lambdas.len())
                        .filter(|&lam| !row[lam].is_zero())
                        .map(|lam| BigFloat::with_val(prec.bits(), &row[lam] * &t[lam][k]))
                        .collect();
                    entries.push(<BigFloat as Real>::sum(&terms, prec) * &norms[l][k]);
                }
            }
            matrices.push(OffsetMatrix { offset: offsets[oi], rows: dst.dim(), cols: src.dim(), entries });
        }
        sets.push(InteractionMatrixSet { n_src, n_dst, h: h.clone(), precision: prec, matrices });
    }
    Ok(sets)
}

/// The 27 neighbour matrices at `h = 1`.
pub fn interaction_matrices(n_src: usize, n_dst: usize, cfg: &EvalConfig) -> Result<InteractionMatrixSet> {
    let mut sets = pair_matrices(n_src, n_dst, &neighbour_offsets(), &[Rational::from_integer(1)], cfg)?;
    Ok(sets.remove(0))
}
