//! Complex solid harmonics.
//!
//! For `m ≥ 0`, with `P̃ₙᵐ` the associated Legendre function without the
//! Condon–Shortley phase,
//!
//! ```text
//! Υₙᵐ(v) = rⁿ P̃ₙᵐ(cos θ) e^{imφ} / (n+m)!
//! Θₙᵐ(v) = (n−m)! P̃ₙᵐ(cos θ) e^{imφ} / r^{n+1}
//! ```
//!
//! and `Xₙ⁻ᵐ = (−1)ᵐ conj(Xₙᵐ)` for both. With this normalisation
//!
//! ```text
//! 1/|x−y|   = Σ conj(Υₙᵐ(y)) Θₙᵐ(x)                 (|y| < |x|)
//! Υₙᵐ(a+b)  = Σ_{k,l} Υₖˡ(a) Υₙ₋ₖᵐ⁻ˡ(b)
//! Θₙᵐ(a−b)  = Σ_{k,l} conj(Υₖˡ(b)) Θₙ₊ₖᵐ⁺ˡ(a)        (|b| < |a|)
//! ```
//!
//! which is all the translation operators need.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Harmonics of degree `< order`, stored at `n² + n + m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolidHarmonics {
    pub order: usize,
    pub values: Vec<Complex64>,
}

#[inline]
pub fn harmonic_index(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

impl SolidHarmonics {
    #[inline]
    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        self.values[harmonic_index(n, m)]
    }
}

fn fill_negative(order: usize, v: &mut [Complex64]) {
    for n in 0..order {
        for m in 1..=n {
            let c = v[n * n + n + m].conj();
            v[n * n + n - m] = if m % 2 == 0 { c } else { -c };
        }
    }
}

/// `Υₙᵐ(v)` for `n < order`.
pub fn regular_harmonics(v: [f64; 3], order: usize) -> SolidHarmonics {
    let mut out = vec![Complex64::new(0.0, 0.0); order * order];
    if order == 0 {
        return SolidHarmonics { order, values: out };
    }
    let [x, y, z] = v;
    let r2 = x * x + y * y + z * z;
    let w = Complex64::new(x, y);
    out[0] = Complex64::new(1.0, 0.0);
    for m in 0..order {
        let mm = m * m + 2 * m;
        if m > 0 {
            let prev = out[(m - 1) * (m - 1) + 2 * (m - 1)];
            out[mm] = prev * w / (2 * m) as f64;
        }
        if m + 1 < order {
            let n = m + 1;
            out[n * n + n + m] = out[mm] * z;
        }
        for n in m + 2..order {
            let a = out[(n - 1) * (n - 1) + (n - 1) + m];
            let b = out[(n - 2) * (n - 2) + (n - 2) + m];
            out[n * n + n + m] = (a * ((2 * n - 1) as f64 * z) - b * r2) / ((n - m) * (n + m)) as f64;
        }
    }
    fill_negative(order, &mut out);
    SolidHarmonics { order, values: out }
}

/// `Θₙᵐ(v)` for `n < order`; undefined at the origin.
pub fn singular_harmonics(v: [f64; 3], order: usize) -> Result<SolidHarmonics> {
    let [x, y, z] = v;
    let r2 = x * x + y * y + z * z;
    if r2 == 0.0 {
        return Err(Error::Invalid("singular harmonics at the origin".into()));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); order * order];
    if order == 0 {
        return Ok(SolidHarmonics { order, values: out });
    }
    let inv = 1.0 / r2;
    let w = Complex64::new(x, y);
    out[0] = Complex64::new(r2.sqrt().recip(), 0.0);
    for m in 0..order {
        let mm = m * m + 2 * m;
        if m > 0 {
            let prev = out[(m - 1) * (m - 1) + 2 * (m - 1)];
            out[mm] = prev * w * ((2 * m - 1) as f64 * inv);
        }
        if m + 1 < order {
            let n = m + 1;
            out[n * n + n + m] = out[mm] * ((2 * m + 1) as f64 * z * inv);
        }
        for n in m + 2..order {
            let a = out[(n - 1) * (n - 1) + (n - 1) + m];
            let b = out[(n - 2) * (n - 2) + (n - 2) + m];
            out[n * n + n + m] = a * ((2 * n - 1) as f64 * z * inv) - b * (((n + m - 1) * (n - m - 1)) as f64 * inv);
        }
    }
    fill_negative(order, &mut out);
    Ok(SolidHarmonics { order, values: out })
}
