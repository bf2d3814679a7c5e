//! Closed-form exponentials of the traceless real family `aσx + bσz`.
//!
//! With `q = √(a² + b²)`:
//!
//! ```text
//! e^{M}  = cosh(q) I + (sinh q / q) M
//! e^{iM} = cos(q)  I + i (sin q / q) M
//! ```
//!
//! and the trace of a product `e^{iI} e^{R} e^{iI'}` only involves pairwise
//! traces, because `tr(σ_a σ_b σ_c) = 0` for `a, b, c ∈ {x, z}`.

use num_complex::Complex64;

use crate::linalg::CMat2;
use crate::{Error, Result};

/// Dense 2×2 complex matrix in the basis `{|0⟩, |1⟩}`.
pub type Complex2x2 = CMat2;

/// Below this `|q|` the `sin q / q` family is evaluated by its series.
const SERIES_CUTOFF: f64 = 1e-4;

/// `cosh` overflows beyond this argument.
const MAX_HYPERBOLIC_ARG: f64 = 700.0;

/// The matrix `[[b, a], [a, −b]] = aσx + bσz`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TracelessXZ {
    /// Coefficient of `σx`.
    pub a: f64,
    /// Coefficient of `σz`.
    pub b: f64,
}

impl TracelessXZ {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn norm(&self) -> f64 {
        self.a.hypot(self.b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { a: self.a * s, b: self.b * s }
    }

    /// `tr(X Y) = 2(a_x a_y + b_x b_y)`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        2.0 * (self.a * other.a + self.b * other.b)
    }

    pub fn to_matrix(&self) -> Complex2x2 {
        let a = Complex64::new(self.a, 0.0);
        let b = Complex64::new(self.b, 0.0);
        Complex2x2::new(b, a, a, -b)
    }
}

/// `sin(q)/q`, equal to 1 at `q = 0`.
pub fn sinc(q: f64) -> f64 {
    if q.abs() < SERIES_CUTOFF {
        1.0 - q * q / 6.0
    } else {
        q.sin() / q
    }
}

/// `sinh(q)/q`, equal to 1 at `q = 0`.
pub fn sinhc(q: f64) -> f64 {
    if q.abs() < SERIES_CUTOFF {
        1.0 + q * q / 6.0
    } else {
        q.sinh() / q
    }
}

/// `tanh(q)/q`, equal to 1 at `q = 0`.
pub fn tanhc(q: f64) -> f64 {
    if q.abs() < SERIES_CUTOFF {
        1.0 - q * q / 3.0
    } else {
        q.tanh() / q
    }
}

fn check_hyperbolic(q: f64) -> Result<()> {
    if q.is_finite() && q <= MAX_HYPERBOLIC_ARG {
        Ok(())
    } else {
        Err(Error::Range(format!("cosh({q}) overflows")))
    }
}

/// `e^{M}` for real `M = aσx + bσz`.
pub fn exp_real(m: &TracelessXZ) -> Result<Complex2x2> {
    let q = m.norm();
    check_hyperbolic(q)?;
    let c = q.cosh();
    let s = sinhc(q);
    Ok(Complex2x2::new(
        Complex64::new(c + s * m.b, 0.0),
        Complex64::new(s * m.a, 0.0),
        Complex64::new(s * m.a, 0.0),
        Complex64::new(c - s * m.b, 0.0),
    ))
}

/// `e^{iM}` for real `M = aσx + bσz`; always unitary.
pub fn exp_imag(m: &TracelessXZ) -> Complex2x2 {
    let q = m.norm();
    let c = q.cos();
    let s = sinc(q);
    Complex2x2::new(
        Complex64::new(c, s * m.b),
        Complex64::new(0.0, s * m.a),
        Complex64::new(0.0, s * m.a),
        Complex64::new(c, -s * m.b),
    )
}

/// `tr[e^{i I₁} e^{R} e^{i I₂}]` in closed form.
pub fn trace_triple(i1: &TracelessXZ, r: &TracelessXZ, i2: &TracelessXZ) -> Result<Complex64> {
    let x = i1.norm();
    let y = r.norm();
    let z = i2.norm();
    check_hyperbolic(y)?;

    let (cx, sx) = (x.cos(), sinc(x));
    let (cz, sz) = (z.cos(), sinc(z));
    let ty = tanhc(y);

    let re = 2.0 * cx * cz - sx * sz * i1.trace_product(i2);
    let im = cz * sx * ty * i1.trace_product(r) + cx * ty * sz * r.trace_product(i2);
    Ok(Complex64::new(re, im) * y.cosh())
}

/// Normalised single-spin Gibbs state `e^{(w Sx + h Sz)/T} / Z` with `S = σ/2`.
///
/// Evaluated as `(I + tanh(q) M/q) / 2` with `M = (wσx + hσz)/2T`, which
/// never overflows.
pub fn single_spin_gibbs(w: f64, h: f64, temperature: f64) -> Result<Complex2x2> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidParams(format!("temperature must be > 0, got {temperature}")));
    }
    let m = TracelessXZ::new(w / (2.0 * temperature), h / (2.0 * temperature));
    let q = m.norm();
    // tanh(q)/q, with the q→∞ branch kept finite.
    let t = if q.is_infinite() { 0.0 } else { tanhc(q) };
    let (a, b) = if q.is_infinite() {
        let n = w.hypot(h);
        (w / n, h / n)
    } else {
        (t * m.a, t * m.b)
    };
    Ok(Complex2x2::new(
        Complex64::new(0.5 * (1.0 + b), 0.0),
        Complex64::new(0.5 * a, 0.0),
        Complex64::new(0.5 * a, 0.0),
        Complex64::new(0.5 * (1.0 - b), 0.0),
    ))
}
