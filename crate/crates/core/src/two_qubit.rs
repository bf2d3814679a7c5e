//! Reduced two-qubit density matrix under collective pure dephasing.
//!
//! For the initial state `|Ψ⟩ = α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩` the reduced
//! state at time `t` is `ρ_ij(t) = ψ_i ψ_j* F_ij(t)` with the upper triangle
//!
//! ```text
//!        |00⟩        |01⟩          |10⟩          |11⟩
//! |00⟩   1           A e^{+iξt/2}  A e^{+iξt/2}  B
//! |01⟩               1             1             A e^{−iξt/2}
//! |10⟩                             1             A e^{−iξt/2}
//! |11⟩                                           1
//! ```
//!
//! and `F_ji = conj(F_ij)`. Populations never change.

use num_complex::Complex64;

use crate::dephasing::DephasingCoeffs;
use crate::linalg::{self, CMat4};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Pure two-qubit state in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2Q {
    pub amps: [Complex64; 4],
}

impl PureState2Q {
    /// Requires `|α|² + |β|² + |γ|² + |δ|² = 1` within `1e-12`.
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let s = Self { amps: [alpha, beta, gamma, delta] };
        s.validate()?;
        Ok(s)
    }

    /// Rescales arbitrary (non-zero) amplitudes to unit norm.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState(format!("cannot normalise amplitudes with norm {norm}")));
        }
        let scale = Complex64::new(1.0 / norm, 0.0);
        Ok(Self { amps: amps.map(|z| z * scale) })
    }

    pub fn from_real(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self::new(c(alpha), c(beta), c(gamma), c(delta))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm is {n}, expected 1")));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn alpha(&self) -> Complex64 {
        self.amps[0]
    }
    pub fn beta(&self) -> Complex64 {
        self.amps[1]
    }
    pub fn gamma(&self) -> Complex64 {
        self.amps[2]
    }
    pub fn delta(&self) -> Complex64 {
        self.amps[3]
    }

    /// `|Ψ⟩⟨Ψ|`.
    pub fn projector(&self) -> TwoQubitDensity {
        TwoQubitDensity(CMat4::from_fn(|i, j| self.amps[i] * self.amps[j].conj()))
    }
}

/// 4×4 two-qubit density matrix in the standard basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity(pub CMat4);

impl TwoQubitDensity {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(m: CMat4) -> Result<Self> {
        let rho = Self(m);
        rho.validate()?;
        Ok(rho)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.0;
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NotADensityMatrix("non-finite entry".into()));
        }
        let gap = linalg::hermiticity_gap(m);
        if gap > HERMITIAN_TOL {
            return Err(Error::NotADensityMatrix(format!("Hermiticity violated by {gap:e}")));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::NotADensityMatrix(format!("trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotADensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigen(&self.0).values.min()
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.0[(i, i)].re)
    }
}

/// Dephasing multipliers `F_ij` of the reduced matrix.
fn dephasing_factors(t: f64, xi0: f64, coeffs: &DephasingCoeffs) -> CMat4 {
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::from_polar(1.0, 0.5 * xi0 * t);
    // |01⟩ and |10⟩ coherences with |00⟩, |11⟩ share a single coefficient.
    let a_up = coeffs.a * half;
    let a_down = coeffs.a * half.conj();
    let upper = [
        [one, a_up, a_up, coeffs.b],
        [one, one, one, a_down],
        [one, one, one, a_down],
        [one, one, one, one],
    ];
    CMat4::from_fn(|i, j| if i <= j { upper[i][j] } else { upper[j][i].conj() })
}

/// Reduced density matrix at time `t`.
pub fn evolve_reduced(
    state: &PureState2Q,
    t: f64,
    xi0: f64,
    coeffs: &DephasingCoeffs,
) -> Result<TwoQubitDensity> {
    state.validate()?;
    let f = dephasing_factors(t, xi0, coeffs);
    let psi = &state.amps;
    Ok(TwoQubitDensity(CMat4::from_fn(|i, j| psi[i] * psi[j].conj() * f[(i, j)])))
}

/// Spin-flipped state `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &TwoQubitDensity) -> TwoQubitDensity {
    let y = linalg::sigma_yy();
    TwoQubitDensity(y * rho.0.conjugate() * y)
}

/// `R = ρ ρ̃`.
pub fn r_matrix(rho: &TwoQubitDensity) -> CMat4 {
    rho.0 * spin_flip(rho).0
}

/// `R(t)` written out entry by entry from the amplitudes and `A`, `B`.
///
/// Independent of the matrix products in [`r_matrix`]; the two must agree
/// for any state produced by [`evolve_reduced`].
pub fn r_matrix_closed_form(state: &PureState2Q, t: f64, xi0: f64, coeffs: &DephasingCoeffs) -> CMat4 {
    // The expressions below are for the complex-conjugated matrix; R follows by
    // conjugating every entry at the end.
    let [a, b, g, d] = state.amps;
    let c = |z: Complex64| z.conj();
    let (ca, cb, cg, cd) = (c(a), c(b), c(g), c(d));
    let (aa, bb, gg, dd) = (a.norm_sqr(), b.norm_sqr(), g.norm_sqr(), d.norm_sqr());
    let big_a = coeffs.a;
    let big_b = coeffs.b;
    let (ca_, cb_) = (c(big_a), c(big_b));
    let abs_a2 = big_a.norm_sqr();
    let abs_b2 = big_b.norm_sqr();
    let e = Complex64::from_polar(1.0, xi0 * t);
    let h = Complex64::from_polar(1.0, 0.5 * xi0 * t);
    let r = |x: f64| Complex64::new(x, 0.0);
    let two = r(2.0);

    let u = ca_ + big_a * cb_;
    let v = big_a + ca_ * big_b;

    let mut p = CMat4::zeros();
    p[(0, 0)] = r(aa * dd * (1.0 + abs_b2)) - two * ca * b * g * cd * abs_a2 / e;
    p[(0, 1)] = two * ca * b * gg * ca_ / h - r(aa) * cg * d * u * h;
    p[(1, 0)] = a * cb * dd * v * h - two * bb * g * cd * big_a / h;
    p[(1, 1)] = -two * a * cb * cg * d * abs_a2 * e + r(2.0 * bb * gg);

    p[(0, 2)] = two * ca * bb * g * ca_ / h - r(aa) * cb * d * u * h;
    p[(0, 3)] = two * ca * aa * d * cb_ - two * ca * ca * b * g * ca_ * ca_ / e;
    p[(1, 2)] = -two * a * cb * cb * d * abs_a2 * e + two * cb * bb * g;
    p[(1, 3)] = r(aa) * cb * d * u * h - two * ca * bb * g * ca_ / h;

    p[(2, 0)] = a * cg * dd * v * h - two * b * gg * cd * big_a / h;
    p[(2, 1)] = -two * a * cg * cg * d * abs_a2 * e + two * b * cg * gg;
    p[(3, 0)] = two * a * cd * dd * big_b - two * b * g * cd * cd * big_a * big_a / e;
    p[(3, 1)] = two * b * gg * cd * big_a / h - a * cg * dd * v * h;

    p[(2, 2)] = -two * a * cb * cg * d * abs_a2 * e + r(2.0 * bb * gg);
    p[(2, 3)] = r(aa) * cg * d * u * h - two * ca * b * gg * ca_ / h;
    p[(3, 2)] = two * bb * g * cd * big_a / h - a * cb * dd * v * h;
    p[(3, 3)] = r(aa * dd * (1.0 + abs_b2)) - two * ca * b * g * cd * abs_a2 / e;

    p.conjugate()
}

/// `2|αδ − βγ|`, the concurrence of a pure state.
pub fn pure_concurrence(state: &PureState2Q) -> Result<f64> {
    state.validate()?;
    Ok(2.0 * (state.alpha() * state.delta() - state.beta() * state.gamma()).norm())
}
