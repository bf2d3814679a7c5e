//! Wootters concurrence of two-qubit states.
//!
//! `C = max(λ₁ − λ₂ − λ₃ − λ₄, 0)` where `λᵢ` are the square roots of the
//! eigenvalues of `R = ρ ρ̃`, in decreasing order. `R` is not Hermitian; the
//! `λᵢ` are computed as the singular values of `√ρ √ρ̃`, which avoids taking
//! square roots of roundoff-sized eigenvalues.

use num_complex::Complex64;

use crate::dephasing::DephasingCoeffs;
use crate::linalg::{hermitian_eigen, sigma_yy, spectral_map};
use crate::two_qubit::{evolve_reduced, PureState2Q, TwoQubitDensity};
use crate::{Error, Result};

/// Eigenvalues of `ρ` below this are an error rather than roundoff.
const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;
/// Eigenvalues of `ρ` below this (relative to its trace) are set to zero.
const CLAMP_REL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    pub c: f64,
    /// Square-rooted eigenvalues of `ρρ̃`, sorted in decreasing order.
    pub lambdas: [f64; 4],
}

/// Wootters concurrence.
pub fn concurrence(rho: &TwoQubitDensity) -> Result<ConcurrenceValue> {
    rho.validate()?;
    let m = rho.matrix();
    let eig = hermitian_eigen(m);
    if let Some(&neg) = eig.values.iter().find(|&&x| x < -NEGATIVE_EIGENVALUE_TOL) {
        return Err(Error::NotADensityMatrix(format!("negative eigenvalue {neg:e}")));
    }
    let floor = CLAMP_REL * m.trace().re;
    let sqrt_rho = spectral_map(&eig, |x| if x < floor { 0.0 } else { x.sqrt() });
    // √ρ̃ = Y √ρ* Y since Y = σy⊗σy is real and squares to one.
    let y = sigma_yy();
    let sqrt_flipped = y * sqrt_rho.conjugate() * y;

    let mut lambdas: [f64; 4] = (sqrt_rho * sqrt_flipped).singular_values().into();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceValue { c, lambdas })
}

/// Concurrence of the decoherence-free family `β|01⟩ + γ|10⟩`: `2|β||γ|` at all times.
pub fn case1_concurrence(beta: Complex64, gamma: Complex64) -> f64 {
    2.0 * beta.norm() * gamma.norm()
}

/// Concurrence of `α|00⟩ + δ|11⟩` under dephasing: `2|α||δ||B(t)|`.
pub fn case2_concurrence(alpha: Complex64, delta: Complex64, coeffs: &DephasingCoeffs) -> f64 {
    2.0 * alpha.norm() * delta.norm() * coeffs.b.norm()
}

/// Concurrence of the uniform product state `(|0⟩+|1⟩)(|0⟩+|1⟩)/2`, obtained
/// numerically through the full reduced-state pipeline.
pub fn case4_concurrence(t: f64, xi0: f64, coeffs: &DephasingCoeffs) -> Result<f64> {
    let state = PureState2Q::from_real(0.5, 0.5, 0.5, 0.5)?;
    Ok(concurrence(&evolve_reduced(&state, t, xi0, coeffs)?)?.c)
}
