//! Coherence factor `r(t)` and two-qubit dephasing coefficients `A(t)`, `B(t)`.
//!
//! At finite bath size `N` every bath spin contributes the same factor
//!
//! ```text
//! f(φ) = cos φ + i (Θ/J) sin φ,     φ = t m J J₀ / (Θ √N)
//! ```
//!
//! and `A(t) = f(φ)^N`, `B(t) = A(2t)`. The power is taken in the log domain,
//! `exp(N log f)`, with `log|f|` evaluated through `ln_1p` so that `N` up to
//! `10⁸` and beyond keeps full relative precision. For large `N` the
//! magnitude tends to the Gaussian `exp[−J₀² κ t² / 2]` with
//! `κ = m² (J²/Θ² − 1)`.

use num_complex::Complex64;

use crate::mean_field::{BathParams, OrderSolution};
use crate::{Error, Result};

/// System-side couplings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SystemParams {
    /// System–bath exchange coupling `J₀`.
    pub j0: f64,
    /// Field on a single qubit, `H_s = −μ₀ S^z`.
    pub mu0: f64,
    /// Qubit–qubit coupling, `H_s = −ξ₀ S₁^z S₂^z`.
    pub xi0: f64,
}

impl SystemParams {
    pub fn new(j0: f64, mu0: f64, xi0: f64) -> Result<Self> {
        let p = Self { j0, mu0, xi0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("J0", self.j0), ("mu0", self.mu0), ("xi0", self.xi0)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// How `A` and `B` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffMode {
    /// Exact power for a bath of `N` spins.
    Finite(u64),
    /// Large-`N` Gaussian magnitudes (real, non-negative).
    Asymptotic,
}

impl CoeffMode {
    pub fn label(&self) -> String {
        match self {
            CoeffMode::Finite(n) => format!("finite(N={n})"),
            CoeffMode::Asymptotic => "asymptotic".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub mode: CoeffMode,
}

impl DephasingCoeffs {
    /// `A = B = 1`: no bath influence.
    pub fn unit(mode: CoeffMode) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self { a: one, b: one, mode }
    }
}

/// Per-spin phase angle `φ = t m J J₀ / (Θ √N)`.
fn spin_angle(t: f64, n: u64, sol: &OrderSolution, bath: &BathParams, sys: &SystemParams) -> f64 {
    t * sol.m * bath.j * sys.j0 / (sol.theta * (n as f64).sqrt())
}

/// `1 − (Θ/J)²`, formed without cancellation.
fn one_minus_ratio_sq(sol: &OrderSolution, bath: &BathParams) -> f64 {
    (bath.j - sol.theta) * (bath.j + sol.theta) / (bath.j * bath.j)
}

/// Per-spin factor `cos φ + i (Θ/J) sin φ`.
pub fn spin_factor(phi: f64, theta_over_j: f64) -> Complex64 {
    Complex64::new(phi.cos(), theta_over_j * phi.sin())
}

fn check_solution(sol: &OrderSolution, bath: &BathParams) -> Result<()> {
    if sol.m > 0.0 && !(sol.theta > 0.0) {
        return Err(Error::InvalidParams(format!("Θ = {} with m = {} > 0", sol.theta, sol.m)));
    }
    if bath.j <= 0.0 && sol.m > 0.0 {
        return Err(Error::InvalidParams("ordered solution with J = 0".into()));
    }
    Ok(())
}

/// `r(t) = [cos φ + i (Θ/J) sin φ]^N` evaluated as `exp(N log f)`.
///
/// Excludes the free-qubit phase `e^{iμ₀t}`; see [`coherence_factor_with_field`].
pub fn coherence_factor_finite(
    t: f64,
    n: u64,
    sol: &OrderSolution,
    bath: &BathParams,
    sys: &SystemParams,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParams("bath size N must be >= 1".into()));
    }
    check_solution(sol, bath)?;
    if sol.m == 0.0 || t == 0.0 || sys.j0 == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let phi = spin_angle(t, n, sol, bath, sys);
    let ratio = sol.theta / bath.j;
    let s = phi.sin();
    // |f|² = 1 − (1 − (Θ/J)²) sin²φ
    let log_mod = 0.5 * (-one_minus_ratio_sq(sol, bath) * s * s).ln_1p();
    let arg = (ratio * s).atan2(phi.cos());
    let nf = n as f64;
    Ok(Complex64::from_polar((nf * log_mod).exp(), nf * arg))
}

/// [`coherence_factor_finite`] multiplied by the free precession phase `e^{iμ₀t}`
/// of the `|0⟩⟨1|` element.
pub fn coherence_factor_with_field(
    t: f64,
    n: u64,
    sol: &OrderSolution,
    bath: &BathParams,
    sys: &SystemParams,
) -> Result<Complex64> {
    Ok(coherence_factor_finite(t, n, sol, bath, sys)? * Complex64::from_polar(1.0, sys.mu0 * t))
}

/// Gaussian decay rate `κ = m² (J²/Θ² − 1)`; zero in the disordered phase.
pub fn gaussian_rate(sol: &OrderSolution, bath: &BathParams) -> f64 {
    if sol.m == 0.0 || sol.theta <= 0.0 {
        return 0.0;
    }
    let gap = (bath.j - sol.theta) * (bath.j + sol.theta);
    (sol.m * sol.m * gap / (sol.theta * sol.theta)).max(0.0)
}

/// Large-`N` magnitude `|r(t)| ≈ exp[−J₀² m² t² (J²/Θ² − 1) / 2]`.
pub fn coherence_magnitude_asymptotic(
    t: f64,
    sol: &OrderSolution,
    bath: &BathParams,
    sys: &SystemParams,
) -> f64 {
    let kappa = gaussian_rate(sol, bath);
    (-0.5 * sys.j0 * sys.j0 * kappa * t * t).exp()
}

/// Time at which the Gaussian magnitude reaches `e^{−1}`:
/// `τ = (Θ / J₀ m) √(2 / (J² − Θ²))`.
///
/// Infinite when there is no decay (`Θ = J`, or `m = 0` with a transverse
/// field). With `w = 0` the Ising-limit form `(2/J₀) √(2/(1 − 4m²))` applies,
/// which stays finite at `m = 0`.
pub fn coherence_time(sol: &OrderSolution, bath: &BathParams, sys: &SystemParams) -> Result<f64> {
    if !(sys.j0 > 0.0) {
        return Err(Error::InvalidParams("coherence time needs J0 > 0".into()));
    }
    if sol.m == 0.0 {
        return Ok(if bath.w == 0.0 { im_coherence_time(0.0, sys.j0) } else { f64::INFINITY });
    }
    let gap = (bath.j - sol.theta) * (bath.j + sol.theta);
    if gap <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(sol.theta / (sys.j0 * sol.m) * (2.0 / gap).sqrt())
}

/// Ising-limit magnitude `exp[−J₀² t² (1/4 − m²) / 2]`.
pub fn im_limit_magnitude(t: f64, m: f64, j0: f64) -> f64 {
    (-0.5 * j0 * j0 * t * t * (0.25 - m * m)).exp()
}

/// Ising-limit coherence time `(2/J₀) √(2/(1 − 4m²))`.
pub fn im_coherence_time(m: f64, j0: f64) -> f64 {
    let gap = 1.0 - 4.0 * m * m;
    if gap <= 0.0 {
        f64::INFINITY
    } else {
        2.0 / j0 * (2.0 / gap).sqrt()
    }
}

/// `A(t)` and `B(t)` in the requested mode.
///
/// Finite mode: `B(t)` is `A` evaluated at `2t`. Asymptotic mode returns the
/// Gaussian magnitudes `A = |r(t)|`, `B = |r(2t)| = A⁴`.
pub fn dephasing_coeffs(
    t: f64,
    mode: CoeffMode,
    sol: &OrderSolution,
    bath: &BathParams,
    sys: &SystemParams,
) -> Result<DephasingCoeffs> {
    let (a, b) = match mode {
        CoeffMode::Finite(n) => (
            coherence_factor_finite(t, n, sol, bath, sys)?,
            coherence_factor_finite(2.0 * t, n, sol, bath, sys)?,
        ),
        CoeffMode::Asymptotic => {
            check_solution(sol, bath)?;
            (
                Complex64::new(coherence_magnitude_asymptotic(t, sol, bath, sys), 0.0),
                Complex64::new(coherence_magnitude_asymptotic(2.0 * t, sol, bath, sys), 0.0),
            )
        }
    };
    Ok(DephasingCoeffs { a, b, mode })
}
