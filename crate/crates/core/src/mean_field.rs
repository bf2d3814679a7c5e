//! Mean-field order parameter of the (transverse) Ising bath.
//!
//! Below the critical temperature the bath magnetisation `m` is fixed by
//! `Θ/J = tanh(Θ/2T)` with `Θ = √(w² + 4m²J²)`. Both `Θ` and `m` are
//! canonicalised to be non-negative.

use crate::{Error, Result};

/// Default residual tolerance for [`solve_order`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap for the bisection.
pub const MAX_ITERATIONS: usize = 200;

/// Relative offset of the lower bracket at `w = 0`, excluding the trivial root `Θ = 0`.
const LOWER_BRACKET_EPS: f64 = 1e-12;

/// Bath couplings and temperature, all in energy units (`k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Exchange coupling `J`.
    pub j: f64,
    /// Transverse field `w`.
    pub w: f64,
    /// Temperature `T`.
    pub temperature: f64,
}

impl BathParams {
    pub fn new(j: f64, w: f64, temperature: f64) -> Result<Self> {
        let p = Self { j, w, temperature };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from a temperature given in units of `T_c = J/2`.
    pub fn from_reduced_temperature(j: f64, w: f64, t_over_tc: f64) -> Result<Self> {
        Self::new(j, w, t_over_tc * critical_temperature(j))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.j >= 0.0) {
            return Err(Error::InvalidParams(format!("J must be finite and >= 0, got {}", self.j)));
        }
        if !(self.w.is_finite() && self.w >= 0.0) {
            return Err(Error::InvalidParams(format!("w must be finite and >= 0, got {}", self.w)));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::InvalidParams(format!(
                "T must be finite and > 0, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    pub fn critical_temperature(&self) -> f64 {
        critical_temperature(self.j)
    }

    /// `T / T_c`; infinite when `J = 0`.
    pub fn reduced_temperature(&self) -> f64 {
        self.temperature / self.critical_temperature()
    }

    pub fn with_temperature(&self, temperature: f64) -> Self {
        Self { temperature, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Ordered,
    Disordered,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Ordered => "ordered",
            Phase::Disordered => "disordered",
        }
    }
}

/// Solution of the mean-field self-consistency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderSolution {
    /// `Θ = √(w² + 4m²J²) ≥ 0`.
    pub theta: f64,
    /// Order parameter `m ∈ [0, 1/2]`.
    pub m: f64,
    pub phase: Phase,
}

impl OrderSolution {
    /// The `m = 0` solution. `Θ` reduces to the transverse field.
    pub fn disordered(w: f64) -> Self {
        Self { theta: w, m: 0.0, phase: Phase::Disordered }
    }

    pub fn is_ordered(&self) -> bool {
        self.phase == Phase::Ordered
    }
}

/// `T_c = J/2`.
pub fn critical_temperature(j: f64) -> f64 {
    0.5 * j
}

/// Whether the bath is in the symmetry-broken phase.
///
/// For `w > 0` the condition is `w/J < tanh(w/2T)`; at `w = 0` it reduces to `T < T_c`.
pub fn is_ordered(p: &BathParams) -> bool {
    if p.j <= 0.0 {
        return false;
    }
    if p.w == 0.0 {
        p.temperature < critical_temperature(p.j)
    } else {
        p.w / p.j < (p.w / (2.0 * p.temperature)).tanh()
    }
}

/// Residual of the self-consistency, `tanh(Θ/2T) − Θ/J`.
pub fn residual(theta: f64, p: &BathParams) -> f64 {
    (theta / (2.0 * p.temperature)).tanh() - theta / p.j
}

/// Solves for `Θ` and `m` by bisection on `[max(w, εJ), J]`.
///
/// Returns the disordered solution when [`is_ordered`] is false. `tol` bounds
/// the self-consistency residual of the returned ordered root.
pub fn solve_order(p: &BathParams, tol: f64) -> Result<OrderSolution> {
    solve_order_capped(p, tol, MAX_ITERATIONS)
}

fn solve_order_capped(p: &BathParams, tol: f64, max_iterations: usize) -> Result<OrderSolution> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be > 0, got {tol}")));
    }
    if !is_ordered(p) {
        return Ok(OrderSolution::disordered(p.w));
    }

    // f(lo) > 0 is exactly the ordering condition; f(J) < 0 because tanh < 1.
    let mut lo = p.w.max(LOWER_BRACKET_EPS * p.j);
    let mut hi = p.j;
    if residual(hi, p) == 0.0 {
        // Deep in the ordered phase tanh saturates to 1 and Θ = J exactly.
        return Ok(OrderSolution { theta: hi, m: order_parameter_from_theta(hi, p.w, p.j), phase: Phase::Ordered });
    }
    let mut f_lo = residual(lo, p);
    if !(f_lo > 0.0) {
        // At w = 0 and T just below T_c the ordered root can sit below εJ.
        return Ok(OrderSolution::disordered(p.w));
    }

    let mut theta = 0.5 * (lo + hi);
    let mut f = residual(theta, p);
    let mut iterations = 0;
    while f.abs() >= tol {
        if iterations >= max_iterations {
            return Err(Error::NoConvergence { iterations, residual: f });
        }
        if (f > 0.0) == (f_lo > 0.0) {
            lo = theta;
            f_lo = f;
        } else {
            hi = theta;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            // Bracket exhausted at machine precision.
            return Err(Error::NoConvergence { iterations, residual: f });
        }
        theta = mid;
        f = residual(theta, p);
        iterations += 1;
    }

    let m = order_parameter_from_theta(theta, p.w, p.j);
    Ok(OrderSolution { theta, m, phase: Phase::Ordered })
}

/// `m = √(Θ² − w²) / 2J`, clamped into `[0, 1/2]`.
fn order_parameter_from_theta(theta: f64, w: f64, j: f64) -> f64 {
    let m = ((theta - w) * (theta + w)).max(0.0).sqrt() / (2.0 * j);
    m.clamp(0.0, 0.5)
}

/// Solves [`solve_order`] at each temperature, keeping input order.
pub fn order_parameter_sweep(
    template: &BathParams,
    temperatures: &[f64],
    tol: f64,
) -> Result<Vec<(f64, OrderSolution)>> {
    temperatures
        .iter()
        .map(|&t| {
            let p = BathParams::new(template.j, template.w, t)?;
            solve_order(&p, tol).map(|sol| (t, sol))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain fixed-point iteration `Θ ← J tanh(Θ/2T)` from `Θ = J`.
    fn fixed_point_theta(j: f64, temperature: f64) -> f64 {
        let mut theta = j;
        for _ in 0..100_000 {
            let next = j * (theta / (2.0 * temperature)).tanh();
            if (next - theta).abs() < 1e-15 {
                return next;
            }
            theta = next;
        }
        theta
    }

    #[test]
    fn critical_temperature_values() {
        assert_eq!(critical_temperature(2.0), 1.0);
        assert_eq!(critical_temperature(0.0), 0.0);
        assert_eq!(critical_temperature(1.0), 0.5);
    }

    #[test]
    fn ordering_condition() {
        assert!(0.05 < 0.1f64.tanh());
        assert!(is_ordered(&BathParams::new(2.0, 0.1, 0.5).unwrap()));
        assert!(!is_ordered(&BathParams::new(2.0, 0.0, 1.5).unwrap()));
        assert!(!is_ordered(&BathParams::new(2.0, 2.5, 1e-6).unwrap()));
        assert!(!is_ordered(&BathParams::new(0.0, 0.1, 0.5).unwrap()));
    }

    #[test]
    fn zero_temperature_limit() {
        let sol = solve_order(&BathParams::new(2.0, 0.0, 1e-3).unwrap(), DEFAULT_TOL).unwrap();
        assert!(sol.is_ordered());
        assert!((sol.theta - 2.0).abs() < 1e-12);
        assert!((sol.m - 0.5).abs() < 1e-12);
    }

    #[test]
    fn critical_point_is_disordered() {
        let sol = solve_order(&BathParams::new(2.0, 0.0, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(sol.phase, Phase::Disordered);
        assert_eq!(sol.m, 0.0);
    }

    #[test]
    fn matches_fixed_point_oracle() {
        // Θ = 2 tanh(Θ) at J = 2, T = 0.5.
        let oracle = fixed_point_theta(2.0, 0.5);
        assert!((oracle - 1.915).abs() < 1e-3);
        let sol = solve_order(&BathParams::new(2.0, 0.1, 0.5).unwrap(), DEFAULT_TOL).unwrap();
        assert!((sol.theta - oracle).abs() < 1e-11, "{} vs {}", sol.theta, oracle);
        let expected_m = (oracle * oracle - 0.01).sqrt() / 4.0;
        assert!((sol.m - expected_m).abs() < 1e-11);
    }

    #[test]
    fn ordered_solution_invariants() {
        for &(w, t) in &[(0.0, 0.3), (0.1, 0.5), (0.5, 0.4), (1.2, 0.2), (0.05, 0.95)] {
            let p = BathParams::new(2.0, w, t).unwrap();
            let sol = solve_order(&p, DEFAULT_TOL).unwrap();
            assert!(sol.is_ordered());
            assert!(sol.theta > w && sol.theta < p.j);
            assert!(residual(sol.theta, &p).abs() < DEFAULT_TOL);
            let theta2 = w * w + 4.0 * sol.m * sol.m * p.j * p.j;
            assert!((theta2 - sol.theta * sol.theta).abs() <= 1e-12 * sol.theta * sol.theta);
            assert!(sol.m > 0.0 && sol.m <= 0.5);
        }
    }

    #[test]
    fn ising_limit_consistency() {
        for &t in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let p = BathParams::new(2.0, 0.0, t).unwrap();
            let sol = solve_order(&p, DEFAULT_TOL).unwrap();
            assert!((2.0 * sol.m - (sol.m * p.j / t).tanh()).abs() < 1e-10);
        }
    }

    #[test]
    fn magnetisation_monotone_in_temperature() {
        let template = BathParams::new(2.0, 0.1, 1.0).unwrap();
        let temps: Vec<f64> = (1..=60).map(|k| k as f64 / 60.0).collect();
        let sweep = order_parameter_sweep(&template, &temps, DEFAULT_TOL).unwrap();
        for pair in sweep.windows(2) {
            assert!(pair[1].1.m <= pair[0].1.m);
        }
    }

    #[test]
    fn sweep_examples() {
        let template = BathParams::new(2.0, 0.0, 1.0).unwrap();
        let sweep = order_parameter_sweep(&template, &[1.0], DEFAULT_TOL).unwrap();
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].1.phase, Phase::Disordered);

        let template = BathParams::new(2.0, 0.1, 1.0).unwrap();
        let sweep = order_parameter_sweep(&template, &[0.75, 0.5, 0.35, 0.25], DEFAULT_TOL).unwrap();
        assert!(sweep.iter().all(|(_, s)| s.is_ordered()));
        assert!(sweep.windows(2).all(|w| w[1].1.m > w[0].1.m));

        assert!(order_parameter_sweep(&template, &[], DEFAULT_TOL).unwrap().is_empty());
        assert!(order_parameter_sweep(&template, &[0.5, -1.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BathParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(BathParams::new(1.0, -0.1, 1.0).is_err());
        assert!(BathParams::new(1.0, 0.0, 0.0).is_err());
        let p = BathParams::new(2.0, 0.1, 0.5).unwrap();
        assert!(solve_order(&p, 0.0).is_err());
    }

    #[test]
    fn iteration_cap_reports_no_convergence() {
        let p = BathParams::new(2.0, 0.1, 0.9).unwrap();
        match solve_order_capped(&p, DEFAULT_TOL, 5) {
            Err(Error::NoConvergence { iterations: 5, residual }) => assert!(residual.abs() > DEFAULT_TOL),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
        // Any root accepted at an absurd tolerance must be exact.
        for k in 1..20 {
            let p = BathParams::new(2.0, 0.1, 0.04 * k as f64).unwrap();
            match solve_order(&p, 1e-300) {
                Ok(sol) => assert_eq!(residual(sol.theta, &p), 0.0),
                Err(e) => assert!(matches!(e, Error::NoConvergence { .. })),
            }
        }
    }
}
