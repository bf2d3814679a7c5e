//! Brute-force evolution of qubits + mean-field bath at small bath size.
//!
//! The full Hamiltonian is
//!
//! ```text
//! H = H_s − (J₀/√N) S_sys^z Σ_k S_k^z − w Σ_k S_k^x − 2mJ Σ_k S_k^z (+ m²JN)
//! ```
//!
//! with `S_sys^z` the total system spin and the bath initially in the
//! product Gibbs state of the mean-field Hamiltonian. Since `H` is diagonal
//! in the system `z` basis, every reduced matrix element `ρ_ij` factorises
//! into a product of single-spin traces `tr[U(M_i) ρ_k U(M_j)†]`. Three
//! independent routes are provided:
//!
//! * factorised: per-spin propagators multiplied as 2×2 matrices,
//! * trace-triple: the same traces from [`su2::trace_triple`],
//! * dense: the full `2^(N+n)`-dimensional Hamiltonian, diagonalised.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dephasing::{CoeffMode, DephasingCoeffs, SystemParams};
use crate::mean_field::{solve_order, BathParams, OrderSolution, DEFAULT_TOL};
use crate::su2::{self, Complex2x2, TracelessXZ};
use crate::two_qubit::{PureState2Q, TwoQubitDensity};
use crate::linalg::CMat4;
use crate::{Error, Result};

/// Largest supported bath (`2^(N+2) ≤ 16384`).
pub const MAX_BATH_SPINS: usize = 12;

/// Tolerance for the `A = D` identity in [`extract_coeffs`].
pub const A_EQUALS_D_TOL: f64 = 1e-12;

/// `S^z` eigenvalue of a single qubit in basis state `bit` (`|0⟩ → +1/2`).
fn spin_z(bit: usize) -> f64 {
    if bit == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Total `S^z` of the two-qubit basis state `index = 2 q₁ + q₂`.
fn two_qubit_m(index: usize) -> f64 {
    spin_z(index >> 1) + spin_z(index & 1)
}

/// Energy of `−ξ₀ S₁^z S₂^z` in basis state `index`.
fn two_qubit_energy(index: usize, xi0: f64) -> f64 {
    -xi0 * spin_z(index >> 1) * spin_z(index & 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Bath size `N`.
    pub n: usize,
    pub bath: BathParams,
    /// Mean-field solution at `bath`.
    pub sol: OrderSolution,
    pub sys: SystemParams,
    pub state: PureState2Q,
    pub times: Vec<f64>,
    /// Adds the constant `m²JN` to the dense Hamiltonian.
    pub include_constant: bool,
}

impl OracleConfig {
    /// Solves the mean-field problem at `bath` and validates the rest.
    pub fn new(
        n: usize,
        bath: BathParams,
        sys: SystemParams,
        state: PureState2Q,
        times: Vec<f64>,
    ) -> Result<Self> {
        let sol = solve_order(&bath, DEFAULT_TOL)?;
        let cfg = Self { n, bath, sol, sys, state, times, include_constant: false };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        validate_bath_size(self.n)?;
        self.bath.validate()?;
        self.sys.validate()?;
        self.state.validate()?;
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParams("non-finite time".into()));
        }
        Ok(())
    }

    fn spin_model(&self) -> SpinModel {
        SpinModel::new(self.n, &self.bath, &self.sol, self.sys.j0)
    }
}

fn validate_bath_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("bath size N must be >= 1".into()));
    }
    if n > MAX_BATH_SPINS {
        return Err(Error::ConfigTooLarge { n, max: MAX_BATH_SPINS });
    }
    Ok(())
}

/// Single-bath-spin data shared by the factorised routes.
struct SpinModel {
    n: usize,
    /// `J₀/√N`.
    eps: f64,
    /// Mean field `h = 2mJ`.
    h: f64,
    w: f64,
    temperature: f64,
}

impl SpinModel {
    fn new(n: usize, bath: &BathParams, sol: &OrderSolution, j0: f64) -> Self {
        Self {
            n,
            eps: j0 / (n as f64).sqrt(),
            h: 2.0 * sol.m * bath.j,
            w: bath.w,
            temperature: bath.temperature,
        }
    }

    /// `−i t H_k(M)` written as `i (aσx + bσz)` with `H_k(M) = −(εM + h) S^z − w S^x`.
    fn generator(&self, system_m: f64, t: f64) -> TracelessXZ {
        TracelessXZ::new(0.5 * self.w * t, 0.5 * (self.eps * system_m + self.h) * t)
    }

    fn propagator(&self, system_m: f64, t: f64) -> Complex2x2 {
        su2::exp_imag(&self.generator(system_m, t))
    }

    fn gibbs(&self) -> Result<Complex2x2> {
        su2::single_spin_gibbs(self.w, self.h, self.temperature)
    }

    /// `tr[U(M_i) ρ_k U(M_j)†]` by explicit 2×2 products.
    fn trace_by_product(&self, rho: &Complex2x2, mi: f64, mj: f64, t: f64) -> Complex64 {
        (self.propagator(mi, t) * rho * self.propagator(mj, t).adjoint()).trace()
    }

    /// The same trace from the closed-form triple product, normalised by `2 cosh q`.
    fn trace_by_triple(&self, mi: f64, mj: f64, t: f64) -> Result<Complex64> {
        let r = TracelessXZ::new(self.w / (2.0 * self.temperature), self.h / (2.0 * self.temperature));
        let left = self.generator(mi, t);
        let right = self.generator(mj, t).scale(-1.0);
        let z = 2.0 * r.norm().cosh();
        Ok(su2::trace_triple(&left, &r, &right)? / z)
    }

    fn pow(&self, z: Complex64) -> Complex64 {
        z.powu(self.n as u32)
    }
}

/// Reduced two-qubit states from the factorised per-spin evolution.
pub fn simulate_exact(cfg: &OracleConfig) -> Result<Vec<TwoQubitDensity>> {
    cfg.validate()?;
    let model = cfg.spin_model();
    let rho_k = model.gibbs()?;
    let psi = cfg.state.amps;
    Ok(cfg
        .times
        .iter()
        .map(|&t| {
            let mut out = CMat4::zeros();
            for i in 0..4 {
                for j in i..4 {
                    let bath = model.pow(model.trace_by_product(&rho_k, two_qubit_m(i), two_qubit_m(j), t));
                    let de = two_qubit_energy(i, cfg.sys.xi0) - two_qubit_energy(j, cfg.sys.xi0);
                    let v = psi[i] * psi[j].conj() * Complex64::from_polar(1.0, -de * t) * bath;
                    out[(i, j)] = v;
                    out[(j, i)] = v.conj();
                }
            }
            out[(0, 0)] = Complex64::new(psi[0].norm_sqr(), 0.0);
            TwoQubitDensity(out)
        })
        .collect())
}

/// Exact coefficients at one time: `A` multiplies the `|00⟩⟨01|` coherence,
/// `D` the `|01⟩⟨11|` coherence and `B` the `|00⟩⟨11|` coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub d: Complex64,
}

impl ExactCoeffs {
    pub fn a_d_gap(&self) -> f64 {
        (self.a - self.d).norm()
    }
}

/// `A`, `B`, `D` as products of closed-form single-spin traces.
pub fn extract_coeffs_raw(cfg: &OracleConfig) -> Result<Vec<ExactCoeffs>> {
    cfg.validate()?;
    let model = cfg.spin_model();
    cfg.times
        .iter()
        .map(|&t| {
            Ok(ExactCoeffs {
                a: model.pow(model.trace_by_triple(1.0, 0.0, t)?),
                b: model.pow(model.trace_by_triple(1.0, -1.0, t)?),
                d: model.pow(model.trace_by_triple(0.0, -1.0, t)?),
            })
        })
        .collect()
}

/// [`extract_coeffs_raw`], failing unless `A = D` holds to [`A_EQUALS_D_TOL`].
pub fn extract_coeffs(cfg: &OracleConfig) -> Result<Vec<DephasingCoeffs>> {
    let mode = CoeffMode::Finite(cfg.n as u64);
    extract_coeffs_raw(cfg)?
        .into_iter()
        .map(|c| {
            let gap = c.a_d_gap();
            if gap > A_EQUALS_D_TOL {
                return Err(Error::IdentityViolation { name: "A = D", gap, tol: A_EQUALS_D_TOL });
            }
            Ok(DephasingCoeffs { a: c.a, b: c.b, mode })
        })
        .collect()
}

/// `ρ₀₁(t)/ρ₀₁(0)` of a single qubit, by the trace-product route.
///
/// Includes the free precession `e^{iμ₀t}`.
pub fn single_qubit_coherence_exact(
    n: usize,
    bath: &BathParams,
    sys: &SystemParams,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    validate_bath_size_loose(n)?;
    let sol = solve_order(bath, DEFAULT_TOL)?;
    let model = SpinModel::new(n, bath, &sol, sys.j0);
    times
        .iter()
        .map(|&t| {
            let bath_factor = model.pow(model.trace_by_triple(0.5, -0.5, t)?);
            Ok(bath_factor * Complex64::from_polar(1.0, sys.mu0 * t))
        })
        .collect()
}

/// The trace-product route has no exponential cost; allow large `N` there.
fn validate_bath_size_loose(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("bath size N must be >= 1".into()));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidParams(format!("bath size {n} too large")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dense path
// ---------------------------------------------------------------------------

fn sz() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5])
}

fn sx() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on `site` of `sites` spin-1/2 factors.
fn embed(op: &DMatrix<f64>, site: usize, sites: usize) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(2, 2);
    (0..sites).fold(DMatrix::from_element(1, 1, 1.0), |acc, k| {
        acc.kronecker(if k == site { op } else { &id })
    })
}

/// Mean-field bath Hamiltonian on `n` spins placed after `offset` system spins.
fn bath_hamiltonian(n: usize, offset: usize, w: f64, h: f64, constant: f64) -> DMatrix<f64> {
    let sites = offset + n;
    let dim = 1 << sites;
    let mut hb = DMatrix::<f64>::identity(dim, dim) * constant;
    for k in 0..n {
        hb -= embed(&sx(), offset + k, sites) * w;
        hb -= embed(&sz(), offset + k, sites) * h;
    }
    hb
}

/// Full Hamiltonian, its eigen-decomposition and the initial state.
struct DenseEvolution {
    system_dim: usize,
    bath_dim: usize,
    vectors: DMatrix<Complex64>,
    energies: Vec<f64>,
    /// Initial state in the energy eigenbasis.
    initial: DMatrix<Complex64>,
}

impl DenseEvolution {
    /// `system_op` is the initial system operator; `system_h` and `system_m`
    /// are the (diagonal) system energies and total `S^z` per basis state.
    fn new(
        n: usize,
        bath: &BathParams,
        sol: &OrderSolution,
        j0: f64,
        system_op: &DMatrix<Complex64>,
        system_h: &[f64],
        system_m_ops: &[DMatrix<f64>],
        include_constant: bool,
    ) -> Result<Self> {
        validate_bath_size(n)?;
        let system_spins = system_m_ops.len();
        let sites = system_spins + n;
        let dim = 1usize << sites;
        let system_dim = 1usize << system_spins;
        let bath_dim = 1usize << n;
        let h_field = 2.0 * sol.m * bath.j;
        let constant = if include_constant { sol.m * sol.m * bath.j * n as f64 } else { 0.0 };
        let eps = j0 / (n as f64).sqrt();

        // H_s is diagonal in the system basis.
        let mut hs = DMatrix::<f64>::zeros(system_dim, system_dim);
        for (i, &e) in system_h.iter().enumerate() {
            hs[(i, i)] = e;
        }
        let mut ham = hs.kronecker(&DMatrix::<f64>::identity(bath_dim, bath_dim));
        ham += bath_hamiltonian(n, system_spins, bath.w, h_field, constant);
        for op in system_m_ops {
            let lifted = op.kronecker(&DMatrix::<f64>::identity(bath_dim, bath_dim));
            for k in 0..n {
                ham -= &lifted * embed(&sz(), system_spins + k, sites) * eps;
            }
        }
        debug_assert_eq!(ham.nrows(), dim);

        // Bath Gibbs state from its own dense diagonalisation.
        let hb = bath_hamiltonian(n, 0, bath.w, h_field, constant);
        let eb = hb.symmetric_eigen();
        let e_min = eb.eigenvalues.min();
        let weights: Vec<f64> =
            eb.eigenvalues.iter().map(|&e| (-(e - e_min) / bath.temperature).exp()).collect();
        let z: f64 = weights.iter().sum();
        let mut rho_b = DMatrix::<f64>::zeros(bath_dim, bath_dim);
        for (k, wk) in weights.iter().enumerate() {
            let v = eb.eigenvectors.column(k);
            rho_b += v * v.transpose() * (wk / z);
        }
        let rho0 = system_op.kronecker(&rho_b.map(|x| Complex64::new(x, 0.0)));

        let eig = ham.symmetric_eigen();
        let vectors = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let initial = vectors.adjoint() * rho0 * &vectors;
        Ok(Self {
            system_dim,
            bath_dim,
            vectors,
            energies: eig.eigenvalues.iter().copied().collect(),
            initial,
        })
    }

    /// Full state `e^{−iHt} ρ₀ e^{iHt}`.
    fn state_at(&self, t: f64) -> DMatrix<Complex64> {
        let phases: Vec<Complex64> = self.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
        let rotated = DMatrix::from_fn(self.initial.nrows(), self.initial.ncols(), |a, b| {
            self.initial[(a, b)] * phases[a] * phases[b].conj()
        });
        &self.vectors * rotated * self.vectors.adjoint()
    }

    fn trace_bath(&self, full: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let nb = self.bath_dim;
        DMatrix::from_fn(self.system_dim, self.system_dim, |i, j| {
            (0..nb).map(|b| full[(i * nb + b, j * nb + b)]).sum()
        })
    }

    #[cfg(test)]
    fn trace_system(&self, full: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let nb = self.bath_dim;
        DMatrix::from_fn(nb, nb, |a, b| (0..self.system_dim).map(|s| full[(s * nb + a, s * nb + b)]).sum())
    }
}

fn two_qubit_dense(cfg: &OracleConfig) -> Result<DenseEvolution> {
    let psi = cfg.state.amps;
    let rho_s = DMatrix::from_fn(4, 4, |i, j| psi[i] * psi[j].conj());
    let energies: Vec<f64> = (0..4).map(|i| two_qubit_energy(i, cfg.sys.xi0)).collect();
    let ops = [embed(&sz(), 0, 2), embed(&sz(), 1, 2)];
    DenseEvolution::new(cfg.n, &cfg.bath, &cfg.sol, cfg.sys.j0, &rho_s, &energies, &ops, cfg.include_constant)
}

/// Reduced two-qubit states from the dense `2^(N+2)` evolution.
pub fn simulate_dense(cfg: &OracleConfig) -> Result<Vec<TwoQubitDensity>> {
    cfg.validate()?;
    let evo = two_qubit_dense(cfg)?;
    Ok(cfg
        .times
        .iter()
        .map(|&t| {
            let reduced = evo.trace_bath(&evo.state_at(t));
            TwoQubitDensity(CMat4::from_fn(|i, j| reduced[(i, j)]))
        })
        .collect())
}

/// `ρ₀₁(t)/ρ₀₁(0)` of a single qubit from the dense `2^(N+1)` evolution.
pub fn single_qubit_coherence_dense(
    n: usize,
    bath: &BathParams,
    sys: &SystemParams,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    validate_bath_size(n)?;
    let sol = solve_order(bath, DEFAULT_TOL)?;
    let mut op = DMatrix::<Complex64>::zeros(2, 2);
    op[(0, 1)] = Complex64::new(1.0, 0.0);
    let energies = [-sys.mu0 * spin_z(0), -sys.mu0 * spin_z(1)];
    let evo = DenseEvolution::new(n, bath, &sol, sys.j0, &op, &energies, &[sz()], false)?;
    Ok(times.iter().map(|&t| evo.trace_bath(&evo.state_at(t))[(0, 1)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephasing::{coherence_factor_with_field, dephasing_coeffs};
    use crate::entanglement::concurrence;
    use crate::two_qubit::evolve_reduced;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_state(rng: &mut StdRng) -> PureState2Q {
        PureState2Q::normalized([0; 4].map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .unwrap()
    }

    fn max_diff(a: &TwoQubitDensity, b: &TwoQubitDensity) -> f64 {
        (a.0 - b.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn times() -> Vec<f64> {
        (0..8).map(|k| 0.9 * k as f64).collect()
    }

    #[test]
    fn dense_and_factorised_agree() {
        let mut rng = StdRng::seed_from_u64(61);
        for n in [1, 2, 3, 5] {
            let bath = BathParams::new(2.0, rng.gen_range(0.0..0.6), rng.gen_range(0.2..0.9)).unwrap();
            let sys = SystemParams::new(rng.gen_range(0.2..2.0), 0.0, rng.gen_range(0.0..1.0)).unwrap();
            let cfg = OracleConfig::new(n, bath, sys, random_state(&mut rng), times()).unwrap();
            let fact = simulate_exact(&cfg).unwrap();
            let dense = simulate_dense(&cfg).unwrap();
            for (f, d) in fact.iter().zip(&dense) {
                assert!(max_diff(f, d) < 1e-11, "N={n}: {}", max_diff(f, d));
            }
        }
    }

    #[test]
    fn trace_routes_agree() {
        let mut rng = StdRng::seed_from_u64(67);
        for _ in 0..50 {
            let bath = BathParams::new(2.0, rng.gen_range(0.0..0.8), rng.gen_range(0.1..0.95)).unwrap();
            let sol = solve_order(&bath, DEFAULT_TOL).unwrap();
            let model = SpinModel::new(rng.gen_range(1..10), &bath, &sol, rng.gen_range(0.1..2.0));
            let rho = model.gibbs().unwrap();
            let t = rng.gen_range(0.0..10.0);
            for (mi, mj) in [(1.0, 0.0), (0.0, -1.0), (1.0, -1.0), (0.5, -0.5)] {
                let p = model.trace_by_product(&rho, mi, mj, t);
                let q = model.trace_by_triple(mi, mj, t).unwrap();
                assert!((p - q).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn ising_bath_matches_closed_forms() {
        // At w = 0 the per-spin trace is exactly cos φ + i(Θ/J) sin φ.
        let bath = BathParams::new(2.0, 0.0, 0.5).unwrap();
        let sys = SystemParams::new(1.0, 0.0, 0.3).unwrap();
        let mut rng = StdRng::seed_from_u64(71);
        for n in [1, 2, 4, 6] {
            let cfg = OracleConfig::new(n, bath, sys, random_state(&mut rng), times()).unwrap();
            let exact = simulate_exact(&cfg).unwrap();
            let coeffs = extract_coeffs(&cfg).unwrap();
            for ((t, rho), c) in cfg.times.iter().zip(&exact).zip(&coeffs) {
                let closed = dephasing_coeffs(*t, CoeffMode::Finite(n as u64), &cfg.sol, &bath, &sys).unwrap();
                assert!((closed.a - c.a).norm() < 1e-11 && (closed.b - c.b).norm() < 1e-11);
                let analytic = evolve_reduced(&cfg.state, *t, sys.xi0, &closed).unwrap();
                assert!(max_diff(rho, &analytic) < 1e-10);
            }
        }
    }

    #[test]
    fn transverse_field_closed_form_is_leading_order() {
        // With w > 0 the closed form drops O(1/N) terms of each spin trace.
        let bath = BathParams::new(2.0, 0.1, 0.5).unwrap();
        let sys = SystemParams::new(1.0, 0.0, 0.0).unwrap();
        let state = PureState2Q::from_real(0.5, 0.5, 0.5, 0.5).unwrap();
        let cfg = OracleConfig::new(6, bath, sys, state, vec![0.5, 1.0, 2.0]).unwrap();
        let raw = extract_coeffs_raw(&cfg).unwrap();
        for (t, c) in cfg.times.iter().zip(&raw) {
            let closed = dephasing_coeffs(*t, CoeffMode::Finite(6), &cfg.sol, &bath, &sys).unwrap();
            let gap = (closed.a - c.a).norm();
            assert!(gap > 1e-6 && gap < 5e-3, "t={t}: {gap}");
            assert!(c.a_d_gap() < 5e-3);
        }
        assert!(matches!(extract_coeffs(&cfg), Err(Error::IdentityViolation { .. })));
    }

    #[test]
    fn decoupled_system_evolves_freely() {
        let bath = BathParams::new(2.0, 0.3, 0.6).unwrap();
        let sys = SystemParams::new(0.0, 0.0, 0.7).unwrap();
        let mut rng = StdRng::seed_from_u64(73);
        let state = random_state(&mut rng);
        let cfg = OracleConfig::new(3, bath, sys, state, times()).unwrap();
        let unit = DephasingCoeffs::unit(CoeffMode::Finite(3));
        for (t, rho) in cfg.times.iter().zip(simulate_dense(&cfg).unwrap()) {
            let free = evolve_reduced(&state, *t, sys.xi0, &unit).unwrap();
            assert!(max_diff(&rho, &free) < 1e-12);
        }
    }

    #[test]
    fn decoherence_free_state_keeps_concurrence() {
        let bath = BathParams::new(2.0, 0.1, 0.5).unwrap();
        let sys = SystemParams::new(1.0, 0.0, 0.3).unwrap();
        let state = PureState2Q::from_real(0.0, 0.6, 0.8, 0.0).unwrap();
        let cfg = OracleConfig::new(4, bath, sys, state, times()).unwrap();
        for rho in simulate_exact(&cfg).unwrap() {
            assert!((concurrence(&rho).unwrap().c - 0.96).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_energy_shift_cancels() {
        let bath = BathParams::new(2.0, 0.2, 0.5).unwrap();
        let sys = SystemParams::new(1.0, 0.0, 0.4).unwrap();
        let mut rng = StdRng::seed_from_u64(79);
        let mut cfg = OracleConfig::new(3, bath, sys, random_state(&mut rng), times()).unwrap();
        let without = simulate_dense(&cfg).unwrap();
        cfg.include_constant = true;
        let with = simulate_dense(&cfg).unwrap();
        for (a, b) in without.iter().zip(&with) {
            assert!(max_diff(a, b) < 1e-12);
        }
    }

    #[test]
    fn trace_preserved_and_bath_stationary() {
        let bath = BathParams::new(2.0, 0.3, 0.5).unwrap();
        let mut rng = StdRng::seed_from_u64(83);
        let state = random_state(&mut rng);
        let sys = SystemParams::new(1.0, 0.0, 0.2).unwrap();
        let cfg = OracleConfig::new(3, bath, sys, state, times()).unwrap();
        for rho in simulate_dense(&cfg).unwrap() {
            assert!((rho.0.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }

        let decoupled = SystemParams::new(0.0, 0.0, 0.2).unwrap();
        let cfg = OracleConfig::new(3, bath, decoupled, state, times()).unwrap();
        let evo = two_qubit_dense(&cfg).unwrap();
        let initial = evo.trace_system(&evo.state_at(0.0));
        for &t in &cfg.times {
            let diff = evo.trace_system(&evo.state_at(t)) - &initial;
            assert!(diff.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn single_qubit_routes_agree() {
        let mut rng = StdRng::seed_from_u64(89);
        for _ in 0..4 {
            let bath = BathParams::new(2.0, rng.gen_range(0.0..0.5), rng.gen_range(0.2..0.9)).unwrap();
            let sys = SystemParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.0..1.0), 0.0).unwrap();
            let ts = times();
            let triple = single_qubit_coherence_exact(6, &bath, &sys, &ts).unwrap();
            let dense = single_qubit_coherence_dense(6, &bath, &sys, &ts).unwrap();
            assert_eq!(triple[0], Complex64::new(1.0, 0.0));
            for (a, b) in triple.iter().zip(&dense) {
                assert!((a - b).norm() < 1e-11);
            }
        }
        let bath = BathParams::new(2.0, 0.0, 0.4).unwrap();
        let sol = solve_order(&bath, DEFAULT_TOL).unwrap();
        let sys = SystemParams::new(0.8, 0.5, 0.0).unwrap();
        let exact = single_qubit_coherence_exact(6, &bath, &sys, &times()).unwrap();
        for (t, e) in times().iter().zip(&exact) {
            let closed = coherence_factor_with_field(*t, 6, &sol, &bath, &sys).unwrap();
            assert!((closed - e).norm() < 1e-11);
        }
    }

    #[test]
    fn large_bath_trace_route_is_gaussian() {
        let bath = BathParams::new(2.0, 0.0, 0.5).unwrap();
        let sol = solve_order(&bath, DEFAULT_TOL).unwrap();
        let sys = SystemParams::new(1.0, 0.0, 0.0).unwrap();
        let ts: Vec<f64> = (0..20).map(|k| 0.5 * k as f64).collect();
        let gap = |n: usize| {
            let exact = single_qubit_coherence_exact(n, &bath, &sys, &ts).unwrap();
            ts.iter()
                .zip(&exact)
                .map(|(t, r)| (r.norm() - crate::dephasing::coherence_magnitude_asymptotic(*t, &sol, &bath, &sys)).abs())
                .fold(0.0, f64::max)
        };
        let (small, large) = (gap(1000), gap(100_000));
        assert!(small < 5e-3 && large < 5e-5, "{small} {large}");
        assert!(small / large > 50.0);
    }

    #[test]
    fn size_guard() {
        let bath = BathParams::new(2.0, 0.1, 0.5).unwrap();
        let state = PureState2Q::from_real(1.0, 0.0, 0.0, 0.0).unwrap();
        let err = OracleConfig::new(13, bath, SystemParams::default(), state, vec![0.0]).unwrap_err();
        assert!(matches!(err, Error::ConfigTooLarge { n: 13, .. }));
        assert!(OracleConfig::new(0, bath, SystemParams::default(), state, vec![0.0]).is_err());
    }
}
