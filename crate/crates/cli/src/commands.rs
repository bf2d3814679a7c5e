//! Subcommand implementations. Each returns in-memory CSV tables; writing
//! them out is left to the caller.

use num_complex::Complex64;
use rayon::prelude::*;
use spinbath::dephasing::{
    coherence_factor_with_field, coherence_magnitude_asymptotic, coherence_time, dephasing_coeffs,
};
use spinbath::entanglement::concurrence;
use spinbath::mean_field::{solve_order, DEFAULT_TOL};
use spinbath::oracle::{
    extract_coeffs_raw, simulate_dense, simulate_exact, single_qubit_coherence_dense, single_qubit_coherence_exact,
    OracleConfig,
};
use spinbath::two_qubit::evolve_reduced;
use spinbath::{BathParams, CoeffMode, DephasingCoeffs, OrderSolution, PureState2Q, SystemParams, TwoQubitDensity};

use crate::config::{case_state, Command, ModeKind, RunConfig, Temperatures};
use crate::CliError;

/// One CSV file: `# key=value` header, column names, data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File name used by multi-file presets.
    pub name: String,
    pub header: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut buf = format!("{}\n", self.header).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Column `name` parsed as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].parse().ok()).collect()
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn strings(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

/// Result of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    /// False only when a verification check fails.
    pub passed: bool,
}

/// Test hooks for `verify`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Adds the `N = 8` bath.
    pub extended: bool,
    /// Perturbs the closed-form `A` by this amount (negative control).
    pub corrupt: f64,
}

pub fn run(cfg: &RunConfig, verify: VerifyOptions) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let single = |t: Table| RunOutput { tables: vec![t], passed: true };
    Ok(match cfg.command {
        Command::Phase => single(phase(cfg)?),
        Command::Coherence => single(coherence(cfg)?),
        Command::Concurrence => single(concurrence_curve(cfg, cfg.single_temperature()?, "concurrence")?),
        Command::Fig1 | Command::Fig2 => RunOutput { tables: preset_curves(cfg)?, passed: true },
        Command::Verify => run_verify(cfg, verify)?,
    })
}

fn solve(bath: &BathParams) -> Result<OrderSolution, CliError> {
    Ok(solve_order(bath, DEFAULT_TOL)?)
}

pub fn phase(cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = cfg
        .absolute_temperatures()
        .par_iter()
        .map(|&t| {
            let bath = cfg.bath(t)?;
            let sol = solve(&bath)?;
            Ok(vec![num(t), num(bath.reduced_temperature()), num(sol.theta), num(sol.m), sol.phase.as_str().into()])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table {
        name: "phase.csv".into(),
        header: cfg.header(&[]),
        columns: strings(&["T", "T_over_Tc", "theta", "m", "phase"]),
        rows,
    })
}

/// `τ`, or infinity when the bath does not decohere the qubit.
fn tau_or_inf(sol: &OrderSolution, bath: &BathParams, sys: &SystemParams) -> f64 {
    coherence_time(sol, bath, sys).unwrap_or(f64::INFINITY)
}

pub fn coherence(cfg: &RunConfig) -> Result<Table, CliError> {
    let bath = cfg.bath(cfg.single_temperature()?)?;
    let sol = solve(&bath)?;
    let sys = cfg.system()?;
    let tau = tau_or_inf(&sol, &bath, &sys);
    let rows = cfg
        .times()
        .par_iter()
        .map(|&t| {
            let asym = coherence_magnitude_asymptotic(t, &sol, &bath, &sys);
            let r = match cfg.mode {
                ModeKind::Finite => coherence_factor_with_field(t, cfg.n, &sol, &bath, &sys)?,
                ModeKind::Asymptotic => Complex64::from_polar(asym, sys.mu0 * t),
            };
            Ok(vec![num(t), num(sys.j0 * t), num(r.re), num(r.im), num(r.norm()), num(asym), num(tau)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table {
        name: "coherence.csv".into(),
        header: cfg.header(&[]),
        columns: strings(&["t", "J0_t", "re_r", "im_r", "abs_r", "abs_r_asymptotic", "tau"]),
        rows,
    })
}

/// Concurrence curve at one absolute temperature.
pub fn concurrence_curve(cfg: &RunConfig, temperature: f64, name: &str) -> Result<Table, CliError> {
    let bath = cfg.bath(temperature)?;
    let sol = solve(&bath)?;
    let sys = cfg.system()?;
    let state = cfg.initial.state();
    let mode = cfg.coeff_mode();
    let with_reference = cfg.initial.is_case(4);
    let rows = cfg
        .times()
        .par_iter()
        .map(|&t| {
            let coeffs = dephasing_coeffs(t, mode, &sol, &bath, &sys)?;
            let c = concurrence(&evolve_reduced(&state, t, sys.xi0, &coeffs)?)?.c;
            let mut row = vec![num(t), num(sys.j0 * t), num(c), num(coeffs.a.norm()), num(coeffs.b.norm())];
            if with_reference {
                row.push(num((0.5 * sys.xi0 * t).sin().abs()));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut columns = strings(&["t", "J0_t", "C", "abs_A", "abs_B"]);
    if with_reference {
        columns.push("C_no_bath".into());
    }
    Ok(Table {
        name: format!("{name}.csv"),
        header: cfg.header(&[]),
        columns,
        rows,
    })
}

/// One concurrence file per temperature, named after the preset.
fn preset_curves(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let (label, values) = match &cfg.temperatures {
        Temperatures::Reduced(v) => ("T_over_Tc", v.clone()),
        Temperatures::Absolute(v) => ("T", v.clone()),
    };
    values
        .par_iter()
        .map(|&v| {
            let mut one = cfg.clone();
            one.temperatures = match cfg.temperatures {
                Temperatures::Reduced(_) => Temperatures::Reduced(vec![v]),
                Temperatures::Absolute(_) => Temperatures::Absolute(vec![v]),
            };
            let name = format!("{}_{label}_{v}", cfg.command.as_str());
            concurrence_curve(&one, one.single_temperature()?, &name)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub const VERIFY_TOL: f64 = 1e-10;
pub const VERIFY_BATH_SIZES: [usize; 4] = [1, 2, 4, 6];
pub const VERIFY_EXTENDED_SIZE: usize = 8;
/// Largest bath for the dense cross-check.
pub const VERIFY_DENSE_MAX: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub n: usize,
    pub max_error: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error < VERIFY_TOL
    }
}

fn verify_states() -> Vec<PureState2Q> {
    let mut states: Vec<PureState2Q> = (1..=4).map(case_state).collect();
    states.push(
        PureState2Q::normalized([
            Complex64::new(0.4, 0.1),
            Complex64::new(-0.3, 0.5),
            Complex64::new(0.2, -0.6),
            Complex64::new(0.7, 0.2),
        ])
        .expect("fixed state is non-zero"),
    );
    states
}

fn max_entry_diff(a: &TwoQubitDensity, b: &TwoQubitDensity) -> f64 {
    (a.0 - b.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn closed_coeffs(
    t: f64,
    n: usize,
    sol: &OrderSolution,
    bath: &BathParams,
    sys: &SystemParams,
    corrupt: f64,
) -> Result<DephasingCoeffs, CliError> {
    let mut c = dephasing_coeffs(t, CoeffMode::Finite(n as u64), sol, bath, sys)?;
    c.a += corrupt;
    Ok(c)
}

/// Oracle-vs-closed-form checks at one bath size.
pub fn verify_bath_size(
    n: usize,
    bath: &BathParams,
    sys: &SystemParams,
    times: &[f64],
    corrupt: f64,
) -> Result<Vec<CheckResult>, CliError> {
    let sol = solve(bath)?;
    let mut reduced = 0.0f64;
    let mut coeffs = 0.0f64;
    let mut a_d = 0.0f64;
    let mut dense = 0.0f64;
    for state in verify_states() {
        let ocfg = OracleConfig::new(n, *bath, *sys, state, times.to_vec())?;
        let exact = simulate_exact(&ocfg)?;
        let raw = extract_coeffs_raw(&ocfg)?;
        for ((&t, rho), c) in times.iter().zip(&exact).zip(&raw) {
            let closed = closed_coeffs(t, n, &sol, bath, sys, corrupt)?;
            reduced = reduced.max(max_entry_diff(rho, &evolve_reduced(&state, t, sys.xi0, &closed)?));
            coeffs = coeffs.max((c.a - closed.a).norm()).max((c.b - closed.b).norm());
            a_d = a_d.max(c.a_d_gap());
        }
        if n <= VERIFY_DENSE_MAX {
            for (f, d) in exact.iter().zip(&simulate_dense(&ocfg)?) {
                dense = dense.max(max_entry_diff(f, d));
            }
        }
    }

    let single = single_qubit_coherence_exact(n, bath, sys, times)?;
    let mut single_err = 0.0f64;
    for (&t, r) in times.iter().zip(&single) {
        single_err = single_err.max((coherence_factor_with_field(t, n as u64, &sol, bath, sys)? - r).norm());
    }

    let mut out = vec![
        CheckResult { name: "reduced_state_vs_closed_form", n, max_error: reduced },
        CheckResult { name: "coeffs_vs_closed_form", n, max_error: coeffs },
        CheckResult { name: "a_equals_d", n, max_error: a_d },
        CheckResult { name: "single_qubit_vs_closed_form", n, max_error: single_err },
    ];
    if n <= VERIFY_DENSE_MAX {
        let dense_single = single_qubit_coherence_dense(n, bath, sys, times)?;
        let single_dense_err = single.iter().zip(&dense_single).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        out.push(CheckResult { name: "dense_vs_factorised", n, max_error: dense });
        out.push(CheckResult { name: "single_qubit_dense_vs_trace", n, max_error: single_dense_err });
    }
    Ok(out)
}

fn run_verify(cfg: &RunConfig, opts: VerifyOptions) -> Result<RunOutput, CliError> {
    let bath = cfg.bath(cfg.single_temperature()?)?;
    let sys = cfg.system()?;
    let times = cfg.times();
    let mut sizes = VERIFY_BATH_SIZES.to_vec();
    if opts.extended {
        sizes.push(VERIFY_EXTENDED_SIZE);
    }
    let results: Vec<CheckResult> = sizes
        .par_iter()
        .map(|&n| verify_bath_size(n, &bath, &sys, &times, opts.corrupt))
        .collect::<Result<Vec<_>, CliError>>()?
        .into_iter()
        .flatten()
        .collect();
    let passed = results.iter().all(CheckResult::passed);
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                r.n.to_string(),
                format!("{:e}", r.max_error),
                format!("{VERIFY_TOL:e}"),
                if r.passed() { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    Ok(RunOutput {
        tables: vec![Table {
            name: "verify.csv".into(),
            header: cfg.header(&[]),
            columns: strings(&["check", "N", "max_error", "tolerance", "status"]),
            rows,
        }],
        passed,
    })
}
