//! Run configuration: per-command defaults, overridden by a `key=value`
//! config file, overridden in turn by command-line flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use spinbath::{BathParams, CoeffMode, PureState2Q, SystemParams};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Phase,
    Coherence,
    Concurrence,
    Fig1,
    Fig2,
    Verify,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Phase => "phase",
            Command::Coherence => "coherence",
            Command::Concurrence => "concurrence",
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Temperatures {
    Absolute(Vec<f64>),
    /// In units of `T_c = J/2`.
    Reduced(Vec<f64>),
}

impl Temperatures {
    pub fn len(&self) -> usize {
        match self {
            Temperatures::Absolute(v) | Temperatures::Reduced(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Absolute temperatures for coupling `j`.
    pub fn absolute(&self, j: f64) -> Vec<f64> {
        match self {
            Temperatures::Absolute(v) => v.clone(),
            Temperatures::Reduced(v) => v.iter().map(|r| r * spinbath::mean_field::critical_temperature(j)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    /// One of the four preset families.
    Case(u8),
    Amplitudes(PureState2Q),
}

impl Initial {
    pub fn state(&self) -> PureState2Q {
        match *self {
            Initial::Case(c) => case_state(c),
            Initial::Amplitudes(s) => s,
        }
    }

    pub fn is_case(&self, c: u8) -> bool {
        *self == Initial::Case(c)
    }
}

/// Preset states: 1 `(|01⟩+|10⟩)/√2`, 2 `(|00⟩+|11⟩)/√2`, 3 `|1⟩(|0⟩+|1⟩)/√2`, 4 `|++⟩`.
pub fn case_state(case: u8) -> PureState2Q {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b, c, d) = match case {
        1 => (0.0, h, h, 0.0),
        2 => (h, 0.0, 0.0, h),
        3 => (0.0, 0.0, h, h),
        _ => (0.5, 0.5, 0.5, 0.5),
    };
    PureState2Q::from_real(a, b, c, d).expect("preset states are normalised")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Finite,
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub j: f64,
    pub w: f64,
    pub temperatures: Temperatures,
    pub j0: f64,
    pub xi0: f64,
    pub mu0: f64,
    pub initial: Initial,
    pub mode: ModeKind,
    pub n: u64,
    /// End of the time grid in units of `1/J₀` (raw time when `J₀ = 0`).
    pub t_max: f64,
    pub points: usize,
    pub out: Option<PathBuf>,
}

pub const FIG1_TEMPERATURES: [f64; 4] = [0.75, 0.5, 0.35, 0.25];

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let mut cfg = Self {
            command,
            j: 2.0,
            w: 0.1,
            temperatures: Temperatures::Reduced(vec![0.5]),
            j0: 1.0,
            xi0: 0.0,
            mu0: 0.0,
            initial: Initial::Case(2),
            mode: ModeKind::Asymptotic,
            n: 10_000,
            t_max: 8.0,
            points: 201,
            out: None,
        };
        match command {
            Command::Phase => {
                cfg.temperatures = Temperatures::Reduced((5..=20).map(|k| k as f64 / 20.0).collect());
            }
            Command::Fig1 => {
                cfg.temperatures = Temperatures::Reduced(FIG1_TEMPERATURES.to_vec());
                cfg.points = 200;
            }
            Command::Fig2 => {
                cfg.temperatures = Temperatures::Reduced(vec![0.25]);
                cfg.initial = Initial::Case(4);
                cfg.xi0 = 0.3;
                cfg.t_max = 60.0;
                cfg.points = 1201;
            }
            Command::Verify => {
                // The closed forms are exact for the Ising bath.
                cfg.w = 0.0;
                cfg.mode = ModeKind::Finite;
                cfg.xi0 = 0.3;
                cfg.points = 20;
            }
            Command::Coherence | Command::Concurrence => {}
        }
        cfg
    }

    pub fn coeff_mode(&self) -> CoeffMode {
        match self.mode {
            ModeKind::Finite => CoeffMode::Finite(self.n),
            ModeKind::Asymptotic => CoeffMode::Asymptotic,
        }
    }

    pub fn bath(&self, temperature: f64) -> Result<BathParams, CliError> {
        Ok(BathParams::new(self.j, self.w, temperature)?)
    }

    pub fn system(&self) -> Result<SystemParams, CliError> {
        Ok(SystemParams::new(self.j0, self.mu0, self.xi0)?)
    }

    pub fn absolute_temperatures(&self) -> Vec<f64> {
        self.temperatures.absolute(self.j)
    }

    /// The single temperature of commands that produce one curve.
    pub fn single_temperature(&self) -> Result<f64, CliError> {
        match self.absolute_temperatures().as_slice() {
            [t] => Ok(*t),
            other => Err(CliError::Invalid(format!(
                "{} takes exactly one temperature, got {}",
                self.command.as_str(),
                other.len()
            ))),
        }
    }

    /// Evenly spaced times `0..t_max/J₀`.
    pub fn times(&self) -> Vec<f64> {
        let scale = if self.j0 > 0.0 { 1.0 / self.j0 } else { 1.0 };
        let last = (self.points - 1) as f64;
        (0..self.points).map(|k| self.t_max * (k as f64 / last) * scale).collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(CliError::Invalid(format!("t-max must be positive, got {}", self.t_max)));
        }
        if self.points < 2 {
            return Err(CliError::Invalid(format!("points must be >= 2, got {}", self.points)));
        }
        if self.n == 0 {
            return Err(CliError::Invalid("N must be >= 1".into()));
        }
        if self.temperatures.is_empty() {
            return Err(CliError::Invalid("no temperatures given".into()));
        }
        let times = self.times();
        if !times.windows(2).all(|w| w[1] > w[0]) {
            return Err(CliError::Invalid("time grid is not strictly increasing".into()));
        }
        self.system()?;
        for t in self.absolute_temperatures() {
            self.bath(t)?;
        }
        Ok(())
    }

    /// Parameter pairs in config-file syntax, `out` excluded.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![("J", fmt(self.j)), ("w", fmt(self.w))];
        match &self.temperatures {
            Temperatures::Absolute(t) => v.push(("T", join(t))),
            Temperatures::Reduced(t) => v.push(("T-over-Tc", join(t))),
        }
        v.push(("J0", fmt(self.j0)));
        v.push(("xi0", fmt(self.xi0)));
        v.push(("mu0", fmt(self.mu0)));
        match self.initial {
            Initial::Case(c) => v.push(("case", c.to_string())),
            Initial::Amplitudes(s) => {
                v.push(("amplitudes", s.amps.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(",")))
            }
        }
        v.push(("mode", match self.mode {
            ModeKind::Finite => "finite".into(),
            ModeKind::Asymptotic => "asymptotic".into(),
        }));
        v.push(("N", self.n.to_string()));
        v.push(("t-max", fmt(self.t_max)));
        v.push(("points", self.points.to_string()));
        v
    }

    /// `# command=… key=value …` CSV header line.
    pub fn header(&self, extra: &[(&str, String)]) -> String {
        let mut s = format!("# command={}", self.command.as_str());
        for (k, v) in self.pairs().iter().map(|(k, v)| (*k, v)).chain(extra.iter().map(|(k, v)| (*k, v))) {
            let _ = write!(s, " {k}={v}");
        }
        s
    }

    /// Config-file text that re-parses to this configuration.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.pairs() {
            let _ = writeln!(s, "{k}={v}");
        }
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out={}", out.display());
        }
        s
    }
}

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| fmt(*x)).collect::<Vec<_>>().join(",")
}

/// Parsed `key=value` settings, applied on top of defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    entries: Vec<(String, String)>,
}

impl Overrides {
    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    /// Parses config-file text. Blank lines and `#` comments are skipped;
    /// a line may hold several whitespace-separated `key=value` pairs.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for item in line.split_whitespace() {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| CliError::Invalid(format!("line {}: expected key=value, got {item:?}", lineno + 1)))?;
                out.push(k.trim(), v.trim());
            }
        }
        Ok(out)
    }

    /// Parses a CSV header line (`# command=… key=value …`).
    pub fn from_header(line: &str) -> Result<Self, CliError> {
        let body = line.trim_start_matches('#');
        let mut out = Self::parse(body)?;
        out.entries.retain(|(k, _)| k != "command");
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn extend(&mut self, other: Overrides) {
        self.entries.extend(other.entries);
    }

    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        for (k, v) in &self.entries {
            apply_one(cfg, k, v)?;
        }
        Ok(())
    }
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Invalid(format!("invalid value for {key}: {value:?}"))
}

fn float(key: &str, value: &str) -> Result<f64, CliError> {
    value.parse::<f64>().map_err(|_| bad(key, value))
}

fn float_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|s| float(key, s.trim())).collect()
}

fn parse_amplitudes(value: &str) -> Result<PureState2Q, CliError> {
    let parts: Vec<Complex64> = value
        .split(',')
        .map(|s| s.trim().parse::<Complex64>().map_err(|_| bad("amplitudes", value)))
        .collect::<Result<_, _>>()?;
    let amps: [Complex64; 4] = parts
        .try_into()
        .map_err(|_| CliError::Invalid(format!("amplitudes needs four values, got {value:?}")))?;
    // Already-normalised input is kept bit-for-bit so that configs round-trip.
    let [a, b, c, d] = amps;
    Ok(PureState2Q::new(a, b, c, d).or_else(|_| PureState2Q::normalized(amps))?)
}

fn apply_one(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), CliError> {
    match key {
        "J" => cfg.j = float(key, value)?,
        "w" => cfg.w = float(key, value)?,
        "T" => cfg.temperatures = Temperatures::Absolute(float_list(key, value)?),
        "T-over-Tc" | "T_over_Tc" => cfg.temperatures = Temperatures::Reduced(float_list(key, value)?),
        "J0" => cfg.j0 = float(key, value)?,
        "xi0" => cfg.xi0 = float(key, value)?,
        "mu0" => cfg.mu0 = float(key, value)?,
        "case" => match value.parse::<u8>() {
            Ok(c @ 1..=4) => cfg.initial = Initial::Case(c),
            _ => return Err(bad(key, value)),
        },
        "amplitudes" => cfg.initial = Initial::Amplitudes(parse_amplitudes(value)?),
        "mode" => {
            cfg.mode = match value {
                "finite" => ModeKind::Finite,
                "asymptotic" => ModeKind::Asymptotic,
                _ => return Err(bad(key, value)),
            }
        }
        "N" => cfg.n = value.parse().map_err(|_| bad(key, value))?,
        "t-max" | "t_max" => cfg.t_max = float(key, value)?,
        "points" => cfg.points = value.parse().map_err(|_| bad(key, value))?,
        "out" => cfg.out = Some(PathBuf::from(value)),
        _ => return Err(CliError::Invalid(format!("unknown key {key:?}"))),
    }
    Ok(())
}
