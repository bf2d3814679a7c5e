//! Argument parsing and output plumbing for the `spinbath` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{run, RunOutput, VerifyOptions};
use crate::config::{Command, Overrides, RunConfig};
use crate::{CliError, EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED};

#[derive(Debug, Parser)]
#[command(name = "spinbath", version, about = "Qubit dephasing and concurrence in a mean-field Ising spin bath")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Order parameter Θ, m against temperature.
    Phase(Flags),
    /// Single-qubit coherence factor r(t), finite and asymptotic.
    Coherence(Flags),
    /// Two-qubit concurrence C(t) with |A(t)| and |B(t)|.
    Concurrence(Flags),
    /// Concurrence curves at T/Tc = 0.75, 0.5, 0.35, 0.25 (one file each).
    Fig1(Flags),
    /// Case-4 concurrence at T/Tc = 0.25, ξ0 = 0.3.
    Fig2(Flags),
    /// Cross-check the closed forms against exact small-bath evolution.
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Also check a bath of 8 spins.
        #[arg(long)]
        extended: bool,
        #[arg(long, hide = true, default_value_t = 0.0)]
        corrupt: f64,
    },
}

/// Flags shared by every subcommand. Values use the config-file syntax.
#[derive(Debug, Args)]
struct Flags {
    /// Bath coupling J.
    #[arg(long = "J", allow_hyphen_values = true)]
    j: Option<String>,
    /// Transverse field w.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Absolute temperature(s), comma separated.
    #[arg(long = "T", allow_hyphen_values = true, conflicts_with = "t_over_tc")]
    t: Option<String>,
    /// Temperature(s) in units of Tc = J/2, comma separated.
    #[arg(long = "T-over-Tc", allow_hyphen_values = true)]
    t_over_tc: Option<String>,
    /// System-bath coupling J0.
    #[arg(long = "J0", allow_hyphen_values = true)]
    j0: Option<String>,
    /// Qubit-qubit coupling ξ0.
    #[arg(long, allow_hyphen_values = true)]
    xi0: Option<String>,
    /// Local field μ0 on the qubit.
    #[arg(long, allow_hyphen_values = true)]
    mu0: Option<String>,
    /// Preset initial state 1-4.
    #[arg(long, conflicts_with = "amplitudes")]
    case: Option<String>,
    /// Amplitudes of |00>,|01>,|10>,|11>, e.g. 1,0,0,1 or 0.5+0.5i,0,0,0.5.
    #[arg(long, allow_hyphen_values = true)]
    amplitudes: Option<String>,
    /// finite | asymptotic
    #[arg(long)]
    mode: Option<String>,
    /// Bath size for finite mode.
    #[arg(long = "N")]
    n: Option<String>,
    /// End of the time grid in units of 1/J0.
    #[arg(long = "t-max")]
    t_max: Option<String>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<String>,
    /// Output file, or directory for fig1/fig2.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        let mut o = Overrides::default();
        let pairs = [
            ("J", &self.j),
            ("w", &self.w),
            ("T", &self.t),
            ("T-over-Tc", &self.t_over_tc),
            ("J0", &self.j0),
            ("xi0", &self.xi0),
            ("mu0", &self.mu0),
            ("case", &self.case),
            ("amplitudes", &self.amplitudes),
            ("mode", &self.mode),
            ("N", &self.n),
            ("t-max", &self.t_max),
            ("points", &self.points),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                o.push(k, v.clone());
            }
        }
        if let Some(out) = &self.out {
            o.push("out", out.display().to_string());
        }
        o
    }
}

/// Builds the run configuration: defaults, then config file, then flags.
fn build_config(command: Command, flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults(command);
    let mut layers = match &flags.config {
        Some(path) => Overrides::load(path)?,
        None => Overrides::default(),
    };
    layers.extend(flags.overrides());
    layers.apply(&mut cfg)?;
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn emit(cfg: &RunConfig, output: &RunOutput, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cfg.command {
        Command::Fig1 | Command::Fig2 => {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            for table in &output.tables {
                let path = dir.join(&table.name);
                write_file(&path, &table.to_csv()?)?;
                writeln!(stdout, "{}", path.display())?;
            }
        }
        _ => {
            for table in &output.tables {
                let text = table.to_csv()?;
                match &cfg.out {
                    Some(path) => write_file(path, &text)?,
                    None => stdout.write_all(text.as_bytes())?,
                }
            }
        }
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let (command, flags, verify) = match &cli.command {
        Sub::Phase(f) => (Command::Phase, f, VerifyOptions::default()),
        Sub::Coherence(f) => (Command::Coherence, f, VerifyOptions::default()),
        Sub::Concurrence(f) => (Command::Concurrence, f, VerifyOptions::default()),
        Sub::Fig1(f) => (Command::Fig1, f, VerifyOptions::default()),
        Sub::Fig2(f) => (Command::Fig2, f, VerifyOptions::default()),
        Sub::Verify { flags, extended, corrupt } => {
            (Command::Verify, flags, VerifyOptions { extended: *extended, corrupt: *corrupt })
        }
    };
    let cfg = build_config(command, flags)?;
    let output = run(&cfg, verify)?;
    emit(&cfg, &output, stdout)?;
    if command == Command::Verify && cfg.out.is_some() {
        // Keep the report visible when it goes to a file.
        stdout.write_all(output.tables[0].to_csv()?.as_bytes())?;
    }
    Ok(if output.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
