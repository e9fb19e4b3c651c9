//! Command-line flags, the key=value config file, and their merge.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dce",
    version,
    about = "Particle creation by an accelerated mirror in 1+1 dimensions",
    args_override_self = true
)]
pub struct Cli {
    /// key=value file; keys are long flag names, `#` starts a comment.
    /// Flags given on the command line win over the file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bogoliubov coefficients on an (omega, omega') grid.
    Beta(BetaArgs),
    /// Particle number per mode on an omega grid.
    Spectrum(SpectrumArgs),
    /// Total radiated energy, numeric and closed form.
    Energy(EnergyArgs),
    /// Bose-Einstein / Fermi-Dirac classification of a spectrum.
    Classify(ClassifyArgs),
    /// Run the built-in verification battery.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Beta(_) => "beta",
            Command::Spectrum(_) => "spectrum",
            Command::Energy(_) => "energy",
            Command::Classify(_) => "classify",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Numeric,
    Closed,
}

/// Accepts `inf` for the perfect mirror.
fn parse_alpha(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = t.parse().map_err(|e| format!("{e}"))?;
    if v.is_nan() || v < 0.0 {
        return Err("alpha must be >= 0 or inf".into());
    }
    Ok(v)
}

fn ser_alpha<S: Serializer>(a: &f64, s: S) -> Result<S::Ok, S::Error> {
    if a.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*a)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Physics {
    /// Acceleration scale of the trajectory.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// End of the accelerated phase.
    #[arg(long, default_value_t = 30.0)]
    pub u0: f64,
    /// Coupling; `inf` selects the perfect mirror.
    #[arg(long, default_value = "1", value_parser = parse_alpha)]
    #[serde(serialize_with = "ser_alpha")]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Numerics {
    /// Relative tolerance; the default depends on the command.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance; the default depends on the command.
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Panel budget of each adaptive integration.
    #[arg(long, default_value_t = 10_000)]
    pub max_subdivisions: usize,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write data here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OmegaGrid {
    /// Single out-frequency; excludes the range flags.
    #[arg(long, conflicts_with_all = ["omega_min", "omega_max"])]
    pub omega: Option<f64>,
    #[arg(long, requires = "omega_max")]
    pub omega_min: Option<f64>,
    #[arg(long, requires = "omega_min")]
    pub omega_max: Option<f64>,
    #[arg(long, default_value_t = 8)]
    pub omega_count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub omega_spacing: Spacing,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OmegaPrimeGrid {
    /// Single in-frequency; excludes the range flags.
    #[arg(long, conflicts_with_all = ["omega_p_min", "omega_p_max"])]
    pub omega_p: Option<f64>,
    #[arg(long, requires = "omega_p_max")]
    pub omega_p_min: Option<f64>,
    #[arg(long, requires = "omega_p_min")]
    pub omega_p_max: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub omega_p_count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub omega_p_spacing: Spacing,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaArgs {
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub omega: OmegaGrid,
    #[command(flatten)]
    pub omega_p: OmegaPrimeGrid,
    /// Also compute the left-in coefficient (semitransparent mirror only).
    #[arg(long)]
    pub rl: bool,
    #[command(flatten)]
    pub numerics: Numerics,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub omega: OmegaGrid,
    #[command(flatten)]
    pub numerics: Numerics,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub numerics: Numerics,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    /// Spectrum CSV as written by `spectrum`; computed from the grid when absent.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Column of the input CSV holding the occupation.
    #[arg(long, default_value = "n_numeric")]
    pub column: String,
    /// How to compute the spectrum when no input is given.
    #[arg(long, value_enum, default_value_t = Source::Numeric)]
    pub source: Source,
    /// Power p of the omega^p prefactor in the fitted model.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub omega_power: f64,
    /// Starting temperature scale of the fit.
    #[arg(long)]
    pub k_init: Option<f64>,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub omega: OmegaGrid,
    #[command(flatten)]
    pub numerics: Numerics,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Run only these groups (repeatable); all groups by default.
    #[arg(long)]
    pub group: Vec<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub output: Output,
}

const COMMANDS: [&str; 5] = ["beta", "spectrum", "energy", "classify", "verify"];

/// Parses one config file into `(key, value)` pairs.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("config line {}: expected key=value", n + 1)));
        };
        let key = key.trim();
        if key.is_empty() || key == "config" {
            return Err(CliError::Config(format!("config line {}: invalid key `{key}`", n + 1)));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Long flag names of a subcommand, and whether each takes a value.
fn subcommand_flags(name: &str) -> Vec<(String, bool)> {
    let cmd = Cli::command();
    let Some(sub) = cmd.find_subcommand(name) else {
        return Vec::new();
    };
    sub.get_arguments()
        .filter_map(|a| {
            a.get_long().map(|l| {
                let takes = a.get_action().takes_values();
                (l.to_string(), takes)
            })
        })
        .collect()
}

/// Splices config-file entries in front of the user's flags so that the
/// command line wins. Keys belonging to other subcommands are skipped; keys
/// no subcommand knows are an error.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut args: Vec<OsString> = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    if let Some(bin) = it.next() {
        args.push(bin);
    }
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().to_string();
        if s == "--config" {
            let path = it
                .next()
                .ok_or_else(|| CliError::Config("--config needs a path".into()))?;
            config = Some(PathBuf::from(path));
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else {
            args.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(args);
    };
    let entries = read_config_file(&path)?;
    let Some(pos) = args
        .iter()
        .position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        // let clap report the missing subcommand
        return Ok(args);
    };
    let sub = args[pos].to_string_lossy().to_string();
    let flags = subcommand_flags(&sub);
    let known: Vec<String> = COMMANDS
        .iter()
        .flat_map(|c| subcommand_flags(c).into_iter().map(|(l, _)| l))
        .collect();
    let mut injected = Vec::new();
    for (key, value) in entries {
        match flags.iter().find(|(l, _)| *l == key) {
            Some((_, true)) => {
                injected.push(OsString::from(format!("--{key}")));
                injected.push(OsString::from(value));
            }
            Some((_, false)) => match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "" => injected.push(OsString::from(format!("--{key}"))),
                "false" | "no" | "0" => {}
                _ => {
                    return Err(CliError::Config(format!(
                        "config key `{key}` is a switch; use true or false"
                    )))
                }
            },
            None if known.contains(&key) => {}
            None => return Err(CliError::Config(format!("unknown config key `{key}`"))),
        }
    }
    let tail = args.split_off(pos + 1);
    args.extend(injected);
    args.extend(tail);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_text() {
        let e = parse_config_text("# header\nk = 0.5  # trailing\n\nalpha=inf\n").unwrap();
        assert_eq!(e, vec![("k".into(), "0.5".into()), ("alpha".into(), "inf".into())]);
        assert!(parse_config_text("k 0.5").is_err());
        assert!(parse_config_text("=3").is_err());
    }

    #[test]
    fn alpha_parser() {
        assert_eq!(parse_alpha("inf"), Ok(f64::INFINITY));
        assert_eq!(parse_alpha("2.5"), Ok(2.5));
        assert!(parse_alpha("-1").is_err());
        assert!(parse_alpha("nan").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "k = 2\nu0 = 7\nrl = true\nomega-p = 80\n").unwrap();
        let argv = merge_config(os(&["dce", "beta", "--config", path.to_str().unwrap(), "--k", "3"])).unwrap();
        let cli = Cli::try_parse_from(argv).unwrap();
        let Command::Beta(b) = cli.command else { panic!() };
        assert_eq!(b.physics.k, 3.0);
        assert_eq!(b.physics.u0, 7.0);
        assert!(b.rl);
        assert_eq!(b.omega_p.omega_p, Some(80.0));

        // a beta-only key is skipped for energy
        let argv = merge_config(os(&["dce", "energy", "--config", path.to_str().unwrap()])).unwrap();
        assert!(Cli::try_parse_from(argv).is_ok());

        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(merge_config(os(&["dce", "energy", "--config", path.to_str().unwrap()])).is_err());
    }
}
