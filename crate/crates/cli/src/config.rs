//! Command-line flags, the optional JSON config file, and the merged
//! [`RunConfig`].
//!
//! Precedence: flag > config file > built-in default.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrma_core::fourier::Window;
use qrma_core::{ModelParams, Truncation};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qrma",
    version,
    about = "Spectra and dynamics of the quantum Rabi model with the A² term"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Lowest levels of both parity sectors over a coupling sweep.
    Spectrum,
    /// Ground-state energy over a coupling sweep.
    Ground,
    /// Ground-state photon number over a coupling sweep.
    Photon,
    /// Inverse population W(t) from a coherent field and a lower-state atom.
    Dynamics,
    /// Fourier magnitude of W(t).
    Wspec,
    /// Couplings where E⁻ₙ₊₂ meets E⁻ₙ.
    Crossings,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Ground => "ground",
            Command::Photon => "photon",
            Command::Dynamics => "dynamics",
            Command::Wspec => "wspec",
            Command::Crossings => "crossings",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowArg {
    #[default]
    None,
    Hann,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::None => Window::None,
            WindowArg::Hann => Window::Hann,
        }
    }
}

/// Which time series the long-format `wspec` output transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    #[default]
    Exact,
    Rwa,
}

/// `auto` or a fixed basis size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NMax(pub Truncation);

impl FromStr for NMax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(NMax(Truncation::Auto));
        }
        s.parse::<usize>()
            .map(|n| NMax(Truncation::Fixed(n)))
            .map_err(|_| format!("expected \"auto\" or a non-negative integer, got {s:?}"))
    }
}

impl<'de> Deserialize<'de> for NMax {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(NMax(Truncation::Fixed(n))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Atomic level splitting Δ.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub big_delta: Option<f64>,
    /// Strength δ of the A² term (0 or ≥ 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub osc_delta: Option<f64>,
    /// Single coupling; shorthand for equal --f-min/--f-max with one step.
    #[arg(long = "f", global = true, allow_negative_numbers = true, conflicts_with_all = ["f_min", "f_max", "f_steps"])]
    pub f: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub f_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub f_max: Option<f64>,
    #[arg(long, global = true)]
    pub f_steps: Option<usize>,
    /// Levels per parity sector (spectrum) or largest n (crossings).
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Basis size: `auto` or an integer.
    #[arg(long, global = true)]
    pub n_max: Option<NMax>,
    /// Coherent amplitude ε of the initial field.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub window: Option<WindowArg>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// wspec: sweep the coupling grid and emit `f,omega,mag`.
    #[arg(long, global = true)]
    pub long: bool,
    /// wspec --long: transform the exact or the rotating-wave series.
    #[arg(long, global = true, value_enum)]
    pub series: Option<Series>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub big_delta: Option<f64>,
    pub osc_delta: Option<f64>,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub f_steps: Option<usize>,
    pub levels: Option<usize>,
    pub n_max: Option<NMax>,
    pub epsilon: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub window: Option<WindowArg>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub long: Option<bool>,
    pub series: Option<Series>,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub big_delta: f64,
    pub osc_delta: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub f_steps: usize,
    pub levels: usize,
    pub n_max: Truncation,
    pub epsilon: f64,
    pub t_max: f64,
    pub samples: usize,
    pub window: WindowArg,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub long: bool,
    pub series: Series,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        Self {
            command,
            big_delta: 1.0,
            osc_delta: 1.0,
            f_min: 0.0,
            f_max: 1.0,
            f_steps: 101,
            levels: 6,
            n_max: Truncation::Auto,
            epsilon: 5.0,
            t_max: 100.0,
            samples: 4096,
            window: WindowArg::None,
            format: Format::Csv,
            out: None,
            long: false,
            series: Series::Exact,
        }
    }

    /// Layer a config file and then the flags over the defaults.
    pub fn resolve(command: Command, file: &FileConfig, flags: &Flags) -> Self {
        let mut c = Self::defaults(command);
        macro_rules! layer {
            ($($field:ident),*) => {
                $(
                    if let Some(v) = file.$field.clone() { c.$field = v.into(); }
                    if let Some(v) = flags.$field.clone() { c.$field = v.into(); }
                )*
            };
        }
        layer!(
            big_delta, osc_delta, f_min, f_max, f_steps, levels, epsilon, t_max, samples, window,
            format, series
        );
        if let Some(v) = flags.n_max.or(file.n_max) {
            c.n_max = v.0;
        }
        if let Some(f) = flags.f {
            c.f_min = f;
            c.f_max = f;
            c.f_steps = 1;
        }
        c.out = flags.out.clone().or_else(|| file.out.clone());
        c.long = flags.long || file.long.unwrap_or(false);
        c
    }

    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let cfg = Self::resolve(cli.command, &file, &cli.flags);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Model parameters at coupling `f_min`.
    pub fn base_params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(self.big_delta, self.osc_delta, self.f_min)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Check every field against the preconditions of the command it feeds.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.base_params()?;
        if !self.f_max.is_finite() || self.f_max < 0.0 {
            return bad(format!("f_max must be finite and >= 0, got {}", self.f_max));
        }
        if self.f_steps == 0 {
            return bad("f_steps must be >= 1".into());
        }
        if self.levels == 0 {
            return bad("levels must be >= 1".into());
        }
        if let Truncation::Fixed(n) = self.n_max {
            if n < 2 {
                return bad(format!("n_max must be >= 2, got {n}"));
            }
            if matches!(self.command, Command::Spectrum | Command::Crossings) && n < self.levels + 3
            {
                return bad(format!(
                    "n_max = {n} is too small for {} levels",
                    self.levels
                ));
            }
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return bad(format!(
                "epsilon must be finite and >= 0, got {}",
                self.epsilon
            ));
        }
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return bad(format!("t_max must be finite and > 0, got {}", self.t_max));
        }
        let min_samples = if self.command == Command::Wspec { 4 } else { 2 };
        if self.samples < min_samples {
            return bad(format!(
                "samples must be >= {min_samples}, got {}",
                self.samples
            ));
        }
        Ok(())
    }
}
