//! Run and sweep configuration.
//!
//! Settings come from command-line flags and, optionally, a flat `key = value`
//! file (one key per line, `#` comments, keys spelled like the long flags).
//! Flags win over the file.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use bjj_core::spin::{coherent_state, StateVector};
use bjj_core::ModelParams;
use clap::{Args, ValueEnum};

use crate::{CliError, Result};

pub const DEFAULT_PARTICLES: usize = 200;
pub const DEFAULT_STEPS: usize = 400;
pub const DEFAULT_FIT_DEGREE: usize = 6;
pub const DEFAULT_FIT_WINDOW: f64 = 0.2;
pub const DEFAULT_FIT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum StateKind {
    /// θ = π/2, φ = π
    Pi,
    /// θ = π/2, φ = 0
    Zero,
    /// θ, φ from `--theta`, `--phi`
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    CssPi,
    CssZero,
    Custom { theta: f64, phi: f64 },
}

impl InitialState {
    pub fn angles(&self) -> (f64, f64) {
        match *self {
            Self::CssPi => (FRAC_PI_2, PI),
            Self::CssZero => (FRAC_PI_2, 0.0),
            Self::Custom { theta, phi } => (theta, phi),
        }
    }

    pub fn prepare(&self, n_particles: usize) -> Result<StateVector> {
        let (theta, phi) = self.angles();
        Ok(coherent_state(n_particles, theta, phi)?)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::CssPi => "pi",
            Self::CssZero => "zero",
            Self::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum OutputKind {
    Witness,
    Covariance,
    Wigner,
    TaylorFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Comparison {
    /// Gaussian phase-model closed forms.
    #[value(alias = "eqpm-analytic", alias = "eqpm_analytic")]
    Analytic,
    /// One-axis twisting at the same χ.
    Oat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub initial_state: InitialState,
    pub t_max: f64,
    pub n_steps: usize,
    pub outputs: BTreeSet<OutputKind>,
    pub format: Format,
    pub compare: BTreeSet<Comparison>,
}

impl RunConfig {
    /// Nothing in a run draws random numbers; repeated runs are bit-identical.
    pub const SEEDLESS: bool = true;

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(CliError::config(format!(
                "t-max must be positive and finite, got {}",
                self.t_max
            )));
        }
        if self.n_steps < 2 {
            return Err(CliError::config(format!(
                "steps must be at least 2, got {}",
                self.n_steps
            )));
        }
        Ok(())
    }

    pub fn lambda(&self) -> Option<f64> {
        self.params.lambda()
    }

    pub fn times(&self) -> Vec<f64> {
        bjj_core::dynamics::uniform_times(self.t_max, self.n_steps)
    }
}

/// Short-time polynomial fit of ζ²: `degree` terms over `0 < Nχt ≤ window`
/// sampled at `samples` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitProtocol {
    pub degree: usize,
    pub window: f64,
    pub samples: usize,
}

impl Default for FitProtocol {
    fn default() -> Self {
        Self {
            degree: DEFAULT_FIT_DEGREE,
            window: DEFAULT_FIT_WINDOW,
            samples: DEFAULT_FIT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lambda_grid: Vec<f64>,
    pub base: RunConfig,
    pub compare: BTreeSet<Comparison>,
    pub fit: FitProtocol,
    /// Time window searched for the minimum of ζ²; by default the first
    /// period (stable) or `1/|ω_π|` (unstable), the range where the
    /// closed forms are trustworthy.
    pub search_window: Option<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambda_grid.is_empty() {
            return Err(CliError::config("lambda grid is empty"));
        }
        if let Some(bad) = self
            .lambda_grid
            .iter()
            .find(|l| !(**l > 0.0) || !l.is_finite())
        {
            return Err(CliError::config(format!(
                "lambda values must be positive, got {bad}"
            )));
        }
        if self.lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config("lambda grid must be strictly ascending"));
        }
        if self.base.n_steps < 2 {
            return Err(CliError::config("steps must be at least 2"));
        }
        if let Some(t) = self.search_window {
            if !(t > 0.0) || !t.is_finite() {
                return Err(CliError::config(format!(
                    "t-max must be positive and finite, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Every knob the CLI understands; unset fields fall back to the config file
/// and then to defaults.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Settings {
    /// Particle number N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Λ = Nχ/Ω (Ω = 1).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    /// Polar angle of a custom coherent state.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuth of a custom coherent state, in [−π, π].
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Final time in units of 1/Ω.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time samples including t = 0.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output directory.
    #[arg(long, env = "BJJ_OUT_DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Reference curves to add, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub compare: Option<Vec<Comparison>>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Tables to write, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub outputs: Option<Vec<OutputKind>>,
    /// Λ grid for sweeps, comma separated and ascending.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    /// Snapshot times for Wigner grids, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    /// Always write the separatrix (an error for Λ ≤ 1).
    #[arg(long)]
    pub separatrix: bool,
    /// Polynomial degree of the short-time fit.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Fit window in units of Nχt.
    #[arg(long)]
    pub window: Option<f64>,
    /// Samples inside the fit window.
    #[arg(long)]
    pub samples: Option<usize>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::config(format!("cannot parse {key} = {value:?}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T> {
    T::from_str(value, true)
        .map_err(|_| CliError::config(format!("unknown value for {key}: {value:?}")))
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(|s| item(s.trim())).collect()
}

impl Settings {
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut s = Self::default();
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if !seen.insert(key.clone()) {
                return Err(CliError::config(format!(
                    "line {}: duplicate key {key}",
                    lineno + 1
                )));
            }
            let k = key.as_str();
            match k {
                "n" => s.n = Some(parse_value(k, value)?),
                "lambda" => s.lambda = Some(parse_value(k, value)?),
                "state" => s.state = Some(parse_enum(k, value)?),
                "theta" => s.theta = Some(parse_value(k, value)?),
                "phi" => s.phi = Some(parse_value(k, value)?),
                "t-max" => s.t_max = Some(parse_value(k, value)?),
                "steps" => s.steps = Some(parse_value(k, value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => s.format = Some(parse_enum(k, value)?),
                "compare" => s.compare = Some(parse_list(value, |v| parse_enum(k, v))?),
                "workers" => s.workers = Some(parse_value(k, value)?),
                "outputs" => s.outputs = Some(parse_list(value, |v| parse_enum(k, v))?),
                "lambdas" => s.lambdas = Some(parse_list(value, |v| parse_value(k, v))?),
                "snapshots" => s.snapshots = Some(parse_list(value, |v| parse_value(k, v))?),
                "separatrix" => s.separatrix = parse_value(k, value)?,
                "degree" => s.degree = Some(parse_value(k, value)?),
                "window" => s.window = Some(parse_value(k, value)?),
                "samples" => s.samples = Some(parse_value(k, value)?),
                _ => {
                    return Err(CliError::config(format!(
                        "line {}: unknown key {key}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file(&text)
    }

    /// Field-wise `self` if set, otherwise `fallback`.
    pub fn or(self, fallback: Self) -> Self {
        Self {
            n: self.n.or(fallback.n),
            lambda: self.lambda.or(fallback.lambda),
            state: self.state.or(fallback.state),
            theta: self.theta.or(fallback.theta),
            phi: self.phi.or(fallback.phi),
            t_max: self.t_max.or(fallback.t_max),
            steps: self.steps.or(fallback.steps),
            out: self.out.or(fallback.out),
            format: self.format.or(fallback.format),
            compare: self.compare.or(fallback.compare),
            workers: self.workers.or(fallback.workers),
            outputs: self.outputs.or(fallback.outputs),
            lambdas: self.lambdas.or(fallback.lambdas),
            snapshots: self.snapshots.or(fallback.snapshots),
            separatrix: self.separatrix || fallback.separatrix,
            degree: self.degree.or(fallback.degree),
            window: self.window.or(fallback.window),
            samples: self.samples.or(fallback.samples),
        }
    }

    pub fn n_particles(&self) -> usize {
        self.n.unwrap_or(DEFAULT_PARTICLES)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn workers(&self) -> usize {
        self.workers
            .filter(|w| *w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn initial_state(&self) -> Result<InitialState> {
        let kind = self.state.unwrap_or(StateKind::Pi);
        match (kind, self.theta, self.phi) {
            (StateKind::Custom, Some(theta), Some(phi)) => Ok(InitialState::Custom { theta, phi }),
            (StateKind::Custom, _, _) => Err(CliError::config(
                "state custom needs both --theta and --phi",
            )),
            (_, None, None) => Ok(if kind == StateKind::Pi {
                InitialState::CssPi
            } else {
                InitialState::CssZero
            }),
            _ => Err(CliError::config(
                "--theta/--phi only apply to --state custom",
            )),
        }
    }

    fn required_lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| CliError::config("--lambda is required"))
    }

    fn base_config(&self, lambda: f64, t_max: f64) -> Result<RunConfig> {
        let params = ModelParams::from_lambda(self.n_particles(), lambda)
            .map_err(|e| CliError::config(e.to_string()))?;
        let outputs = match &self.outputs {
            Some(o) => o.iter().copied().collect(),
            None => [OutputKind::Witness, OutputKind::Covariance].into(),
        };
        Ok(RunConfig {
            params,
            initial_state: self.initial_state()?,
            t_max,
            n_steps: self.steps.unwrap_or(DEFAULT_STEPS),
            outputs,
            format: self.format.unwrap_or_default(),
            compare: self.compare.iter().flatten().copied().collect(),
        })
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let t_max = self
            .t_max
            .ok_or_else(|| CliError::config("--t-max is required"))?;
        let cfg = self.base_config(self.required_lambda()?, t_max)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The base run of a sweep carries the first grid value and the common
    /// settings; its `t_max` is unused.
    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let grid = self
            .lambdas
            .clone()
            .ok_or_else(|| CliError::config("--lambdas is required for a sweep"))?;
        let first = grid
            .first()
            .copied()
            .filter(|l| *l > 0.0 && l.is_finite())
            .unwrap_or(1.0);
        let base = self.base_config(first, self.t_max.unwrap_or(1.0))?;
        let cfg = SweepConfig {
            lambda_grid: grid,
            compare: base.compare.clone(),
            base,
            search_window: self.t_max,
            fit: self.fit_protocol()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn fit_protocol(&self) -> Result<FitProtocol> {
        let d = FitProtocol::default();
        let fit = FitProtocol {
            degree: self.degree.unwrap_or(d.degree),
            window: self.window.unwrap_or(d.window),
            samples: self.samples.unwrap_or(d.samples),
        };
        if !(fit.window > 0.0) || !fit.window.is_finite() {
            return Err(CliError::config(format!(
                "window must be positive, got {}",
                fit.window
            )));
        }
        if fit.degree < 4 || fit.samples < fit.degree + 2 {
            return Err(CliError::config(format!(
                "fit needs degree ≥ 4 and at least degree + 2 samples, got degree {}, {} samples",
                fit.degree, fit.samples
            )));
        }
        Ok(fit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_and_comments() {
        let s = Settings::parse_file(
            "# sweep\nn = 50\nlambda=2.5\nt_max = 1.5\nstate = zero\ncompare = analytic, oat\nlambdas = 0.5,1.5\n\n",
        )
        .unwrap();
        assert_eq!(s.n, Some(50));
        assert_eq!(s.lambda, Some(2.5));
        assert_eq!(s.t_max, Some(1.5));
        assert_eq!(s.state, Some(StateKind::Zero));
        assert_eq!(s.compare, Some(vec![Comparison::Analytic, Comparison::Oat]));
        assert_eq!(s.lambdas, Some(vec![0.5, 1.5]));
    }

    #[test]
    fn file_errors() {
        assert!(Settings::parse_file("n 5").is_err());
        assert!(Settings::parse_file("n = 5\nn = 6").is_err());
        assert!(Settings::parse_file("colour = red").is_err());
        assert!(Settings::parse_file("format = xml").is_err());
        assert!(Settings::parse_file("compare = eqpm_analytic").is_ok());
    }

    #[test]
    fn flags_override_file() {
        let flags = Settings {
            lambda: Some(3.0),
            ..Default::default()
        };
        let file = Settings::parse_file("lambda = 1.0\nn = 10").unwrap();
        let s = flags.or(file);
        assert_eq!(s.lambda, Some(3.0));
        assert_eq!(s.n, Some(10));
    }

    #[test]
    fn run_config_validation() {
        let mut s = Settings {
            lambda: Some(2.0),
            t_max: Some(0.0),
            ..Default::default()
        };
        assert!(matches!(s.run_config(), Err(CliError::Config(_))));
        s.t_max = Some(1.0);
        s.steps = Some(1);
        assert!(s.run_config().is_err());
        s.steps = Some(2);
        let cfg = s.run_config().unwrap();
        assert_eq!(cfg.initial_state, InitialState::CssPi);
        assert_eq!(cfg.params.n_particles(), DEFAULT_PARTICLES);
    }

    #[test]
    fn custom_state_needs_angles() {
        let mut s = Settings {
            state: Some(StateKind::Custom),
            theta: Some(1.0),
            ..Default::default()
        };
        assert!(s.initial_state().is_err());
        s.phi = Some(-0.5);
        assert_eq!(
            s.initial_state().unwrap(),
            InitialState::Custom {
                theta: 1.0,
                phi: -0.5
            }
        );
        s.state = Some(StateKind::Zero);
        assert!(s.initial_state().is_err());
    }

    #[test]
    fn sweep_grid_rules() {
        let mut s = Settings {
            lambdas: Some(vec![0.5, 0.4]),
            ..Default::default()
        };
        assert!(s.sweep_config().is_err());
        s.lambdas = Some(vec![]);
        assert!(s.sweep_config().is_err());
        s.lambdas = Some(vec![-1.0, 0.5]);
        assert!(s.sweep_config().is_err());
        s.lambdas = Some(vec![0.5, 1.5]);
        assert_eq!(s.sweep_config().unwrap().lambda_grid, vec![0.5, 1.5]);
    }
}
