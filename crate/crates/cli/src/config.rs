//! Experiment configuration: a TOML file, overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use wkb_march::{BuiltinModel, MethodId, PhaseMode};

use crate::error::CliError;

/// Frame in which the headline error (and its slope) is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ErrorFrame {
    #[default]
    U,
    Wave,
}

impl FromStr for ErrorFrame {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "u" => Ok(ErrorFrame::U),
            "wave" => Ok(ErrorFrame::Wave),
            _ => Err(CliError::Config(format!("error_frame must be U or wave, got `{s}`"))),
        }
    }
}

impl fmt::Display for ErrorFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorFrame::U => "U",
            ErrorFrame::Wave => "wave",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("format must be csv or json, got `{s}`"))),
        }
    }
}

/// `a(x) = sum c_k x^k` on an interval, with user initial data. Its
/// reference is a fine Runge-Kutta solution.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomProblem {
    pub coefficients: Vec<f64>,
    pub interval: [f64; 2],
    #[serde(default = "default_phi0")]
    pub phi0: [f64; 2],
    #[serde(default = "default_eps_dphi0")]
    pub eps_dphi0: [f64; 2],
    #[serde(default = "default_spw")]
    pub steps_per_wavelength: usize,
}

fn default_phi0() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_eps_dphi0() -> [f64; 2] {
    [0.0, 0.0]
}

fn default_spw() -> usize {
    400
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Builtin(BuiltinModel),
    Custom(CustomProblem),
}

impl Problem {
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Problem::Builtin(BuiltinModel::Airy { x_end }) => (1.0, *x_end),
            Problem::Builtin(BuiltinModel::Exp) => (0.0, 1.0),
            Problem::Builtin(BuiltinModel::Constant { lo, hi, .. }) => (*lo, *hi),
            Problem::Custom(c) => (c.interval[0], c.interval[1]),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Builtin(BuiltinModel::Airy { x_end }) => write!(f, "airy({x_end})"),
            Problem::Builtin(BuiltinModel::Exp) => f.write_str("exp"),
            Problem::Builtin(BuiltinModel::Constant { value, .. }) => write!(f, "constant({value})"),
            Problem::Custom(_) => f.write_str("custom"),
        }
    }
}

/// Accepts `exact`, `simpson`, `chebyshev` (17 points), `chebyshev17` or
/// `chebyshev(17)`.
pub fn parse_phase_mode(s: &str) -> Result<PhaseMode, CliError> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || CliError::Config(format!("unknown phase_mode `{s}`"));
    match t.as_str() {
        "exact" => Ok(PhaseMode::Exact),
        "simpson" => Ok(PhaseMode::Simpson),
        "chebyshev" => Ok(PhaseMode::Chebyshev { n: 17 }),
        _ => {
            let rest = t.strip_prefix("chebyshev").ok_or_else(bad)?;
            let digits = rest.trim_start_matches('(').trim_end_matches(')');
            let n: usize = digits.parse().map_err(|_| bad())?;
            Ok(PhaseMode::Chebyshev { n })
        }
    }
}

/// File layout; every field is optional so flags can fill the gaps.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub problem: Option<String>,
    pub methods: Option<Vec<String>>,
    pub epsilons: Option<Vec<f64>>,
    pub step_sizes: Option<Vec<f64>>,
    pub phase_mode: Option<String>,
    pub error_frame: Option<String>,
    pub repetitions: Option<usize>,
    pub output: Option<OutputFile>,
    pub custom: Option<CustomProblem>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub methods: Vec<MethodId>,
    pub epsilons: Vec<f64>,
    pub step_sizes: Vec<f64>,
    pub phase_mode: PhaseMode,
    pub error_frame: ErrorFrame,
    pub repetitions: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(problem: Problem, methods: &[MethodId], epsilons: &[f64], step_sizes: &[f64]) -> Self {
        ExperimentConfig {
            problem,
            methods: methods.to_vec(),
            epsilons: epsilons.to_vec(),
            step_sizes: step_sizes.to_vec(),
            phase_mode: PhaseMode::Exact,
            error_frame: ErrorFrame::U,
            repetitions: 1,
            output: None,
            format: Format::Csv,
        }
    }

    pub fn with_phase_mode(mut self, mode: PhaseMode) -> Self {
        self.phase_mode = mode;
        self
    }

    pub fn from_file(file: ConfigFile) -> Result<Self, CliError> {
        let missing = |k: &str| CliError::Config(format!("missing `{k}`"));
        let problem = parse_problem(file.problem.as_deref().ok_or_else(|| missing("problem"))?, file.custom)?;
        let methods = file
            .methods
            .map(|m| m.iter().map(|s| s.parse::<MethodId>().map_err(|e| CliError::Config(e.to_string()))).collect())
            .transpose()?
            .unwrap_or_else(|| MethodId::ALL.to_vec());
        let cfg = ExperimentConfig {
            problem,
            methods,
            epsilons: file.epsilons.ok_or_else(|| missing("epsilons"))?,
            step_sizes: file.step_sizes.ok_or_else(|| missing("step_sizes"))?,
            phase_mode: file.phase_mode.as_deref().map(parse_phase_mode).transpose()?.unwrap_or(PhaseMode::Exact),
            error_frame: file.error_frame.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
            repetitions: file.repetitions.unwrap_or(1),
            output: file.output.as_ref().and_then(|o| o.path.clone()),
            format: file.output.as_ref().and_then(|o| o.format.as_deref()).map(str::parse).transpose()?.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.methods.is_empty() || self.epsilons.is_empty() || self.step_sizes.is_empty() {
            return bad("methods, epsilons and step_sizes must be nonempty".into());
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return bad(format!("epsilon {e} is not in (0, 1)"));
        }
        let (lo, hi) = self.problem.interval();
        if !(lo < hi) {
            return bad(format!("empty interval [{lo}, {hi}]"));
        }
        if let Some(h) = self.step_sizes.iter().find(|&&h| !(h > 0.0 && h <= hi - lo)) {
            return bad(format!("step size {h} is not in (0, {}]", hi - lo));
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if let PhaseMode::Chebyshev { n } = self.phase_mode {
            if n < 2 {
                return bad("chebyshev phase needs at least 2 points".into());
            }
        }
        if matches!(self.problem, Problem::Custom(_)) && self.phase_mode == PhaseMode::Exact {
            return bad("custom problems have no closed-form phase; use simpson or chebyshev".into());
        }
        Ok(())
    }

    /// `(eps, h)` pairs whose predicted error `eps^3 h^3 max(eps, h)` lies
    /// below the double precision floor.
    pub fn below_floor_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &e in &self.epsilons {
            for &h in &self.step_sizes {
                if e.powi(3) * h.powi(3) * e.max(h) < wkb_march::fit::ERROR_FLOOR {
                    out.push((e, h));
                }
            }
        }
        out
    }
}

pub fn parse_problem(s: &str, custom: Option<CustomProblem>) -> Result<Problem, CliError> {
    if s.trim().eq_ignore_ascii_case("custom") {
        let c = custom.ok_or_else(|| CliError::Config("problem `custom` needs a [custom] table".into()))?;
        if c.coefficients.is_empty() {
            return Err(CliError::Config("custom coefficients must be nonempty".into()));
        }
        if c.steps_per_wavelength < 20 {
            return Err(CliError::Config("steps_per_wavelength must be at least 20".into()));
        }
        return Ok(Problem::Custom(c));
    }
    s.parse::<BuiltinModel>().map(Problem::Builtin).map_err(|e| CliError::Config(e.to_string()))
}
