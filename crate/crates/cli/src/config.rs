//! Option merging and validation.
//!
//! Flags override keys read from an optional `key = value` file. Keys use the
//! flag names without the leading dashes.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bbcap_core::{thermal_ratio, ChannelSpec, NoiseModel, PhysicalInputs, Quantity};
use clap::Args;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// key = value file; flags take precedence
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// loss, white, thermal or dephasing
    #[arg(long)]
    pub model: Option<String>,
    /// ce, c_lower, q_lower, q_alt or all
    #[arg(long)]
    pub quantity: Option<String>,
    /// single value or start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// reservoir photons per mode (white noise)
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: Option<f64>,
    /// thermal ratio R_T/R_C
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// bath temperature in kelvin
    #[arg(long, allow_hyphen_values = true)]
    pub temp: Option<f64>,
    /// input power in watts
    #[arg(long, allow_hyphen_values = true)]
    pub power: Option<f64>,
    /// transmission time in seconds
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
    /// grid resolution
    #[arg(long)]
    pub points: Option<usize>,
    /// upper end of the profile frequency grid (default: past the support)
    #[arg(long)]
    pub xmax: Option<f64>,
    /// output file (directory for `figure`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// worker threads, 0 for one per core
    #[arg(long)]
    pub jobs: Option<usize>,
    /// verify suite to run (default: all)
    #[arg(long)]
    pub suite: Option<String>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| CliError::config(format!("bad value '{value}' for {key}")))
}

impl Opts {
    /// Reads a config file. Blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut o = Opts::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!("{}:{}: expected key = value", path.display(), i + 1)));
            };
            let (key, value) = (key.trim(), value.trim().to_string());
            match key {
                "model" => o.model = Some(value),
                "quantity" => o.quantity = Some(value),
                "eta" => o.eta = Some(value),
                "nbar" => o.nbar = Some(parse_value(key, &value)?),
                "rho" => o.rho = Some(parse_value(key, &value)?),
                "temp" => o.temp = Some(parse_value(key, &value)?),
                "power" => o.power = Some(parse_value(key, &value)?),
                "time" => o.time = Some(parse_value(key, &value)?),
                "points" => o.points = Some(parse_value(key, &value)?),
                "xmax" => o.xmax = Some(parse_value(key, &value)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "jobs" => o.jobs = Some(parse_value(key, &value)?),
                "suite" => o.suite = Some(value),
                _ => return Err(CliError::config(format!("{}:{}: unknown key '{key}'", path.display(), i + 1))),
            }
        }
        Ok(o)
    }

    /// Fills unset fields from `base`.
    pub fn or(self, base: Opts) -> Opts {
        Opts {
            config: self.config.or(base.config),
            model: self.model.or(base.model),
            quantity: self.quantity.or(base.quantity),
            eta: self.eta.or(base.eta),
            nbar: self.nbar.or(base.nbar),
            rho: self.rho.or(base.rho),
            temp: self.temp.or(base.temp),
            power: self.power.or(base.power),
            time: self.time.or(base.time),
            points: self.points.or(base.points),
            xmax: self.xmax.or(base.xmax),
            out: self.out.or(base.out),
            jobs: self.jobs.or(base.jobs),
            suite: self.suite.or(base.suite),
        }
    }

    /// Applies the config file named by `--config`, if any.
    pub fn with_file(self) -> Result<Opts> {
        match &self.config {
            Some(path) => {
                let file = Opts::from_file(path)?;
                Ok(self.or(file))
            }
            None => Ok(self),
        }
    }
}

/// Row kinds a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Factor(Quantity),
    /// `max(𝒞 − 1, 0)`, derived from the CE solution.
    QAlt,
}

impl RowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RowKind::Factor(q) => q.as_str(),
            RowKind::QAlt => "q_alt",
        }
    }
}

pub fn parse_selection(s: &str) -> Result<Vec<RowKind>> {
    match s.to_ascii_lowercase().as_str() {
        "all" => Ok(vec![
            RowKind::Factor(Quantity::Ce),
            RowKind::Factor(Quantity::CLower),
            RowKind::Factor(Quantity::QLower),
            RowKind::QAlt,
        ]),
        "q_alt" => Ok(vec![RowKind::QAlt]),
        other => Ok(vec![RowKind::Factor(other.parse()?)]),
    }
}

fn round_grid(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// Parses `a` or `a:b:step` into an inclusive grid inside `[0, 1]`.
pub fn parse_eta_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let check = |v: f64| -> Result<f64> {
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(CliError::config(format!("eta = {v} outside [0, 1]")))
        }
    };
    match parts.as_slice() {
        [one] => Ok(vec![check(parse_value("eta", one)?)?]),
        [a, b, step] => {
            let a = check(parse_value("eta", a)?)?;
            let b = check(parse_value("eta", b)?)?;
            let step: f64 = parse_value("eta step", step)?;
            if !(step > 0.0 && step.is_finite()) {
                return Err(CliError::config(format!("eta step = {step} must be > 0")));
            }
            if a > b {
                return Err(CliError::config(format!("eta range {a}:{b} is decreasing")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| round_grid(a + i as f64 * step).min(b)).collect())
        }
        _ => Err(CliError::config(format!("eta '{s}' is neither a value nor start:stop:step"))),
    }
}

/// `n` evenly spaced points on `[0, 1]`.
pub fn unit_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(CliError::config(format!("points = {n} must be >= 2")));
    }
    Ok((0..n).map(|i| round_grid(i as f64 / (n - 1) as f64)).collect())
}

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub model: NoiseModel,
    pub nbar: f64,
    pub rho_t: f64,
    pub power: Option<f64>,
    pub temperature: f64,
    pub time: f64,
    pub etas: Vec<f64>,
    pub points: Option<usize>,
    pub xmax: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl SweepConfig {
    /// Resolves options; `default_eta` is used when `--eta` is absent.
    pub fn resolve(o: &Opts, default_eta: &str) -> Result<Self> {
        let model: NoiseModel = o.model.as_deref().unwrap_or("loss").parse()?;
        let etas = parse_eta_range(o.eta.as_deref().unwrap_or(default_eta))?;
        if let Some(n) = o.points {
            if n < 2 {
                return Err(CliError::config(format!("points = {n} must be >= 2")));
            }
        }
        let nbar = o.nbar.unwrap_or(0.0);
        if model == NoiseModel::WhiteNoise && o.nbar.is_none() {
            return Err(CliError::config("white noise needs --nbar"));
        }
        let time = o.time.unwrap_or(1.0);
        let temperature = o.temp.unwrap_or(0.0);
        if let Some(p) = o.power {
            PhysicalInputs::new(p, temperature, time)?;
        }
        let rho_t = match (model, o.rho, o.temp) {
            (NoiseModel::Thermal, Some(_), Some(_)) => {
                return Err(CliError::config("give either --rho or --temp with --power, not both"))
            }
            (NoiseModel::Thermal, Some(r), None) => r,
            (NoiseModel::Thermal, None, Some(t)) => {
                let power = o.power.ok_or_else(|| CliError::config("--temp needs --power"))?;
                thermal_ratio(&PhysicalInputs::new(power, t, time)?)
            }
            (NoiseModel::Thermal, None, None) => {
                return Err(CliError::config("thermal model needs --rho or --temp with --power"))
            }
            _ => 0.0,
        };
        if let Some(x) = o.xmax {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CliError::config(format!("xmax = {x} must be > 0")));
            }
        }
        let cfg = SweepConfig {
            model,
            nbar,
            rho_t,
            power: o.power,
            temperature,
            time,
            etas,
            points: o.points,
            xmax: o.xmax,
            out: o.out.clone(),
            jobs: o.jobs.unwrap_or(0),
        };
        for &eta in &cfg.etas {
            cfg.spec(eta).validate()?;
        }
        Ok(cfg)
    }

    pub fn spec(&self, eta: f64) -> ChannelSpec {
        match self.model {
            NoiseModel::Loss => ChannelSpec::loss(eta),
            NoiseModel::WhiteNoise => ChannelSpec::white(eta, self.nbar),
            NoiseModel::Thermal => ChannelSpec::thermal(eta, self.rho_t),
            NoiseModel::Dephasing => ChannelSpec::dephasing(eta),
        }
    }

    /// The single efficiency required by `profile` and `report`.
    pub fn single_eta(&self) -> Result<f64> {
        match self.etas.as_slice() {
            [eta] => Ok(*eta),
            _ => Err(CliError::config("this command takes a single --eta value")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_ranges() {
        assert_eq!(parse_eta_range("0.5").unwrap(), vec![0.5]);
        let g = parse_eta_range("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
        assert_eq!(parse_eta_range("0:1:0.3").unwrap(), vec![0.0, 0.3, 0.6, 0.9]);
        assert!(parse_eta_range("1.5").is_err());
        assert!(parse_eta_range("0:1:0").is_err());
        assert!(parse_eta_range("0.8:0.2:0.1").is_err());
        assert!(parse_eta_range("0:1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("bbcap-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        fs::write(&path, "# sweep\nmodel = white\nnbar = 2\neta = 0.3\n").unwrap();
        let flags = Opts { config: Some(path), nbar: Some(5.0), ..Default::default() };
        let o = flags.with_file().unwrap();
        assert_eq!(o.model.as_deref(), Some("white"));
        assert_eq!(o.nbar, Some(5.0));
        assert_eq!(o.eta.as_deref(), Some("0.3"));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn thermal_needs_a_ratio() {
        let o = Opts { model: Some("thermal".into()), ..Default::default() };
        assert!(matches!(SweepConfig::resolve(&o, "0.5"), Err(CliError::Config(_))));
        let o = Opts { model: Some("thermal".into()), temp: Some(0.0), power: Some(1e-3), ..Default::default() };
        assert_eq!(SweepConfig::resolve(&o, "0.5").unwrap().rho_t, 0.0);
    }

    #[test]
    fn selections() {
        assert_eq!(parse_selection("all").unwrap().len(), 4);
        assert_eq!(parse_selection("q_alt").unwrap(), vec![RowKind::QAlt]);
        assert!(parse_selection("nope").is_err());
    }
}
