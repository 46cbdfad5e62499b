//! Experiment configuration: a JSON document, overridden flag by flag.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use dirac_qca::{AutomatonParams, Boundary, Component, UnitSystem};
use serde::{Deserialize, Deserializer};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
    #[error("cannot read config {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("config {path} is not valid: {message}")]
    Parse { path: PathBuf, message: String },
}

fn field_err(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    RefractionCurve,
    Packet,
    DoubleSlit,
    Collide,
    Dispersion,
    Verify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::RefractionCurve => "refraction-curve",
            Experiment::Packet => "packet",
            Experiment::DoubleSlit => "double-slit",
            Experiment::Collide => "collide",
            Experiment::Dispersion => "dispersion",
            Experiment::Verify => "verify",
        }
    }

    /// Keys each experiment accepts besides the output plumbing.
    fn allowed(self) -> &'static [&'static str] {
        match self {
            Experiment::RefractionCurve => &["samples"],
            Experiment::Packet => &["theta", "m_ratio", "sites", "steps", "n0", "delta", "k", "sign"],
            Experiment::DoubleSlit => &["theta", "m_ratio", "sites", "steps", "slit_n"],
            Experiment::Collide => &["theta", "m_ratio", "sites", "steps", "delta", "k", "x0", "dump_every"],
            Experiment::Dispersion => &["theta", "m_ratio", "samples"],
            Experiment::Verify => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("expected csv or json, got {s:?}")),
        }
    }
}

/// Accepts a number or a string like `"pi/8"`.
fn angle_value<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Num(x)) => Ok(Some(x)),
        Some(Raw::Text(t)) => parse_angle(&t).map(Some).map_err(serde::de::Error::custom),
    }
}

/// Raw settings, as read from JSON or collected from flags. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub experiment: Option<String>,
    #[serde(default, deserialize_with = "angle_value")]
    pub theta: Option<f64>,
    pub m_ratio: Option<f64>,
    pub sites: Option<usize>,
    pub steps: Option<usize>,
    pub n0: Option<i64>,
    pub delta: Option<f64>,
    pub k: Option<i64>,
    pub sign: Option<String>,
    pub slit_n: Option<usize>,
    pub x0: Option<i64>,
    pub samples: Option<usize>,
    pub dump_every: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub threads: Option<usize>,
}

impl ConfigDoc {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.to_owned(), message: e.to_string() })?;
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse { path: path.to_owned(), message: e.to_string() })
    }

    /// Keys set in `other` replace ours.
    pub fn overridden_by(self, other: ConfigDoc) -> ConfigDoc {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigDoc { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(experiment, theta, m_ratio, sites, steps, n0, delta, k, sign, slit_n, x0, samples, dump_every, out, format, threads)
    }

    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        macro_rules! check {
            ($($f:ident),*) => { $(if self.$f.is_some() { keys.push(stringify!($f)); })* };
        }
        check!(theta, m_ratio, sites, steps, n0, delta, k, sign, slit_n, x0, samples, dump_every);
        keys
    }
}

/// Parses `0.39`, `pi`, `pi/8`, `3pi/4`, `3*pi/4`, `-pi/8`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || format!("cannot read angle {text:?}");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b.parse::<f64>().map_err(|_| bad())?)),
        None => (t.as_str(), None),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => coef.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let value = match den {
        Some(d) if d == 0.0 => return Err(bad()),
        Some(d) => value / d,
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_sign(text: &str) -> Result<Component, ConfigError> {
    match text {
        "+" | "plus" | "+1" => Ok(Component::Plus),
        "-" | "minus" | "-1" => Ok(Component::Minus),
        _ => Err(field_err("sign", format!("expected + or -, got {text:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacketConfig {
    pub params: AutomatonParams,
    pub steps: usize,
    pub n0: i64,
    pub delta: f64,
    pub k: i64,
    pub sign: Component,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleSlitConfig {
    pub params: AutomatonParams,
    pub steps: usize,
    pub slit_n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionConfig {
    pub params: AutomatonParams,
    pub steps: usize,
    pub x0: i64,
    pub delta: f64,
    pub k: i64,
    pub dump_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionConfig {
    pub params: AutomatonParams,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    RefractionCurve { samples: usize },
    Packet(PacketConfig),
    DoubleSlit(DoubleSlitConfig),
    Collide(CollisionConfig),
    Dispersion(DispersionConfig),
    Verify,
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub threads: Option<usize>,
}

fn params(doc: &ConfigDoc, default_theta: f64, n_sites: usize) -> Result<AutomatonParams, ConfigError> {
    let p = match (doc.theta, doc.m_ratio) {
        (Some(_), Some(_)) => return Err(field_err("m_ratio", "give either theta or m_ratio, not both")),
        (_, Some(m)) => AutomatonParams::from_mass_ratio(m, n_sites, Boundary::Periodic, UnitSystem::default())
            .map_err(|e| field_err("m_ratio", e.to_string()))?,
        (theta, None) => {
            AutomatonParams::new(theta.unwrap_or(default_theta), n_sites).map_err(|e| field_err("theta", e.to_string()))?
        }
    };
    Ok(p)
}

fn sites(doc: &ConfigDoc, default: usize) -> Result<usize, ConfigError> {
    let n = doc.sites.unwrap_or(default);
    if n < 2 {
        return Err(field_err("sites", format!("need at least 2 sites, got {n}")));
    }
    Ok(n)
}

fn positive(field: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(field_err(field, format!("must be positive, got {v}")))
    }
}

fn nonzero(field: &'static str, v: i64) -> Result<i64, ConfigError> {
    if v == 0 {
        return Err(field_err(field, "must be non-zero"));
    }
    Ok(v)
}

impl RunConfig {
    /// Validates `doc` against the schema of `experiment`.
    pub fn resolve(experiment: Experiment, doc: ConfigDoc) -> Result<Self, ConfigError> {
        if let Some(name) = &doc.experiment {
            if name != experiment.name() {
                return Err(field_err("experiment", format!("config is for {name:?}, command is {:?}", experiment.name())));
            }
        }
        for key in doc.present() {
            if !experiment.allowed().contains(&key) {
                return Err(field_err("experiment", format!("key {key:?} does not apply to {}", experiment.name())));
            }
        }
        let format = match &doc.format {
            Some(f) => f.parse().map_err(|e: String| field_err("format", e))?,
            None => OutputFormat::Csv,
        };
        if doc.threads == Some(0) {
            return Err(field_err("threads", "must be at least 1"));
        }
        let experiment = match experiment {
            Experiment::RefractionCurve => {
                let samples = doc.samples.unwrap_or(101);
                if samples < 2 {
                    return Err(field_err("samples", "need at least 2 samples"));
                }
                ExperimentConfig::RefractionCurve { samples }
            }
            Experiment::Packet => ExperimentConfig::Packet(PacketConfig {
                params: params(&doc, PI / 8.0, sites(&doc, 64)?)?,
                steps: doc.steps.unwrap_or(180),
                n0: doc.n0.unwrap_or(0),
                delta: positive("delta", doc.delta.unwrap_or(2.0))?,
                k: nonzero("k", doc.k.unwrap_or(8))?,
                sign: doc.sign.as_deref().map(parse_sign).transpose()?.unwrap_or(Component::Plus),
            }),
            Experiment::DoubleSlit => {
                let n_sites = sites(&doc, 64)?;
                let slit_n = doc.slit_n.unwrap_or(10);
                if slit_n == 0 || 2 * slit_n >= n_sites {
                    return Err(field_err("slit_n", format!("need 0 < slit_n < sites/2, got {slit_n}")));
                }
                ExperimentConfig::DoubleSlit(DoubleSlitConfig {
                    params: params(&doc, PI / 10.0, n_sites)?,
                    steps: doc.steps.unwrap_or(80),
                    slit_n,
                })
            }
            Experiment::Collide => {
                let n_sites = sites(&doc, 64)?;
                let x0 = doc.x0.unwrap_or(10);
                if x0 <= 0 || 2 * x0 as usize >= n_sites {
                    return Err(field_err("x0", format!("need 0 < x0 < sites/2, got {x0}")));
                }
                let dump_every = doc.dump_every.unwrap_or(10);
                if dump_every == 0 {
                    return Err(field_err("dump_every", "must be at least 1"));
                }
                ExperimentConfig::Collide(CollisionConfig {
                    params: params(&doc, PI / 8.0, n_sites)?,
                    steps: doc.steps.unwrap_or(60),
                    x0,
                    delta: positive("delta", doc.delta.unwrap_or(2.0))?,
                    k: nonzero("k", doc.k.unwrap_or(8))?,
                    dump_every,
                })
            }
            Experiment::Dispersion => {
                let samples = doc.samples.unwrap_or(256);
                if samples < 2 {
                    return Err(field_err("samples", "need at least 2 samples"));
                }
                ExperimentConfig::Dispersion(DispersionConfig { params: params(&doc, PI / 8.0, 2)?, samples })
            }
            Experiment::Verify => ExperimentConfig::Verify,
        };
        Ok(RunConfig { experiment, out: doc.out, format, threads: doc.threads })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_expressions() {
        assert_eq!(parse_angle("pi/8").unwrap(), PI / 8.0);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3 * pi / 4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("-pi/8").unwrap(), -PI / 8.0);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn experiment_defaults() {
        let c = RunConfig::resolve(Experiment::Packet, ConfigDoc::default()).unwrap();
        let ExperimentConfig::Packet(p) = c.experiment else { panic!() };
        assert_eq!(p.params.theta(), PI / 8.0);
        assert_eq!((p.params.n_sites(), p.steps, p.n0, p.delta, p.k), (64, 180, 0, 2.0, 8));
        let c = RunConfig::resolve(Experiment::DoubleSlit, ConfigDoc::default()).unwrap();
        let ExperimentConfig::DoubleSlit(d) = c.experiment else { panic!() };
        assert_eq!((d.params.theta(), d.slit_n, d.steps), (PI / 10.0, 10, 80));
    }

    #[test]
    fn json_theta_accepts_expressions() {
        let doc: ConfigDoc = serde_json::from_str(r#"{"theta": "pi/4", "sites": 16}"#).unwrap();
        assert_eq!(doc.theta, Some(PI / 4.0));
        let doc: ConfigDoc = serde_json::from_str(r#"{"theta": 0.5}"#).unwrap();
        assert_eq!(doc.theta, Some(0.5));
        assert!(serde_json::from_str::<ConfigDoc>(r#"{"thetta": 0.5}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigDoc { theta: Some(0.1), steps: Some(5), ..Default::default() };
        let flags = ConfigDoc { steps: Some(7), ..Default::default() };
        let merged = file.overridden_by(flags);
        assert_eq!((merged.theta, merged.steps), (Some(0.1), Some(7)));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let err = |e: Experiment, doc: ConfigDoc| match RunConfig::resolve(e, doc) {
            Err(ConfigError::Field { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(err(Experiment::Packet, ConfigDoc { theta: Some(2.0), ..Default::default() }), "theta");
        assert_eq!(err(Experiment::Packet, ConfigDoc { delta: Some(-1.0), ..Default::default() }), "delta");
        assert_eq!(err(Experiment::Packet, ConfigDoc { slit_n: Some(3), ..Default::default() }), "experiment");
        assert_eq!(
            err(Experiment::Packet, ConfigDoc { theta: Some(0.1), m_ratio: Some(0.5), ..Default::default() }),
            "m_ratio"
        );
        assert_eq!(err(Experiment::DoubleSlit, ConfigDoc { slit_n: Some(40), ..Default::default() }), "slit_n");
        assert_eq!(err(Experiment::Packet, ConfigDoc { sign: Some("up".into()), ..Default::default() }), "sign");
        assert_eq!(
            err(Experiment::Packet, ConfigDoc { experiment: Some("collide".into()), ..Default::default() }),
            "experiment"
        );
    }
}
