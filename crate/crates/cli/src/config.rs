//! Run configuration and the parsers for its textual inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use maggeo_core::clifford::Signature;
use maggeo_core::expr::{parse_expression, parse_matrix, Expression, ParseError};
use maggeo_core::geometry::presets::{connection_from_expressions, metric_from_expressions, PRESET_NAMES};
use maggeo_core::geometry::{ConnectionField, MetricField, Preset};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid signature {0:?}: expected m,k")]
    Signature(String),
    #[error("invalid parameter {0:?}: expected NAME=VALUE")]
    Param(String),
    #[error("invalid point {0:?}: expected comma-separated numbers")]
    Point(String),
    #[error("unknown metric {0:?}: not a preset ({presets}) and not a readable file", presets = PRESET_NAMES.join(", "))]
    UnknownMetric(String),
    #[error("{what}: {source}")]
    Parse {
        what: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Core(#[from] maggeo_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CliffordTable,
    GammaCheck,
    Curvature,
    Decompose,
    Residual,
    Covariance,
    SpinConnection,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CliffordTable => "clifford-table",
            Command::GammaCheck => "gamma-check",
            Command::Curvature => "curvature",
            Command::Decompose => "decompose",
            Command::Residual => "residual",
            Command::Covariance => "covariance",
            Command::SpinConnection => "spin-connection",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSource {
    Preset { name: String },
    /// `diag(...)` or a component table, inline or read from a file.
    Table { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionSource {
    LeviCivita,
    Zero,
    /// Seeded random polynomial connection.
    Random,
    /// `K l m n = expr` lines.
    Table(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Points {
    Random(usize),
    At(Vec<f64>),
}

/// Tolerances by defect name. A defect passes when `value <= tol`.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        ("relation", 0.0),
        ("dimension", 0.0),
        ("clifford", 1e-12),
        ("commutant", 0.0),
        ("intertwiner", 0.0),
        ("gamma_metric", 1e-10),
        ("vector_action", 1e-12),
        ("antisymmetry", 1e-12),
        ("metricity_identity", 1e-12),
        ("reconstruction", 1e-10),
        ("metricity", 1e-12),
        ("torsion_roundtrip", 1e-12),
        ("e_metric", 1e-8),
        ("e_conn", 1e-9),
        ("reduced_identity", 1e-9),
        ("onshell", 1e-8),
        ("covariance", 1e-8),
        ("utiyama", 1e-12),
        ("tetrad_antisymmetry", 1e-10),
        ("restriction", 1e-10),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub signature: Option<Signature>,
    pub metric: MetricSource,
    pub connection: ConnectionSource,
    pub params: Vec<(String, f64)>,
    pub points: Points,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub compare_metric: Option<String>,
    #[serde(skip)]
    pub json: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            signature: None,
            metric: MetricSource::Preset { name: "flat".into() },
            connection: ConnectionSource::LeviCivita,
            params: Vec::new(),
            points: Points::Random(5),
            seed: 0,
            tolerances: default_tolerances(),
            compare_metric: None,
            json: None,
        }
    }

    /// Replaces every tolerance by `tol`.
    pub fn override_tolerances(&mut self, tol: f64) {
        for v in self.tolerances.values_mut() {
            *v = tol;
        }
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(0.0)
    }
}

pub fn parse_signature(text: &str) -> ConfigResult<Signature> {
    let err = || ConfigError::Signature(text.to_string());
    let (m, k) = text.split_once(',').ok_or_else(err)?;
    let m = m.trim().parse().map_err(|_| err())?;
    let k = k.trim().parse().map_err(|_| err())?;
    Ok(Signature::new(m, k)?)
}

pub fn parse_param(text: &str) -> ConfigResult<(String, f64)> {
    let err = || ConfigError::Param(text.to_string());
    let (name, value) = text.split_once('=').ok_or_else(err)?;
    let name = name.trim();
    if name.is_empty() {
        return Err(err());
    }
    Ok((name.to_string(), value.trim().parse().map_err(|_| err())?))
}

pub fn parse_point(text: &str) -> ConfigResult<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| ConfigError::Point(text.to_string())))
        .collect()
}

/// `--metric` value: preset name, inline `diag(...)`, or a file path.
pub fn metric_source(arg: &str) -> ConfigResult<MetricSource> {
    if PRESET_NAMES.contains(&arg) {
        return Ok(MetricSource::Preset { name: arg.into() });
    }
    if arg.trim_start().starts_with("diag") {
        return Ok(MetricSource::Table { text: arg.into() });
    }
    read(Path::new(arg))
        .map(|text| MetricSource::Table { text })
        .map_err(|_| ConfigError::UnknownMetric(arg.to_string()))
}

pub fn connection_source(arg: &str) -> ConfigResult<ConnectionSource> {
    Ok(match arg {
        "levi_civita" => ConnectionSource::LeviCivita,
        "zero" => ConnectionSource::Zero,
        "random" => ConnectionSource::Random,
        path => ConnectionSource::Table(read(Path::new(path))?),
    })
}

fn read(path: &Path) -> ConfigResult<String> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Metric, coordinate names and, for presets, the preset itself.
pub struct ResolvedMetric {
    pub field: MetricField,
    pub coords: Vec<String>,
    pub preset: Option<Preset>,
}

impl ResolvedMetric {
    pub fn signature(&self) -> Signature {
        self.field.signature()
    }
}

pub fn resolve_metric(cfg: &RunConfig) -> ConfigResult<ResolvedMetric> {
    match &cfg.metric {
        MetricSource::Preset { name } => {
            let preset = Preset::by_name(name, cfg.signature)
                .ok_or_else(|| ConfigError::UnknownMetric(name.clone()))?;
            if let Some(sig) = cfg.signature {
                if sig != preset.signature {
                    return Err(ConfigError::Invalid(format!(
                        "preset {name} has signature ({},{}), not ({},{})",
                        preset.signature.m(),
                        preset.signature.k(),
                        sig.m(),
                        sig.k()
                    )));
                }
            }
            let field = preset.metric_field(&cfg.params)?;
            Ok(ResolvedMetric {
                field,
                coords: preset.coords.clone(),
                preset: Some(preset),
            })
        }
        MetricSource::Table { text } => {
            let sig = cfg.signature.ok_or_else(|| {
                ConfigError::Invalid("a metric table needs --signature m,k".into())
            })?;
            let (coords, body) = split_coords(text, sig.n())?;
            let names: Vec<&str> = coords.iter().map(String::as_str).collect();
            let pnames: Vec<&str> = cfg.params.iter().map(|(p, _)| p.as_str()).collect();
            let entries = parse_matrix(&body, &names, &pnames).map_err(|source| ConfigError::Parse {
                what: "metric".into(),
                source,
            })?;
            let values = cfg.params.iter().map(|(_, v)| *v).collect();
            Ok(ResolvedMetric {
                field: metric_from_expressions(sig, entries, values)?,
                coords,
                preset: None,
            })
        }
    }
}

/// Strips an optional leading `coords: a, b, ...` line.
fn split_coords(text: &str, n: usize) -> ConfigResult<(Vec<String>, String)> {
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("coords:") {
        let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
        let coords: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
        if coords.len() != n || coords.iter().any(|c| c.is_empty()) {
            return Err(ConfigError::Invalid(format!(
                "coords line names {} coordinates, dimension is {n}",
                coords.len()
            )));
        }
        return Ok((coords, body.to_string()));
    }
    Ok(((0..n).map(|i| format!("x{i}")).collect(), text.to_string()))
}

pub fn resolve_connection(cfg: &RunConfig, metric: &ResolvedMetric) -> ConfigResult<ConnectionField> {
    let n = metric.field.dim();
    Ok(match &cfg.connection {
        ConnectionSource::LeviCivita => ConnectionField::LeviCivita(metric.field.clone()),
        ConnectionSource::Zero => ConnectionField::Zero(n),
        ConnectionSource::Random => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
            maggeo_core::geometry::random_polynomial_connection(n, 2, 2, 0.5, &mut rng)
        }
        ConnectionSource::Table(text) => {
            let names: Vec<&str> = metric.coords.iter().map(String::as_str).collect();
            let pnames: Vec<&str> = cfg.params.iter().map(|(p, _)| p.as_str()).collect();
            let entries = parse_connection_table(text, &names, &pnames)?;
            let values = cfg.params.iter().map(|(_, v)| *v).collect();
            connection_from_expressions(n, entries, values)?
        }
    })
}

/// Lines `K l m n = expr` (zero-based indices); missing components are 0.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_connection_table(text: &str, coords: &[&str], params: &[&str]) -> ConfigResult<Vec<Expression>> {
    let n = coords.len();
    let zero = parse_expression("0", coords, params).expect("literal");
    let mut out = vec![zero; n * n * n];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || ConfigError::Invalid(format!("connection line {}: expected `K l m n = expr`", lineno + 1));
        let (lhs, rhs) = line.split_once('=').ok_or_else(bad)?;
        let mut parts = lhs.split_whitespace();
        if parts.next() != Some("K") {
            return Err(bad());
        }
        let idx: Vec<usize> = parts.map(|p| p.parse::<usize>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        if idx.len() != 3 || idx.iter().any(|&i| i >= n) {
            return Err(bad());
        }
        out[(idx[0] * n + idx[1]) * n + idx[2]] =
            parse_expression(rhs, coords, params).map_err(|source| ConfigError::Parse {
                what: format!("connection line {}", lineno + 1),
                source,
            })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags() {
        assert_eq!(parse_signature("1,3").unwrap(), Signature::new(1, 3).unwrap());
        assert!(parse_signature("1;3").is_err());
        assert!(parse_signature("9,0").is_err());
        assert_eq!(parse_param("M=1.5").unwrap(), ("M".into(), 1.5));
        assert!(parse_param("=1").is_err());
        assert_eq!(parse_point("0, 4,1").unwrap(), vec![0.0, 4.0, 1.0]);
    }

    #[test]
    fn metric_table_with_coords() {
        let mut cfg = RunConfig::new(Command::Curvature);
        cfg.signature = Some(Signature::new(2, 0).unwrap());
        cfg.metric = MetricSource::Table {
            text: "coords: u, v\n1, 0\n0, u^2".into(),
        };
        let m = resolve_metric(&cfg).unwrap();
        assert_eq!(m.coords, vec!["u", "v"]);
        assert_eq!(m.field.jet_at(&[2.0, 0.0]).unwrap().g[[1, 1]], 4.0);
    }

    #[test]
    fn connection_lines() {
        let t = parse_connection_table("# torsion\nK 0 1 0 = x1\n\nK 1 1 1 = 2", &["x0", "x1"], &[]).unwrap();
        assert_eq!(t[2].eval(&[0.0, 3.0], &[]), 3.0);
        assert_eq!(t[7].eval(&[0.0, 3.0], &[]), 2.0);
        assert!(parse_connection_table("K 0 1 = x1", &["x0", "x1"], &[]).is_err());
        assert!(parse_connection_table("K 0 1 5 = x1", &["x0", "x1"], &[]).is_err());
    }
}
