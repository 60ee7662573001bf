use std::path::PathBuf;

use clap::Parser;

use crate::config::{
    connection_source, metric_source, parse_param, parse_point, parse_signature, Command, ConfigError, ConfigResult, Points,
    RunConfig,
};

/// Evaluate algebraic and geometric identities and report their defects.
///
/// Exit status: 0 when every defect is within tolerance, 1 on a violation,
/// 2 on a configuration error.
#[derive(Parser, Debug)]
#[command(name = "maggeo", version)]
pub struct Args {
    pub command: Command,
    /// Signature as m,k (m positive, k negative directions).
    #[arg(long)]
    pub signature: Option<String>,
    /// Preset name (flat, sphere, schwarzschild, de_sitter), inline diag(...) or a metric file.
    #[arg(long, default_value = "flat")]
    pub metric: String,
    /// Parameter override NAME=VALUE; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// levi_civita, zero, random or a connection file.
    #[arg(long, default_value = "levi_civita")]
    pub connection: String,
    /// Number of random sample points.
    #[arg(long, default_value_t = 5, conflicts_with = "at")]
    pub points: usize,
    /// Single evaluation point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override every tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Second metric for gamma-check, a matrix in x0..x{n-1}.
    #[arg(long)]
    pub compare_metric: Option<String>,
}

impl Args {
    /// Parses an argument list that starts with the program name. Help,
    /// version and usage errors all come back as `ConfigError::Invalid`.
    pub fn from_argv<I, T>(argv: I) -> ConfigResult<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Self::try_parse_from(argv).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn to_config(&self) -> ConfigResult<RunConfig> {
        let mut cfg = RunConfig::new(self.command);
        cfg.signature = self.signature.as_deref().map(parse_signature).transpose()?;
        cfg.metric = metric_source(&self.metric)?;
        cfg.connection = connection_source(&self.connection)?;
        cfg.params = self.params.iter().map(|p| parse_param(p)).collect::<Result<_, _>>()?;
        cfg.points = match &self.at {
            Some(at) => Points::At(parse_point(at)?),
            None => Points::Random(self.points),
        };
        cfg.seed = self.seed;
        if let Some(tol) = self.tol {
            cfg.override_tolerances(tol);
        }
        cfg.compare_metric = self.compare_metric.clone();
        cfg.json = self.json.clone();
        Ok(cfg)
    }
}
