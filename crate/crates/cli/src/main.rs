use std::process::ExitCode;

use clap::Parser;
use maggeo_cli::{run, Args, ConfigError};

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = args.to_config().and_then(|cfg| {
        let report = run(&cfg)?;
        let text = report.to_json();
        match &cfg.json {
            Some(path) => std::fs::write(path, &text).map_err(|source| ConfigError::Io {
                path: path.clone(),
                source,
            })?,
            None => print!("{text}"),
        }
        Ok(report)
    });
    match outcome {
        Ok(report) if report.summary.pass => ExitCode::SUCCESS,
        Ok(report) => {
            for v in &report.summary.violations {
                eprintln!("violation at point {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
