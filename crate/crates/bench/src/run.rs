use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::{manifest_path, ExperimentConfig, ExperimentKind, Manifest};
use crate::error::{BenchError, BenchResult};
use crate::experiments::{
    altmin_trials, cdp_trials, convergence_rows, distortion_rows, distortion_trials, lambda_sweep, recover,
};

/// CSV bytes of a run plus a human-readable summary for the console.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv: Vec<u8>,
    pub summary: String,
}

fn to_csv<T: Serialize>(rows: &[T]) -> BenchResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))
}

/// Runs the experiment in memory; nothing is written.
pub fn run(config: &ExperimentConfig) -> BenchResult<RunOutput> {
    config.validate()?;
    let mut summary = String::new();
    let csv = match config.kind {
        ExperimentKind::LambdaSweep => {
            let rows = lambda_sweep(config)?;
            for r in &rows {
                let param = r.param.map(|p| p.to_string()).unwrap_or_default();
                let _ = writeln!(summary, "{:<10}{:>8}  lambda={:.4} (se {:.1e})", r.model, param, r.lambda_estimate, r.std_error);
            }
            to_csv(&rows)?
        }
        ExperimentKind::DistortionSweep => {
            let rows = distortion_rows(config, &distortion_trials(config)?);
            for r in &rows {
                let _ = writeln!(summary, "alpha={:<6} {:<12} median dist_sq={:.3e}", r.alpha, r.method, r.median_dist_sq);
            }
            to_csv(&rows)?
        }
        ExperimentKind::AltminConvergence | ExperimentKind::CdpConvergence => {
            let trials = if config.kind == ExperimentKind::CdpConvergence { cdp_trials(config)? } else { altmin_trials(config)? };
            let rows = convergence_rows(config, &trials);
            for r in rows.iter().filter(|r| r.iteration == config.max_iters) {
                let _ = writeln!(summary, "{:<13} final median dist_sq={:.3e}", r.init, r.median_dist_sq);
            }
            to_csv(&rows)?
        }
        ExperimentKind::Recover => {
            let out = recover(config)?;
            let lambda = out.lambda_hat.map(|l| format!("{l:.6}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                summary,
                "init={} init_dist_sq={:.6e} dist_sq={:.6e} lambda_hat={} iterations={}",
                out.init, out.init_dist_sq, out.dist_sq, lambda, out.iterations
            );
            to_csv(&out.trace)?
        }
    };
    Ok(RunOutput { csv, summary })
}

/// Runs the experiment, writes the CSV to `config.out` and the manifest next to it.
pub fn execute(config: &ExperimentConfig) -> BenchResult<RunOutput> {
    let output = run(config)?;
    write_file(&config.out, &output.csv)?;
    Manifest::new(config.clone()).save(&manifest_path(&config.out))?;
    Ok(output)
}

fn write_file(path: &Path, bytes: &[u8]) -> BenchResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| BenchError::io(path, e))
}
