use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use strayeval_core::metrics::write_batch_csv;
use strayeval_core::{evaluate_with, EvalOptions, MetricsReport};

use crate::error::{exit, CliError, CliResult};
use crate::io::{emit, emit_json, read_mask};
use crate::{EvalArgs, ReportFormat};

fn frame_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn evaluate_pair(id: &str, pred_path: &Path, gt_path: &Path, opts: &EvalOptions) -> CliResult<MetricsReport> {
    let pred = read_mask(pred_path)?;
    let gt = read_mask(gt_path)?;
    evaluate_with(id, &pred, &gt, opts).map_err(|e| match CliError::from(e) {
        CliError::Dimensions(msg) => {
            CliError::Dimensions(format!("{} vs {}: {msg}", pred_path.display(), gt_path.display()))
        }
        other => other,
    })
}

fn is_mask_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "pgm"))
}

/// Mask files in `pred_dir` paired with the same file name in `gt_dir`,
/// sorted by name.
fn pair_directories(pred_dir: &Path, gt_dir: &Path) -> CliResult<Vec<(String, PathBuf, PathBuf)>> {
    for dir in [pred_dir, gt_dir] {
        if !dir.is_dir() {
            return Err(CliError::io(dir, std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory")));
        }
    }
    let entries = fs::read_dir(pred_dir).map_err(|e| CliError::io(pred_dir, e))?;
    let mut pairs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(pred_dir, e))?.path();
        if !is_mask_file(&path) {
            continue;
        }
        let name = path.file_name().expect("directory entries have names");
        let gt = gt_dir.join(name);
        if !gt.is_file() {
            return Err(CliError::io(&gt, std::io::Error::new(std::io::ErrorKind::NotFound, "no matching GT mask")));
        }
        pairs.push((frame_id(&path), path, gt));
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    Ok(pairs)
}

pub fn run(args: &EvalArgs) -> CliResult<i32> {
    if !(0.0..=1.0).contains(&args.min_overlap) {
        return Err(CliError::Usage(format!("--min-overlap {} outside [0, 1]", args.min_overlap)));
    }
    let smoothing = args.smoothing();
    if let Some(cfg) = &smoothing {
        cfg.kernel()?;
    }
    let opts = EvalOptions {
        smoothing,
        connectivity: args.connectivity.into(),
        min_overlap_fraction: args.min_overlap,
    };

    let reports = if args.batch {
        let pairs = pair_directories(&args.pred, &args.gt)?;
        let results: Vec<CliResult<MetricsReport>> =
            pairs.par_iter().map(|(id, pred, gt)| evaluate_pair(id, pred, gt, &opts)).collect();
        results.into_iter().collect::<CliResult<Vec<_>>>()?
    } else {
        vec![evaluate_pair(&frame_id(&args.pred), &args.pred, &args.gt, &opts)?]
    };

    let format = args.format.unwrap_or(if args.batch { ReportFormat::Csv } else { ReportFormat::Json });
    let out = args.out.as_deref();
    match format {
        ReportFormat::Json if args.batch => {
            emit_json(out, &serde_json::Value::Array(reports.iter().map(MetricsReport::to_json).collect()))?
        }
        ReportFormat::Json => emit_json(out, &reports[0].to_json())?,
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            write_batch_csv(&mut buf, &reports)?;
            emit(out, &buf)?;
        }
    }
    if smoothing.is_some() {
        eprintln!("strayeval: note: pixel metrics are reported against the smoothed ground truth");
    }
    Ok(exit::OK)
}
