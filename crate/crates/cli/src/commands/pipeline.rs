use serde_json::json;
use strayeval_core::{build_validity_with_margin, decide_usability, gate_measurements, Measurement};

use super::SCHEMA_VERSION;
use crate::error::{exit, CliError, CliResult};
use crate::io::{emit_json, read_bytes, read_mask};
use crate::PipelineArgs;

pub fn run(args: &PipelineArgs) -> CliResult<i32> {
    if !(args.threshold > 0.0 && args.threshold <= 1.0) {
        return Err(CliError::Usage(format!("--threshold {} outside (0, 1]", args.threshold)));
    }
    let seg = read_mask(&args.seg)?;
    let raw = read_bytes(&args.measurements)?;
    let text = String::from_utf8(raw).map_err(|e| CliError::Malformed {
        path: args.measurements.clone(),
        message: format!("not UTF-8: {e}"),
    })?;
    let measurements = Measurement::parse_json_lines(&text).map_err(|(line, e)| CliError::Malformed {
        path: args.measurements.clone(),
        message: format!("line {line}: {e}"),
    })?;

    let validity = build_validity_with_margin(&seg, args.margin);
    let decision = decide_usability(&validity, args.threshold)?;
    let report = gate_measurements(&measurements, &validity, &decision);

    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "frame_usable": report.frame_usable,
        "decision": decision,
        "validity": {
            "width": validity.width(),
            "height": validity.height(),
            "invalid_count": validity.invalid_count(),
            "invalid_fraction": validity.invalid_fraction(),
            "margin": args.margin,
        },
        "accepted": report.accepted,
        "rejected": report.rejected,
    });
    emit_json(args.out.as_deref(), &doc)?;
    Ok(if decision.usable { exit::OK } else { exit::FDIR })
}
