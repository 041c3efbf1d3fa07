use serde_json::json;
use strayeval_core::{label_components, region_properties, Connectivity};

use super::SCHEMA_VERSION;
use crate::error::{exit, CliError, CliResult};
use crate::io::{emit_json, read_mask, write_file};
use crate::LabelArgs;

pub fn run(args: &LabelArgs) -> CliResult<i32> {
    let mask = read_mask(&args.mask)?;
    let connectivity: Connectivity = args.connectivity.into();
    let lm = label_components(&mask, connectivity);
    let regions = region_properties(&lm);

    if let Some(path) = &args.out_labels {
        let png = lm.encode_png16().map_err(|e| CliError::from_core(path, e))?;
        write_file(path, &png)?;
    }
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "width": lm.width(),
        "height": lm.height(),
        "connectivity": connectivity,
        "region_count": lm.region_count(),
        "regions": regions,
    });
    emit_json(args.out.as_deref(), &doc)?;
    Ok(exit::OK)
}
