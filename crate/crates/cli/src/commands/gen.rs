use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;
use strayeval_core::{encode_mask, generate_scene, SceneConfig};

use super::SCHEMA_VERSION;
use crate::error::{exit, CliError, CliResult};
use crate::io::{read_bytes, write_file};
use crate::GenArgs;

pub const MANIFEST: &str = "manifest.json";

/// Every fifth frame goes to the evaluation split (80/20).
pub fn split_for(index: usize) -> &'static str {
    if index % 5 == 4 {
        "eval"
    } else {
        "train"
    }
}

fn load_config(path: Option<&Path>) -> CliResult<SceneConfig> {
    let Some(path) = path else {
        return Ok(SceneConfig::default());
    };
    let bytes = read_bytes(path)?;
    let cfg: SceneConfig = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Malformed { path: path.to_path_buf(), message: e.to_string() })?;
    cfg.validate()
        .map_err(|e| CliError::Malformed { path: path.to_path_buf(), message: e.to_string() })?;
    Ok(cfg)
}

fn prepare_out_dir(dir: &Path, force: bool) -> CliResult<()> {
    if dir.exists() {
        let mut entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
        if entries.next().is_some() {
            if !force {
                return Err(CliError::Usage(format!(
                    "output directory {} is not empty (use --force to write into it)",
                    dir.display()
                )));
            }
            // a stale manifest would claim completeness mid-run
            let manifest = dir.join(MANIFEST);
            if manifest.exists() {
                fs::remove_file(&manifest).map_err(|e| CliError::io(&manifest, e))?;
            }
        }
    } else {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text.into_bytes()
}

pub fn run(args: &GenArgs) -> CliResult<i32> {
    let cfg = load_config(args.config.as_deref())?;
    prepare_out_dir(&args.out_dir, args.force)?;
    let dir = &args.out_dir;

    let frames: Vec<CliResult<serde_json::Value>> = (0..args.count)
        .into_par_iter()
        .map(|i| {
            let seed = args.seed.wrapping_add(i as u64);
            let frame_id = format!("frame_{i:05}");
            let scene = generate_scene(&cfg, seed)?;

            let image_name = format!("{frame_id}.png");
            let gt_name = format!("{frame_id}_gt.png");
            let meta_name = format!("{frame_id}.json");
            let image_path = dir.join(&image_name);
            let gt_path = dir.join(&gt_name);
            let image = scene.image.encode_png().map_err(|e| CliError::from_core(&image_path, e))?;
            let gt = encode_mask(&scene.gt).map_err(|e| CliError::from_core(&gt_path, e))?;
            write_file(&image_path, &image)?;
            write_file(&gt_path, &gt)?;

            let meta = json!({
                "schema_version": SCHEMA_VERSION,
                "frame_id": frame_id,
                "seed": seed,
                "width": cfg.width,
                "height": cfg.height,
                "gt_pixels": scene.gt.count_set(),
                "flare_descriptors": scene.flare_descriptors,
            });
            write_file(&dir.join(&meta_name), &pretty(&meta))?;

            Ok(json!({
                "frame_id": frame_id,
                "seed": seed,
                "image": image_name,
                "gt": gt_name,
                "meta": meta_name,
                "split": split_for(i),
            }))
        })
        .collect();
    let frames = frames.into_iter().collect::<CliResult<Vec<_>>>()?;

    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "generator": "chacha8-seed-from-u64",
        "seed": args.seed,
        "count": args.count,
        "config": cfg,
        "frames": frames,
    });
    write_file(&dir.join(MANIFEST), &pretty(&manifest))?;
    Ok(exit::OK)
}
