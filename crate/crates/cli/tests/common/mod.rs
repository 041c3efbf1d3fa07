//! Shared helpers for the CLI and acceptance tests: a handle on the built
//! binary, random mask sources and brute-force reference implementations
//! that share no code with the library's algorithms.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::path::Path;
use std::process::{Command, Output};

use rand::Rng;
use strayeval_core::{encode_mask, BinaryMask, Connectivity};

pub fn strayeval() -> Command {
    Command::new(env!("CARGO_BIN_EXE_strayeval"))
}

pub fn run(args: &[&str], cwd: &Path) -> Output {
    strayeval().args(args).current_dir(cwd).output().expect("binary runs")
}

pub fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

pub fn write_mask(path: &Path, mask: &BinaryMask) {
    std::fs::write(path, encode_mask(mask).unwrap()).unwrap();
}

pub fn random_mask<R: Rng>(rng: &mut R, width: usize, height: usize, density: f64) -> BinaryMask {
    let bits = (0..width * height).map(|_| rng.gen_bool(density)).collect();
    BinaryMask::new(width, height, bits).unwrap()
}

/// Random mask made of a few filled rectangles, giving multi-pixel regions
/// rather than salt noise.
pub fn blobby_mask<R: Rng>(rng: &mut R, width: usize, height: usize, blobs: usize) -> BinaryMask {
    let mut mask = BinaryMask::empty(width, height).unwrap();
    for _ in 0..blobs {
        let r0 = rng.gen_range(0..height);
        let c0 = rng.gen_range(0..width);
        let r1 = (r0 + rng.gen_range(0..8)).min(height - 1);
        let c1 = (c0 + rng.gen_range(0..8)).min(width - 1);
        for r in r0..=r1 {
            for c in c0..=c1 {
                mask.set(r, c, true);
            }
        }
    }
    mask
}

/// Connected regions as pixel sets, found by breadth-first search.
pub fn oracle_regions(mask: &BinaryMask, connectivity: Connectivity) -> Vec<HashSet<(usize, usize)>> {
    let (w, h) = mask.dims();
    let mut seen = vec![vec![false; w]; h];
    let mut regions = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !mask.get(r, c) || seen[r][c] {
                continue;
            }
            let mut region = HashSet::new();
            let mut queue = VecDeque::from([(r, c)]);
            seen[r][c] = true;
            while let Some((pr, pc)) = queue.pop_front() {
                region.insert((pr, pc));
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        let diagonal = dr != 0 && dc != 0;
                        if (dr == 0 && dc == 0) || (diagonal && connectivity == Connectivity::FourNeighbor) {
                            continue;
                        }
                        let (nr, nc) = (pr as i64 + dr, pc as i64 + dc);
                        if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                            continue;
                        }
                        let (nr, nc) = (nr as usize, nc as usize);
                        if mask.get(nr, nc) && !seen[nr][nc] {
                            seen[nr][nc] = true;
                            queue.push_back((nr, nc));
                        }
                    }
                }
            }
            regions.push(region);
        }
    }
    regions
}

fn pixel_set(mask: &BinaryMask) -> HashSet<(usize, usize)> {
    let mut set = HashSet::new();
    for r in 0..mask.height() {
        for c in 0..mask.width() {
            if mask.get(r, c) {
                set.insert((r, c));
            }
        }
    }
    set
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePixel {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub precision: f64,
    pub recall: f64,
    pub iou: f64,
}

pub fn oracle_pixel(pred: &BinaryMask, gt: &BinaryMask) -> OraclePixel {
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for r in 0..pred.height() {
        for c in 0..pred.width() {
            match (pred.get(r, c), gt.get(r, c)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => tn += 1,
            }
        }
    }
    let div = |n: usize, d: usize| if d == 0 { 1.0 } else { n as f64 / d as f64 };
    OraclePixel { tp, fp, fn_, tn, precision: div(tp, tp + fp), recall: div(tp, tp + fn_), iou: div(tp, tp + fp + fn_) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleArtifact {
    pub gt_artifacts: usize,
    pub pred_artifacts: usize,
    pub fn_artifacts: usize,
    pub fp_artifacts: usize,
    pub pap: f64,
    pub par: f64,
    pub pamiou: f64,
}

/// Artifact metrics from pixel sets: a GT region is missed when no
/// predicted pixel lies in it, a predicted region is spurious when no GT
/// pixel lies in it, and PamIoU drops both kinds of region before taking
/// intersection over union.
pub fn oracle_artifact(pred: &BinaryMask, gt: &BinaryMask, connectivity: Connectivity) -> OracleArtifact {
    let pred_px = pixel_set(pred);
    let gt_px = pixel_set(gt);
    let pred_regions = oracle_regions(pred, connectivity);
    let gt_regions = oracle_regions(gt, connectivity);

    let missed: Vec<&HashSet<_>> = gt_regions.iter().filter(|g| g.is_disjoint(&pred_px)).collect();
    let spurious: Vec<&HashSet<_>> = pred_regions.iter().filter(|p| p.is_disjoint(&gt_px)).collect();

    let mut p_kept = pred_px.clone();
    for region in &spurious {
        p_kept.retain(|px| !region.contains(px));
    }
    let mut g_kept = gt_px.clone();
    for region in &missed {
        g_kept.retain(|px| !region.contains(px));
    }
    let inter = p_kept.intersection(&g_kept).count();
    let union = p_kept.union(&g_kept).count();

    let one_minus = |n: usize, d: usize| if d == 0 { 1.0 } else { 1.0 - n as f64 / d as f64 };
    OracleArtifact {
        gt_artifacts: gt_regions.len(),
        pred_artifacts: pred_regions.len(),
        fn_artifacts: missed.len(),
        fp_artifacts: spurious.len(),
        par: one_minus(missed.len(), gt_regions.len()),
        pap: one_minus(spurious.len(), pred_regions.len()),
        pamiou: if union == 0 { 1.0 } else { inter as f64 / union as f64 },
    }
}
