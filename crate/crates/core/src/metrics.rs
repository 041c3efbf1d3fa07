//! Pixel-level and artifact-level segmentation metrics.
//!
//! Pixel metrics count per-pixel agreement. Artifact metrics treat each
//! connected region as one object:
//!
//! * PaR = 1 - (undetected GT regions) / (GT regions)
//! * PaP = 1 - (predicted regions touching no GT) / (predicted regions)
//! * PamIoU = IoU after dropping the pixels of every false-positive and
//!   false-negative region from the predicted and GT sets.
//!
//! A predicted region and a GT region are related when they share at least
//! one pixel. Degenerate ratios (empty denominators) evaluate to 1.0, so a
//! perfect predictor on a fault-free frame scores 1.0 everywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::BinaryMask;
use crate::regions::{label_components, Connectivity, LabelMap};
use crate::smoothing::{smooth_mask, SmoothingConfig};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

fn ratio_or_one(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PixelMetrics {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub precision: f64,
    pub recall: f64,
    /// Foreground (fault-class) IoU.
    pub iou_fault: f64,
    /// Mean of fault-class and nominal-class IoU.
    pub miou_2class: f64,
}

impl PixelMetrics {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let iou_fault = ratio_or_one(tp, tp + fp + fn_);
        let iou_nominal = ratio_or_one(tn, tn + fp + fn_);
        Self {
            tp,
            fp,
            fn_,
            tn,
            precision: ratio_or_one(tp, tp + fp),
            recall: ratio_or_one(tp, tp + fn_),
            iou_fault,
            miou_2class: 0.5 * (iou_fault + iou_nominal),
        }
    }
}

/// Foreground IoU implied by a precision/recall pair, `PR / (P + R - PR)`.
///
/// Holds exactly for the counts behind any `PixelMetrics` with `tp > 0`.
pub fn iou_from_precision_recall(precision: f64, recall: f64) -> f64 {
    let pr = precision * recall;
    let den = precision + recall - pr;
    if den == 0.0 {
        0.0
    } else {
        pr / den
    }
}

pub fn pixel_metrics(pred: &BinaryMask, gt: &BinaryMask) -> Result<PixelMetrics> {
    pred.require_same_dims(gt)?;
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (&p, &g) in pred.bits().iter().zip(gt.bits()) {
        match (p, g) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let tn = pred.len() - tp - fp - fn_;
    Ok(PixelMetrics::from_counts(tp, fp, fn_, tn))
}

/// Region-level correspondence between a prediction and its ground truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtifactMatch<'a> {
    pred: &'a LabelMap,
    gt: &'a LabelMap,
    pub gt_regions: usize,
    pub pred_regions: usize,
    pub tp_pred_labels: BTreeSet<u32>,
    pub fp_pred_labels: BTreeSet<u32>,
    pub detected_gt_labels: BTreeSet<u32>,
    pub fn_gt_labels: BTreeSet<u32>,
    /// Every `(pred_label, gt_label, overlap_pixels)` with positive overlap.
    pub overlap_pairs: Vec<(u32, u32, usize)>,
}

impl<'a> ArtifactMatch<'a> {
    pub fn pred_labels(&self) -> &'a LabelMap {
        self.pred
    }

    pub fn gt_labels(&self) -> &'a LabelMap {
        self.gt
    }
}

/// Any-overlap matching.
pub fn match_artifacts<'a>(pred_lm: &'a LabelMap, gt_lm: &'a LabelMap) -> Result<ArtifactMatch<'a>> {
    match_artifacts_with(pred_lm, gt_lm, 0.0)
}

/// Matching with a minimum overlap. A `(pred, gt)` pair relates when it
/// shares at least one pixel and the shared pixels cover at least
/// `min_overlap_fraction` of the smaller of the two regions.
pub fn match_artifacts_with<'a>(
    pred_lm: &'a LabelMap,
    gt_lm: &'a LabelMap,
    min_overlap_fraction: f64,
) -> Result<ArtifactMatch<'a>> {
    if pred_lm.dims() != gt_lm.dims() {
        return Err(Error::mismatch(pred_lm.dims(), gt_lm.dims()));
    }
    if !(0.0..=1.0).contains(&min_overlap_fraction) {
        return Err(Error::InvalidParameter(format!(
            "minimum overlap fraction {min_overlap_fraction} outside [0, 1]"
        )));
    }
    let mut pred_area = vec![0usize; pred_lm.region_count() as usize + 1];
    let mut gt_area = vec![0usize; gt_lm.region_count() as usize + 1];
    let mut overlaps: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (&p, &g) in pred_lm.labels().iter().zip(gt_lm.labels()) {
        pred_area[p as usize] += 1;
        gt_area[g as usize] += 1;
        if p != 0 && g != 0 {
            *overlaps.entry((p, g)).or_default() += 1;
        }
    }

    let mut tp_pred_labels = BTreeSet::new();
    let mut detected_gt_labels = BTreeSet::new();
    for (&(p, g), &n) in &overlaps {
        let smaller = pred_area[p as usize].min(gt_area[g as usize]);
        if n as f64 >= min_overlap_fraction * smaller as f64 {
            tp_pred_labels.insert(p);
            detected_gt_labels.insert(g);
        }
    }
    let fp_pred_labels = (1..=pred_lm.region_count()).filter(|l| !tp_pred_labels.contains(l)).collect();
    let fn_gt_labels = (1..=gt_lm.region_count()).filter(|l| !detected_gt_labels.contains(l)).collect();

    Ok(ArtifactMatch {
        pred: pred_lm,
        gt: gt_lm,
        gt_regions: gt_lm.region_count() as usize,
        pred_regions: pred_lm.region_count() as usize,
        tp_pred_labels,
        fp_pred_labels,
        detected_gt_labels,
        fn_gt_labels,
        overlap_pairs: overlaps.into_iter().map(|((p, g), n)| (p, g, n)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactMetrics {
    pub gt_artifacts: usize,
    pub pred_artifacts: usize,
    pub fn_artifacts: usize,
    pub fp_artifacts: usize,
    pub pap: f64,
    pub par: f64,
    pub pamiou: f64,
}

/// PaP, PaR and PamIoU for a match computed from `pred` and `gt`.
pub fn artifact_metrics(m: &ArtifactMatch<'_>, pred: &BinaryMask, gt: &BinaryMask) -> Result<ArtifactMetrics> {
    pred.require_same_dims(gt)?;
    if pred.dims() != m.pred.dims() {
        return Err(Error::mismatch(pred.dims(), m.pred.dims()));
    }
    debug_assert!(pred.bits().iter().zip(m.pred.labels()).all(|(&b, &l)| b == (l != 0)));
    debug_assert!(gt.bits().iter().zip(m.gt.labels()).all(|(&b, &l)| b == (l != 0)));

    let mut pred_fp = vec![false; m.pred_regions + 1];
    for &l in &m.fp_pred_labels {
        pred_fp[l as usize] = true;
    }
    let mut gt_fn = vec![false; m.gt_regions + 1];
    for &l in &m.fn_gt_labels {
        gt_fn[l as usize] = true;
    }

    let (mut inter, mut union) = (0usize, 0usize);
    for (((&p, &g), &pl), &gl) in pred.bits().iter().zip(gt.bits()).zip(m.pred.labels()).zip(m.gt.labels()) {
        let p_kept = p && !pred_fp[pl as usize];
        let g_kept = g && !gt_fn[gl as usize];
        inter += (p_kept && g_kept) as usize;
        union += (p_kept || g_kept) as usize;
    }

    let fn_artifacts = m.fn_gt_labels.len();
    let fp_artifacts = m.fp_pred_labels.len();
    Ok(ArtifactMetrics {
        gt_artifacts: m.gt_regions,
        pred_artifacts: m.pred_regions,
        fn_artifacts,
        fp_artifacts,
        pap: 1.0 - fraction_or_zero(fp_artifacts, m.pred_regions),
        par: 1.0 - fraction_or_zero(fn_artifacts, m.gt_regions),
        pamiou: ratio_or_one(inter, union),
    })
}

/// `num / den`, or 0 for an empty denominator.
fn fraction_or_zero(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Knobs for [`evaluate_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    /// Smooth the ground truth before evaluation.
    pub smoothing: Option<SmoothingConfig>,
    pub connectivity: Connectivity,
    pub min_overlap_fraction: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { smoothing: None, connectivity: Connectivity::EightNeighbor, min_overlap_fraction: 0.0 }
    }
}

/// Pixel and artifact metrics for one frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub frame_id: String,
    pub pixel: PixelMetrics,
    pub artifact: ArtifactMetrics,
    /// Pixel metrics were computed against smoothed GT as well.
    pub gt_was_smoothed: bool,
    pub smoothing: Option<SmoothingConfig>,
}

impl MetricsReport {
    /// JSON object with a leading `schema_version`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut value = serde_json::json!({ "schema_version": SCHEMA_VERSION });
        if let (Some(obj), serde_json::Value::Object(fields)) =
            (value.as_object_mut(), serde_json::to_value(self).expect("report serializes"))
        {
            obj.extend(fields);
        }
        value
    }
}

/// Evaluates with the given smoothing and connectivity and an empty frame id.
pub fn evaluate(
    pred: &BinaryMask,
    gt: &BinaryMask,
    smoothing: Option<&SmoothingConfig>,
    connectivity: Connectivity,
) -> Result<MetricsReport> {
    let opts = EvalOptions { smoothing: smoothing.copied(), connectivity, ..Default::default() };
    evaluate_with("", pred, gt, &opts)
}

/// Full evaluation of one frame. When smoothing is configured the GT is
/// smoothed first and the smoothed mask is used for everything,
/// including the pixel metrics (the report flags this).
pub fn evaluate_with(frame_id: &str, pred: &BinaryMask, gt: &BinaryMask, opts: &EvalOptions) -> Result<MetricsReport> {
    pred.require_same_dims(gt)?;
    let smoothed;
    let gt = match &opts.smoothing {
        Some(cfg) => {
            smoothed = smooth_mask(gt, cfg)?;
            &smoothed
        }
        None => gt,
    };
    let pixel = pixel_metrics(pred, gt)?;
    let pred_lm = label_components(pred, opts.connectivity);
    let gt_lm = label_components(gt, opts.connectivity);
    let m = match_artifacts_with(&pred_lm, &gt_lm, opts.min_overlap_fraction)?;
    let artifact = artifact_metrics(&m, pred, gt)?;
    Ok(MetricsReport {
        frame_id: frame_id.to_owned(),
        pixel,
        artifact,
        gt_was_smoothed: opts.smoothing.is_some(),
        smoothing: opts.smoothing,
    })
}

const CSV_HEADER: [&str; 17] = [
    "frame_id",
    "tp",
    "fp",
    "fn",
    "tn",
    "precision",
    "recall",
    "iou_fault",
    "miou_2class",
    "gt_artifacts",
    "pred_artifacts",
    "fn_artifacts",
    "fp_artifacts",
    "pap",
    "par",
    "pamiou",
    "gt_was_smoothed",
];

fn report_columns(r: &MetricsReport) -> [f64; 15] {
    let (p, a) = (&r.pixel, &r.artifact);
    [
        p.tp as f64,
        p.fp as f64,
        p.fn_ as f64,
        p.tn as f64,
        p.precision,
        p.recall,
        p.iou_fault,
        p.miou_2class,
        a.gt_artifacts as f64,
        a.pred_artifacts as f64,
        a.fn_artifacts as f64,
        a.fp_artifacts as f64,
        a.pap,
        a.par,
        a.pamiou,
    ]
}

/// Column-wise mean over reports; `None` for an empty batch.
pub fn mean_columns(reports: &[MetricsReport]) -> Option<[f64; 15]> {
    if reports.is_empty() {
        return None;
    }
    let mut acc = [0.0; 15];
    for r in reports {
        for (a, v) in acc.iter_mut().zip(report_columns(r)) {
            *a += v;
        }
    }
    Some(acc.map(|v| v / reports.len() as f64))
}

/// Writes one CSV row per report, sorted by frame id, then a `mean` row.
pub fn write_batch_csv<W: Write>(out: W, reports: &[MetricsReport]) -> Result<()> {
    let io = |e: csv::Error| Error::Encode(e.to_string());
    let mut sorted: Vec<&MetricsReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.frame_id.cmp(&b.frame_id));

    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in &sorted {
        let p = &r.pixel;
        let a = &r.artifact;
        let mut row = vec![r.frame_id.clone()];
        row.extend([p.tp, p.fp, p.fn_, p.tn].map(|v| v.to_string()));
        row.extend([p.precision, p.recall, p.iou_fault, p.miou_2class].map(|v| v.to_string()));
        row.extend([a.gt_artifacts, a.pred_artifacts, a.fn_artifacts, a.fp_artifacts].map(|v| v.to_string()));
        row.extend([a.pap, a.par, a.pamiou].map(|v| v.to_string()));
        row.push(r.gt_was_smoothed.to_string());
        w.write_record(&row).map_err(io)?;
    }
    let mut mean_row = vec!["mean".to_owned()];
    match mean_columns(reports) {
        Some(cols) => mean_row.extend(cols.iter().map(|v| v.to_string())),
        None => mean_row.extend(std::iter::repeat_n(String::new(), 15)),
    }
    let smoothed = reports.iter().all(|r| r.gt_was_smoothed) && !reports.is_empty();
    mean_row.push(smoothed.to_string());
    w.write_record(&mean_row).map_err(io)?;
    w.flush().map_err(|e| Error::Encode(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lm(mask: &BinaryMask) -> LabelMap {
        label_components(mask, Connectivity::EightNeighbor)
    }

    #[test]
    fn identity_gives_ones() {
        let gt = BinaryMask::from_pixels(6, 6, &[(1, 1), (1, 2), (4, 4)]).unwrap();
        let r = evaluate(&gt, &gt, None, Connectivity::EightNeighbor).unwrap();
        assert_eq!((r.pixel.precision, r.pixel.recall, r.pixel.iou_fault), (1.0, 1.0, 1.0));
        assert_eq!((r.artifact.pap, r.artifact.par, r.artifact.pamiou), (1.0, 1.0, 1.0));
    }

    #[test]
    fn empty_prediction_conventions() {
        let gt = BinaryMask::from_pixels(4, 4, &[(0, 0)]).unwrap();
        let pred = BinaryMask::empty(4, 4).unwrap();
        let p = pixel_metrics(&pred, &gt).unwrap();
        assert_eq!((p.precision, p.recall, p.iou_fault), (1.0, 0.0, 0.0));
        assert_eq!(p.tp + p.fp + p.fn_ + p.tn, 16);
    }

    #[test]
    fn precision_recall_identity_matches_reported_rows() {
        assert!((iou_from_precision_recall(0.908, 0.958) - 0.873).abs() <= 0.001);
        assert!((iou_from_precision_recall(0.259, 0.403) - 0.188).abs() <= 0.001);
    }

    #[test]
    fn two_class_mean() {
        // tp=1, fp=1, fn=0, tn=2 -> fault IoU 1/2, nominal IoU 2/3
        let pred = BinaryMask::from_pixels(2, 2, &[(0, 0), (0, 1)]).unwrap();
        let gt = BinaryMask::from_pixels(2, 2, &[(0, 0)]).unwrap();
        let p = pixel_metrics(&pred, &gt).unwrap();
        assert!((p.miou_2class - (0.5 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = BinaryMask::empty(3, 3).unwrap();
        let b = BinaryMask::empty(3, 4).unwrap();
        assert!(matches!(pixel_metrics(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(match_artifacts(&lm(&a), &lm(&b)).is_err());
        assert!(evaluate(&a, &b, None, Connectivity::EightNeighbor).is_err());
    }

    #[test]
    fn single_pixel_overlap_is_a_match() {
        let pred = BinaryMask::from_pixels(5, 5, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        let gt = BinaryMask::from_pixels(5, 5, &[(0, 2), (1, 2), (2, 2)]).unwrap();
        let (pl, gl) = (lm(&pred), lm(&gt));
        let m = match_artifacts(&pl, &gl).unwrap();
        assert_eq!(m.tp_pred_labels, BTreeSet::from([1]));
        assert_eq!(m.detected_gt_labels, BTreeSet::from([1]));
        assert!(m.fp_pred_labels.is_empty() && m.fn_gt_labels.is_empty());
        assert_eq!(m.overlap_pairs, vec![(1, 1, 1)]);
    }

    #[test]
    fn disjoint_prediction_is_fp_and_gt_is_fn() {
        let pred = BinaryMask::from_pixels(5, 5, &[(0, 0)]).unwrap();
        let gt = BinaryMask::from_pixels(5, 5, &[(4, 4)]).unwrap();
        let (pl, gl) = (lm(&pred), lm(&gt));
        let m = match_artifacts(&pl, &gl).unwrap();
        assert_eq!(m.fp_pred_labels, BTreeSet::from([1]));
        assert_eq!(m.fn_gt_labels, BTreeSet::from([1]));
        let a = artifact_metrics(&m, &pred, &gt).unwrap();
        assert_eq!((a.pap, a.par, a.pamiou), (0.0, 0.0, 1.0));
    }

    #[test]
    fn many_predictions_one_gt() {
        let gt = BinaryMask::from_pixels(7, 1, &[(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap();
        let pred = BinaryMask::from_pixels(7, 1, &[(0, 0), (0, 4)]).unwrap();
        let (pl, gl) = (lm(&pred), lm(&gt));
        let m = match_artifacts(&pl, &gl).unwrap();
        assert_eq!(m.tp_pred_labels.len(), 2);
        assert_eq!(m.detected_gt_labels.len(), 1);
        assert!(m.fn_gt_labels.is_empty());
    }

    #[test]
    fn table_arithmetic_example() {
        // GT: region A (rows 0-2, cols 0-5), region B at (8, 8).
        // Pred: two blobs inside A, one blob far away.
        let mut gt_px = vec![(8, 8)];
        for r in 0..3 {
            for c in 0..6 {
                gt_px.push((r, c));
            }
        }
        let gt = BinaryMask::from_pixels(10, 10, &gt_px).unwrap();
        let pred = BinaryMask::from_pixels(10, 10, &[(1, 0), (1, 4), (6, 0)]).unwrap();
        let (pl, gl) = (lm(&pred), lm(&gt));
        let a = artifact_metrics(&match_artifacts(&pl, &gl).unwrap(), &pred, &gt).unwrap();
        assert_eq!((a.gt_artifacts, a.pred_artifacts, a.fn_artifacts, a.fp_artifacts), (2, 3, 1, 1));
        assert_eq!(a.par, 0.5);
        assert!((a.pap - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pamiou_excludes_fp_and_fn_regions() {
        let pred = BinaryMask::from_pixels(10, 10, &[(0, 0), (0, 1), (5, 5)]).unwrap();
        let gt = BinaryMask::from_pixels(10, 10, &[(0, 1), (0, 2), (9, 9)]).unwrap();
        let (pl, gl) = (lm(&pred), lm(&gt));
        let a = artifact_metrics(&match_artifacts(&pl, &gl).unwrap(), &pred, &gt).unwrap();
        assert!((a.pamiou - 1.0 / 3.0).abs() < 1e-15);
        // plain IoU counts the stray pixels: 1 / 5
        assert!((pixel_metrics(&pred, &gt).unwrap().iou_fault - 0.2).abs() < 1e-15);
    }

    #[test]
    fn both_empty_is_perfect() {
        let e = BinaryMask::empty(4, 4).unwrap();
        let r = evaluate(&e, &e, None, Connectivity::EightNeighbor).unwrap();
        assert_eq!((r.artifact.pap, r.artifact.par, r.artifact.pamiou), (1.0, 1.0, 1.0));
        assert_eq!((r.pixel.precision, r.pixel.recall, r.pixel.iou_fault, r.pixel.miou_2class), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn min_overlap_fraction_filters_weak_pairs() {
        // pred 1x4 overlaps gt 1x4 in one pixel: 1/4 of the smaller region
        let pred = BinaryMask::from_pixels(7, 1, &[(0, 0), (0, 1), (0, 2), (0, 3)]).unwrap();
        let gt = BinaryMask::from_pixels(7, 2, &[(0, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        let pred = BinaryMask::new(7, 2, [pred.bits(), &[false; 7]].concat()).unwrap();
        let (pl, gl) = (lm(&pred), lm(&gt));
        assert_eq!(match_artifacts_with(&pl, &gl, 0.25).unwrap().tp_pred_labels.len(), 1);
        let strict = match_artifacts_with(&pl, &gl, 0.5).unwrap();
        assert!(strict.tp_pred_labels.is_empty());
        assert_eq!(strict.fn_gt_labels.len(), 1);
        // overlap pairs still list the raw overlap
        assert_eq!(strict.overlap_pairs, vec![(1, 1, 1)]);
        assert!(match_artifacts_with(&pl, &gl, 1.5).is_err());
    }

    #[test]
    fn smoothing_flag_and_json_schema() {
        let gt = BinaryMask::from_pixels(12, 12, &[(6, 6)]).unwrap();
        let cfg = SmoothingConfig::default();
        let r = evaluate(&gt, &gt, Some(&cfg), Connectivity::EightNeighbor).unwrap();
        assert!(r.gt_was_smoothed);
        assert_eq!(r.smoothing, Some(cfg));
        let json = r.to_json();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["smoothing"]["sigma"], 1.0);
        assert_eq!(json["smoothing"]["truncate"], 5.0);
        assert_eq!(json["smoothing"]["border"], "reflect");
        assert!(json["smoothing"]["threshold"].is_f64());
        for key in ["tp", "fp", "fn", "tn", "precision", "recall", "iou_fault", "miou_2class"] {
            assert!(json["pixel"].get(key).is_some(), "{key}");
        }
        for key in ["gt_artifacts", "pred_artifacts", "fn_artifacts", "fp_artifacts", "pap", "par", "pamiou"] {
            assert!(json["artifact"].get(key).is_some(), "{key}");
        }
        let back: MetricsReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);

        let plain = evaluate(&gt, &gt, None, Connectivity::EightNeighbor).unwrap().to_json();
        assert!(plain["smoothing"].is_null());
        assert_eq!(plain["gt_was_smoothed"], false);
    }

    #[test]
    fn batch_csv_has_mean_row() {
        let a = BinaryMask::from_pixels(4, 4, &[(0, 0)]).unwrap();
        let b = BinaryMask::empty(4, 4).unwrap();
        let mut reports = vec![
            evaluate_with("b", &b, &a, &EvalOptions::default()).unwrap(),
            evaluate_with("a", &a, &a, &EvalOptions::default()).unwrap(),
        ];
        let mut buf = Vec::new();
        write_batch_csv(&mut buf, &reports).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("a,"));
        assert!(lines[2].starts_with("b,"));
        let mean: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(mean[0], "mean");
        assert_eq!(mean[14], "0.5"); // par: (1 + 0) / 2
        reports.clear();
        let mut buf = Vec::new();
        write_batch_csv(&mut buf, &reports).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);
    }
}
