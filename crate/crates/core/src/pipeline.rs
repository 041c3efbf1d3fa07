//! Onboard use of a straylight mask: per-pixel validity, a frame-level
//! usability verdict, and gating of point measurements before they reach
//! the navigation filter's update step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Default invalid-pixel fraction at which a frame is handed to FDIR.
pub const DEFAULT_USABILITY_THRESHOLD: f64 = 0.30;

/// Per-pixel validity; a straylight pixel is invalid.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidityMask {
    width: usize,
    height: usize,
    valid: Vec<bool>,
    invalid_count: usize,
    invalid_fraction: f64,
}

impl ValidityMask {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn invalid_count(&self) -> usize {
        self.invalid_count
    }

    pub fn invalid_fraction(&self) -> f64 {
        self.invalid_fraction
    }

    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        self.valid[row * self.width + col]
    }

    fn from_invalid(width: usize, height: usize, invalid: impl Iterator<Item = bool>) -> Self {
        let valid: Vec<bool> = invalid.map(|b| !b).collect();
        let invalid_count = valid.iter().filter(|&&v| !v).count();
        Self {
            width,
            height,
            invalid_fraction: invalid_count as f64 / valid.len() as f64,
            valid,
            invalid_count,
        }
    }
}

pub fn build_validity(seg: &BinaryMask) -> ValidityMask {
    ValidityMask::from_invalid(seg.width(), seg.height(), seg.bits().iter().copied())
}

/// Validity with each straylight pixel's exclusion zone grown to the
/// Chebyshev ball of radius `margin`. The invalid fraction reflects the
/// grown zone.
pub fn build_validity_with_margin(seg: &BinaryMask, margin: usize) -> ValidityMask {
    if margin == 0 {
        return build_validity(seg);
    }
    let grown = dilate_square(seg, margin);
    ValidityMask::from_invalid(seg.width(), seg.height(), grown.into_iter())
}

/// Separable max filter with a `(2r+1)` square window.
fn dilate_square(mask: &BinaryMask, r: usize) -> Vec<bool> {
    let (w, h) = mask.dims();
    let src = mask.bits();
    let mut rows = vec![false; src.len()];
    for row in 0..h {
        // distance to the nearest set pixel on the left, then on the right
        let line = &src[row * w..(row + 1) * w];
        let out = &mut rows[row * w..(row + 1) * w];
        let mut last: Option<usize> = None;
        for c in 0..w {
            if line[c] {
                last = Some(c);
            }
            out[c] = last.is_some_and(|l| c - l <= r);
        }
        last = None;
        for c in (0..w).rev() {
            if line[c] {
                last = Some(c);
            }
            out[c] |= last.is_some_and(|l| l - c <= r);
        }
    }
    let mut out = vec![false; src.len()];
    for c in 0..w {
        let mut last: Option<usize> = None;
        for row in 0..h {
            if rows[row * w + c] {
                last = Some(row);
            }
            out[row * w + c] = last.is_some_and(|l| row - l <= r);
        }
        last = None;
        for row in (0..h).rev() {
            if rows[row * w + c] {
                last = Some(row);
            }
            out[row * w + c] |= last.is_some_and(|l| l - row <= r);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    /// Use the frame, excluding invalid pixels from the update.
    UseWithGating,
    /// Discard the frame and hand over to fault recovery.
    TriggerFdir,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UsabilityDecision {
    pub usable: bool,
    pub invalid_fraction: f64,
    pub threshold: f64,
    pub action: Action,
}

/// A frame is usable while its invalid fraction stays strictly below
/// `threshold`.
pub fn decide_usability(v: &ValidityMask, threshold: f64) -> Result<UsabilityDecision> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!("usability threshold {threshold} outside (0, 1]")));
    }
    let usable = v.invalid_fraction < threshold;
    Ok(UsabilityDecision {
        usable,
        invalid_fraction: v.invalid_fraction,
        threshold,
        action: if usable { Action::UseWithGating } else { Action::TriggerFdir },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementId {
    Number(i64),
    Text(String),
}

impl std::fmt::Display for MeasurementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasurementId::Number(n) => write!(f, "{n}"),
            MeasurementId::Text(s) => f.write_str(s),
        }
    }
}

/// A point observation (landmark, star, ...) tied to one pixel. Fields
/// other than `id`, `row` and `col` ride along untouched as the payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub id: MeasurementId,
    pub row: i64,
    pub col: i64,
    #[serde(flatten)]
    pub payload: serde_json::Map<String, serde_json::Value>,
}

impl Measurement {
    pub fn at(id: impl Into<i64>, row: i64, col: i64) -> Self {
        Self { id: MeasurementId::Number(id.into()), row, col, payload: Default::default() }
    }

    /// Parses one measurement per non-blank line.
    pub fn parse_json_lines(text: &str) -> std::result::Result<Vec<Measurement>, (usize, serde_json::Error)> {
        text.lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .map(|(i, line)| serde_json::from_str(line).map_err(|e| (i + 1, e)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    FrameUnusable,
    InvalidPixel,
    OutOfBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub measurement: Measurement,
    pub reason: RejectReason,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GatingReport {
    pub frame_usable: bool,
    pub accepted: Vec<Measurement>,
    pub rejected: Vec<Rejection>,
}

/// Splits measurements into those the filter may use and those it must
/// skip, preserving input order on both sides.
pub fn gate_measurements(ms: &[Measurement], v: &ValidityMask, d: &UsabilityDecision) -> GatingReport {
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for m in ms {
        let reason = if !d.usable {
            Some(RejectReason::FrameUnusable)
        } else if m.row < 0 || m.col < 0 || m.row as u64 >= v.height as u64 || m.col as u64 >= v.width as u64 {
            Some(RejectReason::OutOfBounds)
        } else if !v.is_valid(m.row as usize, m.col as usize) {
            Some(RejectReason::InvalidPixel)
        } else {
            None
        };
        match reason {
            Some(reason) => rejected.push(Rejection { measurement: m.clone(), reason }),
            None => accepted.push(m.clone()),
        }
    }
    GatingReport { frame_usable: d.usable, accepted, rejected }
}
