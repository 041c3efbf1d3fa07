//! Gaussian repair of fragmented ground-truth masks.
//!
//! A mask is treated as a `{0, 1}` field, blurred with a truncated sampled
//! Gaussian (row pass, then column pass) and binarized. Because the blur
//! of a nonnegative field is nonnegative and exactly zero away from set
//! pixels, thresholding just above zero grows every region by the kernel
//! radius along each axis, bridging gaps of up to twice the radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{BinaryMask, FloatField};

/// Sampled, normalised 1-D Gaussian truncated at `truncate` standard
/// deviations.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianKernel {
    sigma: f64,
    truncate: f64,
    radius: usize,
    weights: Vec<f64>,
}

impl GaussianKernel {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn truncate(&self) -> f64 {
        self.truncate
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Taps `-radius..=radius`; the centre tap sits at index `radius`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn center_weight(&self) -> f64 {
        self.weights[self.radius]
    }
}

/// Builds the kernel with radius `floor(truncate * sigma + 0.5)`.
pub fn gaussian_kernel(sigma: f64, truncate: f64) -> Result<GaussianKernel> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    if !(truncate.is_finite() && truncate > 0.0) {
        return Err(Error::InvalidParameter(format!("truncate must be positive, got {truncate}")));
    }
    let radius_f = (truncate * sigma + 0.5).floor();
    if radius_f > 1e6 {
        return Err(Error::InvalidParameter(format!("kernel radius {radius_f} too large")));
    }
    let radius = radius_f as usize;
    let two_var = 2.0 * sigma * sigma;
    let raw: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let k = i as f64 - radius as f64;
            (-k * k / two_var).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // exact symmetry regardless of summation rounding
    for k in 1..=radius {
        weights[radius + k] = weights[radius - k];
    }
    Ok(GaussianKernel { sigma, truncate, radius, weights })
}

/// How the blur samples beyond the frame edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Border {
    /// Mirror about the edge, repeating the edge sample (`d c b a | a b c d`).
    #[default]
    Reflect,
    /// Samples outside the frame are zero.
    ZeroPad,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub sigma: f64,
    pub truncate: f64,
    /// Pixels whose blurred value is strictly greater than this become set.
    #[serde(rename = "threshold")]
    pub binarize_threshold: f64,
    pub border: Border,
}

impl SmoothingConfig {
    /// Smallest positive normal `f64`: any nonzero response marks a pixel.
    pub const DEFAULT_THRESHOLD: f64 = f64::MIN_POSITIVE;

    /// Checks the parameters and returns the kernel they describe.
    ///
    /// The threshold must lie below the squared centre weight, which is the
    /// least response an isolated set pixel gives itself.
    pub fn kernel(&self) -> Result<GaussianKernel> {
        let kernel = gaussian_kernel(self.sigma, self.truncate)?;
        let floor = kernel.center_weight() * kernel.center_weight();
        if !(self.binarize_threshold > 0.0 && self.binarize_threshold < floor) {
            return Err(Error::InvalidParameter(format!(
                "binarize threshold {} outside (0, {floor})",
                self.binarize_threshold
            )));
        }
        Ok(kernel)
    }
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self { sigma: 1.0, truncate: 5.0, binarize_threshold: Self::DEFAULT_THRESHOLD, border: Border::Reflect }
    }
}

/// Maps an out-of-range index into `0..len` by half-sample reflection.
fn reflect_index(i: isize, len: usize) -> usize {
    let period = 2 * len as isize;
    let m = i.rem_euclid(period);
    if m >= len as isize {
        (period - 1 - m) as usize
    } else {
        m as usize
    }
}

/// Convolves one contiguous line of samples.
fn convolve_line(src: &[f64], dst: &mut [f64], kernel: &GaussianKernel, border: Border) {
    let r = kernel.radius as isize;
    let w = &kernel.weights;
    let n = src.len() as isize;
    for i in 0..n {
        let mut acc = 0.0;
        if i >= r && i + r < n {
            let window = &src[(i - r) as usize..=(i + r) as usize];
            for (&wk, &s) in w.iter().zip(window) {
                acc += wk * s;
            }
        } else {
            for (k, &wk) in w.iter().enumerate() {
                let j = i + k as isize - r;
                let sample = if (0..n).contains(&j) {
                    src[j as usize]
                } else {
                    match border {
                        Border::Reflect => src[reflect_index(j, src.len())],
                        Border::ZeroPad => continue,
                    }
                };
                acc += wk * sample;
            }
        }
        dst[i as usize] = acc;
    }
}

/// Separable blur: every row, then every column.
pub fn blur(field: &FloatField, kernel: &GaussianKernel, border: Border) -> FloatField {
    let (w, h) = (field.width(), field.height());
    let src = field.values();
    let mut rows = vec![0.0; src.len()];
    for (line, out) in src.chunks_exact(w).zip(rows.chunks_exact_mut(w)) {
        convolve_line(line, out, kernel, border);
    }
    // Column pass accumulates whole rows at a time for cache locality; the
    // per-pixel summation order (ascending tap) matches `convolve_line`.
    let r = kernel.radius as isize;
    let mut out = vec![0.0; src.len()];
    for (i, out_row) in out.chunks_exact_mut(w).enumerate() {
        for (k, &wk) in kernel.weights.iter().enumerate() {
            let j = i as isize + k as isize - r;
            let j = if (0..h as isize).contains(&j) {
                j as usize
            } else {
                match border {
                    Border::Reflect => reflect_index(j, h),
                    Border::ZeroPad => continue,
                }
            };
            let src_row = &rows[j * w..(j + 1) * w];
            for (o, &s) in out_row.iter_mut().zip(src_row) {
                *o += wk * s;
            }
        }
    }
    FloatField::new(w, h, out).expect("blur of a finite field is finite")
}

/// Blurs the ground truth and keeps pixels above the binarization
/// threshold. The result is always a superset of the input.
pub fn smooth_mask(gt: &BinaryMask, cfg: &SmoothingConfig) -> Result<BinaryMask> {
    let kernel = cfg.kernel()?;
    if !gt.any() {
        return Ok(gt.clone());
    }
    let field = blur(&FloatField::from_mask(gt), &kernel, cfg.border);
    Ok(field.threshold_above(cfg.binarize_threshold))
}
