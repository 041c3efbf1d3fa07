//! Synthetic straylight scenes with exact ground truth.
//!
//! Flares are elliptical Gaussian intensity blobs whose centres lie along
//! the line from the sun position through the frame centre. The GT mask is
//! derived from the summed flare contribution before the background is
//! added, so it is exact by construction.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`; uniform reals are the top 53 bits of each
//! 64-bit draw scaled by 2^-53, and all transcendental functions go through
//! `libm`, so a `(config, seed)` pair yields the same bytes on every
//! platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{BinaryMask, GrayImage};
use crate::regions::{label_components, region_properties, Connectivity};

/// Flare contribution is cut to zero beyond this squared Mahalanobis
/// distance (4 standard deviations).
pub const FLARE_CUTOFF_SQ: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Background {
    Flat { level: u8 },
    /// Flat level plus bright speckles on roughly `density` of the pixels.
    SpeckleNoise { level: u8, density: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SceneConfig {
    pub width: usize,
    pub height: usize,
    /// `(row, col)`; may lie outside the frame.
    pub sun_center: [f64; 2],
    pub flare_count: usize,
    /// Maximum perpendicular offset of a flare centre from the sun axis.
    pub flare_axis_jitter: f64,
    /// Peak intensity range `[min, max]`.
    pub intensity_range: [f64; 2],
    /// Per-axis standard deviation range of a flare blob, in pixels.
    pub radius_range: [f64; 2],
    /// Position range along the axis: 0 is the sun, 1 the frame centre.
    pub axis_span: [f64; 2],
    pub background: Background,
    /// Flare contribution at or above this level is fault in the GT.
    pub gt_threshold: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            width: 1024,
            height: 1024,
            sun_center: [-256.0, -256.0],
            flare_count: 5,
            flare_axis_jitter: 24.0,
            intensity_range: [140.0, 230.0],
            radius_range: [6.0, 40.0],
            axis_span: [0.35, 1.65],
            background: Background::Flat { level: 10 },
            gt_threshold: 30.0,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.width < 32 || self.height < 32 {
            return bad(format!("scene {}x{} smaller than 32x32", self.width, self.height));
        }
        if self.flare_count > 64 {
            return bad(format!("flare_count {} exceeds 64", self.flare_count));
        }
        let [lo, hi] = self.intensity_range;
        if !(0.0..=255.0).contains(&lo) || !(0.0..=255.0).contains(&hi) || lo > hi {
            return bad(format!("intensity range [{lo}, {hi}] invalid"));
        }
        let [rlo, rhi] = self.radius_range;
        if !(rlo > 0.0 && rlo <= rhi && rhi.is_finite()) {
            return bad(format!("radius range [{rlo}, {rhi}] invalid"));
        }
        let [alo, ahi] = self.axis_span;
        if !(alo.is_finite() && ahi.is_finite() && alo <= ahi) {
            return bad(format!("axis span [{alo}, {ahi}] invalid"));
        }
        if !(self.sun_center.iter().all(|v| v.is_finite()) && self.flare_axis_jitter.is_finite()) {
            return bad("sun centre and jitter must be finite".into());
        }
        if self.flare_axis_jitter < 0.0 {
            return bad("flare_axis_jitter must be nonnegative".into());
        }
        if !(self.gt_threshold > 0.0 && self.gt_threshold.is_finite()) {
            return bad(format!("gt_threshold {} must be positive", self.gt_threshold));
        }
        if let Background::SpeckleNoise { density, .. } = self.background {
            if !(0.0..=1.0).contains(&density) {
                return bad(format!("speckle density {density} outside [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlareDescriptor {
    /// `(row, col)` of the blob centre.
    pub center: [f64; 2],
    /// Standard deviation along rows and columns.
    pub radii: [f64; 2],
    pub peak_intensity: f64,
}

impl FlareDescriptor {
    /// Contribution of this flare at a pixel centre.
    pub fn contribution(&self, row: f64, col: f64) -> f64 {
        let dr = (row - self.center[0]) / self.radii[0];
        let dc = (col - self.center[1]) / self.radii[1];
        let q = dr * dr + dc * dc;
        if q > FLARE_CUTOFF_SQ {
            0.0
        } else {
            self.peak_intensity * libm::exp(-0.5 * q)
        }
    }

    /// Inclusive pixel window outside which the contribution is zero,
    /// clipped to the frame; `None` when it misses the frame.
    pub fn support_window(&self, width: usize, height: usize) -> Option<[usize; 4]> {
        let reach = FLARE_CUTOFF_SQ.sqrt();
        let r0 = libm::ceil(self.center[0] - reach * self.radii[0]).max(0.0);
        let r1 = libm::floor(self.center[0] + reach * self.radii[0]).min(height as f64 - 1.0);
        let c0 = libm::ceil(self.center[1] - reach * self.radii[1]).max(0.0);
        let c1 = libm::floor(self.center[1] + reach * self.radii[1]).min(width as f64 - 1.0);
        if r0 > r1 || c0 > c1 {
            return None;
        }
        Some([r0 as usize, c0 as usize, r1 as usize, c1 as usize])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthScene {
    pub image: GrayImage,
    pub gt: BinaryMask,
    pub flare_descriptors: Vec<FlareDescriptor>,
    pub seed: u64,
}

struct Uniform(ChaCha8Rng);

impl Uniform {
    fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn range(&mut self, [lo, hi]: [f64; 2]) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Sum of every flare's contribution, flares added in descriptor order.
pub fn flare_field(flares: &[FlareDescriptor], width: usize, height: usize) -> Vec<f64> {
    let mut field = vec![0.0; width * height];
    for f in flares {
        let Some([r0, c0, r1, c1]) = f.support_window(width, height) else {
            continue;
        };
        for row in r0..=r1 {
            for col in c0..=c1 {
                field[row * width + col] += f.contribution(row as f64, col as f64);
            }
        }
    }
    field
}

pub fn generate_scene(cfg: &SceneConfig, seed: u64) -> Result<SynthScene> {
    cfg.validate()?;
    let (w, h) = (cfg.width, cfg.height);
    let mut rng = Uniform::new(seed);

    let frame_center = [(h as f64 - 1.0) / 2.0, (w as f64 - 1.0) / 2.0];
    let axis = [frame_center[0] - cfg.sun_center[0], frame_center[1] - cfg.sun_center[1]];
    let axis_len = libm::hypot(axis[0], axis[1]);
    let (dir, axis_len) = if axis_len > 0.0 {
        ([axis[0] / axis_len, axis[1] / axis_len], axis_len)
    } else {
        ([1.0, 0.0], (h.min(w) as f64) / 2.0)
    };
    let normal = [-dir[1], dir[0]];

    let flares: Vec<FlareDescriptor> = (0..cfg.flare_count)
        .map(|_| {
            let t = rng.range(cfg.axis_span) * axis_len;
            let offset = rng.range([-cfg.flare_axis_jitter, cfg.flare_axis_jitter]);
            let center = [
                cfg.sun_center[0] + t * dir[0] + offset * normal[0],
                cfg.sun_center[1] + t * dir[1] + offset * normal[1],
            ];
            let radii = [rng.range(cfg.radius_range), rng.range(cfg.radius_range)];
            let peak_intensity = rng.range(cfg.intensity_range);
            FlareDescriptor { center, radii, peak_intensity }
        })
        .collect();

    let field = flare_field(&flares, w, h);
    let gt = BinaryMask::new(w, h, field.iter().map(|&v| v >= cfg.gt_threshold).collect())?;

    let values = field
        .iter()
        .map(|&flare| {
            let bg = match cfg.background {
                Background::Flat { level } => level as f64,
                Background::SpeckleNoise { level, density } => {
                    let draw = rng.0.next_u64();
                    let hit = ((draw >> 32) as f64) < density * 4_294_967_296.0;
                    if hit {
                        let frac = (draw & 0xffff_ffff) as f64 / 4_294_967_296.0;
                        level as f64 + frac * (255.0 - level as f64)
                    } else {
                        level as f64
                    }
                }
            };
            libm::round(bg + flare).clamp(0.0, 255.0) as u8
        })
        .collect();
    let image = GrayImage::new(w, h, values)?;

    Ok(SynthScene { image, gt, flare_descriptors: flares, seed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripeOrientation {
    /// Erase whole rows.
    Rows,
    /// Erase whole columns.
    Cols,
}

/// Erases periodic stripes from a mask: index `i` along the orientation
/// is cleared when `i % period < stripe_width`.
pub fn fragment_mask(
    gt: &BinaryMask,
    period: usize,
    stripe_width: usize,
    orientation: StripeOrientation,
) -> Result<BinaryMask> {
    if period == 0 || stripe_width >= period {
        return Err(Error::InvalidParameter(format!(
            "stripe width {stripe_width} must be smaller than period {period}"
        )));
    }
    let w = gt.width();
    let bits = gt
        .bits()
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let along = match orientation {
                StripeOrientation::Rows => i / w,
                StripeOrientation::Cols => i % w,
            };
            b && along % period >= stripe_width
        })
        .collect();
    BinaryMask::new(w, gt.height(), bits)
}

/// Intensity threshold (`>=`) followed by removal of 8-connected regions
/// smaller than `min_area`.
pub fn baseline_segment(img: &GrayImage, intensity_threshold: u8, min_area: usize) -> BinaryMask {
    let raw = BinaryMask::new(
        img.width(),
        img.height(),
        img.values().iter().map(|&v| v >= intensity_threshold).collect(),
    )
    .expect("image dimensions are valid");
    if min_area <= 1 {
        return raw;
    }
    let lm = label_components(&raw, Connectivity::EightNeighbor);
    let keep: Vec<bool> = std::iter::once(false)
        .chain(region_properties(&lm).iter().map(|r| r.area >= min_area))
        .collect();
    BinaryMask::new(img.width(), img.height(), lm.labels().iter().map(|&l| keep[l as usize]).collect())
        .expect("label map dimensions are valid")
}
