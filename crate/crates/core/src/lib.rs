//! Evaluation of straylight (lens flare) segmentation masks.
//!
//! The crate covers the whole path from a per-pixel fault mask to the
//! numbers and decisions built on top of it:
//!
//! * [`mask`]: binary masks, grayscale frames and their PNG/PGM codecs.
//! * [`regions`]: connected-component labeling and region properties.
//! * [`smoothing`]: Gaussian repair of fragmented ground-truth masks.
//! * [`metrics`]: pixel metrics plus the artifact-level PaP, PaR and PamIoU.
//! * [`pipeline`]: validity masks, frame usability and measurement gating.
//! * [`synth`]: a seeded flare-scene generator, a GT fragmenter and a
//!   threshold segmenter used as a stand-in predictor.
//!
//! Pixel coordinates are `(row, col)` with the origin at the top-left
//! corner, and every raster is stored row-major.

pub mod error;
pub mod mask;
pub mod metrics;
pub mod pipeline;
pub mod regions;
pub mod smoothing;
pub mod synth;

pub use error::{Error, Result};
pub use mask::{decode_image, decode_mask, encode_mask, luminance, BinaryMask, FloatField, GrayImage, RasterImage};
pub use metrics::{
    artifact_metrics, evaluate, evaluate_with, iou_from_precision_recall, match_artifacts, match_artifacts_with, pixel_metrics, ArtifactMatch,
    ArtifactMetrics, EvalOptions, MetricsReport, PixelMetrics,
};
pub use pipeline::{
    build_validity, build_validity_with_margin, decide_usability, gate_measurements, Action, GatingReport,
    Measurement, MeasurementId, RejectReason, Rejection, UsabilityDecision, ValidityMask, DEFAULT_USABILITY_THRESHOLD,
};
pub use regions::{label_components, region_properties, Connectivity, LabelMap, Region};
pub use smoothing::{gaussian_kernel, smooth_mask, Border, GaussianKernel, SmoothingConfig};
pub use synth::{baseline_segment, fragment_mask, generate_scene, Background, FlareDescriptor, SceneConfig, StripeOrientation, SynthScene};
