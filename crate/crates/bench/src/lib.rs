//! Fixtures shared by the criterion benches.

use strayeval_core::{fragment_mask, generate_scene, BinaryMask, SceneConfig, StripeOrientation};

/// A full-size prediction/GT pair: the GT is a generated scene's mask with
/// row stripes erased, the prediction is the untouched mask.
pub fn frame_pair(seed: u64) -> (BinaryMask, BinaryMask) {
    let scene = generate_scene(&SceneConfig { flare_count: 12, ..SceneConfig::default() }, seed)
        .expect("default scene config is valid");
    let gt = fragment_mask(&scene.gt, 8, 2, StripeOrientation::Rows).expect("stripe parameters are valid");
    (scene.gt, gt)
}
