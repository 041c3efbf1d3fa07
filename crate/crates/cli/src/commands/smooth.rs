use strayeval_core::smooth_mask;

use crate::error::{exit, CliResult};
use crate::io::{read_mask, write_mask};
use crate::SmoothArgs;

pub fn run(args: &SmoothArgs) -> CliResult<i32> {
    let cfg = args.smoothing.config();
    // reject bad parameters before touching the filesystem
    cfg.kernel()?;
    let mask = read_mask(&args.mask)?;
    let smoothed = smooth_mask(&mask, &cfg)?;
    write_mask(&args.out, &smoothed)?;
    Ok(exit::OK)
}
