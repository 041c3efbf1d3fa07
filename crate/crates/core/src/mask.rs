//! Mask and frame rasters with their file codecs.
//!
//! Masks are persisted as 8-bit single-channel PNG holding `{0, 255}`.
//! Decoding accepts 8-bit grayscale PNG and binary PGM (`P5`); any nonzero
//! sample decodes to `true`, so anti-aliased masks from other tools load.

use std::cell::Cell;
use std::io::Read;
use std::rc::Rc;

use crate::error::{Error, Result};

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions {
            width,
            height,
            reason: "width and height must be at least 1".into(),
        });
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::InvalidDimensions {
            width,
            height,
            reason: format!("buffer holds {len} samples"),
        });
    }
    Ok(())
}

/// Per-pixel fault classification of one frame; `true` marks a fault
/// (straylight) pixel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl std::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMask {}x{}", self.width, self.height)?;
        for row in self.bits.chunks(self.width) {
            let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(width, height, bits.len())?;
        Ok(Self { width, height, bits })
    }

    /// All-false mask.
    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, false)
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self> {
        let len = width.checked_mul(height).ok_or_else(|| Error::InvalidDimensions {
            width,
            height,
            reason: "pixel count overflows".into(),
        })?;
        Self::new(width, height, vec![value; len])
    }

    /// Builds a mask with the listed `(row, col)` pixels set.
    pub fn from_pixels(width: usize, height: usize, pixels: &[(usize, usize)]) -> Result<Self> {
        let mut mask = Self::empty(width, height)?;
        for &(r, c) in pixels {
            if r >= height || c >= width {
                return Err(Error::InvalidParameter(format!(
                    "pixel ({r}, {c}) outside {width}x{height} mask"
                )));
            }
            mask.set(r, c, true);
        }
        Ok(mask)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false: masks hold at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    /// True when every pixel set here is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub(crate) fn require_same_dims(&self, other: &BinaryMask) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::mismatch(self.dims(), other.dims()));
        }
        Ok(())
    }

    /// Samples as stored on disk: 255 for set pixels, 0 otherwise.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}

/// Single-channel 8-bit frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    values: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, values: Vec<u8>) -> Result<Self> {
        check_dims(width, height, values.len())?;
        Ok(Self { width, height, values })
    }

    pub fn filled(width: usize, height: usize, level: u8) -> Result<Self> {
        Self::new(width, height, vec![level; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.values[row * self.width + col]
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        encode_png_gray8(self.width, self.height, &self.values)
    }
}

/// Real-valued raster; every value is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl FloatField {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_dims(width, height, values.len())?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite value at index {i}")));
        }
        Ok(Self { width, height, values })
    }

    /// `{0, 1}` field of a mask.
    pub fn from_mask(mask: &BinaryMask) -> Self {
        Self {
            width: mask.width,
            height: mask.height,
            values: mask.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    /// Pixels strictly above `threshold`.
    pub fn threshold_above(&self, threshold: f64) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.values.iter().map(|&v| v > threshold).collect(),
        }
    }
}

/// Decoded 8-bit raster with 1 to 4 interleaved channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub channels: u8,
    pub data: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: u8, data: Vec<u8>) -> Result<Self> {
        if !(1..=4).contains(&channels) {
            return Err(Error::Channels { channels, expected: "1 to 4" });
        }
        let samples = width.checked_mul(height).and_then(|n| n.checked_mul(channels as usize));
        if width == 0 || height == 0 || samples != Some(data.len()) {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: format!("{} samples for {channels} channel(s)", data.len()),
            });
        }
        Ok(Self { width, height, channels, data })
    }
}

/// Collapses a 1- or 3-channel image to luminance.
///
/// RGB uses the fixed weights 0.299/0.587/0.114 rounded half-up to the
/// nearest integer. The weighted sum is formed in integer thousandths so
/// the result does not depend on floating-point rounding.
pub fn luminance(img: &RasterImage) -> Result<GrayImage> {
    match img.channels {
        1 => GrayImage::new(img.width, img.height, img.data.clone()),
        3 => {
            let values = img
                .data
                .chunks_exact(3)
                .map(|px| {
                    let weighted = 299 * px[0] as u32 + 587 * px[1] as u32 + 114 * px[2] as u32;
                    ((weighted + 500) / 1000) as u8
                })
                .collect();
            GrayImage::new(img.width, img.height, values)
        }
        n => Err(Error::Channels { channels: n, expected: "1 or 3" }),
    }
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];

/// Decodes an 8-bit PNG or binary PGM into a raster of its native channel
/// count. Palette and sub-byte grayscale PNGs are expanded to 8 bits.
pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    if bytes.starts_with(&PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else {
        Err(Error::Decode {
            offset: 0,
            message: "unrecognised signature: expected PNG or binary PGM (P5)".into(),
        })
    }
}

/// Decodes a single-channel mask; zero is nominal, any other sample is a
/// fault pixel.
pub fn decode_mask(bytes: &[u8]) -> Result<BinaryMask> {
    let raster = decode_image(bytes)?;
    if raster.channels != 1 {
        return Err(Error::Channels { channels: raster.channels, expected: "1" });
    }
    let bits = raster.data.iter().map(|&v| v != 0).collect();
    BinaryMask::new(raster.width, raster.height, bits)
}

/// Encodes a mask as 8-bit grayscale PNG with `{0, 255}` samples.
pub fn encode_mask(mask: &BinaryMask) -> Result<Vec<u8>> {
    encode_png_gray8(mask.width, mask.height, &mask.to_bytes())
}

pub(crate) fn encode_png_gray8(width: usize, height: usize, samples: &[u8]) -> Result<Vec<u8>> {
    encode_png(width, height, png::BitDepth::Eight, samples)
}

/// 16-bit grayscale PNG from native-endian sample values.
pub(crate) fn encode_png_gray16(width: usize, height: usize, samples: &[u16]) -> Result<Vec<u8>> {
    let bytes: Vec<u8> = samples.iter().flat_map(|v| v.to_be_bytes()).collect();
    encode_png(width, height, png::BitDepth::Sixteen, &bytes)
}

fn encode_png(width: usize, height: usize, depth: png::BitDepth, data: &[u8]) -> Result<Vec<u8>> {
    let w = u32::try_from(width).map_err(|_| Error::Encode("width exceeds u32".into()))?;
    let h = u32::try_from(height).map_err(|_| Error::Encode("height exceeds u32".into()))?;
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, w, h);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(depth);
        encoder.set_compression(png::Compression::Default);
        let mut writer = encoder.write_header().map_err(|e| Error::Encode(e.to_string()))?;
        writer.write_image_data(data).map_err(|e| Error::Encode(e.to_string()))?;
        writer.finish().map_err(|e| Error::Encode(e.to_string()))?;
    }
    Ok(out)
}

/// Hands the decoder one byte per read so the consumed count is exact
/// when an error surfaces.
struct TrackingReader<'a> {
    data: &'a [u8],
    pos: Rc<Cell<u64>>,
}

impl Read for TrackingReader<'_> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let pos = self.pos.get() as usize;
        if buf.is_empty() || pos >= self.data.len() {
            return Ok(0);
        }
        buf[0] = self.data[pos];
        self.pos.set(pos as u64 + 1);
        Ok(1)
    }
}

fn decode_png(bytes: &[u8]) -> Result<RasterImage> {
    let pos = Rc::new(Cell::new(0u64));
    let source = TrackingReader { data: bytes, pos: Rc::clone(&pos) };
    let fail = |e: png::DecodingError| Error::Decode { offset: pos.get(), message: e.to_string() };

    let mut decoder = png::Decoder::new(source);
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(fail)?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight {
        return Err(Error::BitDepth(depth as u8));
    }
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame = reader.next_frame(&mut buf).map_err(fail)?;
    buf.truncate(frame.buffer_size());
    RasterImage::new(frame.width as usize, frame.height as usize, color.samples() as u8, buf)
}

fn decode_pgm(bytes: &[u8]) -> Result<RasterImage> {
    let mut pos = 2usize;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Decode { offset: pos as u64, message: "expected decimal header field".into() });
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Decode { offset: start as u64, message: "header field out of range".into() })?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Decode { offset: pos as u64, message: "expected whitespace after maxval".into() });
    }
    pos += 1;

    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 255 {
        if maxval > 255 && maxval < 65536 {
            return Err(Error::BitDepth(16));
        }
        return Err(Error::Decode { offset: pos as u64 - 1, message: format!("invalid maxval {maxval}") });
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions { width, height, reason: "empty PGM".into() });
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Decode { offset: 0, message: "pixel count overflows".into() })?;
    let data = bytes.get(pos..).unwrap_or_default();
    if data.len() < len {
        return Err(Error::Decode {
            offset: bytes.len() as u64,
            message: format!("truncated raster: {} of {len} samples", data.len()),
        });
    }
    RasterImage::new(width, height, 1, data[..len].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgm(width: usize, height: usize, data: &[u8]) -> Vec<u8> {
        let mut out = format!("P5\n# test\n{width} {height}\n255\n").into_bytes();
        out.extend_from_slice(data);
        out
    }

    #[test]
    fn pgm_nonzero_is_true() {
        let mask = decode_mask(&pgm(2, 2, &[0, 255, 0, 128])).unwrap();
        assert_eq!(mask.bits(), &[false, true, false, true]);
    }

    #[test]
    fn large_zero_png_decodes_all_false() {
        let bytes = encode_png_gray8(1024, 1024, &vec![0; 1024 * 1024]).unwrap();
        let mask = decode_mask(&bytes).unwrap();
        assert_eq!(mask.dims(), (1024, 1024));
        assert!(!mask.any());
    }

    #[test]
    fn constant_masks_encode_to_extremes() {
        for (value, expected) in [(false, 0u8), (true, 255u8)] {
            let mask = BinaryMask::filled(3, 3, value).unwrap();
            let raster = decode_image(&encode_mask(&mask).unwrap()).unwrap();
            assert_eq!(raster.channels, 1);
            assert!(raster.data.iter().all(|&v| v == expected));
        }
    }

    #[test]
    fn encoding_is_deterministic() {
        let mask = BinaryMask::from_pixels(5, 4, &[(0, 0), (3, 4), (2, 2)]).unwrap();
        assert_eq!(encode_mask(&mask).unwrap(), encode_mask(&mask.clone()).unwrap());
    }

    #[test]
    fn rgb_png_is_a_channel_error() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 2, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[1, 2, 3, 4, 5, 6]).unwrap();
        }
        let err = decode_mask(&out).unwrap_err();
        assert!(matches!(err, Error::Channels { channels: 3, .. }), "{err}");
        assert!(err.to_string().contains('3'));
        // the image itself is still decodable and convertible
        let gray = luminance(&decode_image(&out).unwrap()).unwrap();
        assert_eq!(gray.dims(), (2, 1));
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        let err = decode_mask(b"GIF89a").unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 0, .. }));

        let truncated = pgm(4, 4, &[0; 10]);
        match decode_mask(&truncated).unwrap_err() {
            Error::Decode { offset, .. } => assert_eq!(offset, truncated.len() as u64),
            other => panic!("unexpected {other}"),
        }

        match decode_mask(b"P5\n4 x\n255\n").unwrap_err() {
            Error::Decode { offset, .. } => assert_eq!(offset, 5),
            other => panic!("unexpected {other}"),
        }

        let mut png = encode_mask(&BinaryMask::filled(8, 8, true).unwrap()).unwrap();
        let cut = png.len() - 20;
        png.truncate(cut);
        match decode_mask(&png).unwrap_err() {
            Error::Decode { offset, .. } => assert!(offset > 8 && offset <= cut as u64),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn pgm_16_bit_rejected() {
        let bytes = b"P5 1 1 65535\n\x00\x01";
        assert!(matches!(decode_mask(bytes), Err(Error::BitDepth(16))));
    }

    #[test]
    fn luminance_values() {
        let img = RasterImage::new(3, 1, 3, vec![255, 255, 255, 0, 0, 0, 255, 0, 0]).unwrap();
        assert_eq!(luminance(&img).unwrap().values(), &[255, 0, 76]);
        let two = RasterImage::new(1, 1, 2, vec![1, 2]).unwrap();
        assert!(matches!(luminance(&two), Err(Error::Channels { channels: 2, .. })));
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(BinaryMask::new(0, 3, vec![]).is_err());
        assert!(BinaryMask::new(2, 2, vec![true; 3]).is_err());
        assert!(FloatField::new(1, 1, vec![f64::NAN]).is_err());
    }

    fn arb_mask(max: usize) -> impl Strategy<Value = BinaryMask> {
        (1..=max, 1..=max).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h).prop_map(move |bits| BinaryMask::new(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn png_round_trip(mask in arb_mask(64)) {
            prop_assert_eq!(decode_mask(&encode_mask(&mask).unwrap()).unwrap(), mask);
        }

        #[test]
        fn luminance_bounded_and_monotone(r in any::<u8>(), g in any::<u8>(), b in any::<u8>(), ch in 0usize..3) {
            let base = RasterImage::new(1, 1, 3, vec![r, g, b]).unwrap();
            let y0 = luminance(&base).unwrap().values()[0];
            let mut bumped = base.data.clone();
            bumped[ch] = bumped[ch].saturating_add(1);
            let y1 = luminance(&RasterImage::new(1, 1, 3, bumped).unwrap()).unwrap().values()[0];
            prop_assert!(y1 >= y0);
        }
    }
}
