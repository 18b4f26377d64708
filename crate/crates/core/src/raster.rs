//! 8-bit grayscale rasters, binary masks and binary PGM (P5) I/O.
//!
//! PGM is the interchange format for occlusion masks and normalized textures:
//! 255 marks a usable pixel in a mask, 0 a masked one. Output writes a fixed
//! `P5\n<w> <h>\n255\n` header so artifacts are byte-stable across runs.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrisImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl IrisImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("image dimensions must be positive".into()));
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "pixel buffer holds {} bytes, expected {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn min_dimension(&self) -> usize {
        self.width.min(self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    /// Bilinear sample at a real-valued position. Returns `None` when any of
    /// the four neighbours falls outside the image.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<f64> {
        if !x.is_finite() || !y.is_finite() || x < 0.0 || y < 0.0 {
            return None;
        }
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = x0 + 1;
        let y1 = y0 + 1;
        // fx == 0 or fy == 0 still requires the far neighbour in bounds; the
        // validity-mask contract checks all four interpolation neighbours.
        if x1 >= self.width || y1 >= self.height {
            return None;
        }
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let p00 = self.get(x0, y0) as f64;
        let p10 = self.get(x1, y0) as f64;
        let p01 = self.get(x0, y1) as f64;
        let p11 = self.get(x1, y1) as f64;
        Some(p00 * (1.0 - fx) * (1.0 - fy) + p10 * fx * (1.0 - fy) + p01 * (1.0 - fx) * fy + p11 * fx * fy)
    }

    /// 256-bin intensity histogram.
    pub fn histogram(&self) -> [u64; 256] {
        let mut h = [0u64; 256];
        for &p in &self.data {
            h[p as usize] += 1;
        }
        h
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        write_pgm_bytes(path, self.width, self.height, &self.data)
    }

    pub fn read_pgm(path: &Path) -> Result<Self> {
        let (width, height, data) = read_pgm_bytes(path)?;
        IrisImage::new(width, height, data)
    }
}

/// Per-pixel binary raster; `true` means usable/valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count_usable(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let bytes: Vec<u8> = self.data.iter().map(|&b| if b { 255 } else { 0 }).collect();
        write_pgm_bytes(path, self.width, self.height, &bytes)
    }

    /// Reads a mask PGM; values >= 128 count as usable.
    pub fn read_pgm(path: &Path) -> Result<Self> {
        let (width, height, bytes) = read_pgm_bytes(path)?;
        Ok(Self {
            width,
            height,
            data: bytes.into_iter().map(|b| b >= 128).collect(),
        })
    }
}

fn write_pgm_bytes(path: &Path, width: usize, height: usize, data: &[u8]) -> Result<()> {
    let mut header = String::new();
    let _ = write!(header, "P5\n{} {}\n255\n", width, height);
    let mut out = Vec::with_capacity(header.len() + data.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(data);
    let mut file = std::fs::File::create(path)?;
    file.write_all(&out)?;
    Ok(())
}

fn read_pgm_bytes(path: &Path) -> Result<(usize, usize, Vec<u8>)> {
    let mut raw = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut raw)?;
    let display = path.display().to_string();
    parse_pgm(&raw).map_err(|m| Error::format(display, m))
}

/// Binary PGM (P5) parser; accepts `#` comments and arbitrary whitespace in
/// the header, maxval up to 255.
fn parse_pgm(raw: &[u8]) -> std::result::Result<(usize, usize, Vec<u8>), String> {
    if raw.len() < 2 || &raw[0..2] != b"P5" {
        return Err("not a binary PGM (missing P5 magic)".into());
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // skip whitespace and comments
        loop {
            while pos < raw.len() && raw[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < raw.len() && raw[pos] == b'#' {
                while pos < raw.len() && raw[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < raw.len() && raw[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated PGM header".into());
        }
        let text = std::str::from_utf8(&raw[start..pos]).map_err(|_| "non-ASCII header")?;
        *field = text.parse::<usize>().map_err(|e| format!("bad header field: {e}"))?;
    }
    let (width, height, maxval) = (fields[0], fields[1], fields[2]);
    if maxval == 0 || maxval > 255 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    if pos >= raw.len() || !raw[pos].is_ascii_whitespace() {
        return Err("missing separator after maxval".into());
    }
    pos += 1;
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| "dimensions overflow".to_string())?;
    if raw.len() < pos + expected {
        return Err(format!(
            "pixel data truncated: have {} bytes, need {}",
            raw.len() - pos,
            expected
        ));
    }
    Ok((width, height, raw[pos..pos + expected].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.pgm");
        let img = IrisImage::from_fn(7, 5, |x, y| (x * 13 + y * 31) as u8);
        img.write_pgm(&path).unwrap();
        let back = IrisImage::read_pgm(&path).unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn pgm_header_with_comment() {
        let raw = b"P5\n# a comment\n3 2\n255\n\x00\x01\x02\x03\x04\x05";
        let (w, h, data) = parse_pgm(raw).unwrap();
        assert_eq!((w, h), (3, 2));
        assert_eq!(data, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn pgm_truncated_data_rejected() {
        let raw = b"P5\n4 4\n255\n\x00\x01";
        assert!(parse_pgm(raw).is_err());
    }

    #[test]
    fn mask_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        let mask = Mask::from_fn(9, 4, |x, y| (x + y) % 3 == 0);
        mask.write_pgm(&path).unwrap();
        assert_eq!(Mask::read_pgm(&path).unwrap(), mask);
    }

    #[test]
    fn bilinear_matches_corners_and_rejects_border() {
        let img = IrisImage::from_fn(4, 4, |x, y| (x * 10 + y) as u8);
        assert_eq!(img.sample_bilinear(1.0, 2.0), Some(12.0));
        // midway between (1,1)=11 and (2,1)=21
        assert_eq!(img.sample_bilinear(1.5, 1.0), Some(16.0));
        // far neighbour out of bounds
        assert_eq!(img.sample_bilinear(3.0, 3.0), None);
        assert_eq!(img.sample_bilinear(-0.1, 1.0), None);
    }

    #[test]
    fn histogram_counts_all_pixels() {
        let img = IrisImage::from_fn(16, 16, |x, _| (x % 4) as u8 * 10);
        let h = img.histogram();
        assert_eq!(h.iter().sum::<u64>(), 256);
        assert_eq!(h[0], 64);
        assert_eq!(h[10], 64);
    }
}
