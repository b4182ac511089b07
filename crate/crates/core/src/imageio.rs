//! Grayscale PGM images and their bridges to 1-D signals.

use std::fmt::Write as _;

use thiserror::Error;

use crate::sequences::Sequence;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PgmError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("unsupported maxval {0} (at most 255)")]
    UnsupportedMaxval(u32),
    #[error("pixel {value} at ({row}, {col}) is not an integer in 0..={maxval}")]
    UnquantizedPixels {
        row: usize,
        col: usize,
        value: f64,
        maxval: u32,
    },
    #[error("{len} samples cannot fill a {rows}x{cols} image")]
    LengthMismatch { len: usize, rows: usize, cols: usize },
}

/// Row-major grayscale image with real-valued pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    maxval: u32,
    pixels: Vec<f64>,
}

impl GrayImage {
    /// Panics when `pixels.len() != rows * cols` or a dimension is zero.
    pub fn new(rows: usize, cols: usize, maxval: u32, pixels: Vec<f64>) -> Self {
        assert!(rows >= 1 && cols >= 1, "images have at least one pixel");
        assert_eq!(pixels.len(), rows * cols, "pixel count must equal rows * cols");
        Self {
            rows,
            cols,
            maxval,
            pixels,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, maxval: u32, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        Self::new(rows, cols, maxval, pixels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn maxval(&self) -> u32 {
        self.maxval
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// ASCII.
    P2,
    /// Binary.
    P5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanDirection {
    /// Columns top to bottom, left to right.
    Columnwise,
    /// Rows left to right, top to bottom.
    Rowwise,
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u32, PgmError> {
        let tok = self
            .token()
            .ok_or_else(|| PgmError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| {
                PgmError::MalformedHeader(format!("bad {what}: {:?}", String::from_utf8_lossy(tok)))
            })
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    let format = match cur.token() {
        Some(b"P2") => PgmFormat::P2,
        Some(b"P5") => PgmFormat::P5,
        Some(other) => {
            return Err(PgmError::MalformedHeader(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
        None => return Err(PgmError::MalformedHeader("empty input".into())),
    };
    let cols = cur.number("width")? as usize;
    let rows = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if cols == 0 || rows == 0 {
        return Err(PgmError::MalformedHeader("zero image dimension".into()));
    }
    if maxval == 0 {
        return Err(PgmError::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    let expected = rows * cols;
    let pixels: Vec<f64> = match format {
        PgmFormat::P5 => {
            // exactly one whitespace byte separates maxval from the payload
            let start = cur.pos + 1;
            let payload = bytes.get(start..).unwrap_or(&[]);
            if payload.len() < expected {
                return Err(PgmError::TruncatedData {
                    expected,
                    found: payload.len(),
                });
            }
            let px = &payload[..expected];
            if let Some(&bad) = px.iter().find(|&&b| u32::from(b) > maxval) {
                return Err(PgmError::MalformedHeader(format!(
                    "sample {bad} exceeds maxval {maxval}"
                )));
            }
            px.iter().map(|&b| f64::from(b)).collect()
        }
        PgmFormat::P2 => {
            let mut px = Vec::with_capacity(expected);
            while px.len() < expected {
                let Some(tok) = cur.token() else {
                    return Err(PgmError::TruncatedData {
                        expected,
                        found: px.len(),
                    });
                };
                let text = String::from_utf8_lossy(tok);
                let v: u32 = text.parse().map_err(|_| {
                    PgmError::MalformedHeader(format!("bad ASCII sample {text:?}"))
                })?;
                if v > maxval {
                    return Err(PgmError::MalformedHeader(format!(
                        "sample {v} exceeds maxval {maxval}"
                    )));
                }
                px.push(f64::from(v));
            }
            px
        }
    };
    Ok(GrayImage::new(rows, cols, maxval, pixels))
}

fn quantized(img: &GrayImage) -> Result<Vec<u8>, PgmError> {
    if img.maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(img.maxval));
    }
    img.pixels
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v.fract() == 0.0 && v >= 0.0 && v <= f64::from(img.maxval) {
                Ok(v as u8)
            } else {
                Err(PgmError::UnquantizedPixels {
                    row: i / img.cols,
                    col: i % img.cols,
                    value: v,
                    maxval: img.maxval,
                })
            }
        })
        .collect()
}

pub fn write_pgm(img: &GrayImage, format: PgmFormat) -> Result<Vec<u8>, PgmError> {
    let px = quantized(img)?;
    let magic = match format {
        PgmFormat::P2 => "P2",
        PgmFormat::P5 => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n{}\n", img.cols, img.rows, img.maxval).into_bytes();
    match format {
        PgmFormat::P5 => out.extend_from_slice(&px),
        PgmFormat::P2 => {
            let mut text = String::new();
            for row in px.chunks(img.cols) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(text, "{}", line.join(" "));
            }
            out.extend_from_slice(text.as_bytes());
        }
    }
    Ok(out)
}

/// Scans the image into a 1-D signal.
pub fn flatten(img: &GrayImage, direction: ScanDirection) -> Sequence {
    let values = match direction {
        ScanDirection::Rowwise => img.pixels.clone(),
        ScanDirection::Columnwise => (0..img.cols)
            .flat_map(|c| (0..img.rows).map(move |r| (r, c)))
            .map(|(r, c)| img.get(r, c))
            .collect(),
    };
    Sequence::from_real(values)
}

/// Inverse of [`flatten`]; only real parts are kept.
pub fn unflatten(
    x: &Sequence,
    rows: usize,
    cols: usize,
    maxval: u32,
    direction: ScanDirection,
) -> Result<GrayImage, PgmError> {
    if rows == 0 || cols == 0 || x.len() != rows * cols {
        return Err(PgmError::LengthMismatch {
            len: x.len(),
            rows,
            cols,
        });
    }
    let v = x.re();
    Ok(match direction {
        ScanDirection::Rowwise => GrayImage::new(rows, cols, maxval, v),
        ScanDirection::Columnwise => GrayImage::from_fn(rows, cols, maxval, |r, c| v[c * rows + r]),
    })
}

/// `p' = round(255 (|p| - min|p|) / (max|p| - min|p|))`; a constant
/// magnitude maps to all zeros.
pub fn normalize_display(img: &GrayImage) -> GrayImage {
    let mags: Vec<f64> = img.pixels.iter().map(|p| p.abs()).collect();
    let lo = mags.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    let pixels = mags
        .into_iter()
        .map(|m| {
            if range > 0.0 {
                (255.0 * (m - lo) / range).round()
            } else {
                0.0
            }
        })
        .collect();
    GrayImage::new(img.rows, img.cols, 255, pixels)
}
