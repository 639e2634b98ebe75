//! PGM images and single-column CSV signals.
//!
//! Only 8-bit grey maps are handled: `P2` (ASCII) and `P5` (binary) with
//! `maxval = 255`. Header tokens are separated by whitespace and may be
//! interleaved with `#` comments running to the end of the line. In `P5`
//! exactly one whitespace byte separates `maxval` from the raster.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::metrics::quantize;

/// A grey-scale raster of any size, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::GridMismatch(format!(
                "{} values for a {width}×{height} image",
                values.len()
            )));
        }
        Ok(Image {
            width,
            height,
            values,
        })
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.width + col]
    }

    /// As a field on the unit-spacing pixel grid.
    pub fn to_field(&self) -> Result<Field> {
        Field::new(Grid::pixels(self.width, self.height)?, self.values.clone())
    }

    pub fn from_field(f: &Field) -> Self {
        Image {
            width: f.grid().nx(),
            height: f.grid().ny(),
            values: f.values().to_vec(),
        }
    }

    /// The sub-rectangle starting at `(col, row)`.
    pub fn crop(&self, col: usize, row: usize, width: usize, height: usize) -> Result<Image> {
        if col + width > self.width || row + height > self.height {
            return Err(Error::InvalidParameter(format!(
                "crop {width}×{height}+{col}+{row} outside a {}×{} image",
                self.width, self.height
            )));
        }
        let values = (row..row + height)
            .flat_map(|r| self.values[r * self.width + col..r * self.width + col + width].iter().copied())
            .collect();
        Ok(Image {
            width,
            height,
            values,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PgmEncoding {
    /// `P2`
    Ascii,
    /// `P5`
    #[default]
    Binary,
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::MalformedFile {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .filter(|t| !t.is_empty())
    }

    fn number(&mut self) -> Option<usize> {
        self.token()?.parse().ok()
    }
}

/// Decodes PGM bytes; `path` is only used in error messages.
pub fn decode_pgm(bytes: &[u8], path: &Path) -> Result<Image> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    let encoding = match cur.token() {
        Some("P2") => PgmEncoding::Ascii,
        Some("P5") => PgmEncoding::Binary,
        other => {
            return Err(malformed(
                path,
                format!("bad magic {:?}, expected P2 or P5", other.unwrap_or("")),
            ))
        }
    };
    let width = cur.number().ok_or_else(|| malformed(path, "missing width"))?;
    let height = cur.number().ok_or_else(|| malformed(path, "missing height"))?;
    let maxval = cur.number().ok_or_else(|| malformed(path, "missing maxval"))?;
    if width == 0 || height == 0 {
        return Err(malformed(path, format!("empty image {width}×{height}")));
    }
    if maxval != 255 {
        return Err(malformed(path, format!("maxval {maxval}, only 255 is supported")));
    }
    let count = width * height;

    let values = match encoding {
        PgmEncoding::Binary => {
            let start = cur.pos + 1;
            if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
                return Err(malformed(path, "missing whitespace before raster"));
            }
            let raster = bytes
                .get(start..start + count)
                .ok_or_else(|| malformed(path, format!("raster shorter than {count} bytes")))?;
            raster.iter().map(|&b| f64::from(b)).collect()
        }
        PgmEncoding::Ascii => {
            let mut values = Vec::with_capacity(count);
            for i in 0..count {
                let v = cur
                    .number()
                    .ok_or_else(|| malformed(path, format!("missing or invalid sample {i}")))?;
                if v > maxval {
                    return Err(malformed(path, format!("sample {v} exceeds maxval")));
                }
                values.push(v as f64);
            }
            values
        }
    };
    Image::new(width, height, values)
}

/// Encodes an image as PGM, clamping to `[0, 255]` and rounding.
pub fn encode_pgm(image: &Image, encoding: PgmEncoding) -> Vec<u8> {
    let magic = match encoding {
        PgmEncoding::Ascii => "P2",
        PgmEncoding::Binary => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", image.width, image.height).into_bytes();
    let levels = image.values.iter().map(|&v| quantize(v));
    match encoding {
        PgmEncoding::Binary => out.extend(levels),
        PgmEncoding::Ascii => {
            for row in image.values.chunks(image.width) {
                let line: Vec<String> = row.iter().map(|&v| quantize(v).to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    out
}

pub fn read_image(path: &Path) -> Result<Image> {
    let bytes = fs::read(path).map_err(io_error(path))?;
    decode_pgm(&bytes, path)
}

pub fn write_image(image: &Image, path: &Path, encoding: PgmEncoding) -> Result<()> {
    fs::write(path, encode_pgm(image, encoding)).map_err(io_error(path))
}

/// Reads a single-column CSV of reals. A non-numeric first line is taken as
/// a header; blank lines are skipped.
pub fn read_signal(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.contains(',') {
            return Err(malformed(path, format!("line {}: more than one column", i + 1)));
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(malformed(path, format!("line {}: non-finite value", i + 1))),
            Err(_) if i == 0 => {}
            Err(_) => return Err(malformed(path, format!("line {}: `{line}` is not a number", i + 1))),
        }
    }
    if values.is_empty() {
        return Err(malformed(path, "no samples"));
    }
    Ok(values)
}

/// Writes one value per line with 17 significant digits.
pub fn write_signal(values: &[f64], path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(values.len() * 24);
    for v in values {
        writeln!(out, "{v:.16e}").expect("writing to a Vec cannot fail");
    }
    fs::write(path, out).map_err(io_error(path))
}
