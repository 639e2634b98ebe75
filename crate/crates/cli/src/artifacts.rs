//! Padding, display normalization and CSV plumbing shared by the commands.

use std::fmt::Display;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use crossdiff::io::Image;
use crossdiff::{Field, Grid};

/// Where an image sits inside its padded computational domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub col: usize,
    pub row: usize,
    pub width: usize,
    pub height: usize,
}

fn padded_len(n: usize, margin: f64) -> (usize, usize) {
    let pad = (n as f64 * margin).ceil() as usize;
    let mut total = (n + 2 * pad).max(4);
    if total % 2 == 1 {
        total += 1;
    }
    let before = (total - n) / 2;
    (total, before)
}

/// Embeds `image` in a larger periodic pixel grid with `margin·size` cells of
/// padding per side. The margin is filled with the image mean.
pub fn embed(image: &Image, margin: f64) -> Result<(Field, Window)> {
    let (nx, col) = padded_len(image.width, margin);
    let (ny, row) = padded_len(image.height, margin);
    let mean = image.values.iter().sum::<f64>() / image.values.len() as f64;
    let mut values = vec![mean; nx * ny];
    for r in 0..image.height {
        let dst = (row + r) * nx + col;
        values[dst..dst + image.width].copy_from_slice(&image.values[r * image.width..(r + 1) * image.width]);
    }
    let window = Window {
        col,
        row,
        width: image.width,
        height: image.height,
    };
    Ok((Field::new(Grid::pixels(nx, ny)?, values)?, window))
}

pub fn crop(f: &Field, w: Window) -> Result<Image> {
    Ok(Image::from_field(f).crop(w.col, w.row, w.width, w.height)?)
}

/// Affine display map of a raster onto `[0, 255]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplayRange {
    pub min: f64,
    pub max: f64,
}

impl DisplayRange {
    pub fn of(values: &[f64]) -> Self {
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        DisplayRange { min, max }
    }

    /// Spread at round-off level counts as flat and is shown as black.
    pub fn is_flat(&self) -> bool {
        let scale = self.min.abs().max(self.max.abs()).max(1.0);
        self.max - self.min <= 1e-9 * scale
    }

    pub fn normalize(&self, image: &Image) -> Image {
        if self.is_flat() {
            return image.map(|_| 0.0);
        }
        let k = 255.0 / (self.max - self.min);
        image.map(|v| (v - self.min) * k)
    }
}

/// A CSV table built in memory and written in one go.
#[derive(Clone, Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv::default();
        csv.row(header);
        csv
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row<T: Display>(&mut self, cells: &[T]) {
        let cells: Vec<String> = cells.iter().map(ToString::to_string).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn numbers(&mut self, cells: &[f64]) {
        let cells: Vec<String> = cells.iter().map(|&x| num(x)).collect();
        self.row(&cells);
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, &self.text).with_context(|| format!("writing {}", path.display()))
    }
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes: `5`, `0.25`, `7.1e-17`, `inf`.
pub fn num(x: f64) -> String {
    let s = format!("{x:?}");
    s.strip_suffix(".0").map_or(s.clone(), str::to_string)
}

/// Formats a time for use in file names: `5`, `0.25`.
pub fn time_tag(t: f64) -> String {
    format!("t{}", num(t))
}
