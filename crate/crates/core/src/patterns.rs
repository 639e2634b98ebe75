//! Deterministic synthetic test signals with values in `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// 1 on `|x| < L/2` (and `|y| < L/2` in 2D), 0 elsewhere.
    Box,
    /// 1 on `x ≥ 0`.
    Step,
    /// 1 inside the centered disk of radius `L/2`.
    Disk,
    /// Alternating squares of side `L/4`.
    Checkerboard,
    /// `exp(−|x|² / (2w²))` with `w = L/8`.
    GaussianBump,
    /// Piecewise-constant scene: background, a bright disk, a mid-grey
    /// square and a checkerboard patch.
    Phantom,
}

impl PatternKind {
    pub const ALL: [PatternKind; 6] = [
        PatternKind::Box,
        PatternKind::Step,
        PatternKind::Disk,
        PatternKind::Checkerboard,
        PatternKind::GaussianBump,
        PatternKind::Phantom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PatternKind::Box => "box",
            PatternKind::Step => "step",
            PatternKind::Disk => "disk",
            PatternKind::Checkerboard => "checkerboard",
            PatternKind::GaussianBump => "gaussian",
            PatternKind::Phantom => "phantom",
        }
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

pub fn make_test_pattern(kind: PatternKind, grid: &Grid) -> Field {
    let lx = grid.x_axis().half_width;
    let ly = grid.y_axis().map_or(lx, |a| a.half_width);
    let two_d = grid.is_2d();
    match kind {
        PatternKind::Box => Field::from_fn(*grid, |x, y| {
            indicator(x.abs() < lx / 2.0 && (!two_d || y.abs() < ly / 2.0))
        }),
        PatternKind::Step => Field::from_fn(*grid, |x, _| indicator(x >= 0.0)),
        PatternKind::Disk => {
            let radius = lx.min(ly) / 2.0;
            Field::from_fn(*grid, move |x, y| indicator(x * x + y * y < radius * radius))
        }
        PatternKind::Checkerboard => {
            let (sx, sy) = (lx / 4.0, ly / 4.0);
            Field::from_fn(*grid, move |x, y| {
                let cell = ((x + lx) / sx).floor() as i64 + ((y + ly) / sy).floor() as i64;
                indicator(cell.rem_euclid(2) == 1)
            })
        }
        PatternKind::GaussianBump => {
            let w = lx.min(ly) / 8.0;
            Field::from_fn(*grid, move |x, y| (-(x * x + y * y) / (2.0 * w * w)).exp())
        }
        PatternKind::Phantom => Field::from_fn(*grid, move |x, y| {
            let (u, v) = (x / lx, y / ly);
            if (u + 0.3).powi(2) + (v + 0.3).powi(2) < 0.3f64.powi(2) {
                0.85
            } else if (u - 0.35).abs() < 0.25 && (v + 0.35).abs() < 0.2 {
                0.5
            } else if (u - 0.3).abs() < 0.3 && (v - 0.35).abs() < 0.3 {
                let cell = (u * 10.0).floor() as i64 + (v * 10.0).floor() as i64;
                if cell.rem_euclid(2) == 0 {
                    0.7
                } else {
                    0.3
                }
            } else {
                0.2
            }
        }),
    }
}
