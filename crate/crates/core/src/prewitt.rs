//! Prewitt gradient magnitude, the classical baseline for the edge channel.

use crate::error::{Error, Result};
use crate::grid::Field;

/// `√(Gx² + Gy²)` with the unnormalized 3×3 Prewitt kernels
/// `Gx = [[−1, 0, 1]; 3]` and `Gy = Gxᵀ`. Borders wrap periodically.
pub fn prewitt(f: &Field) -> Result<Field> {
    let grid = *f.grid();
    if !grid.is_2d() {
        return Err(Error::Requires2D);
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let at = |col: usize, row: usize, dc: isize, dr: isize| {
        let c = (col as isize + dc).rem_euclid(nx as isize) as usize;
        let r = (row as isize + dr).rem_euclid(ny as isize) as usize;
        f.get(c, r)
    };
    let mut values = Vec::with_capacity(grid.len());
    for row in 0..ny {
        for col in 0..nx {
            let mut gx = 0.0;
            let mut gy = 0.0;
            for k in -1..=1 {
                gx += at(col, row, 1, k) - at(col, row, -1, k);
                gy += at(col, row, k, 1) - at(col, row, k, -1);
            }
            values.push(gx.hypot(gy));
        }
    }
    Field::new(grid, values)
}
