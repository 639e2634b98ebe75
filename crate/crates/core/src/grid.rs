//! Periodic sample grids, discrete Fourier transforms and Fourier multipliers.
//!
//! Samples sit at `x_j = −L + j·h`, `h = 2L/N`, `j = 0..N`; the domain is
//! periodic. Mode index `k` of the DFT corresponds to the signed index
//! `j ∈ {−N/2, …, N/2 − 1}` and the wavenumber `ω_j = π·j / L`.
//!
//! 2D fields are stored row-major: `ny` rows along `y`, each holding `nx`
//! samples along `x`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Relative size of the imaginary part tolerated when a multiplied spectrum
/// is brought back to a real field.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-12;

/// One periodic axis `(−L, L)` sampled at `n` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub half_width: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "sample count must be even and ≥ 4, got {n}"
            )));
        }
        Ok(Axis { half_width, n })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Signed mode index of DFT bin `k`.
    pub fn mode_index(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Wavenumber `π·j / L` of DFT bin `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        PI * self.mode_index(k) as f64 / self.half_width
    }

    fn is_nyquist(&self, k: usize) -> bool {
        k == self.n / 2
    }
}

/// A uniform periodic grid in one or two dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    x: Axis,
    y: Option<Axis>,
}

impl Grid {
    pub fn new_1d(half_width: f64, n: usize) -> Result<Self> {
        Ok(Grid {
            x: Axis::new(half_width, n)?,
            y: None,
        })
    }

    pub fn new_2d(lx: f64, nx: usize, ly: f64, ny: usize) -> Result<Self> {
        Ok(Grid {
            x: Axis::new(lx, nx)?,
            y: Some(Axis::new(ly, ny)?),
        })
    }

    /// A 2D grid with unit pixel spacing (`L = N/2` on each axis).
    pub fn pixels(width: usize, height: usize) -> Result<Self> {
        Self::new_2d(width as f64 / 2.0, width, height as f64 / 2.0, height)
    }

    pub fn dims(&self) -> usize {
        if self.y.is_some() {
            2
        } else {
            1
        }
    }

    pub fn is_2d(&self) -> bool {
        self.y.is_some()
    }

    pub fn x_axis(&self) -> Axis {
        self.x
    }

    pub fn y_axis(&self) -> Option<Axis> {
        self.y
    }

    pub fn nx(&self) -> usize {
        self.x.n
    }

    /// Rows; 1 for a 1D grid.
    pub fn ny(&self) -> usize {
        self.y.map_or(1, |a| a.n)
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Area (or length) element `hx·hy`.
    pub fn cell_measure(&self) -> f64 {
        self.x.spacing() * self.y.map_or(1.0, |a| a.spacing())
    }

    /// Square 2D grid: same sample count and extent on both axes.
    pub fn is_square(&self) -> bool {
        self.y.is_some_and(|y| y == self.x)
    }

    /// `(x, y)` of the sample at flat index `i` (`y = 0` in 1D).
    pub fn position(&self, i: usize) -> (f64, f64) {
        let (row, col) = (i / self.nx(), i % self.nx());
        (
            self.x.coordinate(col),
            self.y.map_or(0.0, |a| a.coordinate(row)),
        )
    }
}

/// Real samples on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Field {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Samples `f(x, y)` at every grid point (`y = 0` in 1D).
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let (x, y) = grid.position(i);
                f(x, y)
            })
            .collect();
        Field { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.grid.nx() + col]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Euclidean norm of the sample vector.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Quarter turn about the grid origin: `out(x, y) = in(−y, x)`.
    ///
    /// Sample `j` sits at `−L + j·h`, so negating a coordinate maps index
    /// `j` to `(N − j) mod N`.
    pub fn rot90(&self) -> Result<Field> {
        if !self.grid.is_square() {
            return Err(Error::InvalidGrid(
                "rot90 needs a square 2D grid".to_string(),
            ));
        }
        let n = self.grid.nx();
        let mut values = vec![0.0; n * n];
        for row in 0..n {
            for col in 0..n {
                values[row * n + col] = self.values[col * n + (n - row) % n];
            }
        }
        Ok(Field {
            grid: self.grid,
            values,
        })
    }
}

/// DFT coefficients of a field, in the same layout as the samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a grid of {} samples",
                coefficients.len(),
                grid.len()
            )));
        }
        Ok(SpectralField { grid, coefficients })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    /// Multiplies every coefficient by `multiplier(col, row)`.
    pub fn multiply_by(&mut self, multiplier: impl Fn(usize, usize) -> Complex64) {
        let nx = self.grid.nx();
        for (i, c) in self.coefficients.iter_mut().enumerate() {
            *c *= multiplier(i % nx, i / nx);
        }
    }

    /// Inverse transform, keeping the real part. Fails if the discarded
    /// imaginary part is not round-off.
    pub fn into_real(self) -> Result<Field> {
        let scale = self.coefficients.iter().map(|c| c.norm()).sum::<f64>()
            / self.coefficients.len() as f64;
        let grid = self.grid;
        let samples = inverse_complex(self);
        let residue = samples.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        let allowed = IMAGINARY_RESIDUE_TOLERANCE * scale + f64::MIN_POSITIVE;
        if residue > allowed {
            return Err(Error::ImaginaryResidue { residue, allowed });
        }
        Ok(Field {
            grid,
            values: samples.into_iter().map(|c| c.re).collect(),
        })
    }
}

fn transform(grid: &Grid, data: &mut [Complex64], direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    let nx = grid.nx();
    let row_fft = planner.plan_fft(nx, direction);
    let mut scratch = vec![Complex64::default(); row_fft.get_inplace_scratch_len()];
    row_fft.process_with_scratch(data, &mut scratch);

    if let Some(y) = grid.y_axis() {
        let ny = y.n;
        let col_fft = planner.plan_fft(ny, direction);
        let mut scratch = vec![Complex64::default(); col_fft.get_inplace_scratch_len()];
        let mut column = vec![Complex64::default(); ny];
        for col in 0..nx {
            for (row, c) in column.iter_mut().enumerate() {
                *c = data[row * nx + col];
            }
            col_fft.process_with_scratch(&mut column, &mut scratch);
            for (row, c) in column.iter().enumerate() {
                data[row * nx + col] = *c;
            }
        }
    }
}

/// Unnormalized forward DFT.
pub fn forward_dft(f: &Field) -> SpectralField {
    let mut coefficients: Vec<Complex64> =
        f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&f.grid, &mut coefficients, FftDirection::Forward);
    SpectralField {
        grid: f.grid,
        coefficients,
    }
}

/// Inverse DFT with the `1/N` normalization, as complex samples.
pub fn inverse_complex(spectrum: SpectralField) -> Vec<Complex64> {
    let SpectralField {
        grid,
        mut coefficients,
    } = spectrum;
    transform(&grid, &mut coefficients, FftDirection::Inverse);
    let norm = 1.0 / grid.len() as f64;
    for c in &mut coefficients {
        *c *= norm;
    }
    coefficients
}

/// Inverse DFT back to a real field; see [`SpectralField::into_real`].
pub fn inverse_dft(spectrum: SpectralField) -> Result<Field> {
    spectrum.into_real()
}

/// `|ξ|` for every DFT bin, in sample layout.
pub fn frequency_magnitudes(grid: &Grid) -> Vec<f64> {
    let x = grid.x_axis();
    let kx: Vec<f64> = (0..x.n).map(|k| x.wavenumber(k)).collect();
    match grid.y_axis() {
        None => kx.iter().map(|w| w.abs()).collect(),
        Some(y) => (0..y.n)
            .flat_map(|row| {
                let wy = y.wavenumber(row);
                kx.iter().map(move |wx| wx.hypot(wy))
            })
            .collect(),
    }
}

/// Applies a real radial multiplier `m(|ξ|)` to `f`.
pub fn apply_radial_multiplier(f: &Field, multiplier: impl Fn(f64) -> f64) -> Result<Field> {
    let mags = frequency_magnitudes(&f.grid);
    let mut spectrum = forward_dft(f);
    for (c, &xi) in spectrum.coefficients.iter_mut().zip(&mags) {
        *c *= multiplier(xi);
    }
    spectrum.into_real()
}

/// `scale · (−(−Δ)^{p/2}) f`, i.e. the multiplier `−scale·|ξ|^p`.
pub fn fractional_laplacian(f: &Field, p: f64, scale: f64) -> Result<Field> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be > 0, got {p}")));
    }
    apply_radial_multiplier(f, |xi| -scale * xi.powf(p))
}

pub fn spectral_laplacian(f: &Field) -> Result<Field> {
    fractional_laplacian(f, 2.0, 1.0)
}

/// Spectral partial derivative along x (`axis = 0`) or y (`axis = 1`).
///
/// The Nyquist bin of the differentiated axis is dropped, which is exactly
/// taking the real part of `ifft(iω·f̂)` for real `f`.
pub fn spectral_partial(f: &Field, axis: usize) -> Result<Field> {
    let along = match axis {
        0 => f.grid.x_axis(),
        1 => f.grid.y_axis().ok_or(Error::Requires2D)?,
        _ => return Err(Error::InvalidParameter(format!("axis {axis}"))),
    };
    let mut spectrum = forward_dft(f);
    spectrum.multiply_by(|col, row| {
        let k = if axis == 0 { col } else { row };
        if along.is_nyquist(k) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, along.wavenumber(k))
        }
    });
    spectrum.into_real()
}

/// `|∇f|` from spectral partial derivatives.
pub fn spectral_gradient_magnitude(f: &Field) -> Result<Field> {
    let fx = spectral_partial(f, 0)?;
    if !f.grid.is_2d() {
        return Ok(fx.map(f64::abs));
    }
    let fy = spectral_partial(f, 1)?;
    fx.zip_with(&fy, f64::hypot)
}
