//! The linear cross-diffusion filter.
//!
//! A pair `(u, v)` evolves as `(û, v̂)(ξ, t) = exp(−t·|ξ|^p·d)·(û₀, v̂₀)(ξ)`.
//! The exact symbol is evaluated at the requested time, so there is no time
//! stepping and results at different times are exactly semigroup-consistent.
//!
//! The scalar oracles at the bottom of this module (`smoothing_oracle`,
//! `small_theta_oracle`, `complex_diffusion_oracle`) never touch the matrix
//! exponential and exist to cross-check the matrix path.

use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{
    apply_radial_multiplier, forward_dft, frequency_magnitudes, inverse_complex,
    spectral_gradient_magnitude, spectral_laplacian, Field, Grid, SpectralField,
};
use crate::spectral::{symbol, DiffusionMatrix};

/// How the second component is built from the image `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InitialKind {
    /// `(f, 0)`
    #[default]
    Plain,
    /// `(f, |∇f|)`
    Gradient,
    /// `(f, −|∇f|·Δf)`
    GradientLaplacian,
}

impl InitialKind {
    pub const ALL: [InitialKind; 3] = [
        InitialKind::Plain,
        InitialKind::Gradient,
        InitialKind::GradientLaplacian,
    ];

    pub fn index(&self) -> u8 {
        match self {
            InitialKind::Plain => 0,
            InitialKind::Gradient => 1,
            InitialKind::GradientLaplacian => 2,
        }
    }
}

impl TryFrom<u8> for InitialKind {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            0 => Ok(InitialKind::Plain),
            1 => Ok(InitialKind::Gradient),
            2 => Ok(InitialKind::GradientLaplacian),
            other => Err(Error::InvalidParameter(format!(
                "initial kind must be 0, 1 or 2, got {other}"
            ))),
        }
    }
}

impl FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("initial kind `{s}`")))?;
        InitialKind::try_from(n)
    }
}

impl fmt::Display for InitialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Everything needed to run the filter on a given grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterConfig {
    pub d: DiffusionMatrix,
    pub p: f64,
    pub initial_kind: InitialKind,
    pub grid: Grid,
}

impl FilterConfig {
    pub fn new(d: DiffusionMatrix, p: f64, initial_kind: InitialKind, grid: Grid) -> Result<Self> {
        check_order(p)?;
        Ok(FilterConfig {
            d,
            p,
            initial_kind,
            grid,
        })
    }

    pub fn with_kind(mut self, kind: InitialKind) -> Self {
        self.initial_kind = kind;
        self
    }
}

fn check_order(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must be > 0, got {p}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t must be ≥ 0, got {t}")))
    }
}

/// The two image components `(u, v)` on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldPair {
    pub u: Field,
    pub v: Field,
}

impl FieldPair {
    pub fn new(u: Field, v: Field) -> Result<Self> {
        u.check_same_grid(&v)?;
        Ok(FieldPair { u, v })
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `(v, u)`.
    pub fn swapped(self) -> Self {
        FieldPair {
            u: self.v,
            v: self.u,
        }
    }

    pub fn add_constants(&self, cu: f64, cv: f64) -> Self {
        FieldPair {
            u: self.u.map(|x| x + cu),
            v: self.v.map(|x| x + cv),
        }
    }

    pub fn rot90(&self) -> Result<Self> {
        Ok(FieldPair {
            u: self.u.rot90()?,
            v: self.v.rot90()?,
        })
    }

    /// Largest pointwise difference over both components.
    pub fn max_abs_diff(&self, other: &FieldPair) -> f64 {
        self.u
            .max_abs_diff(&other.u)
            .max(self.v.max_abs_diff(&other.v))
    }

    pub fn max_abs(&self) -> f64 {
        self.u.max_abs().max(self.v.max_abs())
    }
}

/// Builds `(u₀, v₀)` from `f`; derivatives are spectral.
pub fn initial_distribution(f: &Field, kind: InitialKind) -> Result<FieldPair> {
    let v = match kind {
        InitialKind::Plain => Field::zeros(*f.grid()),
        InitialKind::Gradient => spectral_gradient_magnitude(f)?,
        InitialKind::GradientLaplacian => {
            let grad = spectral_gradient_magnitude(f)?;
            let lap = spectral_laplacian(f)?;
            grad.zip_with(&lap, |g, l| -g * l)?
        }
    };
    FieldPair::new(f.clone(), v)
}

fn to_real_pair(u_hat: SpectralField, v_hat: SpectralField) -> Result<FieldPair> {
    FieldPair::new(u_hat.into_real()?, v_hat.into_real()?)
}

/// Filters `pair0` to time `t`.
pub fn evolve(pair0: &FieldPair, cfg: &FilterConfig, t: f64) -> Result<FieldPair> {
    check_time(t)?;
    check_order(cfg.p)?;
    if pair0.grid() != &cfg.grid {
        return Err(Error::GridMismatch(
            "field pair and filter configuration use different grids".to_string(),
        ));
    }
    let mags = frequency_magnitudes(pair0.grid());
    let mut u_hat = forward_dft(&pair0.u);
    let mut v_hat = forward_dft(&pair0.v);
    for ((u, v), &xi) in u_hat
        .coefficients_mut()
        .iter_mut()
        .zip(v_hat.coefficients_mut().iter_mut())
        .zip(&mags)
    {
        let k = symbol(&cfg.d, cfg.p, t, xi);
        (*u, *v) = k.apply(*u, *v);
    }
    to_real_pair(u_hat, v_hat)
}

/// Filters the same initial pair to each time in `times`.
pub fn evolve_series(pair0: &FieldPair, cfg: &FilterConfig, times: &[f64]) -> Result<Vec<FieldPair>> {
    times.iter().map(|&t| evolve(pair0, cfg, t)).collect()
}

/// The infinitesimal generator `−(−Δ)^{p/2}·d` applied to a pair.
pub fn apply_generator(pair: &FieldPair, d: &DiffusionMatrix, p: f64) -> Result<FieldPair> {
    check_order(p)?;
    let mags = frequency_magnitudes(pair.grid());
    let mut u_hat = forward_dft(&pair.u);
    let mut v_hat = forward_dft(&pair.v);
    let m = d.matrix();
    for ((u, v), &xi) in u_hat
        .coefficients_mut()
        .iter_mut()
        .zip(v_hat.coefficients_mut().iter_mut())
        .zip(&mags)
    {
        let weight = -xi.powf(p);
        let (mu, mv) = m.apply(*u, *v);
        *u = mu * weight;
        *v = mv * weight;
    }
    to_real_pair(u_hat, v_hat)
}

/// Second component of `evolve((f, 0))` divided by `d21`.
///
/// For small `|s|` this approaches `t·A·e^{(q/2)tA} f` with
/// `A = −(−Δ)^{p/2}`, which makes it an edge detector.
pub fn edge_map(f: &Field, cfg: &FilterConfig, t: f64) -> Result<Field> {
    let d21 = cfg.d.d21();
    if d21 == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if cfg.initial_kind != InitialKind::Plain {
        return Err(Error::InvalidParameter(format!(
            "edge map needs initial kind 0, got {}",
            cfg.initial_kind
        )));
    }
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!("t must be > 0, got {t}")));
    }
    let pair = evolve(&initial_distribution(f, InitialKind::Plain)?, cfg, t)?;
    Ok(pair.v.map(|v| v / d21))
}

/// `e^{(q/2)·t·A} f`: scalar multiplier `e^{−(q/2)·t·|ξ|^p}`.
pub fn smoothing_oracle(f: &Field, q: f64, p: f64, t: f64) -> Result<Field> {
    check_order(p)?;
    check_time(t)?;
    apply_radial_multiplier(f, |xi| (-0.5 * q * t * xi.powf(p)).exp())
}

/// `t·A·e^{(q/2)·t·A} f`: scalar multiplier `−t|ξ|^p·e^{−(q/2)·t·|ξ|^p}`.
pub fn small_theta_oracle(f: &Field, q: f64, p: f64, t: f64) -> Result<Field> {
    check_order(p)?;
    check_time(t)?;
    apply_radial_multiplier(f, |xi| {
        let a = t * xi.powf(p);
        -a * (-0.5 * q * a).exp()
    })
}

/// Linear complex diffusion `I_t = (ν + iμ)·ΔI`, `I(0) = f`, returned as
/// `(Re I, Im I)`.
pub fn complex_diffusion_oracle(f: &Field, nu: f64, mu: f64, t: f64) -> Result<FieldPair> {
    if nu.is_nan() || nu <= 0.0 {
        return Err(Error::InvalidParameter(format!("ν must be > 0, got {nu}")));
    }
    check_time(t)?;
    let c = Complex64::new(nu, mu);
    let mags = frequency_magnitudes(f.grid());
    let mut spectrum = forward_dft(f);
    for (coef, &xi) in spectrum.coefficients_mut().iter_mut().zip(&mags) {
        *coef *= (-c * (t * xi * xi)).exp();
    }
    let grid = *f.grid();
    let samples = inverse_complex(spectrum);
    let re = Field::new(grid, samples.iter().map(|z| z.re).collect())?;
    let im = Field::new(grid, samples.iter().map(|z| z.im).collect())?;
    FieldPair::new(re, im)
}

/// Scale-to-time reparametrization `t = σ^p`.
pub fn scale_to_time(sigma: f64, p: f64) -> f64 {
    sigma.powf(p)
}
