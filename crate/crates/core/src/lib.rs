//! Linear cross-diffusion filtering for 1D signals and grey-scale images.
//!
//! An image `f` is split into two components `(u, v)` which are filtered
//! jointly by the convolution semigroup with Fourier symbol
//! `exp(−t·|ξ|^p·d)`, `d` a positive-definite 2×2 matrix. The first
//! component is a smoothed image; for `d` close to a Jordan structure the
//! second one, scaled by `1/d21`, approximates `t·A` applied to a smoothed
//! image (`A = −(−Δ)^{p/2}`) and acts as an edge detector.
//!
//! ```
//! use crossdiff::{evolve, initial_distribution, DiffusionMatrix, FilterConfig, Field, Grid, InitialKind};
//!
//! let grid = Grid::new_1d(10.0, 128)?;
//! let f = Field::from_fn(grid, |x, _| if x.abs() < 5.0 { 1.0 } else { 0.0 });
//! let d = DiffusionMatrix::new(1.0, 0.1, 1.0, 1.1)?;
//! let cfg = FilterConfig::new(d, 2.0, InitialKind::Plain, grid)?;
//! let out = evolve(&initial_distribution(&f, cfg.initial_kind)?, &cfg, 0.25)?;
//! assert!((out.u.mean() - f.mean()).abs() < 1e-12);
//! # Ok::<(), crossdiff::Error>(())
//! ```

pub mod error;
pub mod filter;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod patterns;
pub mod prewitt;
pub mod spectral;

pub use error::{Error, Result};
pub use filter::{
    apply_generator, complex_diffusion_oracle, edge_map, evolve, evolve_series,
    initial_distribution, scale_to_time, small_theta_oracle, smoothing_oracle, FieldPair,
    FilterConfig, InitialKind,
};
pub use grid::{
    forward_dft, fractional_laplacian, frequency_magnitudes, inverse_dft, spectral_gradient_magnitude,
    spectral_laplacian, Field, Grid, SpectralField,
};
pub use metrics::{average_grey, entropy, entropy_raster, psnr, psnr_samples, snr, snr_samples, EntropyMode, MetricsOptions, MetricsReport, PsnrMode};
pub use noise::{add_gaussian_noise, NoiseSpec};
pub use patterns::{make_test_pattern, PatternKind};
pub use prewitt::prewitt;
pub use spectral::{
    decompose, matrix_exponent, symbol, DiffusionMatrix, Matrix2, SpectralCase, SpectralDecomposition,
};
