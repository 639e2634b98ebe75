//! Reproducible additive Gaussian noise.
//!
//! Uniforms come from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`; each `f64` takes the top 53 bits of one
//! 64-bit output. Normals come in pairs from the Box–Muller transform
//!
//! ```text
//! R = √(−2·ln u₁),  z₀ = R·cos(2π·u₂),  z₁ = R·sin(2π·u₂),  u₁ ∈ (0, 1]
//! ```
//!
//! evaluated with `libm` so the stream does not depend on the platform's
//! math library. Sample `i` of a field receives `z_i`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::grid::Field;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    /// Standard deviation in grey levels.
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be finite and ≥ 0, got {sigma}"
            )));
        }
        Ok(NoiseSpec { sigma, seed })
    }
}

/// `count` standard normal samples for `seed`.
pub fn standard_normals(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let u1 = 1.0 - rng.gen::<f64>();
        let u2 = rng.gen::<f64>();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * PI * u2;
        out.push(radius * libm::cos(angle));
        out.push(radius * libm::sin(angle));
    }
    out.truncate(count);
    out
}

/// `f + σ·Z` with `Z` drawn as documented at module level.
pub fn add_gaussian_noise(f: &Field, spec: NoiseSpec) -> Result<Field> {
    if spec.sigma == 0.0 {
        return Ok(f.clone());
    }
    let z = standard_normals(spec.seed, f.values().len());
    let values = f
        .values()
        .iter()
        .zip(z)
        .map(|(v, z)| v + spec.sigma * z)
        .collect();
    Field::new(*f.grid(), values)
}
