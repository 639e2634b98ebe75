//! JSON run manifests. Every command-line flag overrides the matching key.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use crossdiff::{DiffusionMatrix, InitialKind, NoiseSpec};
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseManifest {
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

/// One reproducible run. Unset fields fall back to per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunManifest {
    /// `[d11, d12, d21, d22]`
    pub d: Option<[f64; 4]>,
    pub p: Option<f64>,
    pub kind: Option<u8>,
    pub time_grid: Option<Vec<f64>>,
    pub noise: Option<NoiseManifest>,
    pub input: Option<PathBuf>,
    /// Synthetic input by name when no `input` file is given.
    pub pattern: Option<String>,
    /// Side of the synthetic image, or sample count of a synthetic signal.
    pub size: Option<usize>,
    /// Clean image to score against; defaults to the input before noise.
    pub reference: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    /// Margin per side as a fraction of the image size.
    pub padding: Option<f64>,
    pub raw: Option<bool>,
    pub mse_psnr: Option<bool>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    /// Keys set in `other` win.
    pub fn overlay(mut self, other: RunManifest) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(d, p, kind, time_grid, noise, input, pattern, size, reference, output_dir, padding, raw, mse_psnr);
        self
    }

    pub fn diffusion(&self, default: [f64; 4]) -> Result<DiffusionMatrix> {
        let [a, b, c, d] = self.d.unwrap_or(default);
        Ok(DiffusionMatrix::new(a, b, c, d)?)
    }

    pub fn order(&self) -> f64 {
        self.p.unwrap_or(2.0)
    }

    pub fn initial_kind(&self) -> Result<InitialKind> {
        Ok(InitialKind::try_from(self.kind.unwrap_or(0))?)
    }

    pub fn noise_spec(&self) -> Result<Option<NoiseSpec>> {
        self.noise
            .map(|n| NoiseSpec::new(n.sigma, n.seed))
            .transpose()
            .map_err(Into::into)
    }

    /// The time grid, checked to be non-empty, finite, nonnegative and
    /// strictly increasing.
    pub fn times(&self, default: &[f64]) -> Result<Vec<f64>> {
        let times = self.time_grid.clone().unwrap_or_else(|| default.to_vec());
        if times.is_empty() {
            return Err(UsageError::new("the time grid is empty").into());
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(UsageError::new(format!("times must be finite and ≥ 0, got {times:?}")).into());
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(UsageError::new(format!("times must be strictly increasing, got {times:?}")).into());
        }
        Ok(times)
    }

    /// A single positive time.
    pub fn single_time(&self, default: f64) -> Result<f64> {
        let times = self.times(&[default])?;
        match times[..] {
            [t] if t > 0.0 => Ok(t),
            [t] => Err(UsageError::new(format!("t must be > 0, got {t}")).into()),
            _ => Err(UsageError::new(format!("expected a single time, got {times:?}")).into()),
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn padding(&self) -> Result<f64> {
        let margin = self.padding.unwrap_or(0.25);
        if !(0.0..=4.0).contains(&margin) {
            return Err(UsageError::new(format!("padding must lie in [0, 4], got {margin}")).into());
        }
        Ok(margin)
    }
}

/// Parses `"d11,d12,d21,d22"`.
pub fn parse_matrix(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 comma-separated entries, got {}", parts.len()));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| format!("`{part}` is not a number"))?;
    }
    Ok(out)
}
