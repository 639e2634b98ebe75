//! Restoration quality metrics.

use crate::error::{Error, Result};
use crate::filter::FieldPair;
use crate::grid::Field;

/// Grey-level peak used for 8-bit images.
pub const PEAK_8BIT: f64 = 255.0;

/// How the residual energy enters the PSNR denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PsnrMode {
    /// `‖s − u‖²`, the plain squared Euclidean/Frobenius norm.
    #[default]
    SumOfSquares,
    /// `‖s − u‖² / n`, the mean squared error.
    MeanSquare,
}

/// Which grey-level occurrence statistics the entropy is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EntropyMode {
    /// Normalized 256-bin grey-level histogram.
    #[default]
    Histogram,
    /// Normalized 256×256 co-occurrence matrix for the horizontal offset (1, 0).
    CoOccurrence,
}

/// Metrics of one filtered result against a clean reference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub time: f64,
    /// dB; `+∞` when the residual has zero variance.
    pub snr: f64,
    /// dB; `+∞` on an exact match.
    pub psnr: f64,
    /// bits
    pub entropy: f64,
    pub avg_grey: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsOptions {
    pub peak: f64,
    pub psnr_mode: PsnrMode,
    pub entropy_mode: EntropyMode,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions {
            peak: PEAK_8BIT,
            psnr_mode: PsnrMode::default(),
            entropy_mode: EntropyMode::default(),
        }
    }
}

impl MetricsReport {
    /// Scores the first component of `pair` against `reference`.
    pub fn compute(reference: &Field, pair: &FieldPair, time: f64, opts: &MetricsOptions) -> Result<Self> {
        Ok(MetricsReport {
            time,
            snr: unbounded_as_infinity(snr(reference, &pair.u))?,
            psnr: unbounded_as_infinity(psnr(reference, &pair.u, opts.peak, opts.psnr_mode))?,
            entropy: entropy(&pair.u, opts.entropy_mode),
            avg_grey: average_grey(pair),
        })
    }
}

fn unbounded_as_infinity(value: Result<f64>) -> Result<f64> {
    match value {
        Err(Error::DegenerateResidual) => Ok(f64::INFINITY),
        other => other,
    }
}

/// Population variance (two-pass).
fn variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (sum, n) = values.clone().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    let mean = sum / n as f64;
    values.map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64
}

/// `10·log₁₀(var(test) / var(reference − test))`.
///
/// A residual whose spread is at round-off level relative to the inputs
/// (including an exact match or a constant offset) is
/// [`Error::DegenerateResidual`].
pub fn snr(reference: &Field, test: &Field) -> Result<f64> {
    reference.check_same_grid(test)?;
    snr_samples(reference.values(), test.values())
}

/// [`snr`] on raw sample slices of equal length.
pub fn snr_samples(reference: &[f64], test: &[f64]) -> Result<f64> {
    check_lengths(reference, test)?;
    let residual = reference.iter().zip(test).map(|(a, b)| a - b);
    let noise = variance(residual);
    let scale = reference
        .iter()
        .chain(test)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 16.0 * f64::EPSILON * scale;
    if noise <= floor * floor {
        return Err(Error::DegenerateResidual);
    }
    let signal = variance(test.iter().copied());
    Ok(10.0 * (signal / noise).log10())
}

/// `10·log₁₀(l² / ‖reference − test‖²)`, optionally with the squared norm
/// averaged over the samples.
pub fn psnr(reference: &Field, test: &Field, peak: f64, mode: PsnrMode) -> Result<f64> {
    reference.check_same_grid(test)?;
    psnr_samples(reference.values(), test.values(), peak, mode)
}

/// [`psnr`] on raw sample slices of equal length.
pub fn psnr_samples(reference: &[f64], test: &[f64], peak: f64, mode: PsnrMode) -> Result<f64> {
    check_lengths(reference, test)?;
    let mut energy: f64 = reference
        .iter()
        .zip(test)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    if energy == 0.0 {
        return Err(Error::DegenerateResidual);
    }
    if mode == PsnrMode::MeanSquare {
        energy /= reference.len() as f64;
    }
    Ok(10.0 * (peak * peak / energy).log10())
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::GridMismatch(format!(
            "{} reference samples vs {} test samples",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Discrete integrals `(∫u, ∫v)` over the periodic cell.
pub fn average_grey(pair: &FieldPair) -> (f64, f64) {
    let h = pair.grid().cell_measure();
    let integral = |f: &Field| f.values().iter().sum::<f64>() * h;
    (integral(&pair.u), integral(&pair.v))
}

/// Clamps to `[0, 255]` and rounds half away from zero.
pub fn quantize(value: f64) -> u8 {
    value.clamp(0.0, 255.0).round() as u8
}

fn shannon_bits(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // a single occupied bin gives −0.0
    h.max(0.0)
}

/// Texture entropy `−Σ c·log₂ c` over normalized grey-level occurrences.
pub fn entropy(f: &Field, mode: EntropyMode) -> f64 {
    entropy_raster(f.values(), f.grid().nx(), mode)
}

/// [`entropy`] on a row-major raster of the given width.
pub fn entropy_raster(values: &[f64], width: usize, mode: EntropyMode) -> f64 {
    let levels: Vec<u8> = values.iter().map(|&v| quantize(v)).collect();
    match mode {
        EntropyMode::Histogram => {
            let mut counts = [0u64; 256];
            for &l in &levels {
                counts[l as usize] += 1;
            }
            shannon_bits(&counts)
        }
        EntropyMode::CoOccurrence => {
            let mut counts = vec![0u64; 256 * 256];
            for row in levels.chunks(width.max(1)) {
                for pair in row.windows(2) {
                    counts[pair[0] as usize * 256 + pair[1] as usize] += 1;
                }
            }
            shannon_bits(&counts)
        }
    }
}
