//! 2×2 diffusion-matrix algebra.
//!
//! A [`DiffusionMatrix`] is a validated, positive-definite (not necessarily
//! symmetric) real 2×2 matrix `d`. Everything the filter needs from it is the
//! matrix exponential `exp(−a·d)` for `a ≥ 0`, evaluated here in closed form
//! through the traceless splitting
//!
//! ```text
//! d = (q/2)·I + B,   B = [[−r/2, d12], [d21, r/2]],   B² = (s/4)·I
//! ```
//!
//! with `r = d22 − d11`, `q = d11 + d22` and `s = r² + 4·d12·d21`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative size of `s` (against `q²`) below which the `s = 0` limit is used
/// when evaluating the exponential.
pub const DEGENERATE_S_TOLERANCE: f64 = 1e-12;

/// A general real 2×2 matrix, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Matrix2 = Matrix2([[0.0, 0.0], [0.0, 0.0]]);

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Matrix2([[m11, m12], [m21, m22]])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Matrix2([[a, 0.0], [0.0, b]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row][col]
    }

    pub fn scale(&self, k: f64) -> Self {
        let [[a, b], [c, d]] = self.0;
        Matrix2([[k * a, k * b], [k * c, k * d]])
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Matrix2([[a, c], [b, d]])
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Inverse, or `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.0;
        Some(Matrix2([[d / det, -b / det], [-c / det, a / det]]))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Spectral (largest singular value) norm.
    pub fn norm2(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        let plus = (a + d).hypot(b - c);
        let minus = (a - d).hypot(b + c);
        0.5 * (plus + minus)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Matrix-vector product with a pair of values of any type that scales by reals.
    #[inline]
    pub fn apply<T>(&self, x: T, y: T) -> (T, T)
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    {
        let [[a, b], [c, d]] = self.0;
        (x * a + y * b, x * c + y * d)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let a = self.0;
        let b = rhs.0;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;

    fn add(self, rhs: Matrix2) -> Matrix2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Matrix2([[a + e, b + f], [c + g, d + h]])
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;

    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + rhs.scale(-1.0)
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// A positive-definite 2×2 diffusion matrix with its derived spectral
/// parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffusionMatrix {
    d: Matrix2,
    r: f64,
    s: f64,
    q: f64,
}

impl DiffusionMatrix {
    /// Validates positive definiteness: `d11 > 0` and
    /// `4·d11·d22 − (d12 + d21)² > 0`.
    pub fn new(d11: f64, d12: f64, d21: f64, d22: f64) -> Result<Self> {
        if ![d11, d12, d21, d22].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("diffusion matrix"));
        }
        let discriminant = 4.0 * d11 * d22 - (d12 + d21).powi(2);
        if !(d11 > 0.0 && discriminant > 0.0) {
            return Err(Error::PositiveDefinitenessViolation { d11, discriminant });
        }
        let r = d22 - d11;
        Ok(DiffusionMatrix {
            d: Matrix2::new(d11, d12, d21, d22),
            r,
            s: r * r + 4.0 * d12 * d21,
            q: d11 + d22,
        })
    }

    pub fn from_matrix(m: Matrix2) -> Result<Self> {
        let [[a, b], [c, d]] = m.0;
        Self::new(a, b, c, d)
    }

    pub fn matrix(&self) -> Matrix2 {
        self.d
    }

    pub fn d11(&self) -> f64 {
        self.d.0[0][0]
    }

    pub fn d12(&self) -> f64 {
        self.d.0[0][1]
    }

    pub fn d21(&self) -> f64 {
        self.d.0[1][0]
    }

    pub fn d22(&self) -> f64 {
        self.d.0[1][1]
    }

    /// `r = d22 − d11`.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// `s = r² + 4·d12·d21`, the eigenvalue discriminant.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `q = d11 + d22`, the trace.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `m = √|s| / 2`: half the eigenvalue gap (case i) or the imaginary
    /// part of the eigenvalues (case iv).
    pub fn m(&self) -> f64 {
        0.5 * self.s.abs().sqrt()
    }

    pub fn det(&self) -> f64 {
        self.d.det()
    }

    /// Eigenvalues `λ± = (q ± √s) / 2`, complex when `s < 0`.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let half_q = 0.5 * self.q;
        let m = self.m();
        if self.s >= 0.0 {
            let (plus, minus) = self.real_eigenvalues();
            [Complex64::new(plus, 0.0), Complex64::new(minus, 0.0)]
        } else {
            [Complex64::new(half_q, m), Complex64::new(half_q, -m)]
        }
    }

    /// Smallest real part among the eigenvalues. Always positive.
    pub fn min_eigenvalue_real(&self) -> f64 {
        if self.s >= 0.0 {
            self.real_eigenvalues().1
        } else {
            0.5 * self.q
        }
    }

    // λ− through det/λ+ avoids cancellation when √s is close to q.
    fn real_eigenvalues(&self) -> (f64, f64) {
        let plus = 0.5 * (self.q + self.s.max(0.0).sqrt());
        (plus, self.det() / plus)
    }

    /// The traceless part `B = d − (q/2)·I`.
    pub fn traceless(&self) -> Matrix2 {
        Matrix2::new(-0.5 * self.r, self.d12(), self.d21(), 0.5 * self.r)
    }

    fn is_near_degenerate(&self) -> bool {
        self.s.abs() < DEGENERATE_S_TOLERANCE * self.q * self.q
    }
}

impl fmt::Display for DiffusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.d.fmt(f)
    }
}

/// Which canonical form `d` is similar to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpectralCase {
    /// (i) `s > 0`: two distinct real eigenvalues, `Λ = diag(λ+, λ−)`.
    RealDistinct,
    /// (ii) `d = α·I`.
    ScalarDiagonal,
    /// (iii) `s = 0`, not diagonalizable: `Λ = [[α, 1], [0, α]]`.
    Jordan,
    /// (iv) `s < 0`: `λ± = ν ± iμ`, `Λ = [[ν, −μ], [μ, ν]]`.
    ComplexPair,
}

impl SpectralCase {
    /// Roman-numeral tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            SpectralCase::RealDistinct => "i",
            SpectralCase::ScalarDiagonal => "ii",
            SpectralCase::Jordan => "iii",
            SpectralCase::ComplexPair => "iv",
        }
    }
}

impl fmt::Display for SpectralCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SpectralCase::RealDistinct => "real distinct eigenvalues",
            SpectralCase::ScalarDiagonal => "scalar diagonal",
            SpectralCase::Jordan => "Jordan block",
            SpectralCase::ComplexPair => "complex conjugate pair",
        };
        write!(f, "({}) {}", self.tag(), name)
    }
}

/// `d = P·Λ·P⁻¹` with `Λ` one of the four canonical forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub case: SpectralCase,
    pub p: Matrix2,
    pub lambda: Matrix2,
    /// `√|s| / 2`; zero in cases (ii) and (iii).
    pub m: f64,
}

impl SpectralDecomposition {
    /// `P·Λ·P⁻¹`.
    pub fn reconstruct(&self) -> Matrix2 {
        let p_inv = self
            .p
            .inverse()
            .expect("decomposition always carries an invertible P");
        self.p * self.lambda * p_inv
    }
}

/// Reduces `d` to its canonical form. The columns of `P` are eigenvectors
/// (case i), a Jordan chain (case iii), or the real and imaginary parts of
/// an eigenvector (case iv).
pub fn decompose(d: &DiffusionMatrix) -> SpectralDecomposition {
    let (d12, d21, r, s) = (d.d12(), d.d21(), d.r(), d.s());
    let half_r = 0.5 * r;

    if s > 0.0 {
        let (plus, minus) = d.real_eigenvalues();
        let lambda = Matrix2::diag(plus, minus);
        let root = s.sqrt();
        // (±r + √s)/2 and (±r − √s)/2 without cancellation; their product is ∓d12·d21.
        let split = |r: f64| {
            let big = 0.5 * (r.abs() + root);
            let small = if big == 0.0 { 0.0 } else { -d12 * d21 / big };
            if r >= 0.0 {
                (big, small)
            } else {
                (-small, -big)
            }
        };
        let p = if d12 != 0.0 {
            let (hi, lo) = split(r);
            Matrix2::new(d12, d12, hi, lo)
        } else if d21 != 0.0 {
            let (hi, lo) = split(-r);
            Matrix2::new(hi, lo, d21, d21)
        } else if d.d11() >= d.d22() {
            Matrix2::IDENTITY
        } else {
            Matrix2::new(0.0, 1.0, 1.0, 0.0)
        };
        return SpectralDecomposition {
            case: SpectralCase::RealDistinct,
            p,
            lambda,
            m: 0.5 * root,
        };
    }

    if s < 0.0 {
        let nu = 0.5 * d.q();
        let mu = d.m();
        // s < 0 forces d12·d21 < 0, so both are nonzero.
        let p = Matrix2::new(d12, 0.0, half_r, -mu);
        return SpectralDecomposition {
            case: SpectralCase::ComplexPair,
            p,
            lambda: Matrix2::new(nu, -mu, mu, nu),
            m: mu,
        };
    }

    let alpha = 0.5 * d.q();
    if d12 == 0.0 && d21 == 0.0 {
        return SpectralDecomposition {
            case: SpectralCase::ScalarDiagonal,
            p: Matrix2::IDENTITY,
            lambda: Matrix2::diag(alpha, alpha),
            m: 0.0,
        };
    }
    let p = if d12 != 0.0 {
        Matrix2::new(d12, 0.0, half_r, 1.0)
    } else {
        Matrix2::new(-half_r, 1.0, d21, 0.0)
    };
    SpectralDecomposition {
        case: SpectralCase::Jordan,
        p,
        lambda: Matrix2::new(alpha, 1.0, 0.0, alpha),
        m: 0.0,
    }
}

/// `exp(−a·d)` for `a ≥ 0`.
///
/// Writing `m = √|s|/2`, the result is
/// `e^{−aq/2}·[γ(am)·I − (σ(am)/m)·B]` where `(γ, σ)` is `(cosh, sinh)` for
/// `s > 0` and `(cos, sin)` for `s < 0`; the `s → 0` limit is
/// `e^{−aq/2}·(I − a·B)`. For `s > 0` the hyperbolic terms are folded into
/// `e^{−aλ±}` so nothing overflows for large `a`.
pub fn matrix_exponent(d: &DiffusionMatrix, a: f64) -> Matrix2 {
    debug_assert!(a >= 0.0 && a.is_finite(), "exponent scale must be finite and ≥ 0");
    if a == 0.0 {
        return Matrix2::IDENTITY;
    }
    let b = d.traceless();

    if d.is_near_degenerate() {
        let decay = (-0.5 * a * d.q()).exp();
        if decay == 0.0 {
            return Matrix2::ZERO;
        }
        return (Matrix2::IDENTITY - b.scale(a)).scale(decay);
    }

    let m = d.m();
    if d.s() > 0.0 {
        let (plus, minus) = d.real_eigenvalues();
        let slow = (-a * minus).exp();
        let fast = (-a * plus).exp();
        let even = 0.5 * (slow + fast);
        // (e^{−aλ−} − e^{−aλ+}) / (2m), with λ+ − λ− = 2m.
        let odd_over_m = slow * (-(-2.0 * a * m).exp_m1()) / (2.0 * m);
        Matrix2::IDENTITY.scale(even) - b.scale(odd_over_m)
    } else {
        let decay = (-0.5 * a * d.q()).exp();
        if decay == 0.0 {
            return Matrix2::ZERO;
        }
        let angle = a * m;
        (Matrix2::IDENTITY.scale(angle.cos()) - b.scale(angle.sin() / m)).scale(decay)
    }
}

/// Fourier symbol of the filter at radial frequency `xi_mag` and time `t`:
/// `exp(−t·|ξ|^p·d)`.
pub fn symbol(d: &DiffusionMatrix, p: f64, t: f64, xi_mag: f64) -> Matrix2 {
    matrix_exponent(d, t * xi_mag.powf(p))
}
