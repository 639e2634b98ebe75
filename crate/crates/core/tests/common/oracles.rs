//! Reference computations that share no code path with the library's
//! closed forms or Fourier multipliers.

#![allow(dead_code)]

use std::f64::consts::PI;

use crossdiff::{DiffusionMatrix, Field, Grid, Matrix2};
use rand::Rng;

type M = [[f64; 2]; 2];

fn mul(a: &M, b: &M) -> M {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// `exp(A)` by scaling and squaring with a 30-term Taylor series.
pub fn expm_series(a: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.125 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = [[a[0][0] * scale, a[0][1] * scale], [a[1][0] * scale, a[1][1] * scale]];
    let mut sum: M = [[1.0, 0.0], [0.0, 1.0]];
    let mut term: M = [[1.0, 0.0], [0.0, 1.0]];
    for k in 1..30 {
        term = mul(&term, &a);
        let inv = 1.0 / k as f64;
        term = [[term[0][0] * inv, term[0][1] * inv], [term[1][0] * inv, term[1][1] * inv]];
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `exp(−a·d)` through the series oracle.
pub fn exp_neg(d: &DiffusionMatrix, a: f64) -> Matrix2 {
    let m = d.matrix().0;
    Matrix2(expm_series([[-a * m[0][0], -a * m[0][1]], [-a * m[1][0], -a * m[1][1]]]))
}

pub fn rel_frobenius(got: &Matrix2, want: &Matrix2) -> f64 {
    let diff = (*got - *want).frobenius_norm();
    let scale = want.frobenius_norm();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// A random positive-definite matrix covering cases (i) and (iv): the
/// symmetric part is kept positive definite, the skew part is free.
pub fn random_diffusion<R: Rng>(rng: &mut R) -> DiffusionMatrix {
    let d11: f64 = rng.gen_range(0.1..3.0);
    let d22 = rng.gen_range(0.1..3.0);
    let bound = 2.0 * (d11 * d22).sqrt();
    let sym = rng.gen_range(-0.99..0.99) * bound;
    let skew = rng.gen_range(-3.0..3.0);
    DiffusionMatrix::new(d11, (sym + skew) / 2.0, (sym - skew) / 2.0, d22).unwrap()
}

/// Largest pointwise difference relative to the larger field's max-norm.
pub fn rel_max_diff(got: &Field, want: &Field) -> f64 {
    let scale = want.max_abs().max(got.max_abs());
    got.max_abs_diff(want) / scale
}

#[derive(Clone, Copy, Debug)]
struct C {
    re: f64,
    im: f64,
}

impl C {
    fn mul(self, o: C) -> C {
        C {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Periodic spatial convolution of a real field with the complex diffusion
/// kernel for `c = ν + iμ = r·e^{iθ}` at time `t`:
///
/// `h(x) = g_σ(x)·e^{iα(x)}·e^{−iθ}/cos θ`, `σ² = 2tr/cos θ`,
/// `α = |x|² sin θ / (4tr)`,
///
/// i.e. the Gaussian-times-phase kernel normalized to unit mass. The 2D
/// kernel factorizes over the axes; each axis carries the square root of the
/// constant factor. Returns `(Re, Im)`.
pub fn complex_kernel_quadrature(f: &Field, nu: f64, mu: f64, t: f64) -> (Field, Field) {
    let r = nu.hypot(mu);
    let theta = mu.atan2(nu);
    let sigma2 = 2.0 * t * r / theta.cos();
    let phase_rate = theta.sin() / (4.0 * t * r);
    // per axis: (4πct)^{−1/2} = g_σ · e^{−iθ/2} / √cos θ
    let const_mag = (1.0 / theta.cos()).sqrt();
    let const_arg = -theta / 2.0;
    let axis_kernel = |n: usize, h: f64| -> Vec<C> {
        (0..n)
            .map(|k| {
                let offset = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                let x = offset * h;
                let g = (-(x * x) / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt();
                let arg = phase_rate * x * x + const_arg;
                C {
                    re: h * const_mag * g * arg.cos(),
                    im: h * const_mag * g * arg.sin(),
                }
            })
            .collect()
    };
    let grid = *f.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let kx = axis_kernel(nx, grid.x_axis().spacing());
    let mut stage: Vec<C> = vec![C { re: 0.0, im: 0.0 }; grid.len()];
    for row in 0..ny {
        for i in 0..nx {
            let mut acc = C { re: 0.0, im: 0.0 };
            for j in 0..nx {
                let w = kx[(i + nx - j) % nx];
                let v = f.values()[row * nx + j];
                acc.re += w.re * v;
                acc.im += w.im * v;
            }
            stage[row * nx + i] = acc;
        }
    }
    if let Some(y) = grid.y_axis() {
        let ky = axis_kernel(ny, y.spacing());
        let mut out = vec![C { re: 0.0, im: 0.0 }; grid.len()];
        for col in 0..nx {
            for i in 0..ny {
                let mut acc = C { re: 0.0, im: 0.0 };
                for j in 0..ny {
                    let p = ky[(i + ny - j) % ny].mul(stage[j * nx + col]);
                    acc.re += p.re;
                    acc.im += p.im;
                }
                out[i * nx + col] = acc;
            }
        }
        stage = out;
    }
    (
        Field::new(grid, stage.iter().map(|c| c.re).collect()).unwrap(),
        Field::new(grid, stage.iter().map(|c| c.im).collect()).unwrap(),
    )
}

/// Periodic 5-point (3-point in 1D) finite-difference Laplacian.
pub fn fd_laplacian(f: &Field) -> Field {
    let grid = *f.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let hx2 = grid.x_axis().spacing().powi(2);
    let v = f.values();
    let mut out = vec![0.0; grid.len()];
    for row in 0..ny {
        for col in 0..nx {
            let c = v[row * nx + col];
            let left = v[row * nx + (col + nx - 1) % nx];
            let right = v[row * nx + (col + 1) % nx];
            let mut lap = (left - 2.0 * c + right) / hx2;
            if let Some(y) = grid.y_axis() {
                let hy2 = y.spacing().powi(2);
                let up = v[((row + ny - 1) % ny) * nx + col];
                let down = v[((row + 1) % ny) * nx + col];
                lap += (up - 2.0 * c + down) / hy2;
            }
            out[row * nx + col] = lap;
        }
    }
    Field::new(grid, out).unwrap()
}

/// Band-limited smooth test image on a square grid of half-width π.
pub fn trig_image(grid: Grid) -> Field {
    Field::from_fn(grid, |x, y| {
        1.0 + (x + 0.3).sin() * (2.0 * y).cos() + 0.5 * (3.0 * x - y).cos() + 0.25 * (x + 4.0 * y).sin()
    })
}
