mod common;

use common::oracles::{exp_neg, random_diffusion, rel_frobenius};
use crossdiff::{decompose, matrix_exponent, symbol, DiffusionMatrix, Matrix2, SpectralCase};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn decomposition_reconstructs_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen_real = false;
    let mut seen_complex = false;
    for _ in 0..1000 {
        let d = random_diffusion(&mut rng);
        let dec = decompose(&d);
        match dec.case {
            SpectralCase::RealDistinct => seen_real = true,
            SpectralCase::ComplexPair => seen_complex = true,
            _ => {}
        }
        let rel = rel_frobenius(&dec.reconstruct(), &d.matrix());
        assert!(rel < 1e-12, "{d}: {rel:e}");
    }
    assert!(seen_real && seen_complex);
}

#[test]
fn weakly_coupled_matrix_eigenvalues() {
    let d = DiffusionMatrix::new(1.0, 0.1, 1.0, 1.1).unwrap();
    let dec = decompose(&d);
    assert_eq!(dec.case, SpectralCase::RealDistinct);
    // roots of λ² − 2.1λ + (1.1 − 0.1) = 0
    let disc: f64 = 2.1f64 * 2.1 - 4.0 * 1.0;
    let plus = (2.1 + disc.sqrt()) / 2.0;
    let minus = (2.1 - disc.sqrt()) / 2.0;
    assert!((dec.lambda.get(0, 0) - plus).abs() < 1e-14);
    assert!((dec.lambda.get(1, 1) - minus).abs() < 1e-14);
    assert!((plus - 1.3701).abs() < 1e-4 && (minus - 0.7299).abs() < 1e-4);
    assert!(rel_frobenius(&dec.reconstruct(), &d.matrix()) < 1e-14);
}

#[test]
fn every_decomposition_branch_reconstructs() {
    let cases = [
        ((1.0, 0.1, 1.0, 1.1), SpectralCase::RealDistinct),
        ((1.0, 0.0, 0.5, 2.0), SpectralCase::RealDistinct),
        ((2.0, 0.0, 0.0, 1.0), SpectralCase::RealDistinct),
        ((1.0, 0.0, 0.0, 3.0), SpectralCase::RealDistinct),
        ((3.0, 0.0, 0.0, 3.0), SpectralCase::ScalarDiagonal),
        ((1.0, 0.5, 0.0, 1.0), SpectralCase::Jordan),
        ((1.0, 0.0, 1.99, 1.0), SpectralCase::Jordan),
        ((1.0, -0.1, 0.1, 1.0), SpectralCase::ComplexPair),
        ((1.0, -0.9, 1.0, 1.0), SpectralCase::ComplexPair),
        ((2.0, 1.0, -1.5, 1.0), SpectralCase::ComplexPair),
    ];
    for ((a, b, c, e), case) in cases {
        let d = DiffusionMatrix::new(a, b, c, e).unwrap();
        let dec = decompose(&d);
        assert_eq!(dec.case, case, "{d}");
        assert!(dec.p.inverse().is_some());
        assert!(rel_frobenius(&dec.reconstruct(), &d.matrix()) < 1e-14, "{d}");
    }
}

#[test]
fn closed_form_matches_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let d = random_diffusion(&mut rng);
        let a = rng.gen_range(0.0..50.0);
        let rel = rel_frobenius(&matrix_exponent(&d, a), &exp_neg(&d, a));
        assert!(rel < 1e-10, "{d} a={a}: {rel:e}");
    }
}

#[test]
fn rotation_like_exponent() {
    let d = DiffusionMatrix::new(1.0, -0.1, 0.1, 1.0).unwrap();
    let got = matrix_exponent(&d, 1.0);
    let e = (-1.0f64).exp();
    let (c, s) = (0.1f64.cos(), 0.1f64.sin());
    let expected = Matrix2::new(e * c, e * s, -e * s, e * c);
    assert!(rel_frobenius(&got, &expected) < 1e-14);
    assert!(rel_frobenius(&got, &exp_neg(&d, 1.0)) < 1e-13);
}

#[test]
fn symbol_for_filtering_matrix() {
    let d = DiffusionMatrix::new(1.0, 0.9, 1.0, 1.0).unwrap();
    let got = symbol(&d, 2.0, 1.0, 1.0);
    assert!(rel_frobenius(&got, &exp_neg(&d, 1.0)) < 1e-13);
}

#[test]
fn degenerate_and_jordan_match_oracle() {
    for entries in [(1.0, 0.0, 1.99, 1.0), (1.0, 1e-9, 1.99, 1.0), (1.0, -0.25, 1.0, 2.0), (3.0, 0.0, 0.0, 3.0)] {
        let d = DiffusionMatrix::new(entries.0, entries.1, entries.2, entries.3).unwrap();
        for a in [0.01, 0.5, 3.0, 20.0] {
            let rel = rel_frobenius(&matrix_exponent(&d, a), &exp_neg(&d, a));
            assert!(rel < 1e-10, "{d} a={a}: {rel:e}");
        }
    }
}

#[test]
fn entries_decay_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let d = random_diffusion(&mut rng);
        let a = 1e4 / d.min_eigenvalue_real();
        let e = matrix_exponent(&d, a);
        assert!(e.0.iter().flatten().all(|x| x.abs() < 1e-8), "{d}: {e}");
    }
}

#[test]
fn reduced_forms_are_contractions() {
    let forms = [
        DiffusionMatrix::new(2.0, 0.0, 0.0, 0.5).unwrap(),
        DiffusionMatrix::new(1.0, 0.0, 0.0, 1.0).unwrap(),
        DiffusionMatrix::new(1.0, 1.0, 0.0, 1.0).unwrap(),
        DiffusionMatrix::new(0.3, 0.1, 0.0, 0.3).unwrap(),
        DiffusionMatrix::new(1.0, -0.5, 0.5, 1.0).unwrap(),
        DiffusionMatrix::new(0.2, -5.0, 5.0, 0.2).unwrap(),
    ];
    for d in forms {
        let sup = (0..=10_000)
            .map(|i| matrix_exponent(&d, i as f64 * 0.01).norm2())
            .fold(0.0, f64::max);
        assert!(sup <= 1.0 + 1e-12, "{d}: {sup}");
    }
}

proptest! {
    #[test]
    fn exponent_is_a_semigroup(seed in any::<u64>(), a1 in 0.0..25.0f64, a2 in 0.0..25.0f64) {
        let d = random_diffusion(&mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = matrix_exponent(&d, a1) * matrix_exponent(&d, a2);
        let rhs = matrix_exponent(&d, a1 + a2);
        prop_assert!(rel_frobenius(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn exponent_commutes_with_d(seed in any::<u64>(), a in 0.0..10.0f64) {
        let d = random_diffusion(&mut ChaCha8Rng::seed_from_u64(seed));
        let e = matrix_exponent(&d, a);
        let lhs = e * d.matrix();
        let rhs = d.matrix() * e;
        prop_assert!((lhs - rhs).frobenius_norm() <= 1e-12 * d.matrix().frobenius_norm());
    }
}
