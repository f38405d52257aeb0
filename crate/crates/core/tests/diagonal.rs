use hgm_core::diagonal::{
    diag_rhs_m2, diag_rhs_m3, fixed_plan, hyp1f1_diagonal, hyp1f1_diagonal_auto, m2_coefficients,
    m3_polynomials, series_state,
};
use hgm_core::radial::{hyp1f1_near_diagonal, RadialOptions};
use hgm_core::series::Series;
use hgm_core::{Error, HypParams, TruncationConfig};
use proptest::prelude::*;

#[test]
fn two_by_two_matches_long_series() {
    for (a, c) in [(1.5, 3.5), (2.0, 6.0), (0.75, 2.25)] {
        let prm = HypParams::new(a, c).unwrap();
        let s = Series::new(prm, TruncationConfig::new(150, 2).unwrap()).unwrap();
        for y in [0.25, 0.8, 1.5, 2.2, 3.0] {
            let want = s.value(&[y, y]).unwrap();
            let got = hyp1f1_diagonal_auto(prm, y, 2).unwrap();
            assert!(
                (got - want).abs() <= 1e-8 * want,
                "a={a} c={c} y={y}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn three_by_three_matches_series() {
    let prm = HypParams::new(2.0, 4.0).unwrap();
    let s = Series::new(prm, TruncationConfig::new(60, 3).unwrap()).unwrap();
    for y in [0.3, 1.0, 2.0] {
        let want = s.value(&[y, y, y]).unwrap();
        let got = hyp1f1_diagonal_auto(prm, y, 3).unwrap();
        assert!((got - want).abs() <= 1e-8 * want, "y={y}: {got} vs {want}");
    }
}

#[test]
fn agrees_with_spread_limit() {
    let prm = HypParams::new(1.5, 3.5).unwrap();
    let opts = RadialOptions::default();
    for m in [2, 3] {
        for y in [0.5, 1.0, 2.0] {
            let diag = hyp1f1_diagonal_auto(prm, y, m).unwrap();
            let spread = hyp1f1_near_diagonal(prm, y, m, 0.2, 4, &opts).unwrap();
            assert!(
                (diag - spread).abs() <= 1e-5 * diag,
                "m={m} y={y}: {diag} vs {spread}"
            );
        }
    }
}

#[test]
fn fixed_step_route() {
    let prm = HypParams::new(1.5, 3.5).unwrap();
    let want = hyp1f1_diagonal_auto(prm, 2.0, 2).unwrap();
    let got = hyp1f1_diagonal(prm, 2.0, 2, &fixed_plan(0.01, 2.0, 1e-3).unwrap()).unwrap();
    assert!((got - want).abs() <= 1e-9 * want);
}

// −y²f‴ + (3y² + (1−3c)y)f″ + (−2y² + (4a+4c−2)y − 2c² + 2c)f′ + (−4ay + (4c−4)a)f
fn m2_residual(a: f64, c: f64, y: f64, f: &[f64]) -> f64 {
    -y * y * f[3]
        + (3.0 * y * y + (1.0 - 3.0 * c) * y) * f[2]
        + (-2.0 * y * y + (4.0 * a + 4.0 * c - 2.0) * y - 2.0 * c * c + 2.0 * c) * f[1]
        + (-4.0 * a * y + (4.0 * c - 4.0) * a) * f[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn series_solves_diagonal_equations(a in 0.6f64..4.0, gap in 0.6f64..4.0, y in 0.02f64..0.4) {
        let prm = HypParams::new(a, a + gap).unwrap();
        let c = a + gap;
        let s2 = series_state(prm, 2, y, 4, 60).unwrap();
        let scale = s2.iter().map(|v| v.abs()).fold(0.0, f64::max) * (1.0 + c * c);
        prop_assert!(m2_residual(a, c, y, &s2).abs() <= 1e-11 * scale);
        let d = diag_rhs_m2(prm, y, &[s2[0], s2[1], s2[2]]).unwrap();
        prop_assert!((d[2] - s2[3]).abs() <= 1e-9 * s2[3].abs().max(1.0));

        let s3 = series_state(prm, 3, y, 5, 60).unwrap();
        let p = m3_polynomials(prm, y);
        let r: f64 = p.iter().zip(&s3).map(|(p, f)| p * f).sum();
        let scale = p.iter().zip(&s3).map(|(p, f)| (p * f).abs()).fold(0.0, f64::max);
        prop_assert!(r.abs() <= 1e-10 * scale, "residual {r} scale {scale}");
        let d = diag_rhs_m3(prm, y, &[s3[0], s3[1], s3[2], s3[3]]).unwrap();
        prop_assert!((d[3] - s3[4]).abs() <= 1e-8 * s3[4].abs().max(1.0));
    }
}

#[test]
fn m2_coefficients_reject_origin() {
    let prm = HypParams::new(1.5, 3.5).unwrap();
    assert!(m2_coefficients(prm, 0.0).is_err());
    assert!(m2_coefficients(prm, -1.0).is_err());
    assert_eq!(m3_polynomials(prm, 2.0)[4], 8.0);
}

#[test]
fn positive_and_increasing() {
    let prm = HypParams::new(1.5, 3.5).unwrap();
    for m in [2, 3] {
        let mut prev = 1.0;
        for k in 1..=20 {
            let y = 0.25 * k as f64;
            let v = hyp1f1_diagonal_auto(prm, y, m).unwrap();
            assert!(v > prev, "m={m} y={y}");
            prev = v;
        }
    }
}

#[test]
fn small_arguments_use_series() {
    let prm = HypParams::new(1.5, 3.5).unwrap();
    assert_eq!(hyp1f1_diagonal_auto(prm, 0.0, 2).unwrap(), 1.0);
    assert!(hyp1f1_diagonal_auto(prm, -0.5, 2).is_err());
}

#[test]
fn only_two_and_three_supported() {
    let prm = HypParams::new(1.5, 3.5).unwrap();
    for m in [1, 4, 5] {
        assert_eq!(
            hyp1f1_diagonal_auto(prm, 1.0, m),
            Err(Error::UnsupportedDimension { m })
        );
    }
}
