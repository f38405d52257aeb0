use hgm_core::diagonal::series_state;
use hgm_core::partitions::{gen_pochhammer, partitions_of};
use hgm_core::series::{
    hyp1f1_series, monomial_symmetric, q_coefficient, q_ones_closed_form, q_two_ones_closed_form,
    rect_derivative_series, squarefree_derivatives_at, zonal_to_monomial_coeffs,
    zonal_to_monomial_coeffs_exact, Series,
};
use hgm_core::wishart::kummer_check;
use hgm_core::{HypParams, InitialMode, Partition, TruncationConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn poch(a: f64, n: usize) -> f64 {
    (0..n).map(|j| a + j as f64).product()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-300)
}

#[test]
fn zonal_tables_up_to_weight_three() {
    let want: [&[&[(i64, i64)]]; 3] = [
        &[&[(1, 1)]],
        &[&[(1, 1), (2, 3)], &[(0, 1), (4, 3)]],
        &[
            &[(1, 1), (3, 5), (2, 5)],
            &[(0, 1), (12, 5), (18, 5)],
            &[(0, 1), (0, 1), (2, 1)],
        ],
    ];
    let order: [&[&[usize]]; 3] = [&[&[1]], &[&[2], &[1, 1]], &[&[3], &[2, 1], &[1, 1, 1]]];
    for k in 1..=3 {
        let t = zonal_to_monomial_coeffs_exact(k, k);
        let names: Vec<Partition> = order[k - 1].iter().map(|q| p(q)).collect();
        assert_eq!(t.partitions(), names.as_slice());
        for (i, row) in want[k - 1].iter().enumerate() {
            for (j, &(n, d)) in row.iter().enumerate() {
                assert_eq!(*t.get(i, j), rat(n, d), "k={k} ({i},{j})");
            }
        }
    }
}

#[test]
fn zonal_columns_sum_to_multinomial_counts() {
    for k in 1..=6 {
        let t = zonal_to_monomial_coeffs_exact(k, k);
        for (j, lambda) in t.partitions().iter().enumerate() {
            let mut want = rat(1, 1);
            for i in 1..=k {
                want *= rat(i as i64, 1);
            }
            for &part in lambda.parts() {
                for i in 1..=part {
                    want /= rat(i as i64, 1);
                }
            }
            let mut sum = rat(0, 1);
            for i in 0..t.len() {
                sum += t.get(i, j).clone();
            }
            assert_eq!(sum, want, "k={k} λ={lambda}");
        }
    }
}

#[test]
fn zonal_polynomials_sum_to_power_of_trace() {
    let points: [&[f64]; 4] = [
        &[0.3],
        &[0.7, -1.2],
        &[0.4, 1.1, 2.5],
        &[-0.6, 0.2, 0.9, 1.7],
    ];
    for y in points {
        let m = y.len();
        let trace: f64 = y.iter().sum();
        for k in 1..=6 {
            let t = zonal_to_monomial_coeffs(k, m);
            let monos: Vec<f64> = t
                .partitions()
                .iter()
                .map(|l| monomial_symmetric(l, y))
                .collect();
            let total: f64 = (0..t.len())
                .map(|i| t.row(i).iter().zip(&monos).map(|(c, v)| c * v).sum::<f64>())
                .sum();
            let want = trace.powi(k as i32);
            assert!(
                (total - want).abs() <= 1e-12 * want.abs().max(1.0),
                "m={m} k={k}: {total} vs {want}"
            );
        }
    }
}

#[test]
fn monomial_examples() {
    assert_eq!(monomial_symmetric(&p(&[1]), &[2.0, 5.0]), 7.0);
    assert_eq!(monomial_symmetric(&p(&[1, 1]), &[2.0, 3.0]), 6.0);
    assert_eq!(monomial_symmetric(&p(&[2, 1]), &[1.0, 2.0, 3.0]), 48.0);
    assert_eq!(monomial_symmetric(&p(&[1, 1, 1]), &[1.0, 2.0]), 0.0);
}

#[test]
fn listed_coefficients() {
    let prm = HypParams::new(1.4, 3.9).unwrap();
    let (a, c) = (prm.a, prm.c);
    let g = |x: f64, q: &[usize]| gen_pochhammer(x, &p(q));
    assert_eq!(q_coefficient(&Partition::empty(), prm).unwrap(), 1.0);
    assert!(close(q_coefficient(&p(&[1]), prm).unwrap(), a / c, 1e-14));
    assert!(close(
        q_coefficient(&p(&[2]), prm).unwrap(),
        poch(a, 2) / (2.0 * poch(c, 2)),
        1e-14
    ));
    let q11 = poch(a, 2) / (3.0 * poch(c, 2)) + 2.0 * g(a, &[1, 1]) / (3.0 * g(c, &[1, 1]));
    assert!(close(q_coefficient(&p(&[1, 1]), prm).unwrap(), q11, 1e-14));
    let q211 = poch(a, 4) / (70.0 * poch(c, 4))
        + 4.0 * g(a, &[2, 2]) / (45.0 * g(c, &[2, 2]))
        + 11.0 * g(a, &[3, 1]) / (63.0 * g(c, &[3, 1]))
        + 2.0 * g(a, &[2, 1, 1]) / (9.0 * g(c, &[2, 1, 1]));
    assert!(close(
        q_coefficient(&p(&[2, 1, 1]), prm).unwrap(),
        q211,
        1e-13
    ));
}

#[test]
fn closed_forms_agree_with_general_coefficients() {
    for (a, c) in [(1.5, 3.5), (0.7, 4.25), (5.5, 11.5)] {
        let prm = HypParams::new(a, c).unwrap();
        for k in 1..=6 {
            let want = q_coefficient(&Partition::column(k), prm).unwrap();
            assert!(
                close(q_ones_closed_form(k, prm).unwrap(), want, 1e-12),
                "(1^{k})"
            );
        }
        for k in 2..=6 {
            let mut parts = vec![2];
            parts.extend(std::iter::repeat(1).take(k - 2));
            let want = q_coefficient(&p(&parts), prm).unwrap();
            assert!(
                close(q_two_ones_closed_form(k, prm).unwrap(), want, 1e-12),
                "(2,1^{})",
                k - 2
            );
        }
        assert!(close(
            q_two_ones_closed_form(2, prm).unwrap(),
            poch(a, 2) / (2.0 * poch(c, 2)),
            1e-14
        ));
    }
}

#[test]
fn pole_names_offending_partition() {
    let prm = HypParams::new(1.0, 0.5).unwrap();
    match q_coefficient(&p(&[1, 1]), prm) {
        Err(hgm_core::Error::Pole { partition }) => assert_eq!(partition, p(&[1, 1])),
        other => panic!("expected a pole, got {other:?}"),
    }
}

#[test]
fn scalar_series_is_exponential_when_parameters_match() {
    let prm = HypParams::new(2.3, 2.3).unwrap();
    let cfg = TruncationConfig::new(60, 1).unwrap();
    for y in [-1.5, 0.2, 3.0] {
        let got = hyp1f1_series(prm, &[y], cfg).unwrap();
        assert!(close(got, y.exp(), 1e-13), "{y}");
    }
    assert_eq!(hyp1f1_series(prm, &[0.0], cfg).unwrap(), 1.0);
}

fn origin_values(a: f64, c: f64) {
    let prm = HypParams::new(a, c).unwrap();
    let cfg = TruncationConfig::new(6, 2).unwrap();
    let o = [0.0, 0.0];
    let d1 = a / c;
    let d11 = poch(a, 2) / poch(c, 2);
    let d12 = poch(a, 2) / (3.0 * poch(c, 2)) + 2.0 * a * (a - 0.5) / (3.0 * c * (c - 0.5));
    let d112 = poch(a, 3) / (5.0 * poch(c, 3))
        + 4.0 * poch(a, 2) * (a - 0.5) / (5.0 * poch(c, 2) * (c - 0.5));
    assert!(close(
        rect_derivative_series(&p(&[1]), prm, &o, cfg).unwrap(),
        d1,
        1e-12
    ));
    assert!(close(
        rect_derivative_series(&p(&[2]), prm, &o, cfg).unwrap(),
        d11,
        1e-12
    ));
    assert!(close(
        rect_derivative_series(&p(&[1, 1]), prm, &o, cfg).unwrap(),
        d12,
        1e-12
    ));
    let s = Series::new(prm, cfg).unwrap();
    assert!(close(s.derivative(&[0, 1], &o).unwrap(), d1, 1e-12));
    assert!(close(s.derivative(&[0, 2], &o).unwrap(), d11, 1e-12));
    assert!(close(s.derivative(&[2, 1], &o).unwrap(), d112, 1e-12));
    assert!(close(s.derivative(&[1, 2], &o).unwrap(), d112, 1e-12));

    let v = squarefree_derivatives_at(prm, &o, cfg, InitialMode::Linear).unwrap();
    assert_eq!(v.values()[0], 1.0);
    assert!(close(v.values()[1], d1, 1e-12) && close(v.values()[2], d1, 1e-12));
    assert!(close(v.values()[3], d12, 1e-12));

    // the diagonal restriction f(y) = F(y, y)
    let f = series_state(prm, 2, 0.0, 4, 6).unwrap();
    let f2 = 8.0 * poch(a, 2) / (3.0 * poch(c, 2)) + 4.0 * a * (a - 0.5) / (3.0 * c * (c - 0.5));
    let f3 = 2.0 * poch(a, 3) / poch(c, 3)
        + 6.0
            * (poch(a, 3) / (5.0 * poch(c, 3))
                + 4.0 * poch(a, 2) * (a - 0.5) / (5.0 * poch(c, 2) * (c - 0.5)));
    assert_eq!(f[0], 1.0);
    assert!(close(f[1], 2.0 * a / c, 1e-12));
    assert!(close(f[2], f2, 1e-12));
    assert!(close(f[3], f3, 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn origin_values_match_closed_forms(a in 1.0f64..6.0, gap in 0.05f64..5.0) {
        origin_values(a, a + gap);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kummer_relation_near_origin(
        a in 0.5f64..4.0,
        gap in 0.5f64..4.0,
        y in prop::collection::vec(-0.3f64..0.3, 1..=3),
    ) {
        let prm = HypParams::new(a, a + gap).unwrap();
        let r = kummer_check(prm, &y, 30).unwrap();
        prop_assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn series_is_symmetric(
        y in prop::collection::vec(0.01f64..0.4, 2..=4),
        seed in 0usize..24,
    ) {
        let m = y.len();
        let prm = HypParams::new(1.5, 3.25).unwrap();
        let s = Series::new(prm, TruncationConfig::new(14, m).unwrap()).unwrap();
        // a permutation from the seed
        let mut perm: Vec<usize> = (0..m).collect();
        let mut k = seed;
        for i in (1..m).rev() {
            perm.swap(i, k % (i + 1));
            k /= i + 1;
        }
        let z: Vec<f64> = perm.iter().map(|&j| y[j]).collect();
        let fy = s.value(&y).unwrap();
        prop_assert!(close(s.value(&z).unwrap(), fy, 1e-13));
        let distinct = (0..m).all(|i| (0..i).all(|j| (y[i] - y[j]).abs() > 1e-6));
        if distinct {
            let vy = s.squarefree_derivatives(&y).unwrap();
            let vz = s.squarefree_derivatives(&z).unwrap();
            let want = vy.permuted(&perm);
            for (g, w) in vz.values().iter().zip(want.values()) {
                prop_assert!(close(*g, *w, 1e-12));
            }
        }
    }
}

#[test]
fn squarefree_vector_matches_finite_differences() {
    let prm = HypParams::new(2.0, 4.5).unwrap();
    let y = [0.05, 0.12, 0.2];
    let cfg = TruncationConfig::new(40, 3).unwrap();
    let v = squarefree_derivatives_at(prm, &y, cfg, InitialMode::Series).unwrap();
    let s = Series::new(prm, cfg).unwrap();
    let h = 1e-4;
    assert!(close(
        v.values()[0],
        hyp1f1_series(prm, &y, cfg).unwrap(),
        1e-14
    ));
    for mask in 1..8usize {
        // one central difference in the last variable of the subset, applied
        // to the series derivative in the others
        let last = (0..3).rev().find(|i| mask >> i & 1 == 1).unwrap();
        let mu: Vec<usize> = (0..3)
            .map(|i| usize::from(mask >> i & 1 == 1 && i != last))
            .collect();
        let (mut up, mut down) = (y, y);
        up[last] += h;
        down[last] -= h;
        let fd = (s.derivative(&mu, &up).unwrap() - s.derivative(&mu, &down).unwrap()) / (2.0 * h);
        assert!(
            close(v.values()[mask], fd, 1e-6),
            "J={mask}: {} vs {fd}",
            v.values()[mask]
        );
    }
}

#[test]
fn series_mode_rejects_ties() {
    let prm = HypParams::new(2.0, 4.5).unwrap();
    let cfg = TruncationConfig::new(10, 2).unwrap();
    assert!(squarefree_derivatives_at(prm, &[0.1, 0.1], cfg, InitialMode::Series).is_err());
    assert!(squarefree_derivatives_at(prm, &[0.1, 0.1], cfg, InitialMode::Linear).is_ok());
}

#[test]
fn rectangular_blocks_enumerated_consistently() {
    // every partition of the table also has a coefficient in the series
    let prm = HypParams::new(1.5, 3.5).unwrap();
    let s = Series::new(prm, TruncationConfig::new(7, 3).unwrap()).unwrap();
    for k in 0..=7 {
        for lambda in partitions_of(k, 3) {
            let want = q_coefficient(&lambda, prm).unwrap();
            assert!(close(s.q(&lambda).unwrap(), want, 1e-12), "{lambda}");
        }
    }
    assert!(s.q(&p(&[8])).is_none());
}
