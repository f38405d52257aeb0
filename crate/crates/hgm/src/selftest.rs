//! Quick invariant checks run by `hgm selftest`.

use hgm_core::diagonal::hyp1f1_diagonal_auto;
use hgm_core::pfaffian::{a0_spectrum, apply_pfaffian, g_rhs};
use hgm_core::radial::{hyp1f1_near_diagonal, RadialOptions};
use hgm_core::series::{
    monomial_symmetric, zonal_to_monomial_coeffs, zonal_to_monomial_coeffs_exact, Series,
};
use hgm_core::wishart::{cdf_curve, cdf_largest_root, kummer_check, SeriesCdf};
use hgm_core::{
    DerivVector, EvaluationPoint, HgmConfig, HypParams, Result, SubsetIndex, TruncationConfig,
    WishartProblem,
};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: Result<f64>, limit: f64) -> Check {
    match value {
        Ok(v) => Check {
            name,
            passed: v <= limit,
            detail: format!("{v:.3e} (limit {limit:.0e})"),
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn zonal_golden() -> Result<f64> {
    // weight 2: rows (2) and (1,1) over columns (2), (1,1)
    let t = zonal_to_monomial_coeffs_exact(2, 2);
    let want = [[(1, 1), (2, 3)], [(0, 1), (4, 3)]];
    let mut bad = 0.0;
    for (i, row) in want.iter().enumerate() {
        for (j, &(n, d)) in row.iter().enumerate() {
            let c = t.get(i, j);
            if c.numer() * d != c.denom() * n {
                bad += 1.0;
            }
        }
    }
    Ok(bad)
}

fn normalization() -> Result<f64> {
    let y = [0.4, 1.1, 2.5];
    let trace: f64 = y.iter().sum();
    let mut worst: f64 = 0.0;
    for k in 1..=6 {
        let t = zonal_to_monomial_coeffs(k, 3);
        let monos: Vec<f64> = t
            .partitions()
            .iter()
            .map(|l| monomial_symmetric(l, &y))
            .collect();
        let total: f64 = (0..t.len())
            .map(|i| t.row(i).iter().zip(&monos).map(|(c, v)| c * v).sum::<f64>())
            .sum();
        worst = worst.max((total / trace.powi(k as i32) - 1.0).abs());
    }
    Ok(worst)
}

fn kummer() -> Result<f64> {
    let prm = HypParams::new(1.5, 3.25)?;
    kummer_check(prm, &[0.12, -0.2, 0.27], 30)
}

fn equivariance() -> Result<f64> {
    let prm = HypParams::new(2.5, 5.0)?;
    let s = Series::new(prm, TruncationConfig::new(16, 4)?)?;
    let y = [0.05, 0.11, 0.17, 0.3];
    let perm = [2, 0, 3, 1];
    let z: Vec<f64> = perm.iter().map(|&j| y[j]).collect();
    let want = s.squarefree_derivatives(&y)?.permuted(&perm);
    let got = s.squarefree_derivatives(&z)?;
    Ok(got
        .values()
        .iter()
        .zip(want.values())
        .map(|(a, b)| (a - b).abs() / b.abs())
        .fold(0.0, f64::max))
}

fn finite_differences() -> Result<f64> {
    let prm = HypParams::new(2.0, 4.5)?;
    let s = Series::new(prm, TruncationConfig::new(40, 3)?)?;
    let y = [0.1, 0.25, 0.4];
    let f = s.squarefree_derivatives(&y)?;
    let point = EvaluationPoint::new(y.to_vec())?;
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let p = apply_pfaffian(i, &point, prm, &f)?;
        let (mut up, mut down) = (y, y);
        up[i] += h;
        down[i] -= h;
        let fu = s.squarefree_derivatives(&up)?;
        let fd = s.squarefree_derivatives(&down)?;
        for j in 0..f.len() {
            let diff = (fu.values()[j] - fd.values()[j]) / (2.0 * h);
            worst = worst.max((diff - p.values()[j]).abs() / p.values()[j].abs().max(1.0));
        }
    }
    Ok(worst)
}

fn a0() -> Result<f64> {
    let beta = [1.0, 2.0, 3.5];
    let spec = a0_spectrum(&beta);
    let prm = HypParams::new(2.0, 4.0)?;
    let x = 1e8;
    let mut worst: f64 = 0.0;
    for (j, s) in spec.iter().enumerate() {
        let e = DerivVector::unit(3, SubsetIndex(j));
        let col = g_rhs(x, &e, &beta, 0.0, prm)?;
        worst = worst.max((col.values()[j] - s).abs());
    }
    Ok(worst)
}

fn ninety_five() -> Result<f64> {
    let prob = WishartProblem::new(3.0, &[1.0, 2.0])?;
    Ok((cdf_largest_root(4.316, &prob, &HgmConfig::default())? - 0.95).abs())
}

fn series_agreement() -> Result<f64> {
    let prob = WishartProblem::new(3.0, &[1.0, 2.0])?;
    let series = SeriesCdf::new(&prob, 150)?;
    let xs: Vec<f64> = (0..20).map(|i| 0.5 + 4.5 * i as f64 / 19.0).collect();
    let curve = cdf_curve(&xs, &prob, &HgmConfig::default())?;
    let mut worst: f64 = 0.0;
    for (x, p) in xs.iter().zip(curve) {
        worst = worst.max((p - series.eval(*x)?).abs());
    }
    Ok(worst)
}

// 0 when monotone and the terminal value is in range, 1 otherwise
fn monotone() -> Result<f64> {
    let prob = WishartProblem::new(7.0, &[1.0, 2.0, 3.0, 4.0, 5.0])?;
    let xs: Vec<f64> = (1..=100).map(|i| 0.2 * i as f64).collect();
    let curve = cdf_curve(&xs, &prob, &HgmConfig::default())?;
    let last = curve[curve.len() - 1];
    let ok = curve.windows(2).all(|w| w[1] >= w[0]) && (1.0 - 1e-3..=1.0 + 1e-4).contains(&last);
    Ok(if ok { 0.0 } else { 1.0 })
}

fn diagonal() -> Result<f64> {
    let prm = HypParams::new(1.5, 3.5)?;
    let d = hyp1f1_diagonal_auto(prm, 1.0, 2)?;
    let s = hyp1f1_near_diagonal(prm, 1.0, 2, 0.2, 4, &RadialOptions::default())?;
    Ok((d - s).abs() / d)
}

pub fn run_all() -> Vec<Check> {
    vec![
        check("zonal-golden", zonal_golden(), 0.0),
        check("normalization", normalization(), 1e-12),
        check("kummer", kummer(), 1e-10),
        check("equivariance", equivariance(), 1e-12),
        check("finite-differences", finite_differences(), 1e-6),
        check("a0-spectrum", a0(), 1e-6),
        check("cdf-95", ninety_five(), 1e-5),
        check("series-agreement", series_agreement(), 1e-6),
        check("monotone", monotone(), 0.0),
        check("diagonal", diagonal(), 1e-5),
    ]
}
