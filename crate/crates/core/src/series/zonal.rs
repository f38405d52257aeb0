//! Expansion of C-normalized zonal polynomials in monomial symmetric
//! functions, `C_κ = Σ_{λ ⊴ κ} c_{κ,λ} M_λ`, via James' recurrence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::partitions::{dominates_unchecked, partitions_of, Partition};

/// Field the recurrence is run in. `f64` for evaluation, `BigRational` for
/// exact tables.
pub trait Coeff:
    Clone + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Sized
{
    fn zero() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Coefficients `c_{κ,λ}` for all partitions of one weight `k` with at most
/// `m` parts. Row `κ`, column `λ`, both in reverse-lexicographic order; the
/// matrix is upper triangular.
#[derive(Debug, Clone)]
pub struct ZonalCoeffTable<T> {
    weight: usize,
    partitions: Vec<Partition>,
    coeffs: Vec<T>,
}

impl<T: Coeff> ZonalCoeffTable<T> {
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// `c_{κ,λ}` by row/column index.
    pub fn get(&self, kappa: usize, lambda: usize) -> &T {
        &self.coeffs[kappa * self.partitions.len() + lambda]
    }

    pub fn row(&self, kappa: usize) -> &[T] {
        let n = self.partitions.len();
        &self.coeffs[kappa * n..(kappa + 1) * n]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }
}

/// Floating-point table for weight `k` restricted to `m` parts.
pub fn zonal_to_monomial_coeffs(k: usize, m: usize) -> ZonalCoeffTable<f64> {
    build(k, m)
}

/// Exact rational table for weight `k` restricted to `m` parts.
pub fn zonal_to_monomial_coeffs_exact(k: usize, m: usize) -> ZonalCoeffTable<BigRational> {
    build(k, m)
}

/// `ρ_κ = Σ kᵢ(kᵢ − i)` with 1-based `i`.
fn rho(p: &[usize]) -> i64 {
    p.iter()
        .enumerate()
        .map(|(i, &k)| k as i64 * (k as i64 - i as i64 - 1))
        .sum()
}

/// Diagonal entry `c_{κ,κ} = 2^k k! / ∏_{s∈κ} (2a(s) + l(s) + 2)` where `a`
/// and `l` are arm and leg lengths.
fn leading<T: Coeff>(kappa: &Partition) -> T {
    let mut hooks = Vec::with_capacity(kappa.weight());
    for (i, &row) in kappa.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = kappa.column_len(j) - i - 1;
            hooks.push((2 * arm + leg + 2) as i64);
        }
    }
    hooks
        .iter()
        .enumerate()
        .fold(T::from_ratio(1, 1), |acc, (j, &h)| {
            acc * T::from_ratio(2 * (j as i64 + 1), h)
        })
}

fn build<T: Coeff>(k: usize, m: usize) -> ZonalCoeffTable<T> {
    let partitions = partitions_of(k, m);
    let n = partitions.len();
    let index: BTreeMap<&[usize], usize> = partitions
        .iter()
        .enumerate()
        .map(|(i, p)| (p.parts(), i))
        .collect();
    let rhos: Vec<i64> = partitions.iter().map(|p| rho(p.parts())).collect();

    // For each λ: the partitions μ reached by moving t units from part j to
    // part i < j, with the weight (lᵢ + t) − (l_j − t).
    let raises: Vec<Vec<(usize, i64)>> = partitions
        .iter()
        .map(|lambda| {
            let l = lambda.parts();
            let mut out = Vec::new();
            for i in 0..l.len() {
                for j in i + 1..l.len() {
                    for t in 1..=l[j] {
                        let mut mu = l.to_vec();
                        mu[i] += t;
                        mu[j] -= t;
                        let mu = Partition::from_multiset(mu);
                        let idx = index[mu.parts()];
                        out.push((idx, (l[i] + t) as i64 - (l[j] - t) as i64));
                    }
                }
            }
            out
        })
        .collect();

    let mut coeffs = vec![T::zero(); n * n];
    for r in 0..n {
        let kappa = &partitions[r];
        let row_start = r * n;
        coeffs[row_start + r] = leading(kappa);
        for c in r + 1..n {
            if !dominates_unchecked(kappa.parts(), partitions[c].parts()) {
                continue;
            }
            let mut acc = T::zero();
            for &(mu, w) in &raises[c] {
                // μ ▷ λ, so μ precedes λ and is already final
                acc = acc + T::from_ratio(w, 1) * coeffs[row_start + mu].clone();
            }
            coeffs[row_start + c] = acc / T::from_ratio(rhos[r] - rhos[c], 1);
        }
    }

    ZonalCoeffTable {
        weight: k,
        partitions,
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn weight_one_is_identity() {
        let t = zonal_to_monomial_coeffs_exact(1, 4);
        assert_eq!(t.len(), 1);
        assert_eq!(*t.get(0, 0), q(1, 1));
    }

    #[test]
    fn restricted_rows_match_unrestricted_entries() {
        let full = zonal_to_monomial_coeffs_exact(5, 5);
        let cut = zonal_to_monomial_coeffs_exact(5, 2);
        for (i, ki) in cut.partitions().iter().enumerate() {
            for (j, lj) in cut.partitions().iter().enumerate() {
                let fi = full.index_of(ki).unwrap();
                let fj = full.index_of(lj).unwrap();
                assert_eq!(cut.get(i, j), full.get(fi, fj));
            }
        }
    }

    #[test]
    fn float_table_tracks_exact_table() {
        use num_traits::ToPrimitive;
        let exact = zonal_to_monomial_coeffs_exact(8, 8);
        let float = zonal_to_monomial_coeffs(8, 8);
        for i in 0..exact.len() {
            for j in 0..exact.len() {
                let e = exact.get(i, j).to_f64().unwrap();
                let f = *float.get(i, j);
                assert!(
                    (e - f).abs() <= 1e-13 * e.abs().max(1.0),
                    "{i},{j}: {e} vs {f}"
                );
            }
        }
    }
}
