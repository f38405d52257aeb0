//! Integer partitions, dominance order and generalized Pochhammer symbols.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A weakly decreasing sequence of positive integers. The empty partition
/// `∅` has weight 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition);
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zero parts, so any multiset of exponents is accepted.
    pub fn from_multiset(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(t^l)`, the rectangle with `l` rows of length `t`.
    pub fn rectangle(t: usize, l: usize) -> Self {
        if t == 0 {
            return Partition::empty();
        }
        Partition(alloc::vec![t; l])
    }

    /// `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition::rectangle(1, k)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `τ ⊂ κ` in the containment (Young diagram) order.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Length of the `j`-th column (0-based) of the Young diagram.
    pub fn column_len(&self, j: usize) -> usize {
        self.0.iter().take_while(|&&p| p > j).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// All partitions of `k` with at most `max_length` parts, in
/// reverse-lexicographic order: `(3), (2,1), (1,1,1)`.
pub fn partitions_of(k: usize, max_length: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(k, k, max_length, &mut current, &mut out);
    out
}

fn fill(
    remaining: usize,
    max_part: usize,
    slots: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    let top = remaining.min(max_part);
    for p in (1..=top).rev() {
        // the rest must fit into `slots - 1` parts of size ≤ p
        if (remaining - p) > p * (slots - 1) {
            break;
        }
        current.push(p);
        fill(remaining - p, p, slots - 1, current, out);
        current.pop();
    }
}

/// `λ ⊴ κ`: every prefix sum of `lambda` is at most that of `kappa`.
pub fn dominates(kappa: &Partition, lambda: &Partition) -> Result<bool> {
    let (wk, wl) = (kappa.weight(), lambda.weight());
    if wk != wl {
        return Err(Error::UnequalWeights {
            left: wk,
            right: wl,
        });
    }
    Ok(dominates_unchecked(kappa.parts(), lambda.parts()))
}

pub(crate) fn dominates_unchecked(kappa: &[usize], lambda: &[usize]) -> bool {
    let (mut sk, mut sl) = (0usize, 0usize);
    for s in 0..kappa.len().max(lambda.len()) {
        sk += kappa.get(s).copied().unwrap_or(0);
        sl += lambda.get(s).copied().unwrap_or(0);
        if sl > sk {
            return false;
        }
    }
    true
}

/// Generalized Pochhammer symbol `(a)_κ = ∏ᵢ (a − (i−1)/2)_{kᵢ}`.
pub fn gen_pochhammer(a: f64, kappa: &Partition) -> f64 {
    let mut prod = 1.0;
    for (i, &k) in kappa.parts().iter().enumerate() {
        let base = a - i as f64 / 2.0;
        for j in 0..k {
            prod *= base + j as f64;
        }
    }
    prod
}

/// `(a)_κ / (c)_κ`, accumulated as a product of ratios so that neither side
/// overflows for long partitions.
pub fn pochhammer_ratio(a: f64, c: f64, kappa: &Partition) -> f64 {
    let mut prod = 1.0;
    for (i, &k) in kappa.parts().iter().enumerate() {
        let shift = i as f64 / 2.0;
        for j in 0..k {
            prod *= (a - shift + j as f64) / (c - shift + j as f64);
        }
    }
    prod
}

/// Number of distinct arrangements of `λ` (padded with zeros) over `m` slots,
/// i.e. `M_λ(1, …, 1)`.
pub fn arrangements(lambda: &Partition, m: usize) -> f64 {
    let l = lambda.len();
    if l > m {
        return 0.0;
    }
    // m! / ((m-l)! ∏ mult!)
    let mut count = 1.0;
    for j in 0..l {
        count *= (m - j) as f64;
    }
    let parts = lambda.parts();
    let mut run = 1usize;
    for i in 1..=l {
        if i < l && parts[i] == parts[i - 1] {
            run += 1;
        } else {
            for r in 2..=run {
                count /= r as f64;
            }
            run = 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(partitions_of(0, 3), vec![Partition::empty()]);
        assert_eq!(
            partitions_of(3, 3),
            vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]
        );
        assert_eq!(partitions_of(4, 2), vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);
    }

    #[test]
    fn rejects_unsorted_and_zero_parts() {
        assert_eq!(Partition::new(vec![1, 2]), Err(Error::InvalidPartition));
        assert_eq!(Partition::new(vec![2, 0]), Err(Error::InvalidPartition));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&p(&[2]), &p(&[1, 1])).unwrap());
        assert!(!dominates(&p(&[1, 1]), &p(&[2])).unwrap());
        assert!(!dominates(&p(&[2, 2]), &p(&[3, 1])).unwrap());
        assert!(dominates(&p(&[3, 1]), &p(&[2, 2])).unwrap());
        assert_eq!(
            dominates(&p(&[2]), &p(&[1])),
            Err(Error::UnequalWeights { left: 2, right: 1 })
        );
    }

    #[test]
    fn pochhammer_examples() {
        let a = 1.7;
        assert_eq!(gen_pochhammer(a, &Partition::empty()), 1.0);
        assert_eq!(gen_pochhammer(a, &p(&[2])), a * (a + 1.0));
        assert_eq!(gen_pochhammer(a, &p(&[1, 1])), a * (a - 0.5));
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(&p(&[2, 1]), 3), 6.0);
        assert_eq!(arrangements(&p(&[1, 1]), 3), 3.0);
        assert_eq!(arrangements(&p(&[2, 2, 1]), 4), 12.0);
        assert_eq!(arrangements(&p(&[1, 1, 1]), 2), 0.0);
    }
}
