//! Monomial symmetric polynomials and the rectangular-derivative lemma.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math::powi;
use crate::partitions::Partition;

/// `M_λ(y)`: sum of all distinct monomials whose exponent multiset is `λ`
/// (padded with zeros). Zero when `λ` has more parts than `y` has entries.
pub fn monomial_symmetric(lambda: &Partition, y: &[f64]) -> f64 {
    if lambda.len() > y.len() {
        return 0.0;
    }
    let groups = group(lambda);
    let values: Vec<usize> = groups.iter().map(|g| g.0).collect();
    let mut mults: Vec<usize> = groups.iter().map(|g| g.1).collect();
    let mut memo = BTreeMap::new();
    msym(&values, &mut mults, y, y.len(), &mut memo)
}

/// `(value, multiplicity)` pairs in decreasing value order.
pub(crate) fn group(lambda: &Partition) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &p in lambda.parts() {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn msym(
    values: &[usize],
    mults: &mut Vec<usize>,
    y: &[f64],
    n: usize,
    memo: &mut BTreeMap<(usize, Vec<usize>), f64>,
) -> f64 {
    let left: usize = mults.iter().sum();
    if left > n {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let key = (n, mults.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let yn = y[n - 1];
    let mut total = 0.0;
    if left < n {
        total += msym(values, mults, y, n - 1, memo);
    }
    for g in 0..values.len() {
        if mults[g] == 0 {
            continue;
        }
        mults[g] -= 1;
        total += powi(yn, values[g] as i32) * msym(values, mults, y, n - 1, memo);
        mults[g] += 1;
    }
    memo.insert(key, total);
    total
}

fn falling(v: usize, t: usize) -> f64 {
    ((v - t + 1)..=v).map(|x| x as f64).product()
}

/// `∂^τ M_λ(y)` for `τ = (t^l)` acting on the first `l` coordinates:
/// the sum over splittings `κ ⊎ ν = λ` with `τ ⊂ κ`, `κ_{l+1} = 0` of
/// `κ!/(κ−τ)! · M_{κ−τ}(y₁..y_l) · M_ν(y_{l+1}..y_m)`.
pub(crate) fn rect_derivative_of_monomial(
    lambda: &Partition,
    t: usize,
    l: usize,
    y: &[f64],
) -> f64 {
    let groups = group(lambda);
    let mut take = alloc::vec![0usize; groups.len()];
    let mut total = 0.0;
    split(&groups, 0, l, t, &mut take, y, &mut total);
    total
}

fn split(
    groups: &[(usize, usize)],
    g: usize,
    need: usize,
    t: usize,
    take: &mut Vec<usize>,
    y: &[f64],
    total: &mut f64,
) {
    if g == groups.len() {
        if need != 0 {
            return;
        }
        let l = take.iter().sum::<usize>();
        let mut shifted = Vec::new();
        let mut rest = Vec::new();
        let mut factor = 1.0;
        for (i, &(v, c)) in groups.iter().enumerate() {
            for _ in 0..take[i] {
                shifted.push(v - t);
                factor *= falling(v, t);
            }
            for _ in take[i]..c {
                rest.push(v);
            }
        }
        let (head, tail) = y.split_at(l);
        let rest = Partition::from_multiset(rest);
        if rest.len() > tail.len() {
            return;
        }
        *total += factor
            * monomial_symmetric(&Partition::from_multiset(shifted), head)
            * monomial_symmetric(&rest, tail);
        return;
    }
    let (v, c) = groups[g];
    let max_take = if v >= t { c.min(need) } else { 0 };
    for x in 0..=max_take {
        take[g] = x;
        split(groups, g + 1, need - x, t, take, y, total);
    }
    take[g] = 0;
}
