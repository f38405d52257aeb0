//! Tables of intermediate quantities: zonal-to-monomial coefficients,
//! series coefficients and dense Pfaffian matrices.

use hgm_core::partitions::partitions_of;
use hgm_core::pfaffian::pfaffian_matrix;
use hgm_core::series::{q_coefficient, zonal_to_monomial_coeffs_exact};
use hgm_core::{EvaluationPoint, HypParams, Partition, Result};

use crate::format::Cell;

/// `3.1.1`; the empty partition is `0`.
pub fn partition_label(p: &Partition) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.parts()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

/// Name of a square-free derivative: `F`, `d1`, `d1.3`, ... (1-based).
pub fn subset_label(mask: usize) -> String {
    if mask == 0 {
        return "F".into();
    }
    let idx: Vec<String> = (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("d{}", idx.join("."))
}

pub const ZONAL_COLUMNS: [&str; 3] = ["kappa", "lambda", "coeff"];

/// Exact `c_{κλ}` for all partitions of `k` with at most `m` parts, as
/// `p/q` strings; zero entries are skipped.
pub fn zonal_rows(k: usize, m: usize) -> Vec<Vec<Cell>> {
    let t = zonal_to_monomial_coeffs_exact(k, m);
    let names: Vec<String> = t.partitions().iter().map(partition_label).collect();
    let mut rows = Vec::new();
    for i in 0..t.len() {
        for (j, c) in t.row(i).iter().enumerate() {
            if *c.numer() == 0.into() {
                continue;
            }
            rows.push(vec![
                Cell::from(names[i].clone()),
                Cell::from(names[j].clone()),
                Cell::from(format!("{}/{}", c.numer(), c.denom())),
            ]);
        }
    }
    rows
}

pub const COEFF_COLUMNS: [&str; 3] = ["partition", "weight", "q"];

/// `q_λ(a, c)` for every partition of weight at most `degree` with at most
/// `m` parts.
pub fn coeff_rows(params: HypParams, degree: usize, m: usize) -> Result<Vec<Vec<Cell>>> {
    let mut rows = Vec::new();
    for k in 0..=degree {
        for lambda in partitions_of(k, m) {
            let q = q_coefficient(&lambda, params)?;
            rows.push(vec![
                Cell::from(partition_label(&lambda)),
                Cell::from(k),
                Cell::from(q),
            ]);
        }
    }
    Ok(rows)
}

/// Column names of a `2^m × 2^m` matrix dump: `row`, then one per subset.
pub fn matrix_columns(m: usize) -> Vec<String> {
    let mut cols = vec!["row".to_string()];
    cols.extend((0..1usize << m).map(subset_label));
    cols
}

/// Dense `Pᵢ(y)`, `i` 0-based.
pub fn pfaffian_rows(i: usize, y: &[f64], params: HypParams) -> Result<Vec<Vec<Cell>>> {
    let point = EvaluationPoint::new(y.to_vec())?;
    let mat = pfaffian_matrix(i, &point, params)?;
    Ok(mat
        .into_iter()
        .enumerate()
        .map(|(r, row)| {
            let mut cells = vec![Cell::from(subset_label(r))];
            cells.extend(row.into_iter().map(Cell::from));
            cells
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(
            partition_label(&Partition::new(vec![3, 1, 1]).unwrap()),
            "3.1.1"
        );
        assert_eq!(partition_label(&Partition::empty()), "0");
        assert_eq!(subset_label(0), "F");
        assert_eq!(subset_label(0b101), "d1.3");
    }

    #[test]
    fn weight_two_table() {
        let rows = zonal_rows(2, 2);
        let text: Vec<String> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        assert_eq!(text, vec!["2 2 1/1", "2 1.1 2/3", "1.1 1.1 4/3"]);
    }
}
