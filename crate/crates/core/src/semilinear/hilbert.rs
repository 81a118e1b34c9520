//! Non-negative integer solutions of linear Diophantine systems, by the
//! completion procedure of Contejean and Devie.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Size limits for the solver. The search is exponential in the worst case,
/// so larger systems are refused instead of truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertConfig {
    pub max_rows: usize,
    pub max_cols: usize,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        HilbertConfig { max_rows: 6, max_cols: 12 }
    }
}

/// All solutions of `A·n = b` over ℕ: `particulars + ℕ·homogeneous_basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSolutionSet {
    /// Minimal solutions of `A·n = b`.
    pub particulars: Vec<Vec<u64>>,
    /// Minimal solutions of `A·n = 0` other than `0`.
    pub homogeneous_basis: Vec<Vec<u64>>,
}

/// Minimal non-zero ℕ-solutions of `A·n = 0`; every ℕ-solution is an
/// ℕ-combination of them. Sorted lexicographically.
pub fn hilbert_basis(a: &[Vec<i64>], cfg: &HilbertConfig) -> Result<Vec<Vec<u64>>> {
    let cols = columns(a)?;
    check_size(a.len(), cols, cfg)?;
    let system = System::new(a, cols, None)?;
    let mut out: Vec<Vec<u64>> = system.complete(false)?;
    out.sort();
    Ok(out)
}

/// Solution set of `A·n = b` over ℕ.
pub fn solve(a: &[Vec<i64>], b: &[i64], cfg: &HilbertConfig) -> Result<DiophantineSolutionSet> {
    let cols = columns(a)?;
    check_size(a.len(), cols, cfg)?;
    let system = System::new(a, cols, Some(b))?;
    let mut particulars = Vec::new();
    let mut homogeneous_basis = Vec::new();
    for mut v in system.complete(false)? {
        let z = v.pop().expect("extra column present");
        if z == 1 {
            particulars.push(v);
        } else {
            homogeneous_basis.push(v);
        }
    }
    particulars.sort();
    homogeneous_basis.sort();
    Ok(DiophantineSolutionSet { particulars, homogeneous_basis })
}

/// Whether `A·n = b` has an ℕ-solution.
pub fn is_solvable(a: &[Vec<i64>], b: &[i64], cfg: &HilbertConfig) -> Result<bool> {
    let cols = columns(a)?;
    check_size(a.len(), cols, cfg)?;
    if b.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    let system = System::new(a, cols, Some(b))?;
    Ok(!system.complete(true)?.is_empty())
}

fn columns(a: &[Vec<i64>]) -> Result<usize> {
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != cols) {
        return Err(Error::InvalidParameter("matrix rows differ in length".into()));
    }
    Ok(cols)
}

fn check_size(rows: usize, cols: usize, cfg: &HilbertConfig) -> Result<()> {
    if rows > cfg.max_rows || cols > cfg.max_cols {
        return Err(Error::InstanceTooLarge(format!(
            "{rows}×{cols} system exceeds the {}×{} limit",
            cfg.max_rows, cfg.max_cols
        )));
    }
    Ok(())
}

fn overflow() -> Error {
    Error::InstanceTooLarge("intermediate value exceeds 64 bits".into())
}

/// The system as columns; an inhomogeneous system `A·n = b` is handled as
/// `[A | −b]·(n, z) = 0` with `z ≤ 1`.
struct System {
    cols: Vec<Vec<i64>>,
    /// Index of the `−b` column, whose variable is capped at 1.
    capped: Option<usize>,
}

impl System {
    fn new(a: &[Vec<i64>], ncols: usize, b: Option<&[i64]>) -> Result<System> {
        let rows = a.len();
        let mut cols: Vec<Vec<i64>> = (0..ncols).map(|j| a.iter().map(|row| row[j]).collect()).collect();
        let mut capped = None;
        if let Some(b) = b {
            if b.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: b.len() });
            }
            capped = Some(cols.len());
            cols.push(b.iter().map(|x| x.checked_neg().ok_or_else(overflow)).collect::<Result<_>>()?);
        }
        Ok(System { cols, capped })
    }

    /// Minimal non-zero solutions (with the capped variable ≤ 1). With
    /// `first_capped`, stops at the first solution using the capped column.
    fn complete(&self, first_capped: bool) -> Result<Vec<Vec<u64>>> {
        let n = self.cols.len();
        let rows = self.cols.first().map_or(0, Vec::len);
        let mut basis: Vec<Vec<u64>> = Vec::new();
        // Frontier entries: (vector, A·vector).
        let mut frontier: BTreeSet<(Vec<u64>, Vec<i64>)> = (0..n)
            .map(|j| {
                let mut v = vec![0u64; n];
                v[j] = 1;
                (v, self.cols[j].clone())
            })
            .collect();
        while !frontier.is_empty() {
            let mut open = Vec::new();
            for (v, av) in frontier {
                if av.iter().all(|&x| x == 0) {
                    if first_capped && self.capped.is_some_and(|c| v[c] == 1) {
                        return Ok(vec![v]);
                    }
                    basis.push(v);
                } else {
                    open.push((v, av));
                }
            }
            let mut next = BTreeSet::new();
            for (v, av) in &open {
                for j in 0..n {
                    if self.capped == Some(j) && v[j] >= 1 {
                        continue;
                    }
                    let mut dot: i64 = 0;
                    for i in 0..rows {
                        let t = av[i].checked_mul(self.cols[j][i]).ok_or_else(overflow)?;
                        dot = dot.checked_add(t).ok_or_else(overflow)?;
                    }
                    if dot >= 0 {
                        continue;
                    }
                    let mut w = v.clone();
                    w[j] += 1;
                    if basis.iter().any(|b| dominates(&w, b)) {
                        continue;
                    }
                    let aw = av
                        .iter()
                        .zip(&self.cols[j])
                        .map(|(x, y)| x.checked_add(*y).ok_or_else(overflow))
                        .collect::<Result<Vec<_>>>()?;
                    next.insert((w, aw));
                }
            }
            frontier = next;
        }
        if first_capped {
            return Ok(Vec::new());
        }
        Ok(basis)
    }
}

/// `w ≥ b` componentwise.
fn dominates(w: &[u64], b: &[u64]) -> bool {
    w.iter().zip(b).all(|(x, y)| x >= y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn basis(rows: &[&[i64]]) -> Vec<Vec<u64>> {
        let a: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        hilbert_basis(&a, &HilbertConfig::default()).unwrap()
    }

    #[test]
    fn small_bases() {
        assert_eq!(basis(&[&[1, 1, -2]]), vec![vec![0, 2, 1], vec![1, 1, 1], vec![2, 0, 1]]);
        assert_eq!(basis(&[&[1, -1]]), vec![vec![1, 1]]);
        assert_eq!(basis(&[&[2, -3]]), vec![vec![3, 2]]);
        assert!(basis(&[&[1, 1]]).is_empty());
    }

    #[test]
    fn inhomogeneous() {
        let a = vec![vec![2, 3]];
        let cfg = HilbertConfig::default();
        assert!(!is_solvable(&a, &[1], &cfg).unwrap());
        assert!(is_solvable(&a, &[7], &cfg).unwrap());
        let sol = solve(&a, &[7], &cfg).unwrap();
        assert_eq!(sol.particulars, vec![vec![2, 1]]);
        assert!(sol.homogeneous_basis.is_empty());
    }

    #[test]
    fn size_cap() {
        let a = vec![vec![1; 13]];
        let err = hilbert_basis(&a, &HilbertConfig::default()).unwrap_err();
        assert!(err.to_string().starts_with("instance too large"));
    }
}
