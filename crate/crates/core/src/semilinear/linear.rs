use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// `L(c; P) = {c + Σ nᵢpᵢ : nᵢ ∈ ℕ}`.
///
/// Periods are kept sorted and free of zeros, duplicates, and positive
/// multiples of other periods.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearSet {
    base: Vec<BigInt>,
    periods: Vec<Vec<BigInt>>,
}

impl LinearSet {
    pub fn new(base: Vec<BigInt>, periods: Vec<Vec<BigInt>>) -> Result<LinearSet> {
        let dim = base.len();
        if let Some(p) = periods.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        Ok(LinearSet { base, periods: canonical_periods(periods) })
    }

    pub fn from_i64(base: &[i64], periods: &[&[i64]]) -> LinearSet {
        let base: Vec<BigInt> = base.iter().map(|&x| x.into()).collect();
        let periods = periods.iter().map(|p| p.iter().map(|&x| x.into()).collect()).collect();
        LinearSet::new(base, periods).expect("periods match the base dimension")
    }

    /// `{c}`
    pub fn point(c: Vec<BigInt>) -> LinearSet {
        LinearSet { base: c, periods: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[BigInt] {
        &self.base
    }

    pub fn periods(&self) -> &[Vec<BigInt>] {
        &self.periods
    }

    /// `L(c+c'; P ∪ P')`
    pub fn sum(&self, other: &LinearSet) -> LinearSet {
        let base = add(&self.base, &other.base);
        let mut periods = self.periods.clone();
        periods.extend(other.periods.iter().cloned());
        LinearSet { base, periods: canonical_periods(periods) }
    }

    /// Whether this set is contained in `other` for the cheap syntactic
    /// reason `P ⊆ P'` and `c ∈ c' + ({0} ∪ P')`.
    fn obviously_within(&self, other: &LinearSet) -> bool {
        if !self.periods.iter().all(|p| other.periods.binary_search(p).is_ok()) {
            return false;
        }
        if self.base == other.base {
            return true;
        }
        let diff: Vec<BigInt> = self.base.iter().zip(&other.base).map(|(a, b)| a - b).collect();
        other.periods.binary_search(&diff).is_ok()
    }
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Sorted periods without zeros, duplicates or multiples `k·p` (`k ≥ 2`) of
/// another period `p`.
fn canonical_periods(mut periods: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    periods.retain(|p| p.iter().any(|x| !x.is_zero()));
    periods.sort();
    periods.dedup();
    let primitive_multiple = |q: &[BigInt], p: &[BigInt]| -> bool {
        // q = k·p for an integer k ≥ 2
        let mut k: Option<BigInt> = None;
        for (a, b) in q.iter().zip(p) {
            if b.is_zero() {
                if !a.is_zero() {
                    return false;
                }
                continue;
            }
            let (quot, rem) = a.div_rem(b);
            if !rem.is_zero() || !quot.is_positive() {
                return false;
            }
            match &k {
                Some(k0) if *k0 != quot => return false,
                _ => k = Some(quot),
            }
        }
        k.is_some_and(|k| k > BigInt::from(1))
    };
    let keep: Vec<bool> = periods
        .iter()
        .map(|q| !periods.iter().any(|p| p != q && primitive_multiple(q, p)))
        .collect();
    periods.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

/// Finite union of linear sets of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearSet {
    dim: usize,
    components: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn empty(dim: usize) -> SemilinearSet {
        SemilinearSet { dim, components: Vec::new() }
    }

    /// `{0}`
    pub fn zero(dim: usize) -> SemilinearSet {
        SemilinearSet::from_linear(LinearSet::point(vec![BigInt::zero(); dim]))
    }

    pub fn from_linear(l: LinearSet) -> SemilinearSet {
        SemilinearSet { dim: l.dim(), components: vec![l] }
    }

    pub fn new(dim: usize, components: Vec<LinearSet>) -> Result<SemilinearSet> {
        if let Some(c) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
        }
        Ok(SemilinearSet { dim, components }.simplified())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    pub fn is_empty_syntactically(&self) -> bool {
        self.components.is_empty()
    }

    fn check_dim(&self, other: &SemilinearSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Sorts components and drops duplicates and components obviously
    /// contained in another one.
    fn simplified(mut self) -> SemilinearSet {
        self.components.sort();
        self.components.dedup();
        let n = self.components.len();
        let mut removed = vec![false; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && !removed[j] && self.components[i].obviously_within(&self.components[j]) {
                    removed[i] = true;
                    break;
                }
            }
        }
        let components = self
            .components
            .into_iter()
            .zip(removed)
            .filter_map(|(c, r)| (!r).then_some(c))
            .collect();
        SemilinearSet { dim: self.dim, components }
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        self.check_dim(other)?;
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Ok(SemilinearSet { dim: self.dim, components }.simplified())
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        self.check_dim(other)?;
        let mut components = Vec::new();
        for a in &self.components {
            for b in &other.components {
                components.push(a.sum(b));
            }
        }
        Ok(SemilinearSet { dim: self.dim, components }.simplified())
    }

    /// Submonoid generated by the set: `(∪ Lᵢ)* = Σ Lᵢ*` with
    /// `L(c; P)* = {0} ∪ L(c; P ∪ {c})`.
    pub fn star(&self) -> SemilinearSet {
        let mut acc = SemilinearSet::zero(self.dim);
        for l in &self.components {
            let mut periods = l.periods.clone();
            periods.push(l.base.clone());
            let parts = if l.periods.is_empty() {
                // {c}* = L(0; c)
                vec![LinearSet { base: vec![BigInt::zero(); self.dim], periods: canonical_periods(periods) }]
            } else {
                let grown = LinearSet { base: l.base.clone(), periods: canonical_periods(periods) };
                let mut parts = vec![grown];
                if l.base.iter().any(|x| !x.is_zero()) {
                    parts.push(LinearSet::point(vec![BigInt::zero(); self.dim]));
                }
                parts
            };
            let ls = SemilinearSet { dim: self.dim, components: parts }.simplified();
            acc = acc.sum(&ls).expect("same dimension");
        }
        acc
    }

    /// True iff the set is finite: no component has a period.
    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.periods.is_empty())
    }
}

fn write_vec(f: &mut fmt::Formatter<'_>, v: &[BigInt]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

impl fmt::Display for LinearSet {
    /// `L((1,1); (2,1), (0,1))`, or `L((1,1))` without periods.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("L(")?;
        write_vec(f, &self.base)?;
        for (i, p) in self.periods.iter().enumerate() {
            f.write_str(if i == 0 { "; " } else { ", " })?;
            write_vec(f, p)?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
