//! Semilinear sets: the rational subsets of `ℤʳ`, with exact union, sum,
//! star, intersection and membership.

mod hilbert;
mod linear;

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use hilbert::{hilbert_basis, is_solvable, solve, DiophantineSolutionSet, HilbertConfig};
pub use linear::{LinearSet, SemilinearSet};

use crate::automata::GroupAutomaton;
use crate::error::{Error, Result};

/// Largest number of lattice points `enumerate_box` scans densely per
/// component before switching to one membership test per box point.
pub const DENSE_REGION_LIMIT: u64 = 1 << 23;

/// Converts to `i64`, refusing `i64::MIN` so that negation cannot overflow.
fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().filter(|&v| v != i64::MIN).ok_or_else(|| Error::InstanceTooLarge("integer exceeds 64 bits".into()))
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(to_i64).collect()
}

/// `r × k` matrix whose columns are the given vectors.
fn column_matrix<'a, I>(rows: usize, cols: I) -> Result<Vec<Vec<i64>>>
where
    I: IntoIterator<Item = (&'a [BigInt], bool)>,
{
    let mut a = vec![Vec::new(); rows];
    for (col, negate) in cols {
        for (i, x) in col.iter().enumerate() {
            let x = to_i64(x)?;
            a[i].push(if negate { -x } else { x });
        }
    }
    Ok(a)
}

impl SemilinearSet {
    /// Exact intersection with the default solver limits.
    pub fn intersect(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        self.intersect_with(other, &HilbertConfig::default())
    }

    /// Exact intersection. For components `L(c; P)` and `L(c'; P')` the
    /// system `P·n − P'·m = c' − c` is solved over ℕ; each minimal solution
    /// `σ` gives a base `c + P·σₙ` and each homogeneous basis vector `β`
    /// a period `P·βₙ`.
    pub fn intersect_with(&self, other: &SemilinearSet, cfg: &HilbertConfig) -> Result<SemilinearSet> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let r = self.dim();
        let mut out = Vec::new();
        for a in self.components() {
            for b in other.components() {
                let k = a.periods().len();
                let cols = a
                    .periods()
                    .iter()
                    .map(|p| (p.as_slice(), false))
                    .chain(b.periods().iter().map(|p| (p.as_slice(), true)));
                let matrix = column_matrix(r, cols)?;
                let rhs: Vec<i64> = to_i64_vec(
                    &b.base().iter().zip(a.base()).map(|(x, y)| x - y).collect::<Vec<_>>(),
                )?;
                if matrix.iter().all(Vec::is_empty) {
                    if rhs.iter().all(|&x| x == 0) {
                        out.push(a.clone());
                    }
                    continue;
                }
                let sol = solve(&matrix, &rhs, cfg)?;
                let combine = |coeffs: &[u64]| -> Vec<BigInt> {
                    let mut v = vec![BigInt::from(0); r];
                    for (n, p) in coeffs[..k].iter().zip(a.periods()) {
                        for (vi, pi) in v.iter_mut().zip(p) {
                            *vi += pi * BigInt::from(*n);
                        }
                    }
                    v
                };
                let periods: Vec<Vec<BigInt>> = sol.homogeneous_basis.iter().map(|b| combine(b)).collect();
                for s in &sol.particulars {
                    let shift = combine(s);
                    let base = a.base().iter().zip(&shift).map(|(x, y)| x + y).collect();
                    out.push(LinearSet::new(base, periods.clone())?);
                }
            }
        }
        SemilinearSet::new(r, out)
    }

    /// Membership with the default solver limits.
    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        self.member_with(v, &HilbertConfig::default())
    }

    pub fn member_with(&self, v: &[BigInt], cfg: &HilbertConfig) -> Result<bool> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        for c in self.components() {
            let rhs: Vec<BigInt> = v.iter().zip(c.base()).map(|(x, y)| x - y).collect();
            if c.periods().is_empty() {
                if rhs.iter().all(|x| *x == BigInt::from(0)) {
                    return Ok(true);
                }
                continue;
            }
            let matrix = column_matrix(self.dim(), c.periods().iter().map(|p| (p.as_slice(), false)))?;
            if is_solvable(&matrix, &to_i64_vec(&rhs)?, cfg)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All members inside the box `[lo, hi]`, sorted lexicographically.
    ///
    /// By the Steinitz lemma, the period steps leading from a base `c` to a
    /// member `v` can be ordered so that every partial sum stays within
    /// `r·max|p|` of the segment `[c, v]`. Each component is therefore
    /// explored by breadth-first search inside the bounding box of the box
    /// and `c`, widened by twice that margin. Regions too large to scan
    /// densely fall back to one membership test per box point.
    pub fn enumerate_box(&self, lo: &[BigInt], hi: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
        let r = self.dim();
        for v in [lo, hi] {
            if v.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: v.len() });
            }
        }
        let lo = to_i64_vec(lo)?;
        let hi = to_i64_vec(hi)?;
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(Vec::new());
        }
        let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
        for c in self.components() {
            let base = to_i64_vec(c.base())?;
            let periods: Vec<Vec<i64>> = c.periods().iter().map(|p| to_i64_vec(p)).collect::<Result<_>>()?;
            match dense_region(&lo, &hi, &base, &periods) {
                Some(region) => region.explore(&base, &periods, &lo, &hi, &mut found),
                None => {
                    let single = SemilinearSet::from_linear(c.clone());
                    let cfg = HilbertConfig { max_rows: r.max(6), max_cols: periods.len().max(12) };
                    for_each_point(&lo, &hi, |v| {
                        let big: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
                        if single.member_with(&big, &cfg)? {
                            found.insert(v.to_vec());
                        }
                        Ok(())
                    })?;
                }
            }
        }
        Ok(found.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect())
    }

    /// Exact semilinear description of the set accepted by an automaton over
    /// `ℤʳ`, by state elimination in the semiring (∪, +, *).
    pub fn from_automaton(aut: &GroupAutomaton) -> Result<SemilinearSet> {
        let r = aut.group().spec().abelian_rank().ok_or(Error::NotAbelian)?;
        let aut = aut.trim();
        let n = aut.num_states();
        let (start, end) = (n, n + 1);
        let mut table: BTreeMap<(usize, usize), SemilinearSet> = BTreeMap::new();
        let put = |table: &mut BTreeMap<(usize, usize), SemilinearSet>, key, set: SemilinearSet| {
            let merged = match table.remove(&key) {
                Some(old) => old.union(&set).expect("same dimension"),
                None => set,
            };
            table.insert(key, merged);
        };
        for e in aut.edges() {
            let v = e.label.as_abelian().ok_or(Error::NotAbelian)?.to_vec();
            put(&mut table, (e.source, e.target), SemilinearSet::from_linear(LinearSet::point(v)));
        }
        put(&mut table, (start, aut.initial()), SemilinearSet::zero(r));
        for &t in aut.terminals() {
            put(&mut table, (t, end), SemilinearSet::zero(r));
        }

        let mut remaining: BTreeSet<usize> = (0..n).collect();
        while !remaining.is_empty() {
            // Eliminate the state with the fewest through-paths first.
            let s = *remaining
                .iter()
                .min_by_key(|&&s| {
                    let ins = table.keys().filter(|(p, q)| *q == s && *p != s).count();
                    let outs = table.keys().filter(|(p, q)| *p == s && *q != s).count();
                    (ins * outs, s)
                })
                .expect("nonempty");
            remaining.remove(&s);
            let looped = table.remove(&(s, s)).map(|l| l.star());
            let ins: Vec<(usize, SemilinearSet)> = table
                .iter()
                .filter(|((_, q), _)| *q == s)
                .map(|((p, _), set)| (*p, set.clone()))
                .collect();
            let outs: Vec<(usize, SemilinearSet)> = table
                .iter()
                .filter(|((p, _), _)| *p == s)
                .map(|((_, q), set)| (*q, set.clone()))
                .collect();
            table.retain(|(p, q), _| *p != s && *q != s);
            for (p, into) in &ins {
                let through = match &looped {
                    Some(l) => into.sum(l)?,
                    None => into.clone(),
                };
                for (q, out) in &outs {
                    put(&mut table, (*p, *q), through.sum(out)?);
                }
            }
        }
        Ok(table.remove(&(start, end)).unwrap_or_else(|| SemilinearSet::empty(r)))
    }
}

/// Dense bit grid over a box of `ℤʳ`.
struct Region {
    lo: Vec<i64>,
    extent: Vec<u64>,
}

fn dense_region(lo: &[i64], hi: &[i64], base: &[i64], periods: &[Vec<i64>]) -> Option<Region> {
    let r = lo.len() as i64;
    let max_norm = periods.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0) as i64;
    let margin = max_norm.checked_mul(2 * r)?;
    let mut rlo = Vec::with_capacity(lo.len());
    let mut extent = Vec::with_capacity(lo.len());
    let mut cells: u64 = 1;
    for i in 0..lo.len() {
        let a = lo[i].min(base[i]).checked_sub(margin)?;
        let b = hi[i].max(base[i]).checked_add(margin)?;
        let w = (b.checked_sub(a)? as u64).checked_add(1)?;
        cells = cells.checked_mul(w)?;
        rlo.push(a);
        extent.push(w);
    }
    (cells <= DENSE_REGION_LIMIT).then_some(Region { lo: rlo, extent })
}

impl Region {
    fn index(&self, v: &[i64]) -> Option<usize> {
        let mut idx: u64 = 0;
        for ((x, lo), w) in v.iter().zip(&self.lo).zip(&self.extent) {
            let off = x.checked_sub(*lo)?;
            if off < 0 || off as u64 >= *w {
                return None;
            }
            idx = idx * w + off as u64;
        }
        Some(idx as usize)
    }

    fn explore(&self, base: &[i64], periods: &[Vec<i64>], lo: &[i64], hi: &[i64], found: &mut BTreeSet<Vec<i64>>) {
        let cells: u64 = self.extent.iter().product();
        let mut seen = vec![0u64; (cells as usize).div_ceil(64)];
        let mut queue = VecDeque::new();
        if let Some(i) = self.index(base) {
            seen[i / 64] |= 1 << (i % 64);
            queue.push_back(base.to_vec());
        }
        while let Some(v) = queue.pop_front() {
            if v.iter().zip(lo).zip(hi).all(|((x, a), b)| a <= x && x <= b) {
                found.insert(v.clone());
            }
            for p in periods {
                let w: Vec<i64> = v.iter().zip(p).map(|(x, y)| x.saturating_add(*y)).collect();
                if let Some(i) = self.index(&w) {
                    if seen[i / 64] & (1 << (i % 64)) == 0 {
                        seen[i / 64] |= 1 << (i % 64);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
}

fn for_each_point<F>(lo: &[i64], hi: &[i64], mut visit: F) -> Result<()>
where
    F: FnMut(&[i64]) -> Result<()>,
{
    let mut v = lo.to_vec();
    loop {
        visit(&v)?;
        let mut i = v.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if v[i] < hi[i] {
                v[i] += 1;
                break;
            }
            v[i] = lo[i];
        }
    }
}
