use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{decide_with, Formula, QeConfig, Term, Var};
use crate::error::{Error, Result};
use crate::semilinear::{LinearSet, SemilinearSet};

/// Boolean combination of semilinear sets of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Set(SemilinearSet),
    Union(Box<SetExpr>, Box<SetExpr>),
    Inter(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
}

impl SetExpr {
    pub fn set(s: SemilinearSet) -> SetExpr {
        SetExpr::Set(s)
    }

    pub fn union(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Inter(Box::new(a), Box::new(b))
    }

    pub fn diff(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Diff(Box::new(a), Box::new(b))
    }

    pub fn complement(a: SetExpr) -> SetExpr {
        SetExpr::Complement(Box::new(a))
    }

    /// Common dimension of the sets involved.
    pub fn dim(&self) -> Result<usize> {
        match self {
            SetExpr::Set(s) => Ok(s.dim()),
            SetExpr::Complement(a) => a.dim(),
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => {
                let (da, db) = (a.dim()?, b.dim()?);
                if da != db {
                    return Err(Error::DimensionMismatch { expected: da, found: db });
                }
                Ok(da)
            }
        }
    }

    /// Formula in the free variables `vars` defining the set.
    pub fn to_formula(&self, vars: &[Var]) -> Result<Formula> {
        Ok(match self {
            SetExpr::Set(s) => from_semilinear(s, vars)?,
            SetExpr::Union(a, b) => Formula::or(Vec::from([a.to_formula(vars)?, b.to_formula(vars)?])),
            SetExpr::Inter(a, b) => Formula::and(Vec::from([a.to_formula(vars)?, b.to_formula(vars)?])),
            SetExpr::Diff(a, b) => {
                Formula::and(Vec::from([a.to_formula(vars)?, Formula::not(b.to_formula(vars)?)]))
            }
            SetExpr::Complement(a) => Formula::not(a.to_formula(vars)?),
        })
    }
}

/// `⋁ over components L(c; P) of ∃n ≥ 0: ⋀ᵢ xᵢ = cᵢ + Σⱼ nⱼ·pⱼᵢ`; the
/// multipliers use variables above every variable in `vars`.
pub fn from_semilinear(s: &SemilinearSet, vars: &[Var]) -> Result<Formula> {
    if vars.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: vars.len() });
    }
    let first_free = vars.iter().map(|v| v.0 + 1).max().unwrap_or(0);
    let mut disjuncts = Vec::new();
    for c in s.components() {
        let ns: Vec<Var> = (0..c.periods().len() as u32).map(|j| Var(first_free + j)).collect();
        let mut atoms: Vec<Formula> = ns.iter().map(|n| Formula::Le(Term::var(*n).neg())).collect();
        for (i, x) in vars.iter().enumerate() {
            let mut rhs = Term::constant(c.base()[i].clone());
            for (n, p) in ns.iter().zip(c.periods()) {
                rhs = rhs.add(&Term::monomial(*n, p[i].clone()));
            }
            atoms.push(Formula::eq(&Term::var(*x), &rhs));
        }
        disjuncts.push(Formula::exists_all(&ns, Formula::and(atoms)));
    }
    Ok(Formula::or(disjuncts))
}

fn coordinates(r: usize) -> Vec<Var> {
    (0..r as u32).map(Var).collect()
}

/// Whether the set denoted by `e` is empty.
pub fn decide_empty(e: &SetExpr, cfg: &QeConfig) -> Result<bool> {
    let xs = coordinates(e.dim()?);
    let sentence = Formula::exists_all(&xs, e.to_formula(&xs)?);
    Ok(!decide_with(&sentence, cfg)?)
}

/// `S1 ⊆ S2`, as emptiness of `S1 ∖ S2`.
///
/// Components of `S1` that sit inside a single component of `S2` are dropped
/// first: `L(c; P) ⊆ L(c'; P')` whenever `c ∈ L(c'; P')` and every period in
/// `P` lies in the monoid spanned by `P'`.
pub fn decide_inclusion(s1: &SemilinearSet, s2: &SemilinearSet, cfg: &QeConfig) -> Result<bool> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch { expected: s1.dim(), found: s2.dim() });
    }
    let mut rest = Vec::new();
    for l in s1.components() {
        if !covered(l, s2)? {
            rest.push(l.clone());
        }
    }
    if rest.is_empty() {
        return Ok(true);
    }
    for l in &rest {
        if escapes(l, s2, 3)? {
            return Ok(false);
        }
    }
    let s1 = SemilinearSet::new(s1.dim(), rest)?;
    decide_empty(&SetExpr::diff(SetExpr::set(s1), SetExpr::set(s2.clone())), cfg)
}

/// Whether some `c + Σ nᵢpᵢ` with `Σ nᵢ ≤ steps` lies outside `s`.
fn escapes(l: &LinearSet, s: &SemilinearSet, steps: usize) -> Result<bool> {
    let mut frontier = alloc::vec![l.base().to_vec()];
    let mut seen = alloc::collections::BTreeSet::new();
    for round in 0..=steps {
        let mut next = Vec::new();
        for v in frontier {
            if !seen.insert(v.clone()) {
                continue;
            }
            if !s.member(&v)? {
                return Ok(true);
            }
            if round < steps {
                for p in l.periods() {
                    next.push(v.iter().zip(p).map(|(a, b)| a + b).collect());
                }
            }
        }
        frontier = next;
    }
    Ok(false)
}

fn covered(l: &LinearSet, s: &SemilinearSet) -> Result<bool> {
    let zero = alloc::vec![BigInt::from(0); l.dim()];
    for m in s.components() {
        if !SemilinearSet::from_linear(m.clone()).member(l.base())? {
            continue;
        }
        let monoid = SemilinearSet::from_linear(LinearSet::new(zero.clone(), m.periods().to_vec())?);
        let mut all = true;
        for p in l.periods() {
            if !monoid.member(p)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn decide_equal(s1: &SemilinearSet, s2: &SemilinearSet, cfg: &QeConfig) -> Result<bool> {
    Ok(decide_inclusion(s1, s2, cfg)? && decide_inclusion(s2, s1, cfg)?)
}

/// Whether `v` lies in the complement of `s`, decided on `¬φ_S(v)`.
pub fn member_complement(s: &SemilinearSet, v: &[BigInt], cfg: &QeConfig) -> Result<bool> {
    if v.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: v.len() });
    }
    let xs = coordinates(s.dim());
    let mut phi = from_semilinear(s, &xs)?;
    for (x, value) in xs.iter().zip(v) {
        phi = phi.substitute(*x, &Term::constant(value.clone()));
    }
    decide_with(&Formula::not(phi), cfg)
}
