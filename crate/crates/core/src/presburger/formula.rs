use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Term, Var};
use crate::error::{Error, Result};

/// First-order formula over the integers with linear atoms and
/// divisibility.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    /// `t ≤ 0`
    Le(Term),
    /// `t = 0`
    Eq(Term),
    /// `d | t` with `d ≥ 2`
    Divides(BigInt, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    /// `a ≤ b`
    pub fn le(a: &Term, b: &Term) -> Formula {
        Formula::Le(a.sub(b))
    }

    /// `a < b`
    pub fn lt(a: &Term, b: &Term) -> Formula {
        Formula::Le(a.sub(b).add_constant(&BigInt::one()))
    }

    /// `a = b`
    pub fn eq(a: &Term, b: &Term) -> Formula {
        Formula::Eq(a.sub(b))
    }

    /// `d | t`; `d = ±1` gives `true` and `d = 0` gives `t = 0`.
    pub fn divides(d: impl Into<BigInt>, t: Term) -> Formula {
        let d = d.into().abs();
        if d.is_zero() {
            Formula::Eq(t)
        } else if d.is_one() {
            Formula::True
        } else {
            Formula::Divides(d, t)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(items: Vec<Formula>) -> Formula {
        Formula::And(items)
    }

    pub fn or(items: Vec<Formula>) -> Formula {
        Formula::Or(items)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Or(Vec::from([Formula::not(a), b]))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    /// `∃v₁ … ∃vₙ body`
    pub fn exists_all(vars: &[Var], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::exists(*v, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Le(t) | Formula::Eq(t) | Formula::Divides(_, t) => {
                out.extend(t.vars().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(items) | Formula::Or(items) => {
                for f in items {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let fresh = bound.insert(*v);
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
        }
    }

    /// Every variable occurring, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Le(t) | Formula::Eq(t) | Formula::Divides(_, t) => out.extend(t.vars()),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(items) | Formula::Or(items) => {
                for g in items {
                    g.visit(f);
                }
            }
            _ => {}
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn mentions(&self, v: Var) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if let Formula::Le(t) | Formula::Eq(t) | Formula::Divides(_, t) = f {
                found |= t.mentions(v);
            }
        });
        found
    }

    /// Applies `f` to every atom of a quantifier-free formula, keeping the
    /// connectives.
    pub(crate) fn map_atoms<F>(&self, f: &mut F) -> Formula
    where
        F: FnMut(&Formula) -> Formula,
    {
        match self {
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(items) => Formula::And(items.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(items) => Formula::Or(items.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Exists(v, g) => Formula::exists(*v, g.map_atoms(f)),
            Formula::Forall(v, g) => Formula::forall(*v, g.map_atoms(f)),
            atom => f(atom),
        }
    }

    /// Replaces the free variable `v` by `value`. Bound variables are
    /// assumed distinct from the variables of `value`.
    pub fn substitute(&self, v: Var, value: &Term) -> Formula {
        match self {
            Formula::Exists(w, _) | Formula::Forall(w, _) if *w == v => self.clone(),
            Formula::Exists(w, g) => Formula::exists(*w, g.substitute(v, value)),
            Formula::Forall(w, g) => Formula::forall(*w, g.substitute(v, value)),
            Formula::Not(g) => Formula::not(g.substitute(v, value)),
            Formula::And(items) => Formula::And(items.iter().map(|g| g.substitute(v, value)).collect()),
            Formula::Or(items) => Formula::Or(items.iter().map(|g| g.substitute(v, value)).collect()),
            Formula::Le(t) => Formula::Le(t.substitute(v, value)),
            Formula::Eq(t) => Formula::Eq(t.substitute(v, value)),
            Formula::Divides(d, t) => Formula::Divides(d.clone(), t.substitute(v, value)),
            Formula::True | Formula::False => self.clone(),
        }
    }

    /// Renames every bound variable to a fresh one, so that bound variables
    /// are pairwise distinct and distinct from the free variables.
    pub fn rename_apart(&self) -> Formula {
        let mut next = self.all_vars().last().map_or(0, |v| v.0 + 1);
        self.rename_bound(&mut next, &BTreeMap::new())
    }

    fn rename_bound(&self, next: &mut u32, map: &BTreeMap<Var, Var>) -> Formula {
        let rename_term = |t: &Term| {
            let mut out = t.clone();
            for (from, to) in map {
                out = out.rename(*from, *to);
            }
            out
        };
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Le(t) => Formula::Le(rename_term(t)),
            Formula::Eq(t) => Formula::Eq(rename_term(t)),
            Formula::Divides(d, t) => Formula::Divides(d.clone(), rename_term(t)),
            Formula::Not(g) => Formula::not(g.rename_bound(next, map)),
            Formula::And(items) => Formula::And(items.iter().map(|g| g.rename_bound(next, map)).collect()),
            Formula::Or(items) => Formula::Or(items.iter().map(|g| g.rename_bound(next, map)).collect()),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let fresh = Var(*next);
                *next += 1;
                let mut inner = map.clone();
                inner.insert(*v, fresh);
                let body = Box::new(g.rename_bound(next, &inner));
                match self {
                    Formula::Exists(..) => Formula::Exists(fresh, body),
                    _ => Formula::Forall(fresh, body),
                }
            }
        }
    }

    /// Truth value of a quantifier-free formula; errors on unassigned
    /// variables or quantifiers.
    pub fn eval<F>(&self, value: &F) -> Result<bool>
    where
        F: Fn(Var) -> Option<BigInt>,
    {
        let term = |t: &Term| t.eval(|v| value(v)).ok_or(Error::FreeVariables);
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Le(t) => !term(t)?.is_positive(),
            Formula::Eq(t) => term(t)?.is_zero(),
            Formula::Divides(d, t) => term(t)?.is_multiple_of(d),
            Formula::Not(g) => !g.eval(value)?,
            Formula::And(items) => {
                for g in items {
                    if !g.eval(value)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(items) => {
                for g in items {
                    if g.eval(value)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Exists(..) | Formula::Forall(..) => {
                return Err(Error::InvalidParameter("quantified formula cannot be evaluated directly".into()))
            }
        })
    }

    /// Negation normal form: negations only in front of `=` and `|` atoms
    /// (`¬(t ≤ 0)` becomes `-t + 1 ≤ 0`), quantifiers kept.
    pub fn nnf(&self) -> Formula {
        self.nnf_signed(false)
    }

    fn nnf_signed(&self, negated: bool) -> Formula {
        match (self, negated) {
            (Formula::True, false) | (Formula::False, true) => Formula::True,
            (Formula::True, true) | (Formula::False, false) => Formula::False,
            (Formula::Le(t), true) => Formula::Le(t.neg().add_constant(&BigInt::one())),
            (Formula::Eq(_) | Formula::Divides(..), true) => Formula::not(self.clone()),
            (Formula::Le(_) | Formula::Eq(_) | Formula::Divides(..), false) => self.clone(),
            (Formula::Not(g), _) => g.nnf_signed(!negated),
            (Formula::And(items), false) | (Formula::Or(items), true) => {
                Formula::And(items.iter().map(|g| g.nnf_signed(negated)).collect())
            }
            (Formula::Or(items), false) | (Formula::And(items), true) => {
                Formula::Or(items.iter().map(|g| g.nnf_signed(negated)).collect())
            }
            (Formula::Exists(v, g), false) | (Formula::Forall(v, g), true) => {
                Formula::exists(*v, g.nnf_signed(negated))
            }
            (Formula::Forall(v, g), false) | (Formula::Exists(v, g), true) => {
                Formula::forall(*v, g.nnf_signed(negated))
            }
        }
    }

    /// Equivalent formula with ground atoms evaluated, atoms normalized by
    /// the gcd of their coefficients, connectives flattened and sorted, and
    /// duplicates removed.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Le(t) => simplify_le(t),
            Formula::Eq(t) => simplify_eq(t),
            Formula::Divides(d, t) => simplify_divides(d, t),
            Formula::Not(g) => match g.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(h) => *h,
                Formula::Le(t) => simplify_le(&t.neg().add_constant(&BigInt::one())),
                other => Formula::not(other),
            },
            Formula::And(items) => junction(items, true),
            Formula::Or(items) => junction(items, false),
            Formula::Exists(v, g) => match g.simplify() {
                body if !body.mentions(*v) => body,
                body => Formula::exists(*v, body),
            },
            Formula::Forall(v, g) => match g.simplify() {
                body if !body.mentions(*v) => body,
                body => Formula::forall(*v, body),
            },
        }
    }

    /// Top-level disjuncts.
    pub(crate) fn disjuncts(self) -> Vec<Formula> {
        match self {
            Formula::Or(items) => items,
            Formula::False => Vec::new(),
            other => Vec::from([other]),
        }
    }

    /// Top-level conjuncts.
    pub(crate) fn conjuncts(self) -> Vec<Formula> {
        match self {
            Formula::And(items) => items,
            Formula::True => Vec::new(),
            other => Vec::from([other]),
        }
    }
}

fn simplify_le(t: &Term) -> Formula {
    if t.is_constant() {
        return if t.constant_part().is_positive() { Formula::False } else { Formula::True };
    }
    let g = t.coeff_gcd();
    if g.is_one() {
        return Formula::Le(t.clone());
    }
    // Σ aᵢxᵢ + c ≤ 0  ⇔  Σ (aᵢ/g)xᵢ + ⌈c/g⌉ ≤ 0
    let c = t.constant_part();
    let ceil = -((-c).div_floor(&g));
    Formula::Le(t.with_constant(BigInt::zero()).div_exact(&g).with_constant(ceil))
}

fn simplify_eq(t: &Term) -> Formula {
    if t.is_constant() {
        return if t.constant_part().is_zero() { Formula::True } else { Formula::False };
    }
    let g = t.coeff_gcd();
    if !t.constant_part().is_multiple_of(&g) {
        return Formula::False;
    }
    let t = if g.is_one() { t.clone() } else { t.div_exact(&g) };
    Formula::Eq(if t.leading_sign_negative() { t.neg() } else { t })
}

fn simplify_divides(d: &BigInt, t: &Term) -> Formula {
    let t = t.reduce_mod(d);
    if t.is_constant() {
        return if t.constant_part().is_zero() { Formula::True } else { Formula::False };
    }
    let g = t.coeff_gcd().gcd(t.constant_part()).gcd(d);
    if g.is_one() {
        Formula::Divides(d.clone(), t)
    } else {
        let d = d / &g;
        if d.is_one() {
            Formula::True
        } else {
            Formula::Divides(d, t.div_exact(&g))
        }
    }
}

/// Simplified conjunction (`is_and`) or disjunction.
fn junction(items: &[Formula], is_and: bool) -> Formula {
    let (unit, absorbing) = if is_and { (Formula::True, Formula::False) } else { (Formula::False, Formula::True) };
    let mut out: Vec<Formula> = Vec::with_capacity(items.len());
    for item in items {
        let s = item.simplify();
        if s == absorbing {
            return absorbing;
        }
        if s == unit {
            continue;
        }
        match s {
            Formula::And(inner) if is_and => out.extend(inner),
            Formula::Or(inner) if !is_and => out.extend(inner),
            other => out.push(other),
        }
    }
    out.sort();
    out.dedup();
    match out.len() {
        0 => unit,
        1 => out.pop().expect("one item"),
        _ if is_and => Formula::And(out),
        _ => Formula::Or(out),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, items: &[Formula], sep: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, g) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{g}")?;
            }
            f.write_str(")")
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Le(t) => write!(f, "{t} <= 0"),
            Formula::Eq(t) => write!(f, "{t} = 0"),
            Formula::Divides(d, t) => write!(f, "{d} | {t}"),
            Formula::Not(g) => write!(f, "~({g})"),
            Formula::And(items) => list(f, items, " & "),
            Formula::Or(items) => list(f, items, " | "),
            Formula::Exists(v, g) => write!(f, "E {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "A {v}. {g}"),
        }
    }
}
