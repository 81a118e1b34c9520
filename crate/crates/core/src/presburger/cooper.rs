use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Formula, Term, Var};
use crate::error::{Error, Result};

/// Limits for quantifier elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QeConfig {
    /// Largest coefficient or modulus lcm accepted while eliminating one
    /// variable.
    pub max_lcm: BigInt,
}

impl Default for QeConfig {
    fn default() -> Self {
        QeConfig { max_lcm: BigInt::from(1_000_000u32) }
    }
}

/// Quantifier-free formula equivalent to `f` over ℤ, with the default
/// limits.
pub fn cooper_qe(f: &Formula) -> Result<Formula> {
    cooper_qe_with(f, &QeConfig::default())
}

/// Cooper's quantifier elimination.
///
/// Bound variables are renamed apart and existential blocks are pulled out
/// of positive conjunctions and disjunctions, so that a block `∃v₁…vₖ` is
/// eliminated one variable at a time on each disjunct separately. A
/// variable occurring in a top-level equality is solved from it; otherwise
/// the minus-infinity construction is used. `∀v φ` is handled as `¬∃v ¬φ`.
pub fn cooper_qe_with(f: &Formula, cfg: &QeConfig) -> Result<Formula> {
    let f = f.rename_apart().nnf();
    Ok(qe(&f, cfg)?.simplify())
}

/// Truth value of a sentence.
pub fn decide(sentence: &Formula) -> Result<bool> {
    decide_with(sentence, &QeConfig::default())
}

pub fn decide_with(sentence: &Formula, cfg: &QeConfig) -> Result<bool> {
    if !sentence.free_vars().is_empty() {
        return Err(Error::FreeVariables);
    }
    cooper_qe_with(sentence, cfg)?.eval(&|_| None)
}

fn qe(f: &Formula, cfg: &QeConfig) -> Result<Formula> {
    match f {
        Formula::Exists(..) => {
            let mut prefix = Vec::new();
            let mut body = f;
            while let Formula::Exists(v, g) = body {
                prefix.push(*v);
                body = g;
            }
            if let Some(branches) = split_existential_or(body) {
                let parts = branches
                    .into_iter()
                    .map(|b| qe(&Formula::exists_all(&prefix, b), cfg))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Formula::Or(parts).simplify());
            }
            let (vars, matrix) = hoist(f, cfg)?;
            eliminate_block(&vars, matrix, cfg)
        }
        Formula::Forall(v, body) => {
            let inner = Formula::exists(*v, Formula::not((**body).clone()).nnf());
            Ok(Formula::not(qe(&inner, cfg)?).nnf().simplify())
        }
        Formula::And(items) => Ok(Formula::And(items.iter().map(|g| qe(g, cfg)).collect::<Result<_>>()?)),
        Formula::Or(items) => Ok(Formula::Or(items.iter().map(|g| qe(g, cfg)).collect::<Result<_>>()?)),
        Formula::Not(g) if !g.is_quantifier_free() => Ok(Formula::not(qe(g, cfg)?).nnf()),
        other => Ok(other.clone()),
    }
}

/// `⋁ᵢ Dᵢ ∧ R` as the branches `Dᵢ ∧ R`, when the body is a disjunction or a
/// conjunction with a disjunctive conjunct and some `Dᵢ` is existential.
/// Eliminating each branch on its own keeps the multipliers of different
/// disjuncts out of one block.
fn split_existential_or(body: &Formula) -> Option<Vec<Formula>> {
    let existential = |items: &[Formula]| items.iter().any(|d| matches!(d, Formula::Exists(..)));
    match body {
        Formula::Or(items) if existential(items) => Some(items.clone()),
        Formula::And(items) => items.iter().enumerate().find_map(|(i, g)| match g {
            Formula::Or(ds) if existential(ds) => Some(
                ds.iter()
                    .map(|d| {
                        let mut conj = items.clone();
                        conj[i] = d.clone();
                        Formula::And(conj)
                    })
                    .collect(),
            ),
            _ => None,
        }),
        _ => None,
    }
}

/// Splits a formula in NNF into its positive existential prefix and a
/// quantifier-free matrix; universal subformulas are eliminated first.
fn hoist(f: &Formula, cfg: &QeConfig) -> Result<(Vec<Var>, Formula)> {
    match f {
        Formula::Exists(v, body) => {
            let (mut vars, matrix) = hoist(body, cfg)?;
            vars.insert(0, *v);
            Ok((vars, matrix))
        }
        Formula::And(items) | Formula::Or(items) => {
            let mut vars = Vec::new();
            let mut parts = Vec::new();
            for g in items {
                let (vs, m) = hoist(g, cfg)?;
                vars.extend(vs);
                parts.push(m);
            }
            let matrix = if matches!(f, Formula::And(_)) { Formula::And(parts) } else { Formula::Or(parts) };
            Ok((vars, matrix))
        }
        Formula::Forall(..) => Ok((Vec::new(), qe(f, cfg)?)),
        Formula::Not(g) if !g.is_quantifier_free() => Ok((Vec::new(), qe(f, cfg)?)),
        other => Ok((Vec::new(), other.clone())),
    }
}

fn eliminate_block(vars: &[Var], matrix: Formula, cfg: &QeConfig) -> Result<Formula> {
    let matrix = matrix.nnf().simplify();
    let mut out = Vec::new();
    for d in matrix.disjuncts() {
        let r = eliminate_conjunction(vars, d, cfg)?;
        if r == Formula::True {
            return Ok(Formula::True);
        }
        out.push(r);
    }
    Ok(Formula::Or(out).simplify())
}

/// Eliminates `∃vars` from a conjunction (or single literal) in NNF.
fn eliminate_conjunction(vars: &[Var], d: Formula, cfg: &QeConfig) -> Result<Formula> {
    let present: Vec<Var> = vars.iter().copied().filter(|v| d.mentions(*v)).collect();
    if present.is_empty() {
        return Ok(d);
    }
    let conjuncts = d.conjuncts();
    let v = choose_var(&present, &conjuncts);
    let reduced = eliminate_one(v, conjuncts, cfg)?;
    let rest: Vec<Var> = present.into_iter().filter(|w| *w != v).collect();
    if rest.is_empty() {
        return Ok(reduced);
    }
    let mut out = Vec::new();
    for d in reduced.disjuncts() {
        let r = eliminate_conjunction(&rest, d, cfg)?;
        if r == Formula::True {
            return Ok(Formula::True);
        }
        out.push(r);
    }
    Ok(Formula::Or(out).simplify())
}

/// Picks the next variable: one solvable from a top-level equality with a
/// unit coefficient, else one in any top-level equality (smallest
/// coefficient), else the one with the cheapest Cooper expansion.
fn choose_var(present: &[Var], conjuncts: &[Formula]) -> Var {
    let mut best_eq: Option<(BigInt, Var)> = None;
    for g in conjuncts {
        if let Formula::Eq(t) = g {
            for &v in present {
                let c = t.coeff(v).abs();
                if !c.is_zero() && best_eq.as_ref().is_none_or(|(b, _)| c < *b) {
                    best_eq = Some((c, v));
                }
            }
        }
    }
    if let Some((_, v)) = best_eq {
        return v;
    }
    let body = Formula::And(conjuncts.to_vec());
    *present
        .iter()
        .min_by_key(|&&v| {
            let mut lcm = BigInt::one();
            let (mut lower, mut upper) = (0usize, 0usize);
            body.map_atoms(&mut |atom| {
                match atom {
                    Formula::Le(t) => match t.coeff(v).sign() {
                        num_bigint::Sign::Minus => lower += 1,
                        num_bigint::Sign::Plus => upper += 1,
                        num_bigint::Sign::NoSign => {}
                    },
                    Formula::Eq(t) if t.mentions(v) => {
                        lower += 1;
                        upper += 1;
                    }
                    Formula::Divides(d, t) if t.mentions(v) => lcm = lcm.lcm(d),
                    _ => {}
                }
                if let Formula::Le(t) | Formula::Eq(t) | Formula::Divides(_, t) = atom {
                    let c = t.coeff(v);
                    if !c.is_zero() {
                        lcm = lcm.lcm(&c);
                    }
                }
                atom.clone()
            });
            let cost = lcm.to_u64().unwrap_or(u64::MAX).saturating_mul(lower.min(upper) as u64 + 1);
            (cost, v)
        })
        .expect("at least one variable")
}

fn check_lcm(l: &BigInt, cfg: &QeConfig) -> Result<()> {
    if *l > cfg.max_lcm {
        return Err(Error::LcmTooLarge { lcm: l.to_string(), limit: cfg.max_lcm.to_string() });
    }
    Ok(())
}

/// `∃v ⋀ conjuncts`, quantifier-free.
fn eliminate_one(v: Var, conjuncts: Vec<Formula>, cfg: &QeConfig) -> Result<Formula> {
    let (dep, mut indep): (Vec<Formula>, Vec<Formula>) = conjuncts.into_iter().partition(|g| g.mentions(v));
    if dep.is_empty() {
        return Ok(Formula::And(indep).simplify());
    }

    // Solve a top-level equality `a·v + s = 0`, smallest |a| first.
    let equality = dep
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match g {
            Formula::Eq(t) if t.mentions(v) => Some((t.coeff(v).abs(), i)),
            _ => None,
        })
        .min();
    if let Some((_, i)) = equality {
        let Formula::Eq(t) = &dep[i] else { unreachable!() };
        let t = if t.coeff(v).is_negative() { t.neg() } else { t.clone() };
        let a = t.coeff(v);
        let s = t.without(v);
        check_lcm(&a, cfg)?;
        // With a·v = −s, an atom c·v + r scaled by a becomes a·r − c·s.
        let mut rewrite = |atom: &Formula| -> Formula {
            let scaled = |t: &Term| t.without(v).scale(&a).sub(&s.scale(&t.coeff(v)));
            match atom {
                Formula::Le(t) if t.mentions(v) => Formula::Le(scaled(t)),
                Formula::Eq(t) if t.mentions(v) => Formula::Eq(scaled(t)),
                Formula::Divides(d, t) if t.mentions(v) => Formula::Divides(d * &a, scaled(t)),
                other => other.clone(),
            }
        };
        for (j, g) in dep.iter().enumerate() {
            if j != i {
                indep.push(g.map_atoms(&mut rewrite));
            }
        }
        indep.push(Formula::divides(a, s));
        return Ok(Formula::And(indep).simplify());
    }

    let body = Formula::And(dep);
    // Scale every atom so that v has coefficient ±L, then replace L·v by v.
    let mut l = BigInt::one();
    body.map_atoms(&mut |atom| {
        if let Formula::Le(t) | Formula::Eq(t) | Formula::Divides(_, t) = atom {
            let c = t.coeff(v);
            if !c.is_zero() {
                l = l.lcm(&c);
            }
        }
        atom.clone()
    });
    check_lcm(&l, cfg)?;
    let mut unit = body.map_atoms(&mut |atom| {
        let normalize = |t: &Term| -> (BigInt, Term) {
            let c = t.coeff(v);
            let k = &l / c.abs();
            let sign = if c.is_negative() { -BigInt::one() } else { BigInt::one() };
            (k.clone(), t.scale(&k).with_coeff(v, &sign))
        };
        match atom {
            Formula::Le(t) if t.mentions(v) => Formula::Le(normalize(t).1),
            Formula::Eq(t) if t.mentions(v) => Formula::Eq(normalize(t).1),
            Formula::Divides(d, t) if t.mentions(v) => {
                let (k, t) = normalize(t);
                Formula::Divides(d * k, t)
            }
            other => other.clone(),
        }
    });
    if !l.is_one() {
        unit = Formula::And(Vec::from([unit, Formula::Divides(l, Term::var(v))]));
    }

    let (lower, upper) = bounds(&unit, v);
    let unit = if upper.len() < lower.len() {
        unit.map_atoms(&mut |atom| match atom {
            Formula::Le(t) if t.mentions(v) => Formula::Le(t.with_coeff(v, &-t.coeff(v))),
            Formula::Eq(t) if t.mentions(v) => Formula::Eq(t.with_coeff(v, &-t.coeff(v))),
            Formula::Divides(d, t) if t.mentions(v) => Formula::Divides(d.clone(), t.with_coeff(v, &-t.coeff(v))),
            other => other.clone(),
        })
    } else {
        unit
    };
    let (lower, _) = bounds(&unit, v);

    let mut delta = BigInt::one();
    unit.map_atoms(&mut |atom| {
        if let Formula::Divides(d, t) = atom {
            if t.mentions(v) {
                delta = delta.lcm(d);
            }
        }
        atom.clone()
    });
    check_lcm(&delta, cfg)?;

    let minus_infinity = unit
        .map_atoms(&mut |atom| match atom {
            Formula::Le(t) if t.mentions(v) => {
                if t.coeff(v).is_positive() {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            Formula::Eq(t) if t.mentions(v) => Formula::False,
            other => other.clone(),
        })
        .simplify();

    let mut disjuncts = Vec::new();
    let steps = delta.to_u64().expect("bounded by the lcm limit");
    let mut push = |g: Formula| -> bool {
        let g = g.simplify();
        if g == Formula::True {
            return true;
        }
        if g != Formula::False {
            disjuncts.push(g);
        }
        false
    };
    let mut satisfied = false;
    let inf_steps = if minus_infinity.mentions(v) { steps } else { 1 };
    for j in 1..=inf_steps {
        if push(minus_infinity.substitute(v, &Term::constant(j))) {
            satisfied = true;
            break;
        }
    }
    if !satisfied {
        'outer: for b in &lower {
            for j in 1..=steps {
                if push(unit.substitute(v, &b.add_constant(&BigInt::from(j)))) {
                    satisfied = true;
                    break 'outer;
                }
            }
        }
    }
    if satisfied {
        return Ok(Formula::And(indep).simplify());
    }
    indep.push(Formula::Or(disjuncts));
    Ok(Formula::And(indep).simplify())
}

/// Boundary points for `v` in a formula where `v` has coefficient ±1:
/// `B` (points just below each lower bound) and `A` (just above each upper
/// bound).
fn bounds(f: &Formula, v: Var) -> (BTreeSet<Term>, BTreeSet<Term>) {
    let mut lower = BTreeSet::new();
    let mut upper = BTreeSet::new();
    let one = BigInt::one();
    collect_bounds(f, v, false, &mut |kind, t: &Term| {
        // t = c·v + r with c = ±1; the atom's root is v₀ = −c·r.
        let c = t.coeff(v);
        let root = t.without(v).scale(&-c);
        match kind {
            Bound::Upper => {
                upper.insert(root.add_constant(&one));
            }
            Bound::Lower => {
                lower.insert(root.add_constant(&-&one));
            }
            Bound::Point => {
                lower.insert(root.add_constant(&-&one));
                upper.insert(root.add_constant(&one));
            }
            Bound::Hole => {
                lower.insert(root.clone());
                upper.insert(root);
            }
        }
    });
    (lower, upper)
}

enum Bound {
    Upper,
    Lower,
    Point,
    Hole,
}

fn collect_bounds<F: FnMut(Bound, &Term)>(f: &Formula, v: Var, negated: bool, out: &mut F) {
    match f {
        Formula::Le(t) if t.mentions(v) => {
            out(if t.coeff(v).is_positive() { Bound::Upper } else { Bound::Lower }, t)
        }
        Formula::Eq(t) if t.mentions(v) => out(if negated { Bound::Hole } else { Bound::Point }, t),
        Formula::Not(g) => collect_bounds(g, v, !negated, out),
        Formula::And(items) | Formula::Or(items) => {
            for g in items {
                collect_bounds(g, v, negated, out);
            }
        }
        _ => {}
    }
}
