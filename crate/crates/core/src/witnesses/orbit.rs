use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{render_set, Fact, WitnessReport};
use crate::automata::{compile, enumerate, RatExpr};
use crate::error::{Error, Result};
use crate::groups::{ElementKey, Group, GroupElement, GroupSpec, Word};

/// Orbit of `x ∈ A` under conjugation by `h` in `ℤʳ ⋊ ⟨h⟩`.
#[derive(Debug, Clone)]
pub struct OrbitConfig {
    /// Must be a semidirect spec.
    pub spec: GroupSpec,
    /// Nonzero vector of `A`.
    pub x: Vec<BigInt>,
    /// Window `|n| ≤ bound`.
    pub bound: usize,
}

pub fn polycyclic_orbit(cfg: &OrbitConfig) -> Result<WitnessReport> {
    if !matches!(cfg.spec, GroupSpec::Semidirect { .. }) {
        return Err(Error::InvalidParameter("polycyclic_orbit needs a semidirect group".into()));
    }
    let group = Group::new(cfg.spec.clone())?;
    let x = GroupElement::Semidirect { v: cfg.x.clone(), k: BigInt::from(0) };
    group.check(&x)?;
    if group.is_identity(&x) {
        return Err(Error::InvalidParameter("x must be a nontrivial element of A".into()));
    }
    let h = group.generator("h")?;
    let n_max = i64::try_from(cfg.bound).map_err(|_| Error::InstanceTooLarge("bound".into()))?;

    let mut report = WitnessReport::new("polycyclic_orbit");
    report.bound("N", cfg.bound);

    // h⁻ⁿ x hⁿ for |n| ≤ N, grouped by value.
    let mut orbit: BTreeMap<ElementKey, (GroupElement, Vec<i64>)> = BTreeMap::new();
    let mut nonnegative = BTreeSet::new();
    for n in -n_max..=n_max {
        let value = group.conj(&x, &group.pow_i64(&h, n)?)?;
        if n >= 0 {
            nonnegative.insert(group.key(&value));
        }
        orbit.entry(group.key(&value)).or_insert_with(|| (value, Vec::new())).1.push(n);
    }

    let repetition = orbit
        .values()
        .flat_map(|(_, ns)| ns.windows(2).map(|w| (w[1], w[0])))
        .min_by_key(|&(n, t)| (n - t, t));
    match repetition {
        Some((n, t)) => {
            report.push(
                Fact::new("orbit-repetition", "h⁻ⁿxhⁿ = h⁻ᵗxhᵗ for some n > t in the window", true)
                    .with("n", n)
                    .with("t", t)
                    .with("gap", n - t),
            );
            let comm = group.commutator(&x, &group.pow_i64(&h, n - t)?)?;
            report.push(
                Fact::new("commutation", "[x, h^(n-t)] = 1 by direct multiplication", group.is_identity(&comm))
                    .with("gap", n - t)
                    .with("commutator", &comm),
            );
        }
        None => {
            report.push(
                Fact::new("orbit-injective", "the orbit is injective on the window", true)
                    .with("distinct", orbit.len())
                    .with("window", 2 * n_max + 1),
            );
        }
    }

    // (h⁻¹)*·x·h* ∩ A, enumerated up to 2N+1 edges, is {h⁻ⁿxhⁿ : 0 ≤ n ≤ N}.
    let x_word = group.normal_word(&x)?;
    let expr = RatExpr::concat_all([
        RatExpr::star(RatExpr::word(Word::power("h", -1))),
        RatExpr::word(x_word),
        RatExpr::star(RatExpr::word(Word::gen("h"))),
    ]);
    let aut = compile(&expr, &group)?;
    let rebuilt: Vec<GroupElement> =
        enumerate(&aut, 2 * cfg.bound + 1)?.into_iter().filter(|g| group.in_base_subgroup(g)).collect();
    let rebuilt_keys: BTreeSet<ElementKey> = rebuilt.iter().map(|g| group.key(g)).collect();
    let matches = rebuilt_keys == nonnegative;
    let mut fact = Fact::new(
        "rational-rebuild",
        "((h^-1)*·x·h*) ∩ A matches the orbit for 0 ≤ n ≤ N",
        matches,
    )
    .with("rebuilt", rebuilt.len())
    .with("orbit", nonnegative.len());
    if cfg.bound <= 4 {
        fact = fact.with("elements", render_set(&rebuilt));
    }
    report.push(fact);
    report.note(
        "the expression (h^-1)*·x·h* only reaches conjugates by hⁿ with n ≥ 0; \
         the window for n < 0 is covered by the direct orbit computation",
    );
    Ok(report)
}
