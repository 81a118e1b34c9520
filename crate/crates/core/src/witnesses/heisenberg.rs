use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{render_set, Fact, WitnessReport};
use crate::automata::{compile, enumerate, intersect_bounded, RatExpr};
use crate::error::{Error, Result};
use crate::groups::{ElementKey, Group, GroupElement, GroupSpec, Word};

/// Elements `w, g, f` of the Heisenberg group with `[g, w] = 1`.
#[derive(Debug, Clone)]
pub struct HeisenbergConfig {
    pub w: GroupElement,
    pub g: GroupElement,
    pub f: GroupElement,
    /// Largest exponent `n` in the windows.
    pub bound: usize,
}

impl Default for HeisenbergConfig {
    /// `w = (1,0,0)`, `g = z = (0,0,1)`, `f = (0,1,0)`, `N = 8`: `g` and `f`
    /// are independent and commute, `g` is central and `f`, `w` do not
    /// commute.
    fn default() -> Self {
        HeisenbergConfig {
            w: GroupElement::heisenberg(1, 0, 0),
            g: GroupElement::heisenberg(0, 0, 1),
            f: GroupElement::heisenberg(0, 1, 0),
            bound: 8,
        }
    }
}

pub fn heisenberg_diagonal(cfg: &HeisenbergConfig) -> Result<WitnessReport> {
    let mut group = Group::new(GroupSpec::Heisenberg)?;
    for (name, e) in [("W", &cfg.w), ("G", &cfg.g), ("F", &cfg.f)] {
        group.set_alias(name, e.clone())?;
    }
    if !group.is_identity(&group.commutator(&cfg.g, &cfg.w)?) {
        return Err(Error::HypothesisViolated("[g, w] ≠ 1".into()));
    }
    let n_max = i64::try_from(cfg.bound).map_err(|_| Error::InstanceTooLarge("bound".into()))?;
    let edges = 2 * cfg.bound;
    let (w, g, f) = (&cfg.w, &cfg.g, &cfg.f);
    let power = |e: &GroupElement, n: i64| group.pow_i64(e, n);
    let keys = |items: &[GroupElement]| -> BTreeSet<ElementKey> { items.iter().map(|x| group.key(x)).collect() };
    let word = |names: &[&str]| RatExpr::word(Word::from_pairs(names.iter().map(|n| (*n, 1))));

    let mut report = WitnessReport::new("heisenberg_diagonal");
    report.bound("N", cfg.bound);
    report.bound("max_edges", edges);

    // R = (wg)*f* ∩ w*(gf)*
    let left = compile(&RatExpr::concat(RatExpr::star(word(&["W", "G"])), RatExpr::star(word(&["F"]))), &group)?;
    let right = compile(&RatExpr::concat(RatExpr::star(word(&["W"])), RatExpr::star(word(&["G", "F"]))), &group)?;
    let r_window = intersect_bounded(&left, &right, edges)?;
    let mut diagonal = Vec::new();
    for n in 0..=n_max {
        diagonal.push(group.product([&power(w, n)?, &power(g, n)?, &power(f, n)?])?);
    }
    report.push(
        Fact::new("R-window", "(wg)*f* ∩ w*(gf)* = {wⁿgⁿfⁿ : n ≤ N} within the bound", keys(&r_window) == keys(&diagonal))
            .with("found", r_window.len())
            .with("expected", diagonal.len())
            .with("elements", render_set(&r_window)),
    );

    // S = R(g* ∪ (g⁻¹)*) ∩ w*f*
    let mut shifted = BTreeSet::new();
    for r in &r_window {
        for j in -2 * n_max..=2 * n_max {
            shifted.insert(group.key(&group.mul(r, &power(g, j)?)?));
        }
    }
    let wf = compile(&RatExpr::concat(RatExpr::star(word(&["W"])), RatExpr::star(word(&["F"]))), &group)?;
    let s_window: Vec<GroupElement> =
        enumerate(&wf, edges)?.into_iter().filter(|x| shifted.contains(&group.key(x))).collect();
    let mut s_expected = Vec::new();
    for n in 0..=n_max {
        s_expected.push(group.mul(&power(w, n)?, &power(f, n)?)?);
    }
    report.push(
        Fact::new("S-window", "R(g* ∪ (g^-1)*) ∩ w*f* = {wⁿfⁿ : n ≤ N} within the bound", keys(&s_window) == keys(&s_expected))
            .with("found", s_window.len())
            .with("expected", s_expected.len())
            .with("elements", render_set(&s_window)),
    );

    // For a = wⁿfⁿ and aq = wᵐfᵐ, aq² ∈ S forces f to commute with wᵐ⁻ⁿ.
    let in_s = |x: &GroupElement| -> Result<bool> {
        for t in 0..=3 * n_max {
            if group.mul(&power(w, t)?, &power(f, t)?)? == *x {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut extending = 0usize;
    let mut commuting = 0usize;
    for n in 0..=n_max {
        for m in 0..=n_max {
            if n == m {
                continue;
            }
            let a = &s_expected[n as usize];
            let aq = &s_expected[m as usize];
            let q = group.mul(&group.inv(a)?, aq)?;
            let aq2 = group.mul(aq, &q)?;
            let extends = in_s(&aq2)?;
            let commutes = group.is_identity(&group.commutator(f, &power(w, m - n)?)?);
            extending += usize::from(extends);
            commuting += usize::from(commutes);
            report.push(
                Fact::new(
                    format!("pair-{n}-{m}"),
                    format!("a = w^{n}f^{n}, aq = w^{m}f^{m}: aq² ∈ S implies [f, w^{}] = 1", m - n),
                    !extends || commutes,
                )
                .with("q", &q)
                .with("aq2", &aq2)
                .with("aq2_in_S", extends)
                .with("commutes", commutes),
            );
        }
    }
    report.note(format!(
        "{extending} of {} pairs extend to a three-term progression aq* in S; {commuting} have f commuting with w^(m-n)",
        (n_max * (n_max + 1)) as usize
    ));
    Ok(report)
}
