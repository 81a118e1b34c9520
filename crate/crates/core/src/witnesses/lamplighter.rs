use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{Fact, WitnessReport};
use crate::error::{Error, Result};
use crate::groups::{ElementKey, Group, GroupElement, GroupSpec};

/// Two finitely generated subgroups `H`, `K` of `ℤ_μ wr ℤ`.
#[derive(Debug, Clone)]
pub struct LamplighterConfig {
    pub modulus: BigInt,
    pub h: Vec<GroupElement>,
    pub k: Vec<GroupElement>,
    /// Word radius of the balls.
    pub radius: usize,
}

/// Word radius of every element in the subgroup ball of radius `r`.
fn ball(group: &Group, gens: &[GroupElement], r: usize) -> Result<BTreeMap<ElementKey, (usize, GroupElement)>> {
    let mut steps = Vec::new();
    for g in gens {
        steps.push(g.clone());
        steps.push(group.inv(g)?);
    }
    let mut radius = BTreeMap::from([(group.key(&group.identity()), (0usize, group.identity()))]);
    let mut frontier = alloc::vec![group.identity()];
    for depth in 1..=r {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &steps {
                let h = group.mul(g, s)?;
                let key = group.key(&h);
                if !radius.contains_key(&key) {
                    radius.insert(key, (depth, h.clone()));
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(radius)
}

pub fn lamplighter_howson(cfg: &LamplighterConfig) -> Result<WitnessReport> {
    if cfg.h.is_empty() || cfg.k.is_empty() {
        return Err(Error::InvalidParameter("both generator lists must be nonempty".into()));
    }
    let group = Group::new(GroupSpec::Lamplighter { modulus: cfg.modulus.clone() })?;
    for g in cfg.h.iter().chain(&cfg.k) {
        group.check(g)?;
    }
    let mut report = WitnessReport::new("lamplighter_howson");
    report.bound("radius", cfg.radius);
    report.bound("mu", &cfg.modulus);

    let hb = ball(&group, &cfg.h, cfg.radius)?;
    let kb = ball(&group, &cfg.k, cfg.radius)?;
    // Intersection elements with the radius at which both balls contain them.
    let joint: BTreeMap<&ElementKey, (usize, &GroupElement)> = hb
        .iter()
        .filter_map(|(key, (rh, g))| kb.get(key).map(|(rk, _)| (key, (*rh.max(rk), g))))
        .collect();

    // At each radius: intersection size, new elements, and new elements that
    // are not a product of two elements already present.
    let mut sizes = Vec::new();
    let mut fresh = Vec::new();
    let mut ungenerated = Vec::new();
    let mut elements: Vec<&GroupElement> = Vec::new();
    for r in 0..=cfg.radius {
        let new: Vec<(&ElementKey, &GroupElement)> =
            joint.iter().filter(|(_, (rr, _))| *rr == r).map(|(k, (_, g))| (*k, *g)).collect();
        let mut products = BTreeSet::new();
        for u in &elements {
            for v in &elements {
                products.insert(group.key(&group.mul(u, v)?));
            }
        }
        let not_generated = new.iter().filter(|(k, _)| !products.contains(*k)).count();
        elements.extend(new.iter().map(|(_, g)| *g));
        sizes.push(elements.len());
        fresh.push(new.len());
        ungenerated.push(not_generated);
    }
    let growing = ungenerated.windows(3).any(|w| w[0] < w[1] && w[1] < w[2]);
    let render = |v: &[usize]| -> String {
        let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        parts.join(",")
    };
    report.push(
        Fact::new("identity", "the intersection window contains the identity", joint.contains_key(&group.key(&group.identity())))
            .with("ball_H", hb.len())
            .with("ball_K", kb.len()),
    );
    report.push(
        Fact::new("profile", "word-radius profile of the intersection H ∩ K", true)
            .with("sizes", render(&sizes))
            .with("new", render(&fresh))
            .with("not_generated", render(&ungenerated))
            .with("strictly_growing", growing),
    );
    report.note(if growing {
        "heuristic: elements not generated by smaller radii grow strictly across 3 consecutive radii \
         (evidence against finite generation of H ∩ K, not a proof)"
    } else {
        "heuristic: no strictly growing run of non-generated elements in the window (no claim either way)"
    });
    Ok(report)
}
