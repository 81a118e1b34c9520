use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::GroupAutomaton;
use crate::error::Result;
use crate::groups::{ElementKey, GroupElement};

/// Finite generating set of the subgroup generated by the accepted set.
///
/// With `t(s)` the label of the breadth-first spanning-tree path to `s`, the
/// result is `{t(u)·ℓ·t(v)⁻¹ : u --ℓ--> v} ∪ {t(s) : s terminal}` on the
/// trimmed automaton, without identities or duplicates, sorted by element
/// key.
pub fn subgroup_generators(aut: &GroupAutomaton) -> Result<Vec<GroupElement>> {
    let aut = aut.trim();
    if aut.terminals().is_empty() {
        return Ok(Vec::new());
    }
    let group = aut.group();
    let mut order: Vec<(usize, usize, String, usize)> = aut
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.source, e.target, e.label.to_string(), i))
        .collect();
    order.sort();
    let mut adj = vec![Vec::new(); aut.num_states()];
    for &(source, _, _, i) in &order {
        adj[source].push(i);
    }

    let mut tree: Vec<Option<GroupElement>> = vec![None; aut.num_states()];
    tree[aut.initial()] = Some(group.identity());
    let mut queue = VecDeque::from([aut.initial()]);
    while let Some(s) = queue.pop_front() {
        let label = tree[s].clone().expect("queued states are labelled");
        for &i in &adj[s] {
            let e = &aut.edges()[i];
            if tree[e.target].is_none() {
                tree[e.target] = Some(group.mul(&label, &e.label)?);
                queue.push_back(e.target);
            }
        }
    }

    let mut gens: BTreeMap<ElementKey, GroupElement> = BTreeMap::new();
    let mut add = |g: GroupElement| {
        if !group.is_identity(&g) {
            gens.entry(group.key(&g)).or_insert(g);
        }
    };
    for e in aut.edges() {
        let (Some(tu), Some(tv)) = (&tree[e.source], &tree[e.target]) else {
            continue;
        };
        add(group.product([tu, &e.label, &group.inv(tv)?])?);
    }
    for &s in aut.terminals() {
        if let Some(ts) = &tree[s] {
            add(ts.clone());
        }
    }
    Ok(gens.into_values().collect())
}
