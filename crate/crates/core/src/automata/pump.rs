use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::GroupAutomaton;
use crate::error::Result;
use crate::groups::{ElementKey, Group, GroupElement};

/// `a·q*·b` inside an accepted set, with `q` not the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpingWitness {
    pub a: GroupElement,
    pub q: GroupElement,
    pub b: GroupElement,
}

impl PumpingWitness {
    /// The equivalent witness `(ab, b⁻¹qb, 1)`: `ab·(b⁻¹qb)ⁿ = a·qⁿ·b`.
    pub fn normalized(&self, group: &Group) -> Result<PumpingWitness> {
        Ok(PumpingWitness {
            a: group.mul(&self.a, &self.b)?,
            q: group.conj(&self.q, &self.b)?,
            b: group.identity(),
        })
    }

    /// `a·qⁿ·b`
    pub fn instance(&self, group: &Group, n: u64) -> Result<GroupElement> {
        let qn = group.pow(&self.q, &n.into())?;
        group.product([&self.a, &qn, &self.b])
    }
}

/// Finds an accepting path through a cycle with non-identity label.
///
/// Among the useful states, the one minimizing (length of the shortest
/// initial-to-state-to-terminal path, length of its shortest non-identity
/// cycle, state index) is chosen; cycles longer than `max_explore` edges are
/// not searched. Returns `None` when no such cycle is found, in particular
/// whenever the accepted set is finite.
pub fn pump(aut: &GroupAutomaton, max_explore: usize) -> Result<Option<PumpingWitness>> {
    let group = aut.group();
    let useful = aut.useful_states();
    if useful.is_empty() {
        return Ok(None);
    }
    let n = aut.num_states();
    let edges = aut.edges();

    // Breadth-first trees restricted to useful states: prefixes from the
    // initial state and suffixes into some terminal.
    let mut into: Vec<Option<(usize, GroupElement)>> = vec![None; n];
    into[aut.initial()] = Some((0, group.identity()));
    let mut queue = VecDeque::from([aut.initial()]);
    let adj = aut.adjacency();
    while let Some(s) = queue.pop_front() {
        let (d, label) = into[s].clone().expect("queued states are labelled");
        for &i in &adj[s] {
            let e = &edges[i];
            if useful.contains(&e.target) && into[e.target].is_none() {
                into[e.target] = Some((d + 1, group.mul(&label, &e.label)?));
                queue.push_back(e.target);
            }
        }
    }
    let mut radj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        radj[e.target].push(i);
    }
    let mut out: Vec<Option<(usize, GroupElement)>> = vec![None; n];
    for &t in aut.terminals() {
        if useful.contains(&t) {
            out[t] = Some((0, group.identity()));
            queue.push_back(t);
        }
    }
    while let Some(s) = queue.pop_front() {
        let (d, label) = out[s].clone().expect("queued states are labelled");
        for &i in &radj[s] {
            let e = &edges[i];
            if useful.contains(&e.source) && out[e.source].is_none() {
                out[e.source] = Some((d + 1, group.mul(&e.label, &label)?));
                queue.push_back(e.source);
            }
        }
    }

    let mut order: Vec<(usize, usize)> = useful
        .iter()
        .map(|&s| (into[s].as_ref().unwrap().0 + out[s].as_ref().unwrap().0, s))
        .collect();
    order.sort();

    let mut best: Option<((usize, usize, usize), GroupElement)> = None;
    for (dist, s) in order {
        if best.as_ref().is_some_and(|(rank, _)| rank.0 < dist) {
            break;
        }
        if let Some((len, q)) = shortest_cycle(aut, &adj, s, max_explore)? {
            let rank = (dist, len, s);
            if best.as_ref().is_none_or(|(r, _)| rank < *r) {
                best = Some((rank, q));
            }
        }
    }
    Ok(best.map(|((_, _, s), q)| PumpingWitness {
        a: into[s].take().unwrap().1,
        q,
        b: out[s].take().unwrap().1,
    }))
}

/// Shortest cycle at `s` whose label is not the identity, as
/// (length, label).
fn shortest_cycle(
    aut: &GroupAutomaton,
    adj: &[Vec<usize>],
    s: usize,
    max_len: usize,
) -> Result<Option<(usize, GroupElement)>> {
    let group = aut.group();
    let id = group.identity();
    let mut seen: BTreeSet<(usize, ElementKey)> = BTreeSet::new();
    seen.insert((s, group.key(&id)));
    let mut frontier = vec![(s, id)];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (u, g) in &frontier {
            for &i in &adj[*u] {
                let e = &aut.edges()[i];
                let h = group.mul(g, &e.label)?;
                if e.target == s && !group.is_identity(&h) {
                    return Ok(Some((len, h)));
                }
                if seen.insert((e.target, group.key(&h))) {
                    next.push((e.target, h));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}
