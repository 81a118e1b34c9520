use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::RatExpr;
use crate::error::{Error, Result};
use crate::groups::{ElementKey, Group, GroupElement, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub label: GroupElement,
    pub target: usize,
}

/// Finite automaton whose edges carry group elements. It accepts the labels
/// of all paths from the initial state to a terminal state.
#[derive(Debug, Clone)]
pub struct GroupAutomaton {
    group: Group,
    num_states: usize,
    edges: Vec<Edge>,
    initial: usize,
    terminals: BTreeSet<usize>,
}

/// Answer of a bounded membership query. There is no `No`: a miss within the
/// bound says nothing about longer paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Yes,
    Unknown,
}

impl GroupAutomaton {
    pub fn new(
        group: Group,
        num_states: usize,
        edges: Vec<Edge>,
        initial: usize,
        terminals: BTreeSet<usize>,
    ) -> Result<Self> {
        if initial >= num_states {
            return Err(Error::InvalidParameter("initial state out of range".into()));
        }
        if terminals.iter().any(|&t| t >= num_states) {
            return Err(Error::InvalidParameter("terminal state out of range".into()));
        }
        for e in &edges {
            if e.source >= num_states || e.target >= num_states {
                return Err(Error::InvalidParameter("edge endpoint out of range".into()));
            }
            group.check(&e.label)?;
        }
        Ok(GroupAutomaton { group, num_states, edges, initial, terminals })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn terminals(&self) -> &BTreeSet<usize> {
        &self.terminals
    }

    /// Outgoing edges per state, in edge-list order.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_states];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.source].push(i);
        }
        adj
    }

    /// States lying on some accepting path.
    pub fn useful_states(&self) -> BTreeSet<usize> {
        let mut fwd = vec![false; self.num_states];
        let mut bwd = vec![false; self.num_states];
        let adj = self.adjacency();
        let mut stack = vec![self.initial];
        fwd[self.initial] = true;
        while let Some(s) = stack.pop() {
            for &i in &adj[s] {
                let t = self.edges[i].target;
                if !fwd[t] {
                    fwd[t] = true;
                    stack.push(t);
                }
            }
        }
        let mut radj = vec![Vec::new(); self.num_states];
        for e in &self.edges {
            radj[e.target].push(e.source);
        }
        let mut stack: Vec<usize> = self.terminals.iter().copied().collect();
        for &t in &stack {
            bwd[t] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &radj[s] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        (0..self.num_states).filter(|&s| fwd[s] && bwd[s]).collect()
    }

    /// Restriction to useful states, renumbered in increasing order. The
    /// initial state is kept even when nothing is accepted.
    pub fn trim(&self) -> GroupAutomaton {
        let mut keep = self.useful_states();
        keep.insert(self.initial);
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    source: *index.get(&e.source)?,
                    label: e.label.clone(),
                    target: *index.get(&e.target)?,
                })
            })
            .collect();
        let terminals = self.terminals.iter().filter_map(|t| index.get(t).copied()).collect();
        GroupAutomaton {
            group: self.group.clone(),
            num_states: keep.len(),
            edges,
            initial: index[&self.initial],
            terminals,
        }
    }

    /// Same graph, labels replaced by `relabel(label)`, over `group`.
    pub(crate) fn map_labels<F>(&self, group: Group, mut relabel: F) -> Result<GroupAutomaton>
    where
        F: FnMut(&GroupElement) -> Result<GroupElement>,
    {
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(Edge { source: e.source, label: relabel(&e.label)?, target: e.target }))
            .collect::<Result<Vec<_>>>()?;
        GroupAutomaton::new(group, self.num_states, edges, self.initial, self.terminals.clone())
    }

    /// Breadth-first search over (state, element) pairs, up to `max_edges`
    /// edges. `visit` sees each new pair once, in discovery order, and may
    /// stop the search by returning `true`.
    fn explore<F>(&self, max_edges: usize, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, &GroupElement, &ElementKey) -> bool,
    {
        let adj = self.adjacency();
        let id = self.group.identity();
        let id_key = self.group.key(&id);
        let mut seen: BTreeSet<(usize, ElementKey)> = BTreeSet::new();
        if visit(self.initial, &id, &id_key) {
            return Ok(());
        }
        seen.insert((self.initial, id_key));
        let mut frontier = vec![(self.initial, id)];
        for _ in 0..max_edges {
            let mut next = Vec::new();
            for (s, g) in &frontier {
                for &i in &adj[*s] {
                    let e = &self.edges[i];
                    let h = self.group.mul(g, &e.label)?;
                    let key = self.group.key(&h);
                    let slot = (e.target, key);
                    if seen.contains(&slot) {
                        continue;
                    }
                    if visit(e.target, &h, &slot.1) {
                        return Ok(());
                    }
                    seen.insert(slot);
                    next.push((e.target, h));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(())
    }
}

/// Compiles a rational expression into an automaton accepting exactly its
/// denotation.
///
/// States are Antimirov partial derivatives: each state is a product of
/// subexpressions, an edge `S --w--> T` means `T` is a partial derivative of
/// `S` by the singleton word `w`, and a state is terminal when it is
/// nullable. There are no glue edges, so a path uses one edge per singleton
/// word it reads.
pub fn compile(expr: &RatExpr, group: &Group) -> Result<GroupAutomaton> {
    let words = expr.words();
    let labels = words.iter().map(|w| group.eval_word(w)).collect::<Result<Vec<_>>>()?;

    let start = factors(expr);
    let mut index: BTreeMap<Product, usize> = BTreeMap::new();
    let mut states: Vec<Product> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    states.push(start.clone());
    queue.push_back(start);
    let mut edges = Vec::new();

    while let Some(state) = queue.pop_front() {
        let source = index[&state];
        for (w, label) in words.iter().zip(&labels) {
            let mut derivs = BTreeSet::new();
            derive_product(&state, w, &mut derivs);
            for d in derivs {
                let target = match index.get(&d) {
                    Some(&t) => t,
                    None => {
                        let t = states.len();
                        index.insert(d.clone(), t);
                        states.push(d.clone());
                        queue.push_back(d);
                        t
                    }
                };
                edges.push(Edge { source, label: label.clone(), target });
            }
        }
    }
    let terminals = states
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().all(|e| e.nullable()))
        .map(|(i, _)| i)
        .collect();
    GroupAutomaton::new(group.clone(), states.len(), edges, 0, terminals)
}

/// A product of expressions; the empty product is `{1}`.
type Product = Vec<RatExpr>;

/// Splits nested concatenations into factors.
fn push_factors(e: &RatExpr, out: &mut Product) {
    match e {
        RatExpr::Concat(a, b) => {
            push_factors(a, out);
            push_factors(b, out);
        }
        _ => out.push(e.clone()),
    }
}

fn factors(e: &RatExpr) -> Product {
    let mut out = Vec::new();
    push_factors(e, &mut out);
    out
}

fn derive_product(p: &[RatExpr], w: &Word, out: &mut BTreeSet<Product>) {
    let Some((head, tail)) = p.split_first() else {
        return;
    };
    let mut heads = BTreeSet::new();
    derive_expr(head, w, &mut heads);
    for mut prod in heads {
        prod.extend(tail.iter().cloned());
        out.insert(prod);
    }
    if head.nullable() {
        derive_product(tail, w, out);
    }
}

fn derive_expr(e: &RatExpr, w: &Word, out: &mut BTreeSet<Product>) {
    match e {
        RatExpr::Empty => {}
        RatExpr::Singleton(v) => {
            if v == w {
                out.insert(Vec::new());
            }
        }
        RatExpr::Union(a, b) => {
            derive_expr(a, w, out);
            derive_expr(b, w, out);
        }
        RatExpr::Concat(..) => derive_product(&factors(e), w, out),
        RatExpr::Star(a) => {
            let mut inner = BTreeSet::new();
            derive_expr(a, w, &mut inner);
            for mut d in inner {
                d.push(e.clone());
                out.insert(d);
            }
        }
    }
}

/// Labels of accepting paths with at most `max_edges` edges, deduplicated
/// by group equality and sorted by element key.
pub fn enumerate(aut: &GroupAutomaton, max_edges: usize) -> Result<Vec<GroupElement>> {
    let mut found: BTreeMap<ElementKey, GroupElement> = BTreeMap::new();
    aut.explore(max_edges, |s, g, key| {
        if aut.terminals.contains(&s) && !found.contains_key(key) {
            found.insert(key.clone(), g.clone());
        }
        false
    })?;
    Ok(found.into_values().collect())
}

pub fn member_bounded(aut: &GroupAutomaton, g: &GroupElement, max_edges: usize) -> Result<Membership> {
    aut.group.check(g)?;
    let target = aut.group.key(g);
    let mut hit = false;
    aut.explore(max_edges, |s, _, key| {
        hit = aut.terminals.contains(&s) && *key == target;
        hit
    })?;
    Ok(if hit { Membership::Yes } else { Membership::Unknown })
}

/// `enumerate(a1, L) ∩ enumerate(a2, L)`.
pub fn intersect_bounded(
    a1: &GroupAutomaton,
    a2: &GroupAutomaton,
    max_edges: usize,
) -> Result<Vec<GroupElement>> {
    if a1.group.spec() != a2.group.spec() {
        return Err(Error::SpecMismatch);
    }
    let right: BTreeSet<ElementKey> =
        enumerate(a2, max_edges)?.iter().map(|g| a2.group.key(g)).collect();
    Ok(enumerate(a1, max_edges)?
        .into_iter()
        .filter(|g| right.contains(&a1.group.key(g)))
        .collect())
}
