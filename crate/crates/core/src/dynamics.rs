//! Solutions, invariant parts, isolation and index pairs.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::algebra::{relative_homology, BettiVector};
use crate::complex::{Complex, Simplex, SimplexId, SimplexSet};
use crate::mvf::MultivectorField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("{0} is not closed")]
    NotClosed(&'static str),
    #[error("E is not contained in P")]
    NotNested,
    #[error("the set is not contained in N")]
    NotInN,
    #[error("the set is not convex")]
    NotConvex,
    #[error("the set is not compatible with the field")]
    NotCompatible,
}

/// `G_A`: σ → τ whenever τ ∈ F(σ) ∩ A.
pub struct TransitionGraph {
    nodes: Vec<SimplexId>,
    local: Vec<usize>,
    succ: Vec<Vec<usize>>,
}

const ABSENT: usize = usize::MAX;

impl TransitionGraph {
    pub fn new(field: &MultivectorField, a: &SimplexSet) -> Self {
        let k = field.complex();
        let nodes: Vec<SimplexId> = a.iter().collect();
        let mut local = vec![ABSENT; k.len()];
        for (i, s) in nodes.iter().enumerate() {
            local[s.0] = i;
        }
        let succ = nodes
            .iter()
            .map(|&s| {
                let mut out: Vec<usize> = k
                    .faces(s)
                    .iter()
                    .copied()
                    .chain(field.class_of(s).iter())
                    .filter_map(|t| match local[t.0] {
                        ABSENT => None,
                        j => Some(j),
                    })
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        TransitionGraph { nodes, local, succ }
    }

    pub fn nodes(&self) -> &[SimplexId] {
        &self.nodes
    }

    pub fn successors(&self, s: SimplexId) -> impl Iterator<Item = SimplexId> + '_ {
        let i = self.local[s.0];
        let list: &[usize] = if i == ABSENT { &[] } else { &self.succ[i] };
        list.iter().map(|&j| self.nodes[j])
    }

    fn reach(&self, starts: impl IntoIterator<Item = usize>, forward: bool) -> Vec<bool> {
        let adj = if forward { self.succ.clone() } else { self.reversed() };
        let mut seen = vec![false; self.nodes.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn reversed(&self) -> Vec<Vec<usize>> {
        let mut rev = vec![Vec::new(); self.nodes.len()];
        for (u, list) in self.succ.iter().enumerate() {
            for &v in list {
                rev[v].push(u);
            }
        }
        rev
    }

    /// Strongly connected component index of every node.
    fn components(&self) -> Vec<usize> {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.nodes.len(), 0);
        for _ in &self.nodes {
            g.add_node(());
        }
        for (u, list) in self.succ.iter().enumerate() {
            for &v in list {
                g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
            }
        }
        let mut comp = vec![0; self.nodes.len()];
        for (c, members) in tarjan_scc(&g).into_iter().enumerate() {
            for n in members {
                comp[n.index()] = c;
            }
        }
        comp
    }
}

/// Checks that consecutive steps of `path` follow F.
pub fn is_path(field: &MultivectorField, path: &[SimplexId]) -> bool {
    path.windows(2).all(|w| field.fmap(w[0]).contains(w[1]))
}

/// `inv(A)`: simplices of `A` on some essential solution inside `A`.
///
/// The core consists of simplices in critical multivectors and simplices whose
/// strongly connected component meets more than one multivector. A simplex is
/// invariant iff it reaches the core and is reached from it.
pub fn invariant_part(field: &MultivectorField, a: &SimplexSet) -> SimplexSet {
    let k = field.complex();
    if a.is_empty() {
        return k.empty_set();
    }
    let g = TransitionGraph::new(field, a);
    let comp = g.components();
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut first_mv = vec![None; ncomp];
    let mut mixed = vec![false; ncomp];
    for (i, &s) in g.nodes.iter().enumerate() {
        let mv = field.mv_of(s);
        match first_mv[comp[i]] {
            None => first_mv[comp[i]] = Some(mv),
            Some(m) if m != mv => mixed[comp[i]] = true,
            _ => {}
        }
    }
    let core: Vec<usize> = (0..g.nodes.len())
        .filter(|&i| mixed[comp[i]] || field.is_critical(field.mv_of(g.nodes[i])))
        .collect();
    let fwd = g.reach(core.iter().copied(), true);
    let bwd = g.reach(core.iter().copied(), false);
    k.set_of((0..g.nodes.len()).filter(|&i| fwd[i] && bwd[i]).map(|i| g.nodes[i]))
}

pub fn is_invariant(field: &MultivectorField, s: &SimplexSet) -> bool {
    invariant_part(field, s) == *s
}

/// Invariant, convex and compatible.
pub fn is_isolated_invariant_set(field: &MultivectorField, s: &SimplexSet) -> bool {
    field.is_compatible(s) && field.complex().is_convex(s) && is_invariant(field, s)
}

/// Whether `n` isolates `s`: `n` closed, F(S) ⊆ N, and no path in `n` leaves
/// `s` and comes back.
pub fn isolates(field: &MultivectorField, n: &SimplexSet, s: &SimplexSet) -> bool {
    let k = field.complex();
    if !k.is_closed(n) || !field.fmap_set(s).is_subset(n) {
        return false;
    }
    let outside = n.difference(s);
    let g = TransitionGraph::new(field, n);
    let exits: Vec<usize> = field
        .fmap_set(s)
        .difference(s)
        .iter()
        .map(|t| g.local[t.0])
        .collect();
    let mut seen = vec![false; g.nodes.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for e in exits {
        if !seen[e] {
            seen[e] = true;
            queue.push_back(e);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &g.succ[u] {
            let t = g.nodes[v];
            if s.contains(t) {
                return false;
            }
            if outside.contains(t) && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    true
}

/// `pf(A, N)`: simplices of `N` reachable from `A` by paths inside `N`.
pub fn push_forward(
    field: &MultivectorField,
    a: &SimplexSet,
    n: &SimplexSet,
) -> Result<SimplexSet, DynamicsError> {
    if !a.is_subset(n) {
        return Err(DynamicsError::NotInN);
    }
    let g = TransitionGraph::new(field, n);
    let seen = g.reach(a.iter().map(|s| g.local[s.0]), true);
    let k = field.complex();
    Ok(k.set_of((0..g.nodes.len()).filter(|&i| seen[i]).map(|i| g.nodes[i])))
}

/// A closed pair `E ⊆ P`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexPair {
    pub p: SimplexSet,
    pub e: SimplexSet,
}

impl IndexPair {
    pub fn new(k: &Complex, p: SimplexSet, e: SimplexSet) -> Result<Self, DynamicsError> {
        if !k.is_closed(&p) {
            return Err(DynamicsError::NotClosed("P"));
        }
        if !k.is_closed(&e) {
            return Err(DynamicsError::NotClosed("E"));
        }
        if !e.is_subset(&p) {
            return Err(DynamicsError::NotNested);
        }
        Ok(IndexPair { p, e })
    }

    /// `(cl A, mo A)`.
    pub fn of_closure(k: &Complex, a: &SimplexSet) -> Self {
        IndexPair {
            p: k.closure(a),
            e: k.mouth(a),
        }
    }

    /// `P ∖ E`.
    pub fn interior(&self) -> SimplexSet {
        self.p.difference(&self.e)
    }

    pub fn intersection(&self, other: &IndexPair) -> IndexPair {
        IndexPair {
            p: self.p.intersection(&other.p),
            e: self.e.intersection(&other.e),
        }
    }

    /// Componentwise inclusion.
    pub fn is_subpair_of(&self, other: &IndexPair) -> bool {
        self.p.is_subset(&other.p) && self.e.is_subset(&other.e)
    }

    pub fn homology(&self, field: &MultivectorField) -> BettiVector {
        relative_homology(field.complex(), &self.p, &self.e, field.prime_field())
            .expect("index pairs are closed and nested")
    }
}

/// A failed index-pair condition, with a witness where one exists.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairViolation {
    #[error("P is not closed")]
    PNotClosed,
    #[error("E is not closed")]
    ENotClosed,
    #[error("E is not contained in P")]
    NotNested,
    #[error("F(P \\ E) leaves P at {0}")]
    LeavesP(Simplex),
    #[error("F(E) ∩ P leaves E at {0}")]
    LeavesE(Simplex),
    #[error("F(P \\ E) leaves N at {0}")]
    LeavesN(Simplex),
    #[error("F(P) ∩ N leaves P at {0}")]
    NotPositivelyInvariant(Simplex),
    #[error("inv(P \\ E) differs from S")]
    WrongInvariantSet,
}

fn first_outside(k: &Complex, a: &SimplexSet, b: &SimplexSet) -> Option<Simplex> {
    a.difference(b).first().map(|id| k.simplex(id).clone())
}

fn structural(k: &Complex, p: &SimplexSet, e: &SimplexSet) -> Vec<PairViolation> {
    let mut out = Vec::new();
    if !k.is_closed(p) {
        out.push(PairViolation::PNotClosed);
    }
    if !k.is_closed(e) {
        out.push(PairViolation::ENotClosed);
    }
    if !e.is_subset(p) {
        out.push(PairViolation::NotNested);
    }
    out
}

/// All violated conditions of `(P, E)` as an index pair for `S`.
pub fn validate_index_pair(
    field: &MultivectorField,
    p: &SimplexSet,
    e: &SimplexSet,
    s: &SimplexSet,
) -> Vec<PairViolation> {
    let k = field.complex();
    let mut out = structural(k, p, e);
    let inner = p.difference(e);
    if let Some(w) = first_outside(k, &field.fmap_set(&inner), p) {
        out.push(PairViolation::LeavesP(w));
    }
    if let Some(w) = first_outside(k, &field.fmap_set(e).intersection(p), e) {
        out.push(PairViolation::LeavesE(w));
    }
    if invariant_part(field, &inner) != *s {
        out.push(PairViolation::WrongInvariantSet);
    }
    out
}

/// All violated conditions of `(P, E)` as an index pair for `S` in `N`.
pub fn validate_index_pair_in_n(
    field: &MultivectorField,
    p: &SimplexSet,
    e: &SimplexSet,
    n: &SimplexSet,
    s: &SimplexSet,
) -> Vec<PairViolation> {
    let k = field.complex();
    let mut out = structural(k, p, e);
    let inner = p.difference(e);
    if let Some(w) = first_outside(k, &field.fmap_set(&inner), n) {
        out.push(PairViolation::LeavesN(w));
    }
    if let Some(w) = first_outside(k, &field.fmap_set(e).intersection(n), e) {
        out.push(PairViolation::LeavesE(w));
    }
    if let Some(w) = first_outside(k, &field.fmap_set(p).intersection(n), p) {
        out.push(PairViolation::NotPositivelyInvariant(w));
    }
    if invariant_part(field, &inner) != *s {
        out.push(PairViolation::WrongInvariantSet);
    }
    out
}

/// `(cl A, mo A)` for a convex compatible `A`; an index pair for `inv(A)`.
pub fn canonical_index_pair(
    field: &MultivectorField,
    a: &SimplexSet,
) -> Result<IndexPair, DynamicsError> {
    let k = field.complex();
    if !k.is_convex(a) {
        return Err(DynamicsError::NotConvex);
    }
    if !field.is_compatible(a) {
        return Err(DynamicsError::NotCompatible);
    }
    Ok(IndexPair::of_closure(k, a))
}

/// `(pf(cl S, N), pf(mo S, N))`.
pub fn push_forward_pair(
    field: &MultivectorField,
    s: &SimplexSet,
    n: &SimplexSet,
) -> Result<IndexPair, DynamicsError> {
    let k = field.complex();
    Ok(IndexPair {
        p: push_forward(field, &k.closure(s), n)?,
        e: push_forward(field, &k.mouth(s), n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::VertexId;
    use std::sync::Arc;

    fn s(v: &[VertexId]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn set(k: &Complex, xs: &[&[VertexId]]) -> SimplexSet {
        k.set_from_simplices(&xs.iter().map(|x| s(x)).collect::<Vec<_>>())
            .unwrap()
    }

    fn field(k: &Arc<Complex>, parts: &[&[&[VertexId]]]) -> MultivectorField {
        let parts: Vec<Vec<Simplex>> = parts
            .iter()
            .map(|p| p.iter().map(|x| s(x)).collect())
            .collect();
        MultivectorField::from_simplices_filling(k.clone(), &parts).unwrap()
    }

    fn triangle() -> Arc<Complex> {
        Arc::new(Complex::from_maximal([s(&[0, 1, 2])]))
    }

    #[test]
    fn singleton_field_everything_invariant() {
        let k = triangle();
        let w = MultivectorField::singletons(k.clone());
        assert_eq!(invariant_part(&w, &k.full_set()), k.full_set());
        assert!(invariant_part(&w, &k.empty_set()).is_empty());
        assert!(is_invariant(&w, &k.empty_set()));
    }

    #[test]
    fn arrow_alone_is_not_invariant() {
        let k = triangle();
        let f = field(&k, &[&[&[0], &[0, 1]]]);
        let arrow = set(&k, &[&[0], &[0, 1]]);
        assert!(invariant_part(&f, &arrow).is_empty());
        assert!(!is_invariant(&f, &arrow));
        // the arrow's vertex still lies on a solution through the critical vertex 1
        let a = set(&k, &[&[0], &[0, 1], &[1]]);
        assert_eq!(invariant_part(&f, &a), set(&k, &[&[1]]));
    }

    #[test]
    fn periodic_orbit_is_invariant() {
        // a circle of three arrows: v0→e01 … v1→e12 … v2→e02
        let k = Arc::new(Complex::from_maximal([s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]));
        let f = field(&k, &[&[&[0], &[0, 1]], &[&[1], &[1, 2]], &[&[2], &[0, 2]]]);
        assert!(f.ids().all(|m| !f.is_critical(m)));
        assert_eq!(invariant_part(&f, &k.full_set()), k.full_set());
        assert!(is_isolated_invariant_set(&f, &k.full_set()));
        let part = set(&k, &[&[0], &[0, 1], &[1], &[1, 2]]);
        assert!(invariant_part(&f, &part).is_empty());
    }

    #[test]
    fn isolation_examples() {
        let k = triangle();
        let w = MultivectorField::singletons(k.clone());
        let t = set(&k, &[&[0, 1, 2]]);
        assert!(isolates(&w, &k.closure(&t), &t));
        assert!(isolates(&w, &k.full_set(), &k.empty_set()));
        // S = {t, v0}: t → e01 → v0 re-enters
        let sv = set(&k, &[&[0, 1, 2], &[0]]);
        assert!(!isolates(&w, &k.full_set(), &sv));
        assert!(!is_isolated_invariant_set(&w, &sv));
        // N not containing F(S)
        assert!(!isolates(&w, &set(&k, &[&[0]]), &t));
    }

    #[test]
    fn canonical_pairs_validate() {
        let k = triangle();
        let f = field(&k, &[&[&[0], &[0, 1]], &[&[1, 2], &[0, 1, 2]]]);
        let a = set(&k, &[&[1, 2], &[0, 1, 2]]);
        let pair = canonical_index_pair(&f, &a).unwrap();
        let s_ = invariant_part(&f, &a);
        assert!(validate_index_pair(&f, &pair.p, &pair.e, &s_).is_empty());
        assert!(validate_index_pair_in_n(&f, &pair.p, &pair.e, &pair.p, &s_).is_empty());
        assert_eq!(
            canonical_index_pair(&f, &set(&k, &[&[0]])),
            Err(DynamicsError::NotCompatible)
        );
        let whole = IndexPair::new(&k, k.full_set(), k.empty_set()).unwrap();
        let inv_k = invariant_part(&f, &k.full_set());
        assert!(validate_index_pair(&f, &whole.p, &whole.e, &inv_k).is_empty());
    }

    #[test]
    fn violations_are_reported() {
        let k = triangle();
        let w = MultivectorField::singletons(k.clone());
        let t = set(&k, &[&[0, 1, 2]]);
        let v = validate_index_pair(&w, &t, &k.empty_set(), &t);
        assert!(v.contains(&PairViolation::PNotClosed));
        assert!(v.contains(&PairViolation::LeavesP(s(&[0]))));
        let p = k.full_set();
        let e = set(&k, &[&[0]]);
        let v = validate_index_pair(&w, &p, &e, &t);
        assert!(v.contains(&PairViolation::WrongInvariantSet));
    }

    #[test]
    fn push_forward_examples() {
        let k = triangle();
        let w = MultivectorField::singletons(k.clone());
        let n = k.full_set();
        assert_eq!(push_forward(&w, &n, &n).unwrap(), n);
        assert!(push_forward(&w, &k.empty_set(), &n).unwrap().is_empty());
        let e = set(&k, &[&[0, 1]]);
        assert_eq!(push_forward(&w, &e, &n).unwrap(), k.closure(&e));
        assert_eq!(
            push_forward(&w, &n, &e),
            Err(DynamicsError::NotInN)
        );
        let t = set(&k, &[&[0, 1, 2]]);
        let pair = push_forward_pair(&w, &t, &n).unwrap();
        assert!(validate_index_pair_in_n(&w, &pair.p, &pair.e, &n, &t).is_empty());
    }

    #[test]
    fn paths_follow_the_map() {
        let k = triangle();
        let f = field(&k, &[&[&[0], &[0, 1]]]);
        let v0 = k.id(&s(&[0])).unwrap();
        let e = k.id(&s(&[0, 1])).unwrap();
        let v1 = k.id(&s(&[1])).unwrap();
        assert!(is_path(&f, &[v0, e, v1, v1]));
        assert!(!is_path(&f, &[v1, e]));
    }
}
