//! Finite simplicial complexes and subsets of them.
//!
//! A [`Complex`] stores every simplex explicitly, sorted by dimension and then
//! lexicographically by vertex list, together with precomputed face and coface
//! tables. Subsets of a complex are [`SimplexSet`]s, dense bitsets over the
//! complex's [`SimplexId`]s.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque vertex identifier.
pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("repeated vertex {0} in simplex")]
    RepeatedVertex(VertexId),
    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(Simplex),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
}

/// A simplex, identified by its strictly increasing vertex list.
///
/// Ordering is lexicographic on the vertex list, so `[1] < [1, 2] < [1, 3] < [2]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Builds a simplex from vertices in any order. Duplicates are rejected.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self, ComplexError> {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(w[0]));
        }
        Ok(Simplex(v))
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `self ≤ other` in the face order: every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        face_leq(self, other)
    }

    /// Codimension-one faces; the `i`-th entry omits the `i`-th vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect(),
                )
            })
            .collect()
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|&i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    /// The join with a vertex not in the simplex.
    pub fn join(&self, v: VertexId) -> Result<Simplex, ComplexError> {
        Simplex::new(self.0.iter().copied().chain(std::iter::once(v)))
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = ComplexError;
    fn try_from(v: Vec<VertexId>) -> Result<Self, Self::Error> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// True iff `a` is a face of `b` (reflexive).
pub fn face_leq(a: &Simplex, b: &Simplex) -> bool {
    // both vertex lists are sorted
    let mut it = b.0.iter();
    a.0.iter().all(|x| it.any(|y| y == x))
}

/// Index of a simplex inside its [`Complex`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SimplexId(pub usize);

impl SimplexId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A subset of a complex, stored as a bitset over simplex ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplexSet {
    words: Vec<u64>,
    universe: usize,
}

impl SimplexSet {
    pub fn empty(universe: usize) -> Self {
        SimplexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(SimplexId(i));
        }
        s
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = SimplexId>) -> Self {
        let mut s = Self::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, id: SimplexId) -> bool {
        assert!(id.0 < self.universe, "simplex id out of range");
        let (w, b) = (id.0 / 64, id.0 % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, id: SimplexId) -> bool {
        let (w, b) = (id.0 / 64, id.0 % 64);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    pub fn contains(&self, id: SimplexId) -> bool {
        id.0 < self.universe && self.words[id.0 / 64] & (1 << (id.0 % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing id order.
    pub fn iter(&self) -> impl Iterator<Item = SimplexId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(SimplexId(wi * 64 + b))
            })
        })
    }

    pub fn first(&self) -> Option<SimplexId> {
        self.iter().next()
    }

    fn zip_with(&self, other: &SimplexSet, f: impl Fn(u64, u64) -> u64) -> SimplexSet {
        assert_eq!(self.universe, other.universe, "sets over different complexes");
        SimplexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &SimplexSet) -> SimplexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &SimplexSet) -> SimplexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &SimplexSet) -> SimplexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &SimplexSet) {
        assert_eq!(self.universe, other.universe, "sets over different complexes");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &SimplexSet) -> bool {
        assert_eq!(self.universe, other.universe, "sets over different complexes");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &SimplexSet) -> bool {
        assert_eq!(self.universe, other.universe, "sets over different complexes");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    pub fn intersects(&self, other: &SimplexSet) -> bool {
        !self.is_disjoint(other)
    }
}

impl fmt::Debug for SimplexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|i| i.0)).finish()
    }
}

/// Bidirectional table between human-readable vertex labels and ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexLabels {
    by_name: BTreeMap<String, VertexId>,
    by_id: BTreeMap<VertexId, String>,
}

impl VertexLabels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, id: VertexId) {
        let name = name.into();
        self.by_id.insert(id, name.clone());
        self.by_name.insert(name, id);
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: VertexId) -> Option<&str> {
        self.by_id.get(&id).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.by_name.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, VertexId)> {
        self.by_name.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Parses a label string such as `"CFG"` where every label is one character,
    /// or `"C,F,G"` for longer labels.
    pub fn simplex(&self, spec: &str) -> Result<Simplex, ComplexError> {
        let names: Vec<String> = if spec.contains(',') {
            spec.split(',').map(|s| s.trim().to_string()).collect()
        } else {
            spec.chars().map(|c| c.to_string()).collect()
        };
        let ids = names
            .iter()
            .map(|n| self.id(n).ok_or_else(|| ComplexError::UnknownLabel(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Simplex::new(ids)
    }

    /// Renders a simplex with labels where known, falling back to ids.
    pub fn render(&self, s: &Simplex) -> String {
        let parts: Vec<String> = s
            .vertices()
            .iter()
            .map(|&v| self.name(v).map_or_else(|| v.to_string(), str::to_string))
            .collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(",")
        }
    }
}

/// A finite simplicial complex, closed under taking faces.
#[derive(Clone)]
pub struct Complex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, SimplexId>,
    facets: Vec<Vec<SimplexId>>,
    cofacets: Vec<Vec<SimplexId>>,
    faces: Vec<Vec<SimplexId>>,
    cofaces: Vec<Vec<SimplexId>>,
    /// `dim_start[k]..dim_start[k + 1]` are the ids of the k-simplices.
    dim_start: Vec<usize>,
}

impl Complex {
    /// Builds the complex generated by the given simplices (typically the
    /// maximal ones); every face is added.
    pub fn from_maximal(generators: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all = BTreeSet::new();
        for g in generators {
            if all.contains(&g) {
                continue;
            }
            all.extend(g.faces());
        }
        Self::from_closed(all)
    }

    fn from_closed(all: BTreeSet<Simplex>) -> Self {
        let mut simplices: Vec<Simplex> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        let index: HashMap<Simplex, SimplexId> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), SimplexId(i)))
            .collect();
        let n = simplices.len();
        let max_dim = simplices.last().map_or(0, Simplex::dim);
        let mut dim_start = vec![0; max_dim + 2];
        for s in &simplices {
            dim_start[s.dim() + 1] += 1;
        }
        for k in 1..dim_start.len() {
            dim_start[k] += dim_start[k - 1];
        }
        if n == 0 {
            dim_start = vec![0];
        }

        let mut facets = vec![Vec::new(); n];
        let mut cofacets = vec![Vec::new(); n];
        for (i, s) in simplices.iter().enumerate() {
            for f in s.facets() {
                let fid = index[&f];
                facets[i].push(fid);
                cofacets[fid.0].push(SimplexId(i));
            }
        }
        let mut faces = vec![Vec::new(); n];
        let mut cofaces = vec![Vec::new(); n];
        for (i, s) in simplices.iter().enumerate() {
            let mut fs: Vec<SimplexId> = s.faces().iter().map(|f| index[f]).collect();
            fs.sort_unstable();
            for &f in &fs {
                cofaces[f.0].push(SimplexId(i));
            }
            faces[i] = fs;
        }
        Complex {
            simplices,
            index,
            facets,
            cofacets,
            faces,
            cofaces,
            dim_start,
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension of the complex; 0 for the empty complex.
    pub fn dim(&self) -> usize {
        self.simplices.last().map_or(0, Simplex::dim)
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id.0]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn ids(&self) -> impl Iterator<Item = SimplexId> {
        (0..self.simplices.len()).map(SimplexId)
    }

    pub fn id(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    pub fn require(&self, s: &Simplex) -> Result<SimplexId, ComplexError> {
        self.id(s).ok_or_else(|| ComplexError::UnknownSimplex(s.clone()))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids_of_dim(0).map(|id| self.simplices[id.0].vertices()[0])
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.vertex_ids().max()
    }

    /// Ids of the k-simplices, a contiguous range.
    pub fn ids_of_dim(&self, k: usize) -> impl Iterator<Item = SimplexId> {
        self.dim_range(k).map(SimplexId)
    }

    pub fn dim_range(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.dim_start.len() {
            let end = *self.dim_start.last().unwrap_or(&0);
            return end..end;
        }
        self.dim_start[k]..self.dim_start[k + 1]
    }

    pub fn dim_of(&self, id: SimplexId) -> usize {
        self.simplices[id.0].dim()
    }

    /// Codimension-one faces, ordered by the position of the omitted vertex.
    pub fn facets(&self, id: SimplexId) -> &[SimplexId] {
        &self.facets[id.0]
    }

    pub fn cofacets(&self, id: SimplexId) -> &[SimplexId] {
        &self.cofacets[id.0]
    }

    /// cl(σ): all faces including σ.
    pub fn faces(&self, id: SimplexId) -> &[SimplexId] {
        &self.faces[id.0]
    }

    /// All cofaces including σ.
    pub fn cofaces(&self, id: SimplexId) -> &[SimplexId] {
        &self.cofaces[id.0]
    }

    pub fn face_leq(&self, a: SimplexId, b: SimplexId) -> bool {
        self.faces[b.0].binary_search(&a).is_ok()
    }

    pub fn empty_set(&self) -> SimplexSet {
        SimplexSet::empty(self.len())
    }

    pub fn full_set(&self) -> SimplexSet {
        SimplexSet::full(self.len())
    }

    pub fn set_of(&self, ids: impl IntoIterator<Item = SimplexId>) -> SimplexSet {
        SimplexSet::from_ids(self.len(), ids)
    }

    pub fn set_from_simplices<'a>(
        &self,
        simplices: impl IntoIterator<Item = &'a Simplex>,
    ) -> Result<SimplexSet, ComplexError> {
        let mut s = self.empty_set();
        for x in simplices {
            s.insert(self.require(x)?);
        }
        Ok(s)
    }

    /// Members of a set as simplices, in id order.
    pub fn simplices_of<'a>(&'a self, set: &'a SimplexSet) -> impl Iterator<Item = &'a Simplex> + 'a {
        set.iter().map(move |id| &self.simplices[id.0])
    }

    /// Members of a set sorted lexicographically.
    pub fn sorted_simplices(&self, set: &SimplexSet) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = self.simplices_of(set).cloned().collect();
        v.sort();
        v
    }

    /// Lexicographically smallest member.
    pub fn lex_min(&self, set: &SimplexSet) -> Option<SimplexId> {
        set.iter().min_by(|a, b| self.simplices[a.0].cmp(&self.simplices[b.0]))
    }

    pub fn closure_of(&self, id: SimplexId) -> SimplexSet {
        self.set_of(self.faces[id.0].iter().copied())
    }

    /// cl(A): every face of every member.
    pub fn closure(&self, set: &SimplexSet) -> SimplexSet {
        let mut out = self.empty_set();
        for id in set.iter() {
            for &f in &self.faces[id.0] {
                out.insert(f);
            }
        }
        out
    }

    /// Every coface of every member (the smallest open superset).
    pub fn star(&self, set: &SimplexSet) -> SimplexSet {
        let mut out = self.empty_set();
        for id in set.iter() {
            for &f in &self.cofaces[id.0] {
                out.insert(f);
            }
        }
        out
    }

    /// mo(A) = cl(A) \ A.
    pub fn mouth(&self, set: &SimplexSet) -> SimplexSet {
        self.closure(set).difference(set)
    }

    pub fn is_closed(&self, set: &SimplexSet) -> bool {
        set.iter()
            .all(|id| self.facets[id.0].iter().all(|&f| set.contains(f)))
    }

    pub fn is_open(&self, set: &SimplexSet) -> bool {
        set.iter()
            .all(|id| self.cofacets[id.0].iter().all(|&f| set.contains(f)))
    }

    /// Smallest convex superset: everything sandwiched between two members.
    pub fn convex_hull(&self, set: &SimplexSet) -> SimplexSet {
        self.closure(set).intersection(&self.star(set))
    }

    /// A is convex iff every ρ with σ ≤ ρ ≤ τ for σ, τ ∈ A lies in A.
    pub fn is_convex(&self, set: &SimplexSet) -> bool {
        self.convex_hull(set) == *set
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("simplices", &self.simplices)
            .finish()
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for Complex {}
