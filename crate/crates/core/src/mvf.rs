//! Multivector fields on a complex.
//!
//! A [`MultivectorField`] is a partition of the complex into convex
//! multivectors. Multivectors are kept in canonical order: sorted by their
//! lexicographically smallest member simplex, which also serves as the stable
//! identity of a multivector across serialization.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::{relative_homology, BettiVector, PrimeField};
use crate::complex::{Complex, ComplexError, Simplex, SimplexId, SimplexSet};

/// Position of a multivector in a field's canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MvId(pub usize);

/// Why a proposed partition is not a multivector field.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldDiagnostic {
    #[error("empty multivector at position {0}")]
    EmptyMultivector(usize),
    #[error("simplex {0} belongs to more than one multivector")]
    Overlap(Simplex),
    #[error("simplex {0} is not covered by any multivector")]
    Uncovered(Simplex),
    #[error("multivector {0:?} is not convex")]
    NotConvex(Vec<Simplex>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("invalid multivector field: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<FieldDiagnostic>),
    #[error("fields are not atomic rearrangements of each other ({removed} multivectors removed, {added} added)")]
    NotAtomic { removed: usize, added: usize },
    #[error("fields live on different complexes")]
    DifferentComplexes,
    #[error("cannot split: {0}")]
    BadSplit(String),
    #[error("cannot merge: {0}")]
    BadMerge(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Checks that `parts` partition `k` into non-empty convex sets.
pub fn validate_partition(k: &Complex, parts: &[SimplexSet]) -> Vec<FieldDiagnostic> {
    let mut out = Vec::new();
    let mut seen = k.empty_set();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            out.push(FieldDiagnostic::EmptyMultivector(i));
            continue;
        }
        for id in part.iter() {
            if !seen.insert(id) {
                out.push(FieldDiagnostic::Overlap(k.simplex(id).clone()));
            }
        }
        if !k.is_convex(part) {
            out.push(FieldDiagnostic::NotConvex(k.sorted_simplices(part)));
        }
    }
    for id in k.ids() {
        if !seen.contains(id) {
            out.push(FieldDiagnostic::Uncovered(k.simplex(id).clone()));
        }
    }
    out
}

/// A partition of a complex into convex multivectors.
pub struct MultivectorField {
    complex: Arc<Complex>,
    field: PrimeField,
    multivectors: Vec<SimplexSet>,
    assignment: Vec<MvId>,
    critical: Vec<OnceLock<bool>>,
}

impl MultivectorField {
    /// Validates `parts` and builds the field; homology over the two-element field.
    pub fn new(complex: Arc<Complex>, parts: Vec<SimplexSet>) -> Result<Self, FieldError> {
        Self::with_field(complex, parts, PrimeField::TWO)
    }

    pub fn with_field(
        complex: Arc<Complex>,
        mut parts: Vec<SimplexSet>,
        field: PrimeField,
    ) -> Result<Self, FieldError> {
        let diagnostics = validate_partition(&complex, &parts);
        if !diagnostics.is_empty() {
            return Err(FieldError::Invalid(diagnostics));
        }
        parts.sort_by_cached_key(|p| complex.simplex(complex.lex_min(p).unwrap()).clone());
        let mut assignment = vec![MvId(0); complex.len()];
        for (i, p) in parts.iter().enumerate() {
            for id in p.iter() {
                assignment[id.0] = MvId(i);
            }
        }
        let critical = (0..parts.len()).map(|_| OnceLock::new()).collect();
        Ok(MultivectorField {
            complex,
            field,
            multivectors: parts,
            assignment,
            critical,
        })
    }

    /// Builds a field from multivectors given as lists of simplices.
    pub fn from_simplices(
        complex: Arc<Complex>,
        parts: &[Vec<Simplex>],
    ) -> Result<Self, FieldError> {
        let sets = parts
            .iter()
            .map(|p| complex.set_from_simplices(p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(complex, sets)
    }

    /// Like [`from_simplices`](Self::from_simplices), but every simplex not
    /// mentioned becomes a singleton.
    pub fn from_simplices_filling(
        complex: Arc<Complex>,
        parts: &[Vec<Simplex>],
    ) -> Result<Self, FieldError> {
        let mut sets = parts
            .iter()
            .map(|p| complex.set_from_simplices(p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut covered = complex.empty_set();
        for s in &sets {
            covered.union_with(s);
        }
        for id in complex.ids().filter(|&i| !covered.contains(i)) {
            sets.push(complex.set_of([id]));
        }
        Self::new(complex, sets)
    }

    /// The field with every simplex in its own multivector.
    pub fn singletons(complex: Arc<Complex>) -> Self {
        let parts = complex.ids().map(|i| complex.set_of([i])).collect();
        Self::new(complex, parts).expect("singletons always form a field")
    }

    /// Same partition, homology over another prime field.
    pub fn with_prime(&self, field: PrimeField) -> Self {
        Self::with_field(self.complex.clone(), self.multivectors.clone(), field)
            .expect("partition already validated")
    }

    fn rebuild(&self, parts: Vec<SimplexSet>) -> Result<Self, FieldError> {
        Self::with_field(self.complex.clone(), parts, self.field)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn prime_field(&self) -> PrimeField {
        self.field
    }

    /// Number of multivectors.
    pub fn len(&self) -> usize {
        self.multivectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multivectors.is_empty()
    }

    pub fn multivectors(&self) -> &[SimplexSet] {
        &self.multivectors
    }

    pub fn multivector(&self, id: MvId) -> &SimplexSet {
        &self.multivectors[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = MvId> {
        (0..self.multivectors.len()).map(MvId)
    }

    /// `[σ]`: the multivector containing σ.
    pub fn mv_of(&self, s: SimplexId) -> MvId {
        self.assignment[s.0]
    }

    pub fn class_of(&self, s: SimplexId) -> &SimplexSet {
        self.multivector(self.mv_of(s))
    }

    /// Canonical identity of a multivector: its lexicographically smallest simplex.
    pub fn canonical_simplex(&self, id: MvId) -> &Simplex {
        self.complex
            .simplex(self.complex.lex_min(&self.multivectors[id.0]).unwrap())
    }

    /// F(σ) = cl(σ) ∪ [σ].
    pub fn fmap(&self, s: SimplexId) -> SimplexSet {
        let mut out = self.complex.closure_of(s);
        out.union_with(self.class_of(s));
        out
    }

    /// F(A) = union of F(σ) over σ ∈ A.
    pub fn fmap_set(&self, a: &SimplexSet) -> SimplexSet {
        let mut out = self.complex.closure(a);
        for id in self.mvs_meeting(a) {
            out.union_with(&self.multivectors[id.0]);
        }
        out
    }

    /// Multivectors that intersect `a`, in canonical order.
    pub fn mvs_meeting(&self, a: &SimplexSet) -> Vec<MvId> {
        let mut ids: Vec<MvId> = a.iter().map(|s| self.mv_of(s)).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Conley index of a single multivector, `H(cl V, mo V)`.
    pub fn multivector_homology(&self, id: MvId) -> BettiVector {
        let v = &self.multivectors[id.0];
        relative_homology(
            &self.complex,
            &self.complex.closure(v),
            &self.complex.mouth(v),
            self.field,
        )
        .expect("closure and mouth of a convex set form a pair")
    }

    /// V is critical iff `H(cl V, mo V) ≠ 0`. Cached per multivector.
    pub fn is_critical(&self, id: MvId) -> bool {
        *self.critical[id.0].get_or_init(|| !self.multivector_homology(id).is_zero())
    }

    /// True iff `a` is a union of whole multivectors.
    pub fn is_compatible(&self, a: &SimplexSet) -> bool {
        a.iter().all(|s| self.class_of(s).is_subset(a))
    }

    /// Smallest compatible superset: every multivector meeting `a`.
    pub fn compatible_closure(&self, a: &SimplexSet) -> SimplexSet {
        let mut out = a.clone();
        for id in self.mvs_meeting(a) {
            out.union_with(&self.multivectors[id.0]);
        }
        out
    }

    /// Splits multivector `id` into `part` and the remainder.
    pub fn split(&self, id: MvId, part: &SimplexSet) -> Result<Self, FieldError> {
        let whole = &self.multivectors[id.0];
        if part.is_empty() || !part.is_subset(whole) || part == whole {
            return Err(FieldError::BadSplit(
                "the part must be a non-empty proper subset of the multivector".into(),
            ));
        }
        let rest = whole.difference(part);
        let mut parts: Vec<SimplexSet> = self
            .multivectors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != id.0)
            .map(|(_, m)| m.clone())
            .collect();
        parts.push(part.clone());
        parts.push(rest);
        self.rebuild(parts).map_err(|e| match e {
            FieldError::Invalid(d) => FieldError::BadSplit(
                d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            ),
            other => other,
        })
    }

    /// Merges two distinct multivectors.
    pub fn merge(&self, a: MvId, b: MvId) -> Result<Self, FieldError> {
        if a == b {
            return Err(FieldError::BadMerge("a multivector cannot merge with itself".into()));
        }
        let merged = self.multivectors[a.0].union(&self.multivectors[b.0]);
        let mut parts: Vec<SimplexSet> = self
            .multivectors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a.0 && i != b.0)
            .map(|(_, m)| m.clone())
            .collect();
        parts.push(merged);
        self.rebuild(parts).map_err(|e| match e {
            FieldError::Invalid(d) => FieldError::BadMerge(
                d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            ),
            other => other,
        })
    }

    /// Maximal elements of a multivector under the face order.
    pub fn maximal_elements(&self, id: MvId) -> Vec<SimplexId> {
        let v = &self.multivectors[id.0];
        v.iter()
            .filter(|&s| {
                self.complex
                    .cofaces(s)
                    .iter()
                    .all(|&c| c == s || !v.contains(c))
            })
            .collect()
    }
}

impl Clone for MultivectorField {
    fn clone(&self) -> Self {
        MultivectorField {
            complex: self.complex.clone(),
            field: self.field,
            multivectors: self.multivectors.clone(),
            assignment: self.assignment.clone(),
            critical: self
                .critical
                .iter()
                .map(|c| {
                    let fresh = OnceLock::new();
                    if let Some(&v) = c.get() {
                        let _ = fresh.set(v);
                    }
                    fresh
                })
                .collect(),
        }
    }
}

impl PartialEq for MultivectorField {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex)
            && self.multivectors == other.multivectors
    }
}

impl Eq for MultivectorField {}

impl fmt::Debug for MultivectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<Vec<Simplex>> = self
            .multivectors
            .iter()
            .map(|m| self.complex.sorted_simplices(m))
            .collect();
        f.debug_struct("MultivectorField").field("multivectors", &parts).finish()
    }
}

/// An atomic refinement or coarsening between two fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomicRearrangement {
    /// One multivector `split` of the source became the two `parts`.
    Refinement {
        split: SimplexSet,
        parts: [SimplexSet; 2],
    },
    /// Two multivectors `parts` of the source became the single `merged`.
    Coarsening {
        parts: [SimplexSet; 2],
        merged: SimplexSet,
    },
}

impl AtomicRearrangement {
    pub fn is_refinement(&self) -> bool {
        matches!(self, AtomicRearrangement::Refinement { .. })
    }

    /// The merged multivector of a coarsening.
    pub fn merged(&self) -> Option<&SimplexSet> {
        match self {
            AtomicRearrangement::Coarsening { merged, .. } => Some(merged),
            AtomicRearrangement::Refinement { .. } => None,
        }
    }
}

/// Decides whether `to` is an atomic refinement or coarsening of `from`.
pub fn classify_rearrangement(
    from: &MultivectorField,
    to: &MultivectorField,
) -> Result<AtomicRearrangement, FieldError> {
    if from.complex() != to.complex() {
        return Err(FieldError::DifferentComplexes);
    }
    let a: HashSet<&SimplexSet> = from.multivectors.iter().collect();
    let b: HashSet<&SimplexSet> = to.multivectors.iter().collect();
    // both lists are canonically ordered, so the differences come out sorted
    let removed: Vec<&SimplexSet> = from.multivectors.iter().filter(|m| !b.contains(m)).collect();
    let added: Vec<&SimplexSet> = to.multivectors.iter().filter(|m| !a.contains(m)).collect();
    match (removed.len(), added.len()) {
        (1, 2) => Ok(AtomicRearrangement::Refinement {
            split: removed[0].clone(),
            parts: [added[0].clone(), added[1].clone()],
        }),
        (2, 1) => Ok(AtomicRearrangement::Coarsening {
            parts: [removed[0].clone(), removed[1].clone()],
            merged: added[0].clone(),
        }),
        (r, a) => Err(FieldError::NotAtomic {
            removed: r,
            added: a,
        }),
    }
}

/// Atomic refinements from `field` down to the singleton field.
///
/// Each step splits the first non-singleton multivector (canonical order) at
/// its lexicographically smallest maximal element.
pub fn refinement_path(field: &MultivectorField) -> Vec<MultivectorField> {
    let mut path = vec![field.clone()];
    loop {
        let cur = path.last().unwrap();
        let Some(id) = cur.ids().find(|&i| cur.multivector(i).len() > 1) else {
            break;
        };
        let k = cur.complex();
        let top = cur
            .maximal_elements(id)
            .into_iter()
            .min_by(|a, b| k.simplex(*a).cmp(k.simplex(*b)))
            .expect("non-empty multivector has a maximal element");
        let next = cur
            .split(id, &k.set_of([top]))
            .expect("removing a maximal element keeps both parts convex");
        path.push(next);
    }
    path
}

/// A sequence of atomic rearrangements from `from` to `to` through the
/// singleton field.
pub fn rearrangement_path(
    from: &MultivectorField,
    to: &MultivectorField,
) -> Result<Vec<MultivectorField>, FieldError> {
    if from.complex() != to.complex() {
        return Err(FieldError::DifferentComplexes);
    }
    let mut path = refinement_path(from);
    let mut back = refinement_path(to);
    back.pop();
    path.extend(back.into_iter().rev());
    Ok(path)
}

/// The intermediate field `{V₁ ∩ V₂}` with empty intersections dropped.
pub fn intersect_fields(
    a: &MultivectorField,
    b: &MultivectorField,
) -> Result<MultivectorField, FieldError> {
    if a.complex() != b.complex() {
        return Err(FieldError::DifferentComplexes);
    }
    let mut parts: Vec<SimplexSet> = Vec::new();
    for va in a.multivectors() {
        for id in b.mvs_meeting(va) {
            parts.push(va.intersection(b.multivector(id)));
        }
    }
    MultivectorField::with_field(a.complex.clone(), parts, a.field)
}
