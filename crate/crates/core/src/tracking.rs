//! The Tracking Protocol and the zigzag filtrations it produces.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::BettiVector;
use crate::complex::{Complex, SimplexSet};
use crate::dynamics::{
    invariant_part, is_isolated_invariant_set, isolates, push_forward_pair, validate_index_pair,
    validate_index_pair_in_n, IndexPair, PairViolation,
};
use crate::mvf::{classify_rearrangement, intersect_fields, AtomicRearrangement, FieldError, MultivectorField};
use crate::zigzag::{pair_zigzag_barcode, Bar, Barcode, PairZigzag, Position, ZigzagError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackingError {
    #[error("the seed is empty")]
    EmptySeed,
    #[error("the set is not an isolated invariant set under field {0}")]
    NotIsolated(usize),
    #[error("field {index} to {next}: {source}")]
    Rearrangement {
        index: usize,
        next: usize,
        #[source]
        source: FieldError,
    },
    #[error("the sets are not adjacent: cl(S) ∪ cl(S') does not isolate both")]
    NotAdjacent,
    #[error("step case {0} has no connecting index pair")]
    NoConnectingPair(StepCase),
    #[error("{what} failed index-pair validation: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Validation {
        what: String,
        violations: Vec<PairViolation>,
    },
    #[error("at least one field is required")]
    NoFields,
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
}

/// Which rule of the protocol produced `S'`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepCase {
    /// Refinement.
    A,
    /// Coarsening with the merged multivector inside `S`.
    B,
    /// Coarsening with the merged multivector outside `S`.
    C,
    /// Coarsening straddling `S`, continuation through the hull.
    D,
    /// Continuation impossible; `S` and `S'` are adjacent.
    F,
    /// Continuation impossible and no common isolating set.
    G,
}

impl StepCase {
    pub fn letter(self) -> char {
        match self {
            StepCase::A => 'a',
            StepCase::B => 'b',
            StepCase::C => 'c',
            StepCase::D => 'd',
            StepCase::F => 'f',
            StepCase::G => 'g',
        }
    }

    pub fn is_continuation(self) -> bool {
        matches!(self, StepCase::A | StepCase::B | StepCase::C | StepCase::D)
    }
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One application of the protocol.
#[derive(Clone, Debug)]
pub struct TrackingStep {
    /// 1-based index of the source field.
    pub index: usize,
    pub case: StepCase,
    pub rearrangement: AtomicRearrangement,
    pub s: SimplexSet,
    pub s_next: SimplexSet,
    /// `⟨S ∪ V⟩` for straddling coarsenings.
    pub hull: Option<SimplexSet>,
    /// The common index pair of `S` and `S'` in cases a to d.
    pub connecting: Option<IndexPair>,
    /// Beyond-continuation segment for cases f and g.
    pub segment: Option<PairZigzag>,
    /// Set when the segment is the naive intersection zigzag.
    pub heuristic: bool,
    pub notes: Vec<String>,
}

/// `⟨X⟩`: the smallest convex, compatible set containing `x`.
pub fn hull(field: &MultivectorField, x: &SimplexSet) -> SimplexSet {
    let k = field.complex();
    let mut cur = x.clone();
    loop {
        let next = k.convex_hull(&field.compatible_closure(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// `H(cl S, mo S)`.
pub fn conley_index(field: &MultivectorField, s: &SimplexSet) -> BettiVector {
    IndexPair::of_closure(field.complex(), s).homology(field)
}

fn check_pair_for(
    field: &MultivectorField,
    pair: &IndexPair,
    s: &SimplexSet,
    what: impl Into<String>,
) -> Result<(), TrackingError> {
    let violations = validate_index_pair(field, &pair.p, &pair.e, s);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(TrackingError::Validation {
            what: what.into(),
            violations,
        })
    }
}

/// Applies the protocol to `s` for the rearrangement `v → v2`.
///
/// `index` is the 1-based position of `v` in the sequence and only labels the
/// result. Case g carries the naive zigzag only when `heuristic_g` is set.
pub fn track_step(
    v: &MultivectorField,
    v2: &MultivectorField,
    s: &SimplexSet,
    index: usize,
    heuristic_g: bool,
) -> Result<TrackingStep, TrackingError> {
    if s.is_empty() {
        return Err(TrackingError::EmptySeed);
    }
    if !is_isolated_invariant_set(v, s) {
        return Err(TrackingError::NotIsolated(index));
    }
    let rearrangement =
        classify_rearrangement(v, v2).map_err(|source| TrackingError::Rearrangement {
            index,
            next: index + 1,
            source,
        })?;
    let k = v.complex();
    let mut step = TrackingStep {
        index,
        case: StepCase::A,
        rearrangement: rearrangement.clone(),
        s: s.clone(),
        s_next: k.empty_set(),
        hull: None,
        connecting: None,
        segment: None,
        heuristic: false,
        notes: Vec::new(),
    };
    let merged = match &rearrangement {
        AtomicRearrangement::Refinement { .. } => None,
        AtomicRearrangement::Coarsening { merged, .. } => Some(merged),
    };
    match merged {
        None => {
            step.s_next = invariant_part(v2, s);
            step.connecting = Some(IndexPair::of_closure(k, s));
        }
        Some(m) if m.is_subset(s) => {
            step.case = StepCase::B;
            step.s_next = invariant_part(v2, s);
            step.connecting = Some(IndexPair::of_closure(k, s));
        }
        Some(m) if m.is_disjoint(s) => {
            step.case = StepCase::C;
            step.s_next = invariant_part(v2, s);
            step.connecting = Some(IndexPair::of_closure(k, s));
        }
        Some(m) => {
            let a = hull(v2, &s.union(m));
            step.s_next = invariant_part(v2, &a);
            if invariant_part(v, &a) == *s {
                step.case = StepCase::D;
                step.connecting = Some(IndexPair::of_closure(k, &a));
            } else {
                step.notes.push("continuation impossible (case e)".into());
                match adjacency_zigzag(v, v2, s, &step.s_next, index) {
                    Ok(z) => {
                        step.case = StepCase::F;
                        step.segment = Some(z);
                    }
                    Err(TrackingError::NotAdjacent) => {
                        step.case = StepCase::G;
                        step.notes.push("no common isolating set".into());
                        if heuristic_g {
                            step.segment = Some(naive_intersection_zigzag(k, s, &step.s_next, index)?);
                            step.heuristic = true;
                            step.notes
                                .push("naive intersection zigzag, middle pair is not an index pair in general".into());
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            step.hull = Some(a);
        }
    }
    if let Some(q) = &step.connecting {
        check_pair_for(v, q, s, format!("connecting pair of step {index} under field {index}"))?;
        check_pair_for(
            v2,
            q,
            &step.s_next,
            format!("connecting pair of step {index} under field {}", index + 1),
        )?;
    }
    Ok(step)
}

/// The connecting index pair of a continuation step.
pub fn continuation_pair(step: &TrackingStep) -> Result<&IndexPair, TrackingError> {
    step.connecting
        .as_ref()
        .ok_or(TrackingError::NoConnectingPair(step.case))
}

/// Connecting pairs of every continuation step of a trace.
pub fn continuation_pairs(steps: &[TrackingStep]) -> Result<Vec<IndexPair>, TrackingError> {
    steps.iter().map(|s| continuation_pair(s).cloned()).collect()
}

/// `(P,E) ⊇ (P ∩ pf(cl S, P), E ∩ pf(mo S, P)) ⊆ (pf(cl S, P), pf(mo S, P)) ⊇ (cl S, mo S)`,
/// every pair checked as an index pair for `S`.
pub fn connect_pair_to_canonical(
    field: &MultivectorField,
    s: &SimplexSet,
    pair: &IndexPair,
    tag: Position,
) -> Result<PairZigzag, TrackingError> {
    let k = field.complex();
    check_pair_for(field, pair, s, "pair to connect")?;
    let pf = push_forward_pair(field, s, &pair.p).map_err(|_| TrackingError::Validation {
        what: "push forward".into(),
        violations: vec![],
    })?;
    let meet = pair.intersection(&pf);
    let canon = IndexPair::of_closure(k, s);
    let pairs = vec![pair.clone(), meet, pf, canon];
    for (i, q) in pairs.iter().enumerate() {
        check_pair_for(field, q, s, format!("pair {} of the connecting filtration", i + 1))?;
    }
    let mut z = PairZigzag::tagged(pairs, vec![tag; 4])?;
    z.dedup();
    Ok(z)
}

/// Reverses a zigzag.
pub fn reversed(z: &PairZigzag) -> PairZigzag {
    let pairs: Vec<IndexPair> = z.pairs().iter().rev().cloned().collect();
    let tags: Vec<Position> = z.tags().iter().rev().copied().collect();
    PairZigzag::tagged(pairs, tags).expect("reversal keeps inclusions")
}

/// A run of continuation steps as one zigzag through the canonical pairs:
/// `(P₁,E₁) ⊇ … ⊇ (cl S₂, mo S₂) ⊆ … ⊆ (P₂,E₂) ⊇ …`.
///
/// `pairs[i]` connects `sets[i]` under `fields[i]` and `sets[i + 1]` under `fields[i + 1]`.
pub fn continuation_to_zigzag(
    pairs: &[IndexPair],
    sets: &[SimplexSet],
    fields: &[MultivectorField],
) -> Result<PairZigzag, TrackingError> {
    if pairs.is_empty() || sets.len() != pairs.len() + 1 || fields.len() != sets.len() {
        return Err(TrackingError::NoFields);
    }
    let mut z = PairZigzag::tagged(vec![pairs[0].clone()], vec![Position::Field(1)])?;
    for i in 1..pairs.len() {
        let tag = Position::Field(i + 1);
        z.extend(connect_pair_to_canonical(&fields[i], &sets[i], &pairs[i - 1], tag)?)?;
        z.extend(reversed(&connect_pair_to_canonical(&fields[i], &sets[i], &pairs[i], tag)?))?;
    }
    Ok(z)
}

/// The five-pair filtration through `B = cl S ∪ cl S'` for adjacent sets.
pub fn adjacency_zigzag(
    v: &MultivectorField,
    v2: &MultivectorField,
    s: &SimplexSet,
    s2: &SimplexSet,
    index: usize,
) -> Result<PairZigzag, TrackingError> {
    let k = v.complex();
    let b = k.closure(s).union(&k.closure(s2));
    if !isolates(v, &b, s) || !isolates(v2, &b, s2) {
        return Err(TrackingError::NotAdjacent);
    }
    let left = push_forward_pair(v, s, &b).expect("S lies in B");
    let right = push_forward_pair(v2, s2, &b).expect("S' lies in B");
    let meet = left.intersection(&right);
    let middle_field = intersect_fields(v, v2).expect("same complex");
    let meet_inv = invariant_part(&middle_field, &meet.interior());
    for (what, field, pair, set) in [
        ("left push forward", v, &left, s),
        ("right push forward", v2, &right, s2),
        ("intersected pair", &middle_field, &meet, &meet_inv),
    ] {
        let violations = validate_index_pair_in_n(field, &pair.p, &pair.e, &b, set);
        if !violations.is_empty() {
            return Err(TrackingError::Validation {
                what: what.into(),
                violations,
            });
        }
    }
    let pairs = vec![
        IndexPair::of_closure(k, s),
        left,
        meet,
        right,
        IndexPair::of_closure(k, s2),
    ];
    let tags = vec![
        Position::Field(index),
        Position::Field(index),
        Position::Between(index),
        Position::Field(index + 1),
        Position::Field(index + 1),
    ];
    Ok(PairZigzag::tagged(pairs, tags)?)
}

/// `(P₁,E₁) ⊇ (P₁ ∩ P₂, E₁ ∩ E₂) ⊆ (P₂,E₂)` for arbitrary pairs.
pub fn naive_pair_zigzag(
    left: &IndexPair,
    right: &IndexPair,
    tags: [Position; 3],
) -> Result<PairZigzag, TrackingError> {
    let meet = left.intersection(right);
    Ok(PairZigzag::tagged(
        vec![left.clone(), meet, right.clone()],
        tags.to_vec(),
    )?)
}

/// The naive zigzag on canonical pairs,
/// `(cl S, mo S) ⊇ (cl S ∩ cl S', mo S ∩ mo S') ⊆ (cl S', mo S')`.
pub fn naive_intersection_zigzag(
    k: &Complex,
    s: &SimplexSet,
    s2: &SimplexSet,
    index: usize,
) -> Result<PairZigzag, TrackingError> {
    naive_pair_zigzag(
        &IndexPair::of_closure(k, s),
        &IndexPair::of_closure(k, s2),
        [
            Position::Field(index),
            Position::Between(index),
            Position::Field(index + 1),
        ],
    )
}

/// Options for [`run_protocol`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ProtocolOptions {
    /// Continue through case g with the naive intersection zigzag.
    pub heuristic_g: bool,
}

/// Everything produced by tracking a seed through a sequence of fields.
#[derive(Clone, Debug)]
pub struct TrackingTrace {
    pub seed: SimplexSet,
    pub steps: Vec<TrackingStep>,
    pub zigzag: PairZigzag,
    pub barcode: Barcode,
    /// Bars reindexed by field (1-based).
    pub step_bars: Vec<Bar>,
    /// Number of fields the trace covers.
    pub fields_covered: usize,
    /// The trace stopped at an unresolved case g.
    pub broken: bool,
    /// The trace stopped because `S'` became empty.
    pub vanished: bool,
    /// Some segment is the naive heuristic.
    pub heuristic_used: bool,
}

impl TrackingTrace {
    pub fn cases(&self) -> Vec<StepCase> {
        self.steps.iter().map(|s| s.case).collect()
    }
}

/// Tracks `seed` through `fields`, assembling one zigzag for the whole run.
pub fn run_protocol(
    fields: &[MultivectorField],
    seed: &SimplexSet,
    options: ProtocolOptions,
) -> Result<TrackingTrace, TrackingError> {
    let first = fields.first().ok_or(TrackingError::NoFields)?;
    let k = first.complex();
    if seed.is_empty() {
        return Err(TrackingError::EmptySeed);
    }
    if !is_isolated_invariant_set(first, seed) {
        return Err(TrackingError::NotIsolated(1));
    }
    let mut zigzag = PairZigzag::tagged(vec![IndexPair::of_closure(k, seed)], vec![Position::Field(1)])?;
    let mut current = IndexPair::of_closure(k, seed);
    let mut s = seed.clone();
    let mut steps = Vec::new();
    let mut broken = false;
    let mut vanished = false;
    let mut heuristic_used = false;
    let mut covered = 1;

    for i in 0..fields.len() - 1 {
        let index = i + 1;
        let (v, v2) = (&fields[i], &fields[i + 1]);
        let step = track_step(v, v2, &s, index, options.heuristic_g)?;
        let here = Position::Field(index);
        match step.case {
            StepCase::A | StepCase::B | StepCase::C | StepCase::D => {
                let q = step.connecting.clone().expect("continuation has a pair");
                zigzag.extend(connect_pair_to_canonical(v, &s, &current, here)?)?;
                zigzag.extend(reversed(&connect_pair_to_canonical(v, &s, &q, here)?))?;
                current = q;
            }
            StepCase::F | StepCase::G => {
                let Some(segment) = step.segment.clone() else {
                    steps.push(step);
                    broken = true;
                    break;
                };
                zigzag.extend(connect_pair_to_canonical(v, &s, &current, here)?)?;
                zigzag.extend(segment)?;
                heuristic_used |= step.heuristic;
                current = IndexPair::of_closure(k, &step.s_next);
            }
        }
        covered = index + 1;
        s = step.s_next.clone();
        steps.push(step);
        if s.is_empty() {
            vanished = true;
            break;
        }
    }
    if !broken && !vanished {
        // close the run at the canonical pair of the last set
        let last = &fields[covered - 1];
        zigzag.extend(connect_pair_to_canonical(last, &s, &current, Position::Field(covered))?)?;
    }
    zigzag.dedup();
    let barcode = pair_zigzag_barcode(k, &zigzag, first.prime_field());
    let step_bars = barcode.step_bars(zigzag.tags());
    Ok(TrackingTrace {
        seed: seed.clone(),
        steps,
        zigzag,
        barcode,
        step_bars,
        fields_covered: covered,
        broken,
        vanished,
        heuristic_used,
    })
}
