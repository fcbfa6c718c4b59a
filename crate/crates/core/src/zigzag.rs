//! Zigzag persistence of sequences of index pairs.
//!
//! Each pair `(P, E)` is realized as the subcomplex `P ∪ w∗E` of one cone over
//! the ambient complex, so pair inclusions become subcomplex inclusions and
//! `H_k(P, E)` becomes reduced homology in degree `k`. The barcode is read off
//! from the generalized rank function `rk[b, d]` (the rank of the map from the
//! limit to the colimit of the module restricted to `[b, d]`) by Möbius
//! inversion.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BettiVector, ConeComplex, HomologySpace, Matrix, PrimeField, SpanBasis};
use crate::complex::Complex;
use crate::dynamics::IndexPair;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZigzagError {
    #[error("pairs {0} and {1} are not related by inclusion")]
    NotInclusion(usize, usize),
    #[error("the zigzag is empty")]
    Empty,
    #[error("expected {expected} position tags, got {got}")]
    TagCount { expected: usize, got: usize },
}

/// Direction of the inclusion between consecutive pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Arrow {
    /// `(Pᵢ, Eᵢ) ⊆ (Pᵢ₊₁, Eᵢ₊₁)`
    Forward,
    /// `(Pᵢ, Eᵢ) ⊇ (Pᵢ₊₁, Eᵢ₊₁)`
    Backward,
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arrow::Forward => "⊆",
            Arrow::Backward => "⊇",
        })
    }
}

/// Which field of a tracked sequence a zigzag position belongs to (1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Position {
    /// An index pair under field `i`.
    Field(usize),
    /// An intersected pair between fields `i` and `i + 1`.
    Between(usize),
}

impl Position {
    /// Field index at which a bar starting here is born.
    pub fn birth_step(self) -> usize {
        match self {
            Position::Field(i) => i,
            Position::Between(i) => i + 1,
        }
    }

    /// Field index at which a bar ending here dies.
    pub fn death_step(self) -> usize {
        match self {
            Position::Field(i) | Position::Between(i) => i,
        }
    }
}

/// An alternating sequence of pair inclusions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairZigzag {
    pairs: Vec<IndexPair>,
    arrows: Vec<Arrow>,
    tags: Vec<Position>,
}

fn arrow_between(a: &IndexPair, b: &IndexPair) -> Option<Arrow> {
    if a.is_subpair_of(b) {
        Some(Arrow::Forward)
    } else if b.is_subpair_of(a) {
        Some(Arrow::Backward)
    } else {
        None
    }
}

impl PairZigzag {
    /// Infers the arrows; every position is tagged with field 1.
    pub fn new(pairs: Vec<IndexPair>) -> Result<Self, ZigzagError> {
        let tags = vec![Position::Field(1); pairs.len()];
        Self::tagged(pairs, tags)
    }

    pub fn tagged(pairs: Vec<IndexPair>, tags: Vec<Position>) -> Result<Self, ZigzagError> {
        if pairs.is_empty() {
            return Err(ZigzagError::Empty);
        }
        if tags.len() != pairs.len() {
            return Err(ZigzagError::TagCount {
                expected: pairs.len(),
                got: tags.len(),
            });
        }
        let arrows = pairs
            .windows(2)
            .enumerate()
            .map(|(i, w)| arrow_between(&w[0], &w[1]).ok_or(ZigzagError::NotInclusion(i + 1, i + 2)))
            .collect::<Result<_, _>>()?;
        Ok(PairZigzag { pairs, arrows, tags })
    }

    /// Checks claimed arrows against the pairs.
    pub fn with_arrows(
        pairs: Vec<IndexPair>,
        arrows: Vec<Arrow>,
        tags: Vec<Position>,
    ) -> Result<Self, ZigzagError> {
        if pairs.is_empty() {
            return Err(ZigzagError::Empty);
        }
        if arrows.len() + 1 != pairs.len() || tags.len() != pairs.len() {
            return Err(ZigzagError::TagCount {
                expected: pairs.len(),
                got: tags.len(),
            });
        }
        for (i, (w, a)) in pairs.windows(2).zip(&arrows).enumerate() {
            let ok = match a {
                Arrow::Forward => w[0].is_subpair_of(&w[1]),
                Arrow::Backward => w[1].is_subpair_of(&w[0]),
            };
            if !ok {
                return Err(ZigzagError::NotInclusion(i + 1, i + 2));
            }
        }
        Ok(PairZigzag { pairs, arrows, tags })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[IndexPair] {
        &self.pairs
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn tags(&self) -> &[Position] {
        &self.tags
    }

    /// Appends `other`, whose first pair must relate to our last one by inclusion.
    /// Identical junction pairs with the same tag are merged.
    pub fn extend(&mut self, other: PairZigzag) -> Result<(), ZigzagError> {
        let last = self.pairs.last().expect("zigzags are non-empty");
        let mut pairs = other.pairs.into_iter();
        let mut tags = other.tags.into_iter();
        let mut arrows = other.arrows.into_iter();
        let first = pairs.next().expect("zigzags are non-empty");
        let first_tag = tags.next().unwrap();
        if first != *last || first_tag != *self.tags.last().unwrap() {
            let a = arrow_between(last, &first)
                .ok_or(ZigzagError::NotInclusion(self.pairs.len(), self.pairs.len() + 1))?;
            self.arrows.push(a);
            self.pairs.push(first);
            self.tags.push(first_tag);
        }
        for ((p, t), a) in pairs.zip(tags).zip(arrows.by_ref()) {
            self.arrows.push(a);
            self.pairs.push(p);
            self.tags.push(t);
        }
        Ok(())
    }

    /// Drops consecutive duplicate pairs carrying the same tag.
    pub fn dedup(&mut self) {
        let mut pairs: Vec<IndexPair> = Vec::with_capacity(self.pairs.len());
        let mut tags = Vec::with_capacity(self.pairs.len());
        let mut arrows = Vec::new();
        for (i, p) in self.pairs.drain(..).enumerate() {
            if pairs.last() == Some(&p) && tags.last() == Some(&self.tags[i]) {
                continue;
            }
            if i > 0 {
                arrows.push(arrow_between(pairs.last().unwrap(), &p).unwrap());
            }
            pairs.push(p);
            tags.push(self.tags[i]);
        }
        self.pairs = pairs;
        self.tags = tags;
        self.arrows = arrows;
    }
}

/// An interval summand `[birth, death]` in dimension `dim` (1-based, inclusive).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: usize,
    pub death: usize,
}

/// A multiset of bars over a zigzag of a given length.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Barcode {
    pub length: usize,
    pub bars: Vec<Bar>,
}

impl Barcode {
    pub fn in_dim(&self, k: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == k)
    }

    /// Number of bars containing position `i` in dimension `k`.
    pub fn multiplicity_at(&self, k: usize, i: usize) -> usize {
        self.in_dim(k).filter(|b| b.birth <= i && i <= b.death).count()
    }

    /// Every bar spans the whole zigzag.
    pub fn is_full(&self) -> bool {
        self.bars.iter().all(|b| b.birth == 1 && b.death == self.length)
    }

    /// Checks bar counts against the Betti numbers at every position.
    pub fn consistent_with(&self, betti: &[BettiVector]) -> bool {
        betti.len() == self.length
            && betti.iter().enumerate().all(|(i, b)| {
                (0..b.len()).all(|k| self.multiplicity_at(k, i + 1) == b.get(k))
            })
            && self.bars.iter().all(|b| b.dim < betti.first().map_or(0, |x| x.len()))
    }

    /// Bars reindexed by field step through the position tags.
    pub fn step_bars(&self, tags: &[Position]) -> Vec<Bar> {
        let mut out: Vec<Bar> = self
            .bars
            .iter()
            .map(|b| Bar {
                dim: b.dim,
                birth: tags[b.birth - 1].birth_step(),
                death: tags[b.death - 1].death_step(),
            })
            .collect();
        out.sort();
        out
    }

    /// One line per bar, drawn over the positions.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for b in &self.bars {
            let line: String = (1..=self.length)
                .map(|i| if b.birth <= i && i <= b.death { '█' } else { '·' })
                .collect();
            out.push_str(&format!(
                "Dimension: {}  [{:>3}, {:>3}]  {}\n",
                b.dim, b.birth, b.death, line
            ));
        }
        out
    }
}

/// Subspace operations on coordinate vectors.
struct Subspace;

impl Subspace {
    fn basis(vectors: Vec<Vec<u32>>, len: usize, field: PrimeField) -> Vec<Vec<u32>> {
        let mut span = SpanBasis::new(field, len);
        vectors.into_iter().filter(|v| span.insert(v)).collect()
    }

    fn image(m: &Matrix, w: &[Vec<u32>], field: PrimeField) -> Vec<Vec<u32>> {
        let v = w.iter().map(|x| m.apply(x, field)).collect();
        Self::basis(v, m.rows(), field)
    }

    /// `{ y : m y ∈ span(w) }`.
    fn preimage(m: &Matrix, w: &[Vec<u32>], field: PrimeField) -> Vec<Vec<u32>> {
        let n = m.cols();
        let mut cols: Vec<Vec<u32>> = (0..n).map(|c| m.column(c)).collect();
        cols.extend(w.iter().map(|x| x.iter().map(|&a| field.neg(a)).collect()));
        let big = Matrix::from_columns(m.rows(), &cols);
        let ys = big.kernel(field).into_iter().map(|v| v[..n].to_vec()).collect();
        Self::basis(ys, n, field)
    }

    fn sum_dim(a: &[Vec<u32>], b: &[Vec<u32>], len: usize, field: PrimeField) -> usize {
        let mut span = SpanBasis::new(field, len);
        for v in a.iter().chain(b) {
            span.insert(v);
        }
        span.rank()
    }
}

/// Homology spaces and inclusion-induced maps of a zigzag in one degree.
struct DegreeModule {
    ranks: Vec<usize>,
    /// For each arrow: the matrix in its own direction of inclusion.
    maps: Vec<Matrix>,
}

fn degree_module(
    cone: &ConeComplex,
    z: &PairZigzag,
    k: usize,
    field: PrimeField,
) -> DegreeModule {
    let spaces: Vec<HomologySpace> = z
        .pairs
        .iter()
        .map(|pair| HomologySpace::new(cone.complex(), &cone.embed(&pair.p, &pair.e), k, field))
        .collect();
    let maps = z
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| match a {
            Arrow::Forward => spaces[i].induced_map(&spaces[i + 1]),
            Arrow::Backward => spaces[i + 1].induced_map(&spaces[i]),
        })
        .collect();
    DegreeModule {
        ranks: spaces.iter().map(HomologySpace::rank).collect(),
        maps,
    }
}

impl DegreeModule {
    /// `rk[b][d]` for all `b ≤ d` (0-based), zero elsewhere.
    fn generalized_ranks(&self, arrows: &[Arrow], field: PrimeField) -> Vec<Vec<usize>> {
        let n = self.ranks.len();
        let mut rk = vec![vec![0; n]; n];
        for b in 0..n {
            let unit = |r: usize| -> Vec<Vec<u32>> {
                (0..r)
                    .map(|i| {
                        let mut v = vec![0; r];
                        v[i] = 1;
                        v
                    })
                    .collect()
            };
            // image of the limit and kernel towards the colimit, both in V_d
            let mut w = unit(self.ranks[b]);
            let mut ker: Vec<Vec<u32>> = Vec::new();
            for d in b..n {
                if d > b {
                    let m = &self.maps[d - 1];
                    match arrows[d - 1] {
                        Arrow::Forward => {
                            w = Subspace::image(m, &w, field);
                            ker = Subspace::image(m, &ker, field);
                        }
                        Arrow::Backward => {
                            w = Subspace::preimage(m, &w, field);
                            ker = Subspace::preimage(m, &ker, field);
                        }
                    }
                }
                if w.is_empty() {
                    break;
                }
                let both = Subspace::sum_dim(&w, &ker, self.ranks[d], field);
                rk[b][d] = both - ker.len();
                if rk[b][d] == 0 {
                    break;
                }
            }
        }
        rk
    }
}

/// Interval multiplicities from generalized ranks.
pub fn mobius_inversion(rk: &[Vec<usize>]) -> Vec<(usize, usize, usize)> {
    let n = rk.len();
    let at = |b: isize, d: usize| -> i64 {
        if b < 0 || d >= n {
            0
        } else {
            rk[b as usize][d] as i64
        }
    };
    let mut out = Vec::new();
    for b in 0..n {
        for d in b..n {
            let m = at(b as isize, d) - at(b as isize - 1, d) - at(b as isize, d + 1)
                + at(b as isize - 1, d + 1);
            assert!(m >= 0, "negative interval multiplicity");
            if m > 0 {
                out.push((b + 1, d + 1, m as usize));
            }
        }
    }
    out
}

/// Homology ranks and inclusion-induced matrices of `z` in degree `deg`.
///
/// `maps[i]` goes `V_i → V_{i+1}` for a forward arrow and `V_{i+1} → V_i`
/// for a backward one.
pub fn homology_representation(
    k: &Complex,
    z: &PairZigzag,
    deg: usize,
    field: PrimeField,
) -> (Vec<usize>, Vec<Matrix>) {
    let module = degree_module(&ConeComplex::new(k), z, deg, field);
    (module.ranks, module.maps)
}

/// Interval multiplicities `(birth, death, m)` (1-based) of a zigzag
/// representation given by dimensions and maps as in [`homology_representation`].
pub fn interval_multiplicities(
    dims: &[usize],
    maps: &[Matrix],
    arrows: &[Arrow],
    field: PrimeField,
) -> Vec<(usize, usize, usize)> {
    assert_eq!(maps.len() + 1, dims.len().max(1));
    assert_eq!(arrows.len(), maps.len());
    let module = DegreeModule {
        ranks: dims.to_vec(),
        maps: maps.to_vec(),
    };
    mobius_inversion(&module.generalized_ranks(arrows, field))
}

/// Interval decomposition of the homology of a pair zigzag.
pub fn pair_zigzag_barcode(k: &Complex, z: &PairZigzag, field: PrimeField) -> Barcode {
    let cone = ConeComplex::new(k);
    let mut bars = Vec::new();
    for deg in 0..=k.dim() {
        let module = degree_module(&cone, z, deg, field);
        let rk = module.generalized_ranks(&z.arrows, field);
        for (birth, death, m) in mobius_inversion(&rk) {
            bars.extend(std::iter::repeat_n(
                Bar {
                    dim: deg,
                    birth,
                    death,
                },
                m,
            ));
        }
    }
    bars.sort();
    Barcode {
        length: z.len(),
        bars,
    }
}

/// Relative Betti numbers of every pair of the zigzag.
pub fn pair_betti(k: &Complex, z: &PairZigzag, field: PrimeField) -> Vec<BettiVector> {
    z.pairs
        .iter()
        .map(|pair| {
            crate::algebra::relative_homology(k, &pair.p, &pair.e, field)
                .expect("pairs in a zigzag are closed and nested")
        })
        .collect()
}

/// Rank, per degree, of the map `H(a) → H(b)` induced by `a ⊆ b`.
pub fn induced_map_rank(
    k: &Complex,
    a: &IndexPair,
    b: &IndexPair,
    field: PrimeField,
) -> Result<Vec<usize>, ZigzagError> {
    if !a.is_subpair_of(b) {
        return Err(ZigzagError::NotInclusion(1, 2));
    }
    let cone = ConeComplex::new(k);
    let xa = cone.embed(&a.p, &a.e);
    let xb = cone.embed(&b.p, &b.e);
    Ok((0..=k.dim())
        .map(|deg| {
            let ha = HomologySpace::new(cone.complex(), &xa, deg, field);
            let hb = HomologySpace::new(cone.complex(), &xb, deg, field);
            ha.induced_map(&hb).rank(field)
        })
        .collect())
}
