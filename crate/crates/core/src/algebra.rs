//! Exact linear algebra over a prime field and simplicial homology.
//!
//! Relative homology `H(P, E)` is computed two ways: directly from the quotient
//! chain complex `C(P)/C(E)` ([`relative_homology`]) and as the reduced homology
//! of the coned complex `P ∪ w∗E` ([`cone_pair`], [`reduced_homology`]). The
//! cone route is what the zigzag machinery uses, since pair inclusions become
//! plain subcomplex inclusions once every pair shares the apex `w`.

use std::fmt;

use thiserror::Error;

use crate::complex::{Complex, ComplexError, Simplex, SimplexId, SimplexSet, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("{0} is not closed")]
    NotClosed(&'static str),
    #[error("E is not contained in P")]
    NotNested,
    #[error("apex vertex {0} already belongs to the complex")]
    ApexCollision(VertexId),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The field of residues modulo a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::TWO
    }
}

impl PrimeField {
    pub const TWO: PrimeField = PrimeField { p: 2 };

    pub fn new(p: u32) -> Result<Self, AlgebraError> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if prime && p < (1 << 31) {
            Ok(PrimeField { p })
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be non-zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Orientation sign of the face that omits vertex position `i`.
    pub fn sign(self, i: usize) -> u32 {
        if i % 2 == 0 {
            1
        } else {
            self.neg(1)
        }
    }

    /// `y += c * x`
    fn axpy(self, y: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(c, xi));
            }
        }
    }
}

/// Dense matrix of residues.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from its columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self, field: PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = field.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = self.get(r, j);
                self.set(r, j, field.mul(v, inv));
            }
            let pivot_row: Vec<u32> = self.data[r * self.cols..(r + 1) * self.cols].to_vec();
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
                        field.axpy(row, field.neg(f), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// `M v`.
    pub fn apply(&self, v: &[u32], field: PrimeField) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| field.add(acc, field.mul(self.get(r, c), v[c])))
            })
            .collect()
    }

    pub fn rank(&self, field: PrimeField) -> usize {
        self.clone().row_reduce(field).len()
    }

    /// Basis of the null space, as column vectors of length `cols`.
    pub fn kernel(&self, field: PrimeField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.row_reduce(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Incrementally built echelon basis of a span that remembers how each stored
/// row was obtained from the inserted generators.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    field: PrimeField,
    len: usize,
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
    generators: usize,
}

impl SpanBasis {
    pub fn new(field: PrimeField, len: usize) -> Self {
        SpanBasis {
            field,
            len,
            rows: Vec::new(),
            generators: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the residual and the
    /// combination of generators that was subtracted.
    fn reduce(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let f = self.field;
        let mut residual = v.to_vec();
        let mut combo = vec![0; self.generators];
        for (pivot, row, row_combo) in &self.rows {
            let c = residual[*pivot];
            if c != 0 {
                f.axpy(&mut residual, f.neg(c), row);
                combo.resize(row_combo.len().max(combo.len()), 0);
                f.axpy(&mut combo, c, row_combo);
            }
        }
        (residual, combo)
    }

    /// Inserts a generator; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        let f = self.field;
        let g = self.generators;
        self.generators += 1;
        let (mut residual, combo) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|&x| x != 0) else {
            return false;
        };
        // residual = v - combo·rows, so residual's expression is e_g - combo
        let mut expr = vec![0; self.generators];
        for (i, &c) in combo.iter().enumerate() {
            expr[i] = f.neg(c);
        }
        expr[g] = 1;
        let inv = f.inv(residual[pivot]);
        for x in residual.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for x in expr.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((pivot, residual, expr));
        true
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    /// Coefficients expressing `v` in terms of the inserted generators, if `v`
    /// lies in the span. Coefficients of dependent generators are zero.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let (residual, mut combo) = self.reduce(v);
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        combo.resize(self.generators, 0);
        Some(combo)
    }
}

/// Betti numbers indexed by dimension, length `dim(K) + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn zero(len: usize) -> Self {
        BettiVector(vec![0; len])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

fn check_pair(k: &Complex, p: &SimplexSet, e: &SimplexSet) -> Result<(), AlgebraError> {
    if !k.is_closed(p) {
        return Err(AlgebraError::NotClosed("P"));
    }
    if !k.is_closed(e) {
        return Err(AlgebraError::NotClosed("E"));
    }
    if !e.is_subset(p) {
        return Err(AlgebraError::NotNested);
    }
    Ok(())
}

/// Boundary matrix of the chains supported on `cells` from dimension `k` to
/// `k - 1`, with faces outside `cells` dropped.
fn boundary_matrix(k: &Complex, cells: &SimplexSet, dim: usize, field: PrimeField) -> Matrix {
    let cols: Vec<SimplexId> = k.ids_of_dim(dim).filter(|&i| cells.contains(i)).collect();
    if dim == 0 {
        return Matrix::zeros(0, cols.len());
    }
    let rows: Vec<SimplexId> = k.ids_of_dim(dim - 1).filter(|&i| cells.contains(i)).collect();
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for (pos, &face) in k.facets(c).iter().enumerate() {
            if let Ok(r) = rows.binary_search(&face) {
                m.set(r, j, field.sign(pos));
            }
        }
    }
    m
}

/// Betti numbers of `H(P, E)` from the quotient chain complex `C(P)/C(E)`.
pub fn relative_homology(
    k: &Complex,
    p: &SimplexSet,
    e: &SimplexSet,
    field: PrimeField,
) -> Result<BettiVector, AlgebraError> {
    check_pair(k, p, e)?;
    let cells = p.difference(e);
    let top = k.dim();
    let counts: Vec<usize> = (0..=top + 1)
        .map(|d| k.ids_of_dim(d).filter(|&i| cells.contains(i)).count())
        .collect();
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|d| boundary_matrix(k, &cells, d, field).rank(field))
        .collect();
    Ok(BettiVector(
        (0..=top)
            .map(|d| counts[d] - ranks[d] - ranks[d + 1])
            .collect(),
    ))
}

/// The augmented boundary: ε(v) = 1 for every vertex.
fn augmented_boundary_rank(k: &Complex, x: &SimplexSet, dim: usize, field: PrimeField) -> usize {
    if dim == 0 {
        usize::from(k.ids_of_dim(0).any(|i| x.contains(i)))
    } else {
        boundary_matrix(k, x, dim, field).rank(field)
    }
}

/// Reduced Betti numbers of a closed subcomplex `x`, for dimensions `0..len`.
pub fn reduced_homology(
    k: &Complex,
    x: &SimplexSet,
    len: usize,
    field: PrimeField,
) -> Result<BettiVector, AlgebraError> {
    if !k.is_closed(x) {
        return Err(AlgebraError::NotClosed("subcomplex"));
    }
    Ok(BettiVector(
        (0..len)
            .map(|d| {
                let n = k.ids_of_dim(d).filter(|&i| x.contains(i)).count();
                n - augmented_boundary_rank(k, x, d, field)
                    - augmented_boundary_rank(k, x, d + 1, field)
            })
            .collect(),
    ))
}

/// Default apex for cone constructions over `k`: one past the largest vertex.
pub fn default_apex(k: &Complex) -> VertexId {
    k.max_vertex().map_or(0, |v| v + 1)
}

/// The cone `K ∪ w∗K` over a whole complex. Every pair `(P, E)` of closed
/// subsets of `K` embeds as the subcomplex `P ∪ {w} ∪ w∗E`, and inclusions of
/// pairs become inclusions of subcomplexes.
#[derive(Clone, Debug)]
pub struct ConeComplex {
    apex: VertexId,
    complex: Complex,
    base_ids: Vec<SimplexId>,
    coned_ids: Vec<SimplexId>,
    apex_id: SimplexId,
}

impl ConeComplex {
    pub fn new(base: &Complex) -> Self {
        Self::with_apex(base, default_apex(base)).expect("default apex is fresh")
    }

    pub fn with_apex(base: &Complex, apex: VertexId) -> Result<Self, AlgebraError> {
        if base.vertex_ids().any(|v| v == apex) {
            return Err(AlgebraError::ApexCollision(apex));
        }
        let mut gens: Vec<Simplex> = base.simplices().to_vec();
        for s in base.simplices() {
            gens.push(s.join(apex)?);
        }
        gens.push(Simplex::vertex(apex));
        let complex = Complex::from_maximal(gens);
        let base_ids = base
            .simplices()
            .iter()
            .map(|s| complex.id(s).expect("base simplex in cone"))
            .collect();
        let coned_ids = base
            .simplices()
            .iter()
            .map(|s| complex.id(&s.join(apex).unwrap()).expect("coned simplex in cone"))
            .collect();
        let apex_id = complex.id(&Simplex::vertex(apex)).unwrap();
        Ok(ConeComplex {
            apex,
            complex,
            base_ids,
            coned_ids,
            apex_id,
        })
    }

    pub fn apex(&self) -> VertexId {
        self.apex
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// The subcomplex `P ∪ {w} ∪ w∗E` of the cone.
    pub fn embed(&self, p: &SimplexSet, e: &SimplexSet) -> SimplexSet {
        let mut out = self.complex.empty_set();
        out.insert(self.apex_id);
        for id in p.iter() {
            out.insert(self.base_ids[id.0]);
        }
        for id in e.iter() {
            out.insert(self.coned_ids[id.0]);
        }
        out
    }
}

/// A pair `(P, E)` realized as the standalone complex `P ∪ w∗E`.
#[derive(Clone, Debug)]
pub struct ConedPair {
    pub complex: Complex,
    pub apex: VertexId,
    /// The copy of `P` inside the coned complex.
    pub base: SimplexSet,
}

impl ConedPair {
    /// Reduced Betti numbers in dimensions `0..len`; equal to `H(P, E)`.
    pub fn reduced_betti(&self, len: usize, field: PrimeField) -> BettiVector {
        reduced_homology(&self.complex, &self.complex.full_set(), len, field)
            .expect("a complex is closed in itself")
    }
}

/// Realizes `(P, E)` as `P ∪ w∗E` with the default apex.
pub fn cone_pair(k: &Complex, p: &SimplexSet, e: &SimplexSet) -> Result<ConedPair, AlgebraError> {
    cone_pair_with_apex(k, p, e, default_apex(k))
}

pub fn cone_pair_with_apex(
    k: &Complex,
    p: &SimplexSet,
    e: &SimplexSet,
    apex: VertexId,
) -> Result<ConedPair, AlgebraError> {
    check_pair(k, p, e)?;
    if k.vertex_ids().any(|v| v == apex) {
        return Err(AlgebraError::ApexCollision(apex));
    }
    let mut gens: Vec<Simplex> = k.simplices_of(p).cloned().collect();
    for s in k.simplices_of(e) {
        gens.push(s.join(apex)?);
    }
    gens.push(Simplex::vertex(apex));
    let complex = Complex::from_maximal(gens);
    let base = complex.set_from_simplices(k.simplices_of(p))?;
    Ok(ConedPair {
        complex,
        apex,
        base,
    })
}

/// Reduced homology of one closed subcomplex in one dimension, with explicit
/// representative cycles so that inclusion-induced maps can be written down.
#[derive(Clone, Debug)]
pub struct HomologySpace {
    dim: usize,
    offset: usize,
    span: SpanBasis,
    reps: Vec<Vec<u32>>,
    rep_generators: Vec<usize>,
}

impl HomologySpace {
    /// `x` must be a closed subset of `k`.
    pub fn new(k: &Complex, x: &SimplexSet, dim: usize, field: PrimeField) -> Self {
        let range = k.dim_range(dim);
        let width = range.len();
        let offset = range.start;
        let cells: Vec<SimplexId> = k.ids_of_dim(dim).filter(|&i| x.contains(i)).collect();

        // cycles: kernel of the (augmented) boundary on the cells of x
        let bd = if dim == 0 {
            let mut m = Matrix::zeros(1, cells.len());
            for j in 0..cells.len() {
                m.set(0, j, 1);
            }
            m
        } else {
            boundary_matrix(k, x, dim, field)
        };
        let cycles: Vec<Vec<u32>> = bd
            .kernel(field)
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![0; width];
                for (j, &c) in coeffs.iter().enumerate() {
                    v[cells[j].0 - offset] = c;
                }
                v
            })
            .collect();

        let mut span = SpanBasis::new(field, width);
        let mut generators = 0;
        for c in k.ids_of_dim(dim + 1).filter(|&i| x.contains(i)) {
            let mut v = vec![0; width];
            for (pos, &face) in k.facets(c).iter().enumerate() {
                v[face.0 - offset] = field.sign(pos);
            }
            span.insert(&v);
            generators += 1;
        }
        let mut reps = Vec::new();
        let mut rep_generators = Vec::new();
        for z in cycles {
            if span.insert(&z) {
                reps.push(z);
                rep_generators.push(generators);
            }
            generators += 1;
        }
        HomologySpace {
            dim,
            offset,
            span,
            reps,
            rep_generators,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the homology group.
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vec<u32>] {
        &self.reps
    }

    /// Coordinates of the class of cycle `z` (indexed like the
    /// representatives) or `None` if `z` is not a cycle of this subcomplex.
    pub fn coordinates(&self, z: &[u32]) -> Option<Vec<u32>> {
        let combo = self.span.coordinates(z)?;
        Some(self.rep_generators.iter().map(|&g| combo[g]).collect())
    }

    /// Matrix of the map induced by the inclusion `self ⊆ target`
    /// (`target.rank()` rows, `self.rank()` columns).
    pub fn induced_map(&self, target: &HomologySpace) -> Matrix {
        assert_eq!(self.dim, target.dim);
        assert_eq!(self.offset, target.offset);
        let cols: Vec<Vec<u32>> = self
            .reps
            .iter()
            .map(|z| {
                target
                    .coordinates(z)
                    .expect("inclusion maps cycles to cycles")
            })
            .collect();
        Matrix::from_columns(target.rank(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[VertexId]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn set(k: &Complex, xs: &[&[VertexId]]) -> SimplexSet {
        let v: Vec<Simplex> = xs.iter().map(|x| s(x)).collect();
        k.set_from_simplices(&v).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(9), Err(AlgebraError::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(AlgebraError::NotPrime(1)));
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn rank_examples() {
        let f = PrimeField::TWO;
        assert_eq!(Matrix::zeros(3, 4).rank(f), 0);
        assert_eq!(Matrix::identity(5).rank(f), 5);
        // ∂₂ of a triangle: 3×1 column of ones
        let d2 = Matrix::from_columns(3, &[vec![1, 1, 1]]);
        assert_eq!(d2.rank(f), 1);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // [[1,1],[1,-1]] has determinant -2
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 0, 1);
        m.set(0, 1, 1);
        m.set(1, 0, 1);
        let f2 = PrimeField::TWO;
        m.set(1, 1, f2.neg(1));
        assert_eq!(m.rank(f2), 1);
        let f3 = PrimeField::new(3).unwrap();
        m.set(1, 1, f3.neg(1));
        assert_eq!(m.rank(f3), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_columns(2, &[vec![1, 2], vec![2, 4], vec![0, 1], vec![3, 3]]);
        let ker = m.kernel(f);
        assert_eq!(ker.len(), 4 - m.rank(f));
        for v in ker {
            for r in 0..2 {
                let dot = (0..4).fold(0, |acc, c| f.add(acc, f.mul(m.get(r, c), v[c])));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn span_coordinates() {
        let f = PrimeField::new(3).unwrap();
        let mut b = SpanBasis::new(f, 3);
        assert!(b.insert(&[1, 1, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(!b.insert(&[1, 2, 1]));
        let c = b.coordinates(&[1, 0, 2]).unwrap();
        // [1,0,2] = 1·[1,1,0] + 2·[0,1,1]
        assert_eq!(&c[..2], &[1, 2]);
        assert!(b.coordinates(&[0, 0, 1]).is_none());
    }

    #[test]
    fn triangle_rel_boundary() {
        let k = Complex::from_maximal([s(&[0, 1, 2])]);
        let t = set(&k, &[&[0, 1, 2]]);
        let p = k.closure(&t);
        let e = k.mouth(&t);
        let b = relative_homology(&k, &p, &e, PrimeField::TWO).unwrap();
        assert_eq!(b, BettiVector(vec![0, 0, 1]));
        let b3 = relative_homology(&k, &p, &e, PrimeField::new(3).unwrap()).unwrap();
        assert_eq!(b3, BettiVector(vec![0, 0, 1]));
    }

    #[test]
    fn vertex_absolute() {
        let k = Complex::from_maximal([s(&[0, 1, 2])]);
        let v = set(&k, &[&[0]]);
        let b = relative_homology(&k, &v, &k.empty_set(), PrimeField::TWO).unwrap();
        assert_eq!(b, BettiVector(vec![1, 0, 0]));
    }

    #[test]
    fn pair_with_itself_is_zero() {
        let k = Complex::from_maximal([s(&[0, 1, 2]), s(&[2, 3])]);
        let all = k.full_set();
        assert!(relative_homology(&k, &all, &all, PrimeField::TWO)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn rejects_bad_pairs() {
        let k = Complex::from_maximal([s(&[0, 1])]);
        let e = set(&k, &[&[0, 1]]);
        let p = k.full_set();
        assert_eq!(
            relative_homology(&k, &p, &e, PrimeField::TWO),
            Err(AlgebraError::NotClosed("E"))
        );
        let v = set(&k, &[&[0]]);
        assert_eq!(
            relative_homology(&k, &v, &p, PrimeField::TWO),
            Err(AlgebraError::NotNested)
        );
    }

    #[test]
    fn cone_examples() {
        let k = Complex::from_maximal([s(&[0, 1])]);
        let p = k.full_set();
        // E = ∅: P plus an isolated apex
        let c = cone_pair(&k, &p, &k.empty_set()).unwrap();
        assert_eq!(c.apex, 2);
        assert_eq!(c.complex.len(), 4);
        assert_eq!(c.reduced_betti(2, PrimeField::TWO), BettiVector(vec![1, 0]));
        // edge rel its endpoints: coning the endpoints closes a loop
        let e = set(&k, &[&[0], &[1]]);
        let c = cone_pair(&k, &p, &e).unwrap();
        assert_eq!(c.complex.len(), 6);
        assert_eq!(c.reduced_betti(2, PrimeField::TWO), BettiVector(vec![0, 1]));
        assert_eq!(
            relative_homology(&k, &p, &e, PrimeField::TWO).unwrap(),
            BettiVector(vec![0, 1])
        );
        assert!(matches!(
            cone_pair_with_apex(&k, &p, &e, 1),
            Err(AlgebraError::ApexCollision(1))
        ));
    }

    #[test]
    fn induced_map_on_circle() {
        // boundary of a square contains a 1-cycle; filling a triangle kills
        // nothing, filling both does
        let k = Complex::from_maximal([s(&[0, 1, 2]), s(&[0, 2, 3])]);
        let f = PrimeField::new(3).unwrap();
        let circle = k.closure(&set(&k, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]));
        let half = k.closure(&set(&k, &[&[0, 1, 2], &[2, 3], &[0, 3]]));
        let full = k.full_set();
        let h_circle = HomologySpace::new(&k, &circle, 1, f);
        let h_half = HomologySpace::new(&k, &half, 1, f);
        let h_full = HomologySpace::new(&k, &full, 1, f);
        assert_eq!(h_circle.rank(), 1);
        assert_eq!(h_half.rank(), 1);
        assert_eq!(h_full.rank(), 0);
        assert_eq!(h_circle.induced_map(&h_half).rank(f), 1);
        assert_eq!(h_circle.induced_map(&h_full).rank(f), 0);
    }
}
