#![allow(dead_code)]

//! Random instances and brute-force oracles shared by the integration tests.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use conley::algebra::Matrix;
use conley::complex::{Complex, Simplex, SimplexId, SimplexSet, VertexId};
use conley::mvf::{MultivectorField, MvId};
use conley::tracking::hull;
use conley::dynamics::invariant_part;
use conley::zigzag::Arrow;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn simplex(v: &[VertexId]) -> Simplex {
    Simplex::new(v.iter().copied()).unwrap()
}

// ---------------------------------------------------------------- generators

/// A random complex with at most `max_simplices` simplices and dimension at most `max_dim`.
pub fn random_complex(r: &mut TestRng, max_simplices: usize, max_dim: usize) -> Arc<Complex> {
    loop {
        let n: VertexId = r.gen_range(3..=6);
        let mut tops = Vec::new();
        for _ in 0..r.gen_range(1..=4) {
            let d = r.gen_range(1..=max_dim.min(n as usize - 1));
            let mut vs: Vec<VertexId> = (0..n).collect();
            vs.shuffle(r);
            vs.truncate(d + 1);
            tops.push(Simplex::new(vs).unwrap());
        }
        let k = Complex::from_maximal(tops);
        if k.len() <= max_simplices {
            return Arc::new(k);
        }
    }
}

/// Random convex merges starting from the singleton field.
pub fn random_field(r: &mut TestRng, k: &Arc<Complex>) -> MultivectorField {
    let mut f = MultivectorField::singletons(k.clone());
    let merges = r.gen_range(0..=k.len() / 2 + 1);
    for _ in 0..merges * 3 {
        if let Some(g) = random_coarsening(r, &f) {
            f = g;
        }
        if f.len() + merges <= k.len() {
            break;
        }
    }
    f
}

pub fn random_coarsening(r: &mut TestRng, f: &MultivectorField) -> Option<MultivectorField> {
    let k = f.complex();
    for _ in 0..20 {
        let s = SimplexId(r.gen_range(0..k.len()));
        let cof = k.cofacets(s);
        if cof.is_empty() {
            continue;
        }
        let t = cof[r.gen_range(0..cof.len())];
        let (a, b) = (f.mv_of(s), f.mv_of(t));
        if a == b {
            continue;
        }
        if let Ok(g) = f.merge(a, b) {
            return Some(g);
        }
    }
    None
}

pub fn random_refinement(r: &mut TestRng, f: &MultivectorField) -> Option<MultivectorField> {
    let big: Vec<MvId> = f.ids().filter(|&id| f.multivector(id).len() > 1).collect();
    if big.is_empty() {
        return None;
    }
    for _ in 0..20 {
        let id = big[r.gen_range(0..big.len())];
        let members: Vec<SimplexId> = f.multivector(id).iter().collect();
        let part: Vec<SimplexId> = members.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
        if part.is_empty() || part.len() == members.len() {
            continue;
        }
        let part = f.complex().set_of(part);
        if let Ok(g) = f.split(id, &part) {
            return Some(g);
        }
    }
    None
}

pub fn random_rearrangement(r: &mut TestRng, f: &MultivectorField) -> Option<MultivectorField> {
    if r.gen_bool(0.5) {
        random_refinement(r, f).or_else(|| random_coarsening(r, f))
    } else {
        random_coarsening(r, f).or_else(|| random_refinement(r, f))
    }
}

/// A random nonempty isolated invariant set: the invariant part of the hull of a few multivectors.
pub fn random_isolated_set(r: &mut TestRng, f: &MultivectorField) -> Option<SimplexSet> {
    let k = f.complex();
    for _ in 0..20 {
        let mut x = k.empty_set();
        for _ in 0..r.gen_range(1..=3) {
            let id = MvId(r.gen_range(0..f.len()));
            x.union_with(f.multivector(id));
        }
        let s = invariant_part(f, &hull(f, &x));
        if !s.is_empty() {
            return Some(s);
        }
    }
    None
}

pub fn random_subset(r: &mut TestRng, k: &Complex, p: f64) -> SimplexSet {
    k.set_of(k.ids().filter(|_| r.gen_bool(p)))
}

// ------------------------------------------------------------------- oracles

pub fn closure_oracle(k: &Complex, a: &SimplexSet) -> SimplexSet {
    k.set_of(k.ids().filter(|&t| {
        a.iter()
            .any(|s| k.simplex(t).is_face_of(k.simplex(s)))
    }))
}

pub fn is_closed_oracle(k: &Complex, a: &SimplexSet) -> bool {
    closure_oracle(k, a) == *a
}

pub fn is_convex_oracle(k: &Complex, a: &SimplexSet) -> bool {
    for s in a.iter() {
        for t in a.iter() {
            for m in k.ids() {
                let (ss, tt, mm) = (k.simplex(s), k.simplex(t), k.simplex(m));
                if ss.is_face_of(mm) && mm.is_face_of(tt) && !a.contains(m) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_compatible_oracle(f: &MultivectorField, a: &SimplexSet) -> bool {
    f.multivectors()
        .iter()
        .all(|m| m.is_subset(a) || m.is_disjoint(a))
}

/// `cl σ ∪ [σ]`.
pub fn fmap_oracle(f: &MultivectorField, s: SimplexId) -> SimplexSet {
    let k = f.complex();
    let mut out = closure_oracle(k, &k.set_of([s]));
    for m in f.multivectors() {
        if m.contains(s) {
            out.union_with(m);
        }
    }
    out
}

pub fn fmap_set_oracle(f: &MultivectorField, a: &SimplexSet) -> SimplexSet {
    let mut out = f.complex().empty_set();
    for s in a.iter() {
        out.union_with(&fmap_oracle(f, s));
    }
    out
}

fn mv_index(f: &MultivectorField, s: SimplexId) -> usize {
    f.multivectors().iter().position(|m| m.contains(s)).unwrap()
}

/// Whether a simple path from `start` inside `a` reaches an essential cycle.
fn lasso(
    f: &MultivectorField,
    a: &SimplexSet,
    start: SimplexId,
    backward: bool,
    critical: &dyn Fn(SimplexId) -> bool,
) -> bool {
    let succ = |x: SimplexId| -> Vec<SimplexId> {
        if backward {
            a.iter().filter(|&y| fmap_oracle(f, y).contains(x)).collect()
        } else {
            fmap_oracle(f, x).iter().filter(|&y| a.contains(y)).collect()
        }
    };
    fn dfs(
        path: &mut Vec<SimplexId>,
        succ: &dyn Fn(SimplexId) -> Vec<SimplexId>,
        essential: &dyn Fn(&[SimplexId]) -> bool,
        critical: &dyn Fn(SimplexId) -> bool,
    ) -> bool {
        let x = *path.last().unwrap();
        if critical(x) {
            return true;
        }
        for y in succ(x) {
            if let Some(j) = path.iter().position(|&z| z == y) {
                if essential(&path[j..]) {
                    return true;
                }
            } else {
                path.push(y);
                if dfs(path, succ, essential, critical) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let essential = |cycle: &[SimplexId]| -> bool {
        let first = mv_index(f, cycle[0]);
        cycle.iter().any(|&z| critical(z) || mv_index(f, z) != first)
    };
    dfs(&mut vec![start], &succ, &essential, critical)
}

/// Invariant part by enumerating lasso-shaped essential solutions.
pub fn inv_oracle(f: &MultivectorField, a: &SimplexSet) -> SimplexSet {
    let crit: Vec<bool> = (0..f.len()).map(|i| f.is_critical(MvId(i))).collect();
    let critical = |s: SimplexId| crit[mv_index(f, s)];
    f.complex().set_of(
        a.iter()
            .filter(|&s| lasso(f, a, s, false, &critical) && lasso(f, a, s, true, &critical))
            .collect::<Vec<_>>(),
    )
}

/// Every simplex reachable from `from` by a path inside `n` (including `from ∩ n`).
pub fn reach_in(f: &MultivectorField, from: &SimplexSet, n: &SimplexSet) -> SimplexSet {
    let k = f.complex();
    let mut seen = from.intersection(n);
    let mut stack: Vec<SimplexId> = seen.iter().collect();
    while let Some(x) = stack.pop() {
        for y in fmap_oracle(f, x).iter() {
            if n.contains(y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    let _ = k;
    seen
}

/// Paths in `n` that start and end in `s` never leave `s`.
pub fn isolates_oracle(f: &MultivectorField, n: &SimplexSet, s: &SimplexSet) -> bool {
    let k = f.complex();
    if !is_closed_oracle(k, n) || !fmap_set_oracle(f, s).is_subset(n) {
        return false;
    }
    let outside = reach_in(f, s, n).difference(s);
    for x in outside.iter() {
        if reach_in(f, &k.set_of([x]), n).intersects(s) {
            return false;
        }
    }
    true
}

pub fn is_index_pair_oracle(
    f: &MultivectorField,
    p: &SimplexSet,
    e: &SimplexSet,
    s: &SimplexSet,
) -> bool {
    let k = f.complex();
    let diff = p.difference(e);
    is_closed_oracle(k, p)
        && is_closed_oracle(k, e)
        && e.is_subset(p)
        && fmap_set_oracle(f, &diff).is_subset(p)
        && fmap_set_oracle(f, e).intersection(p).is_subset(e)
        && inv_oracle(f, &diff) == *s
}

pub fn is_index_pair_in_n_oracle(
    f: &MultivectorField,
    p: &SimplexSet,
    e: &SimplexSet,
    n: &SimplexSet,
    s: &SimplexSet,
) -> bool {
    let k = f.complex();
    let diff = p.difference(e);
    is_closed_oracle(k, p)
        && is_closed_oracle(k, e)
        && e.is_subset(p)
        && fmap_set_oracle(f, &diff).is_subset(n)
        && fmap_set_oracle(f, e).intersection(n).is_subset(e)
        && fmap_set_oracle(f, p).intersection(n).is_subset(p)
        && inv_oracle(f, &diff) == *s
}

/// All closed subsets of `k`.
pub fn closed_sets(k: &Complex) -> Vec<SimplexSet> {
    assert!(k.len() <= 20, "enumeration is exponential");
    // simplices are ordered by dimension, so facets are decided first
    let ids: Vec<SimplexId> = k.ids().collect();
    let mut out = Vec::new();
    fn go(k: &Complex, ids: &[SimplexId], i: usize, cur: &mut SimplexSet, out: &mut Vec<SimplexSet>) {
        if i == ids.len() {
            out.push(cur.clone());
            return;
        }
        let s = ids[i];
        go(k, ids, i + 1, cur, out);
        if k.facets(s).iter().all(|&t| cur.contains(t)) {
            cur.insert(s);
            go(k, ids, i + 1, cur, out);
            cur.remove(s);
        }
    }
    let mut cur = k.empty_set();
    go(k, &ids, 0, &mut cur, &mut out);
    out
}

/// All pairs of closed sets `E ⊆ P`.
pub fn closed_pairs(k: &Complex) -> Vec<(SimplexSet, SimplexSet)> {
    let closed = closed_sets(k);
    let mut out = Vec::new();
    for p in &closed {
        for e in &closed {
            if e.is_subset(p) {
                out.push((p.clone(), e.clone()));
            }
        }
    }
    out
}

/// Intersection of all convex compatible supersets of `x`.
pub fn hull_oracle(f: &MultivectorField, x: &SimplexSet) -> SimplexSet {
    let k = f.complex();
    let n = f.len();
    assert!(n <= 20);
    let mut out = k.full_set();
    for mask in 0u32..(1u32 << n) {
        let mut a = k.empty_set();
        for i in 0..n {
            if mask >> i & 1 == 1 {
                a.union_with(f.multivector(MvId(i)));
            }
        }
        if x.is_subset(&a) && is_convex_oracle(k, &a) {
            out = out.intersection(&a);
        }
    }
    out
}

/// Compatible unions of multivectors that are convex.
pub fn convex_compatible_sets(f: &MultivectorField) -> Vec<SimplexSet> {
    let k = f.complex();
    let n = f.len();
    assert!(n <= 20);
    (0u32..(1u32 << n))
        .filter_map(|mask| {
            let mut a = k.empty_set();
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    a.union_with(f.multivector(MvId(i)));
                }
            }
            is_convex_oracle(k, &a).then_some(a)
        })
        .collect()
}

// ------------------------------------------------------------- F2 algebra

/// Rank of a list of bit vectors over F2.
pub fn f2_rank(vectors: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            let top = 127 - b.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Relative Betti numbers over F2 from boundary ranks on `P ∖ E`.
pub fn relative_betti_f2(k: &Complex, p: &SimplexSet, e: &SimplexSet) -> Vec<usize> {
    let chain = p.difference(e);
    let top = k.dim();
    let by_dim: Vec<Vec<SimplexId>> = (0..=top)
        .map(|d| chain.iter().filter(|&s| k.dim_of(s) == d).collect())
        .collect();
    // rank of ∂_d : C_d → C_{d-1}
    let rank = |d: usize| -> usize {
        if d == 0 || d > top {
            return 0;
        }
        let rows = &by_dim[d - 1];
        let cols: Vec<u128> = by_dim[d]
            .iter()
            .map(|&s| {
                let mut v = 0u128;
                for (i, &t) in rows.iter().enumerate() {
                    if k.facets(s).contains(&t) {
                        v |= 1 << i;
                    }
                }
                v
            })
            .collect();
        assert!(rows.len() <= 128);
        f2_rank(&cols)
    };
    (0..=top)
        .map(|d| by_dim[d].len() - rank(d) - rank(d + 1))
        .collect()
}

/// Interval multiplicities of an F2 zigzag representation from ranks of
/// limit-to-colimit maps on every sub-path, found by enumeration.
pub fn zigzag_oracle_f2(dims: &[usize], maps: &[Matrix], arrows: &[Arrow]) -> BTreeSet<(usize, usize, usize)> {
    let n = dims.len();
    let apply = |m: &Matrix, v: u32| -> u32 {
        let mut out = 0;
        for r in 0..m.rows() {
            let mut bit = 0;
            for c in 0..m.cols() {
                bit ^= m.get(r, c) & (v >> c & 1);
            }
            out |= bit << r;
        }
        out
    };
    let rk = |b: usize, d: usize| -> usize {
        let offsets: Vec<usize> = (b..=d)
            .scan(0, |acc, i| {
                let o = *acc;
                *acc += dims[i];
                Some(o)
            })
            .collect();
        let embed = |i: usize, v: u32| -> u128 { (v as u128) << offsets[i - b] };
        // relations of the colimit
        let mut rel = Vec::new();
        for i in b..d {
            let m = &maps[i];
            match arrows[i] {
                Arrow::Forward => {
                    for j in 0..dims[i] {
                        rel.push(embed(i, 1 << j) ^ embed(i + 1, apply(m, 1 << j)));
                    }
                }
                Arrow::Backward => {
                    for j in 0..dims[i + 1] {
                        rel.push(embed(i + 1, 1 << j) ^ embed(i, apply(m, 1 << j)));
                    }
                }
            }
        }
        // starting vectors that extend to a compatible tuple over [b, d]
        let extends = |v0: u32| -> bool {
            let mut frontier = vec![v0];
            for i in b..d {
                let mut next = Vec::new();
                for &v in &frontier {
                    match arrows[i] {
                        Arrow::Forward => next.push(apply(&maps[i], v)),
                        Arrow::Backward => {
                            for w in 0u32..(1 << dims[i + 1]) {
                                if apply(&maps[i], w) == v {
                                    next.push(w);
                                }
                            }
                        }
                    }
                }
                next.sort_unstable();
                next.dedup();
                frontier = next;
                if frontier.is_empty() {
                    return false;
                }
            }
            true
        };
        let lim: Vec<u128> = (0u32..(1 << dims[b]))
            .filter(|&v| extends(v))
            .map(|v| embed(b, v))
            .collect();
        let mut all = rel.clone();
        all.extend(lim);
        f2_rank(&all) - f2_rank(&rel)
    };
    let mut table = vec![vec![0i64; n + 2]; n + 2];
    for b in 0..n {
        for d in b..n {
            table[b + 1][d + 1] = rk(b, d) as i64;
        }
    }
    let mut out = BTreeSet::new();
    for b in 1..=n {
        for d in b..=n {
            let m = table[b][d] - table[b - 1][d] - table[b][d + 1] + table[b - 1][d + 1];
            assert!(m >= 0);
            if m > 0 {
                out.insert((b, d, m as usize));
            }
        }
    }
    out
}
