mod common;

use common::*;
use conley::algebra::{cone_pair, reduced_homology, relative_homology, BettiVector, PrimeField};
use conley::complex::Complex;
use proptest::prelude::*;

fn f(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn projective_plane() -> Complex {
    let tris = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    Complex::from_maximal(tris.iter().map(|t| simplex(t)))
}

#[test]
fn projective_plane_depends_on_the_characteristic() {
    let k = projective_plane();
    let all = k.full_set();
    let none = k.empty_set();
    assert_eq!(relative_homology(&k, &all, &none, f(2)).unwrap().0, vec![1, 1, 1]);
    assert_eq!(relative_homology(&k, &all, &none, f(3)).unwrap().0, vec![1, 0, 0]);
    assert_eq!(relative_betti_f2(&k, &all, &none), vec![1, 1, 1]);
    assert_eq!(reduced_homology(&k, &all, 3, f(3)).unwrap().0, vec![0, 0, 0]);
}

#[test]
fn sphere_relative_to_a_point() {
    let k = Complex::from_maximal([simplex(&[0, 1, 2, 3])]);
    let boundary = k.set_of(k.ids().filter(|&i| k.dim_of(i) < 3));
    let v = k.set_from_simplices([&simplex(&[0])]).unwrap();
    assert_eq!(relative_homology(&k, &boundary, &v, f(5)).unwrap().0, vec![0, 0, 1, 0]);
    assert_eq!(relative_homology(&k, &k.full_set(), &boundary, f(7)).unwrap().0, vec![0, 0, 0, 1]);
}

#[test]
fn non_pairs_are_rejected() {
    let k = Complex::from_maximal([simplex(&[0, 1])]);
    let edge = k.set_from_simplices([&simplex(&[0, 1])]).unwrap();
    assert!(relative_homology(&k, &edge, &k.empty_set(), f(2)).is_err());
    assert!(reduced_homology(&k, &edge, 2, f(2)).is_err());
    assert!(PrimeField::new(4).is_err());
    assert!(PrimeField::new(1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn three_computations_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, 28, 3);
        let p = k.closure(&random_subset(&mut r, &k, 0.3));
        let e = k.closure(&random_subset(&mut r, &k, 0.15).intersection(&p));
        let len = k.dim() + 1;
        let direct = relative_homology(&k, &p, &e, f(2)).unwrap();
        prop_assert_eq!(&direct.0, &relative_betti_f2(&k, &p, &e));
        let coned = cone_pair(&k, &p, &e).unwrap();
        prop_assert_eq!(&coned.reduced_betti(len, f(2)), &direct);
        for q in [3, 5] {
            let a = relative_homology(&k, &p, &e, f(q)).unwrap();
            prop_assert_eq!(&coned.reduced_betti(len, f(q)), &a);
        }
    }

    #[test]
    fn euler_characteristic_ignores_the_field(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, 28, 3);
        let p = k.closure(&random_subset(&mut r, &k, 0.4));
        let e = k.closure(&random_subset(&mut r, &k, 0.1).intersection(&p));
        let cells = p.difference(&e);
        let chi: i64 = cells.iter().map(|s| if k.dim_of(s) % 2 == 0 { 1 } else { -1 }).sum();
        for q in [2, 3, 5, 7] {
            let b: BettiVector = relative_homology(&k, &p, &e, f(q)).unwrap();
            prop_assert_eq!(b.euler_characteristic(), chi);
        }
    }
}
