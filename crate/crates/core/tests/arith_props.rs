use num_bigint::BigInt;
use proptest::prelude::*;
use weightlab::arith::linalg::rank;
use weightlab::arith::numtheory::mult_order;
use weightlab::arith::redmap::{build_redmap, build_redmap_with_factor};
use weightlab::arith::{Cyclotomic, FFElem, GaloisField, Rational};

fn cyc(n: u32, coeffs: &[i64]) -> Cyclotomic {
    coeffs
        .iter()
        .enumerate()
        .fold(Cyclotomic::zero(n), |acc, (k, &c)| {
            &acc + &Cyclotomic::zeta_pow(n, k as i64)
                .scale(&Rational::from_integer(BigInt::from(c)))
        })
}

fn small_coeffs() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..4, 1..7)
}

fn ff(field: &std::sync::Arc<GaloisField>, c: &[u64]) -> FFElem {
    FFElem::from_poly(field, c)
}

proptest! {
    #[test]
    fn cyclotomic_ring_axioms(a in small_coeffs(), b in small_coeffs(), c in small_coeffs(), n in prop::sample::select(vec![4u32, 5, 9, 12])) {
        let (x, y, z) = (cyc(n, &a), cyc(n, &b), cyc(n, &c));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    }

    #[test]
    fn mixed_conductors_embed(a in small_coeffs(), b in small_coeffs()) {
        let (x, y) = (cyc(4, &a), cyc(6, &b));
        let s = &x + &y;
        prop_assert_eq!(&s - &y, x.clone());
        prop_assert_eq!(&(&x * &y) - &(&y * &x), Cyclotomic::zero(1));
    }

    #[test]
    fn finite_field_axioms(a in proptest::collection::vec(0u64..3, 2), b in proptest::collection::vec(0u64..3, 2), c in proptest::collection::vec(0u64..3, 2)) {
        // F_9 = F_3[x]/(x^2 + 1)
        let f = GaloisField::new(3, vec![1, 0, 1]);
        let (x, y, z) = (ff(&f, &a), ff(&f, &b), ff(&f, &c));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
            prop_assert!(x.pow(8).is_one());
        }
        prop_assert_eq!(x.frobenius(), x.pow(3));
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(a in small_coeffs(), b in small_coeffs(), den in prop::sample::select(vec![1i64, 3, 5, 7])) {
        // p = 2 on Q(ζ_12): the 4-part of each root of unity goes to 1
        let rm = build_redmap(3, 2);
        let d = Rational::new(BigInt::from(1), BigInt::from(den));
        let (x, y) = (cyc(12, &a).scale(&d), cyc(12, &b));
        let (rx, ry) = (rm.reduce(&x).unwrap(), rm.reduce(&y).unwrap());
        prop_assert_eq!(rm.reduce(&(&x + &y)).unwrap(), &rx + &ry);
        prop_assert_eq!(rm.reduce(&(&x * &y)).unwrap(), &rx * &ry);
        prop_assert!(rm.reduce(&Cyclotomic::one(12)).unwrap().is_one());
    }

    #[test]
    fn reduction_homomorphism_other_factor(a in small_coeffs(), b in small_coeffs()) {
        // Φ_5 splits mod 11 into linear factors; any factor gives a homomorphism
        for idx in [0usize, 2] {
            let rm = build_redmap_with_factor(5, 11, idx);
            let (x, y) = (cyc(5, &a), cyc(5, &b));
            prop_assert_eq!(rm.reduce(&(&x * &y)).unwrap(), &rm.reduce(&x).unwrap() * &rm.reduce(&y).unwrap());
        }
    }
}

#[test]
fn image_of_zeta_has_exact_order() {
    for (e, p) in [
        (1u64, 2u64),
        (2, 3),
        (3, 2),
        (4, 3),
        (5, 2),
        (7, 2),
        (8, 3),
        (12, 5),
        (15, 2),
        (21, 2),
        (10, 3),
    ] {
        let rm = build_redmap(e, p);
        let z = rm.reduce(&Cyclotomic::zeta(e as u32)).unwrap();
        assert_eq!(z.mult_order(), e as u128, "e' = {e}, p = {p}");
        assert_eq!(rm.m() as u64, mult_order(p, e), "e' = {e}, p = {p}");
    }
}

#[test]
fn rank_examples() {
    let q = |v: i64| Rational::from_integer(BigInt::from(v));
    let id: Vec<Vec<Rational>> = (0..3)
        .map(|i| (0..3).map(|j| q((i == j) as i64)).collect())
        .collect();
    assert_eq!(rank(&id).unwrap(), 3);
    let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
    assert_eq!(rank(&m).unwrap(), 2);
    let z = vec![vec![q(0); 3]; 2];
    assert_eq!(rank(&z).unwrap(), 0);
}
