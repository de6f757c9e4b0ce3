use proptest::prelude::*;
use std::collections::BTreeSet;
use triform::classify::fixtures;
use triform::localrep::{
    class_in_q, class_set, covers_from, hensel_oracle, is_zp_universal, represents_locally,
};
use triform::numth::{legendre, nonresidue, ord_p, Valuation};
use triform::triforms::{
    locally_represents, regular_up_to, represented_set, represents, RegularityVerdict,
};
use triform::watson::{big_lambda, is_p_stable, lambda_preimage, small_lambda, watson_step, PreimageOptions};
use triform::{form, Form, OddPrime};

fn prime() -> impl Strategy<Value = OddPrime> {
    prop::sample::select(vec![3u64, 5, 7, 11]).prop_map(|p| OddPrime::new(p).unwrap())
}

fn coeffs(kmax: usize, cmax: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=cmax, 1..=kmax)
}

fn primitive(kmin: usize, kmax: usize, cmax: u64) -> impl Strategy<Value = Form> {
    prop::collection::vec(1..=cmax, kmin..=kmax)
        .prop_map(|v| Form::new(v).unwrap())
        .prop_filter("primitive", |f| f.is_primitive())
}

#[test]
fn legendre_is_multiplicative() {
    for p in (3..50u64).filter(|&n| triform::numth::is_prime(n)) {
        let q = OddPrime::new(p).unwrap();
        for u in 1..p as i128 {
            for v in 1..p as i128 {
                assert_eq!(legendre(u * v, q).unwrap(), legendre(u, q).unwrap() * legendre(v, q).unwrap());
            }
        }
    }
}

#[test]
fn canonical_nonresidue() {
    for p in (3..1000u64).filter(|&n| triform::numth::is_prime(n)) {
        let q = OddPrime::new(p).unwrap();
        let d = nonresidue(q);
        assert_eq!(legendre(d as i128, q).unwrap(), -1);
        assert!((1..d).all(|x| legendre(x as i128, q).unwrap() == 1));
    }
}

#[test]
fn multiples_of_three_by_133() {
    let bits = represented_set(&form![1, 3, 3], 10_000).unwrap();
    assert!((0..=10_000).step_by(3).all(|n| bits.get(n)));
}

#[test]
fn table2_is_stable_above_seven() {
    for a in fixtures().table2_instances(3) {
        for p in [11, 13, 17] {
            assert!(is_p_stable(&a, OddPrime::new(p).unwrap()).unwrap(), "{a} at {p}");
        }
    }
}

#[test]
fn table3_records_are_consistent() {
    for d in &fixtures().table3 {
        assert_eq!(small_lambda(&d.top, d.p).unwrap().sorted(), d.image);
        assert!(fixtures().in_table1(&d.bottom), "{}", d.bottom);
        let deleted: Vec<u64> = {
            let mut rest = d.image.coeffs().to_vec();
            for &c in d.bottom.iter() {
                let i = rest.iter().position(|&x| x == c).unwrap();
                rest.remove(i);
            }
            rest
        };
        let x = triform::localrep::xi(&d.bottom).unwrap();
        assert!(deleted.iter().all(|&c| c % x == 0), "record {}", d.index);
    }
}

#[test]
fn table1_forms_are_new() {
    for e in &fixtures().table1 {
        assert_eq!(triform::classify::is_old(&e.triple, 2000).unwrap(), triform::classify::Oldness::New);
    }
}

#[test]
fn table2_lookup_ignores_order() {
    for a in fixtures().table2_instances(2) {
        let mut v = a.coeffs().to_vec();
        v.reverse();
        assert!(triform::classify::in_table2(&Form::new(v).unwrap()));
    }
}

#[test]
fn descent_keeps_regularity() {
    for a in fixtures().table2_instances(3) {
        for p in OddPrime::small() {
            if !is_p_stable(&a, p).unwrap() {
                let img = small_lambda(&a, p).unwrap().sorted();
                assert!(regular_up_to(&img, 2000).unwrap().passes(), "{a} at {p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 2000,
        max_global_rejects: 1_000_000,
        max_local_rejects: 1_000_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn recursion_matches_oracle(p in prime(), a in coeffs(4, 200), m in 0i128..=2000) {
        prop_assert_eq!(represents_locally(&a, m, p).unwrap().represented, hensel_oracle(&a, m, p).unwrap());
    }

    #[test]
    fn ultrametric(p in prime(), m in 1i128..100_000, n in 1i128..100_000) {
        let v = |x| match ord_p(x, p) { Valuation::Finite(e) => e, Valuation::Infinite => u32::MAX };
        let (a, b, c) = (v(m), v(n), v(m + n));
        prop_assert!(c >= a.min(b));
        if a != b {
            prop_assert_eq!(c, a.min(b));
        }
    }

    #[test]
    fn coverage_is_monotone(p in prime(), a in coeffs(4, 300), e in 0u32..6) {
        if covers_from(&a, p, e) {
            prop_assert!(covers_from(&a, p, e + 1));
        }
    }

    #[test]
    fn adding_a_covered_coefficient(p in prime(), k in coeffs(3, 100), gamma in 1u64..500) {
        let g = triform::numth::val(gamma as u128, p);
        let mut kg = k.clone();
        kg.push(gamma);
        let vmax = kg.iter().map(|&c| triform::numth::val(c as u128, p)).max().unwrap() + g + 4;
        prop_assert_eq!(class_set(&k, p, vmax) == class_set(&kg, p, vmax), covers_from(&k, p, g));
    }

    #[test]
    fn big_lambda_keeps_p_multiples(p in prime(), a in primitive(1, 3, 100)) {
        prop_assume!(!is_zp_universal(&a, p));
        let big = big_lambda(&a, p).unwrap();
        for v in 1..8 {
            for r in [1i8, -1] {
                prop_assert_eq!(class_in_q(&a, v, r, p), class_in_q(&big, v, r, p));
            }
        }
    }

    #[test]
    fn small_lambda_divides_coverage(p in prime(), a in primitive(1, 3, 100), e in 0u32..8) {
        prop_assume!(!is_zp_universal(&a, p) && covers_from(&a, p, e));
        let st = watson_step(&a, p).unwrap();
        prop_assert!(e >= st.s);
        prop_assert!(covers_from(&st.lambda_image, p, e - st.s));
    }

    #[test]
    fn represented_implies_local(a in coeffs(4, 50), n in 0u64..=500) {
        let f = Form::new(a).unwrap();
        if represents(&f, n).unwrap() {
            prop_assert!(locally_represents(&f, n));
        }
    }

    #[test]
    fn scaling(a in coeffs(3, 20), r in 1u64..5, bound in 1u64..300) {
        let f = Form::new(a).unwrap();
        let g = f.scaled(r).unwrap();
        let small = represented_set(&f, bound).unwrap();
        let big = represented_set(&g, r * bound).unwrap();
        for n in 0..=r * bound {
            prop_assert_eq!(big.get(n as usize), n % r == 0 && small.get((n / r) as usize));
        }
        let scaled = |v: RegularityVerdict| match v {
            RegularityVerdict::CounterexampleAt(n) => RegularityVerdict::CounterexampleAt(n * r),
            RegularityVerdict::PassUpTo(b) => RegularityVerdict::PassUpTo(b * r),
        };
        prop_assert_eq!(regular_up_to(&g, r * bound).unwrap(), scaled(regular_up_to(&f, bound).unwrap()));
    }

    #[test]
    fn preimages_round_trip(p in prime(), a in primitive(3, 4, 40)) {
        let a = a.sorted();
        let got = lambda_preimage(&a, p, 60, PreimageOptions::default()).unwrap();
        for b in &got {
            prop_assert_eq!(&small_lambda(b, p).unwrap().sorted(), &a);
        }
        let unstable = lambda_preimage(&a, p, 60, PreimageOptions { exclude_fixed_points: true, unstable_only: true }).unwrap();
        let filtered: BTreeSet<Form> = got.into_iter().filter(|b| !is_p_stable(b, p).unwrap()).collect();
        prop_assert_eq!(unstable, filtered);
    }
}
