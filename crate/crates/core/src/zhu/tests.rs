use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::algebras::{make, BuiltinId};
use crate::terms::scalar::{factorial, int, rat, sign};

fn rd(d: u32) -> AlgebraSpec {
    make(&BuiltinId::RMinusOne { d, delta_e: None }).unwrap()
}

fn zhu_rd(d: u32, delta_e: Scalar) -> Zhu {
    let s = rd(d);
    Zhu::new(&s, &HamiltonianData::hef(&s, &delta_e).unwrap()).unwrap()
}

fn g(i: usize) -> StateVector {
    StateVector::generator(DerivedGenerator::base(i))
}

fn dg(i: usize, k: u32) -> DerivedGenerator {
    DerivedGenerator::new(i, k)
}

#[test]
fn star_products() {
    let z = zhu_rd(2, int(1));
    let eng = z.engine();
    // a *_{-2} vac = Ta + Δ_a a
    let lhs = z.star_n(&g(E), &StateVector::vacuum(), -2).unwrap();
    let rhs = eng.apply_t(&g(E)).unwrap().plus(&g(E));
    assert_eq!(lhs, rhs);
    let he = z.star_n(&g(H), &g(E), -1).unwrap();
    assert_eq!(he, eng.wick(&g(H), &g(E)).unwrap().plus(&g(E)));
    let hf = z.star_n(&g(H), &g(F), -1).unwrap();
    assert_eq!(hf, eng.wick(&g(H), &g(F)).unwrap().minus(&g(F)));
    assert_eq!(z.star_bracket(&g(H), &g(E)).unwrap(), g(E));
    assert!(z.star_bracket(&g(H), &g(H)).unwrap().is_zero());
    let mixed = g(H).plus(&g(F));
    assert!(matches!(z.star_n(&mixed, &g(E), -1), Err(ZhuError::NonHomogeneous)));
}

#[test]
fn degree_one_at_unit_weight() {
    let z = zhu_rd(1, int(1));
    let p = z.presentation().unwrap();
    assert_eq!(p.lines(), vec!["[h,e] = e", "[h,f] = -f", "[e,f] = -h"]);
}

#[test]
fn derivatives_of_h() {
    let z = zhu_rd(2, int(1));
    for n in 0..=5u32 {
        let w = z.project(&StateVector::generator(dg(H, n))).unwrap();
        assert_eq!(w, ZhuWord::word(vec![H], sign(n) * factorial(n)));
    }
    let two = |a: u32, b: u32| StateVector::monomial(Monomial::sorted(vec![dg(H, a), dg(H, b)]), Scalar::one());
    assert_eq!(z.project(&two(0, 0)).unwrap(), ZhuWord::word(vec![H, H], int(1)));
    assert_eq!(z.project(&two(1, 0)).unwrap(), ZhuWord::word(vec![H, H], int(-1)));
    assert_eq!(z.project(&two(2, 3)).unwrap(), ZhuWord::word(vec![H, H], int(-12)));
}

#[test]
fn second_degree_at_weight_two() {
    // (Δ_e - h - 1)(Δ_e - h - 2) at Δ_e = 2 is h^2 - h
    let z = zhu_rd(2, int(2));
    let ef = z.presentation().unwrap().commutator(E, F).unwrap().clone();
    assert_eq!(ef.as_poly_in(H).unwrap(), UPoly::new(vec![int(0), int(-1), int(1)]));
    assert_eq!(ef.render(&z.names()), "h h - h");
}

#[test]
fn smith_polynomial_is_falling_binomial() {
    // d! binom(q, d) with q = Δ_e - h - 1, expanded by hand-free evaluation at many points
    for d in 0..=6u32 {
        for de in [int(0), int(3), rat(1, 2), rat(-7, 3)] {
            let p = smith_polynomial(d, &de);
            for h in [int(0), int(1), rat(2, 5), int(-4)] {
                let q = &de - &h - Scalar::one();
                assert_eq!(p.eval(&h), binom(&q, d) * factorial(d));
            }
        }
    }
}

#[test]
fn lattice_polynomial_closed_form() {
    // β = 2k: (2k/(2k-1)!) h (4k²h² - 1)(4k²h² - 4)...(4k²h² - (k-1)²)
    for k in 1..=3u32 {
        let kk = int(4 * (k * k) as i64);
        let mut p = UPoly::new(vec![int(0), int(2 * k as i64) / factorial(2 * k - 1)]);
        for j in 1..k {
            p = p.mul(&UPoly::new(vec![-int((j * j) as i64), int(0), kk.clone()]));
        }
        assert_eq!(lattice_polynomial(2 * k), p, "k = {}", k);
    }
}

#[test]
fn lattice_two() {
    let s = make(&BuiltinId::Lattice { beta: 2 }).unwrap();
    let z = Zhu::new(&s, &HamiltonianData::from_spec(&s)).unwrap();
    let p = z.presentation().unwrap();
    assert_eq!(p.lines(), vec!["[h,e] = e", "[h,f] = -f", "[e,f] = 2 h", "h e = 1/2 e", "h f = -1/2 f"]);
}

#[test]
fn odd_generators_are_rejected() {
    let s = make(&BuiltinId::Lattice { beta: 3 }).unwrap();
    assert!(matches!(Zhu::new(&s, &HamiltonianData::from_spec(&s)), Err(ZhuError::Unsupported(_))));
}

#[test]
fn commutators_match_star_bracket() {
    for d in 1..=3u32 {
        for de in [int(1), rat(1, 2), int(d as i64)] {
            let z = zhu_rd(d, de);
            for a in [H, E, F] {
                for b in [H, E, F] {
                    let ab = z.project(&z.star_n(&g(a), &g(b), -1).unwrap()).unwrap();
                    let ba = z.project(&z.star_n(&g(b), &g(a), -1).unwrap()).unwrap();
                    let br = z.project(&z.star_bracket(&g(a), &g(b)).unwrap()).unwrap();
                    assert_eq!(ab.minus(&ba), br, "d = {}, ({}, {})", d, a, b);
                }
            }
        }
    }
}

fn factor() -> impl Strategy<Value = DerivedGenerator> {
    (0usize..3, 0u32..3).prop_map(|(g, k)| DerivedGenerator::new(g, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_respects_filtration(word in prop::collection::vec(factor(), 1..4)) {
        let z = zhu_rd(2, int(1));
        let v = z.engine().normalize_word(&word).unwrap();
        let weight = Monomial::sorted(word.clone()).weight(z.engine().gens());
        prop_assume!(weight <= int(6));
        let w = z.project(&v).unwrap();
        prop_assert!(Scalar::from_integer((w.max_len() as i64).into()) <= weight);
    }
}
