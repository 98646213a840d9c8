use num_traits::{One, Zero};

use super::*;
use crate::terms::scalar::{int, rat};
use crate::terms::{render_lambda, render_state};

fn dg(g: usize, k: u32) -> DerivedGenerator {
    DerivedGenerator::new(g, k)
}

fn g(i: usize) -> StateVector {
    StateVector::generator(dg(i, 0))
}

/// `h, e, f` with `[h_λ h] = αλ`, `[h_λ e] = e`, `[h_λ f] = -f` and `[e_λ f] = p`.
fn hef(alpha: Scalar, p: RawPoly, parity: Parity, weight: Scalar, mode: Mode) -> AlgebraSpec {
    let mut s = AlgebraSpec::new("hef", mode);
    let h = s.add_generator("h", Parity::Even, int(1));
    let e = s.add_generator("e", parity, weight.clone());
    let f = s.add_generator("f", parity, weight);
    s.set_bracket(h, h, RawPoly::term(1, vec![], alpha));
    s.set_bracket(h, e, RawPoly::term(0, vec![dg(e, 0)], int(1)));
    s.set_bracket(h, f, RawPoly::term(0, vec![dg(f, 0)], int(-1)));
    s.set_bracket(e, e, RawPoly::zero());
    s.set_bracket(f, f, RawPoly::zero());
    s.set_bracket(e, f, p);
    s
}

/// `(λ+T-h)^2 1 = λ^2 - 2λh - Th + :hh:`.
fn r_minus_one_2() -> AlgebraSpec {
    let mut p = RawPoly::term(2, vec![], int(1));
    p.add_term(1, vec![dg(0, 0)], int(-2));
    p.add_term(0, vec![dg(0, 1)], int(-1));
    p.add_term(0, vec![dg(0, 0), dg(0, 0)], int(1));
    hef(int(-1), p, Parity::Even, rat(3, 2), Mode::Quantum)
}

fn fock() -> AlgebraSpec {
    let mut s = AlgebraSpec::new("fock", Mode::Quantum);
    let a = s.add_generator("a", Parity::Even, int(1));
    let b = s.add_generator("b", Parity::Even, int(0));
    s.set_bracket(a, a, RawPoly::zero());
    s.set_bracket(b, b, RawPoly::zero());
    s.set_bracket(a, b, RawPoly::term(0, vec![], int(1)));
    s
}

fn mono(fs: &[(usize, u32)]) -> Monomial {
    Monomial::from_factors(fs.iter().map(|&(g, k)| dg(g, k)).collect())
}

#[test]
fn transposition_produces_integral_term() {
    let eng = Engine::new(r_minus_one_2());
    let v = eng.wick(&g(1), &g(0)).unwrap();
    let mut expected = StateVector::zero();
    expected.add_term(mono(&[(0, 0), (1, 0)]), int(1));
    expected.add_term(mono(&[(1, 1)]), int(-1));
    assert_eq!(v, expected);
    assert_eq!(render_state(&v, eng.gens()), "-:T^1 e: + :h e:");
}

#[test]
fn classical_products_commute() {
    let mut spec = r_minus_one_2();
    spec.table.mode = Mode::Classical;
    let eng = Engine::new(spec);
    let a = eng.wick(&g(1), &g(0)).unwrap();
    let b = eng.wick(&g(0), &g(1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn e_f_bracket_renders_in_canonical_layout() {
    let eng = Engine::new(r_minus_one_2());
    let p = eng.bracket(&g(1), &g(2)).unwrap();
    assert_eq!(render_lambda(&p, eng.gens()), "L^2 - 2 L :h: - :T^1 h: + :h h:");
}

#[test]
fn skew_completion_matches_formula() {
    let eng = Engine::new(r_minus_one_2());
    let fe = eng.bracket(&g(2), &g(1)).unwrap();
    let ef = eng.bracket(&g(1), &g(2)).unwrap();
    let expected = eng.substitute_minus_lambda_minus_t(&ef).unwrap().scaled(&-Scalar::one());
    assert_eq!(fe, expected);
}

#[test]
fn nth_products() {
    let eng = Engine::new(r_minus_one_2());
    // h_(1) h = α vac
    assert_eq!(eng.nth_product(&g(0), &g(0), 1).unwrap(), StateVector::scalar(int(-1)));
    // e_(-2) vac = T e
    assert_eq!(eng.nth_product(&g(1), &StateVector::vacuum(), -2).unwrap(), StateVector::generator(dg(1, 1)));
    // vac is the unit
    assert_eq!(eng.wick(&StateVector::vacuum(), &g(2)).unwrap(), g(2));
    assert!(eng.bracket(&StateVector::vacuum(), &g(2)).unwrap().is_zero());
}

#[test]
fn free_field_current() {
    let eng = Engine::new(fock());
    let big_h = eng.wick(&g(0), &g(1)).unwrap().negated();
    let br = eng.bracket(&big_h, &g(0)).unwrap();
    assert_eq!(br, LambdaPoly::constant(g(0)));
    let br = eng.bracket(&big_h, &g(1)).unwrap();
    assert_eq!(br, LambdaPoly::constant(g(1).negated()));
    let hh = eng.bracket(&big_h, &big_h).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term(1, Monomial::vacuum(), int(-1));
    assert_eq!(hh, expected);
}

#[test]
fn first_free_field_power() {
    // F_1 = :H b: - T b with H = -:ab:
    let eng = Engine::new(fock());
    let big_h = eng.wick(&g(0), &g(1)).unwrap().negated();
    let hb = eng.wick(&big_h, &g(1)).unwrap();
    let f1 = hb.minus(&eng.apply_t(&g(1)).unwrap());
    let mut expected = StateVector::zero();
    expected.add_term(mono(&[(0, 0), (1, 0), (1, 0)]), int(-1));
    expected.add_term(mono(&[(1, 1)]), int(-2));
    assert_eq!(f1, expected);
}

#[test]
fn odd_square_is_half_bracket_integral() {
    let mut s = AlgebraSpec::new("bc", Mode::Quantum);
    let psi = s.add_generator("psi", Parity::Odd, rat(1, 2));
    s.set_bracket(psi, psi, RawPoly::term(0, vec![], int(1)));
    let eng = Engine::new(s);
    // :ψψ: = (1/2) ∫_{-T}^0 [ψ_λ ψ] = 0 since the bracket is constant
    assert!(eng.wick(&g(0), &g(0)).unwrap().is_zero());
    // :ψ Tψ: is canonical
    let v = eng.wick(&g(0), &StateVector::generator(dg(0, 1))).unwrap();
    assert_eq!(v.len(), 1);
    let w = eng.wick(&StateVector::generator(dg(0, 1)), &g(0)).unwrap();
    assert_eq!(w, v.negated());
}

#[test]
fn t_is_a_derivation_of_the_product() {
    let eng = Engine::new(r_minus_one_2());
    let (e, f) = (g(1), g(2));
    let lhs = eng.apply_t(&eng.wick(&e, &f).unwrap()).unwrap();
    let mut rhs = eng.wick(&eng.apply_t(&e).unwrap(), &f).unwrap();
    rhs.add(&eng.wick(&e, &eng.apply_t(&f).unwrap()).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn sesquilinearity() {
    let eng = Engine::new(r_minus_one_2());
    let (e, f) = (g(1), g(2));
    let te = eng.apply_t(&e).unwrap();
    let lhs = eng.bracket(&te, &f).unwrap();
    let rhs = eng.bracket(&e, &f).unwrap().times_lambda_power(1, &-Scalar::one());
    assert_eq!(lhs, rhs);
    let tf = eng.apply_t(&f).unwrap();
    let lhs = eng.bracket(&e, &tf).unwrap();
    let ef = eng.bracket(&e, &f).unwrap();
    let mut rhs = ef.times_lambda_power(1, &Scalar::one());
    rhs.add(&ef.map_states(|v| eng.apply_t(v)).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn missing_entry_and_cycles_are_reported() {
    let mut s = AlgebraSpec::new("x", Mode::Quantum);
    s.add_generator("a", Parity::Even, int(1));
    s.add_generator("b", Parity::Even, int(1));
    s.set_bracket(0, 0, RawPoly::zero());
    s.set_bracket(0, 1, RawPoly::zero());
    let eng = Engine::new(s);
    assert!(matches!(eng.bracket(&g(1), &g(1)), Err(EngineError::MissingBracketEntry(_, _))));
}

#[test]
fn weight_cap_is_enforced() {
    let eng = Engine::with_weight_cap(r_minus_one_2(), 2);
    let big = eng.apply_t_pow(&g(1), 3);
    let res = big.and_then(|x| eng.wick(&g(2), &x));
    assert!(matches!(res, Err(EngineError::WeightOverflow(2))));
}

#[test]
fn relation_reduces_derivatives() {
    let mut s = hef(rat(1, 3), RawPoly::zero(), Parity::Odd, rat(3, 2), Mode::Quantum);
    s.relations.push(Relation { lhs: dg(1, 1), rhs: RawPoly::term(0, vec![dg(0, 0), dg(1, 0)], int(3)) });
    let eng = Engine::new(s);
    let te = StateVector::generator(dg(1, 1));
    let r = eng.reduce(&te).unwrap();
    assert_eq!(r, StateVector::monomial(mono(&[(0, 0), (1, 0)]), int(3)));
    let t2e = StateVector::generator(dg(1, 2));
    let r2 = eng.reduce(&t2e).unwrap();
    let mut first = true;
    let alt = eng
        .reduce_with(&t2e, &mut |n| {
            let pick = if first { n - 1 } else { 0 };
            first = false;
            pick
        })
        .unwrap();
    assert_eq!(r2, alt);
    assert!(r2.monomials().all(|m| m.factors().iter().all(|f| f.gen != 1 || f.order == 0)));
}

#[test]
fn eval_matches_direct_calls() {
    let eng = Engine::new(r_minus_one_2());
    let e = crate::expr::parse_expr("[e _ f]").unwrap();
    assert_eq!(eng.eval(&e).unwrap(), eng.bracket(&g(1), &g(2)).unwrap());
    let e = crate::expr::parse_expr(":e h: - 2 T e").unwrap();
    let v = eng.eval(&e).unwrap().coeff(0);
    let mut expected = StateVector::zero();
    expected.add_term(mono(&[(0, 0), (1, 0)]), int(1));
    expected.add_term(mono(&[(1, 1)]), int(-3));
    assert_eq!(v, expected);
    assert!(eng.eval(&crate::expr::parse_expr("e * f").unwrap()).is_err());
    assert!(eng.eval(&crate::expr::parse_expr("zz").unwrap()).is_err());
    let _ = Scalar::zero();
}
