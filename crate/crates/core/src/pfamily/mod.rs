//! The polynomial family `P(λ; x_1, x_2, ...)` with `x_k = T^{k-1} h`:
//! Schur polynomials, the three builders, the hef system, the symmetry
//! condition, series identities and the classification solvers.

mod solve;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::engine::RawPoly;
use crate::poly::univariate::UPoly;
use crate::poly::Poly;
use crate::terms::scalar::{binom, binom_int, factorial, int, sign};
use crate::terms::{DerivedGenerator, LambdaPoly, Monomial, Scalar};

pub use solve::{
    alpha0_solve, classical_classify, classify_nonzero_alpha, eef_leading_coefficients, h_power, Alpha0Solution,
    ClassificationSolution, EefCoefficient, EefLeading, SolutionKind,
};

/// Polynomial in `λ` (variable 0) and `x_k` (variable `k`).
pub type PPoly = Poly;

pub const LAMBDA: usize = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PFamilyError {
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

pub fn lambda() -> PPoly {
    Poly::var(LAMBDA)
}

/// `x_k = T^{k-1} h`, `k >= 1`.
pub fn x(k: usize) -> PPoly {
    assert!(k >= 1, "x variables start at 1");
    Poly::var(k)
}

/// `T λ = 0`, `T x_k = x_{k+1}`.
pub fn t_action(p: &PPoly) -> PPoly {
    p.derivation(&|i| if i == LAMBDA { Poly::zero() } else { Poly::var(i + 1) })
}

/// Degree with `deg λ = 1` and `deg x_k = k`.
pub fn degree(p: &PPoly) -> Option<u32> {
    p.weighted_degree(&|i| if i == LAMBDA { 1 } else { i as u32 })
}

pub fn is_homogeneous(p: &PPoly) -> bool {
    p.is_homogeneous(&|i| if i == LAMBDA { 1 } else { i as u32 })
}

/// Elementary Schur polynomial `S_n(y_1, y_2, ...)` with `y_k` as variable `k`.
pub fn schur(n: u32) -> Poly {
    let mut out = Poly::zero();
    let mut mult = vec![0u32; n as usize + 1];
    schur_rec(n, 1, &mut mult, &mut out);
    out
}

fn schur_rec(remaining: u32, part: u32, mult: &mut Vec<u32>, out: &mut Poly) {
    if remaining == 0 {
        let mut c = Scalar::one();
        for &m in mult.iter() {
            c /= factorial(m);
        }
        out.add_term(mult.clone(), c);
        return;
    }
    if part > remaining {
        return;
    }
    let mut k = 0;
    while k * part <= remaining {
        mult[part as usize] = k;
        schur_rec(remaining - k * part, part + 1, mult, out);
        k += 1;
    }
    mult[part as usize] = 0;
}

/// `S_n = (1/n)(y_1 + T) S_{n-1}` with `T y_k = (k+1) y_{k+1}`.
pub fn schur_recursive(n: u32) -> Poly {
    let t = |i: usize| if i == 0 { Poly::zero() } else { Poly::var(i + 1).scale(&int(i as i64 + 1)) };
    let mut s = Poly::one();
    for j in 1..=n {
        let next = Poly::var(1).mul(&s).add(&s.derivation(&t));
        s = next.scale(&(Scalar::one() / int(j as i64)));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PForm {
    /// `γ S_d(λ + β x_1/1!, β x_2/2!, ...)`.
    Schur,
    /// `δ (λ + T + β x_1)^d 1`.
    Power,
    /// `p(λ + T - x_1) 1` for a polynomial `p`.
    GenericP(UPoly),
}

/// `(λ + T + c x_1)^k 1` with `T` acting on everything to its right.
pub fn power_operator(k: u32, c: &Scalar) -> PPoly {
    let step = lambda().add(&x(1).scale(c));
    let mut p = Poly::one();
    for _ in 0..k {
        p = step.mul(&p).add(&t_action(&p));
    }
    p
}

pub fn build_p(form: &PForm, d: u32, beta: &Scalar, scale: &Scalar) -> Result<PPoly, PFamilyError> {
    match form {
        PForm::Schur => {
            if beta.is_zero() {
                return Err(PFamilyError::ZeroBeta);
            }
            let s = schur(d);
            let sub = s.substitute(&|k| {
                if k == 1 {
                    lambda().add(&x(1).scale(beta))
                } else {
                    x(k).scale(&(beta / factorial(k as u32)))
                }
            });
            Ok(sub.scale(scale))
        }
        PForm::Power => {
            if beta.is_zero() {
                return Err(PFamilyError::ZeroBeta);
            }
            Ok(power_operator(d, beta).scale(scale))
        }
        PForm::GenericP(p) => {
            let mut out = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&power_operator(k as u32, &-Scalar::one()).scale(c));
                }
            }
            Ok(out.scale(scale))
        }
    }
}

/// Residuals `(1/k!) ∂_λ^k P - α ∂P/∂x_k`, for `k` from 1 up to the larger
/// of the λ-degree and the highest `x` index present.
pub fn check_hef_system(p: &PPoly, alpha: &Scalar) -> Vec<PPoly> {
    let top = (p.degree_in(LAMBDA) as usize).max(p.num_vars().saturating_sub(1)).max(1);
    let mut out = Vec::new();
    let mut dl = p.clone();
    for k in 1..=top {
        dl = dl.derivative(LAMBDA);
        let lhs = dl.scale(&(Scalar::one() / factorial(k as u32)));
        out.push(lhs.sub(&p.derivative(k).scale(alpha)));
    }
    out
}

/// `P(-λ-T; -x_1, -x_2, ...)`.
pub fn reflect(p: &PPoly) -> PPoly {
    let neg = p.substitute(&|i| if i == LAMBDA { Poly::var(LAMBDA) } else { Poly::var(i).scale(&-Scalar::one()) });
    let mut out = Poly::zero();
    for n in 0..=neg.degree_in(LAMBDA) {
        let c = neg.coeff_in(LAMBDA, n);
        if c.is_zero() {
            continue;
        }
        // (-λ-T)^n c = Σ_k binom(n,k) (-λ)^k (-T)^{n-k} c
        let mut tc = c.clone();
        let mut tpows = vec![tc.clone()];
        for _ in 0..n {
            tc = t_action(&tc);
            tpows.push(tc.clone());
        }
        for k in 0..=n {
            let coeff = sign(n) * binom_int(n, k);
            out = out.add(&tpows[(n - k) as usize].mul(&lambda().pow(k)).scale(&coeff));
        }
    }
    out
}

/// The symmetry condition `P(-λ-T; -h, -Th, ...) = (-1)^d P(λ; h, Th, ...)`.
pub fn check_symmetry(p: &PPoly, d: u32) -> bool {
    reflect(p) == p.scale(&sign(d))
}

/// Raw table value for `P`, each `x` monomial written as a sorted word in `T^k h`.
pub fn to_raw(p: &PPoly, h: usize) -> RawPoly {
    let mut out = RawPoly::zero();
    for (e, c) in p.iter() {
        let pow = e.first().copied().unwrap_or(0);
        let mut word = Vec::new();
        for (k, &m) in e.iter().enumerate().skip(1) {
            for _ in 0..m {
                word.push(DerivedGenerator::new(h, k as u32 - 1));
            }
        }
        out.add_term(pow, word, c.clone());
    }
    out
}

/// The canonical λ-polynomial of `P`; valid whenever the `T^k h` commute.
pub fn to_lambda_poly(p: &PPoly, h: usize) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (pow, word, c) in to_raw(p, h).iter() {
        out.add_term(pow, Monomial::sorted(word.to_vec()), c.clone());
    }
    out
}

/// Inverse of [`to_lambda_poly`]; `None` if a monomial involves another generator.
pub fn from_lambda_poly(p: &LambdaPoly, h: usize) -> Option<PPoly> {
    let mut out = Poly::zero();
    for (n, v) in p.iter() {
        for (m, c) in v.iter() {
            if !m.involves_only(h) {
                return None;
            }
            let top = m.factors().iter().map(|f| f.order as usize + 1).max().unwrap_or(0);
            let mut e = vec![0u32; top + 1];
            e[0] = n;
            for f in m.factors() {
                e[f.order as usize + 1] += 1;
            }
            out.add_term(e, c.clone());
        }
    }
    Some(out)
}

/// Degree-`d` monomials in the `x` variables (one per partition of `d`).
pub fn x_monomial_basis(d: u32) -> Vec<PPoly> {
    let mut out = Vec::new();
    let mut mult = vec![0u32; d as usize + 1];
    collect_partitions(d, 1, &mut mult, &mut out);
    out
}

fn collect_partitions(remaining: u32, part: u32, mult: &mut Vec<u32>, out: &mut Vec<PPoly>) {
    if remaining == 0 {
        out.push(Poly::monomial(mult.clone(), Scalar::one()));
        return;
    }
    if part > remaining {
        return;
    }
    let mut k = 0;
    while k * part <= remaining {
        mult[part as usize] = k;
        collect_partitions(remaining - k * part, part + 1, mult, out);
        k += 1;
    }
    mult[part as usize] = 0;
}

/// Degree-`d` monomials in `λ` and the `x` variables.
pub fn full_monomial_basis(d: u32) -> Vec<PPoly> {
    let mut out = Vec::new();
    for j in 0..=d {
        for m in x_monomial_basis(d - j) {
            out.push(lambda().pow(j).mul(&m));
        }
    }
    out
}

/// `Φ_β(x) = Σ binom(β,n) x^n/n!`, coefficients up to `x^order`.
pub fn phi_series(beta: &Scalar, order: u32) -> Vec<Scalar> {
    (0..=order).map(|n| binom(beta, n) / factorial(n)).collect()
}

/// `Ψ_β(x,y) = Σ_{n≥1} binom(β,n) (-x)^n y^{n-1}/(n-1)!` up to `n = order`;
/// `x` is variable 0 and `y` variable 1.
pub fn psi_series(beta: &Scalar, order: u32) -> Poly {
    let mut out = Poly::zero();
    for n in 1..=order {
        let c = binom(beta, n) * sign(n) / factorial(n - 1);
        out.add_term(vec![n, n - 1], c);
    }
    out
}

/// `(x ∂² + (x+1) ∂ - β) Φ` on a truncated coefficient list.
pub fn phi_ode_residual(beta: &Scalar, phi: &[Scalar]) -> Vec<Scalar> {
    let n = phi.len();
    let get = |i: usize| phi.get(i).cloned().unwrap_or_else(Scalar::zero);
    // coefficient of x^m: (m+1) m φ_{m+1} + m φ_m + (m+1) φ_{m+1} - β φ_m
    (0..n.saturating_sub(1))
        .map(|m| {
            let mm = int(m as i64);
            let m1 = int(m as i64 + 1);
            &m1 * &mm * get(m + 1) + &mm * get(m) + &m1 * get(m + 1) - beta * get(m)
        })
        .collect()
}
