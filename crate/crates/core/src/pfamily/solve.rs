use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{build_p, full_monomial_basis, t_action, to_lambda_poly, x, x_monomial_basis, PForm, PPoly};
use crate::algebras::{hef_spec, HefData, E, F, H};
use crate::engine::{Engine, EngineError};
use crate::poly::linalg::nullspace;
use crate::poly::univariate::UPoly;
use crate::poly::Poly;
use crate::terms::scalar::{binom, factorial, int, sign};
use crate::terms::{Monomial, Parity, Scalar, StateVector};
use crate::verify;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    /// `β = -1`: the algebras with `[e_λ f] = (λ+T-h)^d 1`.
    RMinusOne,
    /// `β = d+1`: the lattice vertex algebra presentation.
    Lattice,
    /// `d = 1`: the current algebra, admissible for every `β`.
    Current,
    /// `α = 0`, classical: `P` any polynomial in `h`; the listed basis spans degree `d`.
    PolynomialInH(Vec<PPoly>),
    /// A root not of the expected kinds. Never produced for the systems here.
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationSolution {
    /// `None` when every `β` is admissible or `α = 0`.
    pub beta: Option<Scalar>,
    pub parity_e: Parity,
    pub kind: SolutionKind,
}

/// `binom(β, n)` as a polynomial in `β`.
fn binom_poly(n: u32) -> UPoly {
    UPoly::binomial(n)
}

/// Solves, for each parity of `e`, the system
/// `binom(β,k+1)(-1)^{k+1} = (-1)^{p(e)} binom(β,d-k)(-1)^{d-k}`, `k = 0..d-1`,
/// over nonzero rational `β`.
pub fn classify_nonzero_alpha(d: u32) -> Vec<ClassificationSolution> {
    assert!(d >= 1, "degree must be positive");
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let s = if parity.is_odd() { -Scalar::one() } else { Scalar::one() };
        let mut g = UPoly::zero();
        for k in 0..d {
            let lhs = binom_poly(k + 1).scale(&sign(k + 1));
            let rhs = binom_poly(d - k).scale(&(sign(d - k) * &s));
            g = g.gcd(&lhs.sub(&rhs));
        }
        if g.is_zero() {
            out.push(ClassificationSolution { beta: None, parity_e: parity, kind: SolutionKind::Current });
            continue;
        }
        for beta in g.rational_roots() {
            if beta.is_zero() {
                continue;
            }
            let kind = if beta == -Scalar::one() {
                SolutionKind::RMinusOne
            } else if beta == int(d as i64 + 1) {
                SolutionKind::Lattice
            } else {
                SolutionKind::Other
            };
            out.push(ClassificationSolution { beta: Some(beta), parity_e: parity, kind });
        }
    }
    out.sort_by(|a, b| a.beta.cmp(&b.beta));
    out
}

/// One coefficient of `[e_λ [e_μ f]]`: `e_coeff e + he_coeff :he: + te_coeff Te`
/// multiplying the plain monomial `λ^lambda_exp μ^mu_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EefCoefficient {
    pub lambda_exp: u32,
    pub mu_exp: u32,
    pub e: Scalar,
    pub he: Scalar,
    pub te: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EefLeading {
    /// Coefficients of `λ^k μ^{d-1-k}`, `k = 0..d-1`.
    pub top: Vec<EefCoefficient>,
    /// Coefficient of `λ^{d-2}`.
    pub lambda_edge: EefCoefficient,
    /// Coefficient of `μ^{d-2}`.
    pub mu_edge: EefCoefficient,
}

/// Leading coefficients of `[e_λ [e_μ f]]` when `[e_λ f]` is the Schur form
/// with `γ = 1` and `α = 1/β`.
pub fn eef_leading_coefficients(d: u32, beta: &Scalar) -> EefLeading {
    assert!(d >= 2 && !beta.is_zero(), "needs d >= 2 and nonzero beta");
    let top = (0..d)
        .map(|k| EefCoefficient {
            lambda_exp: k,
            mu_exp: d - 1 - k,
            e: binom(beta, k + 1) * sign(k + 1) / (factorial(k) * factorial(d - 1 - k)),
            he: Scalar::zero(),
            te: Scalar::zero(),
        })
        .collect();
    let fd2 = factorial(d - 2);
    let lambda_edge = EefCoefficient {
        lambda_exp: d - 2,
        mu_exp: 0,
        e: Scalar::zero(),
        he: binom(beta, d - 1) * sign(d - 1) * beta / &fd2,
        te: binom(beta, d) * sign(d) / &fd2,
    };
    let mu_edge = EefCoefficient {
        lambda_exp: 0,
        mu_exp: d - 2,
        e: Scalar::zero(),
        he: -(beta * beta) / &fd2,
        te: binom(beta, 2) / &fd2,
    };
    EefLeading { top, lambda_edge, mu_edge }
}

fn hef_engine(alpha: Scalar, p: PPoly, parity: Parity, d: u32, classical: bool) -> Engine {
    let w = int(d as i64 + 1) / int(2);
    let mut data = HefData::new(alpha, p, parity, w.clone(), w);
    if classical {
        data = data.classical();
    }
    Engine::new(hef_spec("hef", &data))
}

/// Kernel of a linear map given by its values on `basis`, as combinations of `basis`.
fn kernel<K: Ord + Clone>(basis: &[PPoly], images: &[BTreeMap<K, Scalar>]) -> Vec<PPoly> {
    let mut keys: Vec<K> = images.iter().flat_map(|m| m.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|k| images.iter().map(|m| m.get(k).cloned().unwrap_or_else(Scalar::zero)).collect())
        .collect();
    nullspace(&rows, basis.len())
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero();
            for (b, c) in basis.iter().zip(&v) {
                p = p.add(&b.scale(c));
            }
            p
        })
        .collect()
}

/// Rescales so the coefficient of `x_1^d` (or failing that the first term) is 1.
fn monic(p: PPoly, d: u32) -> PPoly {
    let mut lead = p.coeff(&[0, d]);
    if lead.is_zero() {
        lead = p.iter().next().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::one);
    }
    p.scale(&(Scalar::one() / lead))
}

/// `(T + c h)^d 1`; `c = 1` gives `H^d`, `c = -1` its mirror image.
pub fn h_power(d: u32, c: &Scalar) -> PPoly {
    let mut p = Poly::one();
    for _ in 0..d {
        p = x(1).scale(c).mul(&p).add(&t_action(&p));
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alpha0Solution {
    /// Basis of `{P : [e_λ :P:] independent of λ}`.
    pub e_side: Vec<PPoly>,
    /// Basis of `{P : [f_λ :P:] independent of λ}`.
    pub f_side: Vec<PPoly>,
    /// Basis of the intersection.
    pub both: Vec<PPoly>,
}

type Coord = (u32, Monomial);

fn lambda_coords(eng: &Engine, g: usize, p: &PPoly) -> Result<BTreeMap<Coord, Scalar>, EngineError> {
    let state = eng.normalize(&to_lambda_poly(p, H).coeff(0))?;
    let br = eng.bracket(&StateVector::generator(crate::terms::DerivedGenerator::base(g)), &state)?;
    let mut out = BTreeMap::new();
    for (n, v) in br.derivative().iter() {
        for (m, c) in v.iter() {
            out.insert((n, m.clone()), c.clone());
        }
    }
    Ok(out)
}

/// The α = 0 rigidity computation over degree-`d` differential polynomials in `h`.
pub fn alpha0_solve(d: u32) -> Result<Alpha0Solution, EngineError> {
    assert!(d >= 1, "degree must be positive");
    let eng = hef_engine(Scalar::zero(), x(1).pow(d), Parity::Even, d, false);
    let basis = x_monomial_basis(d);
    let mut e_img = Vec::new();
    let mut f_img = Vec::new();
    let mut both_img = Vec::new();
    for b in &basis {
        let ei = lambda_coords(&eng, E, b)?;
        let fi = lambda_coords(&eng, F, b)?;
        let mut joint: BTreeMap<(usize, Coord), Scalar> = BTreeMap::new();
        joint.extend(ei.iter().map(|(k, v)| ((0, k.clone()), v.clone())));
        joint.extend(fi.iter().map(|(k, v)| ((1, k.clone()), v.clone())));
        e_img.push(ei);
        f_img.push(fi);
        both_img.push(joint);
    }
    let norm = |v: Vec<PPoly>| v.into_iter().map(|p| monic(p, d)).collect();
    Ok(Alpha0Solution {
        e_side: norm(kernel(&basis, &e_img)),
        f_side: norm(kernel(&basis, &f_img)),
        both: norm(kernel(&basis, &both_img)),
    })
}

/// Classical (Poisson) classification at degree `d`.
///
/// For `α ≠ 0` the hef system forces the Schur form with `β = 1/α`; each
/// parity is kept iff the full Jacobi check passes. For `α = 0` the
/// admissible `P` of degree `d` are found as the kernel of the Jacobi
/// residual map over all degree-`d` monomials in `λ, h, Th, ...`.
pub fn classical_classify(d: u32, alpha: &Scalar) -> Result<Vec<ClassificationSolution>, EngineError> {
    assert!(d >= 1, "degree must be positive");
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        if !alpha.is_zero() {
            let beta = Scalar::one() / alpha;
            let p = build_p(&PForm::Schur, d, &beta, &Scalar::one()).expect("nonzero beta");
            let eng = hef_engine(alpha.clone(), p, parity, d, true);
            if verify::verify_engine(&eng)?.iter().all(|c| c.passed()) {
                out.push(ClassificationSolution { beta: Some(beta), parity_e: parity, kind: SolutionKind::Current });
            }
        } else {
            let basis = full_monomial_basis(d);
            let mut images = Vec::new();
            for b in &basis {
                let eng = hef_engine(Scalar::zero(), b.clone(), parity, d, true);
                images.push(verify::residual_coordinates(&eng)?);
            }
            let ker: Vec<PPoly> = kernel(&basis, &images).into_iter().map(|p| monic(p, d)).collect();
            if !ker.is_empty() {
                out.push(ClassificationSolution { beta: None, parity_e: parity, kind: SolutionKind::PolynomialInH(ker) });
            }
        }
    }
    Ok(out)
}
