//! Free field realization of the `R^d` algebras in the Fock vertex algebra
//! of a pair `a, b` with `[a_λ b] = 1`.
//!
//! `H = -:ab:`, `E_n = :(H+T)^n a:`, `F_n = :(H-T)^n b:`, and
//! `π_n : h ↦ H, e ↦ E_n, f ↦ ((-1)^d/(d+1)) F_{d-n}`.

use std::sync::Arc;
use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;

use crate::algebras::{make, BuiltinId, E, F, H};
use crate::engine::{AlgebraSpec, Engine, EngineError};
use crate::terms::scalar::{int, sign};
use crate::terms::{DerivedGenerator, LambdaPoly, Monomial, Scalar, StateVector};
use crate::verify::{thread_pool, CheckResult, Residual};

/// Default bound `N` on the indices of `E_n`, `F_n`.
pub const DEFAULT_N: u32 = 4;

const A: usize = 0;
const B: usize = 1;

#[derive(Clone, Debug)]
pub struct WakimotoFamily {
    pub h: StateVector,
    pub e: Vec<StateVector>,
    pub f: Vec<StateVector>,
    pub n_max: u32,
}

pub fn fock_spec() -> AlgebraSpec {
    make(&BuiltinId::Fock).expect("fock builtin")
}

fn gen(g: usize) -> StateVector {
    StateVector::generator(DerivedGenerator::base(g))
}

/// Builds `H, E_0..E_N, F_0..F_N` with `E_{n+1} = :H E_n: + T E_n`,
/// `F_{n+1} = :H F_n: - T F_n`.
pub fn build(eng: &Engine, n_max: u32) -> Result<WakimotoFamily, EngineError> {
    let h = eng.wick(&gen(A), &gen(B))?.negated();
    let mut e = vec![gen(A)];
    let mut f = vec![gen(B)];
    for n in 0..n_max as usize {
        e.push(eng.wick(&h, &e[n])?.plus(&eng.apply_t(&e[n])?));
        f.push(eng.wick(&h, &f[n])?.minus(&eng.apply_t(&f[n])?));
    }
    Ok(WakimotoFamily { h, e, f, n_max })
}

/// `:(H - T - λ)^k vac:`, with `T` acting on everything to its right.
pub fn h_minus_t_minus_lambda(eng: &Engine, h: &StateVector, k: u32) -> Result<LambdaPoly, EngineError> {
    let mut x = LambdaPoly::constant(StateVector::vacuum());
    for _ in 0..k {
        let mut next = x.map_states(|v| Ok::<_, EngineError>(eng.wick(h, v)?.minus(&eng.apply_t(v)?)))?;
        next.add_scaled(&x.times_lambda_power(1, &Scalar::one()), &-Scalar::one());
        x = next;
    }
    Ok(x)
}

/// `:(H - T)^k vac:`.
pub fn h_minus_t(eng: &Engine, h: &StateVector, k: u32) -> Result<StateVector, EngineError> {
    let mut x = StateVector::vacuum();
    for _ in 0..k {
        x = eng.wick(h, &x)?.minus(&eng.apply_t(&x)?);
    }
    Ok(x)
}

#[derive(Clone, Copy, Debug)]
enum Identity {
    HA,
    HB,
    HH,
    HE(u32),
    HF(u32),
    EE(u32, u32),
    FF(u32, u32),
    EF(u32, u32),
    FE(u32, u32),
    Nop(u32, u32),
}

impl Identity {
    fn name(self) -> String {
        match self {
            Identity::HA => "[H_L a] = a".into(),
            Identity::HB => "[H_L b] = -b".into(),
            Identity::HH => "[H_L H] = -L".into(),
            Identity::HE(n) => format!("[H_L E_{}] = E_{}", n, n),
            Identity::HF(n) => format!("[H_L F_{}] = -F_{}", n, n),
            Identity::EE(m, n) if m == n => format!("[E_{} L E_{}] = 0", m, n),
            Identity::EE(m, n) => format!("d/dL [E_{} L E_{}] = 0", m, n),
            Identity::FF(m, n) if m == n => format!("[F_{} L F_{}] = 0", m, n),
            Identity::FF(m, n) => format!("d/dL [F_{} L F_{}] = 0", m, n),
            Identity::EF(m, n) => format!("[E_{} L F_{}] = {} :(H-T-L)^{} vac:", m, n, m + n + 1, m + n),
            Identity::FE(m, n) => format!("[F_{} L E_{}] = skew of [E_{} L F_{}]", n, m, m, n),
            Identity::Nop(m, n) => format!(":E_{} F_{}: = -:(H-T)^{} vac:", m, n, m + n + 1),
        }
    }

    fn residual(self, eng: &Engine, w: &WakimotoFamily) -> Result<Residual, EngineError> {
        let (e, f) = (|i: u32| &w.e[i as usize], |i: u32| &w.f[i as usize]);
        let lam = |p: LambdaPoly| Residual::Lambda(p);
        Ok(match self {
            Identity::HA => lam(eng.bracket(&w.h, &gen(A))?.minus(&LambdaPoly::constant(gen(A)))),
            Identity::HB => lam(eng.bracket(&w.h, &gen(B))?.minus(&LambdaPoly::constant(gen(B).negated()))),
            Identity::HH => {
                let mut r = eng.bracket(&w.h, &w.h)?;
                r.add_term(1, Monomial::vacuum(), Scalar::one());
                lam(r)
            }
            Identity::HE(n) => lam(eng.bracket(&w.h, e(n))?.minus(&LambdaPoly::constant(e(n).clone()))),
            Identity::HF(n) => lam(eng.bracket(&w.h, f(n))?.minus(&LambdaPoly::constant(f(n).negated()))),
            Identity::EE(m, n) if m == n => lam(eng.bracket(e(m), e(n))?),
            Identity::EE(m, n) => lam(eng.bracket(e(m), e(n))?.derivative()),
            Identity::FF(m, n) if m == n => lam(eng.bracket(f(m), f(n))?),
            Identity::FF(m, n) => lam(eng.bracket(f(m), f(n))?.derivative()),
            Identity::EF(m, n) => {
                let rhs = h_minus_t_minus_lambda(eng, &w.h, m + n)?.scaled(&int((m + n + 1) as i64));
                lam(eng.bracket(e(m), f(n))?.minus(&rhs))
            }
            Identity::FE(m, n) => {
                let rhs = h_minus_t_minus_lambda(eng, &w.h, m + n)?.scaled(&int((m + n + 1) as i64));
                let skew = eng.substitute_minus_lambda_minus_t(&rhs)?.scaled(&-Scalar::one());
                lam(eng.bracket(f(n), e(m))?.minus(&skew))
            }
            Identity::Nop(m, n) => {
                let r = eng.wick(e(m), f(n))?.plus(&h_minus_t(eng, &w.h, m + n + 1)?);
                lam(LambdaPoly::constant(r))
            }
        })
    }
}

fn lemma_list(n_max: u32) -> Vec<Identity> {
    let mut out = vec![Identity::HA, Identity::HB, Identity::HH];
    for n in 0..=n_max {
        out.push(Identity::HE(n));
        out.push(Identity::HF(n));
    }
    for m in 0..=n_max {
        for n in 0..=n_max {
            out.extend([Identity::EE(m, n), Identity::FF(m, n), Identity::EF(m, n), Identity::FE(m, n), Identity::Nop(m, n)]);
        }
    }
    out
}

/// Every identity of the free field lemma for indices up to `n_max`,
/// checked in parallel; results come back in a fixed order.
pub fn check_lemma(n_max: u32) -> Result<Vec<CheckResult>, EngineError> {
    let spec = Arc::new(fock_spec());
    let items = lemma_list(n_max);
    thread_pool().install(|| {
        items
            .par_iter()
            .map_init(
                || {
                    let eng = Engine::new(spec.clone());
                    let fam = build(&eng, n_max);
                    (eng, fam)
                },
                |(eng, fam), l| {
                    let start = Instant::now();
                    let fam = fam.as_ref().map_err(Clone::clone)?;
                    let residual = l.residual(eng, fam)?;
                    Ok(CheckResult { name: l.name(), residual, elapsed: start.elapsed() })
                },
            )
            .collect()
    })
}

/// The `R^d` spec graded so that `π_n` preserves conformal weight.
pub fn source_spec(d: u32, n: u32) -> AlgebraSpec {
    assert!(d >= 1 && n <= d, "need 0 <= n <= d, d >= 1");
    make(&BuiltinId::RMinusOne { d, delta_e: Some(int(n as i64 + 1)) }).expect("valid weights")
}

/// Images of `h, e, f` under `π_n`.
pub fn pi_images(w: &WakimotoFamily, d: u32, n: u32) -> Vec<StateVector> {
    assert!(n <= d && d <= w.n_max, "need n <= d <= N");
    let c = sign(d) / int(d as i64 + 1);
    let mut images = vec![StateVector::zero(); 3];
    images[H] = w.h.clone();
    images[E] = w.e[n as usize].clone();
    images[F] = w.f[(d - n) as usize].scaled(&c);
    images
}

/// Compares `[π g_1 λ π g_2]` with `π[g_1 λ g_2]` for all ordered pairs of generators.
pub fn check_pi(d: u32, n: u32) -> Result<CheckResult, EngineError> {
    assert!(d >= 1 && n <= d, "need 0 <= n <= d, d >= 1");
    let start = Instant::now();
    let src = Engine::new(source_spec(d, n));
    let fock = Engine::new(fock_spec());
    let w = build(&fock, d)?;
    let images = pi_images(&w, d, n);
    let mut residual = Residual::None;
    for g1 in [H, E, F] {
        for g2 in [H, E, F] {
            let lhs = fock.bracket(&images[g1], &images[g2])?;
            let rhs = fock.map_lambda(&src.bracket(&gen(g1), &gen(g2))?, &images)?;
            let r = lhs.minus(&rhs);
            if !r.is_zero() && residual.is_zero() {
                residual = Residual::Lambda(r);
            }
        }
    }
    Ok(CheckResult { name: format!("pi_{}(d={})", n, d), residual, elapsed: start.elapsed() })
}

/// `:(T - h)^{d+1} vac: - (d+1) :ef:` in `R^d`.
pub fn witness(src: &Engine, d: u32) -> Result<StateVector, EngineError> {
    let mut y = StateVector::vacuum();
    for _ in 0..=d {
        y = src.apply_t(&y)?.minus(&src.wick(&gen(H), &y)?);
    }
    let ef = src.wick(&gen(E), &gen(F))?;
    Ok(y.minus(&ef.scaled(&int(d as i64 + 1))))
}

/// Image of the witness under `π_n`; passes when it is zero.
pub fn kernel_witness(d: u32, n: u32) -> Result<CheckResult, EngineError> {
    assert!(d >= 1 && n <= d, "need 0 <= n <= d, d >= 1");
    let start = Instant::now();
    let src = Engine::new(source_spec(d, n));
    let fock = Engine::new(fock_spec());
    let w = build(&fock, d)?;
    let img = fock.map_state(&witness(&src, d)?, &pi_images(&w, d, n))?;
    let residual = if img.is_zero() { Residual::None } else { Residual::Lambda(LambdaPoly::constant(img)) };
    Ok(CheckResult { name: format!("kernel_{}(d={})", n, d), residual, elapsed: start.elapsed() })
}
