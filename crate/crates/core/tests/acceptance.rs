//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};

use conformal_calc::algebras::{hef_spec, make, parse_lambda_poly, BuiltinId, HefData, E, F, H};
use conformal_calc::engine::{AlgebraSpec, Engine};
use conformal_calc::pfamily::{
    self, alpha0_solve, build_p, check_hef_system, classical_classify, classify_nonzero_alpha,
    eef_leading_coefficients, h_power, x, ClassificationSolution, PForm, SolutionKind,
};
use conformal_calc::poly::univariate::{interpolate, UPoly};
use conformal_calc::poly::Poly;
use conformal_calc::terms::scalar::{binom, factorial, int, rat, sign};
use conformal_calc::terms::{DerivedGenerator, Monomial, Parity, Scalar, StateVector};
use conformal_calc::verify::{jacobi_residual, on_worker, property_sweep, verify_algebra, PROPERTY_NAMES};
use conformal_calc::wakimoto;
use conformal_calc::zhu::{HamiltonianData, Zhu};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn builtin(id: BuiltinId) -> AlgebraSpec {
    make(&id).expect("builtin")
}

fn all_pass(spec: &AlgebraSpec) -> Result<usize, String> {
    let checks = verify_algebra(spec).map_err(|e| e.to_string())?;
    if let Some(bad) = checks.iter().find(|c| !c.passed()) {
        return Err(format!("{}: {} fails", spec.name, bad.name));
    }
    Ok(checks.len())
}

fn gen(g: usize) -> StateVector {
    StateVector::generator(DerivedGenerator::base(g))
}

fn jacobi_suite() -> Outcome {
    let mut specs = Vec::new();
    for k in [int(0), int(1), int(-1), int(-2)] {
        specs.push(builtin(BuiltinId::CurrentSl2 { k }));
    }
    for d in 1..=4 {
        specs.push(builtin(BuiltinId::RMinusOne { d, delta_e: None }));
    }
    specs.push(builtin(BuiltinId::RMinusOneGeneric { p: parse_lambda_poly("L^3 + 2 L").unwrap() }));
    specs.push(builtin(BuiltinId::Fock));
    let mut n = 0;
    for s in &specs {
        n += all_pass(s)?;
    }
    Ok(format!("{} algebras, {} checks", specs.len(), n))
}

fn lattice_obstruction() -> Outcome {
    for d in [2u32, 3] {
        let beta = d + 1;
        let spec = builtin(BuiltinId::Lattice { beta });
        let free = Engine::new(spec.without_relations());
        let r = jacobi_residual(&free, E, E, F).map_err(|e| e.to_string())?;
        ensure(!r.is_zero(), || format!("d={}: (e,e,f) passes without relations", d))?;
        let te = StateVector::generator(DerivedGenerator::new(E, 1));
        let he = free.normalize_word(&[DerivedGenerator::base(H), DerivedGenerator::base(E)]).unwrap();
        let target = te.minus(&he.scaled(&int(beta as i64)));
        for (_, v) in r.iter() {
            let k = v.ratio_to(&target);
            ensure(k.map_or(false, |k| !k.is_zero()), || format!("d={}: coefficient not a multiple of Te - {}:he:", d, beta))?;
        }
        all_pass(&spec)?;
    }
    Ok("residual ∝ Te - (d+1):he: without relations, all pass with them".into())
}

fn classification() -> Outcome {
    let d1 = classify_nonzero_alpha(1);
    ensure(d1.iter().all(|s| s.beta.is_none() && s.kind == SolutionKind::Current) && !d1.is_empty(), || {
        format!("d=1: {:?}", d1)
    })?;
    for d in 2..=6u32 {
        let expected = vec![
            ClassificationSolution { beta: Some(int(-1)), parity_e: Parity::Even, kind: SolutionKind::RMinusOne },
            ClassificationSolution {
                beta: Some(int(d as i64 + 1)),
                parity_e: Parity::from_int(d as i64 + 1),
                kind: SolutionKind::Lattice,
            },
        ];
        let got = classify_nonzero_alpha(d);
        ensure(got == expected, || format!("d={}: {:?}", d, got))?;
    }
    Ok("d=2..6 give {-1, d+1}; d=1 admits every beta".into())
}

fn hef_system() -> Outcome {
    for d in 1..=4u32 {
        for beta in [int(-1), int(d as i64 + 1)] {
            let p = build_p(&PForm::Power, d, &beta, &(Scalar::one() / factorial(d))).unwrap();
            let alpha = Scalar::one() / &beta;
            ensure(check_hef_system(&p, &alpha).iter().all(Poly::is_zero), || format!("d={} beta={}", d, beta))?;
        }
    }
    for d in 0..=5u32 {
        for beta in [int(-1), int(2), int(d as i64 + 1), rat(1, 3)] {
            let schur = build_p(&PForm::Schur, d, &beta, &Scalar::one()).unwrap();
            let power = build_p(&PForm::Power, d, &beta, &(Scalar::one() / factorial(d))).unwrap();
            ensure(schur == power, || format!("Schur and power forms differ at d={} beta={}", d, beta))?;
            // third form: Σ λ^n/n! S_{d-n}(β x_1, β x_2/2!, ...)
            let mut sum = Poly::zero();
            for n in 0..=d {
                let s = pfamily::schur(d - n).substitute(&|k| x(k).scale(&(&beta / factorial(k as u32))));
                sum = sum.add(&pfamily::lambda().pow(n).scale(&(Scalar::one() / factorial(n))).mul(&s));
            }
            ensure(sum == schur, || format!("expanded form differs at d={} beta={}", d, beta))?;
        }
    }
    Ok("hef system vanishes; three forms agree for d ≤ 5".into())
}

fn leading_coefficients() -> Outcome {
    let mut compared = 0;
    for d in 2..=4u32 {
        for beta in [int(-1), int(d as i64 + 1)] {
            let parity = if beta == int(-1) { Parity::Even } else { Parity::from_int(d as i64 + 1) };
            let p = build_p(&PForm::Schur, d, &beta, &Scalar::one()).unwrap();
            let w = int(d as i64 + 1) / int(2);
            let eng = Engine::new(hef_spec("hef", &HefData::new(Scalar::one() / &beta, p, parity, w.clone(), w)));
            let eef = eng.double_bracket(&gen(E), &gen(E), &gen(F)).map_err(|e| e.to_string())?;
            let he = eng.normalize_word(&[DerivedGenerator::base(H), DerivedGenerator::base(E)]).unwrap();
            let te = StateVector::generator(DerivedGenerator::new(E, 1));
            let lead = eef_leading_coefficients(d, &beta);
            for c in lead.top.iter().chain([&lead.lambda_edge, &lead.mu_edge]) {
                let mut expected = gen(E).scaled(&c.e);
                expected.add_scaled(&he, &c.he);
                expected.add_scaled(&te, &c.te);
                let got = eef.coeff(c.lambda_exp, c.mu_exp);
                ensure(got == expected, || {
                    format!("d={} beta={} at L^{} M^{}: engine {:?}", d, beta, c.lambda_exp, c.mu_exp, got)
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{} coefficients agree", compared))
}

fn alpha_zero() -> Outcome {
    for d in 1..=4u32 {
        let s = alpha0_solve(d).map_err(|e| e.to_string())?;
        ensure(s.e_side == vec![h_power(d, &Scalar::one())], || format!("d={}: e side {:?}", d, s.e_side))?;
        ensure(s.both.is_empty() == (d > 1), || format!("d={}: both sides {:?}", d, s.both))?;
    }
    Ok("e side spanned by H^d; both sides only at d=1".into())
}

fn poisson() -> Outcome {
    let p = x(1).pow(3).sub(&x(1).scale(&int(2)));
    let data = HefData::new(Scalar::zero(), p, Parity::Even, int(2), int(2)).classical().filtered();
    all_pass(&hef_spec("poisson_cubic", &data))?;
    for alpha in [int(1), int(-1), rat(1, 3)] {
        for d in [2u32, 3] {
            let sols = classical_classify(d, &alpha).map_err(|e| e.to_string())?;
            ensure(sols.is_empty(), || format!("d={} alpha={}: {:?}", d, alpha, sols))?;
        }
        let sols = classical_classify(1, &alpha).map_err(|e| e.to_string())?;
        ensure(!sols.is_empty() && sols.iter().all(|s| s.kind == SolutionKind::Current), || {
            format!("d=1 alpha={}: {:?}", alpha, sols)
        })?;
    }
    Ok("h^3 - 2h passes classically; alpha ≠ 0 leaves only the current algebra".into())
}

fn wakimoto_checks() -> Outcome {
    let lemma = wakimoto::check_lemma(4).map_err(|e| e.to_string())?;
    if let Some(bad) = lemma.iter().find(|c| !c.passed()) {
        return Err(bad.name.clone());
    }
    let mut n_pi = 0;
    for d in 1..=3u32 {
        for n in 0..=d {
            for c in [wakimoto::check_pi(d, n), wakimoto::kernel_witness(d, n)] {
                let c = c.map_err(|e| e.to_string())?;
                ensure(c.passed(), || c.name.clone())?;
                n_pi += 1;
            }
        }
    }
    Ok(format!("{} Fock space identities, {} homomorphism/kernel checks", lemma.len(), n_pi))
}

/// `Π_{i=1}^d (Δ_e - h - i)` in variables `(Δ_e, h)`.
fn smith_bivariate(d: u32) -> Poly {
    let mut p = Poly::one();
    for i in 1..=d {
        p = p.mul(&Poly::var(0).sub(&Poly::var(1)).sub(&Poly::constant(int(i as i64))));
    }
    p
}

fn zhu_rd() -> Outcome {
    for d in 1..=4u32 {
        let spec = builtin(BuiltinId::RMinusOne { d, delta_e: None });
        let mut samples: Vec<(Scalar, UPoly)> = Vec::new();
        for de in 1..=(d as i64 + 1) {
            let de = int(de);
            let z = Zhu::new(&spec, &HamiltonianData::hef(&spec, &de).unwrap()).map_err(|e| e.to_string())?;
            let pres = z.presentation().map_err(|e| e.to_string())?;
            let lines = pres.lines();
            ensure(lines[0] == "[h,e] = e" && lines[1] == "[h,f] = -f", || format!("d={}: {:?}", d, lines))?;
            let ef = pres.commutator(E, F).and_then(|w| w.as_poly_in(H)).ok_or("[e,f] not a polynomial in h")?;
            samples.push((de, ef));
        }
        let oracle = smith_bivariate(d);
        for k in 0..=d as usize {
            let pts: Vec<_> = samples.iter().map(|(de, p)| (de.clone(), p.coeff(k))).collect();
            let interp = interpolate(&pts);
            let expected = oracle.coeff_in(1, k as u32);
            for j in 0..=d as usize {
                ensure(interp.coeff(j) == expected.coeff(&[j as u32]), || {
                    format!("d={}: coefficient of De^{} h^{} differs", d, j, k)
                })?;
            }
        }
    }
    let spec = builtin(BuiltinId::RMinusOne { d: 2, delta_e: None });
    let z = Zhu::new(&spec, &HamiltonianData::hef(&spec, &int(1)).unwrap()).map_err(|e| e.to_string())?;
    let one_h = |c: Scalar, len: usize| conformal_calc::zhu::ZhuWord::word(vec![H; len], c);
    for n in 0..=5u32 {
        let w = z.project(&StateVector::generator(DerivedGenerator::new(H, n))).map_err(|e| e.to_string())?;
        ensure(w == one_h(sign(n) * factorial(n), 1), || format!("pi(T^{} h)", n))?;
    }
    for n1 in 0..=3u32 {
        for n2 in 0..=3u32 {
            let m = Monomial::sorted(vec![DerivedGenerator::new(H, n1), DerivedGenerator::new(H, n2)]);
            let w = z.project(&StateVector::monomial(m, Scalar::one())).map_err(|e| e.to_string())?;
            let c = sign(n1 + n2) * factorial(n1) * factorial(n2);
            ensure(w == one_h(c, 2), || format!("pi(:T^{} h T^{} h:)", n1, n2))?;
        }
    }
    Ok("[e,f] interpolates to d! binom(De - h - 1, d) for d ≤ 4; derivative rules hold".into())
}

fn zhu_lattice() -> Outcome {
    for beta in [2u32, 4] {
        let spec = builtin(BuiltinId::Lattice { beta });
        let z = Zhu::new(&spec, &HamiltonianData::from_spec(&spec)).map_err(|e| e.to_string())?;
        let pres = z.presentation().map_err(|e| e.to_string())?;
        let lines = pres.lines();
        ensure(lines.contains(&"h e = 1/2 e".to_string()) && lines.contains(&"h f = -1/2 f".to_string()), || {
            format!("beta={}: {:?}", beta, lines)
        })?;
        let ef = pres.commutator(E, F).and_then(|w| w.as_poly_in(H)).ok_or("[e,f] not a polynomial in h")?;
        let b = int(beta as i64);
        for hv in [int(0), int(1), int(-2), rat(1, 3), rat(-5, 7)] {
            let q = &b / int(2) + &b * &hv - Scalar::one();
            ensure(ef.eval(&hv) == binom(&q, beta - 1), || format!("beta={}: [e,f] at h={}", beta, hv))?;
        }
        let k = beta / 2;
        let mut closed = UPoly::new(vec![int(0), int(2 * k as i64) / factorial(2 * k - 1)]);
        for j in 1..k {
            closed = closed.mul(&UPoly::new(vec![-int((j * j) as i64), int(0), int(4 * (k * k) as i64)]));
        }
        ensure(ef == closed, || format!("beta={}: closed form differs", beta))?;
    }
    Ok("he = e/2, hf = -f/2, [e,f] = binom(beta/2 + beta h - 1, beta - 1)".into())
}

fn property_suites() -> Outcome {
    let specs = [
        builtin(BuiltinId::CurrentSl2 { k: int(1) }),
        builtin(BuiltinId::RMinusOne { d: 2, delta_e: None }),
        builtin(BuiltinId::RMinusOneGeneric { p: parse_lambda_poly("L^3 + 2 L").unwrap() }),
        builtin(BuiltinId::FreeBoson { alpha: int(1) }),
        builtin(BuiltinId::Fock),
    ];
    let mut total = 0;
    for (i, s) in specs.iter().enumerate() {
        let reports = property_sweep(s, 2024 + i as u64, 5, 200).map_err(|e| e.to_string())?;
        ensure(reports.len() == PROPERTY_NAMES.len(), || "missing property".into())?;
        for r in &reports {
            ensure(r.cases >= 200 && r.passed(), || format!("{} on {}: {:?}", r.name, s.name, r.failures.first()))?;
            total += r.cases;
        }
    }
    Ok(format!("{} random cases, no failures", total))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Jacobi suite", jacobi_suite),
        ("lattice obstruction", lattice_obstruction),
        ("classification", classification),
        ("hef system", hef_system),
        ("leading coefficients", leading_coefficients),
        ("alpha = 0 rigidity", alpha_zero),
        ("Poisson", poisson),
        ("Wakimoto", wakimoto_checks),
        ("Zhu", zhu_rd),
        ("lattice Zhu", zhu_lattice),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = on_worker(f);
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {:>2} {}: {} ({:.1}s)", i + 1, name, msg, secs),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {}: {} ({:.1}s)", i + 1, name, msg, secs);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
