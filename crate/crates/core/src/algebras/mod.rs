//! Builtin algebras, the `h, e, f` family constructor and the text format.

mod parse;
mod print;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::engine::{AlgebraSpec, Engine, EngineError, Grading, Mode, RawPoly, Relation, SpecError};
use crate::pfamily::{self, PForm, PPoly};
use crate::poly::univariate::UPoly;
use crate::terms::scalar::{int, parse_scalar, pow, to_i64};
use crate::terms::{DerivedGenerator, Parity, Scalar};

pub use parse::load;
pub use print::{digest, print};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinId {
    /// Current algebra of sl2 at level `k`, with `h` rescaled so `[h_λ e] = e`.
    CurrentSl2 { k: Scalar },
    /// `[e_λ f] = (λ+T-h)^d 1`; `delta_e` overrides the weight of `e`.
    RMinusOne { d: u32, delta_e: Option<Scalar> },
    /// `[e_λ f] = p(λ+T-h) 1` for an arbitrary polynomial `p`.
    RMinusOneGeneric { p: UPoly },
    Lattice { beta: u32 },
    FreeBoson { alpha: Scalar },
    Fock,
}

impl BuiltinId {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinId::CurrentSl2 { .. } => "current_sl2",
            BuiltinId::RMinusOne { .. } => "r_minus_one",
            BuiltinId::RMinusOneGeneric { .. } => "r_minus_one_generic",
            BuiltinId::Lattice { .. } => "lattice",
            BuiltinId::FreeBoson { .. } => "free_boson",
            BuiltinId::Fock => "fock",
        }
    }
}

pub const BUILTIN_NAMES: [&str; 6] = ["current_sl2", "r_minus_one", "r_minus_one_generic", "lattice", "free_boson", "fock"];

/// Data of an algebra strongly generated by `h, e, f` with
/// `[h_λ h] = αλ`, `[h_λ e] = e`, `[h_λ f] = -f`, `[e_λ e] = [f_λ f] = 0`
/// and `[e_λ f] = P(λ; h, Th, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HefData {
    pub alpha: Scalar,
    pub p: PPoly,
    pub parity: Parity,
    pub weight_e: Scalar,
    pub weight_f: Scalar,
    pub mode: Mode,
    pub grading: Grading,
}

impl HefData {
    pub fn new(alpha: Scalar, p: PPoly, parity: Parity, weight_e: Scalar, weight_f: Scalar) -> Self {
        HefData { alpha, p, parity, weight_e, weight_f, mode: Mode::Quantum, grading: Grading::Graded }
    }

    pub fn classical(mut self) -> Self {
        self.mode = Mode::Classical;
        self
    }

    pub fn filtered(mut self) -> Self {
        self.grading = Grading::Filtered;
        self
    }
}

pub const H: usize = 0;
pub const E: usize = 1;
pub const F: usize = 2;

/// Builds (without validating) the `h, e, f` spec for `data`.
pub fn hef_spec(name: &str, data: &HefData) -> AlgebraSpec {
    let mut s = AlgebraSpec::new(name, data.mode);
    s.grading = data.grading;
    s.add_generator("h", Parity::Even, int(1));
    s.add_generator("e", data.parity, data.weight_e.clone());
    s.add_generator("f", data.parity, data.weight_f.clone());
    s.set_bracket(H, H, RawPoly::term(1, vec![], data.alpha.clone()));
    s.set_bracket(H, E, RawPoly::term(0, vec![DerivedGenerator::base(E)], Scalar::one()));
    s.set_bracket(H, F, RawPoly::term(0, vec![DerivedGenerator::base(F)], -Scalar::one()));
    s.set_bracket(E, E, RawPoly::zero());
    s.set_bracket(F, F, RawPoly::zero());
    s.set_bracket(E, F, pfamily::to_raw(&data.p, H));
    s.set_param("alpha", data.alpha.clone());
    s
}

/// Validates `spec` and the consistency of any brackets declared in both orders.
pub fn checked(spec: AlgebraSpec) -> Result<AlgebraSpec, SpecError> {
    spec.validate()?;
    Engine::new(spec.clone()).check_declared_skew().map_err(|e| SpecError::Validation(e.to_string()))?;
    Ok(spec)
}

fn bad(m: impl Into<String>) -> SpecError {
    SpecError::BadParameter(m.into())
}

pub fn make(id: &BuiltinId) -> Result<AlgebraSpec, SpecError> {
    let spec = match id {
        BuiltinId::CurrentSl2 { k } => {
            let p = pfamily::x(1).scale(&int(2)).add(&pfamily::lambda().scale(k));
            let mut s = hef_spec("current_sl2", &HefData::new(k / int(2), p, Parity::Even, int(1), int(1)));
            s.set_param("k", k.clone());
            s
        }
        BuiltinId::RMinusOne { d, delta_e } => {
            if *d < 1 {
                return Err(bad("r_minus_one needs d >= 1"));
            }
            let p = pfamily::power_operator(*d, &-Scalar::one());
            let total = int(*d as i64 + 1);
            let we = delta_e.clone().unwrap_or_else(|| &total / int(2));
            let wf = &total - &we;
            if we.is_negative() || wf.is_negative() {
                return Err(bad(format!("delta_e must lie between 0 and {}", d + 1)));
            }
            let mut s = hef_spec("r_minus_one", &HefData::new(-Scalar::one(), p, Parity::Even, we, wf));
            s.set_param("d", int(*d as i64));
            s
        }
        BuiltinId::RMinusOneGeneric { p } => {
            let deg = p.degree().ok_or_else(|| bad("r_minus_one_generic needs a nonzero p"))?;
            let pp = pfamily::build_p(&PForm::GenericP(p.clone()), 0, &Scalar::zero(), &Scalar::one())
                .map_err(|e| bad(e.to_string()))?;
            let w = int(deg as i64 + 1) / int(2);
            let data = HefData::new(-Scalar::one(), pp, Parity::Even, w.clone(), w).filtered();
            hef_spec("r_minus_one_generic", &data)
        }
        BuiltinId::Lattice { beta } => {
            if *beta < 1 {
                return Err(bad("lattice needs a positive integer beta"));
            }
            let b = int(*beta as i64);
            let p = pfamily::build_p(&PForm::Schur, beta - 1, &b, &Scalar::one()).map_err(|e| bad(e.to_string()))?;
            let w = &b / int(2);
            let data = HefData::new(Scalar::one() / &b, p, Parity::from_int(*beta as i64), w.clone(), w);
            let mut s = hef_spec("lattice", &data);
            s.set_param("beta", b.clone());
            let he = vec![DerivedGenerator::base(H), DerivedGenerator::base(E)];
            let hf = vec![DerivedGenerator::base(H), DerivedGenerator::base(F)];
            s.relations.push(Relation { lhs: DerivedGenerator::new(E, 1), rhs: RawPoly::term(0, he, b.clone()) });
            s.relations.push(Relation { lhs: DerivedGenerator::new(F, 1), rhs: RawPoly::term(0, hf, -b) });
            s
        }
        BuiltinId::FreeBoson { alpha } => {
            let mut s = AlgebraSpec::new("free_boson", Mode::Quantum);
            s.add_generator("h", Parity::Even, int(1));
            s.set_bracket(0, 0, RawPoly::term(1, vec![], alpha.clone()));
            s.set_param("alpha", alpha.clone());
            s
        }
        BuiltinId::Fock => {
            let mut s = AlgebraSpec::new("fock", Mode::Quantum);
            s.add_generator("a", Parity::Even, int(1));
            s.add_generator("b", Parity::Even, int(0));
            s.set_bracket(0, 0, RawPoly::zero());
            s.set_bracket(1, 1, RawPoly::zero());
            s.set_bracket(0, 1, RawPoly::term(0, vec![], Scalar::one()));
            s
        }
    };
    checked(spec)
}

/// Parses `NAME` with `key=value` arguments, as given on the command line.
pub fn parse_builtin(name: &str, args: &[(String, String)]) -> Result<BuiltinId, SpecError> {
    let get = |key: &str| args.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let scalar = |key: &str| -> Result<Scalar, SpecError> {
        let v = get(key).ok_or_else(|| bad(format!("{} needs {}=...", name, key)))?;
        parse_scalar(v).ok_or_else(|| bad(format!("{}: `{}` is not a rational number", key, v)))
    };
    let natural = |key: &str| -> Result<u32, SpecError> {
        let q = scalar(key)?;
        to_i64(&q)
            .filter(|n| *n >= 0)
            .map(|n| n as u32)
            .ok_or_else(|| bad(format!("{} must be a non-negative integer", key)))
    };
    let allowed: &[&str] = match name {
        "current_sl2" => &["k"],
        "r_minus_one" => &["d", "delta_e"],
        "r_minus_one_generic" => &["p"],
        "lattice" => &["beta"],
        "free_boson" => &["alpha"],
        "fock" => &[],
        _ => return Err(bad(format!("unknown builtin `{}`; known: {}", name, BUILTIN_NAMES.join(", ")))),
    };
    if let Some((k, _)) = args.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(bad(format!("{} does not take `{}`", name, k)));
    }
    Ok(match name {
        "current_sl2" => BuiltinId::CurrentSl2 { k: scalar("k")? },
        "r_minus_one" => BuiltinId::RMinusOne {
            d: natural("d")?,
            delta_e: match get("delta_e") {
                Some(_) => Some(scalar("delta_e")?),
                None => None,
            },
        },
        "r_minus_one_generic" => {
            let text = get("p").ok_or_else(|| bad("r_minus_one_generic needs p=..."))?;
            BuiltinId::RMinusOneGeneric { p: parse_lambda_poly(text)? }
        }
        "lattice" => BuiltinId::Lattice { beta: natural("beta")? },
        "free_boson" => BuiltinId::FreeBoson { alpha: scalar("alpha")? },
        _ => BuiltinId::Fock,
    })
}

/// Parses a polynomial in `L` with rational coefficients.
pub fn parse_lambda_poly(text: &str) -> Result<UPoly, SpecError> {
    let e = crate::expr::parse_expr(text)?;
    let raw = crate::expr::to_raw(&e, &|_| None).map_err(|m| bad(format!("p: {}", m)))?;
    let mut coeffs = vec![Scalar::zero(); raw.max_power() as usize + 1];
    for (n, word, c) in raw.iter() {
        if !word.is_empty() {
            return Err(bad("p may only involve L and numbers"));
        }
        coeffs[n as usize] += c;
    }
    Ok(UPoly::new(coeffs))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("spec is not of h, e, f shape: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Recovers the [`HefData`] of a spec with generators `h, e, f` in that order.
pub fn detect_hef(spec: &AlgebraSpec) -> Result<HefData, ShapeError> {
    let mismatch = |m: &str| ShapeError::ShapeMismatch(m.to_string());
    let names: Vec<&str> = spec.generators.iter().map(|g| g.name.as_str()).collect();
    if names != ["h", "e", "f"] {
        return Err(mismatch("generators must be h, e, f"));
    }
    let g = &spec.generators;
    if g[H].parity != Parity::Even || g[H].weight != int(1) || g[E].parity != g[F].parity {
        return Err(mismatch("h must be even of weight 1 and e, f of equal parity"));
    }
    let eng = Engine::new(spec.without_relations());
    let hh = eng.base_bracket(H, H)?;
    let alpha = if hh.is_zero() {
        Scalar::zero()
    } else {
        let c = hh.coeff(1);
        match (hh.degree(), c.as_single()) {
            (Some(1), Some((m, q))) if m.is_vacuum() => q.clone(),
            _ => return Err(mismatch("[h_L h] must be a multiple of L")),
        }
    };
    let single = |a: usize, b: usize, c: i64| -> Result<bool, ShapeError> {
        let v = eng.base_bracket(a, b)?;
        Ok(*v == crate::terms::LambdaPoly::constant(crate::terms::StateVector::generator(DerivedGenerator::base(b)).scaled(&int(c))))
    };
    if !single(H, E, 1)? || !single(H, F, -1)? {
        return Err(mismatch("[h_L e] must be e and [h_L f] must be -f"));
    }
    if !eng.base_bracket(E, E)?.is_zero() || !eng.base_bracket(F, F)?.is_zero() {
        return Err(mismatch("[e_L e] and [f_L f] must vanish"));
    }
    let ef = eng.base_bracket(E, F)?;
    let p = pfamily::from_lambda_poly(&ef, H).ok_or_else(|| mismatch("[e_L f] must lie in the span of L and h"))?;
    Ok(HefData {
        alpha,
        p,
        parity: g[E].parity,
        weight_e: g[E].weight.clone(),
        weight_f: g[F].weight.clone(),
        mode: spec.mode(),
        grading: spec.grading,
    })
}

/// Replaces generator `g` by `γ g` in the presentation.
pub fn rescale_generator(spec: &AlgebraSpec, g: usize, gamma: &Scalar) -> AlgebraSpec {
    assert!(!gamma.is_zero(), "rescaling by zero");
    let scale_word = |w: &[DerivedGenerator]| -> Scalar {
        let n = w.iter().filter(|f| f.gen == g).count() as i32;
        Scalar::one() / pow(gamma, n)
    };
    let rescale = |p: &RawPoly, factor: Scalar| -> RawPoly {
        let mut out = RawPoly::zero();
        for (n, w, c) in p.iter() {
            out.add_term(n, w.to_vec(), c * &factor * scale_word(w));
        }
        out
    };
    let mut s = spec.clone();
    for ((a, b), v) in s.table.entries.iter_mut() {
        let k = (*a == g) as i32 + (*b == g) as i32;
        *v = rescale(v, pow(gamma, k));
    }
    for r in s.relations.iter_mut() {
        let k = (r.lhs.gen == g) as i32;
        r.rhs = rescale(&r.rhs, pow(gamma, k));
    }
    s
}

/// Equality of presentations ignoring the name, the recorded parameters and
/// the order of the relations.
pub fn same_presentation(a: &AlgebraSpec, b: &AlgebraSpec) -> bool {
    let sorted = |s: &AlgebraSpec| {
        let mut r = s.relations.clone();
        r.sort_by_key(|x| x.lhs);
        r
    };
    a.generators == b.generators && a.table == b.table && a.grading == b.grading && sorted(a) == sorted(b)
}

#[cfg(test)]
mod tests;
