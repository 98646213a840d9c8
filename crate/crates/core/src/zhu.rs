//! Zhu algebra of a freely generated vertex algebra: the `*_n` products, the
//! `*`-bracket, the projection `π : V → V/J` onto words in the generators,
//! and the resulting presentation by commutators and extra relations.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebras::{detect_hef, ShapeError, E, F, H};
use crate::engine::{AlgebraSpec, Engine, EngineError, Mode};
use crate::poly::univariate::UPoly;
use crate::terms::scalar::{binom, format_scalar};
use crate::terms::{DerivedGenerator, Monomial, Scalar, StateVector};

#[derive(Debug, Error)]
pub enum ZhuError {
    #[error("left operand is not homogeneous in conformal weight")]
    NonHomogeneous,
    #[error("unsupported spec: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub type Result<T> = std::result::Result<T, ZhuError>;

/// Conformal weights used by the Hamiltonian, one per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianData {
    pub weights: Vec<Scalar>,
}

impl HamiltonianData {
    /// The weights declared in the spec.
    pub fn from_spec(spec: &AlgebraSpec) -> Self {
        HamiltonianData { weights: spec.generators.iter().map(|g| g.weight.clone()).collect() }
    }

    /// For an `h, e, f` spec: `Δ_h = 1`, `Δ_e` as given and `Δ_e + Δ_f` as declared.
    pub fn hef(spec: &AlgebraSpec, delta_e: &Scalar) -> Result<Self> {
        let data = detect_hef(spec)?;
        let total = &data.weight_e + &data.weight_f;
        let mut weights = vec![Scalar::zero(); 3];
        weights[H] = Scalar::one();
        weights[E] = delta_e.clone();
        weights[F] = total - delta_e;
        Ok(HamiltonianData { weights })
    }
}

/// Noncommutative polynomial: words in generator indices with scalar coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZhuWord {
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl ZhuWord {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new(), Scalar::one())
    }

    pub fn word(w: Vec<usize>, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[usize]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &ZhuWord, c: &Scalar) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> ZhuWord {
        let mut out = ZhuWord::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn minus(&self, other: &ZhuWord) -> ZhuWord {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    /// Concatenation, extended bilinearly.
    pub fn mul(&self, other: &ZhuWord) -> ZhuWord {
        let mut out = ZhuWord::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// As a polynomial in the single letter `g`, if no other letter occurs.
    pub fn as_poly_in(&self, g: usize) -> Option<UPoly> {
        let mut coeffs = vec![Scalar::zero(); self.max_len() + 1];
        for (w, c) in &self.terms {
            if w.iter().any(|&x| x != g) {
                return None;
            }
            coeffs[w.len()] += c;
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_poly_in(g: usize, p: &UPoly) -> ZhuWord {
        let mut out = ZhuWord::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(vec![g; k], c.clone());
        }
        out
    }

    /// Longest words first; `h e` for the product of `h` and `e`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut ws: Vec<_> = self.terms.iter().collect();
        ws.sort_by(|(u, _), (v, _)| v.len().cmp(&u.len()).then_with(|| u.cmp(v)));
        let mut out = String::new();
        for (i, (w, c)) in ws.into_iter().enumerate() {
            let body = w.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join(" ");
            let mag = c.abs();
            let text = match (body.is_empty(), mag.is_one()) {
                (true, _) => format_scalar(&mag),
                (false, true) => body,
                (false, false) => format!("{} {}", format_scalar(&mag), body),
            };
            match (i, c.is_negative()) {
                (0, true) => out.push_str(&format!("-{}", text)),
                (0, false) => out.push_str(&text),
                (_, true) => out.push_str(&format!(" - {}", text)),
                (_, false) => out.push_str(&format!(" + {}", text)),
            }
        }
        out
    }
}

/// Extra relation `lead = rest`, normalized so the leading word has coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lead: Vec<usize>,
    pub rest: ZhuWord,
}

impl Relation {
    /// `None` for the zero element.
    pub fn from_element(w: &ZhuWord) -> Option<Relation> {
        let lead = w.terms.keys().max_by(|u, v| u.len().cmp(&v.len()).then_with(|| u.cmp(v)))?.clone();
        let c = w.coeff(&lead);
        let mut rest = w.scaled(&(-Scalar::one() / c));
        rest.add_term(lead.clone(), Scalar::one());
        Some(Relation { lead, rest })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// `[g_i, g_j] = w` for `i < j`.
    pub commutators: Vec<(usize, usize, ZhuWord)>,
    pub extra: Vec<Relation>,
}

impl Presentation {
    pub fn commutator(&self, i: usize, j: usize) -> Option<&ZhuWord> {
        self.commutators.iter().find(|(a, b, _)| (*a, *b) == (i, j)).map(|(_, _, w)| w)
    }

    pub fn lines(&self) -> Vec<String> {
        let g = &self.generators;
        let mut out: Vec<String> =
            self.commutators.iter().map(|(i, j, w)| format!("[{},{}] = {}", g[*i], g[*j], w.render(g))).collect();
        for r in &self.extra {
            let lead = r.lead.iter().map(|&x| g[x].as_str()).collect::<Vec<_>>().join(" ");
            out.push(format!("{} = {}", lead, r.rest.render(g)));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// Zhu machinery over one spec and Hamiltonian. Relations of the spec are
/// not applied inside the projection; [`Zhu::presentation`] imposes them
/// as extra relations.
pub struct Zhu {
    eng: Engine,
    source: AlgebraSpec,
    cache: RefCell<HashMap<Monomial, ZhuWord>>,
}

impl Zhu {
    pub fn new(spec: &AlgebraSpec, ham: &HamiltonianData) -> Result<Self> {
        if spec.mode() == Mode::Classical {
            return Err(ZhuError::Unsupported("classical mode".into()));
        }
        if let Some(g) = spec.generators.iter().find(|g| g.parity.is_odd()) {
            return Err(ZhuError::Unsupported(format!("odd generator `{}`", g.name)));
        }
        if ham.weights.len() != spec.generators.len() {
            return Err(ZhuError::Unsupported("one weight per generator expected".into()));
        }
        let mut free = spec.clone();
        free.relations.clear();
        for (g, w) in free.generators.iter_mut().zip(&ham.weights) {
            g.weight = w.clone();
        }
        Ok(Zhu { eng: Engine::new(free), source: spec.clone(), cache: RefCell::new(HashMap::new()) })
    }

    pub fn engine(&self) -> &Engine {
        &self.eng
    }

    pub fn names(&self) -> Vec<String> {
        self.eng.gens().iter().map(|g| g.name.clone()).collect()
    }

    fn weight(&self, a: &StateVector) -> Result<Scalar> {
        a.homogeneous_weight(self.eng.gens()).ok_or(ZhuError::NonHomogeneous)
    }

    /// Degree of `[a_λ b]`, or -1 when it vanishes.
    fn top_product(&self, a: &StateVector, b: &StateVector) -> Result<i64> {
        Ok(self.eng.bracket(a, b)?.degree().map_or(-1, |d| d as i64))
    }

    /// `a *_n b = Σ_j binom(Δ_a, j) a_(n+j) b`.
    pub fn star_n(&self, a: &StateVector, b: &StateVector, n: i64) -> Result<StateVector> {
        if a.is_zero() {
            return Ok(StateVector::zero());
        }
        let da = self.weight(a)?;
        let mut out = StateVector::zero();
        let top = self.top_product(a, b)?;
        for j in 0..=(top.max(-1) - n).max(0) {
            let c = binom(&da, j as u32);
            if !c.is_zero() {
                out.add_scaled(&self.eng.nth_product(a, b, n + j)?, &c);
            }
        }
        Ok(out)
    }

    /// `[a_* b] = Σ_j binom(Δ_a - 1, j) a_(j) b`.
    pub fn star_bracket(&self, a: &StateVector, b: &StateVector) -> Result<StateVector> {
        if a.is_zero() {
            return Ok(StateVector::zero());
        }
        let da = self.weight(a)? - Scalar::one();
        let br = self.eng.bracket(a, b)?;
        let mut out = StateVector::zero();
        for (j, _) in br.iter() {
            out.add_scaled(&br.nth_product(j), &binom(&da, j));
        }
        Ok(out)
    }

    /// Image of `v` in the Zhu algebra.
    pub fn project(&self, v: &StateVector) -> Result<ZhuWord> {
        let v = self.eng.normalize(v)?;
        let mut out = ZhuWord::zero();
        for (m, c) in v.iter() {
            out.add_scaled(&self.project_monomial(m)?, c);
        }
        Ok(out)
    }

    fn project_monomial(&self, m: &Monomial) -> Result<ZhuWord> {
        if let Some(w) = self.cache.borrow().get(m) {
            return Ok(w.clone());
        }
        let w = match m.len() {
            0 => ZhuWord::one(),
            1 => {
                // π(T a) = -Δ_a π(a)
                let a = m.first().expect("nonempty");
                let base = &self.eng.gens()[a.gen].weight;
                let mut c = Scalar::one();
                for j in 0..a.order {
                    c *= -(base + Scalar::from_integer(j.into()));
                }
                ZhuWord::word(vec![a.gen], c)
            }
            _ => {
                // :aB: = a *_{-1} B - Σ_j binom(Δ_a, j+1) a_(j) B
                let a = m.first().expect("nonempty");
                let rest = m.rest();
                let sa = StateVector::generator(a);
                let sb = StateVector::monomial(rest.clone(), Scalar::one());
                let da = a.weight(self.eng.gens());
                let mut w = self.project_monomial(&Monomial::single(a))?.mul(&self.project_monomial(&rest)?);
                let br = self.eng.bracket(&sa, &sb)?;
                for (j, _) in br.iter() {
                    let c = binom(&da, j + 1);
                    if !c.is_zero() {
                        w.add_scaled(&self.project(&br.nth_product(j))?, &-c);
                    }
                }
                w
            }
        };
        self.cache.borrow_mut().insert(m.clone(), w.clone());
        Ok(w)
    }

    /// Commutators `π([g_i * g_j])` for `i < j`, and the projections of the
    /// spec's relations.
    pub fn presentation(&self) -> Result<Presentation> {
        let n = self.eng.gens().len();
        let gen = |g: usize| StateVector::generator(DerivedGenerator::base(g));
        let mut commutators = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                commutators.push((i, j, self.project(&self.star_bracket(&gen(i), &gen(j))?)?));
            }
        }
        let mut extra = Vec::new();
        for r in &self.source.relations {
            let rhs = self.eng.normalize_raw(&r.rhs)?.coeff(0);
            let lhs = StateVector::generator(r.lhs);
            if let Some(rel) = Relation::from_element(&self.project(&lhs.minus(&rhs))?) {
                extra.push(rel);
            }
        }
        Ok(Presentation { generators: self.names(), commutators, extra })
    }
}

/// `d! binom(Δ_e - h - 1, d)` as a polynomial in `h`.
pub fn smith_polynomial(d: u32, delta_e: &Scalar) -> UPoly {
    let mut p = UPoly::constant(Scalar::one());
    for i in 1..=d {
        p = p.mul(&UPoly::new(vec![delta_e - Scalar::from_integer(i.into()), -Scalar::one()]));
    }
    p
}

/// `binom(β/2 + βh - 1, β - 1)` as a polynomial in `h`.
pub fn lattice_polynomial(beta: u32) -> UPoly {
    let b = Scalar::from_integer(beta.into());
    let base = &b / Scalar::from_integer(2.into()) - Scalar::one();
    let mut p = UPoly::constant(Scalar::one());
    for i in 0..beta.saturating_sub(1) {
        let c = Scalar::from_integer((i + 1).into());
        p = p.mul(&UPoly::new(vec![(&base - Scalar::from_integer(i.into())) / &c, &b / &c]));
    }
    p
}

#[cfg(test)]
mod tests;
