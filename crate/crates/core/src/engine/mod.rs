//! λ-bracket and normal-ordering rewrite engine.
//!
//! Canonical monomials are right-nested products of derived generators in
//! the global order. Products are canonicalized with the adjacent
//! transposition identity and quasi-associativity; brackets are extended from
//! the base table with sesquilinearity and the left and right Wick formulas.
//! Classical mode drops every integral correction.

mod eval;
pub mod spec;

use std::cell::{Cell, RefCell};
use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::terms::scalar::{binom_int, factorial, int};
use crate::terms::{
    DerivedGenerator, Generator, LambdaMuPoly, LambdaPoly, Monomial, Parity, Scalar, StateVector,
};
pub use eval::EvalError;
pub use spec::{AlgebraSpec, BracketTable, Grading, Mode, RawPoly, Relation, SpecError};

pub const DEFAULT_WEIGHT_CAP: i64 = 64;
const DEPTH_CAP: usize = 4096;
const RELATION_STEPS_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("no bracket available for the pair ({0}, {1})")]
    MissingBracketEntry(String, String),
    #[error("weight cap {0} exceeded")]
    WeightOverflow(i64),
    #[error("bracket table entry ({0}, {1}) depends on itself during normalization")]
    CyclicTable(String, String),
    #[error("relation rewriting did not terminate")]
    RelationLoop,
    #[error("declared brackets ({0}, {1}) and ({1}, {0}) violate skew-symmetry")]
    InconsistentSkew(String, String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

type Key2 = (Monomial, Monomial);

#[derive(Default)]
struct Caches {
    base: HashMap<(usize, usize), Rc<LambdaPoly>>,
    nop: HashMap<(DerivedGenerator, Monomial), Rc<StateVector>>,
    prod: HashMap<Key2, Rc<StateVector>>,
    tder: HashMap<Monomial, Rc<StateVector>>,
    gbr: HashMap<(usize, Monomial), Rc<LambdaPoly>>,
    br: HashMap<Key2, Rc<LambdaPoly>>,
    reduced: HashMap<Monomial, Rc<StateVector>>,
    relations: Option<Rc<Vec<(DerivedGenerator, StateVector)>>>,
}

/// Memoizing evaluator for one spec. Not `Sync`: build one per task.
pub struct Engine {
    spec: Arc<AlgebraSpec>,
    weight_cap: Scalar,
    cap_value: i64,
    depth: Cell<usize>,
    caches: RefCell<Caches>,
    in_progress: RefCell<HashSet<(usize, usize)>>,
}

struct DepthGuard<'a>(&'a Cell<usize>);

impl Drop for DepthGuard<'_> {
    fn drop(&mut self) {
        self.0.set(self.0.get() - 1);
    }
}

impl Engine {
    pub fn new(spec: impl Into<Arc<AlgebraSpec>>) -> Self {
        Engine::with_weight_cap(spec, DEFAULT_WEIGHT_CAP)
    }

    pub fn with_weight_cap(spec: impl Into<Arc<AlgebraSpec>>, cap: i64) -> Self {
        Engine {
            spec: spec.into(),
            weight_cap: int(cap),
            cap_value: cap,
            depth: Cell::new(0),
            caches: RefCell::new(Caches::default()),
            in_progress: RefCell::new(HashSet::new()),
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> Arc<AlgebraSpec> {
        self.spec.clone()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.spec.generators
    }

    pub fn is_classical(&self) -> bool {
        self.spec.mode() == Mode::Classical
    }

    pub fn generator(&self, name: &str) -> Result<usize> {
        self.spec.generator_index(name).ok_or_else(|| EngineError::UnknownGenerator(name.to_string()))
    }

    /// The state of a single named generator.
    pub fn gen_state(&self, name: &str) -> Result<StateVector> {
        Ok(StateVector::generator(DerivedGenerator::base(self.generator(name)?)))
    }

    fn enter(&self) -> Result<DepthGuard<'_>> {
        let d = self.depth.get() + 1;
        if d > DEPTH_CAP {
            return Err(EngineError::WeightOverflow(self.cap_value));
        }
        self.depth.set(d);
        Ok(DepthGuard(&self.depth))
    }

    fn check_weight(&self, a: &Monomial, b: &Monomial) -> Result<()> {
        let w = a.weight(self.gens()) + b.weight(self.gens());
        if w > self.weight_cap {
            return Err(EngineError::WeightOverflow(self.cap_value));
        }
        Ok(())
    }

    fn p(&self, g: DerivedGenerator) -> Parity {
        g.parity(self.gens())
    }

    // ----- base table -------------------------------------------------

    /// `[g1_λ g2]` for base generators, from the table or its skew completion.
    pub fn base_bracket(&self, g1: usize, g2: usize) -> Result<Rc<LambdaPoly>> {
        if let Some(v) = self.caches.borrow().base.get(&(g1, g2)) {
            return Ok(v.clone());
        }
        let names = || (self.gens()[g1].name.clone(), self.gens()[g2].name.clone());
        if !self.in_progress.borrow_mut().insert((g1, g2)) {
            let (a, b) = names();
            return Err(EngineError::CyclicTable(a, b));
        }
        let result = self.compute_base(g1, g2);
        self.in_progress.borrow_mut().remove(&(g1, g2));
        let value = Rc::new(result?);
        self.caches.borrow_mut().base.insert((g1, g2), value.clone());
        Ok(value)
    }

    fn compute_base(&self, g1: usize, g2: usize) -> Result<LambdaPoly> {
        let table = &self.spec.table.entries;
        if let Some(raw) = table.get(&(g1, g2)) {
            return self.normalize_raw(raw);
        }
        if table.contains_key(&(g2, g1)) {
            let other = self.base_bracket(g2, g1)?;
            let s = -self.gens()[g1].parity.koszul(self.gens()[g2].parity);
            return Ok(self.substitute_minus_lambda_minus_t(&other)?.scaled(&s));
        }
        Err(EngineError::MissingBracketEntry(self.gens()[g1].name.clone(), self.gens()[g2].name.clone()))
    }

    /// Checks skew-symmetry for pairs declared in both orders.
    pub fn check_declared_skew(&self) -> Result<()> {
        let table = &self.spec.table.entries;
        for &(a, b) in table.keys() {
            if a < b && table.contains_key(&(b, a)) {
                let ab = self.base_bracket(a, b)?;
                let ba = self.base_bracket(b, a)?;
                let s = -self.gens()[a].parity.koszul(self.gens()[b].parity);
                let expect = self.substitute_minus_lambda_minus_t(&ba)?.scaled(&s);
                if *ab != expect {
                    return Err(EngineError::InconsistentSkew(
                        self.gens()[a].name.clone(),
                        self.gens()[b].name.clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn normalize_raw(&self, raw: &RawPoly) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (n, word, c) in raw.iter() {
            let v = self.normalize_word(word)?;
            out.add_state(n, &v, c);
        }
        Ok(out)
    }

    /// Canonical form of the right-nested product of `word`.
    pub fn normalize_word(&self, word: &[DerivedGenerator]) -> Result<StateVector> {
        let mut acc = StateVector::vacuum();
        for &f in word.iter().rev() {
            acc = self.nop_gen_sv(f, &acc)?;
        }
        Ok(acc)
    }

    /// Re-canonicalizes a state whose monomials may be out of order.
    pub fn normalize(&self, v: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero();
        for (m, c) in v.iter() {
            if m.is_canonical(self.gens()) {
                out.add_term(m.clone(), c.clone());
            } else {
                out.add_scaled(&self.normalize_word(m.factors())?, c);
            }
        }
        Ok(out)
    }

    // ----- T ----------------------------------------------------------

    pub fn apply_t(&self, v: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero();
        for (m, c) in v.iter() {
            let t = self.apply_t_mono(m)?;
            out.add_scaled(&t, c);
        }
        Ok(out)
    }

    pub fn apply_t_pow(&self, v: &StateVector, k: u32) -> Result<StateVector> {
        let mut cur = v.clone();
        for _ in 0..k {
            if cur.is_zero() {
                break;
            }
            cur = self.apply_t(&cur)?;
        }
        Ok(cur)
    }

    fn apply_t_mono(&self, m: &Monomial) -> Result<Rc<StateVector>> {
        if let Some(v) = self.caches.borrow().tder.get(m) {
            return Ok(v.clone());
        }
        let _g = self.enter()?;
        let out = match m.first() {
            None => StateVector::zero(),
            Some(f) => {
                let rest = m.rest();
                let mut out = (*self.nop_gen(f.derive(1), &rest)?).clone();
                let trest = self.apply_t_mono(&rest)?;
                out.add(&self.nop_gen_sv(f, &trest)?);
                out
            }
        };
        let out = Rc::new(out);
        self.caches.borrow_mut().tder.insert(m.clone(), out.clone());
        Ok(out)
    }

    // ----- λ substitutions needing T ------------------------------------

    pub fn substitute_minus_lambda_minus_t(&self, p: &LambdaPoly) -> Result<LambdaPoly> {
        p.substitute_minus_lambda_minus_t(|v, k| self.apply_t_pow(v, k))
    }

    pub fn integrate_minus_t_to_zero(&self, p: &LambdaPoly) -> Result<StateVector> {
        p.integrate_minus_t_to_zero(|v, k| self.apply_t_pow(v, k))
    }

    /// `(λ+T)^k p`.
    fn lambda_plus_t_pow(&self, p: &LambdaPoly, k: u32) -> Result<LambdaPoly> {
        if k == 0 {
            return Ok(p.clone());
        }
        let mut out = LambdaPoly::zero();
        for (n, v) in p.iter() {
            let mut tv = v.clone();
            for j in 0..=k {
                if j > 0 {
                    tv = self.apply_t(&tv)?;
                }
                if tv.is_zero() {
                    break;
                }
                out.add_state(n + k - j, &tv, &binom_int(k, j));
            }
        }
        Ok(out)
    }

    // ----- normally ordered products ---------------------------------

    /// `:a v:` for a single derived generator `a`.
    pub fn nop_gen_sv(&self, a: DerivedGenerator, v: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero();
        for (m, c) in v.iter() {
            let r = self.nop_gen(a, m)?;
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    fn nop_gen(&self, a: DerivedGenerator, m: &Monomial) -> Result<Rc<StateVector>> {
        let quick = match m.first() {
            None => Some(Monomial::single(a)),
            Some(b) if a < b || (a == b && !self.p(a).is_odd()) => Some(m.prepend(a)),
            _ => None,
        };
        if let Some(mono) = quick {
            return Ok(Rc::new(StateVector::monomial(mono, Scalar::one())));
        }
        let key = (a, m.clone());
        if let Some(v) = self.caches.borrow().nop.get(&key) {
            return Ok(v.clone());
        }
        let _g = self.enter()?;
        self.check_weight(&Monomial::single(a), m)?;
        let b = m.first().expect("nonempty");
        let rest = m.rest();
        let mut out = StateVector::zero();
        if a == b {
            // odd square: 2 :a a C: = :(∫_{-T}^0 [a_λ a]) C:
            if !self.is_classical() {
                let br = self.bracket_dg(a, &Monomial::single(a))?;
                let integral = self.integrate_minus_t_to_zero(&br)?;
                let prod = self.prod_sv(&integral, &StateVector::monomial(rest, Scalar::one()))?;
                out.add_scaled(&prod, &(Scalar::one() / int(2)));
            }
        } else {
            let s = self.p(a).koszul(self.p(b));
            let inner = self.nop_gen(a, &rest)?;
            out.add_scaled(&self.nop_gen_sv(b, &inner)?, &s);
            if !self.is_classical() {
                let br = self.bracket_dg(a, &Monomial::single(b))?;
                let integral = self.integrate_minus_t_to_zero(&br)?;
                if !integral.is_zero() {
                    out.add(&self.prod_sv(&integral, &StateVector::monomial(rest, Scalar::one()))?);
                }
            }
        }
        let out = Rc::new(out);
        self.caches.borrow_mut().nop.insert(key, out.clone());
        Ok(out)
    }

    /// Canonical `:u v:` for canonical states.
    pub fn wick(&self, u: &StateVector, v: &StateVector) -> Result<StateVector> {
        self.prod_sv(u, v)
    }

    fn prod_sv(&self, u: &StateVector, v: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero();
        for (mu, cu) in u.iter() {
            for (mv, cv) in v.iter() {
                let r = self.prod_mono(mu, mv)?;
                out.add_scaled(&r, &(cu * cv));
            }
        }
        Ok(out)
    }

    fn prod_mono(&self, u: &Monomial, v: &Monomial) -> Result<Rc<StateVector>> {
        if u.is_vacuum() {
            return Ok(Rc::new(StateVector::monomial(v.clone(), Scalar::one())));
        }
        if v.is_vacuum() {
            return Ok(Rc::new(StateVector::monomial(u.clone(), Scalar::one())));
        }
        if u.len() == 1 {
            return self.nop_gen(u.first().expect("nonempty"), v);
        }
        let key = (u.clone(), v.clone());
        if let Some(r) = self.caches.borrow().prod.get(&key) {
            return Ok(r.clone());
        }
        let _g = self.enter()?;
        self.check_weight(u, v)?;
        let a = u.first().expect("nonempty");
        let b = u.rest();
        let bv = self.prod_mono(&b, v)?;
        let mut out = self.nop_gen_sv(a, &bv)?;
        if !self.is_classical() {
            // :(∫_0^T dλ a)[B_λ v]:
            let br = self.bracket_mono(&b, v)?;
            for (n, cn) in br.iter() {
                let t = self.nop_gen_sv(a.derive(n + 1), cn)?;
                out.add_scaled(&t, &(Scalar::one() / int(n as i64 + 1)));
            }
            // (-1)^{p(a)p(B)} :(∫_0^T dλ B)[a_λ v]:
            let s = self.p(a).koszul(b.parity(self.gens()));
            let ar = self.bracket_dg(a, v)?;
            let bsv = StateVector::monomial(b.clone(), Scalar::one());
            for (n, dn) in ar.iter() {
                let tb = self.apply_t_pow(&bsv, n + 1)?;
                let t = self.prod_sv(&tb, dn)?;
                out.add_scaled(&t, &(&s / int(n as i64 + 1)));
            }
        }
        let out = Rc::new(out);
        self.caches.borrow_mut().prod.insert(key, out.clone());
        Ok(out)
    }

    // ----- brackets ---------------------------------------------------

    pub fn bracket(&self, u: &StateVector, v: &StateVector) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (mu, cu) in u.iter() {
            for (mv, cv) in v.iter() {
                let r = self.bracket_mono(mu, mv)?;
                out.add_scaled(&r, &(cu * cv));
            }
        }
        Ok(out)
    }

    fn bracket_mono_sv(&self, u: &Monomial, v: &StateVector) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (mv, cv) in v.iter() {
            out.add_scaled(&*self.bracket_mono(u, mv)?, cv);
        }
        Ok(out)
    }

    fn bracket_sv_mono(&self, u: &StateVector, v: &Monomial) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (mu, cu) in u.iter() {
            out.add_scaled(&*self.bracket_mono(mu, v)?, cu);
        }
        Ok(out)
    }

    /// `[T^k g _λ m] = (-λ)^k [g_λ m]`.
    fn bracket_dg(&self, a: DerivedGenerator, m: &Monomial) -> Result<LambdaPoly> {
        let base = self.bracket_gen(a.gen, m)?;
        Ok(base.times_lambda_power(a.order, &-Scalar::one()))
    }

    fn bracket_mono(&self, u: &Monomial, v: &Monomial) -> Result<Rc<LambdaPoly>> {
        if u.is_vacuum() || v.is_vacuum() {
            return Ok(Rc::new(LambdaPoly::zero()));
        }
        if u.len() == 1 {
            let a = u.first().expect("nonempty");
            if a.order == 0 {
                return self.bracket_gen(a.gen, v);
            }
            return Ok(Rc::new(self.bracket_dg(a, v)?));
        }
        let key = (u.clone(), v.clone());
        if let Some(r) = self.caches.borrow().br.get(&key) {
            return Ok(r.clone());
        }
        let _g = self.enter()?;
        self.check_weight(u, v)?;
        let a = u.first().expect("nonempty");
        let b = u.rest();
        let s = self.p(a).koszul(b.parity(self.gens()));
        let mut out = LambdaPoly::zero();
        // :(e^{T∂_λ} a)[B_λ v]:
        let bv = self.bracket_mono(&b, v)?;
        for (n, cn) in bv.iter() {
            for k in 0..=n {
                let t = self.nop_gen_sv(a.derive(k), cn)?;
                out.add_state(n - k, &t, &binom_int(n, k));
            }
        }
        // (-1)^{p(a)p(B)} :(e^{T∂_λ} B)[a_λ v]:
        let av = self.bracket_dg(a, v)?;
        let bsv = StateVector::monomial(b.clone(), Scalar::one());
        for (n, dn) in av.iter() {
            let mut tb = bsv.clone();
            for k in 0..=n {
                if k > 0 {
                    tb = self.apply_t(&tb)?;
                }
                if tb.is_zero() {
                    break;
                }
                let t = self.prod_sv(&tb, dn)?;
                out.add_state(n - k, &t, &(&s * binom_int(n, k)));
            }
        }
        if !self.is_classical() {
            // (-1)^{p(a)p(B)} ∫_0^λ dμ [B_μ [a_{λ-μ} v]]
            for (n, dn) in av.iter() {
                let inner = self.bracket_mono_sv(&b, dn)?;
                for (m, w) in inner.iter() {
                    let beta = factorial(n) * factorial(m) / factorial(n + m + 1);
                    out.add_state(n + m + 1, w, &(&s * beta));
                }
            }
        }
        let out = Rc::new(out);
        self.caches.borrow_mut().br.insert(key, out.clone());
        Ok(out)
    }

    /// `[g_λ m]` for a base generator `g`.
    fn bracket_gen(&self, g: usize, m: &Monomial) -> Result<Rc<LambdaPoly>> {
        if m.is_vacuum() {
            return Ok(Rc::new(LambdaPoly::zero()));
        }
        let key = (g, m.clone());
        if let Some(r) = self.caches.borrow().gbr.get(&key) {
            return Ok(r.clone());
        }
        let _guard = self.enter()?;
        self.check_weight(&Monomial::single(DerivedGenerator::base(g)), m)?;
        let b = m.first().expect("nonempty");
        let rest = m.rest();
        let gb = {
            let base = self.base_bracket(g, b.gen)?;
            self.lambda_plus_t_pow(&base, b.order)?
        };
        let out = if rest.is_vacuum() {
            gb
        } else {
            let mut out = LambdaPoly::zero();
            let rest_sv = StateVector::monomial(rest.clone(), Scalar::one());
            // :[g_λ b] C:
            for (n, cn) in gb.iter() {
                out.add_state(n, &self.prod_sv(cn, &rest_sv)?, &Scalar::one());
            }
            // (-1)^{p(g)p(b)} :b [g_λ C]:
            let s = self.gens()[g].parity.koszul(self.p(b));
            let gc = self.bracket_gen(g, &rest)?;
            for (n, dn) in gc.iter() {
                out.add_state(n, &self.nop_gen_sv(b, dn)?, &s);
            }
            if !self.is_classical() {
                // ∫_0^λ dμ [[g_λ b]_μ C]
                for (n, cn) in gb.iter() {
                    let inner = self.bracket_sv_mono(cn, &rest)?;
                    for (k, w) in inner.iter() {
                        out.add_state(n + k + 1, w, &(Scalar::one() / int(k as i64 + 1)));
                    }
                }
            }
            out
        };
        let out = Rc::new(out);
        self.caches.borrow_mut().gbr.insert(key, out.clone());
        Ok(out)
    }

    /// `a_(n) b` for any integer `n`.
    pub fn nth_product(&self, u: &StateVector, v: &StateVector, n: i64) -> Result<StateVector> {
        if n >= 0 {
            Ok(self.bracket(u, v)?.nth_product(n as u32))
        } else {
            let k = (-n - 1) as u32;
            let tu = self.apply_t_pow(u, k)?;
            Ok(self.prod_sv(&tu, v)?.scaled(&(Scalar::one() / factorial(k))))
        }
    }

    /// `[a_λ [b_μ c]]` with exponents `(λ, μ)`.
    pub fn double_bracket(&self, a: &StateVector, b: &StateVector, c: &StateVector) -> Result<LambdaMuPoly> {
        let inner = self.bracket(b, c)?;
        let mut out = LambdaMuPoly::zero();
        for (n, xn) in inner.iter() {
            let outer = self.bracket(a, xn)?;
            for (m, y) in outer.iter() {
                out.add_state(m, n, y, &Scalar::one());
            }
        }
        Ok(out)
    }

    /// `[[a_λ b]_{λ+μ} c]` with exponents `(λ, μ)`.
    pub fn nested_left_bracket(&self, a: &StateVector, b: &StateVector, c: &StateVector) -> Result<LambdaMuPoly> {
        let ab = self.bracket(a, b)?;
        let mut out = LambdaMuPoly::zero();
        for (n, un) in ab.iter() {
            let outer = self.bracket(un, c)?;
            for (k, w) in outer.iter() {
                for j in 0..=k {
                    // λ^n (λ+μ)^k
                    out.add_state(n + j, k - j, w, &binom_int(k, j));
                }
            }
        }
        Ok(out)
    }

    // ----- relations --------------------------------------------------

    fn relation_rules(&self) -> Result<Rc<Vec<(DerivedGenerator, StateVector)>>> {
        if let Some(r) = &self.caches.borrow().relations {
            return Ok(r.clone());
        }
        let mut rules = Vec::new();
        for r in &self.spec.relations {
            let rhs = self.normalize_raw(&r.rhs)?.coeff(0);
            rules.push((r.lhs, rhs));
        }
        let rules = Rc::new(rules);
        self.caches.borrow_mut().relations = Some(rules.clone());
        Ok(rules)
    }

    pub fn has_relations(&self) -> bool {
        !self.spec.relations.is_empty()
    }

    fn matching_positions(&self, rules: &[(DerivedGenerator, StateVector)], m: &Monomial) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, f) in m.factors().iter().enumerate() {
            for (ri, (lhs, _)) in rules.iter().enumerate() {
                if f.gen == lhs.gen && f.order >= lhs.order {
                    out.push((i, ri));
                    break;
                }
            }
        }
        out
    }

    /// Replaces factor `pos` of `m` by the rule's right-hand side and re-canonicalizes.
    fn rewrite_at(&self, rules: &[(DerivedGenerator, StateVector)], m: &Monomial, pos: usize, rule: usize) -> Result<StateVector> {
        let (lhs, rhs) = &rules[rule];
        let f = m.factors()[pos];
        let repl = self.apply_t_pow(rhs, f.order - lhs.order)?;
        let suffix = Monomial::from_factors(m.factors()[pos + 1..].to_vec());
        let mut x = self.prod_sv(&repl, &StateVector::monomial(suffix, Scalar::one()))?;
        for &g in m.factors()[..pos].iter().rev() {
            x = self.nop_gen_sv(g, &x)?;
        }
        Ok(x)
    }

    /// Rewrites with the spec relations to a fixpoint, always at the leftmost match.
    pub fn reduce(&self, v: &StateVector) -> Result<StateVector> {
        if !self.has_relations() {
            return Ok(v.clone());
        }
        let mut out = StateVector::zero();
        for (m, c) in v.iter() {
            out.add_scaled(&*self.reduce_mono(m)?, c);
        }
        Ok(out)
    }

    fn reduce_mono(&self, m: &Monomial) -> Result<Rc<StateVector>> {
        if let Some(r) = self.caches.borrow().reduced.get(m) {
            return Ok(r.clone());
        }
        let _g = self.enter()?;
        let rules = self.relation_rules()?;
        let pos = self.matching_positions(&rules, m);
        let out = match pos.first() {
            None => StateVector::monomial(m.clone(), Scalar::one()),
            Some(&(i, ri)) => {
                let x = self.rewrite_at(&rules, m, i, ri)?;
                self.reduce(&x)?
            }
        };
        let out = Rc::new(out);
        self.caches.borrow_mut().reduced.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Rewrites to a fixpoint, letting `choose` pick which match to rewrite
    /// among the candidates `(monomial index, factor position)`.
    pub fn reduce_with(&self, v: &StateVector, choose: &mut dyn FnMut(usize) -> usize) -> Result<StateVector> {
        let rules = self.relation_rules()?;
        let mut cur = v.clone();
        for _ in 0..RELATION_STEPS_CAP {
            let mut candidates = Vec::new();
            for (m, c) in cur.iter() {
                for (i, ri) in self.matching_positions(&rules, m) {
                    candidates.push((m.clone(), c.clone(), i, ri));
                }
            }
            if candidates.is_empty() {
                return Ok(cur);
            }
            let (m, c, i, ri) = candidates.swap_remove(choose(candidates.len()) % candidates.len());
            let x = self.rewrite_at(&rules, &m, i, ri)?;
            cur.add_term(m, -c.clone());
            cur.add_scaled(&x, &c);
        }
        Err(EngineError::RelationLoop)
    }

    pub fn reduce_lambda(&self, p: &LambdaPoly) -> Result<LambdaPoly> {
        p.map_states(|v| self.reduce(v))
    }

    pub fn reduce_lambda_mu(&self, p: &LambdaMuPoly) -> Result<LambdaMuPoly> {
        p.map_states(|v| self.reduce(v))
    }

    // ----- homomorphic images -------------------------------------------

    /// Image of `v` under the vertex algebra morphism sending generator `i`
    /// of `v`'s spec to `images[i]` (states of this engine's spec).
    pub fn map_state(&self, v: &StateVector, images: &[StateVector]) -> Result<StateVector> {
        let mut derived: HashMap<DerivedGenerator, StateVector> = HashMap::new();
        let mut out = StateVector::zero();
        for (m, c) in v.iter() {
            let mut acc = StateVector::vacuum();
            for &f in m.factors().iter().rev() {
                if !derived.contains_key(&f) {
                    let img = self.apply_t_pow(&images[f.gen], f.order)?;
                    derived.insert(f, img);
                }
                acc = self.prod_sv(&derived[&f], &acc)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    pub fn map_lambda(&self, p: &LambdaPoly, images: &[StateVector]) -> Result<LambdaPoly> {
        p.map_states(|v| self.map_state(v, images))
    }
}

#[cfg(test)]
mod tests;
