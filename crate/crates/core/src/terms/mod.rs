//! Symbolic data model: scalars, derived generators, canonical monomials,
//! state vectors and polynomials in the formal bracket variables.

mod render;
pub mod scalar;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

pub use render::{render_lambda, render_lambda_mu, render_monomial, render_state};
pub use scalar::Scalar;
use scalar::{binom_int, factorial, int, sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_int(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Koszul sign `(-1)^{p q}`.
    pub fn koszul(self, other: Parity) -> Scalar {
        if self.is_odd() && other.is_odd() {
            -Scalar::one()
        } else {
            Scalar::one()
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub weight: Scalar,
}

impl Generator {
    pub fn new(name: impl Into<String>, parity: Parity, weight: Scalar) -> Self {
        Generator { name: name.into(), parity, weight }
    }
}

/// `T^order` applied to the generator with declaration index `gen`.
///
/// The derived ordering (index first, then order) is the global monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivedGenerator {
    pub gen: usize,
    pub order: u32,
}

impl DerivedGenerator {
    pub fn new(gen: usize, order: u32) -> Self {
        DerivedGenerator { gen, order }
    }

    pub fn base(gen: usize) -> Self {
        DerivedGenerator { gen, order: 0 }
    }

    pub fn derive(self, k: u32) -> Self {
        DerivedGenerator { gen: self.gen, order: self.order + k }
    }

    pub fn weight(self, gens: &[Generator]) -> Scalar {
        &gens[self.gen].weight + int(self.order as i64)
    }

    pub fn parity(self, gens: &[Generator]) -> Parity {
        gens[self.gen].parity
    }
}

/// Right-nested normally ordered product of derived generators.
/// The empty monomial is the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<DerivedGenerator>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(g: DerivedGenerator) -> Self {
        Monomial(vec![g])
    }

    /// Wraps factors without reordering them.
    pub fn from_factors(factors: Vec<DerivedGenerator>) -> Self {
        Monomial(factors)
    }

    /// Sorted copy; callers must know that reordering is free (for example
    /// factors whose mutual brackets are central).
    pub fn sorted(mut factors: Vec<DerivedGenerator>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn factors(&self) -> &[DerivedGenerator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<DerivedGenerator> {
        self.0.first().copied()
    }

    pub fn rest(&self) -> Monomial {
        Monomial(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn prepend(&self, g: DerivedGenerator) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(g);
        v.extend_from_slice(&self.0);
        Monomial(v)
    }

    pub fn weight(&self, gens: &[Generator]) -> Scalar {
        self.0.iter().fold(Scalar::zero(), |acc, g| acc + g.weight(gens))
    }

    pub fn parity(&self, gens: &[Generator]) -> Parity {
        self.0.iter().fold(Parity::Even, |acc, g| acc.add(g.parity(gens)))
    }

    /// Canonical means sorted, with no repeated odd factor.
    pub fn is_canonical(&self, gens: &[Generator]) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && !w[0].parity(gens).is_odd()))
    }

    pub fn involves_only(&self, gen: usize) -> bool {
        self.0.iter().all(|g| g.gen == gen)
    }
}

/// Finite linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StateVector {
    terms: BTreeMap<Monomial, Scalar>,
}

impl StateVector {
    pub fn zero() -> Self {
        StateVector::default()
    }

    pub fn vacuum() -> Self {
        StateVector::monomial(Monomial::vacuum(), Scalar::one())
    }

    pub fn generator(g: DerivedGenerator) -> Self {
        StateVector::monomial(Monomial::single(g), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut v = StateVector::zero();
        v.add_term(m, c);
        v
    }

    pub fn scalar(c: Scalar) -> Self {
        StateVector::monomial(Monomial::vacuum(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &StateVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, k) in &other.terms {
            self.add_term(m.clone(), k * c);
        }
    }

    pub fn add(&mut self, other: &StateVector) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn scaled(&self, c: &Scalar) -> StateVector {
        let mut out = StateVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn negated(&self) -> StateVector {
        self.scaled(&-Scalar::one())
    }

    pub fn minus(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn plus(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add(other);
        out
    }

    /// Weight if every term has the same weight.
    pub fn homogeneous_weight(&self, gens: &[Generator]) -> Option<Scalar> {
        let mut w: Option<Scalar> = None;
        for m in self.terms.keys() {
            let mw = m.weight(gens);
            match &w {
                None => w = Some(mw),
                Some(x) if *x != mw => return None,
                _ => {}
            }
        }
        w
    }

    pub fn homogeneous_parity(&self, gens: &[Generator]) -> Option<Parity> {
        let mut p: Option<Parity> = None;
        for m in self.terms.keys() {
            let mp = m.parity(gens);
            match p {
                None => p = Some(mp),
                Some(x) if x != mp => return None,
                _ => {}
            }
        }
        p
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// The single coefficient `c` when `self = c * m`.
    pub fn as_single(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// If `self` is proportional to `other`, the factor `c` with `self = c * other`.
    pub fn ratio_to(&self, other: &StateVector) -> Option<Scalar> {
        if other.is_zero() {
            return if self.is_zero() { Some(Scalar::zero()) } else { None };
        }
        let (m, c) = other.terms.iter().next()?;
        let k = self.coeff(m) / c;
        if *self == other.scaled(&k) {
            Some(k)
        } else {
            None
        }
    }
}

impl FromIterator<(Monomial, Scalar)> for StateVector {
    fn from_iter<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut v = StateVector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

/// Polynomial in one formal variable with state coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: BTreeMap<u32, StateVector>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn constant(v: StateVector) -> Self {
        let mut p = LambdaPoly::zero();
        p.add_state(0, &v, &Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, n: u32) -> StateVector {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &StateVector)> {
        self.coeffs.iter().map(|(n, v)| (*n, v))
    }

    pub fn add_term(&mut self, n: u32, m: Monomial, c: Scalar) {
        let e = self.coeffs.entry(n).or_default();
        e.add_term(m, c);
        if e.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add_state(&mut self, n: u32, v: &StateVector, c: &Scalar) {
        if v.is_zero() || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(n).or_default();
        e.add_scaled(v, c);
        if e.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add_scaled(&mut self, other: &LambdaPoly, c: &Scalar) {
        for (n, v) in &other.coeffs {
            self.add_state(*n, v, c);
        }
    }

    pub fn add(&mut self, other: &LambdaPoly) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn scaled(&self, c: &Scalar) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn minus(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    /// Multiplies by `(c λ)^k`.
    pub fn times_lambda_power(&self, k: u32, c: &Scalar) -> LambdaPoly {
        let mut factor = Scalar::one();
        for _ in 0..k {
            factor *= c;
        }
        let mut out = LambdaPoly::zero();
        for (n, v) in &self.coeffs {
            out.add_state(n + k, v, &factor);
        }
        out
    }

    /// `∂_λ`.
    pub fn derivative(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (n, v) in &self.coeffs {
            if *n > 0 {
                out.add_state(n - 1, v, &int(*n as i64));
            }
        }
        out
    }

    /// `∫_0^λ dμ`: exponent `n` goes to `n+1` with factor `1/(n+1)`.
    pub fn integrate_zero_to_lambda(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (n, v) in &self.coeffs {
            out.add_state(n + 1, v, &(Scalar::one() / int(*n as i64 + 1)));
        }
        out
    }

    /// `∫_{-T}^0 dλ`: `c_n λ^n` becomes `(-1)^n/(n+1) T^{n+1} c_n`.
    pub fn integrate_minus_t_to_zero<E>(
        &self,
        mut t_pow: impl FnMut(&StateVector, u32) -> Result<StateVector, E>,
    ) -> Result<StateVector, E> {
        let mut out = StateVector::zero();
        for (n, v) in &self.coeffs {
            let tv = t_pow(v, n + 1)?;
            out.add_scaled(&tv, &(sign(*n) / int(*n as i64 + 1)));
        }
        Ok(out)
    }

    /// `λ ↦ -λ-T`, with `T` acting on the coefficient states.
    pub fn substitute_minus_lambda_minus_t<E>(
        &self,
        mut t_pow: impl FnMut(&StateVector, u32) -> Result<StateVector, E>,
    ) -> Result<LambdaPoly, E> {
        let mut out = LambdaPoly::zero();
        for (n, v) in &self.coeffs {
            for k in 0..=*n {
                let tv = t_pow(v, n - k)?;
                out.add_state(k, &tv, &(sign(*n) * binom_int(*n, k)));
            }
        }
        Ok(out)
    }

    /// `λ ↦ λ+μ`, giving exponents `(λ, μ)`.
    pub fn substitute_lambda_plus_mu(&self) -> LambdaMuPoly {
        let mut out = LambdaMuPoly::zero();
        for (n, v) in &self.coeffs {
            for k in 0..=*n {
                out.add_state(k, n - k, v, &binom_int(*n, k));
            }
        }
        out
    }

    /// Coefficients `a_(n) b = n! [λ^n]`.
    pub fn nth_product(&self, n: u32) -> StateVector {
        self.coeff(n).scaled(&factorial(n))
    }

    pub fn map_states<E>(
        &self,
        mut f: impl FnMut(&StateVector) -> Result<StateVector, E>,
    ) -> Result<LambdaPoly, E> {
        let mut out = LambdaPoly::zero();
        for (n, v) in &self.coeffs {
            out.add_state(*n, &f(v)?, &Scalar::one());
        }
        Ok(out)
    }
}

/// Polynomial in two formal variables `(λ, μ)` with state coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaMuPoly {
    coeffs: BTreeMap<(u32, u32), StateVector>,
}

impl LambdaMuPoly {
    pub fn zero() -> Self {
        LambdaMuPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: u32, n: u32) -> StateVector {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &StateVector)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn add_state(&mut self, m: u32, n: u32, v: &StateVector, c: &Scalar) {
        if v.is_zero() || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((m, n)).or_default();
        e.add_scaled(v, c);
        if e.is_zero() {
            self.coeffs.remove(&(m, n));
        }
    }

    pub fn add_scaled(&mut self, other: &LambdaMuPoly, c: &Scalar) {
        for ((m, n), v) in &other.coeffs {
            self.add_state(*m, *n, v, c);
        }
    }

    pub fn map_states<E>(
        &self,
        mut f: impl FnMut(&StateVector) -> Result<StateVector, E>,
    ) -> Result<LambdaMuPoly, E> {
        let mut out = LambdaMuPoly::zero();
        for ((m, n), v) in &self.coeffs {
            out.add_state(*m, *n, &f(v)?, &Scalar::one());
        }
        Ok(out)
    }

    /// Nonzero coefficients ordered by total degree, then by the λ exponent.
    pub fn by_total_degree(&self) -> Vec<((u32, u32), &StateVector)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by_key(|((m, n), _)| (m + n, *m));
        v
    }

    /// Swaps the roles of λ and μ.
    pub fn swapped(&self) -> LambdaMuPoly {
        let mut out = LambdaMuPoly::zero();
        for ((m, n), v) in &self.coeffs {
            out.add_state(*n, *m, v, &Scalar::one());
        }
        out
    }
}
