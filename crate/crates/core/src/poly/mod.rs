//! Exact polynomial arithmetic used by the P-family solvers.

pub mod linalg;
pub mod univariate;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::terms::scalar::int;
use crate::terms::Scalar;

/// Sparse polynomial in commuting variables indexed by `usize`.
/// Exponent vectors never carry trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, Scalar>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = Poly::zero();
        p.add_term(e, Scalar::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = trim(exps);
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], &Scalar)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
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

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(&trim(exps.to_vec())).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (e, k) in &self.terms {
            out.add_term(e.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> =
                    (0..n).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            if k > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * int(k as i64));
            }
        }
        out
    }

    /// Applies the derivation determined by its values on the variables.
    pub fn derivation(&self, image: &dyn Fn(usize) -> Poly) -> Poly {
        let mut out = Poly::zero();
        for i in 0..self.num_vars() {
            let d = self.derivative(i);
            if !d.is_zero() {
                out = out.add(&d.mul(&image(i)));
            }
        }
        out
    }

    /// Substitutes `image(i)` for every variable `i`.
    pub fn substitute(&self, image: &dyn Fn(usize) -> Poly) -> Poly {
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let f = cache.entry((i, k)).or_insert_with(|| image(i).pow(k)).clone();
                    t = t.mul(&f);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Coefficient of `var_i^k`, as a polynomial in the other variables.
    pub fn coeff_in(&self, i: usize, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e.get(i).copied().unwrap_or(0) == k {
                let mut e2 = e.clone();
                if i < e2.len() {
                    e2[i] = 0;
                }
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Maximum of `Σ weight(i)·e_i` over terms.
    pub fn weighted_degree(&self, weight: &dyn Fn(usize) -> u32) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().enumerate().map(|(i, &k)| weight(i) * k).sum()).max()
    }

    pub fn is_homogeneous(&self, weight: &dyn Fn(usize) -> u32) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().enumerate().map(|(i, &k)| weight(i) * k).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = Poly::var(1);
        let y = Poly::var(2);
        let p = x.add(&y).pow(2);
        assert_eq!(p.coeff(&[0, 1, 1]), int(2));
        assert_eq!(p.derivative(1), x.scale(&int(2)).add(&y.scale(&int(2))));
        let s = p.substitute(&|i| if i == 2 { Poly::constant(int(-1)) } else { Poly::var(i) });
        assert_eq!(s, x.sub(&Poly::one()).pow(2));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivation_matches_leibniz() {
        // T x_k = x_{k+1}
        let t = |i: usize| if i == 0 { Poly::zero() } else { Poly::var(i + 1) };
        let x1 = Poly::var(1);
        assert_eq!(x1.pow(2).derivation(&t), x1.mul(&Poly::var(2)).scale(&int(2)));
    }
}
