use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::terms::scalar::{factorial, int};
use crate::terms::Scalar;

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        UPoly::new(vec![c])
    }

    pub fn x() -> Self {
        UPoly::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `binom(x, n) = x(x-1)...(x-n+1)/n!`.
    pub fn binomial(n: u32) -> Self {
        let mut acc = UPoly::constant(Scalar::one());
        for i in 0..n {
            acc = acc.mul(&UPoly::new(vec![int(-(i as i64)), Scalar::one()]));
        }
        acc.scale(&(Scalar::one() / factorial(n)))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|k| k * c).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn monic(&self) -> UPoly {
        match self.coeffs.last() {
            None => UPoly::zero(),
            Some(lead) => self.scale(&(Scalar::one() / lead)),
        }
    }

    pub fn rem(&self, divisor: &UPoly) -> UPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs[dd].clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    r[top - dd + i] -= &q * c;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Distinct rational roots in increasing order. Panics on the zero polynomial.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        assert!(!self.is_zero(), "every number is a root of the zero polynomial");
        let mut roots = Vec::new();
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
        if shift > 0 {
            roots.push(Scalar::zero());
        }
        let reduced: Vec<Scalar> = self.coeffs[shift..].to_vec();
        let lcm = reduced.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = reduced.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let p = UPoly::new(reduced);
        for num in divisors(&a0) {
            for den in divisors(&an) {
                for s in [1i64, -1] {
                    let cand = BigRational::new(num.clone() * s, den.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let j = n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

/// Lagrange interpolation through distinct abscissae.
pub fn interpolate(points: &[(Scalar, Scalar)]) -> UPoly {
    let mut out = UPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = UPoly::constant(Scalar::one());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let factor = UPoly::new(vec![-xj.clone(), Scalar::one()]).scale(&(Scalar::one() / (xi - xj)));
                basis = basis.mul(&factor);
            }
        }
        out = out.add(&basis.scale(yi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::scalar::rat;

    #[test]
    fn gcd_and_roots() {
        let a = UPoly::new(vec![int(1), int(1)]).mul(&UPoly::new(vec![int(-7), int(1)]));
        let b = UPoly::new(vec![int(1), int(1)]).mul(&UPoly::new(vec![int(2), int(1)]));
        let g = a.gcd(&b);
        assert_eq!(g, UPoly::new(vec![int(1), int(1)]));
        assert_eq!(a.rational_roots(), vec![int(-1), int(7)]);
        let c = UPoly::new(vec![int(0), int(-1), int(2)]);
        assert_eq!(c.rational_roots(), vec![int(0), rat(1, 2)]);
        assert!(UPoly::zero().gcd(&UPoly::zero()).is_zero());
    }

    #[test]
    fn binomial_polynomial() {
        let b = UPoly::binomial(3);
        assert_eq!(b.eval(&int(5)), int(10));
        assert_eq!(b.eval(&int(-1)), int(-1));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UPoly::new(vec![int(3), rat(-1, 2), int(2)]);
        let pts: Vec<_> = (0..3).map(|i| (int(i), p.eval(&int(i)))).collect();
        assert_eq!(interpolate(&pts), p);
    }
}
