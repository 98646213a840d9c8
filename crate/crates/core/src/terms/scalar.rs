use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficient. Always reduced, denominator positive.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    BigRational::from_integer(acc)
}

/// Generalized binomial q(q-1)...(q-n+1)/n! for rational q.
pub fn binom(q: &Scalar, n: u32) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..n {
        acc *= q - int(i as i64);
    }
    acc / factorial(n)
}

pub fn binom_int(n: u32, k: u32) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    binom(&int(n as i64), k)
}

/// `(-1)^n` as a scalar.
pub fn sign(n: u32) -> Scalar {
    if n % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `q^n` for any integer `n`; `q` must be nonzero when `n < 0`.
pub fn pow(q: &Scalar, n: i32) -> Scalar {
    let p = num_traits::pow(q.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        p.recip()
    } else {
        p
    }
}

pub fn is_integer(q: &Scalar) -> bool {
    q.denom().is_one()
}

/// Parses `7`, `-3/2`, `+4`. No whitespace inside.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return None;
    }
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !digits(den) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    let q = BigRational::new(n, d);
    Some(if neg { -q } else { q })
}

pub fn format_scalar(q: &Scalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Converts an integral scalar to i64, if it fits.
pub fn to_i64(q: &Scalar) -> Option<i64> {
    use num_traits::ToPrimitive;
    if !is_integer(q) {
        return None;
    }
    q.numer().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(&int(5), 2), int(10));
        assert_eq!(binom(&int(-1), 3), int(-1));
        assert_eq!(binom(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binom(&int(3), 5), int(0));
        assert_eq!(binom_int(6, 3), int(20));
    }

    #[test]
    fn scalar_text_round_trip() {
        for s in ["0", "1", "-1", "3/2", "-7/12", "123456789012345678901234567890"] {
            let q = parse_scalar(s).unwrap();
            assert_eq!(format_scalar(&q), s);
        }
        assert_eq!(parse_scalar("4/6").unwrap(), rat(2, 3));
        assert!(parse_scalar("1/0").is_none());
        assert!(parse_scalar("x").is_none());
    }
}
