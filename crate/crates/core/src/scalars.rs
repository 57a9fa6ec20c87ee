//! Exact rational scalars and Bernoulli numbers.
//!
//! Everything in the crate is computed over `BigRational`; there is no
//! floating point anywhere.  Bernoulli numbers use the convention
//! `t/(e^t - 1) = sum B_i t^i / i!`, so `B_1 = -1/2`.

use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into lowest terms.  Whitespace, a zero
/// denominator, or a negative denominator are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    if s.is_empty() || s.trim() != s {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = match den {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(bad());
            }
            BigInt::from_str(d).map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// `B_i = B_i(0)`, computed from `sum_{k<n} C(n,k) B_k = 0` for `n >= 2`.
pub fn bernoulli(i: usize) -> Rational {
    let mut table = cache().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= i {
        let n = table.len() + 1;
        let mut s = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            s += Rational::from_integer(binomial(n, k)) * b;
        }
        let next = -s / int(n as i64);
        table.push(next);
    }
    table[i].clone()
}

/// `B_i(1) = (-1)^i B_i`.
pub fn bernoulli_at_one(i: usize) -> Rational {
    if i % 2 == 1 {
        -bernoulli(i)
    } else {
        bernoulli(i)
    }
}

/// The defining recurrence, evaluated on the cached table.
pub fn bernoulli_identity_holds(n: usize) -> bool {
    if n < 2 {
        return true;
    }
    let mut s = Rational::zero();
    for k in 0..n {
        s += Rational::from_integer(binomial(n, k)) * bernoulli(k);
    }
    s.is_zero()
}

/// Bernoulli values as consumed by the cocylinder construction.  The
/// default table is exact; `with_flipped` negates one entry so that the
/// cross-checks can be shown to detect a sign slip.
#[derive(Clone, Debug, Default)]
pub struct BernoulliTable {
    flipped: Option<usize>,
}

impl BernoulliTable {
    pub fn exact() -> Self {
        Self { flipped: None }
    }

    pub fn with_flipped(index: usize) -> Self {
        Self { flipped: Some(index) }
    }

    pub fn is_exact(&self) -> bool {
        self.flipped.is_none()
    }

    pub fn at_zero(&self, i: usize) -> Rational {
        self.adjust(i, bernoulli(i))
    }

    pub fn at_one(&self, i: usize) -> Rational {
        self.adjust(i, bernoulli_at_one(i))
    }

    fn adjust(&self, i: usize, b: Rational) -> Rational {
        if self.flipped == Some(i) {
            -b
        } else {
            b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["0", "1", "-1/2", "5/66", "-691/2730", "12345678901234567890123"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-0").unwrap()), "0");
        for s in ["", " 1", "1/0", "1/-2", "a", "1/2/3", "1.5"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli_at_one(1), rat(1, 2));
        assert_eq!(bernoulli_at_one(2), rat(1, 6));
    }

    #[test]
    fn recurrence_holds_far_out() {
        for n in 0..60 {
            assert!(bernoulli_identity_holds(n));
        }
        for k in (3..60).step_by(2) {
            assert!(bernoulli(k).is_zero());
        }
    }

    #[test]
    fn flipped_table_differs_only_at_index() {
        let t = BernoulliTable::with_flipped(2);
        assert_eq!(t.at_zero(2), rat(-1, 6));
        assert_eq!(t.at_zero(1), rat(-1, 2));
        assert_eq!(t.at_one(4), rat(-1, 30));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(factorial(5), int(120));
    }
}
