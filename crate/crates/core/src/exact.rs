//! Exact scalars for inequality checks: big integers, rationals and numbers
//! of the form `(a + b√5) / 2^k`. Every comparison is decided with integer
//! arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{arg, Result};

/// Largest `n` accepted by [`binomial`] and [`binomial_tail`].
pub const MAX_BINOMIAL_N: u64 = 10_000;

pub fn binomial(n: u64, k: u64) -> Result<BigInt> {
    if n > MAX_BINOMIAL_N || k > n {
        return arg(format!("binomial needs 0 <= k <= n <= {MAX_BINOMIAL_N}, got n = {n}, k = {k}"));
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    Ok(c)
}

/// `Σ_{i = k0}^{n} C(n, i)`; zero when `k0 > n`.
pub fn binomial_tail(n: u64, k0: u64) -> Result<BigInt> {
    if n > MAX_BINOMIAL_N {
        return arg(format!("binomial_tail needs n <= {MAX_BINOMIAL_N}, got {n}"));
    }
    if k0 > n {
        return Ok(BigInt::zero());
    }
    // walk C(n, i) for i = k0..=n with the ratio (n - i) / (i + 1)
    let mut c = binomial(n, k0)?;
    let mut sum = c.clone();
    for i in k0..n {
        c = c * (n - i) / (i + 1);
        sum += &c;
    }
    Ok(sum)
}

pub fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// `(a + b√5) / 2^k`, kept with `a, b` not both even when `k > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    a: BigInt,
    b: BigInt,
    k: u32,
}

/// Sign of `x + y√5`.
fn sign_sqrt5(x: &BigInt, y: &BigInt) -> Ordering {
    let sx = x.cmp(&BigInt::zero());
    let sy = y.cmp(&BigInt::zero());
    match (sx, sy) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (s, t) if s == t => s,
        // opposite signs: compare x^2 with 5 y^2
        (sx, _) => {
            let lhs = x * x;
            let rhs = y * y * 5u32;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sx,
                Ordering::Less => sx.reverse(),
                // x^2 = 5 y^2 has no non-zero integer solution
                Ordering::Equal => unreachable!("√5 is irrational"),
            }
        }
    }
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, k: u32) -> Self {
        QuadInt { a: a.into(), b: b.into(), k }.normalized()
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        QuadInt::new(a, 0, 0)
    }

    /// `(√5 - 1) / 2`.
    pub fn golden_conjugate() -> Self {
        QuadInt::new(-1, 1, 1)
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, u32) {
        (&self.a, &self.b, self.k)
    }

    fn normalized(mut self) -> Self {
        while self.k > 0 && self.a.is_even() && self.b.is_even() {
            self.a >>= 1;
            self.b >>= 1;
            self.k -= 1;
        }
        if self.a.is_zero() && self.b.is_zero() {
            self.k = 0;
        }
        self
    }

    /// Both operands rescaled to the larger denominator exponent.
    fn aligned(&self, other: &QuadInt) -> (BigInt, BigInt, BigInt, BigInt, u32) {
        let k = self.k.max(other.k);
        let s = (k - self.k) as usize;
        let o = (k - other.k) as usize;
        (&self.a << s, &self.b << s, &other.a << o, &other.b << o, k)
    }

    pub fn add(&self, other: &QuadInt) -> QuadInt {
        let (a1, b1, a2, b2, k) = self.aligned(other);
        QuadInt { a: a1 + a2, b: b1 + b2, k }.normalized()
    }

    pub fn sub(&self, other: &QuadInt) -> QuadInt {
        let (a1, b1, a2, b2, k) = self.aligned(other);
        QuadInt { a: a1 - a2, b: b1 - b2, k }.normalized()
    }

    pub fn mul(&self, other: &QuadInt) -> QuadInt {
        let a = &self.a * &other.a + &self.b * &other.b * 5u32;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadInt { a, b, k: self.k + other.k }.normalized()
    }

    pub fn scale(&self, m: impl Into<BigInt>) -> QuadInt {
        let m = m.into();
        QuadInt { a: &self.a * &m, b: &self.b * &m, k: self.k }.normalized()
    }

    pub fn square(&self) -> QuadInt {
        self.mul(self)
    }

    /// `self^(2^times)` by repeated squaring.
    pub fn square_times(&self, times: u32) -> QuadInt {
        (0..times).fold(self.clone(), |x, _| x.square())
    }

    pub fn signum(&self) -> Ordering {
        sign_sqrt5(&self.a, &self.b)
    }

    pub fn cmp_exact(&self, other: &QuadInt) -> Ordering {
        self.sub(other).signum()
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        // (a + b√5)/2^k  vs  p/d   <=>   d a - p 2^k + d b √5  vs  0
        let (p, d) = (q.numer(), q.denom());
        let x = d * &self.a - p * pow2(self.k);
        let y = d * &self.b;
        sign_sqrt5(&x, &y)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.sign() == Sign::Minus { '-' } else { '+' };
        write!(f, "({} {} {}√5)", self.a, sign, self.b.abs())?;
        if self.k > 0 {
            write!(f, "/{}", pow2(self.k))?;
        }
        Ok(())
    }
}

/// An exact value of one of three kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactScalar {
    BigInt(BigInt),
    Rational(BigRational),
    QuadInt(QuadInt),
}

impl ExactScalar {
    pub fn int(v: impl Into<BigInt>) -> Self {
        ExactScalar::BigInt(v.into())
    }

    /// Reduced `num / den`; `den` must be non-zero.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return arg("rational with zero denominator");
        }
        Ok(ExactScalar::Rational(BigRational::new(num.into(), den)))
    }

    fn as_rational(&self) -> Option<BigRational> {
        match self {
            ExactScalar::BigInt(v) => Some(BigRational::from_integer(v.clone())),
            ExactScalar::Rational(q) => Some(q.clone()),
            ExactScalar::QuadInt(_) => None,
        }
    }

    pub fn cmp_exact(&self, other: &ExactScalar) -> Ordering {
        match (self, other) {
            (ExactScalar::QuadInt(x), ExactScalar::QuadInt(y)) => x.cmp_exact(y),
            (ExactScalar::QuadInt(x), o) => x.cmp_rational(&o.as_rational().expect("rational")),
            (s, ExactScalar::QuadInt(y)) => y.cmp_rational(&s.as_rational().expect("rational")).reverse(),
            (s, o) => s.as_rational().cmp(&o.as_rational()),
        }
    }

    pub fn lt(&self, other: &ExactScalar) -> bool {
        self.cmp_exact(other) == Ordering::Less
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::BigInt(v) => write!(f, "{v}"),
            ExactScalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            ExactScalar::QuadInt(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in [0usize, 1, 7, 54, 120] {
            let row = pascal_row(n);
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u64, k as u64).unwrap(), v, "C({n},{k})");
            }
            for k0 in 0..=n {
                let tail: BigInt = row[k0..].iter().sum();
                assert_eq!(binomial_tail(n as u64, k0 as u64).unwrap(), tail);
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(54, 0).unwrap(), BigInt::one());
        assert_eq!(binomial_tail(4, 3).unwrap(), BigInt::from(5));
        assert_eq!(binomial_tail(54, 0).unwrap(), pow2(54));
        assert_eq!(binomial_tail(5, 6).unwrap(), BigInt::zero());
        assert!(binomial(3, 4).is_err());
        assert!(binomial(10_001, 1).is_err());
        assert!(binomial_tail(10_001, 1).is_err());
        assert_eq!(binomial_tail(10_000, 0).unwrap(), pow2(10_000));
    }

    #[test]
    fn golden_powers() {
        let x = QuadInt::golden_conjugate();
        assert_eq!(x.square(), QuadInt::new(3, -1, 1));
        assert_eq!(x.square_times(3), QuadInt::new(47, -21, 1));
        // x^2 = 1 - x
        assert_eq!(x.square(), QuadInt::from_int(1).sub(&x));
    }

    #[test]
    fn quad_signs_and_comparisons() {
        assert_eq!(QuadInt::new(-2, 1, 0).signum(), Ordering::Greater); // √5 > 2
        assert_eq!(QuadInt::new(-3, 1, 0).signum(), Ordering::Less);
        assert_eq!(QuadInt::new(0, 0, 4).signum(), Ordering::Equal);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(QuadInt::golden_conjugate().cmp_rational(&half), Ordering::Greater);
        let x8 = ExactScalar::QuadInt(QuadInt::golden_conjugate().square_times(3));
        assert!(x8.lt(&ExactScalar::ratio(1, 46).unwrap()));
        assert!(!x8.lt(&ExactScalar::ratio(1, 47).unwrap()));
        assert!(ExactScalar::ratio(1, 47).unwrap().lt(&x8));
        assert!(ExactScalar::ratio(1, 0).is_err());
        assert_eq!(ExactScalar::ratio(6, 8).unwrap().to_string(), "3/4");
        assert!(ExactScalar::int(3).lt(&ExactScalar::ratio(7, 2).unwrap()));
    }

    #[test]
    fn display() {
        assert_eq!(QuadInt::new(47, -21, 1).to_string(), "(47 - 21√5)/2");
    }
}
