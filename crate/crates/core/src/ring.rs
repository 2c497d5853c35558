//! Exact arithmetic in `Z[φ]` and the integer sequences built on it.
//!
//! Every element is stored as `a + bφ` with arbitrary-precision integer
//! coefficients. Products are reduced with `φ² = φ + 1`, and the Galois
//! conjugate `φ' = 1 - φ = -1/φ` acts as `a + bφ ↦ (a + b) - bφ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::PHI;

/// An element `a + bφ` of the ring of golden integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldenExact {
    a: BigInt,
    b: BigInt,
}

impl GoldenExact {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// The golden ratio itself, `0 + 1φ`.
    pub fn phi() -> Self {
        Self::new(0, 1)
    }

    /// `φ^{-1} = φ - 1`.
    pub fn phi_inverse() -> Self {
        Self::new(-1, 1)
    }

    /// A rational integer embedded in the ring.
    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    /// Coefficient of `1`.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of `φ`.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element lies in `Z`, i.e. its φ-coefficient vanishes.
    pub fn is_rational_integer(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: &self.a + &self.b,
            b: -&self.b,
        }
    }

    /// Field norm `x · x' = a² + ab - b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Trace `x + x' = 2a + b`.
    pub fn trace(&self) -> BigInt {
        BigInt::from(2) * &self.a + &self.b
    }

    /// Multiplicative inverse, defined exactly for the units (norm ±1).
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.abs().is_one() {
            let c = self.conjugate();
            Some(Self {
                a: c.a * &n,
                b: c.b * &n,
            })
        } else {
            None
        }
    }

    /// Exact division, returning `None` when the quotient leaves `Z[φ]`.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &rhs.conjugate();
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(Self { a: qa, b: qb })
        } else {
            None
        }
    }

    /// Integer power; negative exponents are defined for units only.
    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        Some(pow_unsigned(&base, exp.unsigned_abs()))
    }

    /// Nearest double to `a + bφ`.
    pub fn to_f64(&self) -> f64 {
        let a = big_to_f64(&self.a);
        let b = big_to_f64(&self.b);
        if self.a.is_negative() == self.b.is_negative() || self.a.is_zero() || self.b.is_zero() {
            return a + b * PHI;
        }
        // Opposite signs cancel; divide the exact norm by the conjugate,
        // whose two terms share a sign.
        let conj = a + b * (1.0 - PHI);
        big_to_f64(&self.norm()) / conj
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn pow_unsigned(base: &GoldenExact, mut exp: u64) -> GoldenExact {
    let mut result = GoldenExact::one();
    let mut square = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = &result * &square;
        }
        exp >>= 1;
        if exp > 0 {
            square = &square * &square;
        }
    }
    result
}

impl fmt::Display for GoldenExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}φ", self.a, -&self.b)
        } else {
            write!(f, "{} + {}φ", self.a, self.b)
        }
    }
}

impl From<i64> for GoldenExact {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a GoldenExact> for &'a GoldenExact {
    type Output = GoldenExact;
    fn add(self, rhs: &GoldenExact) -> GoldenExact {
        GoldenExact {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a GoldenExact> for &'a GoldenExact {
    type Output = GoldenExact;
    fn sub(self, rhs: &GoldenExact) -> GoldenExact {
        GoldenExact {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a GoldenExact> for &'a GoldenExact {
    type Output = GoldenExact;
    fn mul(self, rhs: &GoldenExact) -> GoldenExact {
        let bb = &self.b * &rhs.b;
        GoldenExact {
            a: &self.a * &rhs.a + &bb,
            b: &self.a * &rhs.b + &rhs.a * &self.b + bb,
        }
    }
}

impl Neg for &GoldenExact {
    type Output = GoldenExact;
    fn neg(self) -> GoldenExact {
        GoldenExact {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GoldenExact {
            type Output = GoldenExact;
            fn $m(self, rhs: GoldenExact) -> GoldenExact {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GoldenExact> for GoldenExact {
            type Output = GoldenExact;
            fn $m(self, rhs: &GoldenExact) -> GoldenExact {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GoldenExact {
    type Output = GoldenExact;
    fn neg(self) -> GoldenExact {
        -&self
    }
}

/// Exact `φ^n` for any integer `n`; `φ^{-1} = φ - 1`.
pub fn golden_pow(n: i64) -> GoldenExact {
    if n >= 0 {
        pow_unsigned(&GoldenExact::phi(), n as u64)
    } else {
        pow_unsigned(&GoldenExact::phi_inverse(), n.unsigned_abs())
    }
}

/// `F_n` by fast doubling, extended to negative indices through
/// `F_{-n} = (-1)^{n+1} F_n`.
pub fn fibonacci(n: i64) -> BigInt {
    let m = n.unsigned_abs();
    let (f, _) = fib_pair(m);
    if n < 0 && m.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

// (F_m, F_{m+1})
fn fib_pair(m: u64) -> (BigInt, BigInt) {
    if m == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(m / 2);
    let c = &a * (BigInt::from(2) * &b - &a);
    let d = &a * &a + &b * &b;
    if m.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// `L_n = φ^n + φ'^n`, read off as the trace of `φ^n`.
pub fn lucas(n: i64) -> BigInt {
    golden_pow(n).trace()
}

/// Fibonacci divisor `F_n^(k) = F_{kn} / F_k`.
///
/// The quotient is computed by exact division; debug builds also check it
/// against the Lucas recursion.
pub fn fib_divisor(n: i64, k: i64) -> Result<BigInt> {
    let q = fib_divisor_by_division(n, k)?;
    debug_assert_eq!(Some(&q), fib_divisor_by_recursion(n, k).ok().as_ref());
    Ok(q)
}

/// `F_{kn} / F_k` with an exactness check on the remainder.
pub fn fib_divisor_by_division(n: i64, k: i64) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let kn = k
        .checked_mul(n)
        .ok_or_else(|| Error::OutOfRange(format!("k·n overflows for k={k}, n={n}")))?;
    let (q, r) = fibonacci(kn).div_rem(&fibonacci(k));
    assert!(r.is_zero(), "F_k does not divide F_kn for k={k}, n={n}");
    Ok(q)
}

/// `F_n^(k)` from `F_{n+1} = L_k F_n + (-1)^{k-1} F_{n-1}` with
/// `F_0^(k) = 0`, `F_1^(k) = 1`, run backwards for negative `n`.
pub fn fib_divisor_by_recursion(n: i64, k: i64) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    if n >= 0 {
        Ok(FibDivisors::new(k)?
            .nth(n as usize)
            .expect("sequence is infinite"))
    } else {
        let lk = lucas(k);
        let sign = if (k - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        // F_{m-1} = sign · (F_{m+1} - L_k F_m), since sign² = 1.
        let (mut hi, mut lo) = (BigInt::one(), BigInt::zero()); // (F_1, F_0)
        for _ in 0..n.unsigned_abs() {
            let next = (&hi - &lk * &lo) * sign;
            hi = lo;
            lo = next;
        }
        Ok(lo)
    }
}

/// Iterator over `F_0^(k), F_1^(k), F_2^(k), ...` via the Lucas recursion.
#[derive(Clone, Debug)]
pub struct FibDivisors {
    lucas_k: BigInt,
    sign: BigInt,
    current: BigInt,
    next: BigInt,
}

impl FibDivisors {
    pub fn new(k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroLevel);
        }
        let sign = if (k - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        Ok(Self {
            lucas_k: lucas(k),
            sign: BigInt::from(sign),
            current: BigInt::zero(),
            next: BigInt::one(),
        })
    }
}

impl Iterator for FibDivisors {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let following = &self.lucas_k * &self.next + &self.sign * &self.current;
        let out = std::mem::replace(&mut self.current, std::mem::replace(&mut self.next, following));
        Some(out)
    }
}

/// Double-precision value of a golden integer.
pub fn to_real(x: &GoldenExact) -> f64 {
    x.to_f64()
}

/// `F_n^(k)` for `n = 0..len` as doubles; large values saturate to infinity.
pub(crate) fn fib_divisors_f64(k: i64, len: usize) -> Result<Vec<f64>> {
    Ok(FibDivisors::new(k)?.take(len).map(|v| big_to_f64(&v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GoldenExact {
        GoldenExact::new(a, b)
    }

    #[test]
    fn golden_pow_small_cases() {
        assert_eq!(golden_pow(0), g(1, 0));
        assert_eq!(golden_pow(3), g(1, 2));
        assert_eq!(golden_pow(-1), g(-1, 1));
        assert_eq!(&golden_pow(-1) * &g(0, 1), g(1, 0));
        // repeated multiplication oracle
        let mut acc = GoldenExact::one();
        for n in 0..40 {
            assert_eq!(golden_pow(n), acc);
            acc = &acc * &GoldenExact::phi();
        }
    }

    #[test]
    fn golden_pow_coefficients_are_fibonacci() {
        for n in -50..50 {
            let p = golden_pow(n);
            assert_eq!(p.b(), &fibonacci(n));
            assert_eq!(p.a(), &fibonacci(n - 1));
        }
    }

    #[test]
    fn fibonacci_and_lucas_values() {
        assert_eq!(fibonacci(5), BigInt::from(5));
        assert_eq!(fibonacci(0), BigInt::zero());
        assert_eq!(fibonacci(-1), BigInt::one());
        assert_eq!(fibonacci(-2), BigInt::from(-1));
        assert_eq!(lucas(2), BigInt::from(3));
        assert_eq!(lucas(0), BigInt::from(2));
        assert_eq!(lucas(-1), BigInt::from(-1));
        let f120 = fibonacci(120);
        assert_eq!(f120.to_string(), "5358359254990966640871840");
    }

    #[test]
    fn fibonacci_matches_naive_recurrence() {
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        for n in 0..200 {
            assert_eq!(fibonacci(n), a);
            let c = &a + &b;
            a = b;
            b = c;
        }
    }

    #[test]
    fn fib_divisor_examples() {
        assert_eq!(fib_divisor(4, 3).unwrap(), BigInt::from(72));
        assert_eq!(fib_divisor(1, 7).unwrap(), BigInt::one());
        assert_eq!(fib_divisor(6, 3).unwrap(), BigInt::from(1292));
        assert_eq!(fibonacci(18), BigInt::from(2584));
        assert!(matches!(fib_divisor(3, 0), Err(Error::ZeroLevel)));
    }

    #[test]
    fn fib_divisor_paths_agree_for_negative_arguments() {
        for k in -8i64..=8 {
            if k == 0 {
                continue;
            }
            for n in -15..=15 {
                assert_eq!(
                    fib_divisor_by_division(n, k).unwrap(),
                    fib_divisor_by_recursion(n, k).unwrap(),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn to_real_values() {
        assert!((g(0, 1).to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(g(1, 0).to_f64(), 1.0);
        assert!((golden_pow(2).to_f64() - 2.618_033_988_749_895).abs() < 1e-15);
        for n in -60..=60 {
            let exact = golden_pow(n).to_f64();
            let float = PHI.powi(n as i32);
            assert!(((exact - float) / float).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn inverse_and_division() {
        assert_eq!(g(0, 1).inverse(), Some(g(-1, 1)));
        assert_eq!(g(2, 0).inverse(), None);
        let x = g(7, -3);
        let y = golden_pow(5);
        let p = &x * &y;
        assert_eq!(p.checked_div(&y), Some(x));
        assert_eq!(g(1, 0).checked_div(&g(2, 0)), None);
        assert_eq!(g(1, 1).checked_div(&GoldenExact::zero()), None);
    }

    #[test]
    fn display() {
        assert_eq!(g(1, 2).to_string(), "1 + 2φ");
        assert_eq!(g(-1, -1).to_string(), "-1 - 1φ");
    }

    proptest! {
        #[test]
        fn conjugation_is_a_ring_homomorphism(a1 in -1000i64..1000, b1 in -1000i64..1000,
                                              a2 in -1000i64..1000, b2 in -1000i64..1000) {
            let x = g(a1, b1);
            let y = g(a2, b2);
            prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
            prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
            prop_assert!((&x * &x.conjugate()).is_rational_integer());
            prop_assert!((&x + &x.conjugate()).is_rational_integer());
            let p = &x * &x.conjugate();
            prop_assert_eq!(p.a(), &x.norm());
        }

        #[test]
        fn multiplication_matches_floating_point(a1 in -1000i64..1000, b1 in -1000i64..1000,
                                                  a2 in -1000i64..1000, b2 in -1000i64..1000) {
            let x = g(a1, b1);
            let y = g(a2, b2);
            let exact = (&x * &y).to_f64();
            let float = x.to_f64() * y.to_f64();
            prop_assert!((exact - float).abs() <= 1e-9 * (1.0 + float.abs()));
        }
    }
}
