//! Fibonorials, fibonomial coefficients and the golden binomial hierarchy.

use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{golden_pow, FibDivisors, GoldenExact};

/// `F_n^(k)! = F_1^(k) F_2^(k) ... F_n^(k)`; the empty product is 1.
pub fn fibonorial(n: usize, k: i64) -> Result<BigInt> {
    Ok(FibDivisors::new(k)?
        .skip(1)
        .take(n)
        .fold(BigInt::one(), |acc, f| acc * f))
}

/// `F_n^(k)! / (F_m^(k)! F_{n-m}^(k)!)`.
pub fn fibonomial(n: usize, m: usize, k: i64) -> Result<BigInt> {
    if m > n {
        return Err(Error::OutOfRange(format!("fibonomial needs m <= n, got m={m}, n={n}")));
    }
    let divisors: Vec<BigInt> = FibDivisors::new(k)?.skip(1).take(n).collect();
    Ok(fibonomial_from(&divisors, n, m))
}

// divisors[i] = F_{i+1}^(k)
fn fibonomial_from(divisors: &[BigInt], n: usize, m: usize) -> BigInt {
    let m = m.min(n - m);
    let num = divisors[n - m..n].iter().fold(BigInt::one(), |acc, f| acc * f);
    let den = divisors[..m].iter().fold(BigInt::one(), |acc, f| acc * f);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// `(-1)^{k m(m-1)/2}` as ±1.
pub(crate) fn binomial_sign(k: i64, m: usize) -> i64 {
    let tri = (m * m.saturating_sub(1) / 2) % 2;
    if k.rem_euclid(2) == 1 && tri == 1 {
        -1
    } else {
        1
    }
}

/// The k-th golden binomial `(x + y)^n_F` in expanded form.
///
/// Coefficient `c_m` multiplies `x^{n-m} y^m` and equals
/// `(-1)^{k m(m-1)/2}` times the fibonomial `[n, m]_F^(k)`. With `y = -a` the
/// polynomial equals `∏_{s=1}^{n} (x - φ^{k(n-s)} φ'^{k(s-1)} a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenBinomial {
    n: usize,
    k: i64,
    coeffs: Vec<GoldenExact>,
}

impl GoldenBinomial {
    pub fn new(n: usize, k: i64) -> Result<Self> {
        let divisors: Vec<BigInt> = FibDivisors::new(k)?.skip(1).take(n).collect();
        let coeffs = (0..=n)
            .map(|m| {
                let c = fibonomial_from(&divisors, n, m) * binomial_sign(k, m);
                GoldenExact::from_integer(c)
            })
            .collect();
        Ok(Self { n, k, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    pub fn coeffs(&self) -> &[GoldenExact] {
        &self.coeffs
    }

    /// Coefficients as doubles.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.a().to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// `Σ_m c_m x^{n-m} y^m`.
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let c = self.coeffs_f64();
        // Homogeneous Horner: accumulate in y with x-powers carried along.
        let mut xp = vec![Complex64::new(1.0, 0.0); self.n + 1];
        for i in 1..=self.n {
            xp[i] = xp[i - 1] * x;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for m in (0..=self.n).rev() {
            acc = acc * y + c[m] * xp[self.n - m];
        }
        acc
    }

    pub fn to_form(&self) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.clone(),
        }
    }

    /// The defining product `∏_{s=1}^{n} (x + φ^{k(n-s)} φ'^{k(s-1)} y)`,
    /// multiplied out exactly in `Z[φ]`.
    pub fn product_form(n: usize, k: i64) -> Result<BinaryForm> {
        if k == 0 {
            return Err(Error::ZeroLevel);
        }
        let mut form = BinaryForm::one();
        for s in 1..=n as i64 {
            let r = &golden_pow(k * (n as i64 - s)) * &golden_pow(k * (s - 1)).conjugate();
            form = &form * &BinaryForm::linear(r);
        }
        Ok(form)
    }
}

/// `golden_binomial(n, k)`, see [`GoldenBinomial::new`].
pub fn golden_binomial(n: usize, k: i64) -> Result<GoldenBinomial> {
    GoldenBinomial::new(n, k)
}

/// Evaluates a golden binomial at complex `x`, `y`.
pub fn golden_binomial_eval(b: &GoldenBinomial, x: Complex64, y: Complex64) -> Complex64 {
    b.eval(x, y)
}

/// Homogeneous polynomial `Σ_j c_j x^{d-j} y^j` with coefficients in `Z[φ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<GoldenExact>,
}

impl BinaryForm {
    pub fn one() -> Self {
        Self {
            coeffs: vec![GoldenExact::one()],
        }
    }

    /// `x + r y`.
    pub fn linear(r: GoldenExact) -> Self {
        Self {
            coeffs: vec![GoldenExact::one(), r],
        }
    }

    pub fn coeffs(&self) -> &[GoldenExact] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Substitutes `y ↦ c·y`.
    pub fn scale_y(&self, c: &GoldenExact) -> Self {
        let mut power = GoldenExact::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|coef| {
                let out = coef * &power;
                power = &power * c;
                out
            })
            .collect();
        Self { coeffs }
    }
}

impl Mul for &BinaryForm {
    type Output = BinaryForm;

    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        let mut coeffs = vec![GoldenExact::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BinaryForm { coeffs }
    }
}
