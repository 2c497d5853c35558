//! Golden derivatives, the golden translation operator and periodicity tests.
//!
//! The k-th golden derivative acts as
//! `D_k f(x) = (f(φ^k x) - f(φ'^k x)) / ((φ^k - φ'^k) x)`, so that
//! `D_k x^n = F_n^(k) x^{n-1}`. For odd `k` the second evaluation point
//! `φ'^k x` has the opposite sign of `x`.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use crate::combinatorics::GoldenBinomial;
use crate::error::{Error, Result};
use crate::ring::{fib_divisors_f64, fibonacci};
use crate::{PHI, SQRT5};

/// Polynomial in the power basis with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from `a_0, a_1, ...`; trailing zeros are trimmed.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..len)
            .map(|i| *self.coeffs.get(i).unwrap_or(&zero) + *other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Self::new(coeffs)
    }

    /// Largest coefficient modulus, zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Values a scalar field may take: real or complex.
pub trait FieldValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Div<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl FieldValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl FieldValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// A function of one real variable together with the closed interval on
/// which it may be evaluated.
pub struct ScalarField1D<F> {
    rule: F,
    lo: f64,
    hi: f64,
}

impl<F> ScalarField1D<F> {
    /// A field defined on the whole real line.
    pub fn new(rule: F) -> Self {
        Self {
            rule,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn with_domain(rule: F, lo: f64, hi: f64) -> Self {
        Self { rule, lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn eval<T>(&self, x: f64) -> T
    where
        F: Fn(f64) -> T,
    {
        (self.rule)(x)
    }
}

/// `(φ^k, φ'^k, φ^k - φ'^k)` in double precision.
pub(crate) fn golden_bases(k: i64) -> (f64, f64, f64) {
    let e = k as i32;
    let up = PHI.powi(e);
    let down = (-1.0 / PHI).powi(e);
    let gap = fib_f64(k) * SQRT5;
    (up, down, gap)
}

fn fib_f64(k: i64) -> f64 {
    num_traits::ToPrimitive::to_f64(&fibonacci(k)).unwrap_or(f64::INFINITY)
}

/// Symbolic golden derivative: `a_n x^n ↦ a_n F_n^(k) x^{n-1}`.
pub fn golden_derivative_poly(p: &Polynomial, k: i64) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let f = fib_divisors_f64(k, p.coeffs.len())?;
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, a)| a * f[n])
        .collect();
    Ok(Polynomial::new(coeffs))
}

/// Difference-quotient golden derivative of a black-box field at `x ≠ 0`.
pub fn golden_derivative_numeric<F, T>(f: &ScalarField1D<F>, x: f64, k: i64) -> Result<T>
where
    F: Fn(f64) -> T,
    T: FieldValue,
{
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    if x == 0.0 {
        return Err(Error::Domain("golden derivative is singular at x = 0".into()));
    }
    let (up, down, gap) = golden_bases(k);
    let (xu, xd) = (up * x, down * x);
    if !f.contains(xu) || !f.contains(xd) {
        return Err(Error::Domain(format!(
            "evaluation points {xu} and {xd} must lie in [{}, {}]",
            f.lo, f.hi
        )));
    }
    Ok((f.eval(xu) - f.eval(xd)) / (gap * x))
}

/// Golden derivative with a continuous scale `s > 0` on the even branch,
/// `(f(φ^s x) - f(φ^{-s} x)) / ((φ^s - φ^{-s}) x)`. Tends to `f'(x)` as `s → 0`.
pub fn golden_derivative_continuous<F, T>(f: &ScalarField1D<F>, x: f64, s: f64) -> Result<T>
where
    F: Fn(f64) -> T,
    T: FieldValue,
{
    if !(s > 0.0) {
        return Err(Error::Domain(format!("scale s must be positive, got {s}")));
    }
    if x == 0.0 {
        return Err(Error::Domain("golden derivative is singular at x = 0".into()));
    }
    let ls = s * crate::LN_PHI;
    let (up, down) = (ls.exp(), (-ls).exp());
    let (xu, xd) = (up * x, down * x);
    if !f.contains(xu) || !f.contains(xd) {
        return Err(Error::Domain(format!("evaluation points {xu} and {xd} out of domain")));
    }
    // φ^s - φ^{-s} = 2 sinh(s ln φ), without cancellation for small s
    Ok((f.eval(xu) - f.eval(xd)) / (2.0 * ls.sinh() * x))
}

/// Golden translation `Σ a_n x^n ↦ Σ a_n (x + y)^n_F`, expanded in powers of `x`.
pub fn translate(p: &Polynomial, y: Complex64, k: i64) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); p.coeffs.len()];
    for (n, a) in p.coeffs.iter().enumerate() {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let b = GoldenBinomial::new(n, k)?;
        let mut ym = Complex64::new(1.0, 0.0);
        for (m, c) in b.coeffs_f64().into_iter().enumerate() {
            out[n - m] += a * c * ym;
            ym *= y;
        }
    }
    Ok(Polynomial::new(out))
}

/// True when `|D_k f|` stays within `tol` on every sample point.
pub fn is_golden_periodic<F, T>(f: &ScalarField1D<F>, k: i64, samples: &[f64], tol: f64) -> Result<bool>
where
    F: Fn(f64) -> T,
    T: FieldValue,
{
    if samples.is_empty() {
        return Err(Error::Config("periodicity test needs at least one sample".into()));
    }
    for &x in samples {
        if golden_derivative_numeric(f, x, k)?.magnitude() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LN_PHI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn counterexample(x: f64) -> f64 {
        (PI * x.abs().ln() / (2.0 * LN_PHI)).sin()
    }

    #[test]
    fn symbolic_derivative_examples() {
        let d = golden_derivative_poly(&Polynomial::monomial(3), 2).unwrap();
        assert_eq!(d, Polynomial::new(vec![c(0.0), c(0.0), c(8.0)]));
        let d = golden_derivative_poly(&Polynomial::from_real(&[5.0]), 3).unwrap();
        assert!(d.is_zero());
        let p = Polynomial::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let d = golden_derivative_poly(&p, 1).unwrap();
        assert_eq!(d, Polynomial::from_real(&[1.0, 0.0, 0.0, 0.0, 5.0]));
    }

    #[test]
    fn numeric_derivative_examples() {
        let sq = ScalarField1D::new(|x: f64| x * x);
        let v: f64 = golden_derivative_numeric(&sq, 2.0, 1).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        let one = ScalarField1D::new(|_x: f64| 1.0);
        assert_eq!(golden_derivative_numeric::<_, f64>(&one, 1.0, 5).unwrap(), 0.0);
        let f = ScalarField1D::new(counterexample);
        let v: f64 = golden_derivative_numeric(&f, 1.3, 2).unwrap();
        assert!(v.abs() < 1e-12);
        assert!(golden_derivative_numeric::<_, f64>(&sq, 0.0, 1).is_err());
    }

    #[test]
    fn numeric_derivative_respects_domain() {
        let sqrt = ScalarField1D::with_domain(|x: f64| x.sqrt(), 0.0, f64::INFINITY);
        // odd k reflects the second point to the negative axis
        assert!(matches!(
            golden_derivative_numeric::<_, f64>(&sqrt, 1.0, 1),
            Err(Error::Domain(_))
        ));
        assert!(golden_derivative_numeric::<_, f64>(&sqrt, 1.0, 2).is_ok());
    }

    #[test]
    fn counterexample_derivative_matches_closed_form() {
        let f = ScalarField1D::new(counterexample);
        for &x in &[0.4, 1.3, 2.7, -1.9] {
            let v: f64 = golden_derivative_numeric(&f, x, 1).unwrap();
            let expected = 2.0 * (PI * x.abs().ln() / (2.0 * LN_PHI)).cos() / (SQRT5 * x);
            assert!((v - expected).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn continuous_derivative_converges() {
        let sq = ScalarField1D::new(|x: f64| x * x);
        let errs: Vec<f64> = [1.0, 0.5, 0.25]
            .iter()
            .map(|&s| (golden_derivative_continuous::<_, f64>(&sq, 1.0, s).unwrap() - 2.0).abs())
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1]);
        // second-order convergence: halving s quarters the error
        assert!((errs[1] / errs[2] - 4.0).abs() < 0.2);
        // Richardson extrapolation recovers the derivative
        let d = |s: f64| golden_derivative_continuous::<_, f64>(&sq, 1.0, s).unwrap();
        let rich = (4.0 * d(0.25) - d(0.5)) / 3.0;
        assert!((rich - 2.0).abs() < 1e-3);

        let ex = ScalarField1D::new(f64::exp);
        let v: f64 = golden_derivative_continuous(&ex, 0.7, 1e-4).unwrap();
        assert!((v - 0.7f64.exp()).abs() < 1e-7);
        let one = ScalarField1D::new(|_x: f64| 3.0);
        assert_eq!(golden_derivative_continuous::<_, f64>(&one, 0.3, 0.1).unwrap(), 0.0);
        assert!(golden_derivative_continuous::<_, f64>(&one, 0.3, 0.0).is_err());
    }

    #[test]
    fn translate_examples() {
        let y = Complex64::new(0.4, -1.2);
        let p = Polynomial::monomial(1);
        assert_eq!(translate(&p, y, 3).unwrap(), Polynomial::new(vec![y, c(1.0)]));
        let t = translate(&Polynomial::monomial(2), c(1.0), 1).unwrap();
        assert_eq!(t, Polynomial::from_real(&[-1.0, 1.0, 1.0]));
        let one = Polynomial::from_real(&[1.0]);
        assert_eq!(translate(&one, y, 2).unwrap(), one);
    }

    #[test]
    fn translate_by_zero_is_identity() {
        let p = Polynomial::from_real(&[1.5, -2.0, 0.25, 3.0, 0.0, -1.0]);
        for k in [-2, 1, 2, 3] {
            assert_eq!(translate(&p, c(0.0), k).unwrap(), p);
        }
    }

    #[test]
    fn symbolic_and_numeric_derivatives_agree() {
        let p = Polynomial::from_real(&[0.3, -1.1, 2.0, 0.5, -0.7, 0.2]);
        for k in [-2, -1, 1, 2, 3] {
            let d = golden_derivative_poly(&p, k).unwrap();
            let f = ScalarField1D::new(|x: f64| p.eval_real(x));
            for &x in &[0.3, 0.9, 1.7, -0.6] {
                let num: Complex64 = golden_derivative_numeric(&f, x, k).unwrap();
                let sym = d.eval_real(x);
                assert!((num - sym).norm() <= 1e-11 * sym.norm().max(1.0), "k={k} x={x}");
            }
        }
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
        let deg = rng.gen_range(0..6);
        Polynomial::from_real(&(0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())
    }

    #[test]
    fn leibniz_and_quotient_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let f = random_poly(&mut rng);
            let g = random_poly(&mut rng);
            for k in 1..=3 {
                let x = rng.gen_range(0.2..2.0);
                let (up, down, _) = golden_bases(k);
                let fg = f.mul(&g);
                let fe = ScalarField1D::new(|t: f64| f.eval_real(t));
                let ge = ScalarField1D::new(|t: f64| g.eval_real(t));
                let fge = ScalarField1D::new(|t: f64| fg.eval_real(t));
                let df: Complex64 = golden_derivative_numeric(&fe, x, k).unwrap();
                let dg: Complex64 = golden_derivative_numeric(&ge, x, k).unwrap();
                let dfg: Complex64 = golden_derivative_numeric(&fge, x, k).unwrap();
                let a = df * g.eval_real(up * x);
                let b = f.eval_real(down * x) * dg;
                let scale = dfg.norm().max(a.norm()).max(b.norm()).max(1e-300);
                assert!((dfg - a - b).norm() / scale < 1e-10);

                let gu = g.eval_real(up * x);
                let gd = g.eval_real(down * x);
                if gu.norm() > 1e-3 && gd.norm() > 1e-3 {
                    let qe = ScalarField1D::new(|t: f64| f.eval_real(t) / g.eval_real(t));
                    let dq: Complex64 = golden_derivative_numeric(&qe, x, k).unwrap();
                    let num = df * gu - f.eval_real(up * x) * dg;
                    let rhs = num / (gu * gd);
                    let scale = dq.norm().max(rhs.norm()).max((df * gu / (gu * gd)).norm()).max(1e-300);
                    assert!((dq - rhs).norm() / scale < 1e-10);
                }
            }
        }
    }

    #[test]
    fn periodicity_hierarchy() {
        let f = ScalarField1D::new(counterexample);
        let samples: Vec<f64> = (1..=20).map(|i| 0.15 * i as f64).collect();
        assert!(is_golden_periodic(&f, 2, &samples, 1e-10).unwrap());
        assert!(!is_golden_periodic(&f, 1, &samples, 1e-10).unwrap());
        let one = ScalarField1D::new(|_x: f64| 1.0);
        assert!(is_golden_periodic(&one, 1, &samples, 1e-14).unwrap());
        assert!(is_golden_periodic(&one, 1, &[], 1e-14).is_err());

        // k = 1 periodic implies k = 2, 3 periodic
        let g = ScalarField1D::new(|x: f64| (2.0 * PI * x.abs().ln() / LN_PHI).sin());
        for k in 1..=3 {
            assert!(is_golden_periodic(&g, k, &samples, 1e-10).unwrap(), "k={k}");
        }
    }
}
