//! Special functions of the golden calculus.
//!
//! Two families live here. The golden exponentials `e_F`, `E_F` (and the
//! derived `cos_F`, `sin_F`) are series over fibonorials `F_n^(k)!`. The
//! φ-exponentials `e_φ`, `E_φ` and the φ-logarithms `Ln_{φ^k}` are series
//! over φ-numbers `[n]_{φ^k} = 1 + φ^k + ... + φ^{k(n-1)}`; they carry the
//! image structure of flows in the golden annulus.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::combinatorics::GoldenBinomial;
use crate::error::{Error, Result};
use crate::operators::{golden_bases, Polynomial};
use crate::ring::{fib_divisor, golden_pow, FibDivisors, GoldenExact};
use crate::PHI;

/// Stopping rule for every series and product in this crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTruncation {
    /// Hard cap on the number of terms (or factors).
    pub max_terms: usize,
    /// Summation stops once a term falls below this modulus.
    pub tail_tol: f64,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            max_terms: 400,
            tail_tol: 1e-18,
        }
    }
}

impl SeriesTruncation {
    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        if !(tail_tol >= 0.0) {
            return Err(Error::Config(format!("tail_tol must be non-negative, got {tail_tol}")));
        }
        Ok(Self { max_terms, tail_tol })
    }

    fn fail(&self, last_term: f64) -> Error {
        Error::Truncation {
            max_terms: self.max_terms,
            last_term,
        }
    }
}

/// Which golden exponential: `e_F` (no signs) or `E_F` (signs `(-1)^{k n(n-1)/2}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpVariant {
    Small,
    Big,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigPart {
    Cos,
    Sin,
}

/// Representation used to evaluate a φ-logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LnForm {
    /// Power series, valid for `|z| < φ^k`.
    Series,
    /// Sum over the simple poles at `z = -φ^{kn}`, valid off the poles.
    PoleSum,
}

fn sign_flip(k: i64, n: usize) -> bool {
    k.rem_euclid(2) == 1 && (n * n.saturating_sub(1) / 2) % 2 == 1
}

/// Golden exponential `Σ x^n / F_n^(k)!`, optionally with the `E_F` signs.
pub fn golden_exp(x: Complex64, k: i64, variant: ExpVariant, t: &SeriesTruncation) -> Result<Complex64> {
    let mut divisors = FibDivisors::new(k)?.skip(1).map(|f| f.to_f64().unwrap_or(f64::INFINITY));
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut next_div = divisors.next().expect("infinite");
    for n in 1..t.max_terms {
        term = term * x / next_div;
        if variant == ExpVariant::Big && sign_flip(k, n) {
            sum -= term;
        } else {
            sum += term;
        }
        next_div = divisors.next().expect("infinite");
        if term.norm() < t.tail_tol && x.norm() < next_div.abs() {
            return Ok(sum);
        }
    }
    Err(t.fail(term.norm()))
}

/// `cos_F` and `sin_F` at level `k`: the real and imaginary parts of
/// `E_F^{(-k)}(i x)`.
pub fn golden_trig(x: f64, k: i64, which: TrigPart, t: &SeriesTruncation) -> Result<f64> {
    let v = golden_exp(Complex64::new(0.0, x), -k, ExpVariant::Big, t)?;
    Ok(match which {
        TrigPart::Cos => v.re,
        TrigPart::Sin => v.im,
    })
}

/// φ-number `[n]_{φ^k} = Σ_{j<n} φ^{kj}`, exactly.
pub fn phi_number(n: usize, k: i64) -> Result<GoldenExact> {
    if n == 0 {
        return Err(Error::OutOfRange("φ-numbers are indexed from n = 1".into()));
    }
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let step = golden_pow(k);
    let mut power = GoldenExact::one();
    let mut sum = GoldenExact::zero();
    for _ in 0..n {
        sum = &sum + &power;
        power = &power * &step;
    }
    Ok(sum)
}

/// `[n]_{φ^k}` through Fibonacci divisors:
/// `(φ^k F_n^(k) + (-1)^{k+1} F_{n-1}^(k) - 1) / (φ^k - 1)`, divided exactly.
pub fn phi_number_via_divisors(n: usize, k: i64) -> Result<GoldenExact> {
    if n == 0 {
        return Err(Error::OutOfRange("φ-numbers are indexed from n = 1".into()));
    }
    let n = n as i64;
    let pk = golden_pow(k);
    let sign = if k.rem_euclid(2) == 1 { 1 } else { -1 };
    let power = &(&pk * &GoldenExact::from_integer(fib_divisor(n, k)?))
        + &GoldenExact::from_integer(fib_divisor(n - 1, k)? * sign);
    let num = &power - &GoldenExact::one();
    let den = &pk - &GoldenExact::one();
    num.checked_div(&den)
        .ok_or_else(|| Error::Domain(format!("[{n}]_φ^{k} is not a golden integer")))
}

/// `[n]_φ` in double precision.
fn phi_number_f64(n: usize) -> f64 {
    (PHI.powi(n as i32) - 1.0) / (PHI - 1.0)
}

/// `e_φ(z) = Σ z^n / [n]_φ!`, entire.
pub fn e_phi(z: Complex64, t: &SeriesTruncation) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..t.max_terms {
        let qn = phi_number_f64(n);
        term = term * z / qn;
        sum += term;
        if term.norm() < t.tail_tol && z.norm() < phi_number_f64(n + 1) {
            return Ok(sum);
        }
    }
    Err(t.fail(term.norm()))
}

/// `E_φ(z) = Σ φ^{n(n-1)/2} z^n / [n]_φ!`, convergent for `|z| < φ²`.
#[allow(non_snake_case)]
pub fn E_phi(z: Complex64, t: &SeriesTruncation) -> Result<Complex64> {
    if z.norm() >= PHI * PHI {
        return Err(Error::Domain(format!("E_φ series needs |z| < φ², got |z| = {}", z.norm())));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..t.max_terms {
        // φ^{n-1} / [n]_φ = (φ - 1) / (φ (1 - φ^{-n}))
        let ratio = (PHI - 1.0) / (PHI * (1.0 - PHI.powi(-(n as i32))));
        term *= z * ratio;
        sum += term;
        if term.norm() < t.tail_tol {
            return Ok(sum);
        }
    }
    Err(t.fail(term.norm()))
}

/// Euler product `e_φ(z) = ∏_{n≥0} (1 + z / φ^{n+2})`, zeros at `-φ^{n+2}`.
pub fn e_phi_product(z: Complex64, t: &SeriesTruncation) -> Result<Complex64> {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut scale = PHI.powi(-2);
    for _ in 0..t.max_terms {
        let eps = z * scale;
        prod *= 1.0 + eps;
        if eps.norm() < t.tail_tol {
            return Ok(prod);
        }
        scale /= PHI;
    }
    Err(t.fail((z * scale).norm()))
}

/// `ln e_φ(w)` as the sum of principal logarithms of the product factors.
///
/// This is a continuous branch wherever every factor `1 + w/φ^{n+2}` stays
/// off the negative real axis, e.g. whenever `|w| < φ²`.
pub fn ln_e_phi(w: Complex64, t: &SeriesTruncation) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = PHI.powi(-2);
    for n in 0..t.max_terms {
        let eps = w * scale;
        let factor = 1.0 + eps;
        if factor.norm() == 0.0 {
            return Err(Error::NearSingularity {
                point: w.to_string(),
                singularity: format!("zero -φ^{} of e_φ", n + 2),
                distance: 0.0,
            });
        }
        sum += factor.ln();
        if eps.norm() < t.tail_tol {
            return Ok(sum);
        }
        scale /= PHI;
    }
    Err(t.fail((w * scale).norm()))
}

/// `ln |e_φ(w)|`, summed factor by factor so it cannot overflow.
pub fn ln_abs_e_phi(w: Complex64, t: &SeriesTruncation) -> Result<f64> {
    ln_e_phi(w, t).map(|v| v.re)
}

/// φ^k-logarithm `Ln_{φ^k}(1 + z)` for `k ≥ 1`.
///
/// The series form is `Σ (-1)^{n-1} z^n / [n]_{φ^k}`; the pole form is
/// `(φ^k - 1) Σ_{m≥1} z / (φ^{km} + z)`. They agree on `|z| < φ^k`.
pub fn ln_phi(z: Complex64, k: i64, form: LnForm, t: &SeriesTruncation) -> Result<Complex64> {
    if k < 1 {
        return Err(Error::Domain(format!("φ^k-logarithm needs k >= 1, got {k}")));
    }
    let q = PHI.powi(k as i32);
    match form {
        LnForm::Series => {
            if z.norm() >= q {
                return Err(Error::Domain(format!(
                    "series form needs |z| < φ^{k} = {q}, got |z| = {}",
                    z.norm()
                )));
            }
            let mut zn = Complex64::new(1.0, 0.0);
            let mut qn = 1.0;
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 1..t.max_terms {
                zn *= z;
                qn *= q;
                let term = zn * ((q - 1.0) / (qn - 1.0));
                if n % 2 == 1 {
                    sum += term;
                } else {
                    sum -= term;
                }
                if term.norm() < t.tail_tol {
                    return Ok(sum);
                }
            }
            Err(t.fail((zn * z / qn).norm()))
        }
        LnForm::PoleSum => {
            let mut qm = 1.0;
            let mut sum = Complex64::new(0.0, 0.0);
            for m in 1..t.max_terms {
                qm *= q;
                let den = z + qm;
                if den.norm() < 1e-8 {
                    return Err(Error::NearSingularity {
                        point: z.to_string(),
                        singularity: format!("pole -φ^{}", k * m as i64),
                        distance: den.norm(),
                    });
                }
                let term = z / den;
                sum += term;
                if (z.norm() / qm) < t.tail_tol {
                    return Ok(sum * (q - 1.0));
                }
            }
            Err(t.fail(z.norm() / qm))
        }
    }
}

/// `Ln_φ(1 - w)` in pole-sum form; poles at `w = φ^m`, `m ≥ 1`.
pub fn ln_phi_one_minus(w: Complex64) -> Result<Complex64> {
    ln_phi(-w, 1, LnForm::PoleSum, &SeriesTruncation::default())
}

/// `f((x + iy)^n_F)`: a real polynomial carried to the plane by the golden
/// translation operator `Σ a_n x^n ↦ Σ a_n (x + iy)^n_F` at level `k`.
#[derive(Clone, Debug)]
pub struct GoldenAnalyticFunction {
    coeffs: Vec<f64>,
    k: i64,
    truncation: SeriesTruncation,
    binomials: Vec<GoldenBinomial>,
}

impl GoldenAnalyticFunction {
    pub fn new(coeffs: &[f64], k: i64, truncation: SeriesTruncation) -> Result<Self> {
        let p = Polynomial::from_real(coeffs);
        let len = p.coeffs().len();
        let used = len.min(truncation.max_terms);
        if len > used {
            let tail = coeffs[used..].iter().map(|c| c.abs()).fold(0.0, f64::max);
            if tail >= truncation.tail_tol {
                return Err(truncation.fail(tail));
            }
        }
        let binomials = (0..used)
            .map(|n| GoldenBinomial::new(n, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            coeffs: coeffs[..used].to_vec(),
            k,
            truncation,
            binomials,
        })
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    pub fn truncation(&self) -> SeriesTruncation {
        self.truncation
    }

    /// `(u, v)` with `u + iv = Σ a_n (x + iy)^n_F`.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let xc = Complex64::new(x, 0.0);
        let yc = Complex64::new(0.0, y);
        let v = self
            .coeffs
            .iter()
            .zip(&self.binomials)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + *a * b.eval(xc, yc));
        (v.re, v.im)
    }

    fn dx(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if x == 0.0 {
            return Err(Error::Domain("x-derivative is singular on x = 0".into()));
        }
        let (up, down, gap) = golden_bases(self.k);
        let (u1, v1) = self.eval(up * x, y);
        let (u2, v2) = self.eval(down * x, y);
        Ok(((u1 - u2) / (gap * x), (v1 - v2) / (gap * x)))
    }

    fn dy(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if y == 0.0 {
            return Err(Error::Domain("y-derivative is singular on y = 0".into()));
        }
        let (up, down, gap) = golden_bases(-self.k);
        let (u1, v1) = self.eval(x, up * y);
        let (u2, v2) = self.eval(x, down * y);
        Ok(((u1 - u2) / (gap * y), (v1 - v2) / (gap * y)))
    }

    /// Golden Cauchy–Riemann residuals
    /// `(D_k^x u - D_{-k}^y v, D_{-k}^y u + D_k^x v)` off the axes.
    pub fn cauchy_riemann_residuals(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (ux, vx) = self.dx(x, y)?;
        let (uy, vy) = self.dy(x, y)?;
        Ok((ux - vy, uy + vx))
    }

    /// Golden Laplace residual `(D_k^x)² u + (D_{-k}^y)² u`.
    pub fn laplace_residual(&self, x: f64, y: f64) -> Result<f64> {
        let (up, down, gap) = golden_bases(self.k);
        let uxx = (self.dx(up * x, y)?.0 - self.dx(down * x, y)?.0) / (gap * x);
        let (upy, downy, gapy) = golden_bases(-self.k);
        if y == 0.0 {
            return Err(Error::Domain("y-derivative is singular on y = 0".into()));
        }
        let uyy = (self.dy(x, upy * y)?.0 - self.dy(x, downy * y)?.0) / (gapy * y);
        Ok(uxx + uyy)
    }
}

/// `(u, v)` of a golden analytic function at `(x, y)`.
pub fn golden_analytic_eval(g: &GoldenAnalyticFunction, x: f64, y: f64) -> (f64, f64) {
    g.eval(x, y)
}
