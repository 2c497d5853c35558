//! Invariant suites behind `goldcalc verify`.
//!
//! Each check measures a worst-case error and compares it to a tolerance
//! (scaled by [`VerifyOptions::tol_scale`]). Randomised checks draw from a
//! ChaCha stream seeded by [`VerifyOptions::seed`], so runs are reproducible.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{golden_binomial, GoldenBinomial};
use crate::dynamics::{
    green_function, hamiltonian, integrate, kappa_from_gamma, n_vortex_rhs, ring_frequency,
    semiclassical_energy, single_vortex_omega, stationary_radius, IntegratorConfig, VortexState,
};
use crate::error::{Error, Result};
use crate::functions::{
    e_phi, e_phi_product, golden_exp, ln_phi, ExpVariant, GoldenAnalyticFunction, LnForm,
    SeriesTruncation,
};
use crate::hydro::{
    pure_golden_flow, velocity_via_ln_phi, wm_fractal_window, AnnulusSpec, ImageSystem,
};
use crate::operators::{golden_bases, golden_derivative_numeric, is_golden_periodic, Polynomial, ScalarField1D};
use crate::ring::{fib_divisor_by_division, fib_divisor_by_recursion, fibonacci, golden_pow, GoldenExact};
use crate::combinatorics::fibonorial;
use crate::PHI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Ring,
    Calculus,
    Functions,
    Hydro,
    Dynamics,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ring" => Self::Ring,
            "calculus" => Self::Calculus,
            "functions" => Self::Functions,
            "hydro" => Self::Hydro,
            "dynamics" => Self::Dynamics,
            "all" => Self::All,
            other => {
                return Err(Error::Config(format!(
                    "unknown suite '{other}' (expected ring, calculus, functions, hydro, dynamics or all)"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0x601d,
            tol_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{}] {}: {}", self.suite, self.name, self.detail)
    }
}

struct Ctx {
    opts: VerifyOptions,
    rng: ChaCha8Rng,
    out: Vec<CheckResult>,
    suite: &'static str,
}

impl Ctx {
    fn exact(&mut self, name: &'static str, ok: Result<bool>) {
        let (passed, detail) = match ok {
            Ok(true) => (true, "exact".to_string()),
            Ok(false) => (false, "mismatch".to_string()),
            Err(e) => (false, e.to_string()),
        };
        self.push(name, passed, detail);
    }

    fn within(&mut self, name: &'static str, err: Result<f64>, tol: f64) {
        let tol = tol * self.opts.tol_scale;
        let (passed, detail) = match err {
            Ok(e) => (e <= tol, format!("max error {e:.3e} (tol {tol:.1e})")),
            Err(e) => (false, e.to_string()),
        };
        self.push(name, passed, detail);
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.out.push(CheckResult {
            suite: self.suite,
            name,
            passed,
            detail,
        });
    }
}

/// Runs one suite (or all of them) and returns one result per check.
pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Vec<CheckResult> {
    let mut ctx = Ctx {
        opts,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        out: Vec::new(),
        suite: "",
    };
    let all = suite == Suite::All;
    if all || suite == Suite::Ring {
        ctx.suite = "ring";
        ring_checks(&mut ctx);
    }
    if all || suite == Suite::Calculus {
        ctx.suite = "calculus";
        calculus_checks(&mut ctx);
    }
    if all || suite == Suite::Functions {
        ctx.suite = "functions";
        function_checks(&mut ctx);
    }
    if all || suite == Suite::Hydro {
        ctx.suite = "hydro";
        hydro_checks(&mut ctx);
    }
    if all || suite == Suite::Dynamics {
        ctx.suite = "dynamics";
        dynamics_checks(&mut ctx);
    }
    ctx.out
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, e| Ok(m.max(e?)))
}

fn all_of(it: impl IntoIterator<Item = Result<bool>>) -> Result<bool> {
    it.into_iter().try_fold(true, |acc, ok| Ok(acc && ok?))
}

fn ring_checks(ctx: &mut Ctx) {
    let tables: [(i64, [i64; 5]); 5] = [
        (1, [1, 1, 2, 3, 5]),
        (2, [1, 3, 8, 21, 55]),
        (3, [1, 4, 17, 72, 305]),
        (4, [1, 7, 48, 329, 2255]),
        (5, [1, 11, 122, 1353, 15005]),
    ];
    ctx.exact(
        "divisor tables k = 1..5",
        all_of(tables.iter().flat_map(|(k, row)| {
            row.iter().enumerate().map(move |(i, &v)| {
                Ok(fib_divisor_by_division(i as i64 + 1, *k)? == BigInt::from(v))
            })
        })),
    );
    ctx.exact(
        "division and recursion agree (k ≤ 12, n ≤ 30)",
        all_of((1..=12i64).flat_map(|k| {
            (0..=30i64).map(move |n| Ok(fib_divisor_by_division(n, k)? == fib_divisor_by_recursion(n, k)?))
        })),
    );
    ctx.exact(
        "F_k divides F_kn (k, n ≤ 20)",
        Ok((1..=20i64).all(|k| (1..=20i64).all(|n| fibonacci(k * n).is_multiple_of(&fibonacci(k))))),
    );
    let mut ok = true;
    for _ in 0..200 {
        let mut r = || GoldenExact::new(ctx.rng.gen_range(-10_000i64..10_000), ctx.rng.gen_range(-10_000i64..10_000));
        let (x, y) = (r(), r());
        ok &= (&x * &y).norm() == x.norm() * y.norm();
        ok &= (&x * &y).conjugate() == &x.conjugate() * &y.conjugate();
        ok &= (&x + &y).trace() == x.trace() + y.trace();
    }
    ctx.exact("norm multiplicative, conjugation a ring map", Ok(ok));
    ctx.exact(
        "φ^n = F_n φ + F_(n-1), φ^n φ'^n = (-1)^n",
        Ok((-40i64..=40).all(|n| {
            let p = golden_pow(n);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            p == GoldenExact::new(fibonacci(n - 1), fibonacci(n)) && (&p * &p.conjugate()) == GoldenExact::from_integer(sign)
        })),
    );
}

fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
    let deg = rng.gen_range(0..=5);
    let c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Polynomial::from_real(&c)
}

fn calculus_checks(ctx: &mut Ctx) {
    let mut worst = 0.0f64;
    let mut failure = None;
    for _ in 0..100 {
        let f = random_poly(&mut ctx.rng);
        let g = random_poly(&mut ctx.rng);
        for k in 1..=3 {
            let x = ctx.rng.gen_range(0.2..2.0);
            match leibniz_residual(&f, &g, x, k) {
                Ok(e) => worst = worst.max(e),
                Err(e) => failure = Some(e),
            }
        }
    }
    ctx.within(
        "Leibniz and quotient rules (100 random pairs)",
        failure.map_or(Ok(worst), Err),
        1e-10,
    );
    ctx.exact(
        "golden binomial factorization (n + m ≤ 8, k ≤ 3)",
        all_of((1..=3i64).flat_map(|k| {
            (0..=8usize).flat_map(move |n| (0..=8 - n).map(move |m| binomial_factorizes(n, m, k)))
        })),
    );
    let g = |x: f64| (PI * x.abs().ln() / (2.0 * PHI.ln())).sin();
    let field = ScalarField1D::new(g);
    let samples: Vec<f64> = (0..40).map(|i| 0.13 + 0.11 * i as f64).collect();
    ctx.exact(
        "sin(π ln|x| / ln φ²) is periodic at k = 2, not at k = 1",
        is_golden_periodic::<_, f64>(&field, 2, &samples, 1e-10)
            .and_then(|a| Ok(a && !is_golden_periodic::<_, f64>(&field, 1, &samples, 1e-10)?)),
    );
}

pub(crate) fn leibniz_residual(f: &Polynomial, g: &Polynomial, x: f64, k: i64) -> Result<f64> {
    let (up, down, _) = golden_bases(k);
    let fg = f.mul(g);
    let fe = ScalarField1D::new(|t: f64| f.eval_real(t));
    let ge = ScalarField1D::new(|t: f64| g.eval_real(t));
    let fge = ScalarField1D::new(|t: f64| fg.eval_real(t));
    let df: Complex64 = golden_derivative_numeric(&fe, x, k)?;
    let dg: Complex64 = golden_derivative_numeric(&ge, x, k)?;
    let dfg: Complex64 = golden_derivative_numeric(&fge, x, k)?;
    let a = df * g.eval_real(up * x);
    let b = f.eval_real(down * x) * dg;
    let scale = dfg.norm().max(a.norm()).max(b.norm()).max(1e-300);
    let mut worst = (dfg - a - b).norm() / scale;
    let gu = g.eval_real(up * x);
    let gd = g.eval_real(down * x);
    if gu.norm() > 1e-3 && gd.norm() > 1e-3 {
        let qe = ScalarField1D::new(|t: f64| f.eval_real(t) / g.eval_real(t));
        let dq: Complex64 = golden_derivative_numeric(&qe, x, k)?;
        let rhs = (df * gu - f.eval_real(up * x) * dg) / (gu * gd);
        let scale = dq.norm().max(rhs.norm()).max((df / gd).norm()).max(1e-300);
        worst = worst.max((dq - rhs).norm() / scale);
    }
    Ok(worst)
}

fn binomial_factorizes(n: usize, m: usize, k: i64) -> Result<bool> {
    let whole = golden_binomial(n + m, k)?.to_form();
    let bn = golden_binomial(n, k)?.to_form();
    let bm = golden_binomial(m, k)?.to_form();
    let pm = golden_pow(k * m as i64);
    let pn = golden_pow(k * n as i64);
    let first = &bn.scale_y(&pm) * &bm.scale_y(&pn.conjugate());
    let second = &bn.scale_y(&pm.conjugate()) * &bm.scale_y(&pn);
    Ok(whole == first && whole == second)
}

fn function_checks(ctx: &mut Ctx) {
    let t = SeriesTruncation::default();
    let c = |x: f64| Complex64::new(x, 0.0);
    let eig = max_of((1..=2i64).flat_map(|k| {
        [0.3, 1.0].into_iter().flat_map(move |lambda| {
            (1..=10).flat_map(move |i| {
                let x = 0.1 * i as f64;
                [ExpVariant::Small, ExpVariant::Big].into_iter().map(move |variant| {
                    let field = ScalarField1D::new(|s: f64| golden_exp(c(lambda * s), k, variant, &t).unwrap());
                    let d: Complex64 = golden_derivative_numeric(&field, x, k)?;
                    let flip = if variant == ExpVariant::Big && k % 2 == 1 { -1.0 } else { 1.0 };
                    let want = lambda * golden_exp(c(flip * lambda * x), k, variant, &t)?;
                    Ok((d - want).norm() / want.norm())
                })
            })
        })
    }));
    ctx.within("exponential eigenfunctions", eig, 1e-9);

    let product = max_of((1..=3i64).flat_map(|k| {
        let grid: Vec<f64> = (0..=4).map(|i| -0.5 + 0.25 * i as f64).collect();
        let pairs: Vec<(f64, f64)> = grid.iter().flat_map(|&x| grid.iter().map(move |&y| (x, y))).collect();
        pairs.into_iter().map(move |(x, y)| {
            let lhs = golden_exp(c(x), k, ExpVariant::Small, &t)? * golden_exp(c(y), k, ExpVariant::Big, &t)?;
            let mut rhs = Complex64::zero();
            for n in 0..40 {
                let f: f64 = num_traits::ToPrimitive::to_f64(&fibonorial(n, k)?).unwrap_or(f64::INFINITY);
                rhs += GoldenBinomial::new(n, k)?.eval(c(x), c(y)) / f;
            }
            Ok((lhs - rhs).norm())
        })
    }));
    ctx.within("exponential product identity", product, 1e-9);

    let euler = max_of((0..200).map(|i| {
        let z = Complex64::from_polar(((i % 10) as f64 + 1.0) / 10.0, TAU * i as f64 / 200.0 * 7.0);
        Ok((e_phi(z, &t)? - e_phi_product(z, &t)?).norm())
    }));
    ctx.within("e_φ series equals Euler product on |z| ≤ 1", euler, 1e-10);

    let ln = max_of((1..=2i64).flat_map(|k| {
        (0..60).map(move |i| {
            let z = Complex64::from_polar(0.9 * ((i % 6) as f64 + 1.0) / 6.0, TAU * i as f64 / 60.0 * 7.0);
            Ok((ln_phi(z, k, LnForm::Series, &t)? - ln_phi(z, k, LnForm::PoleSum, &t)?).norm())
        })
    }));
    ctx.within("Ln_φ series equals pole sum on |z| ≤ 0.9", ln, 1e-9);

    let mut cr = Ok(0.0f64);
    let mut lap = Ok(0.0f64);
    for k in 1..=2i64 {
        let coeffs: Vec<f64> = (0..=6).map(|_| ctx.rng.gen_range(-1.0..1.0)).collect();
        let g = match GoldenAnalyticFunction::new(&coeffs, k, t) {
            Ok(g) => g,
            Err(e) => {
                cr = Err(e);
                break;
            }
        };
        for &x in &[-0.9, -0.45, 0.3, 0.75] {
            for &y in &[-0.8, -0.35, 0.4, 0.85] {
                cr = cr.and_then(|m| {
                    let (a, b) = g.cauchy_riemann_residuals(x, y)?;
                    Ok(m.max(a.abs()).max(b.abs()))
                });
                lap = lap.and_then(|m| Ok(m.max(g.laplace_residual(x, y)?.abs())));
            }
        }
    }
    ctx.within("golden Cauchy–Riemann residuals", cr, 1e-8);
    ctx.within("golden Laplace residuals", lap, 1e-7);
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Standard deviation of `ψ` over 64 points of the circle `|z| = r`.
pub fn boundary_psi_std(sys: &ImageSystem, r: f64) -> Result<f64> {
    let psi = (0..64)
        .map(|i| sys.stream_function(Complex64::from_polar(r, TAU * (i as f64 + 0.5) / 64.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(std_dev(&psi))
}

fn hydro_checks(ctx: &mut Ctx) {
    let boundary = (|| {
        let mut worst = 0.0f64;
        for k in [1u32, 2] {
            let r2 = PHI.powf(k as f64 / 2.0);
            let z0 = Complex64::from_polar(1.0 + 0.4 * (r2 - 1.0), 0.6);
            for r in [1.0, r2] {
                let mut prev = f64::INFINITY;
                for n in [10, 20, 40, 80] {
                    let sys = ImageSystem::single(AnnulusSpec::new(k, n)?, z0, 1.0)?;
                    let s = boundary_psi_std(&sys, r)?;
                    if s > prev && s > 1e-12 {
                        return Err(Error::Domain(format!("ψ spread grew from {prev:.3e} to {s:.3e} (k={k}, N={n})")));
                    }
                    prev = s;
                }
                worst = worst.max(prev);
            }
        }
        Ok(worst)
    })();
    ctx.within("boundary circles are streamlines (N = 80)", boundary, 1e-6);

    let covariance = max_of([1u32, 2].into_iter().flat_map(|k| {
        [Complex64::new(0.3, 1.05), Complex64::new(-1.05, 0.25), Complex64::new(0.6, -0.85)]
            .into_iter()
            .map(move |z| {
                let sys = ImageSystem::single(AnnulusSpec::new(k, 80)?, Complex64::new(1.08, 0.2), 1.0)?;
                let q = PHI.powi(k as i32);
                Ok((sys.velocity_window(z * q, -79, 81)? - sys.velocity_window(z, -80, 80)? / q).norm())
            })
    }));
    ctx.within("velocity self-similarity", covariance, 1e-8);

    let pure = max_of((-2..=2).flat_map(|n| {
        (0..9).map(move |i| {
            let z = Complex64::from_polar(PHI.powf(n as f64 / 2.0), PI * i as f64 / 8.0);
            Ok(pure_golden_flow(z)?.1.abs())
        })
    }));
    ctx.within("pure flow streamlines r = φ^(n/2)", pure, 1e-12);
    let periodic = max_of([0.7, 1.3].into_iter().flat_map(|r| {
        (0..8).map(move |i| {
            let z = Complex64::from_polar(r, -PI + TAU * (i as f64 + 0.5) / 8.0);
            let f = pure_golden_flow(z)?.0;
            Ok((pure_golden_flow(z * PHI)?.0 - f).norm() / f.norm())
        })
    }));
    ctx.within("pure flow F(φz) = F(z)", periodic, 1e-10);

    let cross = (|| {
        let z0 = Complex64::new(1.12, 0.2);
        let sys = ImageSystem::single(AnnulusSpec::new(1, 200)?, z0, 1.0)?;
        let vs = [(z0, kappa_from_gamma(1.0))];
        max_of((0..20).map(|i| {
            let r = 1.02 + (PHI.sqrt() - 1.04) * (i % 5) as f64 / 4.0;
            let z = Complex64::from_polar(r, 0.5 + 0.3 * i as f64);
            Ok((velocity_via_ln_phi(&vs, z)? - sys.velocity(z)?).norm())
        }))
    })();
    ctx.within("Ln_φ velocity equals image sum", cross, 1e-7);

    let wm = max_of([0.3, 0.5, 0.8].into_iter().flat_map(|d| {
        (0..=30).map(move |i| {
            let t = 0.5 + 1.5 * i as f64 / 30.0;
            let a = wm_fractal_window(PHI * t, d, -60, 60)?;
            let b = PHI.powf(d) * wm_fractal_window(t, d, -59, 61)?;
            Ok((a - b).abs() / a)
        })
    }));
    ctx.within("Weierstrass–Mandelbrot self-similarity (matched window)", wm, 1e-5);
}

fn dynamics_checks(ctx: &mut Ctx) {
    ctx.within(
        "stationary radius φ^(1/4)",
        stationary_radius(1e-13).map(|r| (r - PHI.powf(0.25)).abs()),
        1e-9,
    );
    let ratio = (|| {
        let delta = 1e-4;
        let w1 = single_vortex_omega(1.0 + delta, 1.0)?;
        let w2 = single_vortex_omega(PHI.sqrt() / (1.0 + delta), 1.0)?;
        Ok((w1.abs() / w2.abs() - PHI).abs())
    })();
    ctx.within("boundary frequency ratio at equal relative offsets", ratio, 1e-3);
    let law = max_of([1.05, 1.1, PHI.powf(0.25), 1.25].into_iter().map(|r| {
        let z = Complex64::from_polar(r, 0.4);
        let s = VortexState::new(vec![z], vec![1.0])?;
        let v = n_vortex_rhs(&s, 100)?[0];
        let w = single_vortex_omega(r, kappa_from_gamma(1.0))?;
        Ok((v - Complex64::new(0.0, w) * z).norm())
    }));
    ctx.within("image sums reproduce the rotation law", law, 1e-7);

    let drift = (|| {
        let s = VortexState::new(vec![Complex64::new(1.1, 0.0)], vec![1.0])?;
        let cfg = IntegratorConfig { record_every: 100, ..IntegratorConfig::new(1e-3, 10_000)? };
        let tr = integrate(&s, &cfg)?;
        Ok(tr.states.iter().map(|st| (st.positions[0].norm() - 1.1).abs()).fold(0.0, f64::max))
    })();
    ctx.within("single-vortex radius drift (10⁴ steps)", drift, 1e-7);

    let energy = (|| {
        let s = VortexState::new(vec![Complex64::new(1.1, 0.1), Complex64::new(-0.3, 1.15)], vec![1.0, -0.6])?;
        let cfg = IntegratorConfig { record_every: 500, ..IntegratorConfig::new(1e-3, 10_000)? };
        let tr = integrate(&s, &cfg)?;
        let h0 = hamiltonian(&s)?;
        max_of(tr.states.iter().map(|st| Ok((hamiltonian(st)? - h0).abs() / h0.abs())))
    })();
    ctx.within("two-vortex energy drift (10⁴ steps)", energy, 1e-6);

    let ring = (|| {
        let r = PHI.powf(0.25);
        let s = VortexState::ring(3, r, 1.0)?;
        let cfg = IntegratorConfig { record_every: 10, ..IntegratorConfig::new(1e-3, 2_000)? };
        let tr = integrate(&s, &cfg)?;
        let want = 2.0 / (4.0 * PI * PHI.sqrt());
        let formula = ring_frequency(3, r, 1.0)?;
        Ok(((tr.mean_angular_velocity(0) - want) / want).abs().max(((formula - want) / want).abs()))
    })();
    ctx.within("three-vortex ring frequency", ring, 1e-4);

    let green = (|| {
        let zl = Complex64::new(1.05, 0.25);
        let mut worst = 0.0f64;
        for i in 0..64 {
            let th = TAU * i as f64 / 64.0;
            let outer = green_function(Complex64::from_polar(PHI.sqrt(), th), zl)?;
            let inner = green_function(Complex64::from_polar(1.0, th), zl)?;
            let want = (PHI.sqrt() / zl.norm()).ln() / TAU;
            let z = Complex64::from_polar(1.0 + 0.2 * (i as f64 / 64.0), th);
            let sym = green_function(z, zl)? - green_function(zl, z)?;
            worst = worst.max(outer.abs()).max((inner - want).abs()).max(sym.abs());
        }
        Ok(worst)
    })();
    ctx.within("Green function boundary values and symmetry", green, 1e-7);

    ctx.exact(
        "semiclassical levels finite (n ≤ 20)",
        all_of((0..=20).map(|n| {
            let e = semiclassical_energy(n, 1.0)?;
            Ok(e.is_finite() && e.abs() < 1e6)
        })),
    );
}
