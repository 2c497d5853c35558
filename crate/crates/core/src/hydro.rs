//! Planar potential flows in the golden annulus `1 < |z| < φ^{k/2}`.
//!
//! A point vortex at `z0` is reflected in both circles. The images form two
//! geometric ladders with ratio `q = φ^k`: vortices at `z0 qⁿ` and
//! anti-vortices at `qⁿ / z̄0`. The conjugate velocity of one vortex is
//!
//! `V̄(z) = Γ/(2πi) Σₙ [1/(z - z0 qⁿ) - 1/(z - qⁿ/z̄0)] + (Γ + Γ_in)/(2πi z)`,
//!
//! where `Γ_in` is the circulation around the inner cylinder. With
//! `Γ_in = 0` this coincides with the φ-exponential representation; with
//! `Γ_in = -Γ` the origin term cancels and only the paired images remain.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{ln_e_phi, ln_phi_one_minus, SeriesTruncation};
use crate::{LN_PHI, PHI};

/// Default radius of the disks cut out around singularities.
pub const DEFAULT_EXCLUSION: f64 = 1e-9;

/// Vortex strength of the pure golden-periodic flow `z^{2πi/ln φ}`.
pub const PURE_FLOW_GAMMA: f64 = -4.0 * PI * PI / LN_PHI;

/// Annulus `1 < |z| < φ^{k/2}` together with the image truncation `|n| ≤ N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub k: u32,
    pub truncation: usize,
}

impl AnnulusSpec {
    pub fn new(k: u32, truncation: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroLevel);
        }
        Ok(Self { k, truncation })
    }

    /// Ladder ratio `q = φ^k = r₂² / r₁²`.
    pub fn q(&self) -> f64 {
        PHI.powi(self.k as i32)
    }

    pub fn inner_radius(&self) -> f64 {
        1.0
    }

    pub fn outer_radius(&self) -> f64 {
        self.q().sqrt()
    }

    /// Strictly inside the annulus.
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        r > 1.0 && r < self.outer_radius()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointVortex {
    pub z: Complex64,
    pub gamma: f64,
}

/// Image pairs `(z0 qⁿ, qⁿ / z̄0)` for `n` in `lo..=hi`.
pub fn image_positions(z0: Complex64, k: u32, lo: i64, hi: i64) -> Vec<(Complex64, Complex64)> {
    let q = PHI.powi(k as i32);
    let mirror = 1.0 / z0.conj();
    (lo..=hi)
        .map(|n| {
            let s = q.powi(n as i32);
            (z0 * s, mirror * s)
        })
        .collect()
}

/// Vortices in an annulus, with their image ladders.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageSystem {
    annulus: AnnulusSpec,
    vortices: Vec<PointVortex>,
    inner_circulation: f64,
    exclusion: f64,
}

impl ImageSystem {
    pub fn new(annulus: AnnulusSpec, vortices: Vec<PointVortex>) -> Result<Self> {
        for v in &vortices {
            if !annulus.contains(v.z) {
                return Err(Error::Domain(format!(
                    "vortex at {} is not inside 1 < |z| < {}",
                    v.z,
                    annulus.outer_radius()
                )));
            }
            if !v.gamma.is_finite() {
                return Err(Error::Config(format!("non-finite circulation {}", v.gamma)));
            }
        }
        Ok(Self {
            annulus,
            vortices,
            inner_circulation: 0.0,
            exclusion: DEFAULT_EXCLUSION,
        })
    }

    pub fn single(annulus: AnnulusSpec, z0: Complex64, gamma: f64) -> Result<Self> {
        Self::new(annulus, vec![PointVortex { z: z0, gamma }])
    }

    /// Sets the circulation around the inner cylinder.
    pub fn with_inner_circulation(mut self, gamma: f64) -> Self {
        self.inner_circulation = gamma;
        self
    }

    /// Like [`with_inner_circulation`](Self::with_inner_circulation) with
    /// `Γ_in = -ΣΓ`: the bare paired image sum.
    pub fn paired_images_only(self) -> Self {
        let total: f64 = self.vortices.iter().map(|v| v.gamma).sum();
        self.with_inner_circulation(-total)
    }

    pub fn with_exclusion(mut self, eps: f64) -> Result<Self> {
        if !(eps >= 0.0) {
            return Err(Error::Config(format!("exclusion radius must be non-negative, got {eps}")));
        }
        self.exclusion = eps;
        Ok(self)
    }

    pub fn annulus(&self) -> &AnnulusSpec {
        &self.annulus
    }

    pub fn vortices(&self) -> &[PointVortex] {
        &self.vortices
    }

    pub fn inner_circulation(&self) -> f64 {
        self.inner_circulation
    }

    pub fn exclusion(&self) -> f64 {
        self.exclusion
    }

    fn symmetric_window(&self) -> (i64, i64) {
        let n = self.annulus.truncation as i64;
        (-n, n)
    }

    fn origin_strength(&self) -> f64 {
        self.vortices.iter().map(|v| v.gamma).sum::<f64>() + self.inner_circulation
    }

    fn check(&self, z: Complex64, a: Complex64, label: &str) -> Result<()> {
        let d = (z - a).norm();
        if d <= self.exclusion {
            return Err(Error::NearSingularity {
                point: z.to_string(),
                singularity: format!("{label} at {a}"),
                distance: d,
            });
        }
        Ok(())
    }

    // Calls `f(Γ, vortex image, anti-vortex image)` over the window.
    fn for_each_pair(
        &self,
        z: Complex64,
        lo: i64,
        hi: i64,
        mut f: impl FnMut(f64, Complex64, Complex64),
    ) -> Result<()> {
        self.check(z, Complex64::new(0.0, 0.0), "origin")?;
        for v in &self.vortices {
            for (a, b) in image_positions(v.z, self.annulus.k, lo, hi) {
                self.check(z, a, "vortex image")?;
                self.check(z, b, "anti-vortex image")?;
                f(v.gamma, a, b);
            }
        }
        Ok(())
    }

    /// Complex potential `F(z)` with the symmetric truncation `|n| ≤ N`.
    pub fn potential(&self, z: Complex64) -> Result<Complex64> {
        let (lo, hi) = self.symmetric_window();
        self.potential_window(z, lo, hi)
    }

    /// Complex potential with images `lo ≤ n ≤ hi`, principal logarithms.
    pub fn potential_window(&self, z: Complex64, lo: i64, hi: i64) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        self.for_each_pair(z, lo, hi, |g, a, b| sum += g * ((z - a) / (z - b)).ln())?;
        sum += self.origin_strength() * z.ln();
        Ok(sum / Complex64::new(0.0, TAU))
    }

    /// Stream function `ψ = Im F`, computed without branch cuts.
    pub fn stream_function(&self, z: Complex64) -> Result<f64> {
        let (lo, hi) = self.symmetric_window();
        let mut sum = 0.0;
        self.for_each_pair(z, lo, hi, |g, a, b| sum += g * ((z - a).norm() / (z - b).norm()).ln())?;
        sum += self.origin_strength() * z.norm().ln();
        Ok(-sum / TAU)
    }

    /// Conjugate velocity `V̄ = u - iv` with `|n| ≤ N`.
    pub fn velocity(&self, z: Complex64) -> Result<Complex64> {
        let (lo, hi) = self.symmetric_window();
        self.velocity_window(z, lo, hi)
    }

    pub fn velocity_window(&self, z: Complex64, lo: i64, hi: i64) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        self.for_each_pair(z, lo, hi, |g, a, b| sum += g * (1.0 / (z - a) - 1.0 / (z - b)))?;
        sum += self.origin_strength() / z;
        Ok(sum / Complex64::new(0.0, TAU))
    }

    /// Images of every vortex inside the truncation window.
    pub fn singularities(&self) -> Vec<Complex64> {
        let (lo, hi) = self.symmetric_window();
        self.vortices
            .iter()
            .flat_map(|v| image_positions(v.z, self.annulus.k, lo, hi))
            .flat_map(|(a, b)| [a, b])
            .collect()
    }
}

/// `F(z)` of an image system, see [`ImageSystem::potential`].
pub fn vortex_potential(sys: &ImageSystem, z: Complex64) -> Result<Complex64> {
    sys.potential(z)
}

/// `V̄(z)` of an image system, see [`ImageSystem::velocity`].
pub fn vortex_velocity(sys: &ImageSystem, z: Complex64) -> Result<Complex64> {
    sys.velocity(z)
}

/// Pure golden-periodic flow `F(z) = z^{2πi/ln φ}`: returns `(F, ψ, V̄)`.
pub fn pure_golden_flow(z: Complex64) -> Result<(Complex64, f64, Complex64)> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("pure golden flow is singular at z = 0".into()));
    }
    let alpha = Complex64::new(0.0, TAU / LN_PHI);
    let f = (alpha * z.ln()).exp();
    let (r, theta) = z.to_polar();
    let psi = (-TAU * theta / LN_PHI).exp() * (TAU * r.ln() / LN_PHI).sin();
    Ok((f, psi, alpha * f / z))
}

fn check_kappa_positions(vortices: &[(Complex64, f64)], z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("φ-exponential representation is singular at z = 0".into()));
    }
    for &(zs, _) in vortices {
        let d = (z - zs).norm();
        if d <= DEFAULT_EXCLUSION {
            return Err(Error::NearSingularity {
                point: z.to_string(),
                singularity: format!("vortex at {zs}"),
                distance: d,
            });
        }
    }
    Ok(())
}

/// Complex potential in the annulus `1 < |z| < √φ` written through `e_φ`:
///
/// `F = Σ iκ_s [ln(z - z_s) + ln e_φ(-φz/z_s) + ln e_φ(-φz_s/z)
///              - ln e_φ(-φ z z̄_s) - ln e_φ(-φ²/(z z̄_s))]`.
///
/// Vortices are given as `(z_s, κ_s)`.
pub fn potential_via_e_phi(vortices: &[(Complex64, f64)], z: Complex64) -> Result<Complex64> {
    check_kappa_positions(vortices, z)?;
    let t = SeriesTruncation::default();
    let mut sum = Complex64::new(0.0, 0.0);
    for &(zs, kappa) in vortices {
        if kappa == 0.0 {
            continue;
        }
        let zz = z * zs.conj();
        let log = (z - zs).ln() + ln_e_phi(-PHI * z / zs, &t)? + ln_e_phi(-PHI * zs / z, &t)?
            - ln_e_phi(-PHI * zz, &t)?
            - ln_e_phi(-PHI * PHI / zz, &t)?;
        sum += Complex64::new(0.0, kappa) * log;
    }
    Ok(sum)
}

/// Conjugate velocity in the annulus `1 < |z| < √φ` through four φ-logarithms:
///
/// `V̄ = Σ iκ_s/(z - z_s) + (iφ/z) Σ κ_s [Ln_φ(1 - z/z_s) - Ln_φ(1 - z z̄_s)
///       + Ln_φ(1 - φ/(z z̄_s)) - Ln_φ(1 - z_s/z)]`.
pub fn velocity_via_ln_phi(vortices: &[(Complex64, f64)], z: Complex64) -> Result<Complex64> {
    check_kappa_positions(vortices, z)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for &(zs, kappa) in vortices {
        if kappa == 0.0 {
            continue;
        }
        let zz = z * zs.conj();
        let logs = ln_phi_one_minus(z / zs)? - ln_phi_one_minus(zz)? + ln_phi_one_minus(PHI / zz)?
            - ln_phi_one_minus(zs / z)?;
        let i_kappa = Complex64::new(0.0, kappa);
        sum += i_kappa / (z - zs) + i_kappa * PHI * logs / z;
    }
    Ok(sum)
}

fn check_wm(t: f64, d: f64) -> Result<()> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::Domain(format!("fractal dimension parameter must lie in (0, 1), got {d}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// Golden Weierstrass–Mandelbrot function `W(t) = Σ_{|n|≤T} (1 - cos φⁿt) / φ^{nd}`.
pub fn wm_fractal(t: f64, d: f64, t_trunc: usize) -> Result<f64> {
    let n = t_trunc as i64;
    wm_fractal_window(t, d, -n, n)
}

/// `W(t)` summed over `lo ≤ n ≤ hi`.
pub fn wm_fractal_window(t: f64, d: f64, lo: i64, hi: i64) -> Result<f64> {
    check_wm(t, d)?;
    Ok((lo..=hi)
        .map(|n| {
            let x = PHI.powi(n as i32) * t;
            // 1 - cos x = 2 sin²(x/2), exact for small x
            2.0 * (0.5 * x).sin().powi(2) * PHI.powf(-(n as f64) * d)
        })
        .sum())
}

/// Modulation `A_φ(t) = Σ_{|n|≤T} (1 - e^{iφⁿt}) / (φ^{dn} t^d)`, golden periodic in `t`.
pub fn wm_modulation(t: f64, d: f64, t_trunc: usize) -> Result<Complex64> {
    let n = t_trunc as i64;
    wm_modulation_window(t, d, -n, n)
}

pub fn wm_modulation_window(t: f64, d: f64, lo: i64, hi: i64) -> Result<Complex64> {
    check_wm(t, d)?;
    let sum: Complex64 = (lo..=hi)
        .map(|n| {
            let x = PHI.powi(n as i32) * t;
            let s = (0.5 * x).sin();
            let one_minus = Complex64::new(2.0 * s * s, -x.sin());
            one_minus * PHI.powf(-(n as f64) * d)
        })
        .sum();
    Ok(sum / t.powf(d))
}

/// One sample of a flow field: stream function and velocity `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub u: f64,
    pub v: f64,
}

/// Flow samples on a rectangular lattice clipped to the annulus.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowGrid {
    pub samples: Vec<FlowSample>,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl FlowGrid {
    pub fn psi_range(&self) -> Option<(f64, f64)> {
        self.samples.iter().map(|s| s.psi).fold(None, |acc, p| match acc {
            None => Some((p, p)),
            Some((lo, hi)) => Some((lo.min(p), hi.max(p))),
        })
    }
}

/// Samples `ψ` and `(u, v) = (Re V̄, -Im V̄)` on an `nx × ny` lattice covering
/// the outer disk. Points outside the open annulus or within `eps` of an
/// image are dropped. Evaluation runs in parallel.
pub fn field_grid(sys: &ImageSystem, nx: usize, ny: usize, eps: f64) -> Result<FlowGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::Config(format!("grid resolution must be at least 2x2, got {nx}x{ny}")));
    }
    let sys = sys.clone().with_exclusion(eps)?;
    let r = sys.annulus().outer_radius();
    let coord = |i: usize, n: usize| -r + 2.0 * r * i as f64 / (n - 1) as f64;
    let samples = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let sys = &sys;
            (0..nx).filter_map(move |i| {
                let z = Complex64::new(coord(i, nx), coord(j, ny));
                if !sys.annulus().contains(z) {
                    return None;
                }
                let psi = sys.stream_function(z).ok()?;
                let vel = sys.velocity(z).ok()?;
                Some(FlowSample {
                    x: z.re,
                    y: z.im,
                    psi,
                    u: vel.re,
                    v: -vel.im,
                })
            })
        })
        .collect();
    Ok(FlowGrid {
        samples,
        x_range: (-r, r),
        y_range: (-r, r),
        nx,
        ny,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn std_dev(xs: &[f64]) -> f64 {
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
    }

    fn circle(r: f64, n: usize) -> impl Iterator<Item = Complex64> {
        (0..n).map(move |i| Complex64::from_polar(r, TAU * (i as f64 + 0.5) / n as f64))
    }

    #[test]
    fn image_position_examples() {
        let z0 = c(PHI.sqrt(), 0.0);
        let (a, b) = image_positions(z0, 1, 0, 0)[0];
        assert!((a.re - PHI.sqrt()).abs() < 1e-15 && (b.re - 1.0 / PHI.sqrt()).abs() < 1e-15);
        let on_circle = Complex64::from_polar(1.0, 0.7);
        let (a, b) = image_positions(on_circle, 2, 0, 0)[0];
        assert!((a - b).norm() < 1e-15);
        let pairs = image_positions(c(1.1, 0.2), 2, 1, 2);
        let ratio = pairs[1].0.norm() / pairs[0].0.norm();
        assert!((ratio - PHI * PHI).abs() < 1e-12);
        let z0 = c(1.1, 0.3);
        let gap0 = (z0 - 1.0 / z0.conj()).norm();
        for (n, (a, b)) in (-3..=3).zip(image_positions(z0, 1, -3, 3)) {
            assert!(((a - b).norm() - gap0 * PHI.powi(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_points_of_unit_circle() {
        let (a, b) = (1.0 / PHI, PHI);
        assert!((b - a - 1.0).abs() < 1e-15 && (a * b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn annulus_validation() {
        assert!(AnnulusSpec::new(0, 10).is_err());
        let a = AnnulusSpec::new(3, 10).unwrap();
        assert!((a.outer_radius().powi(2) / a.inner_radius().powi(2) - PHI.powi(3)).abs() < 1e-12);
        assert!(ImageSystem::single(a, c(0.5, 0.0), 1.0).is_err());
        assert!(ImageSystem::single(a, c(1.2, 0.0), 1.0).unwrap().with_exclusion(-1.0).is_err());
    }

    #[test]
    fn zero_circulation_is_still() {
        let a = AnnulusSpec::new(2, 20).unwrap();
        let sys = ImageSystem::single(a, c(1.2, 0.1), 0.0).unwrap();
        let z = c(0.3, 1.3);
        assert_eq!(sys.potential(z).unwrap(), c(0.0, 0.0));
        assert_eq!(sys.velocity(z).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn single_image_pair_matches_hand_formula() {
        let a = AnnulusSpec::new(1, 0).unwrap();
        let z0 = c(1.1, 0.2);
        let sys = ImageSystem::single(a, z0, 2.0).unwrap().paired_images_only();
        let z = c(-0.4, 1.1);
        let hand = 2.0 / Complex64::new(0.0, TAU) * (1.0 / (z - z0) - 1.0 / (z - 1.0 / z0.conj()));
        assert!((sys.velocity(z).unwrap() - hand).norm() < 1e-15);
    }

    #[test]
    fn singularity_proximity_is_rejected() {
        let a = AnnulusSpec::new(1, 5).unwrap();
        let z0 = c(1.1, 0.2);
        let sys = ImageSystem::single(a, z0, 1.0).unwrap();
        assert!(matches!(sys.velocity(z0), Err(Error::NearSingularity { .. })));
        assert!(matches!(sys.potential(z0 * PHI), Err(Error::NearSingularity { .. })));
    }

    #[test]
    fn stream_function_is_imaginary_part_of_potential() {
        let a = AnnulusSpec::new(2, 30).unwrap();
        let sys = ImageSystem::single(a, c(1.3, 0.4), 1.7).unwrap();
        for z in [c(0.2, 1.4), c(-1.2, -0.5), c(1.0, -1.0)] {
            let psi = sys.stream_function(z).unwrap();
            assert!((psi - sys.potential(z).unwrap().im).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_circles_are_streamlines() {
        for k in [1u32, 2] {
            let r2 = PHI.powf(k as f64 / 2.0);
            let z0 = Complex64::from_polar(1.0 + 0.4 * (r2 - 1.0), 0.6);
            let mut prev = [f64::INFINITY; 2];
            for n in [10usize, 20, 40, 80] {
                let sys = ImageSystem::single(AnnulusSpec::new(k, n).unwrap(), z0, 1.0).unwrap();
                for (idx, r) in [1.0, r2].into_iter().enumerate() {
                    let psi: Vec<f64> = circle(r, 64).map(|z| sys.stream_function(z).unwrap()).collect();
                    let s = std_dev(&psi);
                    assert!(s <= prev[idx] || s < 1e-12, "k={k} N={n} r={r} {s} {}", prev[idx]);
                    prev[idx] = s;
                    if n == 80 {
                        assert!(s < 1e-6, "k={k} r={r} std={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn golden_periodicity_of_potential() {
        for k in [1u32, 2] {
            let n = 80i64;
            let z0 = Complex64::from_polar(1.0 + 0.3 * (PHI.powf(k as f64 / 2.0) - 1.0), 1.1);
            let sys = ImageSystem::single(AnnulusSpec::new(k, 80).unwrap(), z0, 1.0)
                .unwrap()
                .paired_images_only();
            let q = PHI.powi(k as i32);
            for z in [c(0.3, 1.05), c(-1.05, 0.2), c(0.5, -0.95)] {
                let shifted = sys.potential_window(z * q, -n + 1, n + 1).unwrap();
                let base = sys.potential_window(z, -n, n).unwrap();
                assert!((shifted - base).norm() < 1e-7, "k={k} z={z}");
            }
        }
    }

    #[test]
    fn velocity_self_similarity() {
        for k in [1u32, 2, 3] {
            let sys = ImageSystem::single(AnnulusSpec::new(k, 60).unwrap(), c(1.05, 0.3), 1.3).unwrap();
            let q = PHI.powi(k as i32);
            for z in [c(0.3, 1.05), c(-1.1, 0.4), c(1.2, -0.1)] {
                let lhs = sys.velocity_window(z * q, -59, 61).unwrap();
                let rhs = sys.velocity_window(z, -60, 60).unwrap() / q;
                assert!((lhs - rhs).norm() < 1e-8, "k={k} z={z}");
            }
        }
    }

    #[test]
    fn circulation_around_vortex() {
        let z0 = c(1.1, 0.15);
        let gamma = 2.3;
        let sys = ImageSystem::single(AnnulusSpec::new(1, 60).unwrap(), z0, gamma).unwrap();
        let (n, rho) = (2000, 0.02);
        let mut circ = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let th = TAU * i as f64 / n as f64;
            let dz = Complex64::new(0.0, rho * TAU / n as f64) * Complex64::from_polar(1.0, th);
            circ += sys.velocity(z0 + Complex64::from_polar(rho, th)).unwrap() * dz;
        }
        assert!((circ.re - gamma).abs() < 1e-6 * gamma);
        assert!(circ.im.abs() < 1e-9);
    }

    #[test]
    fn pure_flow_examples() {
        for n in -2..=2 {
            for i in 0..8 {
                let th = PI * i as f64 / 7.0;
                let z = Complex64::from_polar(PHI.powf(n as f64 / 2.0), th);
                assert!(pure_golden_flow(z).unwrap().1.abs() < 1e-12, "n={n} th={th}");
            }
        }
        let psi = pure_golden_flow(c(PHI.powf(0.25), 0.0)).unwrap().1;
        assert!((psi - 1.0).abs() < 1e-15);
        for z in [c(0.7, 0.2), c(-1.3, 0.4), c(1.0, -0.5)] {
            let (f, psi, v) = pure_golden_flow(z).unwrap();
            let (f2, _, _) = pure_golden_flow(z * PHI).unwrap();
            assert!((f2 - f).norm() < 1e-10 * f.norm());
            assert!((psi - f.im).abs() < 1e-12 * f.norm().max(1.0));
            let h = 1e-6;
            let fd = (pure_golden_flow(z + h).unwrap().0 - pure_golden_flow(z - h).unwrap().0) / (2.0 * h);
            assert!((fd - v).norm() < 1e-6 * v.norm());
        }
        assert!(pure_golden_flow(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn representations_agree() {
        let z0 = c(1.12, 0.2);
        let gamma = 1.4;
        let kappa = -gamma / TAU;
        let sys = ImageSystem::single(AnnulusSpec::new(1, 200).unwrap(), z0, gamma).unwrap();
        let vs = [(z0, kappa)];
        for i in 0..20 {
            let r = 1.02 + 0.2 * (i % 5) as f64 / 4.0 * (PHI.sqrt() - 1.04) / 0.2;
            let z = Complex64::from_polar(r, 0.4 + 0.3 * i as f64);
            let a = velocity_via_ln_phi(&vs, z).unwrap();
            let b = sys.velocity(z).unwrap();
            assert!((a - b).norm() < 1e-7, "z={z} {a} {b}");
        }
        let probes = [c(0.2, 1.1), c(-0.6, 1.0), c(0.8, 0.9), c(-1.05, 0.3)];
        for p in probes {
            for q in probes {
                let a = potential_via_e_phi(&vs, p).unwrap() - potential_via_e_phi(&vs, q).unwrap();
                let b = sys.potential(p).unwrap() - sys.potential(q).unwrap();
                assert!((a - b).norm() < 1e-7, "{p} {q}");
            }
        }
        assert_eq!(potential_via_e_phi(&[(z0, 0.0)], c(0.2, 1.1)).unwrap(), c(0.0, 0.0));
        assert_eq!(velocity_via_ln_phi(&[(z0, 0.0)], c(0.2, 1.1)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn wm_examples() {
        assert!(wm_fractal(1e-30, 0.5, 60).unwrap() < 1e-10);
        let ratio = wm_fractal(PHI, 0.5, 60).unwrap() / wm_fractal(1.0, 0.5, 60).unwrap();
        assert!((ratio - PHI.sqrt()).abs() < 1e-5);
        for t in [0.5, 1.0, 1.7] {
            let d = 0.4;
            let a = wm_modulation(PHI * t, d, 60).unwrap();
            let b = wm_modulation(t, d, 60).unwrap();
            assert!((a.re - b.re).abs() < 1e-5);
            let w = wm_fractal(t, d, 60).unwrap();
            assert!((b.re * t.powf(d) - w).abs() < 1e-12 * w);
        }
        assert!(wm_fractal(1.0, 1.0, 10).is_err());
        assert!(wm_fractal(-1.0, 0.5, 10).is_err());
    }

    #[test]
    fn wm_shifted_window_is_exact() {
        for d in [0.3, 0.5, 0.8] {
            for t in [0.5, 1.1, 2.0] {
                let a = wm_fractal_window(PHI * t, d, -60, 60).unwrap();
                let b = PHI.powf(d) * wm_fractal_window(t, d, -59, 61).unwrap();
                assert!((a - b).abs() < 1e-7 * a, "d={d} t={t} {}", (a - b).abs() / a);
            }
        }
    }

    #[test]
    fn grid_shape_and_zero_field() {
        let a = AnnulusSpec::new(2, 10).unwrap();
        let empty = ImageSystem::new(a, vec![]).unwrap();
        let g = field_grid(&empty, 20, 20, 1e-9).unwrap();
        assert!(!g.samples.is_empty() && g.samples.len() <= 400);
        assert!(g.samples.iter().all(|s| s.psi == 0.0 && s.u == 0.0 && s.v == 0.0));
        assert!(field_grid(&empty, 1, 20, 1e-9).is_err());
        let sys = ImageSystem::single(a, c(1.2, 0.0), 1.0).unwrap();
        let g = field_grid(&sys, 50, 50, 1e-9).unwrap();
        let inside = (0..50 * 50)
            .filter(|i| {
                let r = a.outer_radius();
                let x = -r + 2.0 * r * (i % 50) as f64 / 49.0;
                let y = -r + 2.0 * r * (i / 50) as f64 / 49.0;
                a.contains(c(x, y))
            })
            .count();
        assert_eq!(g.samples.len(), inside);
    }

    #[test]
    fn grid_velocity_is_stream_function_gradient() {
        let sys = ImageSystem::single(AnnulusSpec::new(2, 40).unwrap(), c(1.2, 0.3), 1.0).unwrap();
        let g = field_grid(&sys, 15, 15, 1e-9).unwrap();
        let h = 1e-5;
        for s in &g.samples {
            let z = c(s.x, s.y);
            if (z - c(1.2, 0.3)).norm() < 0.2 || z.norm() < 1.01 || z.norm() > PHI - 0.01 {
                continue;
            }
            let dpsi_dy = (sys.stream_function(z + c(0.0, h)).unwrap()
                - sys.stream_function(z - c(0.0, h)).unwrap())
                / (2.0 * h);
            let dpsi_dx = (sys.stream_function(z + h).unwrap() - sys.stream_function(z - h).unwrap()) / (2.0 * h);
            assert!((s.u - dpsi_dy).abs() < 1e-5, "{z}");
            assert!((s.v + dpsi_dx).abs() < 1e-5, "{z}");
        }
    }
}
