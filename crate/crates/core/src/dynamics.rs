//! Point vortices in the golden annulus `1 < |z| < √φ`.
//!
//! Circulations are `Γ`; the rotation law of a single vortex is written with
//! `κ = -Γ/2π`, so that `iκ/(z - z0)` is the conjugate velocity of a vortex
//! of circulation `Γ`. The image system matches the φ-exponential
//! representation: no net circulation around the inner cylinder.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{ln_abs_e_phi, ln_phi_one_minus, SeriesTruncation};
use crate::{LN_PHI, PHI};

/// Minimum separation before two vortices count as collided.
pub const COLLISION_DISTANCE: f64 = 1e-6;

fn outer_radius() -> f64 {
    PHI.sqrt()
}

fn in_annulus(z: Complex64) -> bool {
    let r = z.norm();
    r > 1.0 && r < outer_radius()
}

/// `κ = -Γ/2π`.
pub fn kappa_from_gamma(gamma: f64) -> f64 {
    -gamma / TAU
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexState {
    pub positions: Vec<Complex64>,
    pub circulations: Vec<f64>,
    pub time: f64,
}

impl VortexState {
    pub fn new(positions: Vec<Complex64>, circulations: Vec<f64>) -> Result<Self> {
        if positions.len() != circulations.len() {
            return Err(Error::Config(format!(
                "{} positions but {} circulations",
                positions.len(),
                circulations.len()
            )));
        }
        for (i, z) in positions.iter().enumerate() {
            if !in_annulus(*z) {
                return Err(Error::Domain(format!(
                    "vortex {i} at {z} is not inside 1 < |z| < √φ"
                )));
            }
        }
        Ok(Self {
            positions,
            circulations,
            time: 0.0,
        })
    }

    /// `N` vortices of circulation `Γ` equally spaced on `|z| = r`.
    pub fn ring(n: usize, r: f64, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("a ring needs at least one vortex".into()));
        }
        let positions = (0..n)
            .map(|l| Complex64::from_polar(r, TAU * l as f64 / n as f64))
            .collect();
        Self::new(positions, vec![gamma; n])
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    /// Images summed for `|n| ≤ image_truncation`.
    pub image_truncation: usize,
    /// Keep every `record_every`-th state in the trajectory.
    pub record_every: usize,
    /// Reject runs whose first step would move a vortex more than a tenth
    /// of the smallest spacing (to another vortex or to a wall).
    pub check_step: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            steps: 1000,
            scheme: Scheme::Rk4,
            image_truncation: 100,
            record_every: 1,
            check_step: true,
        }
    }
}

impl IntegratorConfig {
    pub fn new(dt: f64, steps: usize) -> Result<Self> {
        let cfg = Self {
            dt,
            steps,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 || self.image_truncation == 0 || self.record_every == 0 {
            return Err(Error::Config(
                "steps, image_truncation and record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Recorded states; `states[i]` is the state after `i * record_every` steps.
    pub states: Vec<VortexState>,
    pub record_every: usize,
}

impl Trajectory {
    pub fn frames(&self) -> impl Iterator<Item = (usize, &VortexState)> {
        self.states.iter().enumerate().map(move |(i, s)| (i * self.record_every, s))
    }

    pub fn last(&self) -> &VortexState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Mean angular velocity of one vortex, from its unwrapped polar angle.
    pub fn mean_angular_velocity(&self, vortex: usize) -> f64 {
        let mut total = 0.0;
        for w in self.states.windows(2) {
            let a = w[0].positions[vortex];
            let b = w[1].positions[vortex];
            total += (b / a).arg();
        }
        let dt = self.last().time - self.states[0].time;
        total / dt
    }
}

/// Angular velocity `ω = (φκ/r²)[Ln_φ(1 - r²) - Ln_φ(1 - φ/r²)]` of a single
/// vortex at radius `r`.
pub fn single_vortex_omega(r: f64, kappa: f64) -> Result<f64> {
    if !(r > 1.0 && r < outer_radius()) {
        return Err(Error::Domain(format!("radius {r} is not inside (1, √φ)")));
    }
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let r2 = r * r;
    let a = ln_phi_one_minus(Complex64::new(r2, 0.0))?;
    let b = ln_phi_one_minus(Complex64::new(PHI / r2, 0.0))?;
    Ok(PHI * kappa / r2 * (a - b).re)
}

/// The zero of `ω(r)` in `(1, √φ)`, by bisection.
pub fn stationary_radius(tol: f64) -> Result<f64> {
    let f = |r: f64| single_vortex_omega(r, 1.0);
    let (mut lo, mut hi) = (1.0 + 1e-6, outer_radius() - 1e-6);
    let (mut flo, fhi) = (f(lo)?, f(hi)?);
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain("ω does not change sign across the annulus".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

struct Ladder {
    powers: Vec<f64>,
    trunc: usize,
}

impl Ladder {
    fn new(trunc: usize) -> Self {
        let powers = (-(trunc as i32)..=trunc as i32).map(|m| PHI.powi(m)).collect();
        Self { powers, trunc }
    }

    fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.powers
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - self.trunc as i64, p))
    }
}

fn check_positions(state: &VortexState, step: usize) -> Result<()> {
    for (i, z) in state.positions.iter().enumerate() {
        if !in_annulus(*z) {
            return Err(Error::Escape {
                step,
                vortex: i,
                radius: z.norm(),
            });
        }
    }
    for i in 0..state.len() {
        for j in i + 1..state.len() {
            let d = (state.positions[i] - state.positions[j]).norm();
            if d < COLLISION_DISTANCE {
                return Err(Error::Collision {
                    step,
                    first: i,
                    second: j,
                    distance: d,
                });
            }
        }
    }
    Ok(())
}

fn rhs_with(ladder: &Ladder, positions: &[Complex64], gammas: &[f64]) -> Vec<Complex64> {
    let factor = Complex64::new(0.0, TAU).inv();
    positions
        .iter()
        .enumerate()
        .map(|(l, &zl)| {
            let mut w = Complex64::new(0.0, 0.0);
            for (j, (&zj, &g)) in positions.iter().zip(gammas).enumerate() {
                if g == 0.0 {
                    continue;
                }
                let mirror = 1.0 / zj.conj();
                let mut s = 1.0 / zl;
                for (m, p) in ladder.iter() {
                    if m != 0 || j != l {
                        s += 1.0 / (zl - zj * p);
                    }
                    s -= 1.0 / (zl - mirror * p);
                }
                w += g * s;
            }
            (w * factor).conj()
        })
        .collect()
}

/// Velocities `ż_l` of all vortices, images summed for `|n| ≤ trunc`.
pub fn n_vortex_rhs(state: &VortexState, trunc: usize) -> Result<Vec<Complex64>> {
    check_positions(state, 0).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(rhs_with(&Ladder::new(trunc), &state.positions, &state.circulations))
}

/// Fixed-step RK4 integration. Fails on escape from the annulus or when two
/// vortices come within [`COLLISION_DISTANCE`]; the error carries the step.
pub fn integrate(state: &VortexState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    check_positions(state, 0)?;
    let ladder = Ladder::new(cfg.image_truncation);
    let gammas = &state.circulations;
    let f = |p: &[Complex64]| rhs_with(&ladder, p, gammas);

    let v0 = f(&state.positions);
    let vmax = v0.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut spacing = state
        .positions
        .iter()
        .map(|z| (z.norm() - 1.0).min(outer_radius() - z.norm()))
        .fold(f64::INFINITY, f64::min);
    for i in 0..state.len() {
        for j in i + 1..state.len() {
            spacing = spacing.min((state.positions[i] - state.positions[j]).norm());
        }
    }
    if cfg.check_step && cfg.dt * vmax > 0.1 * spacing {
        return Err(Error::Config(format!(
            "time step too large: dt·max|v| = {} exceeds a tenth of the smallest spacing {}",
            cfg.dt * vmax,
            spacing
        )));
    }

    let dt = cfg.dt;
    let mut current = state.clone();
    let mut states = vec![current.clone()];
    let add = |p: &[Complex64], k: &[Complex64], h: f64| -> Vec<Complex64> {
        p.iter().zip(k).map(|(z, v)| z + v * h).collect()
    };
    for step in 1..=cfg.steps {
        let p = &current.positions;
        let k1 = f(p);
        let k2 = f(&add(p, &k1, 0.5 * dt));
        let k3 = f(&add(p, &k2, 0.5 * dt));
        let k4 = f(&add(p, &k3, dt));
        let next: Vec<Complex64> = (0..p.len())
            .map(|i| p[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0))
            .collect();
        current = VortexState {
            positions: next,
            circulations: current.circulations.clone(),
            time: state.time + step as f64 * dt,
        };
        check_positions(&current, step)?;
        if step % cfg.record_every == 0 {
            states.push(current.clone());
        }
    }
    Ok(Trajectory {
        states,
        record_every: cfg.record_every,
    })
}

// ln |e_φ(-φz/w) e_φ(-φw/z) / (e_φ(-φ z w̄) e_φ(-φ²/(z w̄)))|
fn image_log(z: Complex64, w: Complex64) -> Result<f64> {
    let t = SeriesTruncation::default();
    let zw = z * w.conj();
    Ok(ln_abs_e_phi(-PHI * z / w, &t)? + ln_abs_e_phi(-PHI * w / z, &t)?
        - ln_abs_e_phi(-PHI * zw, &t)?
        - ln_abs_e_phi(-PHI * PHI / zw, &t)?)
}

/// Kirchhoff–Routh function of the vortex system.
pub fn hamiltonian(state: &VortexState) -> Result<f64> {
    check_positions(state, 0).map_err(|e| Error::Domain(e.to_string()))?;
    let (z, g) = (&state.positions, &state.circulations);
    let mut h = 0.0;
    for i in 0..z.len() {
        for j in 0..z.len() {
            let gg = g[i] * g[j];
            if gg == 0.0 {
                continue;
            }
            if i != j {
                h -= gg * (z[i] - z[j]).norm().ln();
            }
            h -= gg * image_log(z[i], z[j])?;
        }
    }
    Ok(h / (4.0 * PI))
}

/// Green function of the annulus with pole at `z_l`: zero on `|z| = √φ` and
/// `(1/2π) ln(√φ/|z_l|)` on `|z| = 1`.
pub fn green_function(z: Complex64, zl: Complex64) -> Result<f64> {
    let tol = 1e-12;
    for p in [z, zl] {
        let r = p.norm();
        if r < 1.0 - tol || r > outer_radius() + tol {
            return Err(Error::Domain(format!("{p} is outside the closed annulus")));
        }
    }
    let d = (z - zl).norm();
    if d < 1e-12 {
        return Err(Error::NearSingularity {
            point: z.to_string(),
            singularity: format!("source at {zl}"),
            distance: d,
        });
    }
    Ok(-(d.ln() + image_log(z, zl)?) / TAU + LN_PHI / (4.0 * PI))
}

/// Rotation frequency of `N` identical vortices of circulation `Γ` on a ring
/// of radius `r`.
pub fn ring_frequency(n: usize, r: f64, gamma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("a ring needs at least one vortex".into()));
    }
    if !(r > 1.0 && r < outer_radius()) {
        return Err(Error::Domain(format!("radius {r} is not inside (1, √φ)")));
    }
    let r2 = r * r;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..=n {
        let e = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
        sum += ln_phi_one_minus(PHI / r2 * e)? - ln_phi_one_minus(r2 * e.conj())?;
    }
    Ok(gamma / (TAU * r2) * ((n as f64 - 1.0) / 2.0 + PHI * sum.re))
}

/// Bohr–Sommerfeld level `E_n = (Γ²/4π) ln|e_φ(-φ(n+½)) e_φ(-φ²/(n+½))|`.
pub fn semiclassical_energy(n: usize, gamma: f64) -> Result<f64> {
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let t = SeriesTruncation::default();
    let h = n as f64 + 0.5;
    let l = ln_abs_e_phi(Complex64::new(-PHI * h, 0.0), &t)?
        + ln_abs_e_phi(Complex64::new(-PHI * PHI / h, 0.0), &t)?;
    Ok(gamma * gamma / (4.0 * PI) * l)
}
