//! Calculus of Fibonacci divisors and its application to planar flows in
//! golden annular domains.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`] exact arithmetic in `Z[φ]`, Fibonacci/Lucas numbers and the
//!   Fibonacci divisors `F_n^(k) = F_{kn} / F_k`;
//! * [`combinatorics`] fibonorials, fibonomials and golden binomials;
//! * [`operators`] golden derivatives, translation and periodicity tests;
//! * [`functions`] golden exponentials, φ-exponentials, φ-logarithms and
//!   golden analytic functions;
//! * [`hydro`] method-of-images flows in the annulus `1 < |z| < φ^(k/2)`;
//! * [`dynamics`] point-vortex motion in the annulus `1 < |z| < √φ`;
//! * [`io`] CSV/JSON formats and [`verify`] the invariant suites run by the CLI.
//!
//! The representation of golden-periodic potentials as elliptic functions on
//! the golden torus is not implemented; potentials here are always built from
//! explicit image sums or φ-exponential products.

pub mod combinatorics;
pub mod dynamics;
pub mod error;
pub mod functions;
pub mod hydro;
pub mod io;
pub mod operators;
pub mod ring;
pub mod verify;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;

pub use combinatorics::{fibonomial, fibonorial, golden_binomial, BinaryForm, GoldenBinomial};
pub use dynamics::{IntegratorConfig, Trajectory, VortexState};
pub use error::{Error, Result};
pub use functions::{ExpVariant, GoldenAnalyticFunction, LnForm, SeriesTruncation, TrigPart};
pub use hydro::{AnnulusSpec, FlowGrid, FlowSample, ImageSystem, PointVortex};
pub use operators::{Polynomial, ScalarField1D};
pub use ring::{fib_divisor, fibonacci, golden_pow, lucas, GoldenExact};

/// Complex numbers are used for positions, potentials and velocities.
pub type ComplexPoint = Complex64;

/// The golden ratio `(1 + √5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;

/// `ln φ`.
pub const LN_PHI: f64 = 0.481_211_825_059_603_45;

/// `√5`.
pub const SQRT5: f64 = 2.236_067_977_499_79;
