//! Benchmarks for the `goldcalc` crate; see `benches/golden.rs`.
//!
//! Fixed inputs shared by the benchmark groups live here so they can be
//! reused from other harnesses.

use goldcalc::{Complex64, PHI};

/// Probe points spread over the annulus `1 < |z| < √φ`.
pub fn annulus_probes(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let r = 1.0 + (PHI.sqrt() - 1.0) * (i as f64 + 0.5) / n as f64;
            Complex64::from_polar(r, 2.399_963 * i as f64)
        })
        .collect()
}
