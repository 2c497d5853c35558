//! `goldcalc`: Fibonacci-divisor calculus and golden-annulus flows from the
//! command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 collision or escape
//! during a simulation, 3 verification failure.

mod parse;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use goldcalc::combinatorics::{fibonomial, fibonorial, golden_binomial};
use goldcalc::dynamics::{
    green_function, integrate, kappa_from_gamma, ring_frequency, semiclassical_energy,
    single_vortex_omega, IntegratorConfig,
};
use goldcalc::functions::{
    e_phi, e_phi_product, golden_exp, golden_trig, ln_phi, phi_number, E_phi,
};
use goldcalc::hydro::{field_grid, pure_golden_flow, wm_fractal, wm_modulation, AnnulusSpec, ImageSystem};
use goldcalc::io::{initial_state, read_initial_conditions, save_grid, write_trajectory_csv};
use goldcalc::ring::FibDivisors;
use goldcalc::verify::{boundary_psi_std, run_suite, Suite, VerifyOptions};
use goldcalc::{Error, ExpVariant, LnForm, SeriesTruncation, TrigPart};

const EXIT_USAGE: u8 = 1;
const EXIT_PHYSICS: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "goldcalc", version, about = "Golden calculus, φ-special functions and vortex flows in golden annuli")]
struct Cli {
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0x601d)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Fibonacci divisors F_1^(k) .. F_n^(k), one per line.
    Seq {
        #[arg(long, value_parser = parse::level)]
        k: i64,
        #[arg(long = "n-max", value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
    },
    /// Evaluate a function.
    Eval {
        #[command(subcommand)]
        function: EvalCmd,
    },
    /// Sample ψ and (u, v) of a vortex in the annulus on a grid; write CSV or JSON.
    Field {
        /// Vortex position, e.g. 1.2+0.1i.
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z0: Complex64,
        /// Circulation Γ.
        #[arg(long, value_parser = parse::finite, allow_hyphen_values = true)]
        gamma: f64,
        /// Annulus level: 1 < |z| < φ^(k/2).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Images summed for |n| ≤ trunc.
        #[arg(long, default_value_t = 80)]
        trunc: usize,
        /// Resolution WxH.
        #[arg(long, value_parser = parse::grid, default_value = "100x100")]
        grid: (usize, usize),
        /// Output path; a .json extension selects JSON, anything else CSV.
        #[arg(long)]
        out: PathBuf,
        /// Radius of the disks removed around images.
        #[arg(long, default_value_t = 1e-9, value_parser = parse::positive)]
        eps: f64,
        /// Circulation around the inner cylinder.
        #[arg(long, default_value_t = 0.0, value_parser = parse::finite, allow_hyphen_values = true)]
        inner_circulation: f64,
    },
    /// Integrate N point vortices in 1 < |z| < √φ with RK4; write a trajectory CSV.
    Simulate {
        /// JSON array of {"x", "y", "gamma"}.
        #[arg(long)]
        init: PathBuf,
        /// Time step.
        #[arg(long, default_value_t = 1e-3, value_parser = parse::positive)]
        dt: f64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        /// Images summed per vortex.
        #[arg(long, default_value_t = 100)]
        trunc: usize,
        /// Write every n-th step.
        #[arg(long = "record-every", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        record_every: u64,
        /// Trajectory CSV: step,t,vortex_index,x,y.
        #[arg(long)]
        out: PathBuf,
        /// Skip the initial step-size check.
        #[arg(long = "no-step-check")]
        no_step_check: bool,
    },
    /// Run an invariant suite; exit 3 if any check fails.
    Verify {
        /// ring, calculus, functions, hydro, dynamics or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Multiplier applied to every tolerance.
        #[arg(long = "tol-scale", default_value_t = 1.0, value_parser = parse::positive)]
        tol_scale: f64,
    },
}

#[derive(Subcommand, Debug)]
enum EvalCmd {
    /// Golden exponential e_F or E_F.
    Exp {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        x: Complex64,
        #[arg(long, default_value_t = 1, value_parser = parse::level, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = Variant::Small)]
        variant: Variant,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// cos_F or sin_F.
    Trig {
        #[arg(long, value_parser = parse::finite, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1, value_parser = parse::level, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_enum)]
        part: Part,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// φ-number [n]_{φ^k} as a + bφ.
    PhiNumber {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 1, value_parser = parse::level, allow_hyphen_values = true)]
        k: i64,
    },
    /// Fibonorial F_n^(k)!.
    Fibonorial {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1, value_parser = parse::level, allow_hyphen_values = true)]
        k: i64,
    },
    /// Fibonomial coefficient.
    Fibonomial {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1, value_parser = parse::level, allow_hyphen_values = true)]
        k: i64,
    },
    /// Coefficients of the golden binomial (x + y)^n_F, highest power of x first.
    Binomial {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1, value_parser = parse::level, allow_hyphen_values = true)]
        k: i64,
    },
    /// e_φ(z), E_φ(z) or the Euler product for e_φ.
    EPhi {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_enum, default_value_t = PhiExp::Series)]
        form: PhiExp,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Ln_{φ^k}(1 + z).
    LnPhi {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, value_enum, default_value_t = LnKind::Pole)]
        form: LnKind,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Pure golden-periodic flow z^(2πi/ln φ): F, ψ and V̄.
    PureFlow {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Weierstrass–Mandelbrot function W(t) and modulation A_φ(t).
    Wm {
        #[arg(long, value_parser = parse::positive)]
        t: f64,
        #[arg(long, value_parser = parse::positive)]
        d: f64,
        #[arg(long, default_value_t = 60)]
        trunc: usize,
    },
    /// Angular velocity of a single vortex at radius r (circulation Γ).
    Omega {
        #[arg(long, value_parser = parse::positive)]
        r: f64,
        #[arg(long, value_parser = parse::finite, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Rotation frequency of a ring of N identical vortices.
    Ring {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = parse::positive)]
        r: f64,
        #[arg(long, value_parser = parse::finite, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Green function G(z, z_l) of the annulus 1 < |z| < √φ.
    Green {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        zl: Complex64,
    },
    /// Semiclassical levels E_0 .. E_n.
    Energy {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse::finite, allow_hyphen_values = true)]
        gamma: f64,
    },
}

#[derive(clap::Args, Debug)]
struct SeriesArgs {
    /// Maximum number of series terms.
    #[arg(long = "max-terms", default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
    max_terms: u64,
    /// Stop once a term falls below this modulus.
    #[arg(long = "tail-tol", default_value_t = 1e-18)]
    tail_tol: f64,
}

impl SeriesArgs {
    fn truncation(&self) -> goldcalc::Result<SeriesTruncation> {
        SeriesTruncation::new(self.max_terms as usize, self.tail_tol)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    #[value(name = "e")]
    Small,
    #[value(name = "E")]
    Big,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Part {
    Cos,
    Sin,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhiExp {
    Series,
    Big,
    Product,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LnKind {
    Series,
    Pole,
}

enum Failure {
    Usage(anyhow::Error),
    Physics(anyhow::Error),
    Verify(usize),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let physics = matches!(
            e.downcast_ref::<Error>(),
            Some(Error::Escape { .. } | Error::Collision { .. })
        );
        if physics {
            Failure::Physics(e)
        } else {
            Failure::Usage(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Physics(e)) => {
            eprintln!("simulation stopped: {e:#}");
            ExitCode::from(EXIT_PHYSICS)
        }
        Err(Failure::Verify(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("GOLDCALC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .with_context(|| format!("GOLDCALC_THREADS must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Seq { k, n_max } => {
            let out = std::io::stdout();
            let mut out = out.lock();
            for f in FibDivisors::new(k)?.skip(1).take(n_max as usize) {
                writeln!(out, "{f}").map_err(|e| Failure::Usage(e.into()))?;
            }
            Ok(())
        }
        Command::Eval { function } => eval(function),
        Command::Field {
            z0,
            gamma,
            k,
            trunc,
            grid,
            out,
            eps,
            inner_circulation,
        } => {
            let annulus = AnnulusSpec::new(k, trunc)?;
            let sys = ImageSystem::single(annulus, z0, gamma)?
                .with_inner_circulation(inner_circulation)
                .with_exclusion(eps)?;
            let g = field_grid(&sys, grid.0, grid.1, eps)?;
            save_grid(&g, &out).with_context(|| format!("writing {}", out.display()))?;
            let (lo, hi) = g.psi_range().unwrap_or((0.0, 0.0));
            println!(
                "wrote {} samples to {}; psi in [{lo:.6e}, {hi:.6e}]",
                g.samples.len(),
                out.display()
            );
            let inner = boundary_psi_std(&sys, annulus.inner_radius())?;
            let outer = boundary_psi_std(&sys, annulus.outer_radius())?;
            println!("boundary psi std-dev: inner {inner:.3e}, outer {outer:.3e}");
            Ok(())
        }
        Command::Simulate {
            init,
            dt,
            steps,
            trunc,
            record_every,
            out,
            no_step_check,
        } => {
            let cfg = IntegratorConfig {
                dt,
                steps: steps as usize,
                image_truncation: trunc,
                record_every: record_every as usize,
                check_step: !no_step_check,
                ..IntegratorConfig::default()
            };
            simulate(init, cfg, out)
        }
        Command::Verify { suite, tol_scale } => {
            let suite: Suite = suite.parse()?;
            let results = run_suite(suite, VerifyOptions { seed: cli.seed, tol_scale });
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(Failure::Verify(failed));
            }
            println!("all {} checks passed", results.len());
            Ok(())
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn eval(cmd: EvalCmd) -> Result<(), Failure> {
    match cmd {
        EvalCmd::Exp { x, k, variant, series } => {
            let v = match variant {
                Variant::Small => ExpVariant::Small,
                Variant::Big => ExpVariant::Big,
            };
            println!("{}", fmt_c(golden_exp(x, k, v, &series.truncation()?)?));
        }
        EvalCmd::Trig { x, k, part, series } => {
            let p = match part {
                Part::Cos => TrigPart::Cos,
                Part::Sin => TrigPart::Sin,
            };
            println!("{}", golden_trig(x, k, p, &series.truncation()?)?);
        }
        EvalCmd::PhiNumber { n, k } => println!("{}", phi_number(n as usize, k)?),
        EvalCmd::Fibonorial { n, k } => println!("{}", fibonorial(n, k)?),
        EvalCmd::Fibonomial { n, m, k } => println!("{}", fibonomial(n, m, k)?),
        EvalCmd::Binomial { n, k } => {
            let b = golden_binomial(n, k)?;
            let coeffs: Vec<String> = b.coeffs().iter().map(|c| c.a().to_string()).collect();
            println!("{}", coeffs.join(" "));
        }
        EvalCmd::EPhi { z, form, series } => {
            let t = series.truncation()?;
            let v = match form {
                PhiExp::Series => e_phi(z, &t)?,
                PhiExp::Big => E_phi(z, &t)?,
                PhiExp::Product => e_phi_product(z, &t)?,
            };
            println!("{}", fmt_c(v));
        }
        EvalCmd::LnPhi { z, k, form, series } => {
            let f = match form {
                LnKind::Series => LnForm::Series,
                LnKind::Pole => LnForm::PoleSum,
            };
            println!("{}", fmt_c(ln_phi(z, k, f, &series.truncation()?)?));
        }
        EvalCmd::PureFlow { z } => {
            let (f, psi, v) = pure_golden_flow(z)?;
            println!("F = {}\npsi = {psi}\nV = {}", fmt_c(f), fmt_c(v));
        }
        EvalCmd::Wm { t, d, trunc } => {
            println!("W = {}", wm_fractal(t, d, trunc)?);
            println!("A = {}", fmt_c(wm_modulation(t, d, trunc)?));
        }
        EvalCmd::Omega { r, gamma } => println!("{}", single_vortex_omega(r, kappa_from_gamma(gamma))?),
        EvalCmd::Ring { n, r, gamma } => println!("{}", ring_frequency(n as usize, r, gamma)?),
        EvalCmd::Green { z, zl } => println!("{}", green_function(z, zl)?),
        EvalCmd::Energy { n, gamma } => {
            for i in 0..=n {
                println!("{i} {}", semiclassical_energy(i, gamma)?);
            }
        }
    }
    Ok(())
}

fn simulate(init: PathBuf, cfg: IntegratorConfig, out: PathBuf) -> Result<(), Failure> {
    let file = File::open(&init).with_context(|| format!("opening {}", init.display()))?;
    let ic = read_initial_conditions(BufReader::new(file))
        .with_context(|| format!("parsing {}", init.display()))?;
    if ic.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!("{} lists no vortices", init.display())));
    }
    let state = initial_state(&ic)?;
    let traj = integrate(&state, &cfg).map_err(anyhow::Error::new)?;
    let w = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = BufWriter::new(w);
    write_trajectory_csv(&traj, &mut w)?;
    w.flush().map_err(|e| Failure::Usage(e.into()))?;

    let last = traj.last();
    println!("wrote {} frames to {}", traj.states.len(), out.display());
    for (i, (z0, z1)) in state.positions.iter().zip(&last.positions).enumerate() {
        println!(
            "vortex {i}: {} -> {} (displacement {:.3e})",
            fmt_c(*z0),
            fmt_c(*z1),
            (z1 - z0).norm()
        );
    }
    let n = state.len();
    let r = state.positions[0].norm();
    let gamma = state.circulations[0];
    let is_ring = n > 1
        && state.circulations.iter().all(|&g| g == gamma)
        && state.positions.iter().all(|z| (z.norm() - r).abs() < 1e-12);
    if is_ring {
        let measured = traj.mean_angular_velocity(0);
        let formula = ring_frequency(n, r, gamma)?;
        let rel = ((measured - formula) / formula).abs();
        println!("ring of {n}: measured omega {measured:.9e}, formula {formula:.9e}, relative error {rel:.3e}");
    } else if n == 1 {
        let formula = single_vortex_omega(r, kappa_from_gamma(gamma))?;
        println!(
            "single vortex: measured omega {:.9e}, formula {formula:.9e}",
            traj.mean_angular_velocity(0)
        );
    }
    Ok(())
}
