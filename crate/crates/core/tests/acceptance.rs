//! End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero
//! exit if any fails.

use std::f64::consts::FRAC_PI_2;
use std::process::{Command, ExitCode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfisher::experiments::geodesic_check;
use qfisher::geometry::{action_from_samples, fisher_discrete, GeodesicEvaluator};
use qfisher::number::{gcd, is_prime, order_bruteforce, prime_power};
use qfisher::period::{
    build_register, factor, grover_period, shor_period, shor_project, ComparisonReport,
    FactorBudget, MeasurementStage, PeriodSettings, DEFAULT_MEMORY_CAP,
};
use qfisher::{
    run_grover, GroverInstance, Method, PathSample, PeriodInstance, ProbabilityPath, RecursionState,
};

const FISHER_SIZES: [usize; 4] = [4, 16, 256, 4096];
const FISHER_DPHI: f64 = 1e-3;
const FISHER_TOL: f64 = 1e-3;
const RESIDUAL_DPHIS: [f64; 3] = [0.01, 0.005, 0.0025];
const RESIDUAL_MAX_AT_COARSEST: f64 = 1e-2;
/// Smallest acceptable observed convergence order of the residual.
const RESIDUAL_MIN_ORDER: f64 = 1.8;
const INTEGRATOR_TOL: f64 = 1e-6;
const STATEVECTOR_MAX_EXP: u32 = 14;
const RECURSION_MAX_EXP: u32 = 20;
const AGREEMENT_TOL: f64 = 1e-10;
const ACTION_DPHI: f64 = 0.01;
const ACTION_FACTOR: f64 = 5.0;
const FACTOR_SEEDS: u64 = 200;
const FACTOR_MIN_RATE: f64 = 0.95;
const COMB_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-3;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// The simulated trajectory at the step points, filled in between with the
/// analytic path at spacing at most `dphi`.
fn refined_trajectory(inst: &GroverInstance, dphi: f64) -> Result<ProbabilityPath, String> {
    let steps = inst.optimal_iterations();
    let sim = run_grover(inst, steps, true).map_err(|e| e.to_string())?;
    let refined = inst.resample(steps, dphi, 1).map_err(|e| e.to_string())?;
    let mut samples: Vec<PathSample> = refined.path.samples().to_vec();
    for (j, &idx) in refined.step_indices.iter().enumerate() {
        let simulated = &sim.path.samples()[j];
        let gap = simulated
            .probabilities
            .iter()
            .zip(&samples[idx].probabilities)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if gap > AGREEMENT_TOL {
            return Err(format!(
                "N={} step {j}: simulation off the analytic path by {gap:e}",
                inst.n_items()
            ));
        }
        samples[idx] = simulated.clone();
    }
    ProbabilityPath::from_samples(samples).map_err(|e| e.to_string())
}

fn constant_fisher() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in FISHER_SIZES {
        let inst = GroverInstance::single(n).unwrap();
        let path = refined_trajectory(&inst, FISHER_DPHI)?;
        let fisher = fisher_discrete(&path).map_err(|e| e.to_string())?;
        for s in &fisher[1..fisher.len() - 1] {
            worst = worst.max((s.fisher - 4.0).abs());
        }
    }
    check(
        worst <= FISHER_TOL,
        format!("max |F - 4| = {worst:.3e} (tol {FISHER_TOL:e})"),
    )
}

fn geodesic_property() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in FISHER_SIZES {
        let inst = GroverInstance::single(n).unwrap();
        let mut maxima = Vec::new();
        let mut spacings = Vec::new();
        for dphi in RESIDUAL_DPHIS {
            let path = refined_trajectory(&inst, dphi)?;
            let phis = path.phis();
            spacings.push(phis[1] - phis[0]);
            let eval = GeodesicEvaluator::new(&path).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for i in 1..eval.len() - 1 {
                worst = worst.max(eval.max_residual(i).map_err(|e| e.to_string())?);
            }
            maxima.push(worst);
        }
        // the refined spacing is rounded to fit whole steps, so compare
        // against the spacing actually used
        let orders: Vec<f64> = (0..2)
            .map(|i| (maxima[i] / maxima[i + 1]).ln() / (spacings[i] / spacings[i + 1]).ln())
            .collect();
        ok &=
            maxima[0] < RESIDUAL_MAX_AT_COARSEST && orders.iter().all(|&p| p >= RESIDUAL_MIN_ORDER);

        let geo = geodesic_check(n, ACTION_DPHI, DEFAULT_MEMORY_CAP).map_err(|e| e.to_string())?;
        ok &= geo.integrator_vs_simulated_max_dev <= INTEGRATOR_TOL;
        notes.push(format!(
            "N={n}: residual {:.1e}, order {:.2}/{:.2}, integrator dev {:.1e}",
            maxima[0], orders[0], orders[1], geo.integrator_vs_simulated_max_dev
        ));
    }
    check(ok, notes.join("; "))
}

fn optimal_iterations() -> Outcome {
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    for k in 2..=RECURSION_MAX_EXP {
        let n = 1usize << k;
        let inst = GroverInstance::single(n).unwrap();
        let steps = inst.optimal_iterations();
        let mut rec = RecursionState::initial(n);
        for _ in 0..steps {
            rec = rec.next(n);
        }
        let success = rec.k * rec.k;
        let bound = 1.0 - 1.0 / n as f64;
        worst_margin = worst_margin.min(success - bound);
        ok &= success >= bound;
        if k <= STATEVECTOR_MAX_EXP {
            let sim = run_grover(&inst, steps, false).map_err(|e| e.to_string())?;
            ok &= (sim.marked_mass(&inst, steps) - success).abs() < AGREEMENT_TOL;
        }
    }
    let four = GroverInstance::single(4).unwrap();
    let exact = run_grover(&four, 1, false).unwrap().marked_mass(&four, 1);
    ok &= four.optimal_iterations() == 1 && (exact - 1.0).abs() < 1e-15;
    check(
        ok,
        format!("N = 2^2..2^{RECURSION_MAX_EXP}: min margin over 1 - 1/N = {worst_margin:.3e}; N=4 mass {exact}"),
    )
}

fn action_is_distance() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in FISHER_SIZES {
        let inst = GroverInstance::single(n).unwrap();
        let theta = inst.theta();
        let pieces = ((FRAC_PI_2 - theta) / ACTION_DPHI).ceil() as usize;
        let h = (FRAC_PI_2 - theta) / pieces as f64;
        let states: Vec<_> = (0..=pieces)
            .map(|i| {
                let phi = if i == pieces {
                    FRAC_PI_2
                } else {
                    theta + i as f64 * h
                };
                (phi, inst.analytic_state(phi))
            })
            .collect();
        let path = ProbabilityPath::from_states(states.iter().map(|(p, s)| (*p, s)), false)
            .map_err(|e| e.to_string())?;
        let fisher = fisher_discrete(&path).map_err(|e| e.to_string())?;
        let action = action_from_samples(&fisher, theta, FRAC_PI_2).map_err(|e| e.to_string())?;
        let distance = (1.0 / (n as f64).sqrt()).acos();
        let gap = (action - distance).abs();
        let tol = ACTION_FACTOR * h * h;
        ok &= gap <= tol;
        notes.push(format!("N={n}: gap {gap:.1e} (tol {tol:.1e})"));
    }
    check(ok, notes.join("; "))
}

fn period_finding() -> Outcome {
    let settings = PeriodSettings::default();
    let mut instances = 0;
    let mut mismatches = Vec::new();
    for n in (9..=50u64)
        .step_by(2)
        .filter(|&n| !is_prime(n) && prime_power(n).is_none())
    {
        for y in (2..n).filter(|&y| gcd(y, n) == 1) {
            instances += 1;
            let inst = PeriodInstance::new(n, y).unwrap();
            let r = order_bruteforce(y, n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n * 1000 + y);
            let shor = shor_period(&inst, &mut rng, &settings).map(|p| p.period);
            let grover = grover_period(&inst, &mut rng, &settings).map(|p| p.period);
            if shor.as_ref().ok() != Some(&r) || grover.as_ref().ok() != Some(&r) {
                mismatches.push(format!("({n},{y})"));
            }
        }
    }
    let mut notes = vec![format!(
        "{instances} (N, y) pairs, {} mismatches",
        mismatches.len()
    )];
    let mut ok = mismatches.is_empty();
    for (n, expected) in [(15u64, [3u64, 5]), (21, [3, 7]), (33, [3, 11])] {
        for method in [Method::Shor, Method::GroverAdiabatic] {
            let hits = (0..FACTOR_SEEDS)
                .filter(|&seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    factor(n, method, &mut rng, &FactorBudget::default())
                        .map(|f| f.factors == expected)
                        .unwrap_or(false)
                })
                .count();
            let rate = hits as f64 / FACTOR_SEEDS as f64;
            ok &= rate >= FACTOR_MIN_RATE;
            notes.push(format!("{n} {method}: {hits}/{FACTOR_SEEDS}"));
        }
    }
    check(ok, notes.join("; "))
}

fn comb_structure() -> Outcome {
    let inst = PeriodInstance::new(15, 2).unwrap();
    let register = build_register(&inst, DEFAULT_MEMORY_CAP).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut seen = Vec::new();
    for seed in 0..32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, collapsed) = shor_project(&register, &mut rng).map_err(|e| e.to_string())?;
        seen.push(l);
        let amps = collapsed.amplitudes();
        let support: Vec<usize> = (0..256)
            .filter(|&a| amps[a * 15 + l as usize].norm() > 0.0)
            .collect();
        ok &= support.len() == 64 && support.windows(2).all(|w| w[1] - w[0] == 4);
        ok &= support
            .iter()
            .all(|&a| (amps[a * 15 + l as usize].norm() - 0.125).abs() < COMB_TOL);
    }
    seen.sort_unstable();
    seen.dedup();
    check(
        ok,
        format!("difference 4, amplitude 1/8 within {COMB_TOL:e}; l values seen {seen:?}"),
    )
}

fn run_cli(args: &[&str]) -> Result<(Option<i32>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qfisher"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code(), out.stdout))
}

fn comparison_report() -> Outcome {
    let (code, stdout) = run_cli(&["compare", "15", "2", "--seed", "2024"])?;
    let report: ComparisonReport = serde_json::from_slice(&stdout).map_err(|e| e.to_string())?;
    let spread = report
        .fisher_trace
        .iter()
        .map(|p| (p.fisher - 4.0).abs())
        .fold(0.0f64, f64::max);
    let shor = report.method(Method::Shor).ok_or("missing shor branch")?;
    let grover = report
        .method(Method::GroverAdiabatic)
        .ok_or("missing loop branch")?;
    let shor_per_attempt = (1..=shor.counters.attempts).all(|a| {
        shor.measurement_events
            .iter()
            .filter(|e| e.attempt == a)
            .count()
            >= 2
    });
    let grover_only_eta = grover
        .measurement_events
        .iter()
        .all(|e| e.stage == MeasurementStage::EtaSample);
    let ok = code == Some(0)
        && !report.fisher_trace.is_empty()
        && spread <= TRACE_TOL
        && shor_per_attempt
        && shor.counters.measurements >= 2 * shor.counters.attempts
        && grover_only_eta
        && grover.counters.measurements == grover.measurement_events.len() as u64
        && report.methods.iter().all(|m| m.period == Some(4));
    check(
        ok,
        format!(
            "fisher spread {spread:.1e} over {} points; shor {} measurements / {} attempts; loop {} samples",
            report.fisher_trace.len(),
            shor.counters.measurements,
            shor.counters.attempts,
            grover.counters.measurements
        ),
    )
}

fn determinism() -> Outcome {
    let matrix: &[&[&str]] = &[
        &["grover-trace", "4", "--marked", "0", "--steps", "1"],
        &[
            "grover-trace",
            "64",
            "--marked",
            "0",
            "--steps",
            "6",
            "--format",
            "json",
        ],
        &[
            "grover-trace",
            "100",
            "--marked",
            "7,8,9",
            "--steps",
            "5",
            "--dphi",
            "0.003",
        ],
        &["geodesic-check", "4"],
        &["geodesic-check", "1024", "--format", "csv"],
        &["factor", "15", "--method", "shor", "--seed", "7"],
        &[
            "factor",
            "15",
            "--method",
            "grover-adiabatic",
            "--seed",
            "7",
        ],
        &["factor", "35", "--method", "shor", "--seed", "99"],
        &[
            "factor",
            "39",
            "--method",
            "grover-adiabatic",
            "--seed",
            "99",
        ],
        &[
            "factor", "15", "--method", "shor", "--seed", "1", "--budget", "0",
        ],
        &["compare", "15", "2", "--seed", "7"],
        &["compare", "21", "2", "--seed", "7"],
        &["compare", "33", "5", "--seed", "0", "--samples", "4"],
        &["compare", "15", "2", "--seed", "7", "--budget", "0"],
    ];
    let mut differing = Vec::new();
    for args in matrix {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        if first != second || first.1.is_empty() {
            differing.push(args.join(" "));
        }
    }
    check(
        differing.is_empty(),
        format!("{} commands re-run, differing: {differing:?}", matrix.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("constant Fisher information", constant_fisher),
        ("geodesic residual and integrator", geodesic_property),
        ("optimal iteration count", optimal_iterations),
        ("action equals Fubini-Study distance", action_is_distance),
        ("period finding and factoring", period_finding),
        ("projected comb structure", comb_structure),
        ("comparison report", comparison_report),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
