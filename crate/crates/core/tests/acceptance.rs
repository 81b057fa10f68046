//! One line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the table.

use std::time::{Duration, Instant};

use anyon_lab::decoder::{
    decode, fit_log_slope, run_monte_carlo, trial_fails, wilson_halfwidth, write_csv, Matching, MonteCarloConfig,
    NoiseKind, TrialRecord,
};
use anyon_lab::double::{double_irreps, DoubleTensors, VerifyMode};
use anyon_lab::group::FiniteGroup;
use anyon_lab::lattice::{identities_suite, ribbon_suite, GenericLattice, LatticeModel};
use anyon_lab::toric::{min_logical_weight, DistanceSearch, PauliOperator, TorusCode};
use anyon_lab::vm::{cross_check_oracle, run_program, run_shots, Program, VmGroup, VmState};

/// Residual allowed in the state-vector identities.
const RIBBON_TOLERANCE: f64 = 1e-10;
/// Numerical rank cutoff for ground spaces.
const RANK_TOLERANCE: f64 = 1e-9;
/// Sampled trivial-charge rate of a definite S5 transposition pair.
const CHARGE_RATE_WINDOW: f64 = 0.01;
/// Window around 3/4 for the sampled p = 0.5 failure rate.
const HALF_NOISE_WINDOW: f64 = 0.02;
/// Agreement of the VM with the topological-operator oracle.
const ORACLE_TOLERANCE: f64 = 1e-12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn mc(ks: Vec<usize>, p: f64, trials: u64, seed: u64, threads: Option<usize>) -> Vec<TrialRecord> {
    run_monte_carlo(&MonteCarloConfig {
        ks,
        ps: vec![p],
        trials,
        seed,
        kind: NoiseKind::IndependentXz,
        matching: Matching::Blossom,
        threads,
    })
    .unwrap()
}

fn csv_bytes(records: &[TrialRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).unwrap();
    buf
}

fn code_parameters() -> Outcome {
    let bad: Vec<usize> = (2..=8)
        .filter(|&k| {
            let p = TorusCode::new(k).unwrap().parameters();
            !(p.n == 2 * k * k && p.independent_checks == 2 * k * k - 2 && p.logical_dim() == 4)
        })
        .collect();
    outcome(bad.is_empty(), format!("k = 2..8, mismatches at {bad:?}"))
}

fn distance() -> Outcome {
    let found: Vec<(usize, Option<usize>)> = [(2, DistanceSearch::Full), (3, DistanceSearch::Full), (4, DistanceSearch::SectorSplit)]
        .into_iter()
        .map(|(k, search)| (k, min_logical_weight(&TorusCode::new(k).unwrap(), search, k)))
        .collect();
    let ok = found.iter().all(|&(k, d)| d == Some(k));
    outcome(ok, format!("(k, min logical weight) = {found:?}"))
}

fn anyon_phase() -> Outcome {
    let phases: Vec<i32> = (2..=8).map(|k| TorusCode::new(k).unwrap().loop_exchange_phase()).collect();
    outcome(phases.iter().all(|&w| w == -1), format!("W for k = 2..8: {phases:?}"))
}

/// Consecutive rates strictly decrease, each gap exceeding three combined
/// Wilson half-widths.
fn separated(fails: &[u64], trials: u64) -> bool {
    fails.windows(2).all(|w| {
        let (a, b) = (w[0] as f64 / trials as f64, w[1] as f64 / trials as f64);
        let sigma = wilson_halfwidth(w[0], trials).hypot(wilson_halfwidth(w[1], trials));
        a - b > 3.0 * sigma
    })
}

fn decoder_scaling() -> Outcome {
    let trials = 20_000;
    let recs = mc(vec![3, 5, 7, 9], 0.05, trials, 42, None);
    let fx: Vec<u64> = recs.iter().map(|r| r.fail_x).collect();
    let fz: Vec<u64> = recs.iter().map(|r| r.fail_z).collect();
    let slope = |f: &dyn Fn(&TrialRecord) -> f64| fit_log_slope(&recs.iter().map(|r| (r.k, f(r))).collect::<Vec<_>>());
    let (sx, sz) = (slope(&|r| r.rate_x()), slope(&|r| r.rate_z()));
    let ok = separated(&fx, trials)
        && separated(&fz, trials)
        && sx.is_some_and(|s| s < 0.0)
        && sz.is_some_and(|s| s < 0.0);
    outcome(
        ok,
        format!(
            "fail_x {fx:?}, fail_z {fz:?} of {trials}; slopes {:.3}, {:.3}",
            sx.unwrap_or(f64::NAN),
            sz.unwrap_or(f64::NAN)
        ),
    )
}

/// Every X-only and every Z-only pattern at k = 2, decoded.
fn exhaustive_half_noise_k2() -> (u64, u64, u64) {
    let code = TorusCode::new(2).unwrap();
    let n = code.num_qubits();
    let (mut fx, mut fz) = (0, 0);
    for mask in 0u32..1 << n {
        let qubits = (0..n).filter(|q| mask >> q & 1 == 1);
        let ex = PauliOperator::x_on(n, qubits.clone());
        let ez = PauliOperator::z_on(n, qubits);
        for (e, fail) in [(ex, &mut fx), (ez, &mut fz)] {
            let c = decode(&code, &code.syndrome(&e).unwrap(), Matching::Blossom).unwrap();
            let t = trial_fails(&code, &e, &c).unwrap();
            *fail += u64::from(t.fail_x || t.fail_z);
        }
    }
    (fx, fz, 1 << n)
}

fn decoder_half_noise() -> Outcome {
    let trials = 20_000;
    let r = &mc(vec![5], 0.5, trials, 7, None)[0];
    let (rx, rz) = (r.rate_x(), r.rate_z());
    let (ex, ez, total) = exhaustive_half_noise_k2();
    let ok = (rx - 0.75).abs() <= HALF_NOISE_WINDOW
        && (rz - 0.75).abs() <= HALF_NOISE_WINDOW
        && 4 * ex == 3 * total
        && 4 * ez == 3 * total;
    outcome(ok, format!("k=5 sampled x {rx:.4}, z {rz:.4}; k=2 exhaustive x {ex}/{total}, z {ez}/{total}"))
}

fn hopf() -> Outcome {
    let mut failed = Vec::new();
    let mut count = 0;
    for name in ["Z2", "Z3", "Z4", "S3", "D4"] {
        let t = DoubleTensors::build(&FiniteGroup::builtin(name).unwrap());
        for r in t.verify_axioms(VerifyMode::Exhaustive) {
            count += 1;
            if !r.passed || r.residual != 0.0 {
                failed.push(format!("{name}:{}", r.id));
            }
        }
    }
    outcome(failed.is_empty(), format!("{count} exhaustive reports over Z2, Z3, Z4, S3, D4; failed {failed:?}"))
}

fn s3_irreps() -> Outcome {
    let labels = double_irreps(&FiniteGroup::builtin("S3").unwrap()).unwrap();
    let mut dims: Vec<usize> = labels.iter().map(|l| l.dim).collect();
    dims.sort_unstable();
    let sum: usize = dims.iter().map(|d| d * d).sum();
    outcome(dims == [1, 1, 2, 2, 2, 2, 3, 3] && sum == 36, format!("dims {dims:?}, sum of squares {sum}"))
}

fn ground_dimension(group: &str, lattice: &str) -> usize {
    let m = LatticeModel::new(FiniteGroup::builtin(group).unwrap(), GenericLattice::parse(lattice).unwrap()).unwrap();
    m.ground_space(RANK_TOLERANCE).len()
}

fn ground_spaces() -> Outcome {
    let dims = [
        ground_dimension("Z2", "torus:2x2"),
        ground_dimension("Z2", "tetrahedron"),
        ground_dimension("S3", "torus:2x1"),
    ];
    let irreps = double_irreps(&FiniteGroup::builtin("S3").unwrap()).unwrap().len();
    outcome(dims == [4, 1, irreps], format!("Z2 torus 2x2, Z2 tetrahedron, S3 torus 2x1: {dims:?}; D(S3) irreps {irreps}"))
}

fn ribbons() -> Outcome {
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (group, lattice) in [("Z2", "torus:3x3"), ("S3", "tetrahedron")] {
        let m = LatticeModel::new(FiniteGroup::builtin(group).unwrap(), GenericLattice::parse(lattice).unwrap()).unwrap();
        for r in ribbon_suite(&m).into_iter().chain(identities_suite(&m)) {
            count += 1;
            // the raw-operator control is expected to differ; its pass flag
            // already encodes that
            if !r.name.contains("differs") {
                worst = worst.max(r.residual);
            }
            if !r.passed {
                failed.push(r.name);
            }
        }
    }
    outcome(
        failed.is_empty() && worst <= RIBBON_TOLERANCE,
        format!("{count} checks on Z2 torus 3x3 and S3 tetrahedron, max residual {worst:.1e}; failed {failed:?}"),
    )
}

const DEFINITE_FUSION: &str = "CREATEREF (1 2)\nFUSECHARGE 1\n";
const PULL_EXAMPLE: &str = "CREATEREF (1 2)\nCREATEREF (2 3)\nPULL 1 2\nMEASV 1\n";

fn vm() -> Outcome {
    let s5 = FiniteGroup::builtin("S5").unwrap();
    let data = VmGroup::new(&s5).unwrap();

    let mut fresh = VmState::new(data.clone());
    let pair = fresh.create_in_class_of(s5.parse_element("(1 2)").unwrap()).unwrap();
    let q = fresh.charge_distribution(pair).unwrap();
    let a = (q[0] - 1.0).abs() < 1e-12;

    let shots = 10_000;
    let summary = run_shots(&Program::parse(DEFINITE_FUSION, &s5).unwrap(), &data, 2024, shots, None).unwrap();
    let trivial = summary.histogram.get("FUSECHARGE 1 = trivial").copied().unwrap_or(0);
    let rate = trivial as f64 / shots as f64;
    let b = (rate - 0.1).abs() <= CHARGE_RATE_WINDOW;

    let pull = Program::parse(PULL_EXAMPLE, &s5).unwrap();
    let c = (0..20).all(|seed| {
        let log = run_program(&pull, &data, seed).unwrap().log;
        log.len() == 1 && data.describe(&log[0]) == "MEASV 1 = (1 3)"
    });

    let report = cross_check_oracle(&FiniteGroup::builtin("S3").unwrap(), 20, 1).unwrap();
    let d = report.scenarios == 20 && report.passed(ORACLE_TOLERANCE);

    outcome(
        a && b && c && d,
        format!(
            "(a) P(trivial) = {:.12} (b) rate {rate:.4} over {shots} (c) {} (d) {} scenarios, {} instructions, residual {:.1e}, mismatches {}",
            q[0],
            if c { "(1 3) in 20/20 seeds" } else { "FAILED" },
            report.scenarios,
            report.instructions,
            report.max_residual,
            report.outcome_mismatches
        ),
    )
}

fn determinism() -> Outcome {
    let scaling = |t| csv_bytes(&mc(vec![3, 5, 7, 9], 0.05, 20_000, 42, Some(t)));
    let half = |t| csv_bytes(&mc(vec![5], 0.5, 20_000, 7, Some(t)));
    let s5 = FiniteGroup::builtin("S5").unwrap();
    let data = VmGroup::new(&s5).unwrap();
    let program = Program::parse(DEFINITE_FUSION, &s5).unwrap();
    let vm = |t| run_shots(&program, &data, 2024, 10_000, Some(t)).unwrap();
    let s3 = FiniteGroup::builtin("S3").unwrap();
    let oracle = || cross_check_oracle(&s3, 20, 1).unwrap();

    let same = [
        scaling(1) == scaling(4),
        half(1) == half(3),
        vm(1) == vm(4),
        oracle() == oracle(),
    ];
    outcome(same.iter().all(|&s| s), format!("scaling CSV, p=0.5 CSV, VM histogram, oracle report identical: {same:?}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(usize, &str, Duration, fn() -> Outcome); 11] = [
        (1, "code parameters", Duration::from_secs(1), code_parameters),
        (2, "distance", Duration::from_secs(120), distance),
        (3, "anyon phase", Duration::from_secs(60), anyon_phase),
        (4, "decoder scaling", Duration::from_secs(600), decoder_scaling),
        (5, "decoder at p = 0.5", Duration::from_secs(600), decoder_half_noise),
        (6, "Hopf axioms", Duration::from_secs(300), hopf),
        (7, "D(S3) irreps", Duration::from_secs(60), s3_irreps),
        (8, "ground spaces", Duration::from_secs(120), ground_spaces),
        (9, "ribbon identities", Duration::from_secs(600), ribbons),
        (10, "anyon VM", Duration::from_secs(180), vm),
        (11, "determinism", Duration::from_secs(600), determinism),
    ];
    let mut failures = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let passed = o.passed && took <= budget;
        println!(
            "criterion {id:>2} {:<20} {}  {:>7.2}s (budget {}s)  {}",
            name,
            if passed { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
        if !passed {
            failures.push(id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
