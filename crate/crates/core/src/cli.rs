//! Command-line front end. [`run`] parses arguments, dispatches, and
//! returns the process exit code: 0 when everything passed, 1 when a
//! verification failed, 2 on a usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::decoder::{run_monte_carlo, write_csv, Matching, MonteCarloConfig, NoiseKind, MAX_K};
use crate::double::{double_irreps, DoubleTensors, VerifyMode};
use crate::group::FiniteGroup;
use crate::lattice::{run_suite, GenericLattice, LatticeModel, Suite};
use crate::toric::{min_logical_weight, shortest_nontrivial_cycle, DistanceSearch, StringKind, TorusCode};
use crate::vm::{run_program, run_shots, derive_shot_seed, Program, VmGroup};

/// Largest `k` for which `code-params --exhaustive` enumerates operators.
pub const MAX_EXHAUSTIVE_K: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "anyon-lab", version, about = "Toric codes, quantum doubles and vortex pairs")]
#[command(args_override_self = true)]
pub struct Cli {
    /// key=value file with the same names as the flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Qubits, independent checks, logical dimension and distance of the
    /// k×k torus code.
    CodeParams(CodeParamsArgs),
    /// Monte Carlo failure rates of the matching decoder, as CSV.
    Threshold(ThresholdArgs),
    /// Hopf algebra and R-matrix axioms of the quantum double.
    VerifyHopf(VerifyHopfArgs),
    /// Irreducible representations (C, χ) of the quantum double.
    DoubleIrreps(GroupArgs),
    /// Exact state-vector checks of the lattice model.
    StatevectorCheck(StatevectorArgs),
    /// Runs a braid program on vortex pairs.
    VmRun(VmRunArgs),
}

#[derive(Args, Debug)]
pub struct CodeParamsArgs {
    #[arg(long)]
    pub k: usize,
    /// Find the distance by enumerating operators (k ≤ 4) instead of a
    /// shortest-cycle search.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// Comma-separated lattice sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub p: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Integer or `auto`.
    #[arg(long)]
    pub seed: Option<String>,
    /// `xz` or `depolarizing`.
    #[arg(long, default_value = "xz")]
    pub model: String,
    /// `blossom` or `greedy`.
    #[arg(long, default_value = "blossom")]
    pub matching: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// Built-in name (Z2, Z3, Z4, S3, D4, S4, S5) or group file.
    #[arg(long, default_value = "S3")]
    pub group: String,
}

#[derive(Args, Debug)]
pub struct VerifyHopfArgs {
    #[arg(long, default_value = "S3")]
    pub group: String,
    /// Integer or `auto`; required when the group is too large for
    /// exhaustive checking.
    #[arg(long)]
    pub seed: Option<String>,
    /// Check every index tuple regardless of group order.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct StatevectorArgs {
    #[arg(long, default_value = "S3")]
    pub group: String,
    /// `torus:RxC` or `tetrahedron`.
    #[arg(long, default_value = "torus:2x1")]
    pub lattice: String,
    /// `all`, `ground`, `ribbon` or `identities`.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

#[derive(Args, Debug)]
pub struct VmRunArgs {
    #[arg(long, default_value = "S5")]
    pub group: String,
    #[arg(long)]
    pub program: PathBuf,
    /// Integer or `auto`.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub shots: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parses `start:stop:step` (inclusive of `stop` up to rounding) or a
/// comma-separated list of probabilities.
pub fn parse_p_values(text: &str) -> Result<Vec<f64>> {
    let ps: Vec<f64> = if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?}")))
            .collect::<Result<_>>()?;
        let [a, b, step] = parts[..] else {
            bail!("range must be start:stop:step");
        };
        if step <= 0.0 || b < a {
            bail!("range needs step > 0 and stop >= start");
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| a + i as f64 * step).map(|x| (x * 1e12).round() / 1e12).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?}")))
            .collect::<Result<_>>()?
    };
    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        bail!("probability {p} outside [0, 1]");
    }
    Ok(ps)
}

/// `None` (missing) is refused; `auto` draws one and reports it.
pub fn resolve_seed(seed: &Option<String>, err: &mut dyn Write) -> Result<u64> {
    match seed.as_deref() {
        None => bail!("--seed is required (pass an integer or `auto`)"),
        Some("auto") => {
            let s: u64 = rand::random();
            writeln!(err, "seed: {s}")?;
            Ok(s)
        }
        Some(s) => s.parse().with_context(|| format!("bad seed {s:?}")),
    }
}

/// Config file lines `key = value` become `--key value` (or `--key` for
/// `true`), placed before the command-line flags so that those win.
pub fn config_args(text: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key=value", n + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

fn with_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.into());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.to_string_lossy()))?;
    let extra = config_args(&text)?;
    // the subcommand is the first argument that is not the config option
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if a == "--config" {
            i += 2;
        } else if a.starts_with("--config=") {
            i += 1;
        } else {
            break;
        }
    }
    let mut out = args[..(i + 1).min(args.len())].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[(i + 1).min(args.len())..]);
    Ok(out)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match with_config(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = if e.use_stderr() { e.render().to_string() } else { e.to_string() };
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn group(spec: &str) -> Result<FiniteGroup> {
    Ok(FiniteGroup::resolve(spec)?)
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(0) => Err(anyhow!("--threads must be positive")),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
        None => Ok(f()),
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::CodeParams(a) => code_params(a, out),
        Command::Threshold(a) => threshold(a, out, err),
        Command::VerifyHopf(a) => verify_hopf(a, out, err),
        Command::DoubleIrreps(a) => irreps(a, out),
        Command::StatevectorCheck(a) => statevector(a, out),
        Command::VmRun(a) => vm_run(a, out, err),
    }
}

fn code_params(a: &CodeParamsArgs, out: &mut dyn Write) -> Result<bool> {
    if a.exhaustive && a.k > MAX_EXHAUSTIVE_K {
        bail!("--exhaustive is limited to k <= {MAX_EXHAUSTIVE_K}");
    }
    let code = TorusCode::new(a.k)?;
    let p = code.parameters();
    let distance = if a.exhaustive {
        min_logical_weight(&code, DistanceSearch::Full, a.k).unwrap_or(0)
    } else {
        shortest_nontrivial_cycle(&code, StringKind::Z).min(shortest_nontrivial_cycle(&code, StringKind::X))
    };
    writeln!(
        out,
        "k={} n={} m={} dim={} logical_qubits={} distance={}",
        a.k,
        p.n,
        p.independent_checks,
        p.logical_dim(),
        p.logical_qubits,
        distance
    )?;
    Ok(true)
}

fn threshold(a: &ThresholdArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let ps = parse_p_values(&a.p)?;
    if let Some(&k) = a.k.iter().find(|&&k| !(2..=MAX_K).contains(&k)) {
        bail!("k = {k} outside 2..={MAX_K}");
    }
    if a.trials == 0 {
        bail!("--trials must be positive");
    }
    let kind = NoiseKind::parse(&a.model)?;
    let matching = match a.matching.as_str() {
        "blossom" => Matching::Blossom,
        "greedy" => Matching::Greedy,
        m => bail!("unknown matching {m:?}"),
    };
    if a.threads == Some(0) {
        bail!("--threads must be positive");
    }
    let seed = resolve_seed(&a.seed, err)?;
    let cfg = MonteCarloConfig { ks: a.k.clone(), ps, trials: a.trials, seed, kind, matching, threads: a.threads };
    let records = run_monte_carlo(&cfg)?;
    match &a.out {
        Some(path) => {
            let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&records, f)?;
        }
        None => write_csv(&records, &mut *out)?,
    }
    Ok(true)
}

fn verify_hopf(a: &VerifyHopfArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let g = group(&a.group)?;
    let mode = if a.exhaustive || g.order() <= 8 {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::auto(g.order(), resolve_seed(&a.seed, err)?)
    };
    let reports = in_pool(a.threads, || {
        let t = DoubleTensors::build(&g);
        t.verify_axioms(mode)
    })?;
    writeln!(out, "group {} (order {}), {:?}", g.name(), g.order(), mode)?;
    writeln!(out, "{:<28} {:<6} {:>10}  counterexample", "axiom", "status", "residual")?;
    for r in &reports {
        let cx = r
            .counterexample
            .as_ref()
            .map(|c| format!("{}={:?}", r.free_labels, c))
            .unwrap_or_else(|| "-".into());
        let status = if r.passed { "pass" } else { "FAIL" };
        writeln!(out, "{:<28} {:<6} {:>10.3e}  {cx}", r.id, status, r.residual)?;
    }
    let passed = reports.iter().all(|r| r.passed);
    writeln!(out, "{} of {} axioms hold", reports.iter().filter(|r| r.passed).count(), reports.len())?;
    Ok(passed)
}

fn irreps(a: &GroupArgs, out: &mut dyn Write) -> Result<bool> {
    let g = group(&a.group)?;
    let labels = double_irreps(&g)?;
    writeln!(out, "{:<16} {:>11} {:>5} {:>4}", "class", "centralizer", "chi", "dim")?;
    for l in &labels {
        writeln!(
            out,
            "{:<16} {:>11} {:>5} {:>4}",
            g.format_element(l.magnetic_class.representative),
            l.centralizer_order,
            l.electric_row,
            l.dim
        )?;
    }
    let sum: usize = labels.iter().map(|l| l.dim * l.dim).sum();
    writeln!(out, "{} irreps, sum of squared dims {} = |G|^2 = {}", labels.len(), sum, g.order() * g.order())?;
    Ok(sum == g.order() * g.order())
}

fn statevector(a: &StatevectorArgs, out: &mut dyn Write) -> Result<bool> {
    let g = group(&a.group)?;
    let lattice = GenericLattice::parse(&a.lattice)?;
    let suite = Suite::parse(&a.suite).ok_or_else(|| anyhow!("unknown suite {:?}", a.suite))?;
    let model = LatticeModel::new(g, lattice)?;
    let reports = run_suite(&model, suite);
    writeln!(out, "{:<64} {:<6} {:>10}", "check", "status", "residual")?;
    for r in &reports {
        writeln!(out, "{:<64} {:<6} {:>10.3e}", r.name, if r.passed { "pass" } else { "FAIL" }, r.residual)?;
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(out, "{passed} of {} checks pass", reports.len())?;
    Ok(passed == reports.len())
}

fn vm_run(a: &VmRunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let g = group(&a.group)?;
    let text = std::fs::read_to_string(&a.program)
        .with_context(|| format!("reading {}", a.program.display()))
        ?;
    let program = Program::parse(&text, &g)?;
    if a.shots == 0 {
        bail!("--shots must be positive");
    }
    if a.threads == Some(0) {
        bail!("--threads must be positive");
    }
    let seed = resolve_seed(&a.seed, err)?;
    let data = VmGroup::new(&g)?;
    let first = run_program(&program, &data, derive_shot_seed(seed, 0))?;
    writeln!(out, "group {} seed {seed}", g.name())?;
    writeln!(out, "log of shot 0:")?;
    for e in &first.log {
        writeln!(out, "  {}", data.describe(e))?;
    }
    let summary = run_shots(&program, &data, seed, a.shots, a.threads)?;
    writeln!(out, "histogram over {} shots:", summary.shots)?;
    for (outcome, count) in &summary.histogram {
        let label = if outcome.is_empty() { "(no measurements)" } else { outcome };
        writeln!(out, "  {count:>8}  {:.4}  {label}", *count as f64 / summary.shots as f64)?;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("anyon-lab").chain(args.iter().copied()).map(OsString::from);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn p_values() {
        assert_eq!(parse_p_values("0.01:0.05:0.01").unwrap(), vec![0.01, 0.02, 0.03, 0.04, 0.05]);
        assert_eq!(parse_p_values("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_p_values("0.1:0.05:0.01").is_err());
        assert!(parse_p_values("1.5").is_err());
        assert!(parse_p_values("0:1").is_err());
    }

    #[test]
    fn code_params_k3() {
        let (code, out, _) = call(&["code-params", "--k", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("n=18 m=16 dim=4"), "{out}");
        assert!(out.contains("distance=3"));
        assert_eq!(call(&["code-params", "--k", "5", "--exhaustive"]).0, 2);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["code-params"]).0, 2);
        assert_eq!(call(&["threshold", "--k", "3", "--p", "0.1"]).0, 2);
        assert_eq!(call(&["threshold", "--k", "3", "--p", "0.1", "--seed", "x"]).0, 2);
        assert_eq!(call(&["verify-hopf", "--group", "nope"]).0, 2);
        assert_eq!(call(&["statevector-check", "--suite", "some"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn seed_auto_is_reported() {
        let (code, out, err) = call(&["threshold", "--k", "3", "--p", "0.1", "--trials", "5", "--seed", "auto"]);
        assert_eq!(code, 0);
        let seed = err.trim().strip_prefix("seed: ").unwrap();
        assert!(out.lines().nth(1).unwrap().ends_with(&format!(",{seed}")));
    }

    #[test]
    fn config_file_with_flag_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# threshold run\nk = 3\np = 0.05\ntrials = 20\nseed = 5\n").unwrap();
        let conf = path.to_str().unwrap();
        let (code, out, _) = call(&["--config", conf, "threshold", "--seed", "9"]);
        assert_eq!(code, 0, "{out}");
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        assert_eq!((row[0], row[1], row[3], row[8]), ("3", "0.05", "20", "9"));
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert_eq!(call(&["--config", conf, "code-params", "--k", "3"]).0, 2);
    }

    #[test]
    fn verify_and_irreps_s3() {
        let (code, out, _) = call(&["verify-hopf", "--group", "S3"]);
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains("FAIL"));
        let (code, out, _) = call(&["double-irreps", "--group", "S3"]);
        assert_eq!(code, 0);
        assert!(out.contains("8 irreps"));
    }

    #[test]
    fn vm_run_program() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.braid");
        std::fs::write(&path, "CREATEREF (1 2)\nCREATEREF (2 3)\nPULL 1 2\nMEASV 1\n").unwrap();
        let p = path.to_str().unwrap();
        let (code, out, _) = call(&["vm-run", "--program", p, "--seed", "7", "--shots", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("MEASV 1 = (1 3)"));
        assert!(out.contains("10  1.0000  MEASV 1 = (1 3)"), "{out}");
        assert_eq!(call(&["vm-run", "--program", p]).0, 2);
        std::fs::write(&path, "PULL 1 2\n").unwrap();
        assert_eq!(call(&["vm-run", "--program", p, "--seed", "1"]).0, 2);
    }
}
