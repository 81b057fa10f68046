// Monte Carlo failure rates of the matching decoder on k×k tori. Below
// the threshold the failure rate falls off exponentially in k.
//
// ```bash
// cargo run --release --example threshold
// ```

use anyon_lab::decoder::{fit_log_slope, run_monte_carlo, write_csv, Matching, MonteCarloConfig, NoiseKind};

pub fn run_example() -> anyhow::Result<()> {
    let cfg = MonteCarloConfig {
        ks: vec![3, 5, 7],
        ps: vec![0.03, 0.06, 0.09, 0.12, 0.15],
        trials: 2000,
        seed: 2024,
        kind: NoiseKind::IndependentXz,
        matching: Matching::Blossom,
        threads: None,
    };
    let records = run_monte_carlo(&cfg)?;

    println!("{:>3} {:>6} {:>10} {:>10}", "k", "p", "fail_any", "stderr");
    for r in &records {
        println!("{:>3} {:>6.2} {:>10.4} {:>10.4}", r.k, r.p, r.rate_any(), r.stderr_any());
    }

    for &p in &cfg.ps {
        let points: Vec<(usize, f64)> = records.iter().filter(|r| r.p == p).map(|r| (r.k, r.rate_any())).collect();
        match fit_log_slope(&points) {
            Some(s) => println!("p = {p:.2}: d ln(rate)/dk = {s:+.3}"),
            None => println!("p = {p:.2}: no failures to fit"),
        }
    }

    println!();
    write_csv(&records, std::io::stdout())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
