use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{decode, trial_fails, DecoderError, Matching, NoiseKind, NoiseModel};
use crate::toric::TorusCode;

/// Largest lattice size accepted by [`run_monte_carlo`].
pub const MAX_K: usize = 31;

#[derive(Clone, Debug)]
pub struct MonteCarloConfig {
    pub ks: Vec<usize>,
    pub ps: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub kind: NoiseKind,
    pub matching: Matching,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub k: usize,
    pub p: f64,
    pub kind: NoiseKind,
    pub trials: u64,
    pub fail_x: u64,
    pub fail_z: u64,
    pub fail_any: u64,
    /// Trials whose residual winds along `[Z1, Z2, X1, X2]`, i.e. whose
    /// z-class / x-class bits are set.
    pub fail_by_logical: [u64; 4],
    pub seed: u64,
}

impl TrialRecord {
    pub fn rate_any(&self) -> f64 {
        self.fail_any as f64 / self.trials as f64
    }

    pub fn rate_x(&self) -> f64 {
        self.fail_x as f64 / self.trials as f64
    }

    pub fn rate_z(&self) -> f64 {
        self.fail_z as f64 / self.trials as f64
    }

    pub fn stderr_any(&self) -> f64 {
        wilson_halfwidth(self.fail_any, self.trials)
    }
}

/// Half-width of the Wilson score interval at one standard deviation.
pub fn wilson_halfwidth(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    (p * (1.0 - p) / n + 1.0 / (4.0 * n * n)).sqrt() / (1.0 + 1.0 / n)
}

pub(crate) fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the random stream of one trial; depends only on its coordinates.
pub fn trial_seed(master: u64, k: usize, p: f64, trial: u64) -> u64 {
    [k as u64, p.to_bits(), trial]
        .into_iter()
        .fold(splitmix(master), |h, v| splitmix(h ^ v))
}

#[derive(Clone, Copy, Default)]
struct Tally {
    fail_x: u64,
    fail_z: u64,
    fail_any: u64,
    by_logical: [u64; 4],
}

impl Tally {
    fn merge(mut self, o: Self) -> Self {
        self.fail_x += o.fail_x;
        self.fail_z += o.fail_z;
        self.fail_any += o.fail_any;
        for i in 0..4 {
            self.by_logical[i] += o.by_logical[i];
        }
        self
    }
}

fn one_point(code: &TorusCode, noise: NoiseModel, cfg: &MonteCarloConfig) -> Result<Tally, DecoderError> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, code.k(), noise.p, t));
            let error = noise.sample(code, &mut rng);
            let correction = decode(code, &code.syndrome(&error)?, cfg.matching)?;
            let out = trial_fails(code, &error, &correction)?;
            let c = out.class;
            Ok(Tally {
                fail_x: out.fail_x as u64,
                fail_z: out.fail_z as u64,
                fail_any: out.fails() as u64,
                by_logical: [
                    c.z_class[0] as u64,
                    c.z_class[1] as u64,
                    c.x_class[0] as u64,
                    c.x_class[1] as u64,
                ],
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

/// One record per `(k, p)` in input order. Integer tallies are summed, so
/// the result does not depend on how trials are scheduled.
pub fn run_monte_carlo(cfg: &MonteCarloConfig) -> Result<Vec<TrialRecord>, DecoderError> {
    if let Some(&k) = cfg.ks.iter().find(|&&k| k > MAX_K) {
        return Err(DecoderError::TooLarge(k));
    }
    let work = || -> Result<Vec<TrialRecord>, DecoderError> {
        let mut records = Vec::new();
        for &k in &cfg.ks {
            let code = TorusCode::new(k)?;
            for &p in &cfg.ps {
                let noise = NoiseModel::new(cfg.kind, p)?;
                let t = one_point(&code, noise, cfg)?;
                records.push(TrialRecord {
                    k,
                    p,
                    kind: cfg.kind,
                    trials: cfg.trials,
                    fail_x: t.fail_x,
                    fail_z: t.fail_z,
                    fail_any: t.fail_any,
                    fail_by_logical: t.by_logical,
                    seed: cfg.seed,
                });
            }
        }
        Ok(records)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| DecoderError::ThreadPool(e.to_string()))?
            .install(work),
        None => work(),
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    k: usize,
    p: f64,
    model: String,
    trials: u64,
    fail_x: u64,
    fail_z: u64,
    fail_any: u64,
    stderr_any: f64,
    seed: u64,
}

/// Columns `k,p,model,trials,fail_x,fail_z,fail_any,stderr_any,seed`; the
/// `fail_*` columns are failure counts.
pub fn write_csv(records: &[TrialRecord], out: impl Write) -> Result<(), DecoderError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["k", "p", "model", "trials", "fail_x", "fail_z", "fail_any", "stderr_any", "seed"])
        .map_err(|e| DecoderError::Csv(e.to_string()))?;
    for r in records {
        w.serialize(Row {
            k: r.k,
            p: r.p,
            model: r.kind.name().to_string(),
            trials: r.trials,
            fail_x: r.fail_x,
            fail_z: r.fail_z,
            fail_any: r.fail_any,
            stderr_any: r.stderr_any(),
            seed: r.seed,
        })
        .map_err(|e| DecoderError::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records written by [`write_csv`]. Per-logical counts are not part
/// of the file and come back as zero.
pub fn read_csv(input: impl Read) -> Result<Vec<TrialRecord>, DecoderError> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<Row>()
        .map(|row| {
            let row = row.map_err(|e| DecoderError::Csv(e.to_string()))?;
            Ok(TrialRecord {
                k: row.k,
                p: row.p,
                kind: NoiseKind::parse(&row.model)?,
                trials: row.trials,
                fail_x: row.fail_x,
                fail_z: row.fail_z,
                fail_any: row.fail_any,
                fail_by_logical: [0; 4],
                seed: row.seed,
            })
        })
        .collect()
}

/// Least-squares slope of `ln(rate)` against `k`, skipping zero rates.
/// `None` with fewer than two usable points.
pub fn fit_log_slope(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|&(k, r)| (k as f64, r.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
