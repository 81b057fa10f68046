//! Syndrome decoding for the toric code and a seeded Monte Carlo harness.
//!
//! Vertex defects (left by Z errors) and face defects (left by X errors) are
//! paired independently by minimum-weight perfect matching under the
//! periodic Manhattan distance, and each pair is joined by a row-first path.

mod blossom;
mod monte_carlo;

use rand::Rng;
use thiserror::Error;

use crate::toric::{HomologyClass, PauliOperator, Syndrome, ToricError, TorusCode};

pub use blossom::max_weight_matching;
pub use monte_carlo::{
    fit_log_slope, read_csv, run_monte_carlo, trial_seed, wilson_halfwidth, write_csv, MonteCarloConfig, TrialRecord,
    MAX_K,
};
pub(crate) use monte_carlo::splitmix;

#[derive(Debug, Error)]
pub enum DecoderError {
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("syndrome has odd parity")]
    OddSyndrome,
    #[error("correction does not reproduce the error syndrome")]
    SyndromeMismatch,
    #[error("lattice size {0} exceeds the cap of {MAX_K}")]
    TooLarge(usize),
    #[error("error probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("unknown noise model {0:?} (expected xz or depolarizing)")]
    UnknownModel(String),
    #[error("{0}")]
    Csv(String),
    #[error("cannot start worker threads: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// σ^x and σ^z each with probability p, independently.
    IndependentXz,
    /// One of X, Y, Z with probability p/3 each.
    Depolarizing,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::IndependentXz => "xz",
            Self::Depolarizing => "depolarizing",
        }
    }

    pub fn parse(text: &str) -> Result<Self, DecoderError> {
        match text {
            "xz" | "independent-xz" => Ok(Self::IndependentXz),
            "depolarizing" | "dep" => Ok(Self::Depolarizing),
            other => Err(DecoderError::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self, DecoderError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(DecoderError::BadProbability(p));
        }
        Ok(Self { kind, p })
    }

    /// Draws an error qubit by qubit in index order.
    pub fn sample(&self, code: &TorusCode, rng: &mut impl Rng) -> PauliOperator {
        let n = code.num_qubits();
        let mut e = PauliOperator::identity(n);
        for q in 0..n {
            match self.kind {
                NoiseKind::IndependentXz => {
                    if rng.random_bool(self.p) {
                        e.flip_x(q);
                    }
                    if rng.random_bool(self.p) {
                        e.flip_z(q);
                    }
                }
                NoiseKind::Depolarizing => {
                    if rng.random_bool(self.p) {
                        match rng.random_range(0..3) {
                            0 => e.flip_x(q),
                            1 => {
                                e.flip_x(q);
                                e.flip_z(q);
                            }
                            _ => e.flip_z(q),
                        }
                    }
                }
            }
        }
        e
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Matching {
    /// Exact minimum-weight perfect matching.
    #[default]
    Blossom,
    /// Repeatedly pairs the closest remaining defects.
    Greedy,
}

/// Periodic Manhattan distance between sites `a` and `b`.
pub fn torus_distance(k: usize, a: usize, b: usize) -> usize {
    let d = |x: usize, y: usize| {
        let t = x.abs_diff(y);
        t.min(k - t)
    };
    d(a / k, b / k) + d(a % k, b % k)
}

/// Pairs up `sites` (sorted), returning index pairs into `sites`.
pub fn match_sites(k: usize, sites: &[usize], matching: Matching) -> Vec<(usize, usize)> {
    let m = sites.len();
    let mut pairs = Vec::with_capacity(m / 2);
    match matching {
        Matching::Blossom => {
            let big = 2 * k as i64 + 1;
            let mut edges = Vec::with_capacity(m * m / 2);
            for i in 0..m {
                for j in i + 1..m {
                    edges.push((i, j, big - torus_distance(k, sites[i], sites[j]) as i64));
                }
            }
            let mate = max_weight_matching(m, &edges, true);
            for (i, partner) in mate.iter().enumerate() {
                let j = partner.expect("complete graph on an even number of sites");
                if i < j {
                    pairs.push((i, j));
                }
            }
        }
        Matching::Greedy => {
            let mut candidates: Vec<(usize, usize, usize)> = (0..m)
                .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .map(|(i, j)| (torus_distance(k, sites[i], sites[j]), i, j))
                .collect();
            candidates.sort_unstable();
            let mut used = vec![false; m];
            for (_, i, j) in candidates {
                if !used[i] && !used[j] {
                    used[i] = true;
                    used[j] = true;
                    pairs.push((i, j));
                }
            }
        }
    }
    pairs
}

/// Signed steps from `from` to `to` along a cycle of length `k`, the short
/// way round; the positive direction wins ties.
fn steps(k: usize, from: usize, to: usize) -> isize {
    let fwd = (to + k - from) % k;
    if fwd <= k - fwd {
        fwd as isize
    } else {
        -((k - fwd) as isize)
    }
}

/// Edges of the row-first lattice path between vertices `a` and `b`.
pub fn vertex_path(code: &TorusCode, a: usize, b: usize) -> Vec<usize> {
    let k = code.k();
    let (mut r, mut c) = (a / k, a % k);
    let mut edges = Vec::new();
    let dc = steps(k, c, b % k);
    for _ in 0..dc.unsigned_abs() {
        if dc > 0 {
            edges.push(code.h(r, c));
            c = (c + 1) % k;
        } else {
            c = (c + k - 1) % k;
            edges.push(code.h(r, c));
        }
    }
    let dr = steps(k, r, b / k);
    for _ in 0..dr.unsigned_abs() {
        if dr > 0 {
            edges.push(code.v(r, c));
            r = (r + 1) % k;
        } else {
            r = (r + k - 1) % k;
            edges.push(code.v(r, c));
        }
    }
    edges
}

/// Edges crossed by the row-first dual path between faces `a` and `b`.
pub fn face_path(code: &TorusCode, a: usize, b: usize) -> Vec<usize> {
    let k = code.k();
    let (mut r, mut c) = (a / k, a % k);
    let mut edges = Vec::new();
    let dc = steps(k, c, b % k);
    for _ in 0..dc.unsigned_abs() {
        if dc > 0 {
            c = (c + 1) % k;
            edges.push(code.v(r, c));
        } else {
            edges.push(code.v(r, c));
            c = (c + k - 1) % k;
        }
    }
    let dr = steps(k, r, b / k);
    for _ in 0..dr.unsigned_abs() {
        if dr > 0 {
            r = (r + 1) % k;
            edges.push(code.h(r, c));
        } else {
            edges.push(code.h(r, c));
            r = (r + k - 1) % k;
        }
    }
    edges
}

/// A correction whose syndrome equals `syndrome`.
pub fn decode(code: &TorusCode, syndrome: &Syndrome, matching: Matching) -> Result<PauliOperator, DecoderError> {
    if syndrome.vertices.len() % 2 == 1 || syndrome.faces.len() % 2 == 1 {
        return Err(DecoderError::OddSyndrome);
    }
    let k = code.k();
    let mut correction = PauliOperator::identity(code.num_qubits());
    for (i, j) in match_sites(k, &syndrome.vertices, matching) {
        for e in vertex_path(code, syndrome.vertices[i], syndrome.vertices[j]) {
            correction.flip_z(e);
        }
    }
    for (i, j) in match_sites(k, &syndrome.faces, matching) {
        for e in face_path(code, syndrome.faces[i], syndrome.faces[j]) {
            correction.flip_x(e);
        }
    }
    Ok(correction)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    /// The residual X part winds nontrivially.
    pub fail_x: bool,
    /// The residual Z part winds nontrivially.
    pub fail_z: bool,
    pub class: HomologyClass,
}

impl TrialOutcome {
    pub fn fails(&self) -> bool {
        self.fail_x || self.fail_z
    }
}

/// Whether `error · correction` is a nontrivial logical operator.
pub fn trial_fails(code: &TorusCode, error: &PauliOperator, correction: &PauliOperator) -> Result<TrialOutcome, DecoderError> {
    let residual = error.mul(correction)?;
    let class = code.homology(&residual)?.ok_or(DecoderError::SyndromeMismatch)?;
    Ok(TrialOutcome {
        fail_x: class.x_class != [false; 2],
        fail_z: class.z_class != [false; 2],
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn empty_syndrome_decodes_to_identity() {
        let code = TorusCode::new(5).unwrap();
        let c = decode(&code, &Syndrome::default(), Matching::Blossom).unwrap();
        assert_eq!(c, PauliOperator::identity(code.num_qubits()));
    }

    #[test]
    fn adjacent_defects_give_single_edge() {
        let code = TorusCode::new(5).unwrap();
        let n = code.num_qubits();
        for e in 0..n {
            let err = PauliOperator::z_on(n, [e]);
            let c = decode(&code, &code.syndrome(&err).unwrap(), Matching::Blossom).unwrap();
            assert_eq!(c, err);
            let err = PauliOperator::x_on(n, [e]);
            let c = decode(&code, &code.syndrome(&err).unwrap(), Matching::Blossom).unwrap();
            assert_eq!(c, err);
        }
    }

    #[test]
    fn odd_syndrome_rejected() {
        let code = TorusCode::new(3).unwrap();
        let s = Syndrome {
            vertices: vec![1],
            faces: vec![],
        };
        assert!(matches!(decode(&code, &s, Matching::Blossom), Err(DecoderError::OddSyndrome)));
    }

    #[test]
    fn paths_join_endpoints() {
        for k in [2, 3, 4, 5, 6] {
            let code = TorusCode::new(k).unwrap();
            let n = code.num_qubits();
            for a in 0..k * k {
                for b in 0..k * k {
                    let z = PauliOperator::z_on(n, vertex_path(&code, a, b));
                    let x = PauliOperator::x_on(n, face_path(&code, a, b));
                    let mut want: Vec<usize> = if a == b { vec![] } else { vec![a.min(b), a.max(b)] };
                    want.dedup();
                    assert_eq!(code.syndrome(&z).unwrap().vertices, want);
                    assert_eq!(code.syndrome(&x).unwrap().faces, want);
                    assert_eq!(z.weight(), torus_distance(k, a, b));
                    assert_eq!(x.weight(), torus_distance(k, a, b));
                }
            }
        }
    }

    #[test]
    fn weight_two_errors_are_corrected_cheaply() {
        let code = TorusCode::new(5).unwrap();
        let n = code.num_qubits();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            let err = PauliOperator::z_on(n, [a, b]).mul(&PauliOperator::x_on(n, [b])).unwrap();
            let s = code.syndrome(&err).unwrap();
            let c = decode(&code, &s, Matching::Blossom).unwrap();
            assert_eq!(code.syndrome(&c).unwrap(), s);
            assert!(c.z_weight() <= err.z_weight());
            assert!(c.x_weight() <= err.x_weight());
            assert!(!trial_fails(&code, &err, &c).unwrap().fails());
        }
    }

    #[test]
    fn trial_examples() {
        let code = TorusCode::new(4).unwrap();
        let n = code.num_qubits();
        let id = PauliOperator::identity(n);
        let e = PauliOperator::z_on(n, [3, 8]);
        assert!(!trial_fails(&code, &e, &e).unwrap().fails());
        let [z1, ..] = code.logicals();
        let out = trial_fails(&code, &z1, &id).unwrap();
        assert!(out.fail_z && !out.fail_x);
        assert_eq!(out.class.z_class, [true, false]);
        assert!(!trial_fails(&code, &code.plaquette_operator(2), &id).unwrap().fails());
        assert!(matches!(
            trial_fails(&code, &PauliOperator::z_on(n, [0]), &id),
            Err(DecoderError::SyndromeMismatch)
        ));
    }

    #[test]
    fn noise_extremes() {
        let code = TorusCode::new(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let zero = NoiseModel::new(NoiseKind::IndependentXz, 0.0).unwrap();
        assert!(zero.sample(&code, &mut rng).is_scalar());
        let one = NoiseModel::new(NoiseKind::IndependentXz, 1.0).unwrap();
        let e = one.sample(&code, &mut rng);
        assert_eq!(e.x_weight(), code.num_qubits());
        assert_eq!(e.z_weight(), code.num_qubits());
        assert!(NoiseModel::new(NoiseKind::Depolarizing, 1.5).is_err());
    }

    #[test]
    fn mean_x_weight_is_binomial() {
        let code = TorusCode::new(5).unwrap();
        let noise = NoiseModel::new(NoiseKind::IndependentXz, 0.1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let samples = 100_000;
        let total: usize = (0..samples).map(|_| noise.sample(&code, &mut rng).x_weight()).sum();
        let mean = total as f64 / samples as f64;
        // binomial(50, 0.1): mean 5, sd of the mean sqrt(4.5 / 1e5)
        let sigma = (50.0 * 0.1 * 0.9 / samples as f64).sqrt();
        assert!((mean - 5.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn depolarizing_rates() {
        let code = TorusCode::new(4).unwrap();
        let noise = NoiseModel::new(NoiseKind::Depolarizing, 0.3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let (mut x_only, mut y, mut z_only) = (0usize, 0usize, 0usize);
        let trials = 20_000;
        for _ in 0..trials {
            let e = noise.sample(&code, &mut rng);
            for q in 0..code.num_qubits() {
                match (e.x(q), e.z(q)) {
                    (true, false) => x_only += 1,
                    (true, true) => y += 1,
                    (false, true) => z_only += 1,
                    _ => {}
                }
            }
        }
        let total = (trials * code.num_qubits()) as f64;
        for count in [x_only, y, z_only] {
            assert!((count as f64 / total - 0.1).abs() < 0.003);
        }
    }

    #[test]
    fn greedy_also_reproduces_syndrome() {
        let code = TorusCode::new(7).unwrap();
        let noise = NoiseModel::new(NoiseKind::IndependentXz, 0.08).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let e = noise.sample(&code, &mut rng);
            let s = code.syndrome(&e).unwrap();
            for m in [Matching::Blossom, Matching::Greedy] {
                let c = decode(&code, &s, m).unwrap();
                assert_eq!(code.syndrome(&c).unwrap(), s);
            }
        }
    }
}
