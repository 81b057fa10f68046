use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::tensor::{Contraction, SparseTensor};
use super::{comultiply_double, DoubleIndex, DoubleTensors};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Full sparse contraction of both sides over all free indices.
    Exhaustive,
    /// Seeded random free-index tuples per axiom.
    Sampled { samples_per_axiom: usize, seed: u64 },
}

impl VerifyMode {
    /// Exhaustive for `|G| <= 8`, otherwise sampled with enough tuples per
    /// axiom to exceed a million in total.
    pub fn auto(order: usize, seed: u64) -> Self {
        if order <= 8 {
            Self::Exhaustive
        } else {
            Self::Sampled {
                samples_per_axiom: 50_000,
                seed,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub residual: f64,
    /// Free-index tuple (flat indices in the order of `free_labels`) of the
    /// first mismatch.
    pub counterexample: Option<Vec<usize>>,
    pub free_labels: &'static str,
    pub checked: Checked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Checked {
    Exhaustive,
    Sampled(usize),
}

#[derive(Clone, Copy, Debug)]
enum T {
    Omega,
    Lambda,
    Eps,
    Unit,
    S,
    SkewS,
    R,
    RBar,
    C,
    Tau,
    Delta,
    One,
    InvNSquared,
}

type Side = &'static [(T, &'static str)];

struct Axiom {
    id: &'static str,
    description: &'static str,
    free: &'static str,
    lhs: Side,
    rhs: Side,
}

use T::*;

const AXIOMS: &[Axiom] = &[
    Axiom { id: "mult.assoc", description: "F multiplication is associative", free: "lmnk",
        lhs: &[(Lambda, "lmi"), (Lambda, "ink")], rhs: &[(Lambda, "mnj"), (Lambda, "ljk")] },
    Axiom { id: "mult.unit-left", description: "ε is a left unit of F", free: "mk",
        lhs: &[(Eps, "i"), (Lambda, "imk")], rhs: &[(Delta, "mk")] },
    Axiom { id: "mult.unit-right", description: "ε is a right unit of F", free: "mk",
        lhs: &[(Lambda, "mjk"), (Eps, "j")], rhs: &[(Delta, "mk")] },
    Axiom { id: "comult.coassoc", description: "F comultiplication is coassociative", free: "lmnk",
        lhs: &[(Omega, "ilm"), (Omega, "kin")], rhs: &[(Omega, "jmn"), (Omega, "klj")] },
    Axiom { id: "comult.counit-left", description: "e is a left counit of F", free: "km",
        lhs: &[(Unit, "i"), (Omega, "kim")], rhs: &[(Delta, "km")] },
    Axiom { id: "comult.counit-right", description: "e is a right counit of F", free: "km",
        lhs: &[(Omega, "kmj"), (Unit, "j")], rhs: &[(Delta, "km")] },
    Axiom { id: "bialgebra.comult-mult", description: "comultiplication is multiplicative", free: "lmkn",
        lhs: &[(Lambda, "lmq"), (Omega, "qkn")],
        rhs: &[(Omega, "lij"), (Omega, "mrs"), (Lambda, "irk"), (Lambda, "jsn")] },
    Axiom { id: "bialgebra.unit-comult", description: "comultiplication preserves the unit", free: "kn",
        lhs: &[(Eps, "q"), (Omega, "qkn")], rhs: &[(Eps, "k"), (Eps, "n")] },
    Axiom { id: "bialgebra.counit-mult", description: "counit is multiplicative", free: "lm",
        lhs: &[(Lambda, "lmq"), (Unit, "q")], rhs: &[(Unit, "l"), (Unit, "m")] },
    Axiom { id: "antipode.left", description: "S(x1) x2 = ε(x) 1", free: "pq",
        lhs: &[(S, "kl"), (Lambda, "lmp"), (Omega, "qkn"), (Delta, "nm")],
        rhs: &[(Eps, "p"), (Unit, "q")] },
    Axiom { id: "antipode.right", description: "x1 S(x2) = ε(x) 1", free: "pq",
        lhs: &[(Delta, "kl"), (Lambda, "lmp"), (Omega, "qkn"), (S, "nm")],
        rhs: &[(Eps, "p"), (Unit, "q")] },
    Axiom { id: "antipode.anti-mult", description: "S reverses multiplication", free: "ijp",
        lhs: &[(S, "il"), (S, "jm"), (Lambda, "lmp")], rhs: &[(Lambda, "jiq"), (S, "qp")] },
    Axiom { id: "antipode.anti-comult", description: "S reverses comultiplication", free: "pij",
        lhs: &[(S, "pq"), (Omega, "qij")], rhs: &[(Omega, "pml"), (S, "mj"), (S, "li")] },
    Axiom { id: "skew.inverse-left", description: "S̃ S = 1", free: "mn",
        lhs: &[(SkewS, "mi"), (S, "in")], rhs: &[(Delta, "mn")] },
    Axiom { id: "skew.inverse-right", description: "S S̃ = 1", free: "mn",
        lhs: &[(S, "mj"), (SkewS, "jn")], rhs: &[(Delta, "mn")] },
    Axiom { id: "skew.antipode-left", description: "skew antipode identity (left)", free: "pq",
        lhs: &[(SkewS, "nl"), (Lambda, "lmp"), (Omega, "qkn"), (Delta, "km")],
        rhs: &[(Eps, "p"), (Unit, "q")] },
    Axiom { id: "skew.antipode-right", description: "skew antipode identity (right)", free: "pq",
        lhs: &[(Delta, "nl"), (Lambda, "lmp"), (Omega, "qkn"), (SkewS, "km")],
        rhs: &[(Eps, "p"), (Unit, "q")] },
    Axiom { id: "skew.anti-mult", description: "S̃ reverses multiplication", free: "ijp",
        lhs: &[(SkewS, "il"), (SkewS, "jm"), (Lambda, "lmp")], rhs: &[(Lambda, "jiq"), (SkewS, "qp")] },
    Axiom { id: "skew.anti-comult", description: "S̃ reverses comultiplication", free: "pij",
        lhs: &[(SkewS, "pq"), (Omega, "qij")], rhs: &[(Omega, "pml"), (SkewS, "mj"), (SkewS, "li")] },
    Axiom { id: "r.rbar-r", description: "R̄ R = 1 in D⊗D", free: "nm",
        lhs: &[(RBar, "ik"), (Omega, "nij"), (Omega, "mkl"), (R, "jl")], rhs: &[(Unit, "n"), (Unit, "m")] },
    Axiom { id: "r.r-rbar", description: "R R̄ = 1 in D⊗D", free: "nm",
        lhs: &[(R, "ik"), (Omega, "nij"), (Omega, "mkl"), (RBar, "jl")], rhs: &[(Unit, "n"), (Unit, "m")] },
    Axiom { id: "r.quasitriangular-left", description: "(Δ⊗id) R = R13 R23", free: "ijm",
        lhs: &[(Lambda, "ijk"), (R, "km")], rhs: &[(R, "il"), (R, "jn"), (Omega, "mln")] },
    Axiom { id: "r.quasitriangular-right", description: "(id⊗Δ) R = R13 R12", free: "mji",
        lhs: &[(R, "mk"), (Lambda, "jik")], rhs: &[(R, "li"), (R, "nj"), (Omega, "mln")] },
    Axiom { id: "r.braiding", description: "R Δ(x) R⁻¹ = Δ'(x)", free: "jik",
        lhs: &[(Lambda, "jik")],
        rhs: &[(R, "lp"), (Omega, "ilu"), (Omega, "jpv"), (Omega, "umr"), (Omega, "vns"),
               (Lambda, "mnk"), (RBar, "rs")] },
];

const SPECIAL: &[Axiom] = &[
    Axiom { id: "c.absorb-left", description: "C X = ε(X) C", free: "kj",
        lhs: &[(C, "i"), (Omega, "kij")], rhs: &[(Eps, "j"), (C, "k")] },
    Axiom { id: "c.absorb-right", description: "X C = ε(X) C", free: "kj",
        lhs: &[(C, "i"), (Omega, "kji")], rhs: &[(Eps, "j"), (C, "k")] },
    Axiom { id: "c.counit", description: "ε(C) = 1", free: "",
        lhs: &[(Eps, "k"), (C, "k")], rhs: &[(One, "")] },
    Axiom { id: "tau.absorb-left", description: "τ Y = e(Y) τ", free: "jk",
        lhs: &[(Tau, "i"), (Lambda, "ijk")], rhs: &[(Unit, "j"), (Tau, "k")] },
    Axiom { id: "tau.absorb-right", description: "Y τ = e(Y) τ", free: "jk",
        lhs: &[(Tau, "i"), (Lambda, "jik")], rhs: &[(Unit, "j"), (Tau, "k")] },
    Axiom { id: "tau.counit", description: "e(τ) = 1", free: "",
        lhs: &[(Unit, "k"), (Tau, "k")], rhs: &[(One, "")] },
    Axiom { id: "tau-c", description: "τ_k c^k = N⁻²", free: "",
        lhs: &[(Tau, "k"), (C, "k")], rhs: &[(InvNSquared, "")] },
];

/// `c` and `τ` carry the value `1/N`, so their identities are sums of
/// non-dyadic floats and are compared with a small tolerance.
const SPECIAL_TOLERANCE: f64 = 1e-12;

struct Scalars {
    one: SparseTensor,
    inv_n_squared: SparseTensor,
}

fn resolve<'a>(t: &'a DoubleTensors, s: &'a Scalars, name: T) -> &'a SparseTensor {
    match name {
        Omega => &t.omega,
        Lambda => &t.lambda,
        Eps => &t.epsilon,
        Unit => &t.unit,
        S => &t.antipode,
        SkewS => &t.skew_antipode,
        R => &t.r,
        RBar => &t.r_bar,
        C => &t.c,
        Tau => &t.tau,
        Delta => &t.delta,
        One => &s.one,
        InvNSquared => &s.inv_n_squared,
    }
}

fn scalars(t: &DoubleTensors) -> Scalars {
    let n = t.group().order() as f64;
    Scalars {
        one: SparseTensor::scalar(Complex64::new(1.0, 0.0)),
        inv_n_squared: SparseTensor::scalar(Complex64::new(1.0 / (n * n), 0.0)),
    }
}

fn terms<'a>(t: &'a DoubleTensors, s: &'a Scalars, side: Side) -> Vec<(&'a SparseTensor, &'static str)> {
    side.iter().map(|(name, labels)| (resolve(t, s, *name), *labels)).collect()
}

fn check(t: &DoubleTensors, s: &Scalars, ax: &Axiom, mode: VerifyMode, tolerance: f64) -> AxiomReport {
    let lhs = terms(t, s, ax.lhs);
    let rhs = terms(t, s, ax.rhs);
    let (residual, counterexample, checked) = match mode {
        VerifyMode::Exhaustive => {
            let a = Contraction::new(&lhs, ax.free, "").evaluate();
            let b = Contraction::new(&rhs, ax.free, "").evaluate();
            let (res, first) = a.compare(&b);
            (res, first, Checked::Exhaustive)
        }
        VerifyMode::Sampled {
            samples_per_axiom,
            seed,
        } => {
            let a = Contraction::new(&lhs, ax.free, ax.free);
            let b = Contraction::new(&rhs, ax.free, ax.free);
            let tuples = sample_tuples(t, ax, &lhs, &rhs, samples_per_axiom, seed);
            let mut worst = 0.0f64;
            let mut first: Option<Vec<usize>> = None;
            for tuple in tuples {
                let d = (a.value_at(&tuple) - b.value_at(&tuple)).norm();
                if d > 0.0 {
                    worst = worst.max(d);
                    if first.as_ref().is_none_or(|f| &tuple < f) {
                        first = Some(tuple);
                    }
                }
            }
            (worst, first, Checked::Sampled(samples_per_axiom))
        }
    };
    AxiomReport {
        id: ax.id,
        description: ax.description,
        passed: residual <= tolerance,
        residual,
        counterexample,
        free_labels: ax.free,
        checked,
    }
}

/// Free-index tuples for sampled verification. Half the tuples are seeded
/// from a random nonzero entry of the first term of one side so that the
/// sample is not dominated by trivially-zero tuples.
fn sample_tuples(
    t: &DoubleTensors,
    ax: &Axiom,
    lhs: &[(&SparseTensor, &str)],
    rhs: &[(&SparseTensor, &str)],
    count: usize,
    seed: u64,
) -> Vec<Vec<usize>> {
    let dim = t.dim();
    let free: Vec<char> = ax.free.chars().collect();
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in ax.id.bytes() {
        h = h.rotate_left(5) ^ b as u64;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(h);
    let sides = [lhs[0], rhs[0]];
    (0..count)
        .map(|i| {
            let mut tuple: Vec<usize> = (0..free.len()).map(|_| rng.random_range(0..dim)).collect();
            let (tensor, labels) = sides[i % 2];
            if i % 4 < 2 && tensor.nnz() > 0 {
                let (entry, _) = tensor.entry(rng.random_range(0..tensor.nnz()));
                for (slot, c) in labels.chars().enumerate() {
                    if let Some(pos) = free.iter().position(|&f| f == c) {
                        tuple[pos] = entry[slot] as usize;
                    }
                }
            }
            tuple
        })
        .collect()
}

pub(super) fn verify(t: &DoubleTensors, mode: VerifyMode) -> Vec<AxiomReport> {
    let s = scalars(t);
    let mut reports: Vec<AxiomReport> = AXIOMS
        .par_iter()
        .map(|ax| check(t, &s, ax, mode, 0.0))
        .collect();
    reports.push(skew_equals_antipode(t));
    reports.extend(dual_pairing(t));
    reports
}

pub(super) fn special_element_reports(t: &DoubleTensors) -> Vec<AxiomReport> {
    let s = scalars(t);
    SPECIAL
        .iter()
        .map(|ax| check(t, &s, ax, VerifyMode::Exhaustive, SPECIAL_TOLERANCE))
        .collect()
}

fn tensor_report(
    id: &'static str,
    description: &'static str,
    free: &'static str,
    a: &SparseTensor,
    b: &SparseTensor,
) -> AxiomReport {
    let (residual, counterexample) = a.compare(b);
    AxiomReport {
        id,
        description,
        passed: residual == 0.0,
        residual,
        counterexample,
        free_labels: free,
        checked: Checked::Exhaustive,
    }
}

fn skew_equals_antipode(t: &DoubleTensors) -> AxiomReport {
    tensor_report(
        "skew-equals-antipode",
        "S̃ coincides with S for a group double",
        "mk",
        &t.skew_antipode,
        &t.antipode,
    )
}

/// Λ read as the comultiplication of D (built from the explicit coproduct
/// formula) and Ω read as the comultiplication of ribbon operators (built
/// from the ribbon form of its delta formula).
fn dual_pairing(t: &DoubleTensors) -> Vec<AxiomReport> {
    let g = t.group();
    let n = g.order();
    let mut comult = SparseTensor::new(3);
    for k in 0..t.dim() {
        for (a, b) in comultiply_double(g, DoubleIndex::from_flat(k, n)) {
            comult.add(&[a.flat(n), b.flat(n), k], Complex64::new(1.0, 0.0));
        }
    }
    let mut ribbon = SparseTensor::new(3);
    for h in g.elements() {
        for g1 in g.elements() {
            for g2 in g.elements() {
                let h2 = g.conj(g.inv(g1), h);
                ribbon.add(
                    &[t.index(h, g.mul(g1, g2)), t.index(h, g1), t.index(h2, g2)],
                    Complex64::new(1.0, 0.0),
                );
            }
        }
    }
    vec![
        tensor_report(
            "dual.lambda",
            "F multiplication equals D comultiplication",
            "mnk",
            &t.lambda,
            &comult,
        ),
        tensor_report(
            "dual.omega",
            "D multiplication equals ribbon comultiplication",
            "kmn",
            &t.omega,
            &ribbon,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn tensors(name: &str) -> DoubleTensors {
        DoubleTensors::build(&FiniteGroup::builtin(name).unwrap())
    }

    #[test]
    fn z2_and_s3_pass_exhaustively() {
        for name in ["Z2", "S3"] {
            for r in tensors(name).verify_axioms(VerifyMode::Exhaustive) {
                assert!(r.passed, "{name} {} residual {} at {:?}", r.id, r.residual, r.counterexample);
                assert_eq!(r.residual, 0.0);
            }
        }
    }

    #[test]
    fn special_elements_hold() {
        for name in ["Z2", "S3"] {
            let t = tensors(name);
            let (c, _tau, reports) = t.special_elements();
            for r in reports {
                assert!(r.passed, "{name} {}", r.id);
            }
            if name == "Z2" {
                assert_eq!(c.nnz(), 2);
                assert!(c.iter().all(|(_, v)| v == Complex64::new(0.5, 0.0)));
            }
        }
    }

    #[test]
    fn moved_antipode_entry_breaks_antipode_axiom() {
        let mut t = tensors("S3");
        let (first, _) = t.antipode.iter().next().unwrap();
        let mut target = first.clone();
        target[1] = (target[1] + 1) % t.dim();
        t.antipode.move_entry(&first, &target);
        let reports = t.verify_axioms(VerifyMode::Exhaustive);
        let r = reports.iter().find(|r| r.id == "antipode.left").unwrap();
        assert!(!r.passed);
        assert!(r.residual > 0.0);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn sampled_mode_agrees_on_small_group() {
        let t = tensors("S3");
        let reports = t.verify_axioms(VerifyMode::Sampled {
            samples_per_axiom: 2_000,
            seed: 3,
        });
        assert!(reports.iter().all(|r| r.passed));
    }
}
