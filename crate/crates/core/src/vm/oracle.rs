//! Step-by-step comparison of the pair-level VM against the particle-level
//! topological-operator model on random programs.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{derive_shot_seed, Direction, Instruction, Program, VmError, VmGroup, VmState};
use crate::double::DoubleTensors;
use crate::group::{Element, FiniteGroup};
use crate::lattice::VortexChain;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub scenarios: usize,
    pub instructions: usize,
    /// Largest amplitude or probability difference seen at any step.
    pub max_residual: f64,
    /// Scenarios whose sampled outcomes differed.
    pub outcome_mismatches: usize,
}

impl OracleReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_residual <= tolerance && self.outcome_mismatches == 0
    }
}

/// Random program: a few pairs, then pulls, swaps, creations and
/// measurements, ending with the fusion of every pair still alive.
pub fn random_program(group: &FiniteGroup, seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = group.conjugacy_classes();
    let mut live: Vec<usize> = Vec::new();
    let mut created = 0;
    let mut out = Vec::new();
    let mut create = |rng: &mut ChaCha8Rng, live: &mut Vec<usize>, out: &mut Vec<Instruction>| {
        if rng.random_bool(0.5) {
            let c = &classes[rng.random_range(1..classes.len())];
            out.push(Instruction::Create(c.members[rng.random_range(0..c.size())]));
        } else {
            out.push(Instruction::CreateRef(rng.random_range(0..group.order())));
        }
        created += 1;
        live.push(created);
    };
    for _ in 0..rng.random_range(2..=3) {
        create(&mut rng, &mut live, &mut out);
    }
    for _ in 0..rng.random_range(4..=8) {
        let pick = |rng: &mut ChaCha8Rng, live: &[usize]| live[rng.random_range(0..live.len())];
        match rng.random_range(0..10) {
            0..=3 if live.len() >= 2 => {
                let i = pick(&mut rng, &live);
                let others: Vec<usize> = live.iter().copied().filter(|&p| p != i).collect();
                out.push(Instruction::Pull(i, pick(&mut rng, &others)));
            }
            4 | 5 => {
                let d = if rng.random_bool(0.5) { Direction::Counterclockwise } else { Direction::Clockwise };
                out.push(Instruction::Swap(pick(&mut rng, &live), d));
            }
            6 => out.push(Instruction::MeasV(pick(&mut rng, &live))),
            7 if live.len() >= 2 => {
                let i = pick(&mut rng, &live);
                out.push(Instruction::FuseCharge(i));
                live.retain(|&p| p != i);
            }
            8 if live.len() < 4 => create(&mut rng, &mut live, &mut out),
            _ => out.push(Instruction::MeasV(pick(&mut rng, &live))),
        }
    }
    for &p in &live {
        out.push(Instruction::FuseCharge(p));
    }
    Program { instructions: out.into_iter().enumerate().map(|(n, i)| (n + 1, i)).collect() }
}

/// VM amplitudes rewritten as particle tuples in the oracle's line order.
fn vm_as_particles(vm: &VmState, order: &[usize]) -> BTreeMap<Vec<Element>, Complex64> {
    let g = vm.group();
    let live = vm.live_pairs();
    let slot: Vec<usize> = order.iter().map(|p| live.iter().position(|q| q == p).unwrap()).collect();
    vm.amplitudes()
        .iter()
        .map(|(k, &a)| (slot.iter().flat_map(|&s| [k[s], g.inv(k[s])]).collect(), a))
        .collect()
}

fn state_residual(a: &BTreeMap<Vec<Element>, Complex64>, b: &BTreeMap<Vec<Element>, Complex64>) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

fn max_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs `program` on both models with one shared random stream, comparing
/// distributions before every measurement and full states after every
/// instruction. Returns the largest difference and whether the sampled
/// outcomes agreed.
pub fn compare_with_oracle(
    data: &std::sync::Arc<VmGroup>,
    tensors: &DoubleTensors,
    program: &Program,
    seed: u64,
) -> Result<(f64, bool), VmError> {
    let mut vm = VmState::new(data.clone());
    let mut chain = VortexChain::new(tensors, data.characters());
    let mut vm_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut agree = true;
    for &(_, ins) in &program.instructions {
        match ins {
            Instruction::Create(rep) => {
                vm.create_in_class_of(rep)?;
                chain.create(&data.classes()[data.class_of(rep)].members);
            }
            Instruction::CreateRef(v) => {
                vm.create_reference(v);
                chain.create(&[v]);
            }
            Instruction::Pull(i, j) => {
                vm.pull(i, j)?;
                chain.pull(i, j);
            }
            Instruction::Swap(i, d) => {
                vm.swap(i, d)?;
                chain.swap(i, d);
            }
            Instruction::MeasV(i) => {
                let (a, b) = (vm.value_distribution(i)?, chain.value_distribution(i));
                agree &= a.keys().eq(b.keys());
                worst = worst.max(max_diff(a.into_values(), b.into_values()));
                agree &= vm.measure_value(i, &mut vm_rng)? == chain.measure_value(i, &mut oracle_rng);
            }
            Instruction::FuseCharge(i) => {
                worst = worst.max(max_diff(vm.charge_distribution(i)?, chain.charge_distribution(i)));
                agree &= vm.fuse_charge(i, &mut vm_rng)? == chain.fuse_charge(i, &mut oracle_rng);
            }
        }
        vm.check_norm()?;
        worst = worst.max(state_residual(&vm_as_particles(&vm, chain.order()), chain.amplitudes()));
    }
    Ok((worst, agree))
}

/// `scenarios` random programs, each run with three seeds.
pub fn cross_check_oracle(group: &FiniteGroup, scenarios: usize, seed: u64) -> Result<OracleReport, VmError> {
    let data = VmGroup::new(group)?;
    let tensors = DoubleTensors::build(group);
    let mut report = OracleReport { scenarios, instructions: 0, max_residual: 0.0, outcome_mismatches: 0 };
    for s in 0..scenarios as u64 {
        let program = random_program(group, derive_shot_seed(seed, s));
        report.instructions += program.instructions.len();
        let mut agree = true;
        for run in 0..3 {
            let (r, ok) = compare_with_oracle(&data, &tensors, &program, derive_shot_seed(seed ^ 0x5eed, 3 * s + run))?;
            report.max_residual = report.max_residual.max(r);
            agree &= ok;
        }
        report.outcome_mismatches += usize::from(!agree);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_agrees_with_oracle() {
        let g = FiniteGroup::builtin("S3").unwrap();
        let r = cross_check_oracle(&g, 20, 1).unwrap();
        assert!(r.passed(1e-12), "{r:?}");
        assert!(r.instructions >= 20 * 6);
    }

    #[test]
    fn random_programs_fuse_everything() {
        let g = FiniteGroup::builtin("S3").unwrap();
        let d = VmGroup::new(&g).unwrap();
        for s in 0..10 {
            let out = super::super::run_program(&random_program(&g, s), &d, s).unwrap();
            assert!(out.state.live_pairs().is_empty());
            assert_eq!(out.state.amplitudes().len(), 1);
        }
    }
}
