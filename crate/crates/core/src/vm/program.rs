use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Direction, LogEntry, VmError, VmGroup, VmState};
use crate::decoder::splitmix;
use crate::group::{Element, FiniteGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instruction {
    /// Uniform pair over the class of the given representative.
    Create(Element),
    CreateRef(Element),
    Pull(usize, usize),
    Swap(usize, Direction),
    MeasV(usize),
    FuseCharge(usize),
}

/// Parsed braid program; each instruction keeps its 1-based source line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub instructions: Vec<(usize, Instruction)>,
}

impl Program {
    /// One instruction per line, `#` starts a comment. Elements are in
    /// cycle notation, pairs are 1-based creation indices.
    pub fn parse(text: &str, group: &FiniteGroup) -> Result<Self, VmError> {
        let mut instructions = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| VmError::Parse { line, message };
            let (op, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            let args: Vec<&str> = rest.split_whitespace().collect();
            let pair = |s: &str| -> Result<usize, VmError> {
                s.parse::<usize>()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| err(format!("bad pair index {s:?}")))
            };
            let element = |s: &str| group.parse_element(s).map_err(|e| err(e.to_string()));
            let arity = |k: usize| -> Result<(), VmError> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(err(format!("{op} takes {k} argument(s)")))
                }
            };
            let ins = match op.to_ascii_uppercase().as_str() {
                "CREATE" => Instruction::Create(element(rest)?),
                "CREATEREF" => Instruction::CreateRef(element(rest)?),
                "PULL" => {
                    arity(2)?;
                    Instruction::Pull(pair(args[0])?, pair(args[1])?)
                }
                "SWAP" => {
                    arity(2)?;
                    let d = Direction::parse(args[1]).ok_or_else(|| err(format!("bad direction {:?}", args[1])))?;
                    Instruction::Swap(pair(args[0])?, d)
                }
                "MEASV" => {
                    arity(1)?;
                    Instruction::MeasV(pair(args[0])?)
                }
                "FUSECHARGE" => {
                    arity(1)?;
                    Instruction::FuseCharge(pair(args[0])?)
                }
                other => return Err(err(format!("unknown instruction {other:?}"))),
            };
            instructions.push((line, ins));
        }
        Ok(Program { instructions })
    }
}

impl VmState {
    pub fn execute<R: rand::Rng + ?Sized>(&mut self, ins: Instruction, rng: &mut R) -> Result<(), VmError> {
        match ins {
            Instruction::Create(rep) => {
                self.create_in_class_of(rep)?;
            }
            Instruction::CreateRef(v) => {
                self.create_reference(v);
            }
            Instruction::Pull(i, j) => self.pull(i, j)?,
            Instruction::Swap(i, d) => self.swap(i, d)?,
            Instruction::MeasV(i) => {
                self.measure_value(i, rng)?;
            }
            Instruction::FuseCharge(i) => {
                self.fuse_charge(i, rng)?;
            }
        }
        self.check_norm()
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub log: Vec<LogEntry>,
    pub state: VmState,
}

/// Runs `program` on a fresh state with a ChaCha8 stream seeded by `seed`.
pub fn run_program(program: &Program, data: &Arc<VmGroup>, seed: u64) -> Result<RunOutput, VmError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = VmState::new(data.clone());
    for &(line, ins) in &program.instructions {
        state
            .execute(ins, &mut rng)
            .map_err(|e| VmError::AtLine { line, source: Box::new(e) })?;
    }
    Ok(RunOutput { log: state.log().to_vec(), state })
}

/// Seed of shot `shot` of a multi-shot run.
pub fn derive_shot_seed(master: u64, shot: u64) -> u64 {
    splitmix(splitmix(master) ^ shot)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotSummary {
    pub shots: u64,
    /// Full measurement log of a shot, one entry per line joined by `; `,
    /// mapped to the number of shots that produced it.
    pub histogram: BTreeMap<String, u64>,
}

/// Runs `shots` independent copies of `program`, shot `t` seeded by
/// [`derive_shot_seed`]. The histogram does not depend on `threads`.
pub fn run_shots(
    program: &Program,
    data: &Arc<VmGroup>,
    seed: u64,
    shots: u64,
    threads: Option<usize>,
) -> Result<ShotSummary, VmError> {
    let work = || -> Result<BTreeMap<String, u64>, VmError> {
        (0..shots)
            .into_par_iter()
            .map(|t| {
                let out = run_program(program, data, derive_shot_seed(seed, t))?;
                let key: Vec<String> = out.log.iter().map(|e| data.describe(e)).collect();
                Ok(BTreeMap::from([(key.join("; "), 1u64)]))
            })
            .try_reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                Ok(a)
            })
    };
    let histogram = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| VmError::ThreadPool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(ShotSummary { shots, histogram })
}
