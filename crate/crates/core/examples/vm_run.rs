// Vortex pairs in S5 used as classical bits: pull-through computes
// conjugates, and fusing a pair reveals its electric charge.
//
// ```bash
// cargo run --example vm_run
// ```

use anyon_lab::group::FiniteGroup;
use anyon_lab::vm::{run_program, run_shots, Program, VmGroup, VmState};

const PROGRAM: &str = "\
# reference pairs u = (1 2) and v = (2 3)
CREATEREF (1 2)
CREATEREF (2 3)
# pull pair 1 through pair 2: u becomes v u v^-1 = (1 3)
PULL 1 2
MEASV 1
# a fresh transposition pair carries no charge
CREATE (1 2)
FUSECHARGE 3
# a definite pair does
FUSECHARGE 1
";

pub fn run_example() -> anyhow::Result<()> {
    let g = FiniteGroup::builtin("S5")?;
    let data = VmGroup::new(&g)?;
    let program = Program::parse(PROGRAM, &g)?;

    let out = run_program(&program, &data, 7)?;
    for e in &out.log {
        println!("{}", data.describe(e));
    }

    let mut state = VmState::new(data.clone());
    let pair = state.create_reference(g.parse_element("(1 2)")?);
    let p = state.charge_distribution(pair)?;
    println!("\ncharge of a definite (1 2) pair:");
    for (r, q) in p.iter().enumerate().filter(|(_, q)| **q > 1e-12) {
        println!("  {:<18} {q:.4}", data.irrep_label(r));
    }

    let summary = run_shots(&program, &data, 7, 2000, None)?;
    println!("\n{} shots:", summary.shots);
    for (outcome, count) in &summary.histogram {
        println!("  {count:>5}  {outcome}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
