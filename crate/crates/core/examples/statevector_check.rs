// Exact state vectors of the group lattice model: ground spaces on the
// sphere and the torus, and a ribbon operator creating a particle pair.
//
// ```bash
// cargo run --release --example statevector_check
// ```

use anyon_lab::group::FiniteGroup;
use anyon_lab::lattice::{ground_suite, straight_ribbon, GenericLattice, LatticeModel};
use num_complex::Complex64;

pub fn run_example() -> anyhow::Result<()> {
    for (group, lattice) in [("Z2", "torus:2x2"), ("Z2", "tetrahedron"), ("S3", "torus:2x1")] {
        let m = LatticeModel::new(FiniteGroup::builtin(group)?, GenericLattice::parse(lattice)?)?;
        let ground = m.ground_space(1e-10);
        println!("{group} on {lattice}: {} amplitudes, ground space dimension {}", m.dim(), ground.len());
    }

    // Σ_g F^(h,g) on a two-step ribbon moves flux h from one end to the
    // other; from the vacuum it excites only the two faces at the ends
    let z2 = FiniteGroup::builtin("Z2")?;
    let flip = z2.elements().find(|&g| g != z2.identity()).unwrap();
    let m = LatticeModel::new(z2, GenericLattice::torus(3, 3)?)?;
    let vacuum = m.vacuum();
    let ribbon = straight_ribbon(m.lattice(), 0, 0, 2)?;
    let mut excited = m.zero_state();
    for g in m.group().elements() {
        let k = m.tensors().index(flip, g);
        excited.add_scaled(Complex64::new(1.0, 0.0), &m.apply_ribbon(&vacuum, &ribbon, k));
    }
    println!(
        "ribbon {:?} -> {:?}: norm {:.4}, energy {:.1}",
        ribbon.start(),
        ribbon.end(),
        excited.norm(),
        excited.inner(&m.apply_hamiltonian(&excited)).re / excited.norm().powi(2)
    );

    let reports = ground_suite(&m);
    for r in &reports {
        println!("{:<52} {}", r.name, if r.passed { "pass" } else { "FAIL" });
    }
    anyhow::ensure!(reports.iter().all(|r| r.passed));
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
