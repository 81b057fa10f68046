use anyon_lab::double::DoubleTensors;
use anyon_lab::group::FiniteGroup;
use anyon_lab::lattice::{GenericLattice, LatticeModel};

#[test]
fn model_tensors_match_direct_construction() {
    for name in ["Z2", "Z3", "S3"] {
        let g = FiniteGroup::builtin(name).unwrap();
        let m = LatticeModel::new(g.clone(), GenericLattice::torus(2, 1).unwrap()).unwrap();
        let (a, b) = (m.tensors(), DoubleTensors::build(&g));
        let fields = |t: &DoubleTensors| {
            [&t.omega, &t.lambda, &t.epsilon, &t.unit, &t.antipode, &t.skew_antipode, &t.r, &t.r_bar, &t.c, &t.tau, &t.delta]
                .map(Clone::clone)
        };
        assert!(fields(a) == fields(&b), "{name}");
    }
}

/// On a torus the ground-space dimension counts the irreps of the double:
/// pairs of a conjugacy class and an irrep of its centralizer.
#[test]
fn torus_ground_space_counts_double_irreps() {
    for (name, want) in [("Z2", 4), ("Z3", 9), ("S3", 8)] {
        let g = FiniteGroup::builtin(name).unwrap();
        let m = LatticeModel::new(g, GenericLattice::torus(2, 1).unwrap()).unwrap();
        let gs = m.ground_space(1e-9);
        assert_eq!(gs.len(), want, "{name}");
        for v in &gs {
            assert!(m.apply_hamiltonian(v).norm() < 1e-9);
        }
    }
}

#[test]
fn sphere_ground_space_is_unique() {
    let g = FiniteGroup::builtin("S3").unwrap();
    let m = LatticeModel::new(g, GenericLattice::tetrahedron()).unwrap();
    assert_eq!(m.ground_space(1e-9).len(), 1);
}
