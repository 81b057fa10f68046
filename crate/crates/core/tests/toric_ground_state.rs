use anyon_lab::toric::TorusCode;
use nalgebra::{DMatrix, DVector};

/// Dense oracle on the 2×2 torus: 8 qubits, basis state `b` has qubit `q`
/// in `|1⟩` when bit `q` of `b` is set.
struct Dense {
    n: usize,
    stars: Vec<u32>,
    plaquettes: Vec<u32>,
}

impl Dense {
    fn new(code: &TorusCode) -> Self {
        let mask = |qs: [usize; 4]| qs.iter().fold(0u32, |m, &q| m ^ 1 << q);
        Dense {
            n: code.num_qubits(),
            stars: (0..code.num_sites()).map(|s| mask(code.star(s))).collect(),
            plaquettes: (0..code.num_sites()).map(|p| mask(code.plaquette(p))).collect(),
        }
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    fn x(&self, mask: u32) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| f64::from(u8::from(r as u32 == c as u32 ^ mask)))
    }

    fn z(&self, mask: u32) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            if r != c {
                0.0
            } else if (r as u32 & mask).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Projector onto the joint +1 eigenspace of every star and plaquette.
    fn code_projector(&self) -> DMatrix<f64> {
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        let mut p = id.clone();
        for &s in &self.stars {
            p = p * (&id + self.x(s)) * 0.5;
        }
        for &m in &self.plaquettes {
            p = p * (&id + self.z(m)) * 0.5;
        }
        p
    }
}

#[test]
fn logical_orbit_of_star_average_spans_ground_space() {
    let code = TorusCode::new(2).unwrap();
    let d = Dense::new(&code);
    let id = DMatrix::<f64>::identity(d.dim(), d.dim());
    let p = d.code_projector();
    assert!((&p * &p - &p).norm() < 1e-12);
    assert!((p.trace() - 4.0).abs() < 1e-12);

    let mut vacuum = DVector::<f64>::zeros(d.dim());
    vacuum[0] = 1.0;
    let mut psi = vacuum;
    for &s in &d.stars {
        psi = (&id + d.x(s)) * psi;
    }
    let cut = |w: usize| code.x_cut(w).iter().fold(0u32, |m, &q| m ^ 1 << q);
    let mut basis = Vec::new();
    for a in 0..2u32 {
        for b in 0..2u32 {
            let v = d.x(cut(0) * a ^ cut(1) * b) * &psi;
            assert!((&p * &v - &v).norm() < 1e-12, "vector ({a}, {b}) leaves the code space");
            basis.push(v.normalize());
        }
    }
    let gram = DMatrix::from_fn(4, 4, |i, j| basis[i].dot(&basis[j]));
    assert!((gram - DMatrix::<f64>::identity(4, 4)).norm() < 1e-12);
    let span = DMatrix::from_columns(&basis);
    assert!((&span * span.transpose() - &p).norm() < 1e-12);
}

#[test]
fn stabilizers_commute_and_logicals_anticommute_in_pairs() {
    let code = TorusCode::new(2).unwrap();
    let d = Dense::new(&code);
    for &s in &d.stars {
        for &m in &d.plaquettes {
            let (x, z) = (d.x(s), d.z(m));
            assert!((&x * &z - &z * &x).norm() < 1e-12);
        }
    }
    let [z1, z2, x1, x2] = code.logicals();
    let mask = |op: &anyon_lab::toric::PauliOperator| op.support().iter().fold(0u32, |m, &q| m ^ 1 << q);
    for (zs, xs, anti) in [(&z1, &x1, true), (&z2, &x2, true), (&z1, &x2, false), (&z2, &x1, false)] {
        let (z, x) = (d.z(mask(zs)), d.x(mask(xs)));
        let want = if anti { -(&x * &z) } else { &x * &z };
        assert!((&z * &x - want).norm() < 1e-12);
    }
}
