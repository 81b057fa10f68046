//! The toric code on a `k × k` torus.
//!
//! Vertex `(r, c)` and face `(r, c)` both have index `r * k + c`. Each vertex
//! owns two edges: the horizontal edge `h(r, c) = 2(rk + c)` from `(r, c)` to
//! `(r, c+1)` and the vertical edge `v(r, c) = 2(rk + c) + 1` from `(r, c)` to
//! `(r+1, c)`. Face `(r, c)` is bounded by `h(r, c)`, `v(r, c+1)`,
//! `h(r+1, c)` and `v(r, c)`.

mod distance;
mod pauli;

use thiserror::Error;

pub use distance::{min_logical_weight, shortest_nontrivial_cycle, DistanceSearch};
pub use pauli::PauliOperator;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("lattice size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("operator acts on {got} qubits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("path is not connected at step {0}")]
    Disconnected(usize),
    #[error("edge {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("syndrome has odd parity")]
    OddSyndrome,
    #[error("{0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Violated stabilizers, as sorted vertex and face indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub vertices: Vec<usize>,
    pub faces: Vec<usize>,
}

impl Syndrome {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.faces.is_empty()
    }
}

/// Winding parities of a syndrome-free operator. `z_class` is measured by
/// the Z part against the cuts `X1`, `X2`; `x_class` by the X part against
/// the loops `Z1`, `Z2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    pub z_class: [bool; 2],
    pub x_class: [bool; 2],
}

impl HomologyClass {
    pub fn is_trivial(&self) -> bool {
        self.z_class == [false; 2] && self.x_class == [false; 2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Stabilizer,
    Logical(HomologyClass),
    Detectable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringKind {
    /// σ^z along a path of lattice edges.
    Z,
    /// σ^x along a path of dual edges (consecutive edges share a face).
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParameters {
    pub n: usize,
    pub independent_checks: usize,
    pub logical_qubits: usize,
}

impl CodeParameters {
    pub fn logical_dim(&self) -> u128 {
        1u128 << self.logical_qubits
    }
}

#[derive(Clone, Debug)]
pub struct TorusCode {
    k: usize,
    stars: Vec<[usize; 4]>,
    plaquettes: Vec<[usize; 4]>,
    /// Endpoints and adjacent faces of each edge.
    edge_vertices: Vec<[usize; 2]>,
    edge_faces: Vec<[usize; 2]>,
}

impl TorusCode {
    pub fn new(k: usize) -> Result<Self, ToricError> {
        if k < 2 {
            return Err(ToricError::TooSmall(k));
        }
        let mut code = Self {
            k,
            stars: Vec::with_capacity(k * k),
            plaquettes: Vec::with_capacity(k * k),
            edge_vertices: vec![[0; 2]; 2 * k * k],
            edge_faces: vec![[0; 2]; 2 * k * k],
        };
        for r in 0..k {
            for c in 0..k {
                let star = [
                    code.h(r, c),
                    code.h(r, code.wrap(c as isize - 1)),
                    code.v(r, c),
                    code.v(code.wrap(r as isize - 1), c),
                ];
                code.stars.push(star);
                let plaquette = [code.h(r, c), code.v(r, (c + 1) % k), code.h((r + 1) % k, c), code.v(r, c)];
                code.plaquettes.push(plaquette);
            }
        }
        for r in 0..k {
            for c in 0..k {
                let here = code.vertex(r, c);
                let (h, v) = (code.h(r, c), code.v(r, c));
                let (up, left) = (code.wrap(r as isize - 1), code.wrap(c as isize - 1));
                code.edge_vertices[h] = [here, code.vertex(r, (c + 1) % k)];
                code.edge_vertices[v] = [here, code.vertex((r + 1) % k, c)];
                code.edge_faces[h] = [code.face(r, c), code.face(up, c)];
                code.edge_faces[v] = [code.face(r, left), code.face(r, c)];
            }
        }
        Ok(code)
    }

    fn wrap(&self, x: isize) -> usize {
        x.rem_euclid(self.k as isize) as usize
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.k * self.k
    }

    pub fn num_sites(&self) -> usize {
        self.k * self.k
    }

    pub fn vertex(&self, r: usize, c: usize) -> usize {
        r * self.k + c
    }

    pub fn face(&self, r: usize, c: usize) -> usize {
        r * self.k + c
    }

    pub fn h(&self, r: usize, c: usize) -> usize {
        2 * (r * self.k + c)
    }

    pub fn v(&self, r: usize, c: usize) -> usize {
        2 * (r * self.k + c) + 1
    }

    /// `(row, col, orientation)` of an edge.
    pub fn edge_position(&self, e: usize) -> (usize, usize, Orientation) {
        let cell = e / 2;
        let o = if e % 2 == 0 {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        };
        (cell / self.k, cell % self.k, o)
    }

    pub fn star(&self, s: usize) -> [usize; 4] {
        self.stars[s]
    }

    pub fn plaquette(&self, p: usize) -> [usize; 4] {
        self.plaquettes[p]
    }

    /// Origin and terminus vertices of an edge.
    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        self.edge_vertices[e]
    }

    /// The two faces containing an edge.
    pub fn faces_of(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    /// `A_s`: σ^x on the star of `s`.
    pub fn star_operator(&self, s: usize) -> PauliOperator {
        PauliOperator::x_on(self.num_qubits(), self.stars[s])
    }

    /// `B_p`: σ^z on the boundary of `p`.
    pub fn plaquette_operator(&self, p: usize) -> PauliOperator {
        PauliOperator::z_on(self.num_qubits(), self.plaquettes[p])
    }

    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        (0..self.num_sites())
            .map(|s| self.star_operator(s))
            .chain((0..self.num_sites()).map(|p| self.plaquette_operator(p)))
            .collect()
    }

    fn check_len(&self, e: &PauliOperator) -> Result<(), ToricError> {
        if e.num_qubits() != self.num_qubits() {
            return Err(ToricError::LengthMismatch {
                expected: self.num_qubits(),
                got: e.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn syndrome(&self, e: &PauliOperator) -> Result<Syndrome, ToricError> {
        self.check_len(e)?;
        let odd = |edges: &[usize; 4], bit: &dyn Fn(usize) -> bool| {
            edges.iter().filter(|&&q| bit(q)).count() % 2 == 1
        };
        Ok(Syndrome {
            vertices: (0..self.num_sites())
                .filter(|&s| odd(&self.stars[s], &|q| e.z(q)))
                .collect(),
            faces: (0..self.num_sites())
                .filter(|&p| odd(&self.plaquettes[p], &|q| e.x(q)))
                .collect(),
        })
    }

    /// Edges of the reference loop `Z1` (row 0) or `Z2` (column 0).
    pub fn z_loop(&self, which: usize) -> Vec<usize> {
        match which {
            0 => (0..self.k).map(|c| self.h(0, c)).collect(),
            _ => (0..self.k).map(|r| self.v(r, 0)).collect(),
        }
    }

    /// Edges of the reference dual cut `X1` (crosses `Z1` once) or `X2`
    /// (crosses `Z2` once).
    pub fn x_cut(&self, which: usize) -> Vec<usize> {
        match which {
            0 => (0..self.k).map(|r| self.h(r, 0)).collect(),
            _ => (0..self.k).map(|c| self.v(0, c)).collect(),
        }
    }

    /// Logical operators `[Z1, Z2, X1, X2]`.
    pub fn logicals(&self) -> [PauliOperator; 4] {
        let n = self.num_qubits();
        [
            PauliOperator::z_on(n, self.z_loop(0)),
            PauliOperator::z_on(n, self.z_loop(1)),
            PauliOperator::x_on(n, self.x_cut(0)),
            PauliOperator::x_on(n, self.x_cut(1)),
        ]
    }

    /// Crossing parities with the reference cycles; meaningful only when
    /// the syndrome is empty.
    pub fn winding(&self, e: &PauliOperator) -> HomologyClass {
        let parity = |edges: Vec<usize>, bit: &dyn Fn(usize) -> bool| {
            edges.into_iter().filter(|&q| bit(q)).count() % 2 == 1
        };
        HomologyClass {
            z_class: [
                parity(self.x_cut(0), &|q| e.z(q)),
                parity(self.x_cut(1), &|q| e.z(q)),
            ],
            x_class: [
                parity(self.z_loop(0), &|q| e.x(q)),
                parity(self.z_loop(1), &|q| e.x(q)),
            ],
        }
    }

    /// Homology class of a syndrome-free operator, `None` otherwise.
    pub fn homology(&self, e: &PauliOperator) -> Result<Option<HomologyClass>, ToricError> {
        Ok(self.syndrome(e)?.is_empty().then(|| self.winding(e)))
    }

    pub fn classify(&self, e: &PauliOperator) -> Result<ErrorClass, ToricError> {
        Ok(match self.homology(e)? {
            None => ErrorClass::Detectable,
            Some(h) if h.is_trivial() => ErrorClass::Stabilizer,
            Some(h) => ErrorClass::Logical(h),
        })
    }

    pub fn parameters(&self) -> CodeParameters {
        let n = self.num_qubits();
        let rows: Vec<Vec<u64>> = self
            .stabilizers()
            .iter()
            .map(|s| s.x_words().iter().chain(s.z_words()).copied().collect())
            .collect();
        let m = gf2_rank(rows);
        CodeParameters {
            n,
            independent_checks: m,
            logical_qubits: n - m,
        }
    }

    /// Product of σ^z (lattice path) or σ^x (dual path) along `edges`.
    /// Consecutive edges must share a vertex, respectively a face.
    pub fn string_operator(&self, edges: &[usize], kind: StringKind) -> Result<PauliOperator, ToricError> {
        let n = self.num_qubits();
        if let Some(&e) = edges.iter().find(|&&e| e >= n) {
            return Err(ToricError::EdgeOutOfRange(e));
        }
        let touch = |e: usize| match kind {
            StringKind::Z => self.edge_vertices[e],
            StringKind::X => self.edge_faces[e],
        };
        for (i, w) in edges.windows(2).enumerate() {
            let (a, b) = (touch(w[0]), touch(w[1]));
            if !a.iter().any(|x| b.contains(x)) {
                return Err(ToricError::Disconnected(i + 1));
            }
        }
        Ok(match kind {
            StringKind::Z => PauliOperator::z_on(n, edges.iter().copied()),
            StringKind::X => PauliOperator::x_on(n, edges.iter().copied()),
        })
    }

    /// Sign of `X1⁻¹ Z1⁻¹ X1 Z1`: moving an x-particle around a z-particle.
    pub fn loop_exchange_phase(&self) -> i32 {
        let [z1, _, x1, _] = self.logicals();
        let w = x1
            .inverse()
            .mul(&z1.inverse())
            .and_then(|w| w.mul(&x1))
            .and_then(|w| w.mul(&z1))
            .expect("same code");
        assert!(w.is_scalar(), "group commutator of Paulis is a phase");
        match w.phase() {
            0 => 1,
            2 => -1,
            p => panic!("commutator phase i^{p} is not real"),
        }
    }
}

/// Rank over GF(2) of packed bit rows.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len() * 64);
    let mut rank = 0;
    for col in 0..width {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] >> b & 1 == 1 {
                row.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rejects_tiny_lattice() {
        assert_eq!(TorusCode::new(1).unwrap_err(), ToricError::TooSmall(1));
    }

    #[test]
    fn parameters_small_sizes() {
        for (k, m) in [(2, 6), (3, 16), (5, 48)] {
            let p = TorusCode::new(k).unwrap().parameters();
            assert_eq!(p.n, 2 * k * k);
            assert_eq!(p.independent_checks, m);
            assert_eq!(p.logical_dim(), 4);
        }
    }

    #[test]
    fn every_edge_in_two_stars_and_two_plaquettes() {
        for k in 2..6 {
            let code = TorusCode::new(k).unwrap();
            let mut star_count = vec![0; code.num_qubits()];
            let mut plaq_count = vec![0; code.num_qubits()];
            for s in 0..code.num_sites() {
                for e in code.star(s) {
                    star_count[e] += 1;
                }
                for e in code.plaquette(s) {
                    plaq_count[e] += 1;
                }
            }
            assert!(star_count.iter().all(|&c| c == 2));
            assert!(plaq_count.iter().all(|&c| c == 2));
            for s in 0..code.num_sites() {
                for p in 0..code.num_sites() {
                    let common = code.star(s).iter().filter(|e| code.plaquette(p).contains(e)).count();
                    if k > 2 {
                        assert!(common == 0 || common == 2, "k={k} s={s} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn all_stabilizers_commute_k3() {
        let code = TorusCode::new(3).unwrap();
        let stabs = code.stabilizers();
        for a in &stabs {
            for b in &stabs {
                assert!(a.commutes_with(b).unwrap());
            }
        }
    }

    #[test]
    fn single_qubit_syndromes() {
        let code = TorusCode::new(4).unwrap();
        let n = code.num_qubits();
        for e in 0..n {
            let s = code.syndrome(&PauliOperator::z_on(n, [e])).unwrap();
            let mut ends = code.endpoints(e).to_vec();
            ends.sort();
            assert_eq!(s.vertices, ends);
            assert!(s.faces.is_empty());
            let s = code.syndrome(&PauliOperator::x_on(n, [e])).unwrap();
            let mut faces = code.faces_of(e).to_vec();
            faces.sort();
            assert_eq!(s.faces, faces);
        }
        assert!(code.syndrome(&PauliOperator::identity(n)).unwrap().is_empty());
    }

    #[test]
    fn classification_examples() {
        let code = TorusCode::new(4).unwrap();
        assert_eq!(code.classify(&code.plaquette_operator(5)).unwrap(), ErrorClass::Stabilizer);
        assert_eq!(code.classify(&code.star_operator(5)).unwrap(), ErrorClass::Stabilizer);
        let [z1, ..] = code.logicals();
        match code.classify(&z1).unwrap() {
            ErrorClass::Logical(h) => {
                assert_eq!(h.z_class, [true, false]);
                assert_eq!(h.x_class, [false, false]);
            }
            other => panic!("{other:?}"),
        }
        let n = code.num_qubits();
        assert_eq!(code.classify(&PauliOperator::x_on(n, [3])).unwrap(), ErrorClass::Detectable);
    }

    #[test]
    fn logical_pairs_anticommute_once() {
        let code = TorusCode::new(5).unwrap();
        let [z1, z2, x1, x2] = code.logicals();
        assert!(!z1.commutes_with(&x1).unwrap());
        assert!(!z2.commutes_with(&x2).unwrap());
        assert!(z1.commutes_with(&x2).unwrap());
        assert!(z2.commutes_with(&x1).unwrap());
        assert!(z1.commutes_with(&z2).unwrap());
        for l in [&z1, &z2, &x1, &x2] {
            assert!(code.syndrome(l).unwrap().is_empty());
        }
        assert_eq!(code.winding(&x2).x_class, [false, true]);
    }

    #[test]
    fn homology_is_invariant_under_stabilizers() {
        let code = TorusCode::new(5).unwrap();
        let stabs = code.stabilizers();
        let [z1, z2, x1, _] = code.logicals();
        let base = z1.mul(&x1).unwrap().mul(&z2).unwrap();
        let class = code.homology(&base).unwrap().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut op = base.clone();
            for s in &stabs {
                if rng.random_bool(0.5) {
                    op = op.mul(s).unwrap();
                }
            }
            assert_eq!(code.homology(&op).unwrap(), Some(class));
        }
    }

    #[test]
    fn string_operators() {
        let code = TorusCode::new(4).unwrap();
        // contractible loop around face 0 is the plaquette
        let around = code.plaquette(0);
        let z = code.string_operator(&around, StringKind::Z).unwrap();
        assert_eq!(code.classify(&z).unwrap(), ErrorClass::Stabilizer);
        // open path of two edges: (0,0)-(0,1)-(0,2)
        let path = [code.h(0, 0), code.h(0, 1)];
        let s = code.syndrome(&code.string_operator(&path, StringKind::Z).unwrap()).unwrap();
        assert_eq!(s.vertices, vec![code.vertex(0, 0), code.vertex(0, 2)]);
        // disconnected
        let err = code.string_operator(&[code.h(0, 0), code.h(2, 2)], StringKind::Z);
        assert_eq!(err.unwrap_err(), ToricError::Disconnected(1));
        // dual path: faces (0,0) -> (1,0) -> (2,0) crossing h(1,0), h(2,0)
        let dual = [code.h(1, 0), code.h(2, 0)];
        let x = code.string_operator(&dual, StringKind::X).unwrap();
        let s = code.syndrome(&x).unwrap();
        assert_eq!(s.faces, vec![code.face(0, 0), code.face(2, 0)]);
        let cut = code.string_operator(&code.x_cut(0), StringKind::X).unwrap();
        let lp = code.string_operator(&code.z_loop(0), StringKind::Z).unwrap();
        assert!(!cut.commutes_with(&lp).unwrap());
    }

    #[test]
    fn loop_exchange_phase_is_minus_one() {
        for k in 2..=8 {
            assert_eq!(TorusCode::new(k).unwrap().loop_exchange_phase(), -1);
        }
        let code = TorusCode::new(3).unwrap();
        let [z1, z2, x1, _] = code.logicals();
        assert!(x1.inverse().mul(&x1).unwrap().is_scalar());
        assert_eq!(x1.inverse().mul(&x1).unwrap().phase(), 0);
        let c = z1.inverse().mul(&z2.inverse()).unwrap().mul(&z1).unwrap().mul(&z2).unwrap();
        assert!(c.is_scalar());
        assert_eq!(c.phase(), 0);
    }

    #[test]
    fn gf2_rank_small() {
        assert_eq!(gf2_rank(vec![vec![0b011], vec![0b110], vec![0b101]]), 2);
        assert_eq!(gf2_rank(vec![vec![1], vec![2], vec![4]]), 3);
        assert_eq!(gf2_rank(vec![]), 0);
    }
}
