use num_complex::Complex64;

use super::{GenericLattice, LatticeError, Site};
use crate::double::DoubleTensors;
use crate::group::{Element, FiniteGroup};

/// Largest dense state the model will allocate.
pub const MAX_AMPLITUDES: usize = 1_000_000;

/// The four single-edge operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOp {
    /// `|z> -> |g z>`
    LPlus,
    /// `|z> -> |z g⁻¹>`
    LMinus,
    /// `|z> -> δ_{h,z} |z>`
    TPlus,
    /// `|z> -> δ_{h⁻¹,z} |z>`
    TMinus,
}

/// Dense amplitudes; basis index `Σ_j z_j N^j` with `z_j` the element on
/// edge `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    amps: Vec<Complex64>,
}

impl LatticeState {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        self.amps.iter_mut().for_each(|a| *a *= c);
        self
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &Self) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
    }

    /// Largest absolute amplitude difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Unit vector, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }
}

/// A lattice bound to a group, with the structure tensors of its double.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    group: FiniteGroup,
    lattice: GenericLattice,
    tensors: DoubleTensors,
    omega_table: Vec<Vec<(usize, usize)>>,
    dim: usize,
}

impl LatticeModel {
    pub fn new(group: FiniteGroup, lattice: GenericLattice) -> Result<Self, LatticeError> {
        let size = (group.order() as f64).powi(lattice.num_edges() as i32);
        if size > MAX_AMPLITUDES as f64 {
            return Err(LatticeError::TooLarge(size));
        }
        let tensors = DoubleTensors::build(&group);
        let omega_table = (0..tensors.dim()).map(|k| tensors.omega_terms(k)).collect();
        Ok(LatticeModel { dim: size as usize, group, lattice, tensors, omega_table })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn lattice(&self) -> &GenericLattice {
        &self.lattice
    }

    pub fn tensors(&self) -> &DoubleTensors {
        &self.tensors
    }

    pub(crate) fn omega_table(&self) -> &[Vec<(usize, usize)>] {
        &self.omega_table
    }

    /// Number of amplitudes, `N^{edges}`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero_state(&self) -> LatticeState {
        LatticeState { amps: vec![Complex64::new(0.0, 0.0); self.dim] }
    }

    pub fn basis_state(&self, labels: &[Element]) -> LatticeState {
        let mut s = self.zero_state();
        s.amps[self.encode(labels)] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn state_from(&self, amps: Vec<Complex64>) -> LatticeState {
        assert_eq!(amps.len(), self.dim, "amplitude count");
        LatticeState { amps }
    }

    pub fn encode(&self, labels: &[Element]) -> usize {
        let n = self.group.order();
        labels.iter().rev().fold(0, |acc, &z| acc * n + z)
    }

    pub fn decode(&self, mut index: usize, out: &mut [Element]) {
        let n = self.group.order();
        for z in out.iter_mut() {
            *z = index % n;
            index /= n;
        }
    }

    /// Applies an operator given by its action on basis labels: `f` edits
    /// the labels in place and returns the coefficient (zero kills the
    /// term).
    pub fn apply_map<F>(&self, state: &LatticeState, f: F) -> LatticeState
    where
        F: Fn(&mut [Element]) -> Complex64,
    {
        let mut out = self.zero_state();
        let mut labels = vec![0; self.lattice.num_edges()];
        for (i, &a) in state.amps.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            self.decode(i, &mut labels);
            let c = f(&mut labels);
            if c != Complex64::new(0.0, 0.0) {
                out.amps[self.encode(&labels)] += c * a;
            }
        }
        out
    }

    pub(crate) fn edge_label_op(&self, op: EdgeOp, x: Element, z: &mut Element) -> bool {
        let g = &self.group;
        match op {
            EdgeOp::LPlus => {
                *z = g.mul(x, *z);
                true
            }
            EdgeOp::LMinus => {
                *z = g.mul(*z, g.inv(x));
                true
            }
            EdgeOp::TPlus => *z == x,
            EdgeOp::TMinus => *z == g.inv(x),
        }
    }

    pub fn apply_edge(&self, state: &LatticeState, edge: usize, op: EdgeOp, x: Element) -> LatticeState {
        self.apply_map(state, |z| bool_coef(self.edge_label_op(op, x, &mut z[edge])))
    }

    fn gauge_labels(&self, s: usize, g: Element, z: &mut [Element]) {
        let grp = &self.group;
        for (e, z) in z.iter_mut().enumerate() {
            let ed = self.lattice.edge(e);
            if ed.origin == s {
                *z = grp.mul(*z, grp.inv(g));
            }
            if ed.terminus == s {
                *z = grp.mul(g, *z);
            }
        }
    }

    /// Ordered product around the face of `site`, starting at its vertex.
    /// Each step contributes `z⁻¹` along the arrow and `z` against it.
    pub fn holonomy(&self, site: Site, z: &[Element]) -> Result<Element, LatticeError> {
        let start = self.lattice.corner(site)?;
        let walk = &self.lattice.face(site.face).walk;
        let g = &self.group;
        Ok((0..walk.len()).fold(g.identity(), |acc, i| {
            let (e, fwd) = walk[(start + i) % walk.len()];
            g.mul(acc, if fwd { g.inv(z[e]) } else { z[e] })
        }))
    }

    /// `A_g(s)`.
    pub fn apply_gauge(&self, state: &LatticeState, s: usize, g: Element) -> LatticeState {
        self.apply_map(state, |z| {
            self.gauge_labels(s, g, z);
            Complex64::new(1.0, 0.0)
        })
    }

    /// `B_h(s, p)`.
    pub fn apply_flux(&self, state: &LatticeState, site: Site, h: Element) -> Result<LatticeState, LatticeError> {
        self.lattice.corner(site)?;
        Ok(self.apply_map(state, |z| bool_coef(self.holonomy(site, z).unwrap() == h)))
    }

    /// `D_(h,g)(a) = B_h(a) A_g(a)`.
    pub fn apply_local(&self, state: &LatticeState, site: Site, h: Element, g: Element) -> Result<LatticeState, LatticeError> {
        self.lattice.corner(site)?;
        Ok(self.apply_map(state, |z| {
            self.gauge_labels(site.vertex, g, z);
            bool_coef(self.holonomy(site, z).unwrap() == h)
        }))
    }

    /// `D_k(a)` for a flat double index `k`.
    pub fn apply_local_index(&self, state: &LatticeState, site: Site, k: usize) -> Result<LatticeState, LatticeError> {
        let l = self.tensors.label(k);
        self.apply_local(state, site, l.h, l.g)
    }

    /// `A(s) = N⁻¹ Σ_g A_g(s)`.
    pub fn project_vertex(&self, state: &LatticeState, s: usize) -> LatticeState {
        let mut out = self.zero_state();
        let w = Complex64::new(1.0 / self.group.order() as f64, 0.0);
        for g in self.group.elements() {
            out.add_scaled(w, &self.apply_gauge(state, s, g));
        }
        out
    }

    /// `B(p) = B_1(s, p)` for any corner `s`.
    pub fn project_face(&self, state: &LatticeState, p: usize) -> LatticeState {
        let site = Site::new(self.lattice.corner_vertex(p, 0), p);
        self.apply_flux(state, site, self.group.identity()).unwrap()
    }

    /// `H₀ = Σ_s (1 - A(s)) + Σ_p (1 - B(p))`.
    pub fn apply_hamiltonian(&self, state: &LatticeState) -> LatticeState {
        let terms = (self.lattice.num_vertices() + self.lattice.num_faces()) as f64;
        let mut out = state.clone().scale(Complex64::new(terms, 0.0));
        let minus = Complex64::new(-1.0, 0.0);
        for s in 0..self.lattice.num_vertices() {
            out.add_scaled(minus, &self.project_vertex(state, s));
        }
        for p in 0..self.lattice.num_faces() {
            out.add_scaled(minus, &self.project_face(state, p));
        }
        out
    }

    /// Basis labels whose every face holonomy is trivial.
    pub fn is_flat(&self, z: &[Element]) -> bool {
        (0..self.lattice.num_faces()).all(|p| {
            let site = Site::new(self.lattice.corner_vertex(p, 0), p);
            self.holonomy(site, z).unwrap() == self.group.identity()
        })
    }

    /// Applies every vertex projector; on a flat configuration the result is
    /// a ground state.
    pub fn project_all_vertices(&self, state: &LatticeState) -> LatticeState {
        (0..self.lattice.num_vertices()).fold(state.clone(), |s, v| self.project_vertex(&s, v))
    }

    /// The ground state obtained by gauge-averaging the all-identity
    /// configuration, normalized.
    pub fn vacuum(&self) -> LatticeState {
        let zero = vec![self.group.identity(); self.lattice.num_edges()];
        self.project_all_vertices(&self.basis_state(&zero)).normalized().expect("nonzero")
    }

    /// Orthonormal basis of the ground space: every flat basis
    /// configuration is projected and Gram–Schmidt orthogonalized, keeping
    /// residuals above `tol`.
    pub fn ground_space(&self, tol: f64) -> Vec<LatticeState> {
        let mut basis: Vec<LatticeState> = Vec::new();
        let mut labels = vec![0; self.lattice.num_edges()];
        let mut seen = vec![false; self.dim];
        for i in 0..self.dim {
            if seen[i] {
                continue;
            }
            self.decode(i, &mut labels);
            if !self.is_flat(&labels) {
                continue;
            }
            let mut v = self.project_all_vertices(&self.basis_state(&labels));
            // the gauge orbit of `i` all project to the same ray
            for (j, a) in v.amps.iter().enumerate() {
                if a.norm() > 0.0 {
                    seen[j] = true;
                }
            }
            for b in &basis {
                let c = b.inner(&v);
                v.add_scaled(-c, b);
            }
            if v.norm() > tol {
                basis.push(v.normalized().unwrap());
            }
        }
        basis
    }

    /// Basis change for flipping the arrow of `edge`: `|z> -> |z⁻¹>` on it.
    pub fn reverse_edge_basis(&self, state: &LatticeState, edge: usize) -> LatticeState {
        self.apply_map(state, |z| {
            z[edge] = self.group.inv(z[edge]);
            Complex64::new(1.0, 0.0)
        })
    }

    /// Same group on `lattice`.
    pub fn with_lattice(&self, lattice: GenericLattice) -> Result<Self, LatticeError> {
        if lattice.num_edges() != self.lattice.num_edges() {
            return Self::new(self.group.clone(), lattice);
        }
        Ok(LatticeModel { lattice, ..self.clone() })
    }
}

pub(crate) fn bool_coef(b: bool) -> Complex64 {
    Complex64::new(if b { 1.0 } else { 0.0 }, 0.0)
}
