use num_complex::Complex64;

use super::model::bool_coef;
use super::{EdgeOp, GenericLattice, LatticeError, LatticeModel, LatticeState, Site};
use crate::group::Element;

/// Elementary piece of a ribbon. Ribbons keep their vertices on the left
/// and their faces on the right of the direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangle {
    /// Rotates about an endpoint of `edge`, crossing it. At the terminus
    /// the crossing goes from the left face to the right face, at the
    /// origin the other way. Operator `δ_{g,1} L^h(edge, endpoint)`.
    Direct { edge: usize, at_terminus: bool },
    /// Moves along `edge` inside the face on the right of travel.
    /// Operator `T^{g⁻¹}(edge, face)`.
    Dual { edge: usize, forward: bool },
}

impl Triangle {
    pub fn edge(self) -> usize {
        match self {
            Triangle::Direct { edge, .. } | Triangle::Dual { edge, .. } => edge,
        }
    }

    /// `(start, end)` sites.
    pub fn sites(self, lattice: &GenericLattice) -> (Site, Site) {
        match self {
            Triangle::Direct { edge, at_terminus } => {
                let e = lattice.edge(edge);
                if at_terminus {
                    (Site::new(e.terminus, e.left), Site::new(e.terminus, e.right))
                } else {
                    (Site::new(e.origin, e.right), Site::new(e.origin, e.left))
                }
            }
            Triangle::Dual { edge, forward } => {
                let e = lattice.edge(edge);
                if forward {
                    (Site::new(e.origin, e.right), Site::new(e.terminus, e.right))
                } else {
                    (Site::new(e.terminus, e.left), Site::new(e.origin, e.left))
                }
            }
        }
    }

    /// Action of `F^(h,g)` of this triangle on the label of its edge.
    fn act(self, model: &LatticeModel, h: Element, g: Element, z: &mut Element) -> bool {
        let grp = model.group();
        match self {
            Triangle::Direct { at_terminus, .. } => {
                let op = if at_terminus { EdgeOp::LPlus } else { EdgeOp::LMinus };
                g == grp.identity() && model.edge_label_op(op, h, z)
            }
            Triangle::Dual { forward, .. } => {
                let op = if forward { EdgeOp::TPlus } else { EdgeOp::TMinus };
                model.edge_label_op(op, grp.inv(g), z)
            }
        }
    }
}

/// A chain of triangles, each starting where the previous one ends, on
/// pairwise distinct edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ribbon {
    triangles: Vec<Triangle>,
    start: Site,
    end: Site,
}

impl Ribbon {
    pub fn new(lattice: &GenericLattice, triangles: Vec<Triangle>) -> Result<Self, LatticeError> {
        let bad = |m: String| Err(LatticeError::MalformedRibbon(m));
        let Some(first) = triangles.first() else {
            return bad("no triangles".into());
        };
        let mut edges: Vec<usize> = triangles.iter().map(|t| t.edge()).collect();
        if edges.iter().any(|&e| e >= lattice.num_edges()) {
            return bad("edge out of range".into());
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return bad("an edge is used twice".into());
        }
        let start = first.sites(lattice).0;
        let mut at = start;
        for (i, t) in triangles.iter().enumerate() {
            let (s, e) = t.sites(lattice);
            if s != at {
                return bad(format!("triangle {i} starts at {s:?}, previous ends at {at:?}"));
            }
            at = e;
        }
        Ok(Ribbon { triangles, start, end: at })
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn start(&self) -> Site {
        self.start
    }

    pub fn end(&self) -> Site {
        self.end
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// `t₁t₂`: this ribbon followed by `next`.
    pub fn concat(&self, lattice: &GenericLattice, next: &Ribbon) -> Result<Self, LatticeError> {
        let mut t = self.triangles.clone();
        t.extend_from_slice(&next.triangles);
        Ribbon::new(lattice, t)
    }

    /// Splits after `n` triangles.
    pub fn split(&self, lattice: &GenericLattice, n: usize) -> Result<(Self, Self), LatticeError> {
        let (a, b) = self.triangles.split_at(n);
        Ok((Ribbon::new(lattice, a.to_vec())?, Ribbon::new(lattice, b.to_vec())?))
    }
}

impl LatticeModel {
    /// `F^k(t)` for a flat double index `k`, composed from the triangles by
    /// `F^k(t₁t₂) = Ω^k_{mn} F^m(t₁) F^n(t₂)`.
    pub fn apply_ribbon(&self, state: &LatticeState, ribbon: &Ribbon, k: usize) -> LatticeState {
        let t = ribbon.triangles();
        let mut out = self.zero_state();
        let mut labels = vec![0; self.lattice().num_edges()];
        let mut amps = out.amplitudes().to_vec();
        for (i, &a) in state.amplitudes().iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            self.decode(i, &mut labels);
            self.ribbon_terms(t, k, &mut labels, &mut |z, c| amps[self.encode(z)] += c * a);
        }
        out = self.state_from(amps);
        out
    }

    fn ribbon_terms(&self, t: &[Triangle], k: usize, z: &mut [Element], emit: &mut dyn FnMut(&[Element], Complex64)) {
        let (first, rest) = (t[0], &t[1..]);
        let e = first.edge();
        let before = z[e];
        if rest.is_empty() {
            let l = self.tensors().label(k);
            if first.act(self, l.h, l.g, &mut z[e]) {
                emit(z, bool_coef(true));
            }
            z[e] = before;
            return;
        }
        for &(m, n) in &self.omega_table()[k] {
            let l = self.tensors().label(m);
            if first.act(self, l.h, l.g, &mut z[e]) {
                self.ribbon_terms(rest, n, z, emit);
            }
            z[e] = before;
        }
    }
}
