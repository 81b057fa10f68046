//! Exact dense-amplitude model of the gauge-group lattice Hamiltonian on
//! tiny orientable lattices.
//!
//! A [`GenericLattice`] carries oriented edges with their left/right faces
//! and, per face, the counterclockwise boundary walk. [`LatticeModel`] binds
//! a lattice to a finite group and applies the edge operators `L±`, `T±`,
//! the site operators `A_g`, `B_h`, ribbon operators and projectors to a
//! dense [`LatticeState`].

mod checks;
mod model;
mod ribbon;
mod topological;

use thiserror::Error;

pub use checks::{
    ground_suite, identities_suite, ribbon_suite, run_suite, straight_ribbon, CheckReport, Suite,
};
pub use model::{EdgeOp, LatticeModel, LatticeState, MAX_AMPLITUDES};
pub use ribbon::{Ribbon, Triangle};
pub use topological::VortexChain;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice needs {0} amplitudes, above the cap of {MAX_AMPLITUDES}")]
    TooLarge(f64),
    #[error("bad lattice spec `{0}` (expected torus:MxN or tetrahedron)")]
    BadSpec(String),
    #[error("malformed ribbon: {0}")]
    MalformedRibbon(String),
    #[error("sites overlap: {0:?} and {1:?}")]
    OverlappingSites(Site, Site),
    #[error("vertex {0} does not lie on face {1}")]
    NotASite(usize, usize),
    #[error("inconsistent lattice: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    Sphere,
    Torus,
}

impl Surface {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Surface::Sphere => 2,
            Surface::Torus => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub origin: usize,
    pub terminus: usize,
    pub left: usize,
    pub right: usize,
}

/// Counterclockwise boundary of a face. `walk[i]` is an edge and whether it
/// is traversed along its arrow; the walk starts at the face's base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<(usize, bool)>,
}

/// A vertex together with an adjacent face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub vertex: usize,
    pub face: usize,
}

impl Site {
    pub fn new(vertex: usize, face: usize) -> Self {
        Site { vertex, face }
    }
}

#[derive(Clone, Debug)]
pub struct GenericLattice {
    name: String,
    surface: Surface,
    num_vertices: usize,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    torus_shape: Option<(usize, usize)>,
}

impl GenericLattice {
    /// Builds a lattice from edge endpoints and counterclockwise face walks.
    /// Left/right faces are read off the walks: a face traversing an edge
    /// forward lies on its left.
    pub fn from_walks(
        name: &str,
        surface: Surface,
        num_vertices: usize,
        endpoints: &[(usize, usize)],
        walks: Vec<Vec<(usize, bool)>>,
    ) -> Result<Self, LatticeError> {
        let bad = |m: String| Err(LatticeError::Inconsistent(m));
        let mut left = vec![None; endpoints.len()];
        let mut right = vec![None; endpoints.len()];
        for (f, walk) in walks.iter().enumerate() {
            for &(e, fwd) in walk {
                let slot = if fwd { &mut left[e] } else { &mut right[e] };
                if slot.replace(f).is_some() {
                    return bad(format!("edge {e} has two faces on one side"));
                }
            }
            for i in 0..walk.len() {
                let (e, fwd) = walk[i];
                let (a, b) = (walk[(i + 1) % walk.len()].0, walk[(i + 1) % walk.len()].1);
                let end = if fwd { endpoints[e].1 } else { endpoints[e].0 };
                let next_start = if b { endpoints[a].0 } else { endpoints[a].1 };
                if end != next_start {
                    return bad(format!("face {f} walk is not closed at step {i}"));
                }
            }
        }
        let mut edges = Vec::with_capacity(endpoints.len());
        for (e, &(o, t)) in endpoints.iter().enumerate() {
            match (left[e], right[e]) {
                (Some(l), Some(r)) => edges.push(Edge { origin: o, terminus: t, left: l, right: r }),
                _ => return bad(format!("edge {e} is not bordered on both sides")),
            }
        }
        let lattice = GenericLattice {
            name: name.to_string(),
            surface,
            num_vertices,
            edges,
            faces: walks.into_iter().map(|walk| Face { walk }).collect(),
            torus_shape: None,
        };
        if lattice.euler_characteristic() != surface.euler_characteristic() {
            return bad(format!("Euler characteristic {}", lattice.euler_characteristic()));
        }
        Ok(lattice)
    }

    /// `rows × cols` torus. Vertex `(r, c)` is `r * cols + c`; edge `h(r, c)`
    /// runs from `(r, c)` to `(r, c+1)` and `v(r, c)` from `(r, c)` to
    /// `(r+1, c)`. Face `(r, c)` has base vertex `(r, c)` and walk
    /// `h(r,c), v(r,c+1), h(r+1,c)⁻¹, v(r,c)⁻¹`.
    pub fn torus(rows: usize, cols: usize) -> Result<Self, LatticeError> {
        if rows == 0 || cols == 0 {
            return Err(LatticeError::BadSpec(format!("torus:{rows}x{cols}")));
        }
        let vert = |r: usize, c: usize| (r % rows) * cols + (c % cols);
        let h = |r: usize, c: usize| 2 * vert(r, c);
        let v = |r: usize, c: usize| 2 * vert(r, c) + 1;
        let mut endpoints = vec![(0, 0); 2 * rows * cols];
        let mut walks = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                endpoints[h(r, c)] = (vert(r, c), vert(r, c + 1));
                endpoints[v(r, c)] = (vert(r, c), vert(r + 1, c));
                walks.push(vec![(h(r, c), true), (v(r, c + 1), true), (h(r + 1, c), false), (v(r, c), false)]);
            }
        }
        let mut lattice =
            Self::from_walks(&format!("torus:{rows}x{cols}"), Surface::Torus, rows * cols, &endpoints, walks)?;
        lattice.torus_shape = Some((rows, cols));
        Ok(lattice)
    }

    /// Tetrahedron on the sphere; edges point from the lower to the higher
    /// vertex number.
    pub fn tetrahedron() -> Self {
        let endpoints = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        // vertex cycles (0,2,1), (0,1,3), (1,2,3), (2,0,3), outward normal
        let walks = vec![
            vec![(1, true), (3, false), (0, false)],
            vec![(0, true), (4, true), (2, false)],
            vec![(3, true), (5, true), (4, false)],
            vec![(1, false), (2, true), (5, false)],
        ];
        Self::from_walks("tetrahedron", Surface::Sphere, 4, &endpoints, walks).expect("tetrahedron is consistent")
    }

    /// `torus:MxN` or `tetrahedron`.
    pub fn parse(spec: &str) -> Result<Self, LatticeError> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("tetrahedron") {
            return Ok(Self::tetrahedron());
        }
        let bad = || LatticeError::BadSpec(spec.to_string());
        let dims = spec.strip_prefix("torus:").ok_or_else(bad)?;
        let (r, c) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        Self::torus(r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// `(rows, cols)` for lattices built by [`GenericLattice::torus`].
    pub fn torus_shape(&self) -> Option<(usize, usize)> {
        self.torus_shape
    }

    /// Torus edge `h(r, c)`; panics on non-torus lattices.
    pub fn h(&self, r: usize, c: usize) -> usize {
        let (rows, cols) = self.torus_shape.expect("torus lattice");
        2 * ((r % rows) * cols + c % cols)
    }

    /// Torus edge `v(r, c)`; panics on non-torus lattices.
    pub fn v(&self, r: usize, c: usize) -> usize {
        self.h(r, c) + 1
    }

    /// Torus vertex `(r, c)`.
    pub fn vertex_at(&self, r: usize, c: usize) -> usize {
        let (rows, cols) = self.torus_shape.expect("torus lattice");
        (r % rows) * cols + c % cols
    }

    /// Torus face `(r, c)`.
    pub fn face_at(&self, r: usize, c: usize) -> usize {
        self.vertex_at(r, c)
    }

    /// Vertex where step `i` of the walk of `f` starts.
    pub fn corner_vertex(&self, f: usize, i: usize) -> usize {
        let (e, fwd) = self.faces[f].walk[i];
        if fwd {
            self.edges[e].origin
        } else {
            self.edges[e].terminus
        }
    }

    /// First position in the walk of `site.face` that starts at
    /// `site.vertex`.
    pub fn corner(&self, site: Site) -> Result<usize, LatticeError> {
        (0..self.faces[site.face].walk.len())
            .find(|&i| self.corner_vertex(site.face, i) == site.vertex)
            .ok_or(LatticeError::NotASite(site.vertex, site.face))
    }

    pub fn sites(&self) -> Vec<Site> {
        let mut out: Vec<Site> = (0..self.faces.len())
            .flat_map(|f| (0..self.faces[f].walk.len()).map(move |i| (f, i)))
            .map(|(f, i)| Site::new(self.corner_vertex(f, i), f))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Same lattice with the arrow of edge `e` flipped.
    pub fn with_reversed_edge(&self, e: usize) -> Self {
        let mut out = self.clone();
        let ed = &mut out.edges[e];
        std::mem::swap(&mut ed.origin, &mut ed.terminus);
        std::mem::swap(&mut ed.left, &mut ed.right);
        for face in &mut out.faces {
            for step in &mut face.walk {
                if step.0 == e {
                    step.1 = !step.1;
                }
            }
        }
        out.name = format!("{} (edge {e} reversed)", self.name);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_characteristics() {
        for (r, c) in [(1, 1), (1, 3), (2, 1), (2, 2), (3, 3)] {
            let l = GenericLattice::torus(r, c).unwrap();
            assert_eq!(l.euler_characteristic(), 0);
            assert_eq!(l.num_edges(), 2 * r * c);
        }
        assert_eq!(GenericLattice::tetrahedron().euler_characteristic(), 2);
    }

    #[test]
    fn torus_face_sides() {
        let l = GenericLattice::torus(3, 3).unwrap();
        let e = l.edge(l.h(1, 2));
        assert_eq!((e.left, e.right), (l.face_at(1, 2), l.face_at(0, 2)));
        let e = l.edge(l.v(1, 2));
        assert_eq!((e.left, e.right), (l.face_at(1, 1), l.face_at(1, 2)));
    }

    #[test]
    fn every_vertex_face_incidence_is_a_site() {
        let l = GenericLattice::tetrahedron();
        assert_eq!(l.sites().len(), 12);
        let l = GenericLattice::torus(2, 2).unwrap();
        assert_eq!(l.sites().len(), 16);
        for s in l.sites() {
            assert_eq!(l.corner_vertex(s.face, l.corner(s).unwrap()), s.vertex);
        }
    }

    #[test]
    fn reversal_is_an_involution() {
        let l = GenericLattice::tetrahedron();
        let back = l.with_reversed_edge(3).with_reversed_edge(3);
        assert_eq!(back.edges, l.edges);
        assert_eq!(back.faces, l.faces);
    }

    #[test]
    fn parse_specs() {
        assert_eq!(GenericLattice::parse("torus:2x1").unwrap().num_edges(), 4);
        assert_eq!(GenericLattice::parse("tetrahedron").unwrap().num_faces(), 4);
        assert!(GenericLattice::parse("torus:2").is_err());
        assert!(GenericLattice::parse("cube").is_err());
    }
}
