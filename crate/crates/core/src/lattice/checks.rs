//! Verification suites run against the dense model.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeOp, GenericLattice, LatticeError, LatticeModel, LatticeState, Ribbon, Site, Surface, Triangle};
use crate::double::{contract, double_irreps};
use crate::group::FiniteGroup;

/// Tolerance used by every check in this module.
pub const TOLERANCE: f64 = 1e-10;

/// Largest state dimension for which the Hamiltonian is diagonalized.
const MAX_DIAGONALIZE: usize = 1296;

/// Cap on (m, i) index pairs per tensor-valued operator identity.
const MAX_INDEX_PAIRS: usize = 48;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

impl CheckReport {
    fn within(name: impl Into<String>, residual: f64) -> Self {
        CheckReport { name: name.into(), passed: residual <= TOLERANCE, residual }
    }

    fn exact(name: impl Into<String>, expected: usize, got: usize) -> Self {
        CheckReport { name: name.into(), passed: expected == got, residual: (expected as f64 - got as f64).abs() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Ground,
    Ribbon,
    Identities,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "all" => Some(Suite::All),
            "ground" => Some(Suite::Ground),
            "ribbon" => Some(Suite::Ribbon),
            "identities" => Some(Suite::Identities),
            _ => None,
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_state(m: &LatticeModel, seed: u64) -> LatticeState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    m.state_from((0..m.dim()).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect())
}

fn sum_states(m: &LatticeModel, terms: impl IntoIterator<Item = LatticeState>) -> LatticeState {
    terms.into_iter().fold(m.zero_state(), |mut acc, s| {
        acc.add_scaled(c(1.0), &s);
        acc
    })
}

fn max_residual(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Ribbon of `len` steps along torus row `r + 1`, starting at column `c`,
/// with its faces in row `r`. Each step crosses `v(r, c+i)` and then runs
/// along `h(r+1, c+i)`.
pub fn straight_ribbon(lattice: &GenericLattice, r: usize, c: usize, len: usize) -> Result<Ribbon, LatticeError> {
    let t = (0..len)
        .flat_map(|i| {
            [
                Triangle::Direct { edge: lattice.v(r, c + i), at_terminus: true },
                Triangle::Dual { edge: lattice.h(r + 1, c + i), forward: true },
            ]
        })
        .collect();
    Ribbon::new(lattice, t)
}

/// Same ends as `straight_ribbon(l, 0, 0, 2)`, but bulging into row 1 so
/// that faces `(1,0)`, `(1,1)` and vertex `(1,1)` lie between the two.
fn torus_detour(l: &GenericLattice) -> Result<Ribbon, LatticeError> {
    use Triangle::{Direct, Dual};
    Ribbon::new(
        l,
        vec![
            Direct { edge: l.v(0, 0), at_terminus: true },
            Direct { edge: l.h(1, 0), at_terminus: false },
            Dual { edge: l.v(1, 0), forward: true },
            Dual { edge: l.h(2, 0), forward: true },
            Direct { edge: l.v(1, 1), at_terminus: true },
            Dual { edge: l.h(2, 1), forward: true },
            Dual { edge: l.v(1, 2), forward: false },
            Direct { edge: l.h(1, 1), at_terminus: true },
        ],
    )
}

/// Tetrahedron ribbons from site (3, face 2) to (0, face 1): one passes
/// vertex 1, the other runs straight along edge 0–2.
fn tetrahedron_pair(l: &GenericLattice) -> Result<(Ribbon, Ribbon), LatticeError> {
    use Triangle::{Direct, Dual};
    let t = Ribbon::new(
        l,
        vec![
            Dual { edge: 5, forward: false },
            Dual { edge: 3, forward: false },
            Direct { edge: 4, at_terminus: false },
            Dual { edge: 0, forward: false },
        ],
    )?;
    let q = Ribbon::new(
        l,
        vec![
            Dual { edge: 5, forward: false },
            Direct { edge: 3, at_terminus: true },
            Dual { edge: 1, forward: false },
            Direct { edge: 0, at_terminus: false },
        ],
    )?;
    Ok((t, q))
}

/// A ribbon with well separated ends and a homotopic deformation of it.
fn ribbon_pair(l: &GenericLattice) -> Option<(Ribbon, Ribbon)> {
    match l.torus_shape() {
        Some((r, c)) if r >= 3 && c >= 3 => Some((straight_ribbon(l, 0, 0, 2).ok()?, torus_detour(l).ok()?)),
        None if l.surface() == Surface::Sphere && l.num_edges() == 6 => tetrahedron_pair(l).ok(),
        _ => None,
    }
}

/// The lattice a ribbon suite runs on: the model's own when it has room,
/// otherwise the tetrahedron.
fn ribbon_model(m: &LatticeModel) -> Result<LatticeModel, LatticeError> {
    if ribbon_pair(m.lattice()).is_some() {
        Ok(m.clone())
    } else {
        LatticeModel::new(m.group().clone(), GenericLattice::tetrahedron())
    }
}

fn triangles_from(l: &GenericLattice, site: Site) -> Vec<Triangle> {
    (0..l.num_edges())
        .flat_map(|e| {
            [
                Triangle::Direct { edge: e, at_terminus: true },
                Triangle::Direct { edge: e, at_terminus: false },
                Triangle::Dual { edge: e, forward: true },
                Triangle::Dual { edge: e, forward: false },
            ]
        })
        .filter(|t| t.sites(l).0 == site)
        .collect()
}

/// Every ribbon of at most `max_len` triangles, in a fixed order.
pub fn enumerate_ribbons(l: &GenericLattice, max_len: usize) -> Vec<Ribbon> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<Triangle>> = l
        .sites()
        .into_iter()
        .flat_map(|s| triangles_from(l, s))
        .map(|t| vec![t])
        .collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in frontier {
            let Ok(r) = Ribbon::new(l, p.clone()) else { continue };
            if p.len() < max_len {
                for t in triangles_from(l, r.end()) {
                    let mut q = p.clone();
                    q.push(t);
                    next.push(q);
                }
            }
            out.push(r);
        }
        frontier = next;
    }
    out
}

fn is_direct(t: Triangle) -> bool {
    matches!(t, Triangle::Direct { .. })
}

fn shared_edges(a: &Ribbon, b: &Ribbon) -> usize {
    a.triangles().iter().filter(|x| b.triangles().iter().any(|y| y.edge() == x.edge())).count()
}

fn separated(a: Site, b: Site) -> bool {
    a.vertex != b.vertex && a.face != b.face
}

/// Two ribbons leaving the same site, `t` through a dual triangle and `q`
/// through a direct triangle on the same edge, sharing nothing else.
fn common_start_pair(l: &GenericLattice) -> Option<(Ribbon, Ribbon)> {
    let rs = enumerate_ribbons(l, 3);
    for t in rs.iter().filter(|r| r.len() >= 2 && !is_direct(r.triangles()[0])) {
        for q in rs.iter().filter(|r| r.len() >= 2 && is_direct(r.triangles()[0])) {
            if q.start() == t.start()
                && q.triangles()[0].edge() == t.triangles()[0].edge()
                && shared_edges(t, q) == 1
                && separated(t.end(), q.end())
                && separated(t.start(), t.end())
                && separated(q.start(), q.end())
            {
                return Some((t.clone(), q.clone()));
            }
        }
    }
    None
}

/// Mirror of [`common_start_pair`] at a common end site.
fn common_end_pair(l: &GenericLattice) -> Option<(Ribbon, Ribbon)> {
    let rs = enumerate_ribbons(l, 3);
    let last = |r: &Ribbon| r.triangles()[r.len() - 1];
    for t in rs.iter().filter(|r| r.len() >= 2 && !is_direct(last(r))) {
        for q in rs.iter().filter(|r| r.len() >= 2 && is_direct(last(r))) {
            if q.end() == t.end()
                && last(q).edge() == last(t).edge()
                && shared_edges(t, q) == 1
                && separated(t.start(), q.start())
                && separated(t.start(), t.end())
                && separated(q.start(), q.end())
            {
                return Some((t.clone(), q.clone()));
            }
        }
    }
    None
}

fn index_pairs(n: usize, seed: u64) -> Vec<(usize, usize)> {
    if n * n <= MAX_INDEX_PAIRS {
        return (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..MAX_INDEX_PAIRS).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
}

fn edge_relations(g: &FiniteGroup) -> f64 {
    // one spin carrying the group's regular representation
    let m = LatticeModel::new(g.clone(), GenericLattice::torus(1, 1).unwrap()).unwrap();
    let psi = random_state(&m, 11);
    let mut res: f64 = 0.0;
    for a in g.elements() {
        for b in g.elements() {
            let lt = |l: EdgeOp, t: EdgeOp, tt: usize| {
                let lhs = m.apply_edge(&m.apply_edge(&psi, 0, t, b), 0, l, a);
                let rhs = m.apply_edge(&m.apply_edge(&psi, 0, l, a), 0, t, tt);
                lhs.distance(&rhs)
            };
            res = res
                .max(lt(EdgeOp::LPlus, EdgeOp::TPlus, g.mul(a, b)))
                .max(lt(EdgeOp::LPlus, EdgeOp::TMinus, g.mul(b, g.inv(a))))
                .max(lt(EdgeOp::LMinus, EdgeOp::TPlus, g.mul(b, g.inv(a))))
                .max(lt(EdgeOp::LMinus, EdgeOp::TMinus, g.mul(a, b)));
        }
    }
    res
}

/// Expected ground-space dimension: 1 on the sphere, the number of
/// commuting pairs up to simultaneous conjugation on the torus.
fn expected_ground_dimension(m: &LatticeModel) -> usize {
    match m.lattice().surface() {
        Surface::Sphere => 1,
        Surface::Torus => double_irreps(m.group()).map(|v| v.len()).unwrap_or(0),
    }
}

/// Eigenvalues of `H₀` are nonnegative integers; returns the worst
/// distance to the nearest one.
fn hamiltonian_spectrum_residual(m: &LatticeModel) -> f64 {
    let d = m.dim();
    let mut h = DMatrix::<f64>::zeros(d, d);
    let mut e = m.zero_state();
    for j in 0..d {
        let mut amps = e.amplitudes().to_vec();
        amps[j] = c(1.0);
        e = m.state_from(amps);
        let col = m.apply_hamiltonian(&e);
        for (i, a) in col.amplitudes().iter().enumerate() {
            h[(i, j)] = a.re;
        }
        let mut amps = e.amplitudes().to_vec();
        amps[j] = c(0.0);
        e = m.state_from(amps);
    }
    let asym = (&h - h.transpose()).abs().max();
    let eig = h.symmetric_eigen();
    let off_integer = eig.eigenvalues.iter().map(|&x| if x < -1e-9 { 1.0 } else { (x - x.round()).abs() });
    max_residual(off_integer).max(asym)
}

/// Projectors, gauge/flux relations, ground space and Hamiltonian on the
/// model's own lattice.
pub fn ground_suite(m: &LatticeModel) -> Vec<CheckReport> {
    let g = m.group();
    let l = m.lattice();
    let psi = random_state(m, 1);
    let mut out = Vec::new();
    let tag = format!("{} {}", g.name(), l.name());

    out.push(CheckReport::within(format!("{tag}: L/T commutation on one spin"), edge_relations(g)));

    let s = 0;
    let site = l.sites()[0];
    let mut res: f64 = 0.0;
    for a in g.elements() {
        for b in g.elements() {
            let lhs = m.apply_gauge(&m.apply_gauge(&psi, s, b), s, a);
            res = res.max(lhs.distance(&m.apply_gauge(&psi, s, g.mul(a, b))));
        }
    }
    out.push(CheckReport::within(format!("{tag}: A_f A_g = A_fg"), res));

    let mut res: f64 = 0.0;
    for a in g.elements() {
        for h in g.elements() {
            let lhs = m.apply_gauge(&m.apply_flux(&psi, site, h).unwrap(), site.vertex, a);
            let rhs = m.apply_flux(&m.apply_gauge(&psi, site.vertex, a), site, g.conj(a, h)).unwrap();
            res = res.max(lhs.distance(&rhs));
        }
    }
    out.push(CheckReport::within(format!("{tag}: A_g B_h = B_(g h g^-1) A_g"), res));

    let sum = sum_states(m, g.elements().map(|h| m.apply_flux(&psi, site, h).unwrap()));
    out.push(CheckReport::within(format!("{tag}: sum_h B_h = 1"), sum.distance(&psi)));

    let nv = l.num_vertices();
    let nf = l.num_faces();
    let a_psi: Vec<_> = (0..nv).map(|v| m.project_vertex(&psi, v)).collect();
    let b_psi: Vec<_> = (0..nf).map(|p| m.project_face(&psi, p)).collect();
    let idem = (0..nv)
        .map(|v| m.project_vertex(&a_psi[v], v).distance(&a_psi[v]))
        .chain((0..nf).map(|p| m.project_face(&b_psi[p], p).distance(&b_psi[p])));
    out.push(CheckReport::within(format!("{tag}: A(s), B(p) idempotent"), max_residual(idem)));
    let mut comm: Vec<f64> = Vec::new();
    for v in 0..nv {
        for p in 0..nf {
            comm.push(m.project_face(&a_psi[v], p).distance(&m.project_vertex(&b_psi[p], v)));
        }
        for w in 0..nv {
            comm.push(m.project_vertex(&a_psi[v], w).distance(&m.project_vertex(&a_psi[w], v)));
        }
    }
    for p in 0..nf {
        for q in 0..nf {
            comm.push(m.project_face(&b_psi[p], q).distance(&m.project_face(&b_psi[q], p)));
        }
    }
    out.push(CheckReport::within(format!("{tag}: projectors commute pairwise"), max_residual(comm)));

    let ground = m.ground_space(1e-9);
    out.push(CheckReport::exact(format!("{tag}: ground-space dimension"), expected_ground_dimension(m), ground.len()));
    let energy = max_residual(ground.iter().map(|v| m.apply_hamiltonian(v).norm()));
    out.push(CheckReport::within(format!("{tag}: H0 annihilates ground space"), energy));
    if m.dim() <= MAX_DIAGONALIZE {
        out.push(CheckReport::within(
            format!("{tag}: H0 spectrum in nonnegative integers"),
            hamiltonian_spectrum_residual(m),
        ));
    }

    let e = 0;
    let flipped = m.with_lattice(l.with_reversed_edge(e)).unwrap();
    let mut res: f64 = 0.0;
    for a in g.elements() {
        for v in 0..nv {
            let lhs = m.reverse_edge_basis(&m.apply_gauge(&psi, v, a), e);
            let rhs = flipped.apply_gauge(&m.reverse_edge_basis(&psi, e), v, a);
            res = res.max(lhs.distance(&rhs));
        }
        for s in l.sites() {
            let lhs = m.reverse_edge_basis(&m.apply_flux(&psi, s, a).unwrap(), e);
            let rhs = flipped.apply_flux(&m.reverse_edge_basis(&psi, e), s, a).unwrap();
            res = res.max(lhs.distance(&rhs));
        }
    }
    out.push(CheckReport::within(format!("{tag}: edge reversal is the basis change z -> z^-1"), res));
    out
}

/// Closed form of the straight three-step ribbon on a row whose
/// horizontal arrows point against travel: with `x_i` those labels and
/// `y_i` the crossed ones, `F^(h,g)` checks `g = x1 x2 x3` and maps
/// `y1 -> h y1`, `y2 -> x1⁻¹ h x1 y2`, `y3 -> (x1 x2)⁻¹ h (x1 x2) y3`.
fn straight_closed_form(m: &LatticeModel, psi: &LatticeState, xs: [usize; 3], ys: [usize; 3], h: usize, gg: usize) -> LatticeState {
    let g = m.group();
    m.apply_map(psi, |z| {
        let x = [z[xs[0]], z[xs[1]], z[xs[2]]];
        if g.mul(g.mul(x[0], x[1]), x[2]) != gg {
            return c(0.0);
        }
        let x12 = g.mul(x[0], x[1]);
        z[ys[0]] = g.mul(h, z[ys[0]]);
        z[ys[1]] = g.mul(g.conj(g.inv(x[0]), h), z[ys[1]]);
        z[ys[2]] = g.mul(g.conj(g.inv(x12), h), z[ys[2]]);
        c(1.0)
    })
}

fn closed_form_check(g: &FiniteGroup) -> Option<CheckReport> {
    let mut l = GenericLattice::torus(1, 3).ok()?;
    for col in 0..3 {
        let e = l.h(0, col);
        l = l.with_reversed_edge(e);
    }
    let m = LatticeModel::new(g.clone(), l).ok()?;
    let l = m.lattice();
    let xs = [l.h(0, 0), l.h(0, 1), l.h(0, 2)];
    let ys = [l.v(0, 0), l.v(0, 1), l.v(0, 2)];
    let t: Vec<Triangle> = (0..3)
        .flat_map(|i| [Triangle::Direct { edge: ys[i], at_terminus: true }, Triangle::Dual { edge: xs[i], forward: false }])
        .collect();
    let ribbon = Ribbon::new(l, t).ok()?;
    let psi = random_state(&m, 5);
    let mut res: f64 = 0.0;
    for h in g.elements() {
        for gg in g.elements() {
            let k = m.tensors().index(h, gg);
            let composed = m.apply_ribbon(&psi, &ribbon, k);
            res = res.max(composed.distance(&straight_closed_form(&m, &psi, xs, ys, h, gg)));
        }
    }
    Some(CheckReport::within(format!("{}: straight 3-step ribbon equals closed form", g.name()), res))
}

/// `ψ^k = F^k(t)|ξ>` for every `k`.
fn excitation_basis(m: &LatticeModel, t: &Ribbon, xi: &LatticeState) -> Vec<LatticeState> {
    (0..m.tensors().dim()).map(|k| m.apply_ribbon(xi, t, k)).collect()
}

/// Numerical rank by Gram–Schmidt.
fn span_dimension(vectors: &[LatticeState], tol: f64) -> usize {
    let mut basis: Vec<LatticeState> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let c = b.inner(&w);
            w.add_scaled(-c, b);
        }
        if w.norm() > tol {
            basis.push(w.normalized().unwrap());
        }
    }
    basis.len()
}

/// Triangle algebra, closed form, concatenation, locality and the
/// two-particle space.
pub fn ribbon_suite(m0: &LatticeModel) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let g = m0.group();
    if let Some(r) = closed_form_check(g) {
        out.push(r);
    }
    let m = match ribbon_model(m0) {
        Ok(m) => m,
        Err(e) => {
            out.push(CheckReport { name: format!("{}: ribbon lattice ({e})", g.name()), passed: false, residual: f64::NAN });
            return out;
        }
    };
    let l = m.lattice();
    let tag = format!("{} {}", g.name(), l.name());
    let (t, _) = ribbon_pair(l).expect("admissible lattice");
    let psi = random_state(&m, 2);
    let n = m.tensors().dim();

    let direct = Ribbon::new(l, vec![Triangle::Direct { edge: 0, at_terminus: true }]).unwrap();
    let res = max_residual(
        g.elements()
            .flat_map(|h| g.elements().skip(1).map(move |gg| (h, gg)))
            .map(|(h, gg)| m.apply_ribbon(&psi, &direct, m.tensors().index(h, gg)).norm()),
    );
    out.push(CheckReport::within(format!("{tag}: direct triangle with g != 1 is zero"), res));

    let mut res: f64 = 0.0;
    for cut in 1..t.len() {
        let (t1, t2) = t.split(l, cut).unwrap();
        for k in 0..n {
            let whole = m.apply_ribbon(&psi, &t, k);
            let parts = sum_states(
                &m,
                m.omega_table()[k].iter().map(|&(a, b)| m.apply_ribbon(&m.apply_ribbon(&psi, &t2, b), &t1, a)),
            );
            res = res.max(whole.distance(&parts));
        }
    }
    out.push(CheckReport::within(format!("{tag}: F(t1 t2) = Omega F(t1) F(t2)"), res));

    let (a, b) = (t.start(), t.end());
    let mut res: f64 = 0.0;
    for k in 0..n {
        let f = m.apply_ribbon(&psi, &t, k);
        for v in (0..l.num_vertices()).filter(|&v| v != a.vertex && v != b.vertex) {
            res = res.max(m.project_vertex(&f, v).distance(&m.apply_ribbon(&m.project_vertex(&psi, v), &t, k)));
        }
        for p in (0..l.num_faces()).filter(|&p| p != a.face && p != b.face) {
            res = res.max(m.project_face(&f, p).distance(&m.apply_ribbon(&m.project_face(&psi, p), &t, k)));
        }
    }
    out.push(CheckReport::within(format!("{tag}: F commutes with A(r), B(l) away from the ends"), res));

    let xi = m.vacuum();
    let basis = excitation_basis(&m, &t, &xi);
    let nn = g.order() as f64;
    let mut res: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let want = if i == j { 1.0 / nn } else { 0.0 };
            res = res.max((u.inner(v) - c(want)).norm());
        }
    }
    out.push(CheckReport::within(format!("{tag}: Gram matrix of F^k|xi> is I/N"), res));
    out.push(CheckReport::exact(format!("{tag}: two-particle space dimension N^2"), n, span_dimension(&basis, 1e-9)));
    let energy: Vec<f64> = (0..l.num_vertices())
        .filter(|&v| v != a.vertex && v != b.vertex)
        .flat_map(|v| basis.iter().map(move |s| (v, s)))
        .map(|(v, s)| m.project_vertex(s, v).distance(s))
        .collect();
    out.push(CheckReport::within(format!("{tag}: F^k|xi> has no excitation away from the ends"), max_residual(energy)));
    out
}

/// Residuals of `F^m(t) D_i(a) = Λ^{jk}_i Ω^m_{kl} D_j(a) F^l(t)` and
/// `D_i(b) F^m(t) = Ω^m_{lk} Λ^{kj}_i F^l(t) D_j(b)` on `psi`.
fn local_ribbon_residuals(m: &LatticeModel, t: &Ribbon, a: Site, b: Site, psi: &LatticeState) -> (f64, f64) {
    let tn = m.tensors();
    let omega = m.omega_table();
    let n = tn.dim();
    let mut res_a: f64 = 0.0;
    let mut res_b: f64 = 0.0;
    for (mi, ii) in index_pairs(n, 23) {
        let lhs = m.apply_ribbon(&m.apply_local_index(psi, a, ii).unwrap(), t, mi);
        let mut rhs = m.zero_state();
        for (j, k) in tn.lambda_terms(ii) {
            for &(k2, li) in &omega[mi] {
                if k2 == k {
                    rhs.add_scaled(c(1.0), &m.apply_local_index(&m.apply_ribbon(psi, t, li), a, j).unwrap());
                }
            }
        }
        res_a = res_a.max(lhs.distance(&rhs));
        let lhs = m.apply_local_index(&m.apply_ribbon(psi, t, mi), b, ii).unwrap();
        let mut rhs = m.zero_state();
        for &(li, k) in &omega[mi] {
            for (k2, j) in tn.lambda_terms(ii) {
                if k2 == k {
                    rhs.add_scaled(c(1.0), &m.apply_ribbon(&m.apply_local_index(psi, b, j).unwrap(), t, li));
                }
            }
        }
        res_b = res_b.max(lhs.distance(&rhs));
    }
    (res_a, res_b)
}

/// Tensor-form operator identities between ribbon and local operators.
pub fn identities_suite(m0: &LatticeModel) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let g = m0.group();
    let m = match ribbon_model(m0) {
        Ok(m) => m,
        Err(e) => {
            out.push(CheckReport { name: format!("{}: ribbon lattice ({e})", g.name()), passed: false, residual: f64::NAN });
            return out;
        }
    };
    let l = m.lattice();
    let tn = m.tensors();
    let n = tn.dim();
    let tag = format!("{} {}", g.name(), l.name());
    let psi = random_state(&m, 3);
    let omega = m.omega_table();

    match common_start_pair(l) {
        Some((t1, q1)) => {
            let mut res: f64 = 0.0;
            for (mi, ni) in index_pairs(n, 21) {
                let lhs = m.apply_ribbon(&m.apply_ribbon(&psi, &q1, ni), &t1, mi);
                let mut rhs = m.zero_state();
                for &(i, j) in &omega[ni] {
                    for &(k, li) in &omega[mi] {
                        let r = tn.r.get(&[i, k]);
                        if r != c(0.0) {
                            rhs.add_scaled(r, &m.apply_ribbon(&m.apply_ribbon(&psi, &t1, li), &q1, j));
                        }
                    }
                }
                res = res.max(lhs.distance(&rhs));
            }
            out.push(CheckReport::within(format!("{tag}: ribbons from a common site braid by R"), res));
        }
        None => out.push(CheckReport { name: format!("{tag}: no common-start ribbon pair"), passed: false, residual: f64::NAN }),
    }
    match common_end_pair(l) {
        Some((t2, q2)) => {
            let mut res: f64 = 0.0;
            for (mi, ni) in index_pairs(n, 22) {
                let lhs = m.apply_ribbon(&m.apply_ribbon(&psi, &q2, ni), &t2, mi);
                let mut rhs = m.zero_state();
                for &(i, j) in &omega[ni] {
                    for &(k, li) in &omega[mi] {
                        let r = tn.r_bar.get(&[j, li]);
                        if r != c(0.0) {
                            rhs.add_scaled(r, &m.apply_ribbon(&m.apply_ribbon(&psi, &t2, k), &q2, i));
                        }
                    }
                }
                res = res.max(lhs.distance(&rhs));
            }
            out.push(CheckReport::within(format!("{tag}: ribbons into a common site braid by R-bar"), res));
        }
        None => out.push(CheckReport { name: format!("{tag}: no common-end ribbon pair"), passed: false, residual: f64::NAN }),
    }

    let unit2 = contract(&[(&tn.unit, "n"), (&tn.unit, "m")], "nm");
    let rbr = contract(&[(&tn.r_bar, "ik"), (&tn.omega, "nij"), (&tn.omega, "mkl"), (&tn.r, "jl")], "nm");
    let rrb = contract(&[(&tn.r, "ik"), (&tn.omega, "nij"), (&tn.omega, "mkl"), (&tn.r_bar, "jl")], "nm");
    out.push(CheckReport::within(
        format!("{}: R-bar R = R R-bar = 1 x 1", g.name()),
        rbr.compare(&unit2).0.max(rrb.compare(&unit2).0),
    ));

    let (t, q) = ribbon_pair(l).expect("admissible lattice");
    let (a, b) = (t.start(), t.end());

    let (res_a, res_b) = local_ribbon_residuals(&m, &t, a, b, &psi);
    out.push(CheckReport::within(format!("{tag}: local operators at the start commute past F"), res_a));
    out.push(CheckReport::within(format!("{tag}: local operators at the end commute past F"), res_b));

    let xi = m.vacuum();
    let basis = excitation_basis(&m, &t, &xi);
    let coeffs = |v: &LatticeState| -> Vec<Complex64> {
        let nn = m.group().order() as f64;
        basis.iter().map(|b| b.inner(v) * nn).collect()
    };
    let mut res: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let got = coeffs(&m.apply_local_index(&basis[k], a, j).unwrap());
            let mut want = vec![c(0.0); n];
            for &(nn_, mm) in &omega[k] {
                want[mm] += tn.skew_antipode.get(&[nn_, j]);
            }
            res = res.max(max_residual(got.iter().zip(&want).map(|(x, y)| (x - y).norm())));
            let got = coeffs(&m.apply_ribbon(&basis[k], &t, j));
            let mut want = vec![c(0.0); n];
            for (mm, v) in tn.lambda.iter() {
                if mm[0] == j && mm[1] == k {
                    want[mm[2]] += v;
                }
            }
            res = res.max(max_residual(got.iter().zip(&want).map(|(x, y)| (x - y).norm())));
            let got = coeffs(&m.apply_local_index(&basis[k], b, j).unwrap());
            let mut want = vec![c(0.0); n];
            for &(mm, jj) in &omega[k] {
                if jj == j {
                    want[mm] += c(1.0);
                }
            }
            res = res.max(max_residual(got.iter().zip(&want).map(|(x, y)| (x - y).norm())));
        }
    }
    out.push(CheckReport::within(format!("{tag}: D(a), F, D(b) act on F^k|xi> through the double tensors"), res));

    // τ_s Ω^s_{mp} S^p_q F^m(t) C(a) F^q(t) = τ_s Ω^s_{pm} S^p_q F^q(t) C(b) F^m(t) = N⁻²
    let cproj = |s: &LatticeState, site: Site| m.project_vertex(&m.project_face(s, site.face), site.vertex);
    let nn = m.group().order() as f64;
    let mut lhs_a = m.zero_state();
    let mut lhs_b = m.zero_state();
    for (sv, tau) in tn.tau.iter() {
        for &(mi, p) in &omega[sv[0]] {
            for (pq, s) in tn.antipode.iter() {
                if pq[0] != p {
                    continue;
                }
                let w = tau * s;
                let x = m.apply_ribbon(&cproj(&m.apply_ribbon(&psi, &t, pq[1]), a), &t, mi);
                lhs_a.add_scaled(w, &x);
            }
        }
        for &(p, mi) in &omega[sv[0]] {
            for (pq, s) in tn.antipode.iter() {
                if pq[0] != p {
                    continue;
                }
                let w = tau * s;
                let x = m.apply_ribbon(&cproj(&m.apply_ribbon(&psi, &t, mi), b), &t, pq[1]);
                lhs_b.add_scaled(w, &x);
            }
        }
    }
    let target = psi.clone().scale(c(1.0 / (nn * nn)));
    out.push(CheckReport::within(
        format!("{tag}: contraction through C(a) and C(b) is N^-2"),
        lhs_a.distance(&target).max(lhs_b.distance(&target)),
    ));

    let mut on_space: f64 = 0.0;
    let mut raw: f64 = 0.0;
    for k in 0..n {
        on_space = on_space.max(m.apply_ribbon(&xi, &t, k).distance(&m.apply_ribbon(&xi, &q, k)));
        for j in (0..n).step_by(n.div_ceil(6)) {
            on_space = on_space.max(m.apply_ribbon(&basis[j], &t, k).distance(&m.apply_ribbon(&basis[j], &q, k)));
        }
        raw = raw.max(m.apply_ribbon(&psi, &t, k).distance(&m.apply_ribbon(&psi, &q, k)));
    }
    out.push(CheckReport::within(format!("{tag}: deformed ribbon acts identically on L(a,b)"), on_space));
    out.push(CheckReport {
        name: format!("{tag}: deformed ribbon differs as a raw operator"),
        passed: raw > 1e-6,
        residual: raw,
    });
    out
}

pub fn run_suite(m: &LatticeModel, suite: Suite) -> Vec<CheckReport> {
    match suite {
        Suite::Ground => ground_suite(m),
        Suite::Ribbon => ribbon_suite(m),
        Suite::Identities => identities_suite(m),
        Suite::All => {
            let mut v = ground_suite(m);
            v.extend(ribbon_suite(m));
            v.extend(identities_suite(m));
            v
        }
    }
}
