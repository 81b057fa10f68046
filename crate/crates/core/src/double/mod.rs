//! The quantum double `D(G)` and its dual ribbon algebra `F` as sparse
//! structure-constant tensors.
//!
//! Flat index of the basis label `(h, g)` is `h * N + g`. Tensors keep their
//! slots in the order the indices are written, upper indices first:
//!
//! | tensor | slots | nonzero when |
//! |--------|-------|--------------|
//! | `omega` | `k, m, n` | `h_m = g_m h_n g_m⁻¹`, `h_k = h_m`, `g_k = g_m g_n` |
//! | `lambda` | `m, n, k` | `h_m h_n = h_k`, `g_m = g_n = g_k` |
//! | `epsilon` | `k` | `h_k = 1` |
//! | `unit` | `k` | `g_k = 1` |
//! | `antipode` | `m, k` | `g_m⁻¹ h_m g_m = h_k⁻¹`, `g_m = g_k⁻¹` |
//! | `r`, `r_bar` | `k, m` | `h_k = g_m` (resp. `h_k⁻¹ = g_m`) and `g_k = 1` |
//! | `c` | `k` | `h_k = 1`, value `1/N` |
//! | `tau` | `k` | `g_k = 1`, value `1/N` |
//!
//! `omega` is simultaneously the multiplication of `D` and the
//! comultiplication of `F`; `lambda` is the multiplication of `F` and the
//! comultiplication of `D`.

mod axioms;
mod irreps;
mod tensor;

use num_complex::Complex64;

use crate::group::{Element, FiniteGroup};

pub use axioms::{AxiomReport, VerifyMode};
pub use irreps::{double_irreps, vortex_commutant_dimension, DoubleIrrepLabel};
pub use tensor::{contract, Contraction, DoubleIndex, SparseTensor};

/// All structure tensors of `D(G)` and `F`, built once per group.
#[derive(Clone, Debug)]
pub struct DoubleTensors {
    group: FiniteGroup,
    pub omega: SparseTensor,
    pub lambda: SparseTensor,
    pub epsilon: SparseTensor,
    pub unit: SparseTensor,
    pub antipode: SparseTensor,
    pub skew_antipode: SparseTensor,
    pub r: SparseTensor,
    pub r_bar: SparseTensor,
    pub c: SparseTensor,
    pub tau: SparseTensor,
    pub delta: SparseTensor,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl DoubleTensors {
    pub fn build(group: &FiniteGroup) -> Self {
        let n = group.order();
        let ix = |h: Element, g: Element| DoubleIndex::new(h, g).flat(n);

        let mut omega = SparseTensor::new(3);
        for h1 in group.elements() {
            for g1 in group.elements() {
                let h2 = group.conj(group.inv(g1), h1);
                for g2 in group.elements() {
                    omega.add(&[ix(h1, group.mul(g1, g2)), ix(h1, g1), ix(h2, g2)], one());
                }
            }
        }

        let mut lambda = SparseTensor::new(3);
        for h1 in group.elements() {
            for h2 in group.elements() {
                for g in group.elements() {
                    lambda.add(&[ix(h1, g), ix(h2, g), ix(group.mul(h1, h2), g)], one());
                }
            }
        }

        let mut epsilon = SparseTensor::new(1);
        let mut unit = SparseTensor::new(1);
        let mut c = SparseTensor::new(1);
        let mut tau = SparseTensor::new(1);
        let inv_n = Complex64::new(1.0 / n as f64, 0.0);
        for x in group.elements() {
            epsilon.add(&[ix(0, x)], one());
            c.add(&[ix(0, x)], inv_n);
            unit.add(&[ix(x, 0)], one());
            tau.add(&[ix(x, 0)], inv_n);
        }

        let mut antipode = SparseTensor::new(2);
        for h1 in group.elements() {
            for g1 in group.elements() {
                let g1_inv = group.inv(g1);
                let h2 = group.inv(group.conj(g1_inv, h1));
                antipode.add(&[ix(h1, g1), ix(h2, g1_inv)], one());
            }
        }
        // The antipode is a permutation matrix, so its inverse is its transpose.
        let skew_antipode = antipode.permuted(&[1, 0]);

        let mut r = SparseTensor::new(2);
        let mut r_bar = SparseTensor::new(2);
        for h in group.elements() {
            for v in group.elements() {
                r.add(&[ix(h, 0), ix(v, h)], one());
                r_bar.add(&[ix(h, 0), ix(v, group.inv(h))], one());
            }
        }

        let mut delta = SparseTensor::new(2);
        for k in 0..n * n {
            delta.add(&[k, k], one());
        }

        Self {
            group: group.clone(),
            omega,
            lambda,
            epsilon,
            unit,
            antipode,
            skew_antipode,
            r,
            r_bar,
            c,
            tau,
            delta,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Dimension of `D(G)`, i.e. `N²`.
    pub fn dim(&self) -> usize {
        self.group.order() * self.group.order()
    }

    pub fn index(&self, h: Element, g: Element) -> usize {
        DoubleIndex::new(h, g).flat(self.group.order())
    }

    pub fn label(&self, k: usize) -> DoubleIndex {
        DoubleIndex::from_flat(k, self.group.order())
    }

    /// `Ω^k_{mn}` entries for a fixed upper index `k`, as `(m, n)` pairs.
    /// Every entry of `Ω` equals one.
    pub fn omega_terms(&self, k: usize) -> Vec<(usize, usize)> {
        let g = &self.group;
        let DoubleIndex { h, g: gk } = self.label(k);
        g.elements()
            .map(|g1| {
                let g2 = g.mul(g.inv(g1), gk);
                let h2 = g.conj(g.inv(g1), h);
                (self.index(h, g1), self.index(h2, g2))
            })
            .collect()
    }

    /// `Λ^{mn}_k` entries for fixed lower index `k`, as `(m, n)` pairs.
    pub fn lambda_terms(&self, k: usize) -> Vec<(usize, usize)> {
        comultiply_double(&self.group, self.label(k))
            .into_iter()
            .map(|(a, b)| (a.flat(self.group.order()), b.flat(self.group.order())))
            .collect()
    }

    /// Evaluates the c and τ identities.
    pub fn special_elements(&self) -> (SparseTensor, SparseTensor, Vec<AxiomReport>) {
        (self.c.clone(), self.tau.clone(), axioms::special_element_reports(self))
    }

    pub fn verify_axioms(&self, mode: VerifyMode) -> Vec<AxiomReport> {
        axioms::verify(self, mode)
    }
}

/// `Δ(D_(h,g)) = Σ_{h1 h2 = h} D_(h1,g) ⊗ D_(h2,g)`, each with coefficient 1.
pub fn comultiply_double(group: &FiniteGroup, k: DoubleIndex) -> Vec<(DoubleIndex, DoubleIndex)> {
    group
        .elements()
        .map(|h1| {
            let h2 = group.mul(group.inv(h1), k.h);
            (DoubleIndex::new(h1, k.g), DoubleIndex::new(h2, k.g))
        })
        .collect()
}

/// Action of `D_(h,g)` on the vortex basis vector `|v>`:
/// `D_(h,g)|v> = δ_{h, g v g⁻¹} |g v g⁻¹>`.
pub fn vortex_action(group: &FiniteGroup, h: Element, g: Element, v: Element) -> Option<Element> {
    let w = group.conj(g, v);
    (w == h).then_some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(name: &str) -> DoubleTensors {
        DoubleTensors::build(&FiniteGroup::builtin(name).unwrap())
    }

    #[test]
    fn nonzero_counts() {
        for name in ["Z2", "S3", "D4"] {
            let t = build(name);
            let n = t.group().order();
            assert_eq!(t.omega.nnz(), n * n * n);
            assert_eq!(t.lambda.nnz(), n * n * n);
            assert_eq!(t.r.nnz(), n * n);
            assert_eq!(t.epsilon.nnz(), n);
            assert_eq!(t.unit.nnz(), n);
        }
    }

    #[test]
    fn z2_omega_entry() {
        let t = build("Z2");
        let a = 1;
        // upper (a, a), lowers (a, a) and (a, e)
        assert_eq!(t.omega.get(&[t.index(a, a), t.index(a, a), t.index(a, 0)]), one());
        // h1 != g1 h2 g1⁻¹
        assert_eq!(
            t.omega.get(&[t.index(a, a), t.index(a, a), t.index(0, 0)]),
            Complex64::default()
        );
    }

    #[test]
    fn omega_entries_follow_delta_formula() {
        let t = build("S3");
        let g = t.group().clone();
        for (idx, v) in t.omega.iter() {
            let (k, m, n) = (t.label(idx[0]), t.label(idx[1]), t.label(idx[2]));
            assert_eq!(v, one());
            assert_eq!(m.h, g.conj(m.g, n.h));
            assert_eq!(k.h, m.h);
            assert_eq!(k.g, g.mul(m.g, n.g));
        }
    }

    #[test]
    fn comultiplication_terms() {
        let g = FiniteGroup::builtin("Z2").unwrap();
        let terms = comultiply_double(&g, DoubleIndex::new(0, 1));
        assert_eq!(
            terms,
            vec![
                (DoubleIndex::new(0, 1), DoubleIndex::new(0, 1)),
                (DoubleIndex::new(1, 1), DoubleIndex::new(1, 1))
            ]
        );
        let s3 = FiniteGroup::builtin("S3").unwrap();
        for k in 0..36 {
            let k = DoubleIndex::from_flat(k, 6);
            let terms = comultiply_double(&s3, k);
            assert_eq!(terms.len(), 6);
            // counit on either leg reproduces ε(k)
            let eps = |d: DoubleIndex| (d.h == 0) as u32;
            let left: u32 = terms.iter().map(|(a, b)| eps(*a) * (b == &k) as u32).sum();
            assert_eq!(left, 1);
            let right: u32 = terms.iter().map(|(a, b)| eps(*b) * (a == &k) as u32).sum();
            assert_eq!(right, 1);
        }
    }

    #[test]
    fn vortex_action_cases() {
        let g = FiniteGroup::builtin("S3").unwrap();
        let v = g.parse_element("(1 2)").unwrap();
        assert_eq!(vortex_action(&g, v, 0, v), Some(v));
        let other = g.parse_element("(1 3)").unwrap();
        assert_eq!(vortex_action(&g, other, 0, v), None);
        let r = g.parse_element("(1 2 3)").unwrap();
        let h = g.conj(r, v);
        assert_eq!(vortex_action(&g, h, r, v), Some(h));
        assert_eq!(g.format_element(h), "(2 3)");
    }
}
