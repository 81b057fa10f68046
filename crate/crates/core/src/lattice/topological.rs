//! Particle-level vortex states acted on by topological operators.
//!
//! Each particle carries a flux label; the quantum double acts on a single
//! particle through the vortex representation, on two particles through the
//! comultiplication `Λ`, and adjacent particles are exchanged by
//! `R_↶ = σ ∘ (R^{km} D_k ⊗ D_m)`. Nothing here uses the closed forms of
//! the exchange or of the fused charge; they come out of the tensors.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::double::{vortex_action, DoubleTensors};
use crate::group::{CharacterTable, Element};
use crate::vm::{sample_index, Direction};

type Amplitudes = BTreeMap<Vec<Element>, Complex64>;

/// Particles on a line, created in pairs `|v, v⁻¹⟩`. Pairs are moved by
/// braiding, so the line order of pairs can differ from creation order.
#[derive(Clone, Debug)]
pub struct VortexChain<'a> {
    tensors: &'a DoubleTensors,
    table: &'a CharacterTable,
    /// Live pair ids in line order; pair `p` occupies particles `2s, 2s+1`
    /// where `s` is its position here.
    order: Vec<usize>,
    created: usize,
    amps: Amplitudes,
    /// `Δ(D_(1,g))` as `(m, n, coefficient)` triples, indexed by `g`.
    fusion_terms: Vec<Vec<(usize, usize, Complex64)>>,
}

impl<'a> VortexChain<'a> {
    pub fn new(tensors: &'a DoubleTensors, table: &'a CharacterTable) -> Self {
        let grp = tensors.group();
        let fusion_terms = grp
            .elements()
            .map(|g| {
                let k = tensors.index(grp.identity(), g);
                tensors
                    .lambda_terms(k)
                    .into_iter()
                    .map(|(m, n)| (m, n, tensors.lambda.get(&[m, n, k])))
                    .collect()
            })
            .collect();
        let mut amps = Amplitudes::new();
        amps.insert(Vec::new(), Complex64::new(1.0, 0.0));
        VortexChain { tensors, table, order: Vec::new(), created: 0, amps, fusion_terms }
    }

    pub fn amplitudes(&self) -> &BTreeMap<Vec<Element>, Complex64> {
        &self.amps
    }

    /// Live pair ids in line order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    fn d(&self, k: usize, v: Element) -> Option<Element> {
        let l = self.tensors.label(k);
        vortex_action(self.tensors.group(), l.h, l.g, v)
    }

    fn position(&self, pair: usize) -> usize {
        2 * self.order.iter().position(|&p| p == pair).expect("pair is not live")
    }

    pub fn create(&mut self, members: &[Element]) -> usize {
        let grp = self.tensors.group();
        let amp = Complex64::new((members.len() as f64).sqrt().recip(), 0.0);
        let old = std::mem::take(&mut self.amps);
        for (key, a) in old {
            for &v in members {
                let mut k = key.clone();
                k.extend([v, grp.inv(v)]);
                self.amps.insert(k, a * amp);
            }
        }
        self.created += 1;
        self.order.push(self.created);
        self.created
    }

    /// Exchanges particles `s` and `s + 1`.
    pub fn exchange(&mut self, s: usize, direction: Direction) {
        let old = std::mem::take(&mut self.amps);
        let mut out = Amplitudes::new();
        let tensor = match direction {
            Direction::Counterclockwise => &self.tensors.r,
            Direction::Clockwise => &self.tensors.r_bar,
        };
        for (key, a) in old {
            let mut key = key;
            if direction == Direction::Clockwise {
                key.swap(s, s + 1);
            }
            for (idx, c) in tensor.iter() {
                let (Some(x), Some(y)) = (self.d(idx[0], key[s]), self.d(idx[1], key[s + 1])) else {
                    continue;
                };
                let mut k = key.clone();
                k[s] = x;
                k[s + 1] = y;
                if direction == Direction::Counterclockwise {
                    k.swap(s, s + 1);
                }
                *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c * a;
            }
        }
        out.retain(|_, a| a.norm_sqr() > 0.0);
        self.amps = out;
    }

    /// Moves the pair at line slot `q` past the one at `q + 1`.
    fn exchange_pairs(&mut self, q: usize) {
        let s = 2 * q;
        for t in [s + 1, s, s + 2, s + 1] {
            self.exchange(t, Direction::Counterclockwise);
        }
        self.order.swap(q, q + 1);
    }

    /// Brings pair `i` next to pair `j` (on its left) and winds it once
    /// between the members of `j`.
    pub fn pull(&mut self, i: usize, j: usize) {
        loop {
            let (a, b) = (self.position(i) / 2, self.position(j) / 2);
            if a + 1 == b {
                break;
            }
            if a < b {
                self.exchange_pairs(a);
            } else {
                self.exchange_pairs(a - 1);
            }
        }
        let s = self.position(i);
        for t in [s + 1, s, s, s + 1] {
            self.exchange(t, Direction::Counterclockwise);
        }
    }

    pub fn swap(&mut self, i: usize, direction: Direction) {
        let s = self.position(i);
        self.exchange(s, direction);
    }

    /// Born probabilities of the first particle of pair `i`.
    pub fn value_distribution(&self, i: usize) -> BTreeMap<Element, f64> {
        let s = self.position(i);
        let mut out = BTreeMap::new();
        for (k, a) in &self.amps {
            *out.entry(k[s]).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    fn collapse(&mut self, s: usize, v: Element) {
        self.amps.retain(|k, _| k[s] == v);
        let n: f64 = self.amps.values().map(|a| a.norm_sqr()).sum();
        let scale = n.sqrt().recip();
        for a in self.amps.values_mut() {
            *a *= scale;
        }
    }

    pub fn measure_value<R: Rng + ?Sized>(&mut self, i: usize, rng: &mut R) -> Element {
        let (values, weights): (Vec<Element>, Vec<f64>) = self.value_distribution(i).into_iter().unzip();
        let v = values[sample_index(&weights, rng)];
        self.collapse(self.position(i), v);
        v
    }

    /// `(dim χ/|G|) Σ_g χ*(g) Δ(D_(1,g))` on the two particles of pair `i`.
    fn project_charge(&self, i: usize, irrep: usize) -> Amplitudes {
        let grp = self.tensors.group();
        let s = self.position(i);
        let scale = self.table.dims[irrep] as f64 / grp.order() as f64;
        let mut out = Amplitudes::new();
        for (key, &a) in &self.amps {
            for g in grp.elements() {
                let w = self.table.value(irrep, g).conj() * scale;
                for &(m, n, c) in &self.fusion_terms[g] {
                    let (Some(x), Some(y)) = (self.d(m, key[s]), self.d(n, key[s + 1])) else {
                        continue;
                    };
                    let mut k = key.clone();
                    k[s] = x;
                    k[s + 1] = y;
                    *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += w * c * a;
                }
            }
        }
        out
    }

    pub fn charge_distribution(&self, i: usize) -> Vec<f64> {
        (0..self.table.num_irreps())
            .map(|r| self.project_charge(i, r).values().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// Projects pair `i` onto a sampled charge, samples its label, and
    /// removes both particles.
    pub fn fuse_charge<R: Rng + ?Sized>(&mut self, i: usize, rng: &mut R) -> usize {
        let irrep = sample_index(&self.charge_distribution(i), rng);
        self.amps = self.project_charge(i, irrep);
        let v = self.measure_value(i, rng);
        let s = self.position(i);
        let old = std::mem::take(&mut self.amps);
        for (mut k, a) in old {
            debug_assert_eq!(k[s], v);
            k.drain(s..s + 2);
            *self.amps.entry(k).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        self.order.retain(|&p| p != i);
        irrep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn setup() -> (DoubleTensors, CharacterTable, FiniteGroup) {
        let g = FiniteGroup::builtin("S3").unwrap();
        (DoubleTensors::build(&g), g.character_table().unwrap(), g)
    }

    #[test]
    fn counterclockwise_exchange_conjugates() {
        let (t, tab, g) = setup();
        for v1 in g.elements() {
            for v2 in g.elements() {
                let mut c = VortexChain::new(&t, &tab);
                c.create(&[v1]);
                c.create(&[v2]);
                c.exchange(1, Direction::Counterclockwise);
                // (a, b) ↦ (a b a⁻¹, a) with a = v1⁻¹, b = v2
                let a = g.inv(v1);
                let want = vec![v1, g.conj(a, v2), a, g.inv(v2)];
                assert_eq!(c.amplitudes().keys().collect::<Vec<_>>(), vec![&want]);
                c.exchange(1, Direction::Clockwise);
                assert_eq!(c.amplitudes().keys().next().unwrap(), &vec![v1, g.inv(v1), v2, g.inv(v2)]);
            }
        }
    }

    #[test]
    fn pull_word_conjugates_whole_pair() {
        let (t, tab, g) = setup();
        for u in g.elements() {
            for v in g.elements() {
                let mut c = VortexChain::new(&t, &tab);
                c.create(&[u]);
                c.create(&[v]);
                c.pull(1, 2);
                let w = g.conj(v, u);
                assert_eq!(c.amplitudes().keys().next().unwrap(), &vec![w, g.inv(w), v, g.inv(v)]);
            }
        }
    }
}
