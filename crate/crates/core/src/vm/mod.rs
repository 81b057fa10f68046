//! Magnetic vortex pairs `|v, v⁻¹⟩` over a finite group: creation, pulling
//! one pair through another, member interchange, value measurement and
//! destructive charge measurement.
//!
//! The state is kept at pair level. Each live pair contributes one tuple
//! component, the label `v` of its first member; the second member is
//! always `v⁻¹`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::group::{CharacterTable, ConjugacyClass, Element, FiniteGroup, GroupError};

mod oracle;
mod program;

pub use oracle::{compare_with_oracle, cross_check_oracle, random_program, OracleReport};
pub use program::{derive_shot_seed, run_program, run_shots, Instruction, Program, RunOutput, ShotSummary};

/// Allowed drift of `Σ|a|²` after any instruction.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum VmError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("pair {0} does not exist")]
    NoSuchPair(usize),
    #[error("pair {0} was already fused")]
    DeadPair(usize),
    #[error("pull needs two different pairs, got {0} twice")]
    SamePair(usize),
    #[error("norm drifted to {0}")]
    NormDrift(f64),
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<VmError> },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Counterclockwise,
    Clockwise,
}

impl Direction {
    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_uppercase().as_str() {
            "CCW" => Some(Direction::Counterclockwise),
            "CW" => Some(Direction::Clockwise),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogEntry {
    Value { pair: usize, value: Element },
    Charge { pair: usize, irrep: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pair {
    pub class: usize,
    pub alive: bool,
}

/// Group data shared by every state of one run: classes, characters and
/// the charge projectors on each class.
#[derive(Debug)]
pub struct VmGroup {
    group: FiniteGroup,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    table: CharacterTable,
    /// `projectors[c][χ]`: dense `|C|×|C|` matrix of `P_χ` on class `c`,
    /// row-major, rows and columns in member order.
    projectors: Vec<Vec<Vec<Complex64>>>,
}

impl VmGroup {
    pub fn new(group: &FiniteGroup) -> Result<Arc<Self>, VmError> {
        let classes = group.conjugacy_classes();
        let class_of = group.class_index(&classes);
        let table = group.character_table()?;
        let n = group.order() as f64;
        let projectors = classes
            .iter()
            .map(|c| {
                let size = c.size();
                let pos = |x: Element| c.members.binary_search(&x).unwrap();
                (0..table.num_irreps())
                    .map(|r| {
                        let scale = table.dims[r] as f64 / n;
                        let mut m = vec![Complex64::new(0.0, 0.0); size * size];
                        for g in group.elements() {
                            let w = table.value(r, g).conj() * scale;
                            for (col, &v) in c.members.iter().enumerate() {
                                m[pos(group.conj(g, v)) * size + col] += w;
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        Ok(Arc::new(VmGroup { group: group.clone(), classes, class_of, table, projectors }))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: Element) -> usize {
        self.class_of[g]
    }

    pub fn characters(&self) -> &CharacterTable {
        &self.table
    }

    /// `irrep 2 (dim 2)`, or `trivial` for the trivial character.
    pub fn irrep_label(&self, r: usize) -> String {
        if r == 0 {
            "trivial".to_string()
        } else {
            format!("irrep {r} (dim {})", self.table.dims[r])
        }
    }

    pub fn describe(&self, entry: &LogEntry) -> String {
        match *entry {
            LogEntry::Value { pair, value } => format!("MEASV {pair} = {}", self.group.format_element(value)),
            LogEntry::Charge { pair, irrep } => format!("FUSECHARGE {pair} = {}", self.irrep_label(irrep)),
        }
    }
}

/// Draws an index with probability proportional to `weights`.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        last = i;
        if x < w {
            return i;
        }
        x -= w;
    }
    last
}

type Amplitudes = BTreeMap<Vec<Element>, Complex64>;

#[derive(Clone, Debug)]
pub struct VmState {
    data: Arc<VmGroup>,
    pairs: Vec<Pair>,
    amps: Amplitudes,
    log: Vec<LogEntry>,
}

impl VmState {
    pub fn new(data: Arc<VmGroup>) -> Self {
        let mut amps = Amplitudes::new();
        amps.insert(Vec::new(), Complex64::new(1.0, 0.0));
        VmState { data, pairs: Vec::new(), amps, log: Vec::new() }
    }

    /// State of live pairs with the given class indices. Every key must
    /// have one label per pair, inside that pair's class, and the
    /// amplitudes must be normalized.
    pub fn from_amplitudes(
        data: Arc<VmGroup>,
        classes: &[usize],
        amplitudes: BTreeMap<Vec<Element>, Complex64>,
    ) -> Result<Self, VmError> {
        let bad = |m: String| Err(VmError::InvalidState(m));
        if let Some(&c) = classes.iter().find(|&&c| c >= data.classes.len()) {
            return bad(format!("no class {c}"));
        }
        for k in amplitudes.keys() {
            if k.len() != classes.len() {
                return bad(format!("key {k:?} has {} labels for {} pairs", k.len(), classes.len()));
            }
            if let Some((v, _)) = k.iter().zip(classes).find(|(&v, &c)| data.class_of.get(v) != Some(&c)) {
                return bad(format!("label {v} outside its pair's class"));
            }
        }
        let mut amps = amplitudes;
        amps.retain(|_, a| a.norm_sqr() > 0.0);
        let state = VmState {
            data,
            pairs: classes.iter().map(|&class| Pair { class, alive: true }).collect(),
            amps,
            log: Vec::new(),
        };
        state.check_norm()?;
        Ok(state)
    }

    pub fn data(&self) -> &Arc<VmGroup> {
        &self.data
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.data.group
    }

    /// Pairs in creation order; pair ids are 1-based positions here.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Ids of the live pairs, in tuple order.
    pub fn live_pairs(&self) -> Vec<usize> {
        (1..=self.pairs.len()).filter(|&p| self.pairs[p - 1].alive).collect()
    }

    /// Amplitudes keyed by the labels of the live pairs in creation order.
    pub fn amplitudes(&self) -> &BTreeMap<Vec<Element>, Complex64> {
        &self.amps
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_norm(&self) -> Result<(), VmError> {
        let n = self.norm_squared();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(VmError::NormDrift(n));
        }
        Ok(())
    }

    /// Tuple position of a live pair.
    fn slot(&self, pair: usize) -> Result<usize, VmError> {
        if pair == 0 || pair > self.pairs.len() {
            return Err(VmError::NoSuchPair(pair));
        }
        if !self.pairs[pair - 1].alive {
            return Err(VmError::DeadPair(pair));
        }
        Ok(self.pairs[..pair - 1].iter().filter(|p| p.alive).count())
    }

    fn push_pair(&mut self, class: usize, members: &[Element]) -> usize {
        let amp = Complex64::new((members.len() as f64).sqrt().recip(), 0.0);
        let old = std::mem::take(&mut self.amps);
        for (key, a) in old {
            for &v in members {
                let mut k = key.clone();
                k.push(v);
                self.amps.insert(k, a * amp);
            }
        }
        self.pairs.push(Pair { class, alive: true });
        self.pairs.len()
    }

    /// Appends `|C|^{-1/2} Σ_{v∈C} |v, v⁻¹⟩`. Returns the new pair id.
    pub fn create(&mut self, class: usize) -> Result<usize, VmError> {
        let members = self
            .data
            .classes
            .get(class)
            .ok_or_else(|| GroupError::Parse(format!("no class {class}")))?
            .members
            .clone();
        Ok(self.push_pair(class, &members))
    }

    /// Uniform pair over the class containing `representative`.
    pub fn create_in_class_of(&mut self, representative: Element) -> Result<usize, VmError> {
        self.create(self.data.class_of[representative])
    }

    /// Appends the definite pair `|v, v⁻¹⟩`.
    pub fn create_reference(&mut self, v: Element) -> usize {
        let class = self.data.class_of[v];
        self.push_pair(class, &[v])
    }

    fn relabel(&mut self, f: impl Fn(&[Element]) -> Vec<Element>) {
        let old = std::mem::take(&mut self.amps);
        for (key, a) in old {
            let k = f(&key);
            let prev = self.amps.insert(k, a);
            debug_assert!(prev.is_none(), "relabelling is not a permutation");
        }
    }

    /// Pulls pair `i` as a whole between the members of pair `j`:
    /// `u_i ↦ v_j u_i v_j⁻¹`.
    pub fn pull(&mut self, i: usize, j: usize) -> Result<(), VmError> {
        if i == j {
            return Err(VmError::SamePair(i));
        }
        let (a, b) = (self.slot(i)?, self.slot(j)?);
        let g = self.data.group.clone();
        self.relabel(|k| {
            let mut k = k.to_vec();
            k[a] = g.conj(k[b], k[a]);
            k
        });
        Ok(())
    }

    /// Interchanges the two members of pair `i`. Read as the ordered pair
    /// `(v, v⁻¹)`, the counterclockwise exchange `(v₁, v₂) ↦ (v₁v₂v₁⁻¹, v₁)`
    /// gives `(v⁻¹, v)`; the clockwise one `(v₁, v₂) ↦ (v₂, v₂⁻¹v₁v₂)` gives
    /// the same pattern. Either way the stored first member becomes `v⁻¹`
    /// and the class tag follows it.
    pub fn swap(&mut self, i: usize, direction: Direction) -> Result<(), VmError> {
        let a = self.slot(i)?;
        let g = self.data.group.clone();
        let exchange = |v: Element| -> Element {
            let w = g.inv(v);
            match direction {
                Direction::Counterclockwise => g.mul(g.mul(v, w), g.inv(v)),
                Direction::Clockwise => w,
            }
        };
        self.relabel(|k| {
            let mut k = k.to_vec();
            k[a] = exchange(k[a]);
            k
        });
        let rep = self.data.classes[self.pairs[i - 1].class].representative;
        self.pairs[i - 1].class = self.data.class_of[self.data.group.inv(rep)];
        Ok(())
    }

    /// Born probabilities of the label of pair `i`, by element.
    pub fn value_distribution(&self, i: usize) -> Result<BTreeMap<Element, f64>, VmError> {
        let a = self.slot(i)?;
        let mut out = BTreeMap::new();
        for (k, amp) in &self.amps {
            *out.entry(k[a]).or_insert(0.0) += amp.norm_sqr();
        }
        Ok(out)
    }

    fn collapse(&mut self, a: usize, v: Element) {
        self.amps.retain(|k, _| k[a] == v);
        let s = self.norm_squared().sqrt().recip();
        for x in self.amps.values_mut() {
            *x *= s;
        }
    }

    /// Samples the label of pair `i`, collapses and logs it.
    pub fn measure_value<R: Rng + ?Sized>(&mut self, i: usize, rng: &mut R) -> Result<Element, VmError> {
        let dist = self.value_distribution(i)?;
        let (values, weights): (Vec<Element>, Vec<f64>) = dist.into_iter().unzip();
        let v = values[sample_index(&weights, rng)];
        self.collapse(self.slot(i)?, v);
        self.log.push(LogEntry::Value { pair: i, value: v });
        Ok(v)
    }

    /// Splits the state along pair `i`: for each assignment of the other
    /// pairs, the vector of amplitudes over the pair's class members.
    fn sections(&self, a: usize) -> BTreeMap<Vec<Element>, Vec<Complex64>> {
        let members = &self.data.classes[self.pairs_class_at(a)].members;
        let mut out: BTreeMap<Vec<Element>, Vec<Complex64>> = BTreeMap::new();
        for (k, &amp) in &self.amps {
            let mut rest = k.clone();
            let v = rest.remove(a);
            let col = members.binary_search(&v).expect("label outside its class");
            out.entry(rest).or_insert_with(|| vec![Complex64::new(0.0, 0.0); members.len()])[col] = amp;
        }
        out
    }

    fn pairs_class_at(&self, slot: usize) -> usize {
        self.pairs.iter().filter(|p| p.alive).nth(slot).unwrap().class
    }

    fn project(&self, class: usize, irrep: usize, x: &[Complex64]) -> Vec<Complex64> {
        let m = &self.data.projectors[class][irrep];
        let size = x.len();
        (0..size)
            .map(|r| (0..size).map(|c| m[r * size + c] * x[c]).sum())
            .collect()
    }

    /// Probability of each irrep of `G` (character table order) as the
    /// charge of pair `i` after fusion.
    pub fn charge_distribution(&self, i: usize) -> Result<Vec<f64>, VmError> {
        let a = self.slot(i)?;
        let class = self.pairs_class_at(a);
        let sections = self.sections(a);
        Ok((0..self.data.table.num_irreps())
            .map(|r| {
                sections
                    .values()
                    .map(|x| self.project(class, r, x).iter().map(|c| c.norm_sqr()).sum::<f64>())
                    .sum()
            })
            .collect())
    }

    /// Fuses pair `i`: samples a charge χ, projects onto it, removes the
    /// pair and logs χ. The remainder is left in a pure state by sampling
    /// the projected pair's label before discarding it, which reproduces
    /// the reduced state of the other pairs on average.
    pub fn fuse_charge<R: Rng + ?Sized>(&mut self, i: usize, rng: &mut R) -> Result<usize, VmError> {
        let a = self.slot(i)?;
        let class = self.pairs_class_at(a);
        let weights = self.charge_distribution(i)?;
        let irrep = sample_index(&weights, rng);
        let projected: Vec<(Vec<Element>, Vec<Complex64>)> = self
            .sections(a)
            .into_iter()
            .map(|(rest, x)| (rest, self.project(class, irrep, &x)))
            .collect();
        let size = self.data.classes[class].size();
        let label_weights: Vec<f64> = (0..size)
            .map(|c| projected.iter().map(|(_, x)| x[c].norm_sqr()).sum())
            .collect();
        let col = sample_index(&label_weights, rng);
        let s = label_weights[col].sqrt().recip();
        self.amps = projected
            .into_iter()
            .filter(|(_, x)| x[col].norm_sqr() > 0.0)
            .map(|(rest, x)| (rest, x[col] * s))
            .collect();
        self.pairs[i - 1].alive = false;
        self.log.push(LogEntry::Charge { pair: i, irrep });
        Ok(irrep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s5() -> (Arc<VmGroup>, FiniteGroup) {
        let g = FiniteGroup::builtin("S5").unwrap();
        (VmGroup::new(&g).unwrap(), g)
    }

    #[test]
    fn pull_conjugates() {
        let (d, g) = s5();
        let mut s = VmState::new(d);
        s.create_reference(g.parse_element("(1 2)").unwrap());
        s.create_reference(g.parse_element("(2 3)").unwrap());
        s.pull(1, 2).unwrap();
        let dist = s.value_distribution(1).unwrap();
        assert_eq!(dist.len(), 1);
        assert_eq!(g.format_element(*dist.keys().next().unwrap()), "(1 3)");
        s.pull(1, 2).unwrap();
        assert_eq!(g.format_element(*s.value_distribution(1).unwrap().keys().next().unwrap()), "(1 2)");
    }

    #[test]
    fn fresh_pair_has_no_charge() {
        let (d, g) = s5();
        let mut s = VmState::new(d);
        let p = s.create_in_class_of(g.parse_element("(1 2)").unwrap()).unwrap();
        assert_eq!(s.amplitudes().len(), 10);
        let q = s.charge_distribution(p).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-12);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn definite_transposition_charge() {
        let (d, g) = s5();
        let mut s = VmState::new(d);
        let p = s.create_reference(g.parse_element("(1 2)").unwrap());
        let q = s.charge_distribution(p).unwrap();
        assert!((q[0] - 0.1).abs() < 1e-12);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_both_ways_is_identity() {
        let (d, g) = s5();
        let mut s = VmState::new(d);
        s.create_reference(g.parse_element("(1 2 3)").unwrap());
        s.create_in_class_of(g.parse_element("(1 2 3 4 5)").unwrap()).unwrap();
        s.pull(1, 2).unwrap();
        let before = s.amplitudes().clone();
        s.swap(1, Direction::Counterclockwise).unwrap();
        assert_ne!(&before, s.amplitudes());
        s.swap(1, Direction::Clockwise).unwrap();
        assert_eq!(&before, s.amplitudes());
    }

    #[test]
    fn fusion_kills_pair_and_keeps_norm() {
        let (d, g) = s5();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = VmState::new(d);
        s.create_in_class_of(g.parse_element("(1 2)").unwrap()).unwrap();
        s.create_reference(g.parse_element("(1 3)").unwrap());
        s.pull(2, 1).unwrap();
        s.fuse_charge(2, &mut rng).unwrap();
        s.check_norm().unwrap();
        assert!(matches!(s.fuse_charge(2, &mut rng), Err(VmError::DeadPair(2))));
        assert!(matches!(s.pull(1, 1), Err(VmError::SamePair(1))));
        assert!(matches!(s.pull(1, 7), Err(VmError::NoSuchPair(7))));
        let v = s.measure_value(1, &mut rng).unwrap();
        assert_eq!(s.group().conj(v, v), v);
        s.check_norm().unwrap();
    }
}
