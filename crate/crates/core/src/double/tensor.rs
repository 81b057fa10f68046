use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

/// Label `(h, g)` of the basis elements `D_(h,g) = B_h A_g` of the quantum
/// double and of the dual ribbon basis `F^(h,g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleIndex {
    pub h: usize,
    pub g: usize,
}

impl DoubleIndex {
    pub fn new(h: usize, g: usize) -> Self {
        Self { h, g }
    }

    #[inline]
    pub fn flat(self, order: usize) -> usize {
        self.h * order + self.g
    }

    #[inline]
    pub fn from_flat(k: usize, order: usize) -> Self {
        Self {
            h: k / order,
            g: k % order,
        }
    }
}

/// Sparse tensor over flat [`DoubleIndex`] slots. Entries are kept in
/// lexicographic order of their index tuples; zeros are never stored.
///
/// Contraction plans share lazily built lookup indices through `cache`, which
/// is discarded whenever the tensor is modified.
#[derive(Clone, Debug)]
pub struct SparseTensor {
    arity: usize,
    entries: BTreeMap<Vec<u32>, Complex64>,
    cache: Arc<Cache>,
}

const MAX_ARITY: usize = 4;

#[derive(Debug, Default)]
struct Cache {
    flat: OnceLock<(Vec<u32>, Vec<Complex64>)>,
    /// Entry positions grouped by the values of a subset of slots.
    by_mask: [OnceLock<HashMap<u128, Vec<u32>>>; 1 << MAX_ARITY],
}

impl PartialEq for SparseTensor {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.entries == other.entries
    }
}

fn pack(values: impl Iterator<Item = u32>) -> u128 {
    values.fold(0u128, |acc, v| (acc << 32) | v as u128)
}

impl SparseTensor {
    pub fn new(arity: usize) -> Self {
        assert!(arity <= MAX_ARITY, "tensor arity above {MAX_ARITY}");
        Self {
            arity,
            entries: BTreeMap::new(),
            cache: Arc::default(),
        }
    }

    pub fn scalar(value: Complex64) -> Self {
        let mut t = Self::new(0);
        t.add(&[], value);
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: &[usize]) -> Complex64 {
        let key: Vec<u32> = index.iter().map(|&i| i as u32).collect();
        self.entries.get(&key).copied().unwrap_or_default()
    }

    /// Adds `value` to the entry at `index`, dropping it if it becomes zero.
    pub fn add(&mut self, index: &[usize], value: Complex64) {
        assert_eq!(index.len(), self.arity, "index arity mismatch");
        let key: Vec<u32> = index.iter().map(|&i| i as u32).collect();
        add_entry(&mut self.entries, key, value);
        self.cache = Arc::default();
    }

    /// Overwrites an entry (removing it when `value` is zero).
    pub fn set(&mut self, index: &[usize], value: Complex64) {
        let key: Vec<u32> = index.iter().map(|&i| i as u32).collect();
        if value == Complex64::default() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        self.cache = Arc::default();
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        self.entries
            .iter()
            .map(|(k, v)| (k.iter().map(|&i| i as usize).collect(), *v))
    }

    /// Moves the entry stored at `from` to `to`; used for mutation tests.
    pub fn move_entry(&mut self, from: &[usize], to: &[usize]) {
        let value = self.get(from);
        self.set(from, Complex64::default());
        self.add(to, value);
    }

    /// Tensor with slots reordered: slot `i` of the result is slot `order[i]`
    /// of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut out = Self::new(self.arity);
        for (k, v) in &self.entries {
            let key: Vec<u32> = order.iter().map(|&i| k[i]).collect();
            add_entry(&mut out.entries, key, *v);
        }
        out
    }

    /// Largest absolute entry difference and the lexicographically first
    /// index tuple where the tensors differ.
    pub fn compare(&self, other: &Self) -> (f64, Option<Vec<usize>>) {
        let mut worst = 0.0f64;
        let mut first: Option<&Vec<u32>> = None;
        let mut visit = |a: Complex64, b: Complex64| {
            let d = (a - b).norm();
            worst = worst.max(d);
            d
        };
        for (k, &a) in &self.entries {
            let b = other.entries.get(k).copied().unwrap_or_default();
            if visit(a, b) > 0.0 && first.is_none_or(|f| k < f) {
                first = Some(k);
            }
        }
        for (k, &b) in &other.entries {
            if self.entries.contains_key(k) {
                continue;
            }
            if visit(Complex64::default(), b) > 0.0 && first.is_none_or(|f| k < f) {
                first = Some(k);
            }
        }
        (
            worst,
            first.map(|k| k.iter().map(|&i| i as usize).collect()),
        )
    }

    /// Entry keys concatenated (`arity` values per entry) and entry values.
    fn flat(&self) -> (&[u32], &[Complex64]) {
        let (keys, values) = self.cache.flat.get_or_init(|| {
            let keys = self.entries.keys().flatten().copied().collect();
            let values = self.entries.values().copied().collect();
            (keys, values)
        });
        (keys, values)
    }

    /// The `i`-th stored entry in lexicographic order.
    pub(crate) fn entry(&self, i: usize) -> (&[u32], Complex64) {
        let (keys, values) = self.flat();
        (&keys[i * self.arity..(i + 1) * self.arity], values[i])
    }

    fn index_for(&self, mask: usize) -> &HashMap<u128, Vec<u32>> {
        self.cache.by_mask[mask].get_or_init(|| {
            let (keys, _) = self.flat();
            let mut index: HashMap<u128, Vec<u32>> = HashMap::new();
            for e in 0..self.nnz() {
                let key = &keys[e * self.arity..(e + 1) * self.arity];
                let sub = pack((0..self.arity).filter(|s| mask >> s & 1 == 1).map(|s| key[s]));
                index.entry(sub).or_default().push(e as u32);
            }
            index
        })
    }
}

fn add_entry(map: &mut BTreeMap<Vec<u32>, Complex64>, key: Vec<u32>, value: Complex64) {
    if value == Complex64::default() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = *o.get() + value;
            if sum == Complex64::default() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

const UNBOUND: u32 = u32::MAX;

struct Step<'a> {
    tensor: &'a SparseTensor,
    slot_labels: Vec<usize>,
    bound_slots: Vec<usize>,
    index: &'a HashMap<u128, Vec<u32>>,
}

/// A compiled Einstein-summation over sparse tensors.
///
/// Each term is a tensor with one label character per slot. Labels shared
/// between terms are contracted unless they appear in the output. At each
/// step the term with the fewest entries per assignment of the already-bound
/// labels is joined next, through a hash index cached on the tensor.
pub struct Contraction<'a> {
    num_labels: usize,
    output: Vec<usize>,
    preset: Vec<usize>,
    steps: Vec<Step<'a>>,
}

impl<'a> Contraction<'a> {
    /// `preset` lists labels whose values are supplied at evaluation time.
    pub fn new(terms: &[(&'a SparseTensor, &str)], output: &str, preset: &str) -> Self {
        let mut names: Vec<char> = Vec::new();
        for (tensor, labels) in terms {
            assert_eq!(
                labels.chars().count(),
                tensor.arity(),
                "label count must match tensor arity for {labels:?}"
            );
        }
        let id = |c: char, names: &mut Vec<char>| match names.iter().position(|&x| x == c) {
            Some(i) => i,
            None => {
                names.push(c);
                names.len() - 1
            }
        };
        let preset_ids: Vec<usize> = preset.chars().map(|c| id(c, &mut names)).collect();
        for (_, labels) in terms {
            for c in labels.chars() {
                id(c, &mut names);
            }
        }
        let mut bound = vec![false; names.len() + output.len()];
        for &p in &preset_ids {
            bound[p] = true;
        }
        let term_labels: Vec<Vec<usize>> = terms
            .iter()
            .map(|(_, labels)| labels.chars().map(|c| id(c, &mut names)).collect())
            .collect();
        let mask_of = |t: usize, bound: &[bool]| {
            term_labels[t]
                .iter()
                .enumerate()
                .filter(|(_, &l)| bound[l])
                .fold(0usize, |m, (s, _)| m | 1 << s)
        };
        let mut steps = Vec::new();
        let mut remaining: Vec<usize> = (0..terms.len()).collect();
        while !remaining.is_empty() {
            let fanout = |t: usize| {
                let tensor = terms[t].0;
                let index = tensor.index_for(mask_of(t, &bound));
                tensor.nnz() as f64 / index.len().max(1) as f64
            };
            let pick = (0..remaining.len())
                .min_by(|&a, &b| fanout(remaining[a]).total_cmp(&fanout(remaining[b])))
                .expect("nonempty");
            let t = remaining.remove(pick);
            let mask = mask_of(t, &bound);
            let tensor = terms[t].0;
            let slot_labels = term_labels[t].clone();
            let bound_slots = (0..slot_labels.len()).filter(|s| mask >> s & 1 == 1).collect();
            for &l in &slot_labels {
                bound[l] = true;
            }
            steps.push(Step {
                tensor,
                slot_labels,
                bound_slots,
                index: tensor.index_for(mask),
            });
        }
        let output: Vec<usize> = output.chars().map(|c| id(c, &mut names)).collect();
        for &o in &output {
            assert!(bound.get(o).copied().unwrap_or(false), "output label never bound");
        }
        Self {
            num_labels: names.len(),
            output,
            preset: preset_ids,
            steps,
        }
    }

    /// Full contraction as a tensor over the output labels.
    pub fn evaluate(&self) -> SparseTensor {
        self.evaluate_with(&[])
    }

    pub fn evaluate_with(&self, preset_values: &[usize]) -> SparseTensor {
        assert_eq!(preset_values.len(), self.preset.len());
        let mut assign = vec![UNBOUND; self.num_labels];
        for (&l, &v) in self.preset.iter().zip(preset_values) {
            assign[l] = v as u32;
        }
        let mut out = BTreeMap::new();
        self.descend(0, &mut assign, Complex64::new(1.0, 0.0), &mut |key, coef| {
            add_entry(&mut out, key.to_vec(), coef)
        });
        let mut t = SparseTensor::new(self.output.len());
        t.entries = out;
        t
    }

    /// Value of the contraction at a single output tuple, with every output
    /// label preset.
    pub fn value_at(&self, preset_values: &[usize]) -> Complex64 {
        assert_eq!(preset_values.len(), self.preset.len());
        let mut assign = vec![UNBOUND; self.num_labels];
        for (&l, &v) in self.preset.iter().zip(preset_values) {
            assign[l] = v as u32;
        }
        let mut total = Complex64::default();
        self.descend(0, &mut assign, Complex64::new(1.0, 0.0), &mut |_, coef| total += coef);
        total
    }

    fn descend(
        &self,
        depth: usize,
        assign: &mut Vec<u32>,
        coef: Complex64,
        emit: &mut dyn FnMut(&[u32], Complex64),
    ) {
        if depth == self.steps.len() {
            let key: Vec<u32> = self.output.iter().map(|&l| assign[l]).collect();
            emit(&key, coef);
            return;
        }
        let step = &self.steps[depth];
        let sub = pack(step.bound_slots.iter().map(|&s| assign[step.slot_labels[s]]));
        let Some(candidates) = step.index.get(&sub) else {
            return;
        };
        let mut newly = [0usize; MAX_ARITY];
        for &e in candidates {
            let (key, value) = step.tensor.entry(e as usize);
            let mut count = 0;
            let mut ok = true;
            for (s, &l) in step.slot_labels.iter().enumerate() {
                if assign[l] == UNBOUND {
                    assign[l] = key[s];
                    newly[count] = l;
                    count += 1;
                } else if assign[l] != key[s] {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.descend(depth + 1, assign, coef * value, emit);
            }
            for &l in &newly[..count] {
                assign[l] = UNBOUND;
            }
        }
    }
}

/// One-shot contraction.
pub fn contract(terms: &[(&SparseTensor, &str)], output: &str) -> SparseTensor {
    Contraction::new(terms, output, "").evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn matrix(rows: &[&[f64]]) -> SparseTensor {
        let mut t = SparseTensor::new(2);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                t.add(&[i, j], c(v));
            }
        }
        t
    }

    #[test]
    fn matrix_product_matches_dense() {
        let a = matrix(&[&[1.0, 2.0], &[0.0, 3.0]]);
        let b = matrix(&[&[4.0, 0.0], &[5.0, 6.0]]);
        let p = contract(&[(&a, "ij"), (&b, "jk")], "ik");
        assert_eq!(p.get(&[0, 0]), c(14.0));
        assert_eq!(p.get(&[0, 1]), c(12.0));
        assert_eq!(p.get(&[1, 0]), c(15.0));
        assert_eq!(p.get(&[1, 1]), c(18.0));
        let tr = contract(&[(&a, "ii")], "");
        assert_eq!(tr.get(&[]), c(4.0));
    }

    #[test]
    fn preset_labels_select_entries() {
        let a = matrix(&[&[1.0, 2.0], &[0.0, 3.0]]);
        let b = matrix(&[&[4.0, 0.0], &[5.0, 6.0]]);
        let plan = Contraction::new(&[(&a, "ij"), (&b, "jk")], "ik", "ik");
        assert_eq!(plan.value_at(&[1, 0]), c(15.0));
    }

    #[test]
    fn cancellation_removes_entries_and_compare_reports_first() {
        let mut t = SparseTensor::new(1);
        t.add(&[3], c(1.0));
        t.add(&[3], c(-1.0));
        assert_eq!(t.nnz(), 0);
        let mut u = SparseTensor::new(1);
        u.add(&[5], c(2.0));
        u.add(&[1], c(1.0));
        let (res, first) = t.compare(&u);
        assert_eq!(res, 2.0);
        assert_eq!(first, Some(vec![1]));
    }
}
