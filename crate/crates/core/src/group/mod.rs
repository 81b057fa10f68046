//! Finite permutation groups with multiplication tables, conjugacy classes,
//! centralizers and character tables.
//!
//! Elements are identified by canonical indices `0..order`, ordered
//! lexicographically by their permutation image tuples. Index 0 is always the
//! identity.

mod characters;
mod perm;

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use thiserror::Error;

pub use characters::CharacterTable;
pub use perm::Permutation;

/// Default bound on the closure size of [`FiniteGroup::from_generators`].
pub const DEFAULT_SIZE_LIMIT: usize = 10_000;

/// Built-in group names accepted by [`FiniteGroup::builtin`].
pub const BUILTIN_NAMES: [&str; 7] = ["Z2", "Z3", "Z4", "S3", "D4", "S4", "S5"];

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("generator degree {found} does not match declared degree {declared}")]
    DegreeMismatch { declared: usize, found: usize },
    #[error("group closure exceeds {limit} elements")]
    SizeLimit { limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("character table did not converge: {0}")]
    NonConvergence(String),
    #[error("element {0:?} is not in the group")]
    NotAnElement(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Element index inside a [`FiniteGroup`].
pub type Element = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Element,
    /// Sorted element indices.
    pub members: Vec<Element>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Centralizer {
    pub base_element: Element,
    /// Sorted element indices; always contains the identity.
    pub members: Vec<Element>,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, Element>,
    mul_table: Vec<u32>,
    inv_table: Vec<u32>,
}

impl FiniteGroup {
    pub fn from_generators(
        degree: usize,
        generators: &[Permutation],
    ) -> Result<Self, GroupError> {
        Self::from_generators_with_limit(degree, generators, DEFAULT_SIZE_LIMIT)
    }

    /// Breadth-first closure of `generators` under composition.
    pub fn from_generators_with_limit(
        degree: usize,
        generators: &[Permutation],
        limit: usize,
    ) -> Result<Self, GroupError> {
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    declared: degree,
                    found: g.degree(),
                });
            }
        }
        let identity = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone(), ());
        queue.push_back(identity);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = g.compose(&p);
                if !seen.contains_key(&q) {
                    if seen.len() >= limit {
                        return Err(GroupError::SizeLimit { limit });
                    }
                    seen.insert(q.clone(), ());
                    queue.push_back(q);
                }
            }
        }
        let elements: Vec<Permutation> = seen.into_keys().collect();
        Ok(Self::from_elements(String::new(), degree, elements))
    }

    /// Builds the tables for a set of permutations already closed under
    /// composition.
    fn from_elements(name: String, degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        let lookup: HashMap<Permutation, Element> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let n = elements.len();
        let mut mul_table = vec![0u32; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul_table[a * n + b] = lookup[&pa.compose(pb)] as u32;
            }
        }
        let inv_table = elements.iter().map(|p| lookup[&p.inverse()] as u32).collect();
        Self {
            name,
            degree,
            elements,
            lookup,
            mul_table,
            inv_table,
        }
    }

    pub fn builtin(name: &str) -> Result<Self, GroupError> {
        let (degree, gens): (usize, &[&str]) = match name {
            "Z2" => (2, &["(1 2)"]),
            "Z3" => (3, &["(1 2 3)"]),
            "Z4" => (4, &["(1 2 3 4)"]),
            "S3" => (3, &["(1 2)", "(1 2 3)"]),
            "D4" => (4, &["(1 2 3 4)", "(1 3)"]),
            "S4" => (4, &["(1 2)", "(1 2 3 4)"]),
            "S5" => (5, &["(1 2)", "(1 2 3 4 5)"]),
            _ => return Err(GroupError::UnknownGroup(name.to_string())),
        };
        let gens = gens
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_generators(degree, &gens)?.with_name(name))
    }

    /// Parses the line-oriented group file format: `points <d>` followed by
    /// one generator per line in cycle notation; `#` starts a comment.
    pub fn parse_definition(text: &str) -> Result<Self, GroupError> {
        let mut degree = None;
        let mut gens = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match degree {
                None => {
                    let d = line
                        .strip_prefix("points")
                        .ok_or_else(|| {
                            GroupError::Parse(format!("expected `points <d>`, got {line:?}"))
                        })?
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| GroupError::Parse(format!("bad point count: {e}")))?;
                    degree = Some(d);
                }
                Some(d) => gens.push(Permutation::parse_cycles(line, d)?),
            }
        }
        let degree = degree.ok_or_else(|| GroupError::Parse("empty group file".into()))?;
        Self::from_generators(degree, &gens)
    }

    /// Resolves a built-in name or a path to a group definition file.
    pub fn resolve(spec: &str) -> Result<Self, GroupError> {
        if BUILTIN_NAMES.contains(&spec) {
            return Self::builtin(spec);
        }
        let path = Path::new(spec);
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            return Ok(Self::parse_definition(&text)?.with_name(&name));
        }
        Err(GroupError::UnknownGroup(spec.to_string()))
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub const fn identity(&self) -> Element {
        0
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul_table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv_table[a] as usize
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: Element, x: Element) -> Element {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn permutation(&self, g: Element) -> &Permutation {
        &self.elements[g]
    }

    pub fn element_of(&self, p: &Permutation) -> Option<Element> {
        self.lookup.get(&p.padded(self.degree)).copied()
    }

    /// Parses an element given in cycle notation.
    pub fn parse_element(&self, text: &str) -> Result<Element, GroupError> {
        let p = Permutation::parse_cycles(text, self.degree)?;
        self.element_of(&p)
            .ok_or_else(|| GroupError::NotAnElement(text.to_string()))
    }

    pub fn format_element(&self, g: Element) -> String {
        self.elements[g].to_string()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    /// Conjugacy classes sorted by (size, representative). The representative
    /// is the smallest member index, so the identity class comes first.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let mut members: Vec<Element> = (0..n).map(|g| self.conj(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                assigned[m] = true;
            }
            classes.push(ConjugacyClass {
                representative: members[0],
                members,
            });
        }
        classes.sort_by_key(|c| (c.size(), c.representative));
        classes
    }

    /// Maps every element to its index in [`Self::conjugacy_classes`].
    pub fn class_index(&self, classes: &[ConjugacyClass]) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.order()];
        for (c, class) in classes.iter().enumerate() {
            for &m in &class.members {
                idx[m] = c;
            }
        }
        idx
    }

    pub fn centralizer(&self, u: Element) -> Centralizer {
        let members = self
            .elements()
            .filter(|&g| self.mul(g, u) == self.mul(u, g))
            .collect();
        Centralizer {
            base_element: u,
            members,
        }
    }

    /// The subgroup formed by `members` (which must be closed under
    /// multiplication), re-indexed canonically.
    pub fn subgroup(&self, members: &[Element], name: &str) -> Self {
        let perms = members.iter().map(|&g| self.elements[g].clone()).collect();
        Self::from_elements(name.to_string(), self.degree, perms)
    }

    pub fn character_table(&self) -> Result<CharacterTable, GroupError> {
        CharacterTable::compute(self)
    }

    /// Checks associativity and identity/inverse laws. Exhaustive when
    /// `samples` is `None`, otherwise on seeded random triples.
    pub fn check_axioms(&self, samples: Option<(usize, u64)>) -> bool {
        use rand::{Rng, SeedableRng};
        let n = self.order();
        let assoc = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        let unit_ok = (0..n).all(|g| {
            self.mul(0, g) == g
                && self.mul(g, 0) == g
                && self.mul(g, self.inv(g)) == 0
                && self.mul(self.inv(g), g) == 0
        });
        if !unit_ok {
            return false;
        }
        match samples {
            None => (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| assoc(a, b, c)))),
            Some((count, seed)) => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                (0..count).all(|_| {
                    assoc(
                        rng.random_range(0..n),
                        rng.random_range(0..n),
                        rng.random_range(0..n),
                    )
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(text: &str, d: usize) -> Permutation {
        Permutation::parse_cycles(text, d).unwrap()
    }

    /// Independent closure oracle: repeated multiplication of the whole set
    /// until no new element appears.
    fn naive_closure(degree: usize, gens: &[Permutation]) -> usize {
        let mut set: std::collections::BTreeSet<Permutation> =
            std::iter::once(Permutation::identity(degree)).collect();
        loop {
            let mut next = set.clone();
            for a in &set {
                for g in gens {
                    next.insert(a.compose(g));
                }
            }
            if next.len() == set.len() {
                return set.len();
            }
            set = next;
        }
    }

    #[test]
    fn closure_orders() {
        assert_eq!(FiniteGroup::from_generators(3, &[]).unwrap().order(), 1);
        assert_eq!(
            FiniteGroup::from_generators(3, &[perm("(1 2)", 3)]).unwrap().order(),
            2
        );
        let gens = [perm("(1 2)", 5), perm("(1 2 3 4 5)", 5)];
        let s5 = FiniteGroup::from_generators(5, &gens).unwrap();
        assert_eq!(naive_closure(5, &gens), 120);
        assert_eq!(s5.order(), 120);
    }

    #[test]
    fn size_limit_is_enforced() {
        let gens = [perm("(1 2)", 5), perm("(1 2 3 4 5)", 5)];
        let err = FiniteGroup::from_generators_with_limit(5, &gens, 50).unwrap_err();
        assert!(matches!(err, GroupError::SizeLimit { limit: 50 }));
    }

    #[test]
    fn builtins_satisfy_axioms() {
        for name in BUILTIN_NAMES {
            let g = FiniteGroup::builtin(name).unwrap();
            assert_eq!(g.permutation(0), &Permutation::identity(g.degree()));
            let exhaustive = if g.order() <= 24 { None } else { Some((10_000, 7)) };
            assert!(g.check_axioms(exhaustive), "{name}");
            if exhaustive.is_none() {
                assert!(g.check_axioms(Some((10_000, 7))));
            }
        }
        let orders: Vec<usize> = BUILTIN_NAMES
            .iter()
            .map(|n| FiniteGroup::builtin(n).unwrap().order())
            .collect();
        assert_eq!(orders, vec![2, 3, 4, 6, 8, 24, 120]);
    }

    #[test]
    fn class_sizes() {
        let sizes = |name: &str| {
            FiniteGroup::builtin(name)
                .unwrap()
                .conjugacy_classes()
                .iter()
                .map(|c| c.size())
                .collect::<Vec<_>>()
        };
        assert_eq!(sizes("S3"), vec![1, 2, 3]);
        assert_eq!(sizes("Z2"), vec![1, 1]);
        assert_eq!(sizes("S5"), vec![1, 10, 15, 20, 20, 24, 30]);
    }

    #[test]
    fn classes_partition_and_are_closed() {
        for name in BUILTIN_NAMES {
            let g = FiniteGroup::builtin(name).unwrap();
            let classes = g.conjugacy_classes();
            assert_eq!(classes.iter().map(|c| c.size()).sum::<usize>(), g.order());
            for c in &classes {
                for &m in &c.members {
                    for x in g.elements() {
                        assert!(c.contains(g.conj(x, m)));
                    }
                }
            }
        }
    }

    #[test]
    fn centralizer_orbit_duality() {
        for name in BUILTIN_NAMES {
            let g = FiniteGroup::builtin(name).unwrap();
            let classes = g.conjugacy_classes();
            let idx = g.class_index(&classes);
            for u in g.elements() {
                let e = g.centralizer(u);
                assert_eq!(e.members.len() * classes[idx[u]].size(), g.order());
                assert!(e.members.contains(&0));
            }
        }
        let s5 = FiniteGroup::builtin("S5").unwrap();
        let t = s5.parse_element("(1 2)").unwrap();
        assert_eq!(s5.centralizer(t).members.len(), 12);
        let s3 = FiniteGroup::builtin("S3").unwrap();
        let c = s3.parse_element("(1 2 3)").unwrap();
        assert_eq!(s3.centralizer(c).members.len(), 3);
        assert_eq!(s3.centralizer(0).members.len(), 6);
    }

    #[test]
    fn group_file_round_trip() {
        let text = "# symmetric group on three points\npoints 3\n(1 2)\n(1 2 3)  # rotation\n";
        let g = FiniteGroup::parse_definition(text).unwrap();
        assert_eq!(g.order(), 6);
        assert!(FiniteGroup::parse_definition("(1 2)\n").is_err());
        assert!(FiniteGroup::parse_definition("points 2\n(1 3)\n").is_err());
    }

    #[test]
    fn subgroup_reindexes_canonically() {
        let s3 = FiniteGroup::builtin("S3").unwrap();
        let c = s3.parse_element("(1 2 3)").unwrap();
        let e = s3.centralizer(c);
        let sub = s3.subgroup(&e.members, "E");
        assert_eq!(sub.order(), 3);
        assert!(sub.check_axioms(None));
    }
}
