use nalgebra::{DMatrix, SymmetricEigen};

use crate::group::{ConjugacyClass, Element, FiniteGroup, GroupError};

/// Irreducible representation `(C, χ)` of `D(G)`: a conjugacy class together
/// with an irrep of the centralizer of its representative.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleIrrepLabel {
    pub magnetic_class: ConjugacyClass,
    pub centralizer_order: usize,
    /// Row of the centralizer's character table (trivial character is 0).
    pub electric_row: usize,
    pub electric_dim: usize,
    /// `|C| · χ(1)`.
    pub dim: usize,
}

pub fn double_irreps(group: &FiniteGroup) -> Result<Vec<DoubleIrrepLabel>, GroupError> {
    let mut labels = Vec::new();
    for class in group.conjugacy_classes() {
        let centralizer = group.centralizer(class.representative);
        let sub = group.subgroup(&centralizer.members, "centralizer");
        let table = sub.character_table()?;
        for (row, &chi_dim) in table.dims.iter().enumerate() {
            labels.push(DoubleIrrepLabel {
                magnetic_class: class.clone(),
                centralizer_order: sub.order(),
                electric_row: row,
                electric_dim: chi_dim,
                dim: class.size() * chi_dim,
            });
        }
    }
    // stable: ties keep class order, then character order
    labels.sort_by_key(|l| (l.magnetic_class.size(), l.dim));
    Ok(labels)
}

/// Elements chosen in index order, each one kept only if it enlarges the
/// subgroup generated so far.
pub(crate) fn greedy_generators(group: &FiniteGroup) -> Vec<Element> {
    let mut gens = Vec::new();
    let mut reached = vec![false; group.order()];
    reached[0] = true;
    let mut count = 1;
    for g in group.elements() {
        if reached[g] {
            continue;
        }
        gens.push(g);
        let mut frontier: Vec<Element> = (0..group.order()).filter(|&x| reached[x]).collect();
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = group.mul(x, s);
                if !reached[y] {
                    reached[y] = true;
                    count += 1;
                    frontier.push(y);
                }
            }
        }
        if count == group.order() {
            break;
        }
    }
    gens
}

/// Dimension of the commutant of the vortex action of `D(G)` on
/// `span{|v> : v in C}`. The action is irreducible exactly when this is 1.
///
/// The action is generated by the projectors `B_v` (v in C) and the
/// permutations `A_g` for a generating set of G. The commutant is the null
/// space of the linear map `X -> (X M - M X)` over all generators, found from
/// the eigenvalues of its Gram matrix.
pub fn vortex_commutant_dimension(group: &FiniteGroup, class: &ConjugacyClass) -> usize {
    let d = class.size();
    let pos = |v: Element| class.members.binary_search(&v).expect("class member");
    let mut generators: Vec<DMatrix<f64>> = Vec::new();
    for &v in &class.members {
        let mut m = DMatrix::zeros(d, d);
        m[(pos(v), pos(v))] = 1.0;
        generators.push(m);
    }
    for g in greedy_generators(group) {
        let mut m = DMatrix::zeros(d, d);
        for &v in &class.members {
            m[(pos(group.conj(g, v)), pos(v))] = 1.0;
        }
        generators.push(m);
    }
    // Unknown X flattened row-major: x[a*d + b] = X[a][b].
    let unknowns = d * d;
    let mut gram = DMatrix::<f64>::zeros(unknowns, unknowns);
    let mut row = vec![0.0; unknowns];
    for m in &generators {
        // (X M - M X)[a][b] = Σ_c X[a][c] M[c][b] - M[a][c] X[c][b]
        for a in 0..d {
            for b in 0..d {
                row.iter_mut().for_each(|r| *r = 0.0);
                for c in 0..d {
                    row[a * d + c] += m[(c, b)];
                    row[c * d + b] -= m[(a, c)];
                }
                let nz: Vec<usize> = (0..unknowns).filter(|&i| row[i] != 0.0).collect();
                for &i in &nz {
                    for &j in &nz {
                        gram[(i, j)] += row[i] * row[j];
                    }
                }
            }
        }
    }
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().filter(|v| v.abs() < 1e-9).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::BUILTIN_NAMES;

    #[test]
    fn s3_dimensions() {
        let g = FiniteGroup::builtin("S3").unwrap();
        let labels = double_irreps(&g).unwrap();
        let dims: Vec<usize> = labels.iter().map(|l| l.dim).collect();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn z2_has_four_one_dimensional_irreps() {
        let g = FiniteGroup::builtin("Z2").unwrap();
        let labels = double_irreps(&g).unwrap();
        assert_eq!(labels.len(), 4);
        assert!(labels.iter().all(|l| l.dim == 1));
    }

    /// Number of commuting pairs up to simultaneous conjugation, counted by
    /// brute-force orbit enumeration.
    fn commuting_pair_orbits(g: &FiniteGroup) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut orbits = 0;
        for a in g.elements() {
            for b in g.elements() {
                if g.mul(a, b) != g.mul(b, a) || seen.contains(&(a, b)) {
                    continue;
                }
                orbits += 1;
                for x in g.elements() {
                    seen.insert((g.conj(x, a), g.conj(x, b)));
                }
            }
        }
        orbits
    }

    #[test]
    fn squared_dimensions_sum_to_order_squared() {
        for name in BUILTIN_NAMES {
            let g = FiniteGroup::builtin(name).unwrap();
            let labels = double_irreps(&g).unwrap();
            let total: usize = labels.iter().map(|l| l.dim * l.dim).sum();
            assert_eq!(total, g.order() * g.order(), "{name}");
            assert_eq!(labels.len(), commuting_pair_orbits(&g), "{name}");
        }
    }

    #[test]
    fn vortex_actions_are_irreducible() {
        for name in ["S3", "D4", "S4"] {
            let g = FiniteGroup::builtin(name).unwrap();
            for class in g.conjugacy_classes() {
                assert_eq!(vortex_commutant_dimension(&g, &class), 1, "{name}");
            }
        }
    }

    #[test]
    fn greedy_generators_generate() {
        let g = FiniteGroup::builtin("S4").unwrap();
        let gens = greedy_generators(&g);
        let perms: Vec<_> = gens.iter().map(|&x| g.permutation(x).clone()).collect();
        let closure = FiniteGroup::from_generators(g.degree(), &perms).unwrap();
        assert_eq!(closure.order(), 24);
    }
}
