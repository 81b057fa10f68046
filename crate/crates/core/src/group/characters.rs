use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use super::{ConjugacyClass, Element, FiniteGroup, GroupError};

const TOLERANCE: f64 = 1e-9;
const MAX_ATTEMPTS: u64 = 16;

/// Complex character table. `irreps[r][c]` is the value of irrep `r` on
/// class `c`; classes are in [`FiniteGroup::conjugacy_classes`] order and
/// irreps are ordered by dimension with the trivial character first.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Vec<ConjugacyClass>,
    pub irreps: Vec<Vec<Complex64>>,
    pub dims: Vec<usize>,
    class_of: Vec<usize>,
}

impl CharacterTable {
    /// Splits the class-sum algebra by simultaneous diagonalisation.
    ///
    /// In the orthonormal basis `K_i / sqrt|C_i|` of the centre of the group
    /// algebra (trace form), left multiplication by `K_j` has adjoint
    /// multiplication by `K_{j*}` (the inverse class). A random real
    /// combination of `K_j + K_{j*}` and `i(K_j - K_{j*})` is therefore
    /// Hermitian, and its eigenvectors are the primitive central idempotents.
    pub fn compute(group: &FiniteGroup) -> Result<Self, GroupError> {
        let classes = group.conjugacy_classes();
        let class_of = group.class_index(&classes);
        let r = classes.len();
        let n = group.order();

        // coeff[j][i][k] = #{x in C_j : x⁻¹ g_k in C_i}, g_k the representative of C_k
        let mut coeff = vec![vec![vec![0.0f64; r]; r]; r];
        for (k, ck) in classes.iter().enumerate() {
            let gk = ck.representative;
            for x in 0..n {
                let y = group.mul(group.inv(x), gk);
                coeff[class_of[x]][class_of[y]][k] += 1.0;
            }
        }
        let inverse_class: Vec<usize> = classes
            .iter()
            .map(|c| class_of[group.inv(c.representative)])
            .collect();
        let sizes: Vec<f64> = classes.iter().map(|c| c.size() as f64).collect();
        let class_matrix = |j: usize| {
            DMatrix::<Complex64>::from_fn(r, r, |k, i| {
                Complex64::new(coeff[j][i][k] * (sizes[k] / sizes[i]).sqrt(), 0.0)
            })
        };
        let mats: Vec<DMatrix<Complex64>> = (0..r).map(class_matrix).collect();

        let mut last_gap = 0.0;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt);
            let mut h = DMatrix::<Complex64>::zeros(r, r);
            for j in 0..r {
                let a: f64 = rng.random_range(-1.0..1.0);
                let b: f64 = rng.random_range(-1.0..1.0);
                let m = &mats[j];
                let mt = &mats[inverse_class[j]];
                h += (m + mt) * Complex64::new(a, 0.0) + (m - mt) * Complex64::new(0.0, b);
            }
            // symmetrise away rounding noise
            let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(h);
            let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            values.sort_by(f64::total_cmp);
            let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            last_gap = values
                .windows(2)
                .map(|w| (w[1] - w[0]) / scale)
                .fold(f64::INFINITY, f64::min);
            if r > 1 && last_gap < 1e-6 {
                continue;
            }
            if let Some(table) = Self::from_eigenvectors(&eig.eigenvectors, &classes, &sizes, n)
            {
                let table = Self {
                    classes,
                    irreps: table.0,
                    dims: table.1,
                    class_of,
                };
                let residual = table.orthogonality_residual();
                if residual > TOLERANCE {
                    return Err(GroupError::NonConvergence(format!(
                        "orthogonality residual {residual:e}"
                    )));
                }
                return Ok(table);
            }
        }
        Err(GroupError::NonConvergence(format!(
            "eigenvalues not separated after {MAX_ATTEMPTS} attempts (relative gap {last_gap:e})"
        )))
    }

    #[allow(clippy::type_complexity)]
    fn from_eigenvectors(
        vectors: &DMatrix<Complex64>,
        classes: &[ConjugacyClass],
        sizes: &[f64],
        order: usize,
    ) -> Option<(Vec<Vec<Complex64>>, Vec<usize>)> {
        let r = classes.len();
        let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(r);
        for col in 0..r {
            let v = vectors.column(col);
            let w: Vec<Complex64> = (0..r).map(|i| (v[i] / sizes[i].sqrt()).conj()).collect();
            if w[0].norm() < 1e-12 {
                return None;
            }
            let w0 = w[0];
            let ratios: Vec<Complex64> = w.iter().map(|x| x / w0).collect();
            let weight: f64 = ratios
                .iter()
                .zip(sizes)
                .map(|(x, s)| s * x.norm_sqr())
                .sum();
            let dim = (order as f64 / weight).sqrt();
            let rounded = dim.round();
            if (dim - rounded).abs() > 1e-6 || rounded < 1.0 {
                return None;
            }
            let chi = ratios.iter().map(|x| x * rounded).collect();
            rows.push((rounded as usize, chi));
        }
        rows.sort_by(|(da, a), (db, b)| {
            da.cmp(db).then_with(|| {
                for (x, y) in a.iter().zip(b) {
                    let c = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
                    if (x - y).norm() > 1e-9 {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        let dims = rows.iter().map(|(d, _)| *d).collect();
        Some((rows.into_iter().map(|(_, c)| c).collect(), dims))
    }

    pub fn num_irreps(&self) -> usize {
        self.irreps.len()
    }

    /// Character value of irrep `row` at element `g`.
    pub fn value(&self, row: usize, g: Element) -> Complex64 {
        self.irreps[row][self.class_of[g]]
    }

    /// Largest deviation from both orthogonality relations.
    pub fn orthogonality_residual(&self) -> f64 {
        let r = self.irreps.len();
        let order: f64 = self.classes.iter().map(|c| c.size() as f64).sum();
        let mut worst = 0.0f64;
        for a in 0..r {
            for b in 0..r {
                let s: Complex64 = (0..self.classes.len())
                    .map(|c| self.irreps[a][c] * self.irreps[b][c].conj() * self.classes[c].size() as f64)
                    .sum();
                let expect = if a == b { order } else { 0.0 };
                worst = worst.max((s - expect).norm());
            }
        }
        for c1 in 0..self.classes.len() {
            for c2 in 0..self.classes.len() {
                let s: Complex64 = (0..r)
                    .map(|a| self.irreps[a][c1] * self.irreps[a][c2].conj())
                    .sum();
                let expect = if c1 == c2 {
                    order / self.classes[c1].size() as f64
                } else {
                    0.0
                };
                worst = worst.max((s - expect).norm());
            }
        }
        worst
    }
}
