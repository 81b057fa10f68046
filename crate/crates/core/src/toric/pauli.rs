use std::fmt;

use super::ToricError;

/// `i^phase · X^x · Z^z` on `n` qubits, with both bit vectors packed into
/// 64-bit words (qubit `j` is bit `j % 64` of word `j / 64`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn dot(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(p, q)| (p & q).count_ones()).sum()
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            phase: 0,
        }
    }

    /// Product of σ^x over `qubits` (repeats cancel).
    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            p.flip_x(q);
        }
        p
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            p.flip_z(q);
        }
        p
    }

    /// σ^y on qubit `q`, i.e. `i · X Z`.
    pub fn y_at(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.flip_x(q);
        p.flip_z(q);
        p.phase = 1;
        p
    }

    pub fn from_bits(n: usize, x: &[bool], z: &[bool], phase: u8) -> Self {
        let mut p = Self::identity(n);
        for q in 0..n {
            if x[q] {
                p.flip_x(q);
            }
            if z[q] {
                p.flip_z(q);
            }
        }
        p.phase = phase % 4;
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Power of `i` in front of `X^x Z^z`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn flip_x(&mut self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range");
        self.x[q / 64] ^= 1 << (q % 64);
    }

    pub fn flip_z(&mut self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range");
        self.z[q / 64] ^= 1 << (q % 64);
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// The `X^x` factor alone, without phase.
    pub fn x_part(&self) -> Self {
        Self {
            n: self.n,
            x: self.x.clone(),
            z: vec![0; self.z.len()],
            phase: 0,
        }
    }

    pub fn z_part(&self) -> Self {
        Self {
            n: self.n,
            x: vec![0; self.x.len()],
            z: self.z.clone(),
            phase: 0,
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn x_weight(&self) -> usize {
        self.x.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn z_weight(&self) -> usize {
        self.z.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x(q) || self.z(q)).collect()
    }

    fn check_len(&self, other: &Self) -> Result<(), ToricError> {
        if self.n != other.n {
            return Err(ToricError::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// `self · other`. Moving `Z^{z1}` past `X^{x2}` costs `(-1)^{z1·x2}`.
    pub fn mul(&self, other: &Self) -> Result<Self, ToricError> {
        self.check_len(other)?;
        let sign = 2 * (dot(&self.z, &other.x) % 2) as u8;
        Ok(Self {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            phase: (self.phase + other.phase + sign) % 4,
        })
    }

    /// `(i^p X^x Z^z)⁻¹ = i^{-p} Z^z X^x = i^{-p} (-1)^{x·z} X^x Z^z`.
    pub fn inverse(&self) -> Self {
        let sign = 2 * (dot(&self.x, &self.z) % 2) as u8;
        Self {
            n: self.n,
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (4 - self.phase + sign) % 4,
        }
    }

    /// Symplectic form `x1·z2 + z1·x2 (mod 2)`; zero means the operators commute.
    pub fn symplectic(&self, other: &Self) -> Result<u32, ToricError> {
        self.check_len(other)?;
        Ok((dot(&self.x, &other.z) + dot(&self.z, &other.x)) % 2)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool, ToricError> {
        Ok(self.symplectic(other)? == 0)
    }

    fn hex(bits: &[u64], n: usize) -> String {
        let digits = n.div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (bits.get(d / 16).copied().unwrap_or(0) >> (4 * (d % 16))) & 0xf;
                char::from_digit(nibble as u32, 16).expect("nibble")
            })
            .collect()
    }

    /// Parses `i^p|x-hex|z-hex`. Hex strings read qubit 0 as the least
    /// significant bit.
    pub fn parse(text: &str, n: usize) -> Result<Self, ToricError> {
        let bad = || ToricError::Parse(format!("expected i^p|x-hex|z-hex, got {text:?}"));
        let mut parts = text.trim().split('|');
        let (Some(ph), Some(xs), Some(zs), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let phase: u8 = ph.strip_prefix("i^").and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if phase > 3 {
            return Err(bad());
        }
        let mut p = Self::identity(n);
        for (digits, x_side) in [(xs, true), (zs, false)] {
            for (d, ch) in digits.chars().rev().enumerate() {
                let nibble = ch.to_digit(16).ok_or_else(bad)?;
                for b in 0..4 {
                    if nibble >> b & 1 == 0 {
                        continue;
                    }
                    let q = 4 * d + b;
                    if q >= n {
                        return Err(ToricError::Parse(format!("qubit {q} beyond {n} in {text:?}")));
                    }
                    if x_side {
                        p.flip_x(q);
                    } else {
                        p.flip_z(q);
                    }
                }
            }
        }
        Ok(p.with_phase(phase))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "i^{}|{}|{}",
            self.phase,
            Self::hex(&self.x, self.n),
            Self::hex(&self.z, self.n)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    type Dense = Vec<Vec<Complex64>>;

    fn kron(a: &Dense, b: &Dense) -> Dense {
        let (ra, rb) = (a.len(), b.len());
        let mut out = vec![vec![Complex64::default(); ra * rb]; ra * rb];
        for i in 0..ra {
            for j in 0..ra {
                for k in 0..rb {
                    for l in 0..rb {
                        out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn matmul(a: &Dense, b: &Dense) -> Dense {
        let n = a.len();
        let mut out = vec![vec![Complex64::default(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k] == Complex64::default() {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    /// Dense matrix from 2×2 Pauli matrices; qubit 0 is the last tensor factor.
    fn dense(p: &PauliOperator) -> Dense {
        let c = |re: f64| Complex64::new(re, 0.0);
        let id = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]];
        let x = vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]];
        let z = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]];
        let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
        for q in (0..p.num_qubits()).rev() {
            let mut f = id.clone();
            if p.x(q) {
                f = matmul(&f, &x);
            }
            if p.z(q) {
                f = matmul(&f, &z);
            }
            m = kron(&m, &f);
        }
        let ph = Complex64::i().powu(p.phase() as u32);
        m.iter().map(|r| r.iter().map(|v| v * ph).collect()).collect()
    }

    fn arb(n: usize) -> impl Strategy<Value = PauliOperator> {
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
            0u8..4,
        )
            .prop_map(move |(x, z, p)| PauliOperator::from_bits(n, &x, &z, p))
    }

    proptest! {
        #[test]
        fn product_matches_dense_matrices(a in arb(5), b in arb(5)) {
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(dense(&prod), matmul(&dense(&a), &dense(&b)));
        }

        #[test]
        fn inverse_matches_dense(a in arb(4)) {
            let id = PauliOperator::identity(4);
            prop_assert_eq!(a.mul(&a.inverse()).unwrap(), id.clone());
            prop_assert_eq!(dense(&a.inverse()), {
                // dense inverse of a unitary is its adjoint
                let m = dense(&a);
                (0..m.len()).map(|i| (0..m.len()).map(|j| m[j][i].conj()).collect()).collect::<Dense>()
            });
        }

        #[test]
        fn commutation_sign_rule(a in arb(12), b in arb(12)) {
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            let s = a.symplectic(&b).unwrap();
            prop_assert_eq!(ab.clone().with_phase(0), ba.clone().with_phase(0));
            prop_assert_eq!((ab.phase() + 4 - ba.phase()) % 4, 2 * s as u8);
        }

        #[test]
        fn commutation_against_dense(a in arb(6), b in arb(6)) {
            let ab = matmul(&dense(&a), &dense(&b));
            let ba = matmul(&dense(&b), &dense(&a));
            prop_assert_eq!(a.commutes_with(&b).unwrap(), ab == ba);
        }

        #[test]
        fn serialization_round_trips(a in arb(70)) {
            let text = a.to_string();
            prop_assert_eq!(PauliOperator::parse(&text, 70).unwrap(), a);
        }
    }

    #[test]
    fn y_is_i_x_z() {
        let y = PauliOperator::y_at(1, 0);
        let d = dense(&y);
        assert_eq!(d[0][1], Complex64::new(0.0, -1.0));
        assert_eq!(d[1][0], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn serialization_format() {
        let p = PauliOperator::x_on(8, [0, 5]).mul(&PauliOperator::z_on(8, [7])).unwrap();
        assert_eq!(p.to_string(), "i^0|21|80");
        assert!(PauliOperator::parse("i^0|21|80", 4).is_err());
        assert!(PauliOperator::parse("0|21|80", 8).is_err());
        assert!(PauliOperator::parse("i^5|0|0", 8).is_err());
    }

    #[test]
    fn length_mismatch_is_reported() {
        let a = PauliOperator::identity(3);
        let b = PauliOperator::identity(4);
        assert!(matches!(a.mul(&b), Err(ToricError::LengthMismatch { .. })));
    }
}
