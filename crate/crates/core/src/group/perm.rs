use std::fmt;

use super::GroupError;

/// A permutation of `{0, .., degree-1}` stored as its image tuple.
///
/// Printed and parsed in 1-based cycle notation, e.g. `(1 2)(3 4 5)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u16).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(GroupError::NotABijection(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Self {
            images: images.into_iter().map(|x| x as u16).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Function composition: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u16;
        }
        Self { images }
    }

    /// Extends the permutation with fixed points up to `degree`.
    pub fn padded(&self, degree: usize) -> Self {
        let mut images = self.images.clone();
        images.extend(self.images.len() as u16..degree as u16);
        Self { images }
    }

    /// Parses cycle notation with 1-based points. `()`, `e` and `id` denote
    /// the identity. Cycles may use spaces or commas as separators.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, GroupError> {
        let text = text.trim();
        let mut images: Vec<usize> = (0..degree).collect();
        if text.is_empty() || text == "e" || text == "id" {
            return Ok(Self::identity(degree));
        }
        let mut rest = text;
        let mut seen = vec![false; degree];
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| GroupError::Parse(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| GroupError::Parse(format!("unbalanced parenthesis in {text:?}")))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let points = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| GroupError::Parse(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(GroupError::Parse(format!(
                        "point {p} outside 1..={degree} in {text:?}"
                    )));
                }
                if seen[p - 1] {
                    return Err(GroupError::NotABijection(text.to_string()));
                }
                seen[p - 1] = true;
            }
            for (i, &p) in points.iter().enumerate() {
                let next = points[(i + 1) % points.len()];
                images[p - 1] = next - 1;
            }
        }
        Self::from_images(images)
    }

    /// Largest point moved, plus one (0 for the identity).
    pub fn support_degree(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i + 1)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut visited = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if visited[start] || self.images[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !visited[p] {
                visited[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
                first = false;
                p = self.images[p] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}
