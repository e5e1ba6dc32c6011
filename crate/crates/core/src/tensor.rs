//! Small dense and sparse rank-3 tensors.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::tolerance;

/// Dense cubic rank-3 tensor, row-major in `(i, j, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.data[(i * n + j) * n + k] = f(i, j, k);
                }
            }
        }
        t
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        self.data[(i * n + j) * n + k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        self.data[(i * n + j) * n + k] += v;
    }

    /// Contiguous slice `t[i][j][..]`.
    #[inline]
    pub fn fiber(&self, i: usize, j: usize) -> &[f64] {
        let n = self.n;
        &self.data[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Iterator over `(i, j, k, value)` for entries with nonzero value.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(idx, v)| {
                let k = idx % n;
                let j = (idx / n) % n;
                let i = idx / (n * n);
                (i, j, k, *v)
            })
    }

    /// Change of basis on each slot:
    /// `out[a][b][c] = Σ m1[(i, a)] m2[(j, b)] m3[(k, c)] t[i][j][k]`.
    pub fn transform(&self, m1: &DMatrix<f64>, m2: &DMatrix<f64>, m3: &DMatrix<f64>) -> Self {
        let n = self.n;
        // one slot at a time: O(n^4)
        let mut s1 = Tensor3::zeros(n);
        for (i, j, k, v) in self.nonzeros() {
            for c in 0..n {
                s1.add(i, j, c, v * m3[(k, c)]);
            }
        }
        let mut s2 = Tensor3::zeros(n);
        for (i, j, c, v) in s1.nonzeros() {
            for b in 0..n {
                s2.add(i, b, c, v * m2[(j, b)]);
            }
        }
        let mut out = Tensor3::zeros(n);
        for (i, b, c, v) in s2.nonzeros() {
            for a in 0..n {
                out.add(a, b, c, v * m1[(i, a)]);
            }
        }
        out
    }
}

/// Structure constants of a Lie algebra, `[e_i, e_j] = Σ_k C[i][j][k] e_k`.
///
/// Stored densely up to [`tolerance::DENSE_MAX_DIM`] and as sorted sparse
/// triplets above. Entries below [`tolerance::DROP`] are discarded.
#[derive(Debug, Clone, PartialEq)]
pub enum StructureConstants {
    Dense(Tensor3),
    Sparse {
        n: usize,
        entries: Vec<((usize, usize, usize), f64)>,
    },
}

impl StructureConstants {
    /// Builds storage from an entry list. Later entries with the same key
    /// overwrite earlier ones; callers reject duplicates beforehand.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize, usize), f64)>,
    ) -> Self {
        let kept = entries
            .into_iter()
            .filter(|(_, v)| v.abs() >= tolerance::DROP);
        if n <= tolerance::DENSE_MAX_DIM {
            let mut t = Tensor3::zeros(n);
            for ((i, j, k), v) in kept {
                t.set(i, j, k, v);
            }
            StructureConstants::Dense(t)
        } else {
            let mut map = std::collections::BTreeMap::new();
            for (key, v) in kept {
                map.insert(key, v);
            }
            StructureConstants::Sparse {
                n,
                entries: map.into_iter().collect(),
            }
        }
    }

    pub fn from_dense(t: &Tensor3) -> Self {
        Self::from_entries(t.dim(), t.nonzeros().map(|(i, j, k, v)| ((i, j, k), v)))
    }

    pub fn dim(&self) -> usize {
        match self {
            StructureConstants::Dense(t) => t.dim(),
            StructureConstants::Sparse { n, .. } => *n,
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        match self {
            StructureConstants::Dense(t) => t.get(i, j, k),
            StructureConstants::Sparse { entries, .. } => entries
                .binary_search_by(|(key, _)| key.cmp(&(i, j, k)))
                .map(|idx| entries[idx].1)
                .unwrap_or(0.0),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, StructureConstants::Dense(_))
    }

    pub fn nonzeros(&self) -> Vec<(usize, usize, usize, f64)> {
        match self {
            StructureConstants::Dense(t) => t.nonzeros().collect(),
            StructureConstants::Sparse { entries, .. } => {
                entries.iter().map(|&((i, j, k), v)| (i, j, k, v)).collect()
            }
        }
    }

    pub fn to_dense(&self) -> Tensor3 {
        match self {
            StructureConstants::Dense(t) => t.clone(),
            StructureConstants::Sparse { n, entries } => {
                let mut t = Tensor3::zeros(*n);
                for &((i, j, k), v) in entries {
                    t.set(i, j, k, v);
                }
                t
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.nonzeros().iter().fold(0.0, |m, e| m.max(e.3.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_and_dense_agree() {
        let entries = vec![((0, 1, 2), 2.0), ((1, 0, 2), -2.0), ((2, 0, 1), 1e-14)];
        let dense = StructureConstants::from_entries(3, entries.clone());
        let sparse = StructureConstants::from_entries(20, entries);
        assert!(dense.is_dense());
        assert!(!sparse.is_dense());
        for (i, j, k) in [(0, 1, 2), (1, 0, 2), (2, 0, 1), (2, 2, 2)] {
            assert_eq!(dense.get(i, j, k), sparse.get(i, j, k));
        }
        assert_eq!(dense.get(2, 0, 1), 0.0);
        assert_eq!(sparse.nonzeros().len(), 2);
    }

    #[test]
    fn identity_transform_is_noop() {
        let t = Tensor3::from_fn(3, |i, j, k| (i + 2 * j + 3 * k) as f64);
        let id = DMatrix::identity(3, 3);
        let u = t.transform(&id, &id, &id);
        assert_eq!(t, u);
    }
}
