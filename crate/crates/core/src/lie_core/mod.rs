//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! Convention: `[e_i, e_j] = Σ_k C[i][j][k] e_k`, indices 0-based.

mod builders;
mod file;
mod killing;
mod matrix_basis;

use nalgebra::DMatrix;

use crate::error::{input, Error, Result};
use crate::tensor::StructureConstants;

pub use builders::{abelian, build_so, build_su, builtin, default_scale, su2_pauli};
pub use file::{resolve, AlgebraFile};
pub use killing::{ad_invariance_defect, killing, KillingData, Signature};
pub use matrix_basis::{from_matrix_basis, MatrixBasis};

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    constants: StructureConstants,
}

impl LieAlgebra {
    /// Builds an algebra from a complete list of structure constants.
    ///
    /// Antisymmetry `C[i][j][k] = -C[j][i][k]` must hold exactly as given.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        entries: impl IntoIterator<Item = ((usize, usize, usize), f64)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(input("dimension must be positive"));
        }
        let entries: Vec<_> = entries.into_iter().collect();
        for &((i, j, k), _) in &entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(input(format!(
                    "index ({i}, {j}, {k}) out of range for dim {dim}"
                )));
            }
        }
        let constants = StructureConstants::from_entries(dim, entries);
        for (i, j, k, v) in constants.nonzeros() {
            if constants.get(j, i, k) != -v {
                return Err(input(format!(
                    "structure constants not antisymmetric at ({i}, {j}, {k})"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            constants,
        })
    }

    /// Builds an algebra from entries with `i < j`, completing by antisymmetry.
    /// Entries with `i > j` are flipped; repeated keys are rejected.
    pub fn from_upper(
        name: impl Into<String>,
        dim: usize,
        entries: impl IntoIterator<Item = ((usize, usize, usize), f64)>,
    ) -> Result<Self> {
        let mut seen = std::collections::BTreeMap::new();
        for ((i, j, k), v) in entries {
            let (key, v) = match i.cmp(&j) {
                std::cmp::Ordering::Less => ((i, j, k), v),
                std::cmp::Ordering::Greater => ((j, i, k), -v),
                std::cmp::Ordering::Equal => {
                    if v != 0.0 {
                        return Err(input(format!("[e_{i}, e_{i}] must vanish, got entry {v}")));
                    }
                    continue;
                }
            };
            if seen.insert(key, v).is_some() {
                return Err(input(format!("duplicate structure constant key {key:?}")));
            }
        }
        let full = seen
            .into_iter()
            .flat_map(|((i, j, k), v)| [((i, j, k), v), ((j, i, k), -v)]);
        Self::new(name, dim, full)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants.get(i, j, k)
    }

    /// `ad(e_i)` as an n×n matrix acting on coefficient columns:
    /// `ad(e_i)[(k, j)] = C[i][j][k]`.
    pub fn ad_matrices(&self) -> Vec<DMatrix<f64>> {
        let n = self.dim();
        let mut ads = vec![DMatrix::zeros(n, n); n];
        for (i, j, k, v) in self.constants.nonzeros() {
            ads[i][(k, j)] = v;
        }
        ads
    }

    /// `ad(x)` for a coefficient vector `x`.
    pub fn ad(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(x)?;
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, j, k, v) in self.constants.nonzeros() {
            m[(k, j)] += x[i] * v;
        }
        Ok(m)
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = vec![0.0; self.dim()];
        // pairs i < j only, so that [y, x] = -[x, y] and [x, x] = 0 hold exactly
        for (i, j, k, v) in self.constants.nonzeros() {
            if i < j {
                out[k] += (x[i] * y[j] - x[j] * y[i]) * v;
            }
        }
        Ok(out)
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Maximum absolute Jacobi residual over all `(i, j, k, l)`.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let nz = self.constants.nonzeros();
        let mut by_first: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n];
        for &(m, k, l, w) in &nz {
            by_first[m].push((k, l, w));
        }
        // nested[i][j][k][l] = coefficient of e_l in [[e_i, e_j], e_k]
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
        let mut nested = vec![0.0; n * n * n * n];
        for &(i, j, m, v) in &nz {
            for &(k, l, w) in &by_first[m] {
                nested[idx(i, j, k, l)] += v * w;
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = nested[idx(i, j, k, l)]
                            + nested[idx(j, k, i, l)]
                            + nested[idx(k, i, j, l)];
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Direct sum `a ⊕ b`; basis of `a` first, cross brackets exactly zero.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let off = a.dim();
    let entries = a
        .constants
        .nonzeros()
        .into_iter()
        .map(|(i, j, k, v)| ((i, j, k), v))
        .chain(
            b.constants
                .nonzeros()
                .into_iter()
                .map(|(i, j, k, v)| ((i + off, j + off, k + off), v)),
        );
    LieAlgebra {
        name: format!("{}+{}", a.name, b.name),
        constants: StructureConstants::from_entries(off + b.dim(), entries),
    }
}

/// Numerical rank of a matrix: singular values above `RANK × σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let top = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if top == 0.0 {
        return 0;
    }
    sv.iter()
        .filter(|&&s| s > crate::tolerance::RANK * top)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn pauli_brackets() {
        let su2 = su2_pauli();
        assert_eq!(
            su2.bracket(&e(3, 0), &e(3, 1)).unwrap(),
            vec![0.0, 0.0, 2.0]
        );
        assert_eq!(
            su2.bracket(&e(3, 1), &e(3, 2)).unwrap(),
            vec![2.0, 0.0, 0.0]
        );
        assert_eq!(
            su2.bracket(&e(3, 2), &e(3, 0)).unwrap(),
            vec![0.0, 2.0, 0.0]
        );
    }

    #[test]
    fn bracket_self_vanishes() {
        let su3 = build_su(3).unwrap();
        let x: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
        let b = su3.bracket(&x, &x).unwrap();
        assert!(b.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let su2 = su2_pauli();
        assert!(matches!(
            su2.bracket(&[1.0, 0.0], &[0.0, 1.0, 0.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn from_upper_completes_and_rejects_duplicates() {
        let a = LieAlgebra::from_upper(
            "t",
            3,
            [((0, 1, 2), 2.0), ((1, 2, 0), 2.0), ((2, 0, 1), 2.0)],
        )
        .unwrap();
        assert_eq!(a, su2_pauli().with_name("t"));
        let dup = LieAlgebra::from_upper("t", 3, [((0, 1, 2), 2.0), ((1, 0, 2), -2.0)]);
        assert!(matches!(dup, Err(Error::Input(_))));
    }

    #[test]
    fn non_antisymmetric_rejected() {
        let bad = LieAlgebra::new("bad", 2, [((0, 1, 0), 1.0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn jacobi_defect_detects_perturbation() {
        assert!(build_su(3).unwrap().jacobi_defect() < 1e-12);
        assert_eq!(abelian(4).jacobi_defect(), 0.0);
        // In dimension 3 every cyclic triple of constants (a, b, c) is a
        // rescaled so(3), so perturbing one of them keeps Jacobi intact.
        let rescaled = LieAlgebra::from_upper(
            "su2-rescaled",
            3,
            [((0, 1, 2), 2.1), ((1, 2, 0), 2.0), ((2, 0, 1), 2.0)],
        )
        .unwrap();
        assert_eq!(rescaled.jacobi_defect(), 0.0);

        // [e0,e1] = e2, [e1,e2] = e0, [e0,e2] = e0: [[e2,e0],e1] = -e2.
        let broken = LieAlgebra::from_upper(
            "broken",
            3,
            [((0, 1, 2), 1.0), ((1, 2, 0), 1.0), ((0, 2, 0), 1.0)],
        )
        .unwrap();
        assert!((broken.jacobi_defect() - 1.0).abs() < 1e-12);

        let su3 = build_su(3).unwrap();
        let mut entries: Vec<_> = su3
            .constants()
            .nonzeros()
            .into_iter()
            .filter(|&(i, j, _, _)| i < j)
            .map(|(i, j, k, v)| ((i, j, k), v))
            .collect();
        entries[0].1 *= 1.05;
        let perturbed = LieAlgebra::from_upper("su3-bad", 8, entries).unwrap();
        assert!(perturbed.jacobi_defect() > 1e-3);
    }

    #[test]
    fn direct_sum_has_no_cross_terms() {
        let s = direct_sum(&su2_pauli(), &build_su(2).unwrap());
        assert_eq!(s.dim(), 6);
        for (i, j, k, _) in s.constants().nonzeros() {
            let block = |x: usize| x / 3;
            assert!(block(i) == block(j) && block(j) == block(k));
        }
    }
}
