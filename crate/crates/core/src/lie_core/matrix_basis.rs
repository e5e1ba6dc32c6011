use nalgebra::DMatrix;

use super::{numerical_rank, LieAlgebra};
use crate::error::{input, Error, Result};

/// A basis of skew-Hermitian complex matrices, real and imaginary parts
/// stored separately.
#[derive(Debug, Clone)]
pub struct MatrixBasis {
    size: usize,
    re: Vec<DMatrix<f64>>,
    im: Vec<DMatrix<f64>>,
}

impl MatrixBasis {
    /// Validates shapes and skew-Hermiticity (`M + M* = 0` within `tol`).
    pub fn new(re: Vec<DMatrix<f64>>, im: Vec<DMatrix<f64>>, tol: f64) -> Result<Self> {
        if re.is_empty() || re.len() != im.len() {
            return Err(input(
                "matrix basis needs matching, non-empty real and imaginary parts",
            ));
        }
        let size = re[0].nrows();
        for (a, b) in re.iter().zip(&im) {
            if a.shape() != (size, size) || b.shape() != (size, size) {
                return Err(input("basis matrices must all be square of one size"));
            }
            // re antisymmetric, im symmetric
            let defect = (a + a.transpose()).amax().max((b - b.transpose()).amax());
            if defect > tol {
                return Err(input(format!(
                    "basis matrix not skew-Hermitian (defect {defect:e})"
                )));
            }
        }
        Ok(Self { size, re, im })
    }

    pub fn real(mats: Vec<DMatrix<f64>>, tol: f64) -> Result<Self> {
        let im = mats
            .iter()
            .map(|m| DMatrix::zeros(m.nrows(), m.ncols()))
            .collect();
        Self::new(mats, im, tol)
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.size
    }

    fn product(
        &self,
        a: (&DMatrix<f64>, &DMatrix<f64>),
        b: (&DMatrix<f64>, &DMatrix<f64>),
    ) -> (DMatrix<f64>, DMatrix<f64>) {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn commutator(&self, i: usize, j: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        let a = (&self.re[i], &self.im[i]);
        let b = (&self.re[j], &self.im[j]);
        let (ab_re, ab_im) = self.product(a, b);
        let (ba_re, ba_im) = self.product(b, a);
        (ab_re - ba_re, ab_im - ba_im)
    }

    /// Trace pairing `⟨A, B⟩ = -Re Tr(AB)`, positive definite on skew-Hermitian matrices.
    fn pairing(a: (&DMatrix<f64>, &DMatrix<f64>), b: (&DMatrix<f64>, &DMatrix<f64>)) -> f64 {
        // Re Tr(AB) = Σ (a_re[i,k] b_re[k,i] - a_im[i,k] b_im[k,i])
        let re =
            a.0.component_mul(&b.0.transpose()).sum() - a.1.component_mul(&b.1.transpose()).sum();
        -re
    }
}

/// Expands every commutator `[M_i, M_j]` in the basis by solving the Gram
/// system of the trace pairing.
pub fn from_matrix_basis(
    name: impl Into<String>,
    basis: &MatrixBasis,
    tol: f64,
) -> Result<LieAlgebra> {
    let n = basis.dim();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        MatrixBasis::pairing((&basis.re[i], &basis.im[i]), (&basis.re[j], &basis.im[j]))
    });
    if numerical_rank(&gram) < n {
        return Err(Error::DependentBasis);
    }
    let lu = gram.lu();

    let mut entries = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (cr, ci) = basis.commutator(i, j);
            let rhs = nalgebra::DVector::from_fn(n, |k, _| {
                MatrixBasis::pairing((&cr, &ci), (&basis.re[k], &basis.im[k]))
            });
            let coeffs = lu.solve(&rhs).ok_or(Error::DependentBasis)?;
            let mut rr = cr.clone();
            let mut ri = ci.clone();
            for k in 0..n {
                rr -= &basis.re[k] * coeffs[k];
                ri -= &basis.im[k] * coeffs[k];
            }
            let residual = (rr.norm_squared() + ri.norm_squared()).sqrt();
            worst = worst.max(residual);
            for (k, &v) in coeffs.iter().enumerate() {
                entries.push(((i, j, k), v));
                entries.push(((j, i, k), -v));
            }
        }
    }
    if worst > tol {
        return Err(Error::NotSubalgebra { residual: worst });
    }
    LieAlgebra::new(name, n, entries)
}
