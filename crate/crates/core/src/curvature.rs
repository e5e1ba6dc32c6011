//! Scalar curvature of diagonal left-invariant metrics on a Lie group.
//!
//! Two independent routes: the closed contraction
//! `R = ¼ Σ (C^k_ij)² [2/λ_i − λ_k/(λ_i λ_j)]` over a bi-invariant
//! orthonormal frame, and a brute-force Levi-Civita computation in the
//! `g`-orthonormal frame `F_i = E_i/√λ_i` (Koszul formula, constant
//! coefficients, full Riemann tensor).

use serde::Serialize;

use crate::binorm::{DiagonalMetric, OrthonormalModel};
use crate::error::{Error, Result};
use crate::tensor::Tensor3;
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Koszul,
    Homogeneous,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureResult {
    pub r: f64,
    pub method: Method,
    pub lambda: Vec<f64>,
    pub algebra: String,
}

fn check_inputs(model: &OrthonormalModel, lambda: &DiagonalMetric) -> Result<()> {
    if lambda.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: lambda.len(),
        });
    }
    let defect = model.antisymmetry_defect();
    if defect > tolerance::DEFECT * model.tensor().max_abs().max(1.0) {
        return Err(Error::NotOrthonormal { defect });
    }
    Ok(())
}

/// Closed-form scalar curvature of the diagonal metric `λ`.
pub fn scalar_curvature_closed(
    model: &OrthonormalModel,
    lambda: &DiagonalMetric,
) -> Result<CurvatureResult> {
    check_inputs(model, lambda)?;
    let l = lambda.as_slice();
    let mut r = 0.0;
    for (i, j, k, c) in model.tensor().nonzeros() {
        r += c * c * (2.0 / l[i] - l[k] / (l[i] * l[j]));
    }
    Ok(CurvatureResult {
        r: 0.25 * r,
        method: Method::ClosedForm,
        lambda: l.to_vec(),
        algebra: model.name().to_string(),
    })
}

/// `∂R/∂λ_m` of the closed form.
pub fn scalar_gradient(model: &OrthonormalModel, lambda: &DiagonalMetric) -> Result<Vec<f64>> {
    check_inputs(model, lambda)?;
    let l = lambda.as_slice();
    let mut g = vec![0.0; l.len()];
    for (i, j, k, c) in model.tensor().nonzeros() {
        let w = 0.25 * c * c;
        let q = l[k] / (l[i] * l[j]);
        g[i] += w * (-2.0 / (l[i] * l[i]) + q / l[i]);
        g[j] += w * (q / l[j]);
        g[k] -= w / (l[i] * l[j]);
    }
    Ok(g)
}

/// Connection and curvature of a diagonal left-invariant metric in the
/// `g`-orthonormal frame `F_i = E_i/√λ_i`.
#[derive(Debug, Clone)]
pub struct FrameConnection {
    n: usize,
    /// `c[i][j][k] = ⟨[F_i, F_j], F_k⟩_g`
    pub frame_brackets: Tensor3,
    /// `Γ[i][j][k] = ⟨∇_{F_i} F_j, F_k⟩_g`
    pub gamma: Tensor3,
    riem: Vec<f64>,
}

impl FrameConnection {
    pub fn new(model: &OrthonormalModel, lambda: &DiagonalMetric) -> Result<Self> {
        check_inputs(model, lambda)?;
        let n = model.dim();
        let l = lambda.as_slice();
        let cf = Tensor3::from_fn(n, |i, j, k| {
            model.c(i, j, k) * (l[k] / (l[i] * l[j])).sqrt()
        });
        // 2⟨∇_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩
        let gamma = Tensor3::from_fn(n, |i, j, k| {
            0.5 * (cf.get(i, j, k) - cf.get(j, k, i) + cf.get(k, i, j))
        });

        // ⟨R(F_i,F_j)F_k, F_l⟩ with R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]
        let mut riem = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l_ in 0..n {
                        let mut acc = 0.0;
                        for m in 0..n {
                            acc += gamma.get(j, k, m) * gamma.get(i, m, l_)
                                - gamma.get(i, k, m) * gamma.get(j, m, l_)
                                - cf.get(i, j, m) * gamma.get(m, k, l_);
                        }
                        riem[((i * n + j) * n + k) * n + l_] = acc;
                    }
                }
            }
        }
        Ok(Self {
            n,
            frame_brackets: cf,
            gamma,
            riem,
        })
    }

    #[inline]
    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.riem[((i * n + j) * n + k) * n + l]
    }

    /// `Σ_{i≠j} ⟨R(F_i,F_j)F_j, F_i⟩`
    pub fn scalar(&self) -> f64 {
        let mut r = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    r += self.riemann(i, j, j, i);
                }
            }
        }
        r
    }

    /// `max |Γ[i][j][k] + Γ[i][k][j]|`
    pub fn metric_compatibility_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.gamma.get(i, j, k) + self.gamma.get(i, k, j)).abs());
                }
            }
        }
        worst
    }

    /// Worst violation among the antisymmetries in `(i, j)` and `(k, l)`,
    /// pair exchange, and the first Bianchi identity.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.riemann(i, j, k, l);
                        let bianchi = v + self.riemann(j, k, i, l) + self.riemann(k, i, j, l);
                        worst = worst
                            .max((v + self.riemann(j, i, k, l)).abs())
                            .max((v + self.riemann(i, j, l, k)).abs())
                            .max((v - self.riemann(k, l, i, j)).abs())
                            .max(bianchi.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Scalar curvature from the full Riemann tensor of the Levi-Civita connection.
pub fn scalar_curvature_koszul(
    model: &OrthonormalModel,
    lambda: &DiagonalMetric,
) -> Result<CurvatureResult> {
    let conn = FrameConnection::new(model, lambda)?;
    Ok(CurvatureResult {
        r: conn.scalar(),
        method: Method::Koszul,
        lambda: lambda.as_slice().to_vec(),
        algebra: model.name().to_string(),
    })
}
