//! Bi-invariant metrics, orthonormal frames, and diagonalization of
//! left-invariant metrics relative to a bi-invariant reference `g₀`.
//!
//! A left-invariant inner product is bi-invariant exactly when every
//! `ad(x)` is skew-adjoint for it. In a `g₀`-orthonormal frame that makes
//! `C[α][β][γ] = ⟨[E_α, E_β], E_γ⟩₀` antisymmetric in all three slots,
//! which [`antisymmetry_defect`] measures.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::lie_core::{ad_invariance_defect, killing, numerical_rank, LieAlgebra};
use crate::tensor::Tensor3;
use crate::tolerance;

/// An ad-invariant inner product `⟨e_i, e_j⟩₀ = gram[(i, j)]`.
#[derive(Debug, Clone)]
pub struct BiInvariantMetric {
    gram: DMatrix<f64>,
    /// `s` when `gram = s·B`.
    scale: Option<f64>,
}

impl BiInvariantMetric {
    /// `g₀ = s·B` with `B` the negative Killing form.
    pub fn killing_scaled(alg: &LieAlgebra, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(input(format!("metric scale must be positive, got {s}")));
        }
        let gram = killing(alg).b * s;
        check_positive_definite(&gram)?;
        Ok(Self {
            gram,
            scale: Some(s),
        })
    }

    /// An arbitrary Gram matrix, checked for symmetry, positivity and ad-invariance.
    pub fn from_gram(alg: &LieAlgebra, gram: DMatrix<f64>) -> Result<Self> {
        let n = alg.dim();
        if gram.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gram.nrows(),
            });
        }
        let asym = (&gram - gram.transpose()).amax();
        if asym > tolerance::DEFECT * gram.amax().max(1.0) {
            return Err(input(format!(
                "Gram matrix not symmetric (defect {asym:e})"
            )));
        }
        check_positive_definite(&gram)?;
        let metric = Self { gram, scale: None };
        metric.check_ad_invariant(alg)?;
        Ok(metric)
    }

    /// For reductive algebras `𝔷 ⊕ [𝔤, 𝔤]`: `s·B` on the derived algebra plus
    /// the identity on center coordinates (projected along `[𝔤, 𝔤]`).
    /// Reduces to [`Self::killing_scaled`] when the center is trivial.
    pub fn reductive(alg: &LieAlgebra, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(input(format!("metric scale must be positive, got {s}")));
        }
        let n = alg.dim();
        let kd = killing(alg);
        if kd.center_dim == 0 {
            return Self::killing_scaled(alg, s);
        }

        let mut ad_map = DMatrix::zeros(n * n, n);
        let mut brackets = DMatrix::zeros(n, n * n);
        for (i, j, k, v) in alg.constants().nonzeros() {
            ad_map[(k * n + j, i)] = v;
            brackets[(k, i * n + j)] = v;
        }
        let center = null_space(&ad_map);
        let derived = column_space(&brackets);
        if center.ncols() + derived.ncols() != n {
            return Err(Error::NotAMetric);
        }
        let mut frame = DMatrix::zeros(n, n);
        frame
            .view_mut((0, 0), (n, center.ncols()))
            .copy_from(&center);
        frame
            .view_mut((0, center.ncols()), (n, derived.ncols()))
            .copy_from(&derived);
        let inv = frame.try_inverse().ok_or(Error::NotAMetric)?;
        let proj = inv.rows(0, center.ncols()).into_owned();
        let gram = kd.b * s + proj.transpose() * proj;
        let gram = (&gram + gram.transpose()) * 0.5;
        check_positive_definite(&gram)?;
        let metric = Self { gram, scale: None };
        metric.check_ad_invariant(alg)?;
        Ok(metric)
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn scale(&self) -> Option<f64> {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let x = nalgebra::DVector::from_column_slice(x);
        let y = nalgebra::DVector::from_column_slice(y);
        x.dot(&(&self.gram * y))
    }

    pub fn ad_invariance_defect(&self, alg: &LieAlgebra) -> f64 {
        ad_invariance_defect(alg, &self.gram)
    }

    fn check_ad_invariant(&self, alg: &LieAlgebra) -> Result<()> {
        let defect = self.ad_invariance_defect(alg);
        let scale = alg.constants().max_abs().max(1e-300) * self.gram.amax();
        if defect > tolerance::DEFECT * scale {
            return Err(Error::NotBiInvariant { defect });
        }
        Ok(())
    }
}

fn check_positive_definite(gram: &DMatrix<f64>) -> Result<()> {
    let eig = gram.clone().symmetric_eigenvalues();
    let top = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if top == 0.0 || eig.iter().any(|&e| e <= tolerance::RANK * top) {
        return Err(Error::NotAMetric);
    }
    gram.clone().cholesky().map(|_| ()).ok_or(Error::NotAMetric)
}

fn null_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    // eigenvectors of mᵀm with negligible eigenvalue
    let gram = m.transpose() * m;
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let cut = (tolerance::RANK * top.sqrt()).powi(2);
    let cols: Vec<_> = (0..n)
        .filter(|&i| top == 0.0 || eig.eigenvalues[i] <= cut)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let rank = numerical_rank(m);
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let cols: Vec<_> = order[..rank]
        .iter()
        .map(|&i| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Structure constants in a `g₀`-orthonormal frame `E_α = Σ_i T[(i, α)] e_i`.
#[derive(Debug, Clone, Serialize)]
pub struct OrthonormalModel {
    name: String,
    #[serde(skip)]
    frame: DMatrix<f64>,
    c: Tensor3,
}

impl OrthonormalModel {
    /// Wraps a hand-built tensor, taking the frame to be the identity.
    pub fn from_tensor(name: impl Into<String>, c: Tensor3) -> Self {
        let n = c.dim();
        Self {
            name: name.into(),
            frame: DMatrix::identity(n, n),
            c,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// Change of basis `T` from the original basis to the orthonormal one.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.c
    }

    #[inline]
    pub fn c(&self, a: usize, b: usize, g: usize) -> f64 {
        self.c.get(a, b, g)
    }

    /// Same frame with `g₀` replaced by `t·g₀`: constants scale by `1/√t`.
    pub fn rescaled(&self, t: f64) -> Self {
        Self {
            name: self.name.clone(),
            frame: &self.frame / t.sqrt(),
            c: self.c.scaled(1.0 / t.sqrt()),
        }
    }

    /// Rotates by a `g₀`-orthogonal matrix `q` (new `E'_a = Σ_α q[(α, a)] E_α`).
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        Self {
            name: self.name.clone(),
            frame: &self.frame * q,
            c: self.c.transform(q, q, q),
        }
    }

    /// `b_α = B(E_α, E_α) = -Tr(ad(E_α)²)` from the frame constants.
    pub fn killing_diagonal(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|a| {
                let mut acc = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        acc += self.c(a, j, k) * self.c(a, k, j);
                    }
                }
                -acc
            })
            .collect()
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        antisymmetry_defect(self)
    }
}

/// Orthonormalizes `alg` for `metric` via Cholesky `gram = L Lᵀ`, `T = L⁻ᵀ`.
pub fn binormalize(alg: &LieAlgebra, metric: &BiInvariantMetric) -> Result<OrthonormalModel> {
    let n = alg.dim();
    if metric.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: metric.dim(),
        });
    }
    check_positive_definite(metric.gram())?;
    metric.check_ad_invariant(alg)?;
    let chol = metric.gram().clone().cholesky().ok_or(Error::NotAMetric)?;
    let l = chol.l();
    let lt = l.transpose();
    let frame = lt
        .clone()
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or(Error::NotAMetric)?;
    // coordinates of v in the new frame are Lᵀ v, so the output slot uses (Lᵀ)ᵀ = L
    let c = alg.constants().to_dense().transform(&frame, &frame, &l);
    Ok(OrthonormalModel {
        name: alg.name().to_string(),
        frame,
        c,
    })
}

/// Largest violation of total antisymmetry over all transpositions.
pub fn antisymmetry_defect(model: &OrthonormalModel) -> f64 {
    let n = model.dim();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let v = model.c(a, b, g);
                worst = worst
                    .max((v + model.c(b, a, g)).abs())
                    .max((v + model.c(a, g, b)).abs())
                    .max((v + model.c(g, b, a)).abs());
            }
        }
    }
    worst
}

/// Eigenvalues `λ` of `S` relative to `g₀`: the metric `⟨X, Y⟩ = ⟨S X, Y⟩₀`
/// acts by `λ_i` on the i-th frame vector (or block).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiagonalMetric(Vec<f64>);

impl DiagonalMetric {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(input("metric needs at least one eigenvalue"));
        }
        if let Some((i, v)) = lambda
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(input(format!("lambda[{i}] = {v} is not positive")));
        }
        Ok(Self(lambda))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `g ≥ g₀`, i.e. every `λ_i ≥ 1`.
    pub fn dominates_reference(&self) -> bool {
        self.0.iter().all(|&v| v >= 1.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Columns are `g₀`-orthonormal eigenvectors of `S`.
    pub rotation: DMatrix<f64>,
    pub lambda: DiagonalMetric,
    /// The model expressed in the eigenbasis.
    pub model: OrthonormalModel,
    /// `‖Qᵀ S Q − diag(λ)‖_max`
    pub residual: f64,
}

/// Diagonalizes a symmetric positive-definite `S` given in the frame of `model`.
///
/// Eigenvalues come out ascending; ties keep the order of the eigenvectors'
/// dominant basis index. Eigenvector signs are fixed so the dominant
/// component is positive.
pub fn diagonalize_metric(model: &OrthonormalModel, s: &DMatrix<f64>) -> Result<Diagonalization> {
    let n = model.dim();
    if s.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.nrows(),
        });
    }
    let asym = (s - s.transpose()).amax();
    if asym > tolerance::DEFECT * s.amax().max(1.0) {
        return Err(input(format!("S not symmetric (defect {asym:e})")));
    }
    let sym = (s + s.transpose()) * 0.5;

    let is_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || sym[(i, j)] == 0.0));
    let (values, vectors) = if is_diagonal {
        (
            sym.diagonal().iter().copied().collect::<Vec<_>>(),
            DMatrix::identity(n, n),
        )
    } else {
        let eig = SymmetricEigen::new(sym.clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    if let Some(v) = values.iter().find(|v| v.is_nan() || **v <= 0.0) {
        return Err(input(format!(
            "S is not positive definite (eigenvalue {v})"
        )));
    }

    let dominant = |col: usize| {
        let c = vectors.column(col);
        let mut best = 0;
        for i in 1..n {
            if c[i].abs() > c[best].abs() + 1e-12 {
                best = i;
            }
        }
        best
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .total_cmp(&values[b])
            .then(dominant(a).cmp(&dominant(b)))
    });

    let mut rotation = DMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        let mut col = vectors.column(old).into_owned();
        if col[dominant(old)] < 0.0 {
            col = -col;
        }
        rotation.set_column(new, &col);
    }
    let lambda: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let recon = rotation.transpose() * &sym * &rotation;
    let residual =
        (recon - DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambda.clone()))).amax();

    Ok(Diagonalization {
        model: model.rotated(&rotation),
        rotation,
        lambda: DiagonalMetric::new(lambda)?,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::{abelian, build_so, build_su, direct_sum, su2_pauli};

    fn su2_model() -> OrthonormalModel {
        let su2 = su2_pauli();
        binormalize(
            &su2,
            &BiInvariantMetric::killing_scaled(&su2, 0.125).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn pauli_model_is_already_orthonormal() {
        let m = su2_model();
        assert_eq!(m.frame(), &DMatrix::identity(3, 3));
        assert_eq!(m.c(0, 1, 2), 2.0);
        assert_eq!(m.c(1, 0, 2), -2.0);
        assert_eq!(antisymmetry_defect(&m), 0.0);
    }

    #[test]
    fn killing_gram_scales_frame() {
        let su2 = su2_pauli();
        let m = binormalize(&su2, &BiInvariantMetric::killing_scaled(&su2, 1.0).unwrap()).unwrap();
        let expect = 1.0 / 8f64.sqrt();
        assert!((m.frame() - DMatrix::identity(3, 3) * expect).amax() < 1e-15);
        assert!((m.c(0, 1, 2) - 2.0 * expect).abs() < 1e-15);
        assert!((m.c(0, 1, 2) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn abelian_identity_gram() {
        let a = abelian(3);
        let m = binormalize(
            &a,
            &BiInvariantMetric::from_gram(&a, DMatrix::identity(3, 3)).unwrap(),
        )
        .unwrap();
        assert_eq!(m.tensor().max_abs(), 0.0);
        assert_eq!(antisymmetry_defect(&m), 0.0);
    }

    #[test]
    fn so5_killing_normalization_is_antisymmetric() {
        let so5 = build_so(5).unwrap();
        let m = binormalize(&so5, &BiInvariantMetric::killing_scaled(&so5, 1.0).unwrap()).unwrap();
        assert!(antisymmetry_defect(&m) <= 1e-10);
    }

    #[test]
    fn inconsistent_tensor_has_large_defect() {
        let mut t = Tensor3::zeros(3);
        t.set(0, 1, 2, 2.0);
        t.set(1, 0, 2, -2.0);
        t.set(1, 2, 0, 1.0);
        t.set(2, 1, 0, -1.0);
        let m = OrthonormalModel::from_tensor("bad", t);
        assert!(antisymmetry_defect(&m) >= 1.0);
    }

    #[test]
    fn killing_metric_on_abelian_is_not_a_metric() {
        let a = direct_sum(&su2_pauli(), &abelian(1));
        assert!(matches!(
            BiInvariantMetric::killing_scaled(&a, 1.0),
            Err(Error::NotAMetric)
        ));
    }

    #[test]
    fn non_invariant_gram_rejected() {
        let su2 = su2_pauli();
        let gram = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert!(matches!(
            BiInvariantMetric::from_gram(&su2, gram),
            Err(Error::NotBiInvariant { .. })
        ));
    }

    #[test]
    fn reductive_metric_on_u2_like_algebra() {
        let a = direct_sum(&su2_pauli(), &abelian(1));
        let g = BiInvariantMetric::reductive(&a, 0.125).unwrap();
        let m = binormalize(&a, &g).unwrap();
        assert!(antisymmetry_defect(&m) < 1e-12);
        let b = m.killing_diagonal();
        assert!(b[3].abs() < 1e-12);
        assert!((b[0] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn diagonalize_identity_and_diagonal() {
        let m = su2_model();
        let d = diagonalize_metric(&m, &DMatrix::identity(3, 3)).unwrap();
        assert_eq!(d.lambda.as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(d.rotation, DMatrix::identity(3, 3));
        assert_eq!(d.model.tensor(), m.tensor());

        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.3, 0.3, 0.5]));
        let d = diagonalize_metric(&m, &s).unwrap();
        assert_eq!(d.lambda.as_slice(), &[0.3, 0.3, 0.5]);
        assert_eq!(d.rotation, DMatrix::identity(3, 3));

        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 0.3, 0.4]));
        let d = diagonalize_metric(&m, &s).unwrap();
        assert_eq!(d.lambda.as_slice(), &[0.3, 0.4, 0.5]);
        assert!(antisymmetry_defect(&d.model) < 1e-15);
    }

    #[test]
    fn diagonalize_rejects_bad_input() {
        let m = su2_model();
        let mut s = DMatrix::identity(3, 3);
        s[(0, 1)] = 0.5;
        assert!(diagonalize_metric(&m, &s).is_err());
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, 1.0]));
        assert!(diagonalize_metric(&m, &s).is_err());
    }

    #[test]
    fn random_spd_on_su3() {
        use rand::{Rng, SeedableRng};
        let su3 = build_su(3).unwrap();
        let m = binormalize(&su3, &BiInvariantMetric::killing_scaled(&su3, 1.0).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = DMatrix::from_fn(8, 8, |_, _| rng.random_range(-1.0..1.0));
        let s = &a * a.transpose() + DMatrix::identity(8, 8) * 0.5;
        let d = diagonalize_metric(&m, &s).unwrap();
        assert!(d.residual <= 1e-10);
        assert!(antisymmetry_defect(&d.model) <= 1e-10);
        assert!(d.lambda.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_metric_validation() {
        assert!(DiagonalMetric::new(vec![1.0, 0.0]).is_err());
        assert!(DiagonalMetric::new(vec![]).is_err());
        assert!(DiagonalMetric::new(vec![f64::NAN]).is_err());
        assert!(DiagonalMetric::new(vec![1.0, 2.0])
            .unwrap()
            .dominates_reference());
        assert!(!DiagonalMetric::new(vec![0.9, 2.0])
            .unwrap()
            .dominates_reference());
    }
}
