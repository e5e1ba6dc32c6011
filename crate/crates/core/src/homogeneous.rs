//! Homogeneous spaces `G/H` with a `g₀`-orthogonal decomposition
//! `𝔤 = 𝔥 ⊕ 𝔪₁ ⊕ … ⊕ 𝔪_s` and diagonal metrics `λ_i` on the blocks.
//!
//! Everything downstream consumes only the block data `(d_i, b_i, c_i, A^k_ij)`:
//! - `d_i = dim 𝔪_i`
//! - `B = b_i ⟨·,·⟩₀` on `𝔪_i` (`B` the negative Killing form)
//! - `-Σ_a ad(Z_a)² = c_i Id` on `𝔪_i` for a `g₀`-orthonormal basis `Z_a` of `𝔥`
//! - `A^k_ij = Σ ⟨[E_α, E_β], E_γ⟩₀²` over orthonormal `E_α ∈ 𝔪_i`, `E_β ∈ 𝔪_j`, `E_γ ∈ 𝔪_k`

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::binorm::{BiInvariantMetric, DiagonalMetric, OrthonormalModel};
use crate::curvature::{CurvatureResult, Method};
use crate::error::{input, Error, Result};
use crate::lie_core::{self, LieAlgebra};
use crate::tensor::Tensor3;
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromAlgebra,
    RawFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneousSpec {
    pub name: String,
    pub d: Vec<usize>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(skip)]
    pub a: Tensor3,
    pub provenance: Provenance,
}

impl HomogeneousSpec {
    /// Validates user-supplied block data. The identity `Σ_{j,k} A[i][j][k] = b_i d_i − 2 c_i d_i`
    /// is reported by [`block_sum_defect`] but not enforced.
    pub fn raw(
        name: impl Into<String>,
        d: Vec<usize>,
        b: Vec<f64>,
        c: Vec<f64>,
        a: Tensor3,
    ) -> Result<Self> {
        let s = d.len();
        if s == 0 {
            return Err(input("spec needs at least one block"));
        }
        if b.len() != s || c.len() != s || a.dim() != s {
            return Err(input(format!(
                "block counts disagree: d {}, b {}, c {}, A {}",
                s,
                b.len(),
                c.len(),
                a.dim()
            )));
        }
        if d.contains(&0) {
            return Err(input("block dimensions must be at least 1"));
        }
        if let Some(v) = c.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(input(format!(
                "Casimir constants must be nonnegative, got {v}"
            )));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(input("Killing constants must be finite"));
        }
        if let Some((i, j, k, v)) = a.nonzeros().find(|e| !(e.3.is_finite() && e.3 >= 0.0)) {
            return Err(input(format!("A[{i}][{j}][{k}] = {v} must be nonnegative")));
        }
        Ok(Self {
            name: name.into(),
            d,
            b,
            c,
            a,
            provenance: Provenance::RawFile,
        })
    }

    pub fn blocks(&self) -> usize {
        self.d.len()
    }

    /// Blocks whose Killing constant vanishes, i.e. blocks in the center.
    pub fn central_blocks(&self) -> Vec<usize> {
        let scale = self.b.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        (0..self.blocks())
            .filter(|&i| self.b[i].abs() <= tolerance::DEFECT * scale)
            .collect()
    }

    /// `max |A[i][j][k] − A[σ(i,j,k)]|` over transpositions.
    pub fn a_symmetry_defect(&self) -> f64 {
        let s = self.blocks();
        let a = &self.a;
        let mut worst: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let v = a.get(i, j, k);
                    worst = worst
                        .max((v - a.get(j, i, k)).abs())
                        .max((v - a.get(i, k, j)).abs())
                        .max((v - a.get(k, j, i)).abs());
                }
            }
        }
        worst
    }

    fn check_lambda(&self, lambda: &DiagonalMetric) -> Result<()> {
        if lambda.len() != self.blocks() {
            return Err(Error::DimensionMismatch {
                expected: self.blocks(),
                found: lambda.len(),
            });
        }
        Ok(())
    }

    /// `R = ½ Σ b_i d_i/λ_i − ¼ Σ A^k_ij λ_k/(λ_i λ_j)`
    pub fn scalar_curvature(&self, lambda: &DiagonalMetric) -> Result<f64> {
        self.check_lambda(lambda)?;
        let l = lambda.as_slice();
        let first: f64 = (0..self.blocks())
            .map(|i| self.b[i] * self.d[i] as f64 / l[i])
            .sum();
        let mut second = 0.0;
        for (i, j, k, v) in self.a.nonzeros() {
            second += v * l[k] / (l[i] * l[j]);
        }
        Ok(0.5 * first - 0.25 * second)
    }

    /// `∂R/∂λ_m`
    pub fn gradient(&self, lambda: &DiagonalMetric) -> Result<Vec<f64>> {
        self.check_lambda(lambda)?;
        let l = lambda.as_slice();
        let mut g: Vec<f64> = (0..self.blocks())
            .map(|i| -0.5 * self.b[i] * self.d[i] as f64 / (l[i] * l[i]))
            .collect();
        for (i, j, k, v) in self.a.nonzeros() {
            let w = 0.25 * v;
            let q = l[k] / (l[i] * l[j]);
            g[i] += w * q / l[i];
            g[j] += w * q / l[j];
            g[k] -= w / (l[i] * l[j]);
        }
        Ok(g)
    }

    /// Scalar curvature of `g₀` itself (`λ ≡ 1`).
    pub fn reference_curvature(&self) -> f64 {
        self.scalar_curvature(&DiagonalMetric::ones(self.blocks()))
            .expect("ones has the right length")
    }
}

/// Per-block residual `|Σ_{j,k} A[i][j][k] − (b_i d_i − 2 c_i d_i)|`.
pub fn block_sum_defect(spec: &HomogeneousSpec) -> Vec<f64> {
    let s = spec.blocks();
    (0..s)
        .map(|i| {
            let mut sum = 0.0;
            for j in 0..s {
                for k in 0..s {
                    sum += spec.a.get(i, j, k);
                }
            }
            let d = spec.d[i] as f64;
            (sum - (spec.b[i] * d - 2.0 * spec.c[i] * d)).abs()
        })
        .collect()
}

pub fn scalar_curvature_homogeneous(
    spec: &HomogeneousSpec,
    lambda: &DiagonalMetric,
) -> Result<CurvatureResult> {
    Ok(CurvatureResult {
        r: spec.scalar_curvature(lambda)?,
        method: Method::Homogeneous,
        lambda: lambda.as_slice().to_vec(),
        algebra: spec.name.clone(),
    })
}

/// The group case: one block per frame vector, `c ≡ 0`, `A = C²`.
pub fn group_as_homogeneous(model: &OrthonormalModel) -> HomogeneousSpec {
    let n = model.dim();
    let a = Tensor3::from_fn(n, |i, j, k| model.c(i, j, k).powi(2));
    HomogeneousSpec {
        name: model.name().to_string(),
        d: vec![1; n],
        b: model.killing_diagonal(),
        c: vec![0.0; n],
        a,
        provenance: Provenance::FromAlgebra,
    }
}

/// `𝔥` and the blocks `𝔪_i`, each given by spanning coefficient vectors.
#[derive(Debug, Clone)]
pub struct SubalgebraEmbedding<'a> {
    pub parent: &'a LieAlgebra,
    pub h_basis: Vec<Vec<f64>>,
    pub blocks: Vec<Vec<Vec<f64>>>,
}

/// Cholesky-orthonormalizes the columns of `v` for `gram`.
fn orthonormalize(v: &DMatrix<f64>, gram: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    if v.ncols() == 0 {
        return Ok(v.clone());
    }
    let local = v.transpose() * gram * v;
    let chol = local
        .cholesky()
        .ok_or_else(|| input(format!("{what} vectors are linearly dependent")))?;
    let lt = chol.l().transpose();
    let inv = lt
        .solve_upper_triangular(&DMatrix::identity(v.ncols(), v.ncols()))
        .ok_or_else(|| input(format!("{what} vectors are linearly dependent")))?;
    Ok(v * inv)
}

fn columns(n: usize, vecs: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    if let Some(v) = vecs.iter().find(|v| v.len() != n) {
        return Err(input(format!(
            "{what} vector has length {}, expected {n}",
            v.len()
        )));
    }
    Ok(DMatrix::from_fn(n, vecs.len(), |r, c| vecs[c][r]))
}

/// `(mean of diagonal, worst deviation from mean·Id)` of a square matrix.
fn scalar_part(m: &DMatrix<f64>) -> (f64, f64) {
    let d = m.nrows();
    let mean = m.trace() / d as f64;
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { mean } else { 0.0 };
            dev = dev.max((m[(i, j)] - target).abs());
        }
    }
    (mean, dev)
}

fn is_scalar(mean: f64, dev: f64, scale: f64) -> bool {
    let reference = if mean.abs() > tolerance::DEFECT * scale {
        mean.abs()
    } else {
        scale
    };
    dev <= tolerance::SCALAR_BLOCK * reference
}

/// Builds `(d, b, c, A)` from an embedding and a bi-invariant `g₀`.
///
/// Ad-irreducibility of the blocks is not checked; the Casimir operator and
/// the Killing form must both be scalar on each block.
pub fn build_spec(
    emb: &SubalgebraEmbedding<'_>,
    metric: &BiInvariantMetric,
) -> Result<HomogeneousSpec> {
    let alg = emb.parent;
    let n = alg.dim();
    if metric.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: metric.dim(),
        });
    }
    if emb.blocks.is_empty() {
        return Err(input("at least one block is required"));
    }
    let gram = metric.gram();
    let h = orthonormalize(&columns(n, &emb.h_basis, "h_basis")?, gram, "h_basis")?;
    let mut blocks = Vec::with_capacity(emb.blocks.len());
    for (i, b) in emb.blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(input(format!("block {i} is empty")));
        }
        blocks.push(orthonormalize(&columns(n, b, "block")?, gram, "block")?);
    }
    let total = h.ncols() + blocks.iter().map(|b| b.ncols()).sum::<usize>();
    if total != n {
        return Err(input(format!(
            "h and blocks span {total} dimensions, algebra has {n}"
        )));
    }

    let mut frame = DMatrix::zeros(n, n);
    frame.view_mut((0, 0), (n, h.ncols())).copy_from(&h);
    let mut ranges = Vec::with_capacity(blocks.len());
    let mut col = h.ncols();
    for b in &blocks {
        frame.view_mut((0, col), (n, b.ncols())).copy_from(b);
        ranges.push(col..col + b.ncols());
        col += b.ncols();
    }
    let ortho = (frame.transpose() * gram * &frame - DMatrix::identity(n, n)).amax();
    if ortho > tolerance::DEFECT {
        return Err(input(format!(
            "h and blocks are not mutually g0-orthogonal (defect {ortho:e})"
        )));
    }

    // constants in the full orthonormal frame; output slot via Fᵀ G
    let coord = (frame.transpose() * gram).transpose();
    let cf = alg.constants().to_dense().transform(&frame, &frame, &coord);
    let scale = cf.max_abs().max(1.0);
    let tol = tolerance::DEFECT * scale;
    let hdim = h.ncols();
    let block_of = |idx: usize| ranges.iter().position(|r| r.contains(&idx));

    let mut closure: f64 = 0.0;
    for a in 0..hdim {
        for b in 0..hdim {
            for g in hdim..n {
                closure = closure.max(cf.get(a, b, g).abs());
            }
        }
    }
    if closure > tol {
        return Err(Error::NotSubalgebra { residual: closure });
    }
    for a in 0..hdim {
        for x in hdim..n {
            for g in hdim..n {
                if block_of(x) != block_of(g) && cf.get(a, x, g).abs() > tol {
                    return Err(input(format!(
                        "block {} is not ad(h)-invariant",
                        block_of(x).expect("x lies in a block")
                    )));
                }
            }
        }
    }

    let s = blocks.len();
    let mut a_t = Tensor3::zeros(s);
    for al in hdim..n {
        for be in hdim..n {
            for ga in hdim..n {
                let v = cf.get(al, be, ga);
                if v != 0.0 {
                    let (i, j, k) = (
                        block_of(al).unwrap(),
                        block_of(be).unwrap(),
                        block_of(ga).unwrap(),
                    );
                    a_t.add(i, j, k, v * v);
                }
            }
        }
    }

    // B(E_α, E_β) = -Σ cf[α][μ][ν] cf[β][ν][μ]
    let mut b_frame = DMatrix::zeros(n, n);
    for (al, mu, nu, v) in cf.nonzeros() {
        for be in 0..n {
            b_frame[(al, be)] -= v * cf.get(be, nu, mu);
        }
    }

    let mut b = Vec::with_capacity(s);
    let mut c = Vec::with_capacity(s);
    for (i, r) in ranges.iter().enumerate() {
        let d = r.len();
        let kb = b_frame.view((r.start, r.start), (d, d)).into_owned();
        let (mean, dev) = scalar_part(&kb);
        if !is_scalar(mean, dev, scale * scale) {
            return Err(Error::BlockNotIrreducible {
                block: i,
                reason: format!("Killing form not a multiple of g0 (spread {dev:e})"),
            });
        }
        b.push(mean);

        // -Σ_a ad(Z_a)² restricted to the block; (ad Z_a)[γ][α] = cf[a][α][γ]
        let mut cas = DMatrix::zeros(d, d);
        for a in 0..hdim {
            let ad = DMatrix::from_fn(n, n, |g, x| cf.get(a, x, g));
            let sq = &ad * &ad;
            cas -= sq.view((r.start, r.start), (d, d));
        }
        let (mean, dev) = scalar_part(&cas);
        if !is_scalar(mean, dev, scale * scale) {
            return Err(Error::BlockNotIrreducible {
                block: i,
                reason: format!("Casimir operator not scalar (spread {dev:e})"),
            });
        }
        c.push(mean.max(0.0));
    }

    Ok(HomogeneousSpec {
        name: alg.name().to_string(),
        d: ranges.iter().map(|r| r.len()).collect(),
        b,
        c,
        a: a_t,
        provenance: Provenance::FromAlgebra,
    })
}

/// On-disk homogeneous spec, raw block data or derived from an algebra.
///
/// Raw: `{"s": 1, "d": [2], "b": [8], "c": [4], "A": [[i, j, k, value], …]}`.
/// Derived: `{"algebra": "su2", "scale": 0.125, "h_basis": [[0,0,1]], "blocks": [[[1,0,0],[0,1,0]]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomogeneousFile {
    Raw {
        #[serde(default)]
        name: Option<String>,
        s: usize,
        d: Vec<usize>,
        b: Vec<f64>,
        c: Vec<f64>,
        #[serde(rename = "A")]
        a: Vec<(usize, usize, usize, f64)>,
    },
    Derived {
        algebra: String,
        #[serde(default)]
        scale: Option<f64>,
        #[serde(default)]
        h_basis: Vec<Vec<f64>>,
        blocks: Vec<Vec<Vec<f64>>>,
    },
}

impl HomogeneousFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<HomogeneousSpec> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent();
        Self::parse(&text)?.into_spec(base)
    }

    pub fn into_spec(self, base: Option<&Path>) -> Result<HomogeneousSpec> {
        match self {
            HomogeneousFile::Raw {
                name,
                s,
                d,
                b,
                c,
                a,
            } => {
                if d.len() != s {
                    return Err(input(format!("s = {s} but d lists {} blocks", d.len())));
                }
                let mut t = Tensor3::zeros(s);
                let mut seen = std::collections::BTreeSet::new();
                for (i, j, k, v) in a {
                    if i >= s || j >= s || k >= s {
                        return Err(input(format!("A index ({i}, {j}, {k}) out of range")));
                    }
                    if !seen.insert((i, j, k)) {
                        return Err(input(format!("duplicate A entry ({i}, {j}, {k})")));
                    }
                    t.set(i, j, k, v);
                }
                HomogeneousSpec::raw(name.unwrap_or_else(|| "raw".into()), d, b, c, t)
            }
            HomogeneousFile::Derived {
                algebra,
                scale,
                h_basis,
                blocks,
            } => {
                let alg = lie_core::resolve(&algebra, base)?;
                let scale = scale.unwrap_or_else(|| lie_core::default_scale(&algebra));
                let metric = BiInvariantMetric::reductive(&alg, scale)?;
                let emb = SubalgebraEmbedding {
                    parent: &alg,
                    h_basis,
                    blocks,
                };
                build_spec(&emb, &metric)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binorm::binormalize;
    use crate::lie_core::{abelian, su2_pauli};

    fn e(i: usize) -> Vec<f64> {
        let mut v = vec![0.0; 3];
        v[i] = 1.0;
        v
    }

    fn su2_metric() -> (LieAlgebra, BiInvariantMetric) {
        let a = su2_pauli();
        let m = BiInvariantMetric::killing_scaled(&a, 0.125).unwrap();
        (a, m)
    }

    pub(crate) fn s2_spec() -> HomogeneousSpec {
        let (a, m) = su2_metric();
        let emb = SubalgebraEmbedding {
            parent: &a,
            h_basis: vec![e(2)],
            blocks: vec![vec![e(0), e(1)]],
        };
        build_spec(&emb, &m).unwrap()
    }

    #[test]
    fn su2_with_trivial_h() {
        let (a, m) = su2_metric();
        let emb = SubalgebraEmbedding {
            parent: &a,
            h_basis: vec![],
            blocks: vec![vec![e(0)], vec![e(1)], vec![e(2)]],
        };
        let spec = build_spec(&emb, &m).unwrap();
        assert_eq!(spec.d, vec![1, 1, 1]);
        assert_eq!(spec.c, vec![0.0; 3]);
        for bi in &spec.b {
            assert!((bi - 8.0).abs() < 1e-12);
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let distinct = i != j && j != k && i != k;
                    let expect = if distinct { 4.0 } else { 0.0 };
                    assert!((spec.a.get(i, j, k) - expect).abs() < 1e-12);
                }
            }
        }
        assert!(block_sum_defect(&spec).iter().all(|&x| x < 1e-10));

        // the group shortcut gives the same data
        let g = group_as_homogeneous(&binormalize(&a, &m).unwrap());
        assert_eq!(g.b, vec![8.0; 3]);
        assert_eq!(g.a, spec.a.clone());
    }

    #[test]
    fn two_sphere() {
        let spec = s2_spec();
        assert_eq!(spec.d, vec![2]);
        assert!((spec.b[0] - 8.0).abs() < 1e-12);
        assert!((spec.c[0] - 4.0).abs() < 1e-12);
        assert_eq!(spec.a.get(0, 0, 0), 0.0);
        assert!(block_sum_defect(&spec)[0] < 1e-10);
        assert!((spec.reference_curvature() - 8.0).abs() < 1e-12);
        for t in [0.5, 2.0, 3.0] {
            let r = spec
                .scalar_curvature(&DiagonalMetric::new(vec![t]).unwrap())
                .unwrap();
            assert!((r - 8.0 / t).abs() < 1e-12);
        }
    }

    #[test]
    fn mis_set_casimir_shows_in_defect() {
        let s2 = s2_spec();
        let raw = HomogeneousSpec::raw(
            "s2-bad",
            s2.d.clone(),
            s2.b.clone(),
            vec![0.0],
            s2.a.clone(),
        )
        .unwrap();
        assert!((block_sum_defect(&raw)[0] - 16.0).abs() < 1e-10);
    }

    #[test]
    fn abelian_blocks_are_central() {
        let a = abelian(2);
        let m = BiInvariantMetric::from_gram(&a, DMatrix::identity(2, 2)).unwrap();
        let emb = SubalgebraEmbedding {
            parent: &a,
            h_basis: vec![],
            blocks: vec![vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]],
        };
        let spec = build_spec(&emb, &m).unwrap();
        assert_eq!(spec.b, vec![0.0, 0.0]);
        assert_eq!(spec.a.max_abs(), 0.0);
        assert_eq!(spec.central_blocks(), vec![0, 1]);
    }

    #[test]
    fn reducible_block_rejected() {
        // h = span E3 with a single block would be fine; two blocks E1 | E2 are not ad(E3)-invariant
        let (a, m) = su2_metric();
        let emb = SubalgebraEmbedding {
            parent: &a,
            h_basis: vec![e(2)],
            blocks: vec![vec![e(0)], vec![e(1)]],
        };
        assert!(build_spec(&emb, &m).is_err());
    }

    #[test]
    fn non_subalgebra_rejected() {
        let (a, m) = su2_metric();
        let emb = SubalgebraEmbedding {
            parent: &a,
            h_basis: vec![e(0), e(1)],
            blocks: vec![vec![e(2)]],
        };
        assert!(matches!(
            build_spec(&emb, &m),
            Err(Error::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn incomplete_decomposition_rejected() {
        let (a, m) = su2_metric();
        let emb = SubalgebraEmbedding {
            parent: &a,
            h_basis: vec![],
            blocks: vec![vec![e(0)], vec![e(1)]],
        };
        assert!(build_spec(&emb, &m).is_err());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let spec = s2_spec();
        let l = DiagonalMetric::new(vec![1.7]).unwrap();
        let g = spec.gradient(&l).unwrap();
        let h = 1e-5;
        let fd = (spec
            .scalar_curvature(&DiagonalMetric::new(vec![1.7 + h]).unwrap())
            .unwrap()
            - spec
                .scalar_curvature(&DiagonalMetric::new(vec![1.7 - h]).unwrap())
                .unwrap())
            / (2.0 * h);
        assert!((g[0] - fd).abs() < 1e-6);
    }

    #[test]
    fn parses_raw_and_derived_files() {
        let raw = r#"{"s": 1, "d": [2], "b": [8], "c": [4], "A": []}"#;
        let spec = HomogeneousFile::parse(raw)
            .unwrap()
            .into_spec(None)
            .unwrap();
        assert_eq!(spec.provenance, Provenance::RawFile);
        assert_eq!(spec.reference_curvature(), 8.0);

        let derived = r#"{"algebra": "su2", "h_basis": [[0,0,1]], "blocks": [[[1,0,0],[0,1,0]]]}"#;
        let spec = HomogeneousFile::parse(derived)
            .unwrap()
            .into_spec(None)
            .unwrap();
        assert_eq!(spec.provenance, Provenance::FromAlgebra);
        assert!((spec.c[0] - 4.0).abs() < 1e-12);

        let dup = r#"{"s": 1, "d": [2], "b": [8], "c": [4], "A": [[0,0,0,1.0],[0,0,0,1.0]]}"#;
        assert!(HomogeneousFile::parse(dup)
            .unwrap()
            .into_spec(None)
            .is_err());
    }
}
