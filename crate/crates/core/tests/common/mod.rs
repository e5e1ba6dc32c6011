#![allow(dead_code)]

use std::path::PathBuf;

use liecurv::binorm::{binormalize, BiInvariantMetric, OrthonormalModel};
use liecurv::homogeneous::{build_spec, HomogeneousFile, HomogeneousSpec, SubalgebraEmbedding};
use liecurv::lie_core::{builtin, default_scale, LieAlgebra};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_ALGEBRAS: [&str; 4] = ["su2", "su3", "so4", "so5"];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn algebra(name: &str) -> LieAlgebra {
    builtin(name).unwrap()
}

pub fn model(name: &str) -> OrthonormalModel {
    let a = algebra(name);
    binormalize(
        &a,
        &BiInvariantMetric::killing_scaled(&a, default_scale(name)).unwrap(),
    )
    .unwrap()
}

/// `G/{e}` with one block per coordinate vector of the built-in basis.
pub fn trivial_h_spec(name: &str) -> HomogeneousSpec {
    let a = algebra(name);
    let n = a.dim();
    let blocks = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            vec![v]
        })
        .collect();
    let emb = SubalgebraEmbedding {
        parent: &a,
        h_basis: vec![],
        blocks,
    };
    let metric = BiInvariantMetric::killing_scaled(&a, default_scale(name)).unwrap();
    build_spec(&emb, &metric).unwrap()
}

pub fn s2_spec() -> HomogeneousSpec {
    HomogeneousFile::load(data("s2.json")).unwrap()
}

/// The specs the gap identity and block sums are checked on.
pub fn identity_specs() -> Vec<(String, HomogeneousSpec)> {
    let mut v: Vec<_> = ORACLE_ALGEBRAS
        .iter()
        .map(|n| (n.to_string(), trivial_h_spec(n)))
        .collect();
    v.push(("s2".into(), s2_spec()));
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Orthogonal factor of a QR decomposition, signs fixed by `diag(R) > 0`.
pub fn orthogonal_from(entries: &[f64], n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_column_slice(n, n, &entries[..n * n]);
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    q
}
