use nalgebra::DMatrix;
use serde::Serialize;

use super::{numerical_rank, LieAlgebra};
use crate::tolerance;

/// Inertia of a symmetric form: counts of negative, zero and positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub negatives: usize,
    pub zeros: usize,
    pub positives: usize,
}

#[derive(Debug, Clone)]
pub struct KillingData {
    /// `K[i][j] = Tr(ad(e_i) ad(e_j))`
    pub k: DMatrix<f64>,
    /// `B = -K`
    pub b: DMatrix<f64>,
    pub signature: Signature,
    pub semisimple: bool,
    pub center_dim: usize,
}

impl KillingData {
    /// Negative definite Killing form: compact semi-simple type.
    pub fn is_compact_semisimple(&self) -> bool {
        self.signature.zeros == 0 && self.signature.positives == 0
    }

    /// Killing form has a positive direction, so no compact real form.
    pub fn is_noncompact(&self) -> bool {
        self.signature.positives > 0
    }
}

pub fn killing(alg: &LieAlgebra) -> KillingData {
    let n = alg.dim();
    let nz = alg.constants().nonzeros();
    // by_pair[(a, b)] lists (first index, value) of C[first][a][b]
    let mut by_pair: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n * n];
    for &(i, a, b, v) in &nz {
        by_pair[a * n + b].push((i, v));
    }
    // Tr(ad_i ad_j) = Σ_{l,k} C[i][l][k] C[j][k][l]
    let mut k = DMatrix::zeros(n, n);
    for &(i, l, kk, v) in &nz {
        for &(j, w) in &by_pair[kk * n + l] {
            k[(i, j)] += v * w;
        }
    }
    let k = (&k + k.transpose()) * 0.5;

    let eig = k.clone().symmetric_eigenvalues();
    let top = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cut = tolerance::RANK * top;
    let mut signature = Signature {
        negatives: 0,
        zeros: 0,
        positives: 0,
    };
    for &e in eig.iter() {
        if top == 0.0 || e.abs() <= cut {
            signature.zeros += 1;
        } else if e < 0.0 {
            signature.negatives += 1;
        } else {
            signature.positives += 1;
        }
    }

    let mut ad_map = DMatrix::zeros(n * n, n);
    for &(i, j, kk, v) in &nz {
        ad_map[(kk * n + j, i)] = v;
    }
    let center_dim = n - numerical_rank(&ad_map);

    KillingData {
        b: -&k,
        k,
        semisimple: signature.zeros == 0,
        signature,
        center_dim,
    }
}

/// `max |F([e_x, e_y], e_z) + F(e_y, [e_x, e_z])|` over basis triples.
pub fn ad_invariance_defect(alg: &LieAlgebra, form: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for ad in alg.ad_matrices() {
        // (ad^T F + F ad)[y][z]
        let m = ad.transpose() * form + form * &ad;
        worst = worst.max(m.amax());
    }
    worst
}
