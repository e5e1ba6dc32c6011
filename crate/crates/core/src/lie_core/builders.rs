use nalgebra::DMatrix;

use super::{from_matrix_basis, LieAlgebra, MatrixBasis};
use crate::error::{input, Result};

const CLOSURE_TOL: f64 = 1e-10;

/// su(2) in the Pauli model `E_k = -√−1 σ_k`: `[E_1, E_2] = 2 E_3` and cyclic.
pub fn su2_pauli() -> LieAlgebra {
    LieAlgebra::from_upper(
        "su2",
        3,
        [((0, 1, 2), 2.0), ((1, 2, 0), 2.0), ((2, 0, 1), 2.0)],
    )
    .expect("static su(2) data is valid")
}

/// su(n) on the generalized Gell-Mann matrices times `-√−1`.
///
/// Order: for each pair `j < k` (lexicographic) the symmetric then the
/// antisymmetric generator, followed by the `n - 1` diagonal generators.
/// For `n = 2` this is the Pauli model of [`su2_pauli`].
pub fn build_su(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(input(format!("su(n) needs n >= 2, got {n}")));
    }
    let zero = || DMatrix::<f64>::zeros(n, n);
    let mut re = Vec::with_capacity(n * n - 1);
    let mut im = Vec::with_capacity(n * n - 1);
    // -√−1 (R + √−1 I) = I - √−1 R
    let mut push = |r: DMatrix<f64>, i: DMatrix<f64>| {
        re.push(i);
        im.push(-r);
    };
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = zero();
            sym[(j, k)] = 1.0;
            sym[(k, j)] = 1.0;
            push(sym, zero());
            let mut anti = zero();
            anti[(j, k)] = -1.0;
            anti[(k, j)] = 1.0;
            push(zero(), anti);
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = zero();
        for m in 0..l {
            d[(m, m)] = norm;
        }
        d[(l, l)] = -(l as f64) * norm;
        push(d, zero());
    }
    let basis = MatrixBasis::new(re, im, 1e-14)?;
    from_matrix_basis(format!("su{n}"), &basis, CLOSURE_TOL)
}

/// so(n) on `E_ij - E_ji`, `i < j`, lexicographic.
pub fn build_so(n: usize) -> Result<LieAlgebra> {
    if n < 3 {
        return Err(input(format!("so(n) needs n >= 3, got {n}")));
    }
    let mut mats = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = DMatrix::zeros(n, n);
            m[(i, j)] = 1.0;
            m[(j, i)] = -1.0;
            mats.push(m);
        }
    }
    let basis = MatrixBasis::real(mats, 0.0)?;
    from_matrix_basis(format!("so{n}"), &basis, CLOSURE_TOL)
}

/// The abelian algebra of dimension `n` (`u1` for `n = 1`).
pub fn abelian(n: usize) -> LieAlgebra {
    let name = if n == 1 {
        "u1".to_string()
    } else {
        format!("abelian{n}")
    };
    LieAlgebra::new(name, n.max(1), std::iter::empty()).expect("empty constants are valid")
}

/// Resolves a built-in name: `su2` (Pauli model), `suN`, `soN`, `u1`,
/// `abelianN`, or `+`-joined direct sums such as `su2+u1`.
pub fn builtin(name: &str) -> Result<LieAlgebra> {
    let name = name.trim();
    if name.contains('+') {
        let mut parts = name.split('+').map(builtin);
        let first = parts.next().expect("split yields at least one part")?;
        return parts.try_fold(first, |acc, next| Ok(super::direct_sum(&acc, &next?)));
    }
    let num = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|r| r.parse::<usize>().ok())
    };
    if name == "su2" {
        Ok(su2_pauli())
    } else if name == "u1" {
        Ok(abelian(1))
    } else if let Some(n) = num("su") {
        build_su(n)
    } else if let Some(n) = num("so") {
        build_so(n)
    } else if let Some(n) = num("abelian").filter(|&n| n > 0) {
        Ok(abelian(n))
    } else {
        Err(crate::error::Error::UnknownAlgebra(name.to_string()))
    }
}

/// Default `s` in `g₀ = s·B`: `1/8` for the su(2) Pauli model, where the
/// Pauli basis is then orthonormal, and `1` otherwise.
pub fn default_scale(name: &str) -> f64 {
    if name.trim() == "su2" {
        0.125
    } else {
        1.0
    }
}
