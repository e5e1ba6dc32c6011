use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LieAlgebra;
use crate::error::Result;

/// On-disk algebra description.
///
/// ```json
/// { "name": "su2", "dim": 3, "structure_constants": [[0, 1, 2, 2.0], [1, 2, 0, 2.0], [2, 0, 1, 2.0]] }
/// ```
///
/// Indices are 0-based with `[e_i, e_j] = Σ_k C[i][j][k] e_k`. Only entries
/// with `i < j` need be listed; the rest follow by antisymmetry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<LieAlgebra> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)?.into_algebra()
    }

    pub fn into_algebra(self) -> Result<LieAlgebra> {
        LieAlgebra::from_upper(
            self.name,
            self.dim,
            self.structure_constants
                .into_iter()
                .map(|(i, j, k, v)| ((i, j, k), v)),
        )
    }

    /// Lists the `i < j` half of the constants.
    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        Self {
            name: alg.name().to_string(),
            dim: alg.dim(),
            structure_constants: alg
                .constants()
                .nonzeros()
                .into_iter()
                .filter(|&(i, j, _, _)| i < j)
                .collect(),
        }
    }
}

/// Resolves an algebra source: an existing file (relative paths are taken
/// against `base` when given) or a built-in name.
pub fn resolve(source: &str, base: Option<&Path>) -> Result<LieAlgebra> {
    let path = match base {
        Some(dir) if Path::new(source).is_relative() => dir.join(source),
        _ => Path::new(source).to_path_buf(),
    };
    if path.is_file() {
        return AlgebraFile::load(path);
    }
    if source.ends_with(".json") {
        return Err(crate::error::Error::UnknownAlgebra(
            path.display().to_string(),
        ));
    }
    super::builtin(source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::lie_core::{build_so, su2_pauli};

    #[test]
    fn parses_pauli_model() {
        let text = r#"{"name": "su2", "dim": 3, "structure_constants": [[0,1,2,2.0],[1,2,0,2.0],[2,0,1,2.0]]}"#;
        let alg = AlgebraFile::parse(text).unwrap().into_algebra().unwrap();
        assert_eq!(alg, su2_pauli());
    }

    #[test]
    fn duplicate_keys_rejected() {
        let text = r#"{"name": "x", "dim": 3, "structure_constants": [[0,1,2,2.0],[0,1,2,2.0]]}"#;
        let err = AlgebraFile::parse(text)
            .unwrap()
            .into_algebra()
            .unwrap_err();
        assert!(matches!(err, Error::Input(msg) if msg.contains("duplicate")));
    }

    #[test]
    fn out_of_range_index_rejected() {
        let text = r#"{"name": "x", "dim": 2, "structure_constants": [[0,1,2,1.0]]}"#;
        assert!(AlgebraFile::parse(text).unwrap().into_algebra().is_err());
    }

    #[test]
    fn round_trip() {
        let so5 = build_so(5).unwrap();
        let text = serde_json::to_string(&AlgebraFile::from_algebra(&so5)).unwrap();
        let back = AlgebraFile::parse(&text).unwrap().into_algebra().unwrap();
        assert_eq!(back, so5);
    }
}
