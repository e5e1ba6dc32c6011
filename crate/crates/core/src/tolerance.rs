//! Numerical thresholds shared across the crate.

/// Structure constants with smaller magnitude are dropped at construction.
pub const DROP: f64 = 1e-12;

/// Relative singular-value cutoff for rank decisions (Killing signature,
/// center nullity, Gram singularity).
pub const RANK: f64 = 1e-9;

/// Default absolute tolerance for defect checks on O(1)-normalized data.
pub const DEFECT: f64 = 1e-9;

/// Relative tolerance for "scalar multiple of the identity" on a block.
pub const SCALAR_BLOCK: f64 = 1e-8;

/// Dense storage of structure constants up to this dimension.
pub const DENSE_MAX_DIM: usize = 16;
