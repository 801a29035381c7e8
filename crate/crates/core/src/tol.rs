//! Numeric tolerances and the Hilbert-dimension cap.

use crate::error::{Error, Result};

/// Tolerance for exactness assertions.
pub const EXACT: f64 = 1e-10;
/// Tolerance for norms and traces.
pub const NORM: f64 = 1e-12;
/// Allowed negative slack on eigenvalues of PSD matrices.
pub const PSD_SLACK: f64 = 1e-10;
/// Default cap on the total Hilbert dimension.
pub const DEFAULT_MAX_DIM: usize = 1 << 14;

/// Current dimension cap, read from `CLONELAB_MAX_DIM` when set.
pub fn max_dim() -> usize {
    std::env::var("CLONELAB_MAX_DIM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        Err(Error::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}
