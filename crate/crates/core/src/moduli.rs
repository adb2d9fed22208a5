//! Index bookkeeping for `M̄_{g,n}` and its pseudostable counterpart.

use crate::error::{Error, Result};

/// `2g - 2 + n > 0`.
pub fn is_stable(g: u32, n: u32) -> bool {
    2 * g + n > 2
}

/// Stable and not one of `(1,1)`, `(2,0)`.
pub fn is_pseudostable(g: u32, n: u32) -> bool {
    is_stable(g, n) && !matches!((g, n), (1, 1) | (2, 0))
}

/// `3g - 3 + n`; only meaningful for stable indices.
pub fn dimension(g: u32, n: u32) -> u32 {
    3 * g + n - 3
}

pub fn require_stable(g: u32, n: u32) -> Result<()> {
    if is_stable(g, n) {
        Ok(())
    } else {
        Err(Error::NotStable { g, n })
    }
}

pub fn require_pseudostable(g: u32, n: u32) -> Result<()> {
    if is_pseudostable(g, n) {
        Ok(())
    } else {
        Err(Error::NotPseudostable { g, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excluded_indices() {
        let unstable = [(0, 0), (0, 1), (0, 2), (1, 0)];
        for (g, n) in unstable {
            assert!(!is_stable(g, n));
            assert!(!is_pseudostable(g, n));
        }
        assert!(is_stable(1, 1) && !is_pseudostable(1, 1));
        assert!(is_stable(2, 0) && !is_pseudostable(2, 0));
        assert!(is_pseudostable(0, 3));
        assert!(is_pseudostable(1, 2));
        assert!(is_pseudostable(2, 1));
        assert!(is_pseudostable(3, 0));
    }
}
