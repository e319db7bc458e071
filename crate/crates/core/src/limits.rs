//! Size caps shared by every enumerating operation.
//!
//! Exceeding a cap is always an error, never a silent truncation.

use serde::Serialize;

/// Hard ceiling for field size: scalar codes are stored in a byte.
pub const FIELD_HARD_MAX: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest admissible field size q.
    pub max_q: u64,
    /// Largest ambient dimension n.
    pub max_n: usize,
    /// Largest output of subspace / family enumerations.
    pub max_enum: u64,
    /// Largest explicitly enumerated matrix set (all of M(n,q), phi sets, closures).
    pub max_elems: u64,
    /// Largest element count for quadratic pair scans (brute conjugacy, witness search).
    pub brute_elems: u64,
    /// Largest table for 2^m subset scans.
    pub subset_scan_elems: usize,
    /// Largest table for backtracking isomorphism search.
    pub iso_elems: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_q: 64,
            max_n: 8,
            max_enum: 1 << 20,
            max_elems: 4096,
            brute_elems: 512,
            subset_scan_elems: 16,
            iso_elems: 64,
        }
    }
}

impl Limits {
    /// Raise the element caps to at least `n`.
    pub fn with_max_elems(mut self, n: u64) -> Self {
        self.max_elems = self.max_elems.max(n);
        self.brute_elems = self.brute_elems.max(n);
        self
    }
}
