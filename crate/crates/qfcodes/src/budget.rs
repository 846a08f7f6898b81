//! Size budgets for the exhaustive-enumeration paths.

/// Limits on brute-force work. Everything here is a count, not a wall-clock
/// budget; callers that exceed a limit get a `SizeLimit` error instead of a
/// long-running computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    /// Maximum number of vectors enumerated in one sweep (bounds `q^m`).
    pub max_vectors: u64,
    /// Maximum `q^m * n` symbol operations for a full codebook enumeration.
    pub max_work: u64,
    /// Maximum number of codeword pairs in an exhaustive covering scan.
    pub max_pairs: u64,
}

impl EnumBudget {
    pub const DEFAULT_MAX_VECTORS: u64 = 1 << 24;
    pub const DEFAULT_MAX_WORK: u64 = 1 << 28;
    pub const DEFAULT_MAX_PAIRS: u64 = 1 << 23;

    pub fn unlimited() -> Self {
        EnumBudget {
            max_vectors: u64::MAX,
            max_work: u64::MAX,
            max_pairs: u64::MAX,
        }
    }
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_vectors: Self::DEFAULT_MAX_VECTORS,
            max_work: Self::DEFAULT_MAX_WORK,
            max_pairs: Self::DEFAULT_MAX_PAIRS,
        }
    }
}
