//! Nearest-neighbor queries used by the inner minimizations of the star
//! dynamic programs.

use crate::error::{Error, Result};
use crate::metric::{Element, MetricSpace};

/// Finds the candidate closest to a query. Implementations must return the
/// smallest index among equally close candidates.
pub trait NearestNeighbor: Sync {
    /// `None` only when `candidates` is empty.
    fn nearest(
        &self,
        space: &MetricSpace,
        query: &Element,
        candidates: &[Element],
    ) -> Option<(usize, f64)>;
}

/// Exhaustive scan, `O(|candidates|)` distance evaluations per query.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearScan;

impl NearestNeighbor for LinearScan {
    fn nearest(
        &self,
        space: &MetricSpace,
        query: &Element,
        candidates: &[Element],
    ) -> Option<(usize, f64)> {
        let (first, rest) = candidates.split_first()?;
        let mut best_i = 0;
        let mut best_d = space.dist(query, first);
        for (i, c) in rest.iter().enumerate() {
            let d = space.dist(query, c);
            if d < best_d {
                best_i = i + 1;
                best_d = d;
            }
        }
        Some((best_i, best_d))
    }
}

/// Closest candidate to `query` and its distance, by linear scan.
pub fn nearest_allowed(
    query: &Element,
    candidates: &[Element],
    space: &MetricSpace,
) -> Result<(usize, f64)> {
    space.check_element(query)?;
    for c in candidates {
        space.check_element(c)?;
    }
    LinearScan.nearest(space, query, candidates).ok_or(Error::EmptyCandidates)
}
