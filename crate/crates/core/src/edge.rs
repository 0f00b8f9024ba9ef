//! Edge indexing for the complete graph `K_n`.
//!
//! Edges are unordered vertex pairs `{u, v}` with `0 <= u < v < n`, ranked in
//! lexicographic order: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`. The rank is
//! the canonical on-the-wire representation of a move.

use serde::{Deserialize, Serialize};

use crate::game::GameError;

pub type Vertex = u32;

/// Lexicographic rank of an unordered vertex pair, in `[0, n(n-1)/2)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Number of edges of `K_n`.
pub fn edge_count(n: u32) -> u32 {
    n * (n - 1) / 2
}

/// Rank of the pair `{u, v}`. Order of the arguments does not matter.
pub fn edge_index(u: Vertex, v: Vertex, n: u32) -> Result<EdgeId, GameError> {
    if u >= n || v >= n || u == v {
        return Err(GameError::VertexOutOfRange { u, v, n });
    }
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let lo = lo as u64;
    let hi = hi as u64;
    let n = n as u64;
    // edges listed before row `lo`, plus offset within the row
    let idx = lo * (2 * n - lo - 1) / 2 + (hi - lo - 1);
    Ok(EdgeId(idx as u32))
}

/// Inverse of [`edge_index`]: the pair `(u, v)` with `u < v`.
pub fn edge_endpoints(e: EdgeId, n: u32) -> Result<(Vertex, Vertex), GameError> {
    if e.0 >= edge_count(n) {
        return Err(GameError::EdgeOutOfRange { edge: e.0, n });
    }
    let idx = e.0 as u64;
    let nn = n as u64;
    // row start for u is u*(2n-u-1)/2; invert the quadratic, then correct.
    let approx = ((2.0 * nn as f64 - 1.0)
        - (((2 * nn - 1) * (2 * nn - 1)) as f64 - 8.0 * idx as f64).sqrt())
        / 2.0;
    let mut u = approx.floor().max(0.0) as u64;
    if u >= nn - 1 {
        u = nn - 2;
    }
    let row_start = |u: u64| u * (2 * nn - u - 1) / 2;
    while u > 0 && row_start(u) > idx {
        u -= 1;
    }
    while row_start(u + 1) <= idx {
        u += 1;
    }
    let v = u + 1 + (idx - row_start(u));
    Ok((u as u32, v as u32))
}

/// Iterator over all edges of `K_n` in ascending `EdgeId` order.
pub fn all_edges(n: u32) -> impl Iterator<Item = (EdgeId, Vertex, Vertex)> {
    (0..n).flat_map(move |u| {
        (u + 1..n).map(move |v| (edge_index(u, v, n).expect("valid pair"), u, v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lexicographic_rank_small() {
        assert_eq!(edge_index(0, 1, 4).unwrap(), EdgeId(0));
        assert_eq!(edge_index(2, 3, 4).unwrap(), EdgeId(5));
        assert_eq!(edge_index(1, 0, 4).unwrap(), EdgeId(0));
        assert_eq!(edge_endpoints(EdgeId(0), 4).unwrap(), (0, 1));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(edge_index(0, 4, 4).is_err());
        assert!(edge_index(2, 2, 4).is_err());
        assert!(edge_endpoints(EdgeId(6), 4).is_err());
    }

    #[test]
    fn round_trip_exhaustive() {
        for n in 2..=60u32 {
            let mut expect = 0u32;
            for u in 0..n {
                for v in u + 1..n {
                    let e = edge_index(u, v, n).unwrap();
                    assert_eq!(e.0, expect);
                    assert_eq!(edge_endpoints(e, n).unwrap(), (u, v));
                    expect += 1;
                }
            }
            assert_eq!(expect, edge_count(n));
        }
    }

    proptest! {
        #[test]
        fn round_trip_large(n in 2u32..3000, raw in 0u64..u32::MAX as u64) {
            let e = EdgeId((raw % edge_count(n) as u64) as u32);
            let (u, v) = edge_endpoints(e, n).unwrap();
            prop_assert!(u < v && v < n);
            prop_assert_eq!(edge_index(u, v, n).unwrap(), e);
        }
    }
}
