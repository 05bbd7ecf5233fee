//! Finite unions of closed intervals on the real line, with exact H^1
//! and atomized estimates for other exponents.

use serde::{Deserialize, Serialize};

use crate::atomic::{AtomicSpace, Provenance};
use crate::content::{
    exact_content_with_limit, BoundKind, ContentEstimate, Covering, Witness, DEFAULT_DP_LIMIT,
    HARD_DP_CAP,
};
use crate::error::{Error, Result};
use crate::value::{alpha_cost, ContentValue, Delta};

/// A closed interval `[lo, hi]` with `lo <= hi`. Serialized as the pair
/// `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "(f64, f64)", try_from = "(f64, f64)")]
pub struct ClosedInterval {
    pub lo: f64,
    pub hi: f64,
}

impl From<ClosedInterval> for (f64, f64) {
    fn from(iv: ClosedInterval) -> Self {
        (iv.lo, iv.hi)
    }
}

impl TryFrom<(f64, f64)> for ClosedInterval {
    type Error = Error;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        ClosedInterval::new(lo, hi)
    }
}

impl ClosedInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::BadParams(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(ClosedInterval { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &ClosedInterval) -> ClosedInterval {
        ClosedInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// A list of closed intervals. `normalize` produces the canonical form:
/// sorted, disjoint, touching intervals merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    pub intervals: Vec<ClosedInterval>,
}

impl IntervalSet {
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self> {
        let intervals = pairs
            .iter()
            .map(|&(a, b)| ClosedInterval::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSet { intervals })
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Sorted, merged, disjoint form.
    pub fn normalize(&self) -> IntervalSet {
        let mut sorted = self.intervals.clone();
        sorted.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        let mut merged: Vec<ClosedInterval> = Vec::new();
        for iv in sorted {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        IntervalSet { intervals: merged }
    }

    /// Total length of the merged intervals.
    pub fn total_length(&self) -> f64 {
        self.normalize()
            .intervals
            .iter()
            .map(ClosedInterval::length)
            .sum()
    }

    /// Present the merged intervals as an atomic space, splitting each
    /// interval into `parts` equal closed sub-intervals.
    pub fn atomize(&self, parts: usize) -> Result<(AtomicSpace, Vec<ClosedInterval>)> {
        let parts = parts.max(1);
        let merged = self.normalize();
        let mut atoms: Vec<ClosedInterval> = Vec::new();
        for iv in &merged.intervals {
            let step = iv.length() / parts as f64;
            for p in 0..parts {
                let lo = iv.lo + step * p as f64;
                let hi = if p + 1 == parts {
                    iv.hi
                } else {
                    iv.lo + step * (p + 1) as f64
                };
                atoms.push(ClosedInterval { lo, hi });
            }
        }
        let n = atoms.len();
        let mut sup = vec![vec![0.0; n]; n];
        let mut inf = vec![vec![0.0; n]; n];
        for i in 0..n {
            sup[i][i] = atoms[i].length();
            for j in (i + 1)..n {
                let s = (atoms[j].hi - atoms[i].lo).max(atoms[i].hi - atoms[j].lo);
                let d = (atoms[j].lo - atoms[i].hi)
                    .max(atoms[i].lo - atoms[j].hi)
                    .max(0.0);
                sup[i][j] = s;
                sup[j][i] = s;
                inf[i][j] = d;
                inf[j][i] = d;
            }
        }
        let diam = atoms.iter().map(ClosedInterval::length).collect();
        let space = AtomicSpace::new(diam, sup, inf, Provenance::IntervalLine)?;
        Ok((space, atoms))
    }
}

/// Content of an interval set.
///
/// At alpha = 1 this is exact: H^1 on the line is the total length of the
/// merged intervals, independent of the covering scale. For other
/// exponents the set is atomized at a refinement filling the DP limit and
/// the result is reported as an upper bound for the underlying set.
pub fn interval_content(set: &IntervalSet, alpha: f64) -> Result<ContentEstimate> {
    interval_content_with_limit(set, alpha, DEFAULT_DP_LIMIT)
}

pub fn interval_content_with_limit(
    set: &IntervalSet,
    alpha: f64,
    limit: usize,
) -> Result<ContentEstimate> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    let limit = limit.min(HARD_DP_CAP);
    let merged = set.normalize();
    let k = merged.intervals.len();
    if k == 0 {
        return Ok(ContentEstimate {
            value: ContentValue::finite(0.0),
            bound: BoundKind::Exact,
            alpha,
            delta: Delta::Infinite,
            witness: Some(Witness::Covering(Covering {
                blocks: vec![],
                block_diam: vec![],
                block_cost: vec![],
            })),
        });
    }

    if alpha == 1.0 {
        // One block per merged interval; the cost is the exact H^1.
        let block_diam: Vec<f64> = merged
            .intervals
            .iter()
            .map(ClosedInterval::length)
            .collect();
        let value = block_diam.iter().sum();
        return Ok(ContentEstimate {
            value: ContentValue::finite(value),
            bound: BoundKind::Exact,
            alpha,
            delta: Delta::Infinite,
            witness: Some(Witness::Covering(Covering {
                blocks: (0..k).map(|i| vec![i]).collect(),
                block_cost: block_diam.clone(),
                block_diam,
            })),
        });
    }

    if k > limit {
        // Too many pieces for the DP: cover each merged interval by itself.
        let block_diam: Vec<f64> = merged
            .intervals
            .iter()
            .map(ClosedInterval::length)
            .collect();
        let block_cost: Vec<f64> = block_diam.iter().map(|&d| alpha_cost(d, alpha)).collect();
        return Ok(ContentEstimate {
            value: ContentValue::finite(block_cost.iter().sum()),
            bound: BoundKind::Upper,
            alpha,
            delta: Delta::Infinite,
            witness: Some(Witness::Covering(Covering {
                blocks: (0..k).map(|i| vec![i]).collect(),
                block_diam,
                block_cost,
            })),
        });
    }

    let parts = (limit / k).max(1);
    let (space, atoms) = merged.atomize(parts)?;
    let target: Vec<usize> = (0..atoms.len()).collect();
    let mut est = exact_content_with_limit(&space, &target, alpha, Delta::Infinite, limit)?;
    // Exact for the atomized presentation, an upper bound for the set.
    est.bound = BoundKind::Upper;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges_and_sorts() {
        let set = IntervalSet::new(&[(2.0, 3.0), (0.0, 1.0), (0.5, 1.5)]).unwrap();
        let n = set.normalize();
        assert_eq!(n.intervals.len(), 2);
        assert_eq!((n.intervals[0].lo, n.intervals[0].hi), (0.0, 1.5));
        assert_eq!((n.intervals[1].lo, n.intervals[1].hi), (2.0, 3.0));
    }

    #[test]
    fn unit_interval_h1_is_one() {
        let set = IntervalSet::new(&[(0.0, 1.0)]).unwrap();
        let est = interval_content(&set, 1.0).unwrap();
        assert_eq!(est.value, ContentValue::finite(1.0));
        assert_eq!(est.bound, BoundKind::Exact);
    }

    #[test]
    fn disjoint_union_h1_adds() {
        let set = IntervalSet::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let est = interval_content(&set, 1.0).unwrap();
        // Merged-length oracle: (1 - 0) + (3 - 2).
        assert_eq!(est.value, ContentValue::finite(2.0));
    }

    #[test]
    fn empty_set_has_zero_content() {
        let set = IntervalSet { intervals: vec![] };
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let est = interval_content(&set, alpha).unwrap();
            assert_eq!(est.value, ContentValue::finite(0.0));
        }
    }

    #[test]
    fn sub_one_alpha_prefers_single_block() {
        // At alpha < 1 covering [0,1] by one set is optimal: value 1^alpha = 1.
        let set = IntervalSet::new(&[(0.0, 1.0)]).unwrap();
        let est = interval_content(&set, 0.5).unwrap();
        assert!((est.value.expect_finite() - 1.0).abs() < 1e-12);
        assert_eq!(est.bound, BoundKind::Upper);
    }

    #[test]
    fn super_one_alpha_decreases_under_refinement() {
        // At alpha > 1 the refined presentation beats the single block.
        let set = IntervalSet::new(&[(0.0, 1.0)]).unwrap();
        let est = interval_content(&set, 2.0).unwrap();
        let v = est.value.expect_finite();
        // 16 pieces of length 1/16 cost 16 * (1/16)^2 = 1/16.
        assert!((v - 1.0 / 16.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(IntervalSet::new(&[(1.0, 0.0)]).is_err());
        assert!(interval_content(&IntervalSet::new(&[(0.0, 1.0)]).unwrap(), -1.0).is_err());
    }

    #[test]
    fn atomize_geometry() {
        let set = IntervalSet::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let (space, atoms) = set.atomize(2).unwrap();
        assert_eq!(atoms.len(), 4);
        // Gap between [0.5,1] and [2,2.5] is 1.
        assert_eq!(space.inf_dist[1][2], 1.0);
        // Farthest endpoints of [0,0.5] and [2.5,3] are 3 apart.
        assert_eq!(space.sup_dist[0][3], 3.0);
    }
}
