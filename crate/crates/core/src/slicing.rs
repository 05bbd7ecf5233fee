//! Level-set machinery: build the piecewise-constant profile h(r) from a
//! covering and a Lipschitz function, verify the integral bound against
//! k times the covering cost, and bound the content of slices.
//!
//! The slicing function is supplied as one closed image interval per
//! atom, so interval atoms and cylinder cells (where f ranges over a set)
//! are handled uniformly; for point atoms the interval degenerates to a
//! value. The interval hull stands in for the closure of the image,
//! which only enlarges h and preserves every stated bound.

use serde::{Deserialize, Serialize};

use crate::atomic::AtomicSpace;
use crate::content::{
    exact_content_with_limit, greedy_content, Covering, Witness, DEFAULT_DP_LIMIT, HARD_DP_CAP,
};
use crate::error::{Error, Result};
use crate::intervals::ClosedInterval;
use crate::value::{alpha_cost, Delta};

/// A piecewise-constant level-set profile: h(r) sums the (alpha-1)-cost
/// of every covering block whose image interval contains r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceProfile {
    pub alpha: f64,
    /// Lipschitz constant of the slicing function used for the bound.
    pub k: f64,
    /// Sum of (diam block)^alpha over the covering.
    pub covering_cost: f64,
    /// Sorted endpoints of all block image intervals.
    pub breakpoints: Vec<f64>,
    /// h on the open interval between consecutive breakpoints.
    pub values: Vec<f64>,
    /// Exact integral of h: sum of weight * |image interval| per block.
    pub integral: f64,
    /// The covering the profile was built from.
    pub covering: Covering,
    /// Image interval hull per block.
    pub block_intervals: Vec<ClosedInterval>,
    /// (diam block)^(alpha-1) per block.
    pub block_weights: Vec<f64>,
    /// Per-atom image intervals (aligned with the space's atoms).
    pub atom_intervals: Vec<ClosedInterval>,
}

impl SliceProfile {
    /// Pointwise evaluation of h at r, counting every block whose closed
    /// image interval contains r.
    pub fn evaluate(&self, r: f64) -> f64 {
        self.block_intervals
            .iter()
            .zip(&self.block_weights)
            .filter(|(iv, _)| iv.contains(r))
            .map(|(_, w)| w)
            .sum()
    }

    /// Atoms of the covering whose own image interval contains r.
    pub fn slice_atoms(&self, r: f64) -> Vec<usize> {
        let mut atoms: Vec<usize> = self
            .covering
            .blocks
            .iter()
            .flatten()
            .copied()
            .filter(|&a| self.atom_intervals[a].contains(r))
            .collect();
        atoms.sort_unstable();
        atoms
    }
}

/// Build the level-set profile of a covering under a k-Lipschitz
/// function given by per-atom image intervals.
///
/// Every block's image hull must satisfy `|f(block)| <= k * diam(block)`
/// (within tolerance); the profile integral is then at most k times the
/// covering cost by construction.
pub fn build_slice_profile(
    space: &AtomicSpace,
    atom_intervals: &[ClosedInterval],
    covering: &Covering,
    alpha: f64,
    k: f64,
) -> Result<SliceProfile> {
    if !alpha.is_finite() || alpha < 1.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    if !k.is_finite() || k < 0.0 {
        return Err(Error::BadParams(format!("invalid Lipschitz constant {k}")));
    }
    if atom_intervals.len() != space.len() {
        return Err(Error::BadParams(format!(
            "{} image intervals for {} atoms",
            atom_intervals.len(),
            space.len()
        )));
    }
    let target: Vec<usize> = {
        let mut t: Vec<usize> = covering.blocks.iter().flatten().copied().collect();
        t.sort_unstable();
        t
    };
    covering.validate(space, &target, Delta::Infinite)?;

    let mut block_intervals = Vec::with_capacity(covering.blocks.len());
    let mut block_weights = Vec::with_capacity(covering.blocks.len());
    let mut covering_cost = 0.0;
    let mut integral = 0.0;
    for (b, block) in covering.blocks.iter().enumerate() {
        let diam = space.block_diam(block);
        let hull = block
            .iter()
            .map(|&a| atom_intervals[a])
            .reduce(|acc, iv| acc.hull(&iv))
            .expect("blocks are nonempty");
        let width = hull.length();
        let bound = k * diam;
        if width > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::LipschitzViolation {
                block: b,
                width,
                bound,
            });
        }
        let weight = alpha_cost(diam, alpha - 1.0);
        covering_cost += alpha_cost(diam, alpha);
        integral += weight * width;
        block_intervals.push(hull);
        block_weights.push(weight);
    }

    let mut breakpoints: Vec<f64> = block_intervals
        .iter()
        .flat_map(|iv| [iv.lo, iv.hi])
        .collect();
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();
    let values: Vec<f64> = breakpoints
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            block_intervals
                .iter()
                .zip(&block_weights)
                .filter(|(iv, _)| iv.contains(mid))
                .map(|(_, wt)| wt)
                .sum()
        })
        .collect();

    Ok(SliceProfile {
        alpha,
        k,
        covering_cost,
        breakpoints,
        values,
        integral,
        covering: covering.clone(),
        block_intervals,
        block_weights,
        atom_intervals: atom_intervals.to_vec(),
    })
}

/// Verification record for one slice: the exact content of the atoms
/// meeting `f^-1(r)` at exponent `alpha - 1`, checked against h(r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceBoundRecord {
    pub r: f64,
    pub slice_atoms: Vec<usize>,
    /// Exact content of the slice atoms at exponent alpha - 1, scale delta.
    pub content: f64,
    pub h_r: f64,
    pub holds: bool,
}

/// Bound the slice at level r: the covering blocks containing r cover the
/// slice atoms, so the exact DP value at exponent alpha - 1 never exceeds
/// h(r). Every covering block must fit the scale delta.
pub fn slice_content_bound(
    space: &AtomicSpace,
    profile: &SliceProfile,
    r: f64,
    delta: Delta,
) -> Result<SliceBoundRecord> {
    slice_content_bound_with_limit(space, profile, r, delta, DEFAULT_DP_LIMIT)
}

pub fn slice_content_bound_with_limit(
    space: &AtomicSpace,
    profile: &SliceProfile,
    r: f64,
    delta: Delta,
    limit: usize,
) -> Result<SliceBoundRecord> {
    for (b, block) in profile.covering.blocks.iter().enumerate() {
        if !delta.admits(space.block_diam(block)) {
            return Err(Error::BadParams(format!(
                "covering block {b} violates delta"
            )));
        }
    }
    let slice_atoms = profile.slice_atoms(r);
    let est = exact_content_with_limit(space, &slice_atoms, profile.alpha - 1.0, delta, limit)?;
    // The blocks containing r restrict to an admissible covering of the
    // slice atoms, so the exact value is finite.
    let content = est.value.expect_finite();
    let h_r = profile.evaluate(r);
    Ok(SliceBoundRecord {
        r,
        slice_atoms,
        content,
        h_r,
        holds: content <= h_r + 1e-9,
    })
}

/// One scale of a slicing sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub delta: f64,
    pub blocks: usize,
    pub integral: f64,
    pub k_cost: f64,
    pub holds: bool,
}

/// For each scale, build a covering (exact within the DP limit, greedy
/// beyond it), form its profile, and record the integral against k times
/// the covering cost. This realizes, scale by scale, the premises of the
/// limiting argument; no almost-everywhere conclusion is drawn.
pub fn slice_profile_sweep(
    space: &AtomicSpace,
    atom_intervals: &[ClosedInterval],
    target: &[usize],
    alpha: f64,
    k: f64,
    delta_grid: &[f64],
) -> Result<Vec<SweepPoint>> {
    slice_profile_sweep_with_limit(
        space,
        atom_intervals,
        target,
        alpha,
        k,
        delta_grid,
        DEFAULT_DP_LIMIT,
    )
}

pub fn slice_profile_sweep_with_limit(
    space: &AtomicSpace,
    atom_intervals: &[ClosedInterval],
    target: &[usize],
    alpha: f64,
    k: f64,
    delta_grid: &[f64],
    limit: usize,
) -> Result<Vec<SweepPoint>> {
    if delta_grid.is_empty() {
        return Err(Error::DegenerateGrid("empty delta grid".into()));
    }
    for w in delta_grid.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::DegenerateGrid(
                "delta grid must be strictly decreasing".into(),
            ));
        }
    }
    let limit = limit.min(HARD_DP_CAP);
    delta_grid
        .iter()
        .map(|&d| {
            let delta = Delta::finite(d)?;
            let est = if target.len() <= limit {
                exact_content_with_limit(space, target, alpha, delta, limit)?
            } else {
                greedy_content(space, target, alpha, delta)?
            };
            let covering = match est.witness {
                Some(Witness::Covering(c)) => c,
                _ => {
                    return Err(Error::InadmissibleAtom {
                        atom: target.first().copied().unwrap_or(0),
                        diam: f64::NAN,
                        delta: d,
                    })
                }
            };
            let profile = build_slice_profile(space, atom_intervals, &covering, alpha, k)?;
            Ok(SweepPoint {
                delta: d,
                blocks: profile.covering.blocks.len(),
                integral: profile.integral,
                k_cost: k * profile.covering_cost,
                holds: profile.integral <= k * profile.covering_cost + 1e-9,
            })
        })
        .collect()
}
