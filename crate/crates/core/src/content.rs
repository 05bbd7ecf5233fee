//! Hausdorff content over atomic presentations: the exact covering
//! infimum (a subset DP over partitions), a greedy upper-bound surrogate,
//! localized measure profiles, and mass-distribution lower bounds.
//!
//! The infimum in the content definition ranges over arbitrary coverings;
//! shrinking each covering set to its intersection with the target and
//! dropping overlaps never increases a block diameter, so partitions of
//! the target atoms suffice and the DP below is exact for the presented
//! decomposition. Relative to the underlying infinite set the result is
//! an upper bound; it is tight for ultrametric cell presentations and for
//! interval presentations at alpha = 1.

use serde::{Deserialize, Serialize};

use crate::atomic::AtomicSpace;
use crate::error::{Error, Result};
use crate::value::{alpha_cost, ContentValue, Delta};

/// Default cap on the number of target atoms for exact subset DPs.
pub const DEFAULT_DP_LIMIT: usize = 16;
/// Hard cap: DP requests above this are always rejected.
pub const HARD_DP_CAP: usize = 20;

/// Whether an estimate is exact (for the presentation), an upper bound,
/// or a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
}

/// A grouping of atoms into disjoint nonempty blocks together with each
/// block's diameter and alpha-cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub blocks: Vec<Vec<usize>>,
    pub block_diam: Vec<f64>,
    pub block_cost: Vec<f64>,
}

impl Covering {
    pub fn total_cost(&self) -> f64 {
        self.block_cost.iter().sum()
    }

    /// Check the covering invariant against a space and target: blocks
    /// are disjoint, nonempty, their union is the target, and every
    /// block diameter is admitted by `delta`.
    pub fn validate(&self, space: &AtomicSpace, target: &[usize], delta: Delta) -> Result<()> {
        let mut seen = vec![false; space.len()];
        for (b, block) in self.blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::BadParams(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= space.len() || seen[i] {
                    return Err(Error::BadParams(format!(
                        "block {b} reuses or exceeds atom {i}"
                    )));
                }
                seen[i] = true;
            }
            if !delta.admits(space.block_diam(block)) {
                return Err(Error::BadParams(format!(
                    "block {b} violates the delta constraint"
                )));
            }
        }
        let mut covered: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        covered.sort_unstable();
        let mut want: Vec<usize> = target.to_vec();
        want.sort_unstable();
        if covered != want {
            return Err(Error::BadParams(
                "blocks do not partition the target".into(),
            ));
        }
        Ok(())
    }
}

/// Nonnegative weight per target atom; the witness format for lower bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightAssignment {
    pub weights: Vec<f64>,
    pub total: f64,
}

impl WeightAssignment {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (atom, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeWeight { atom, weight: w });
            }
        }
        let total = weights.iter().sum();
        Ok(WeightAssignment { weights, total })
    }

    pub fn uniform(n: usize, w: f64) -> Result<Self> {
        Self::new(vec![w; n])
    }
}

/// Evidence attached to a content estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Covering(Covering),
    Weights(WeightAssignment),
}

/// A content value tagged with its bound direction and the parameters
/// that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentEstimate {
    pub value: ContentValue,
    pub bound: BoundKind,
    pub alpha: f64,
    pub delta: Delta,
    pub witness: Option<Witness>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// Diameter of every submask of `target`, indexed by bitmask.
fn mask_diams(space: &AtomicSpace, target: &[usize]) -> Vec<f64> {
    let n = target.len();
    let full = 1usize << n;
    let mut diam = vec![0.0_f64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if rest == 0 {
            diam[mask] = space.atom_diam[target[low]];
        } else {
            let mut d = diam[rest].max(space.atom_diam[target[low]]);
            let mut m = rest;
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                d = d.max(space.sup_dist[target[low]][target[j]]);
                m &= m - 1;
            }
            diam[mask] = d;
        }
    }
    diam
}

/// Exact Hausdorff content of the target atoms at the default DP limit.
///
/// Minimizes `sum (diam block)^alpha` over all partitions of the target
/// into blocks, restricted to blocks of diameter strictly below `delta`.
/// Returns the infinite marker when no admissible partition exists.
pub fn exact_content(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
) -> Result<ContentEstimate> {
    exact_content_with_limit(space, target, alpha, delta, DEFAULT_DP_LIMIT)
}

/// Exact content with an explicit atom limit (hard-capped at [`HARD_DP_CAP`]).
pub fn exact_content_with_limit(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
    limit: usize,
) -> Result<ContentEstimate> {
    check_alpha(alpha)?;
    space.check_target(target)?;
    let limit = limit.min(HARD_DP_CAP);
    let n = target.len();
    if n > limit {
        return Err(Error::TooManyAtoms { count: n, limit });
    }
    if n == 0 {
        return Ok(ContentEstimate {
            value: ContentValue::finite(0.0),
            bound: BoundKind::Exact,
            alpha,
            delta,
            witness: Some(Witness::Covering(Covering {
                blocks: vec![],
                block_diam: vec![],
                block_cost: vec![],
            })),
        });
    }

    let diam = mask_diams(space, target);
    let full = 1usize << n;
    // Cost per block mask; None marks blocks the delta constraint rejects.
    let cost: Vec<Option<f64>> = (0..full)
        .map(|m| {
            if m == 0 {
                return None;
            }
            let d = diam[m];
            delta.admits(d).then(|| alpha_cost(d, alpha))
        })
        .collect();

    let mut best = vec![f64::INFINITY; full];
    let mut choice = vec![0usize; full];
    best[0] = 0.0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Every block containing the lowest atom of the mask.
        let mut sub = rest;
        loop {
            let block = low | sub;
            if let Some(c) = cost[block] {
                let tail = best[mask ^ block];
                if tail.is_finite() {
                    let cand = c + tail;
                    if cand < best[mask] {
                        best[mask] = cand;
                        choice[mask] = block;
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let total = best[full - 1];
    if !total.is_finite() {
        return Ok(ContentEstimate {
            value: ContentValue::Infinite,
            bound: BoundKind::Exact,
            alpha,
            delta,
            witness: None,
        });
    }

    let mut blocks = Vec::new();
    let mut block_diam = Vec::new();
    let mut block_cost = Vec::new();
    let mut mask = full - 1;
    while mask != 0 {
        let block = choice[mask];
        let atoms: Vec<usize> = (0..n)
            .filter(|i| block >> i & 1 == 1)
            .map(|i| target[i])
            .collect();
        block_diam.push(diam[block]);
        block_cost.push(cost[block].expect("chosen block is admissible"));
        blocks.push(atoms);
        mask ^= block;
    }

    Ok(ContentEstimate {
        value: ContentValue::finite(total),
        bound: BoundKind::Exact,
        alpha,
        delta,
        witness: Some(Witness::Covering(Covering {
            blocks,
            block_diam,
            block_cost,
        })),
    })
}

/// Safety factor keeping greedy blocks strictly below the delta constraint.
const GREEDY_SAFETY: f64 = 2.0 / 3.0;

/// Greedy upper bound: repeatedly seed a block with the largest unassigned
/// atom and absorb atoms (in index order) while the block diameter stays
/// below `delta * 2/3`. Always at least the exact value, with no atom limit.
pub fn greedy_content(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
) -> Result<ContentEstimate> {
    check_alpha(alpha)?;
    space.check_target(target)?;
    let dl = match delta {
        Delta::Finite(d) => d,
        Delta::Infinite => return Err(Error::InvalidDelta(f64::INFINITY)),
    };
    for &i in target {
        if space.atom_diam[i] >= dl {
            return Err(Error::InadmissibleAtom {
                atom: i,
                diam: space.atom_diam[i],
                delta: dl,
            });
        }
    }

    let mut unassigned: Vec<usize> = target.to_vec();
    unassigned.sort_unstable();
    let mut blocks = Vec::new();
    let mut block_diam = Vec::new();
    let mut block_cost = Vec::new();
    while !unassigned.is_empty() {
        // Largest-diameter seed, lowest index on ties.
        let seed_pos = unassigned
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| {
                space.atom_diam[a]
                    .partial_cmp(&space.atom_diam[b])
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .map(|(pos, _)| pos)
            .expect("unassigned is nonempty");
        let seed = unassigned.remove(seed_pos);
        let mut block = vec![seed];
        let mut diam = space.atom_diam[seed];
        unassigned.retain(|&j| {
            let mut grown = diam.max(space.atom_diam[j]);
            for &i in &block {
                grown = grown.max(space.sup_dist[i][j]);
            }
            if grown < dl * GREEDY_SAFETY {
                block.push(j);
                diam = grown;
                false
            } else {
                true
            }
        });
        block.sort_unstable();
        block_diam.push(diam);
        block_cost.push(alpha_cost(diam, alpha));
        blocks.push(block);
    }

    let total: f64 = block_cost.iter().sum();
    Ok(ContentEstimate {
        value: ContentValue::finite(total),
        bound: BoundKind::Upper,
        alpha,
        delta,
        witness: Some(Witness::Covering(Covering {
            blocks,
            block_diam,
            block_cost,
        })),
    })
}

/// One-block upper bound; the infinite-delta fallback for targets beyond
/// the DP limit.
fn single_block_bound(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
) -> ContentEstimate {
    let diam = space.block_diam(target);
    let cost = alpha_cost(diam, alpha);
    ContentEstimate {
        value: ContentValue::finite(cost),
        bound: BoundKind::Upper,
        alpha,
        delta,
        witness: Some(Witness::Covering(Covering {
            blocks: vec![target.to_vec()],
            block_diam: vec![diam],
            block_cost: vec![cost],
        })),
    }
}

/// Localized pre-measure along a strictly decreasing delta grid: exact
/// when the target fits the DP limit, a greedy (or one-block) upper bound
/// otherwise. On exact values the sequence is nondecreasing as the scale
/// decreases.
pub fn measure_profile(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta_grid: &[Delta],
) -> Result<Vec<ContentEstimate>> {
    measure_profile_with_limit(space, target, alpha, delta_grid, DEFAULT_DP_LIMIT)
}

pub fn measure_profile_with_limit(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta_grid: &[Delta],
    limit: usize,
) -> Result<Vec<ContentEstimate>> {
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
        .map(|&delta| {
            if target.len() <= limit {
                exact_content_with_limit(space, target, alpha, delta, limit)
            } else if delta.is_finite() {
                greedy_content(space, target, alpha, delta)
            } else {
                space.check_target(target)?;
                check_alpha(alpha)?;
                Ok(single_block_bound(space, target, alpha, delta))
            }
        })
        .collect()
}

/// Mass-distribution lower bound: with `C` the largest ratio
/// `weight(S) / (diam S)^alpha` over admissible blocks `S` of target
/// atoms, any admissible covering costs at least `weight(target) / C`.
///
/// A block of diameter zero carrying positive weight forces `C`
/// infinite (lower bound 0) whenever alpha > 0. If no admissible block
/// can carry the positive total weight, the bound is the infinite marker,
/// matching the exact value.
pub fn mass_lower_bound(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
    weights: &WeightAssignment,
) -> Result<ContentEstimate> {
    mass_lower_bound_with_limit(space, target, alpha, delta, weights, DEFAULT_DP_LIMIT)
}

pub fn mass_lower_bound_with_limit(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
    weights: &WeightAssignment,
    limit: usize,
) -> Result<ContentEstimate> {
    check_alpha(alpha)?;
    space.check_target(target)?;
    let limit = limit.min(HARD_DP_CAP);
    let n = target.len();
    if n > limit {
        return Err(Error::TooManyAtoms { count: n, limit });
    }
    if weights.weights.len() != n {
        return Err(Error::BadParams(format!(
            "{} weights for {} target atoms",
            weights.weights.len(),
            n
        )));
    }
    for (pos, &w) in weights.weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::NegativeWeight {
                atom: target[pos],
                weight: w,
            });
        }
    }

    let lower = |value: ContentValue| ContentEstimate {
        value,
        bound: BoundKind::Lower,
        alpha,
        delta,
        witness: Some(Witness::Weights(weights.clone())),
    };

    if n == 0 || weights.total == 0.0 {
        return Ok(lower(ContentValue::finite(0.0)));
    }

    let diam = mask_diams(space, target);
    let full = 1usize << n;
    let mut mass = vec![0.0_f64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        mass[mask] = mass[mask & (mask - 1)] + weights.weights[low];
    }

    let mut c_max: Option<f64> = None;
    for mask in 1..full {
        if !delta.admits(diam[mask]) {
            continue;
        }
        let cost = alpha_cost(diam[mask], alpha);
        if cost == 0.0 {
            if mass[mask] > 0.0 {
                // Positive mass on a zero-cost block: no finite C works.
                return Ok(lower(ContentValue::finite(0.0)));
            }
            continue;
        }
        let ratio = mass[mask] / cost;
        c_max = Some(c_max.map_or(ratio, |c: f64| c.max(ratio)));
    }

    match c_max {
        Some(c) if c > 0.0 => Ok(lower(ContentValue::finite(weights.total / c))),
        // Positive total weight but no admissible block can meet it: every
        // covering of the target is inadmissible, so the content is infinite.
        _ => Ok(lower(ContentValue::Infinite)),
    }
}

/// Mass-distribution lower bound with an externally supplied premise
/// constant: if `weight(S) <= c * (diam S)^alpha` holds on every
/// admissible block, then the content is at least `weight(target) / c`.
///
/// Unlike [`mass_lower_bound`], which computes the tightest constant from
/// the weights (making the bound invariant under weight scaling), this
/// keeps `c` fixed, so scaling the weights scales the bound. The premise
/// is validated by enumeration and rejected if any block violates it.
pub fn mass_lower_bound_with_constant(
    space: &AtomicSpace,
    target: &[usize],
    alpha: f64,
    delta: Delta,
    weights: &WeightAssignment,
    c: f64,
    limit: usize,
) -> Result<ContentEstimate> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::BadParams(format!(
            "premise constant must be positive, got {c}"
        )));
    }
    check_alpha(alpha)?;
    space.check_target(target)?;
    let limit = limit.min(HARD_DP_CAP);
    let n = target.len();
    if n > limit {
        return Err(Error::TooManyAtoms { count: n, limit });
    }
    if weights.weights.len() != n {
        return Err(Error::BadParams(format!(
            "{} weights for {} target atoms",
            weights.weights.len(),
            n
        )));
    }
    let diam = mask_diams(space, target);
    let full = 1usize << n;
    let mut mass = vec![0.0_f64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        mass[mask] = mass[mask & (mask - 1)] + weights.weights[low];
    }
    for mask in 1..full {
        if !delta.admits(diam[mask]) {
            continue;
        }
        let bound = c * alpha_cost(diam[mask], alpha);
        if mass[mask] > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::BadParams(format!(
                "premise fails: a block carries mass {} > c diam^alpha = {}",
                mass[mask], bound
            )));
        }
    }
    Ok(ContentEstimate {
        value: ContentValue::finite(weights.total / c),
        bound: BoundKind::Lower,
        alpha,
        delta,
        witness: Some(Witness::Weights(weights.clone())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::Provenance;

    pub(crate) const ALPHA_STAR: f64 = 0.6309297535714574; // log 2 / log 3

    /// Depth-d dyadic cell presentation with ratio rho: atoms are the 2^d
    /// words, distances rho^(common prefix length).
    pub(crate) fn cell_space(depth: u32, rho: f64) -> AtomicSpace {
        let n = 1usize << depth;
        let lcp = |a: usize, b: usize| -> u32 {
            let mut l = 0;
            for bit in (0..depth).rev() {
                if (a >> bit) & 1 == (b >> bit) & 1 {
                    l += 1;
                } else {
                    break;
                }
            }
            l
        };
        let dist: Vec<Vec<f64>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            rho.powi(depth as i32)
                        } else {
                            rho.powi(lcp(a, b) as i32)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut inf = dist.clone();
        for (i, row) in inf.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        AtomicSpace::new(
            vec![rho.powi(depth as i32); n],
            dist,
            inf,
            Provenance::CellSpace,
        )
        .unwrap()
    }

    fn singleton_space(coords: &[f64]) -> AtomicSpace {
        let p = crate::metric::PointSpace::from_coords(coords.iter().map(|&x| vec![x]).collect())
            .unwrap();
        AtomicSpace::from_point_space(&p)
    }

    #[test]
    fn cantor_depth3_content_is_one() {
        let s = cell_space(3, 1.0 / 3.0);
        let target: Vec<usize> = (0..8).collect();
        let est = exact_content(&s, &target, ALPHA_STAR, Delta::Infinite).unwrap();
        let v = est.value.expect_finite();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
        match est.witness {
            Some(Witness::Covering(c)) => {
                c.validate(&s, &target, Delta::Infinite).unwrap();
                assert!((c.total_cost() - v).abs() < 1e-12);
            }
            other => panic!("expected covering witness, got {other:?}"),
        }
    }

    #[test]
    fn singletons_have_zero_content_for_positive_alpha() {
        let s = singleton_space(&[0.0, 1.0, 2.0, 5.0]);
        let est = exact_content(&s, &[0, 1, 2, 3], 0.5, Delta::Infinite).unwrap();
        assert_eq!(est.value, ContentValue::finite(0.0));
    }

    #[test]
    fn alpha_zero_bounded_target_costs_one() {
        let s = cell_space(2, 0.5);
        let est = exact_content(&s, &[0, 1, 2, 3], 0.0, Delta::Infinite).unwrap();
        assert_eq!(est.value, ContentValue::finite(1.0));
    }

    #[test]
    fn separated_groups_add_exactly() {
        // Two interval atoms far apart: [0, 1] and [10, 11].
        let s = AtomicSpace::new(
            vec![1.0, 1.0],
            vec![vec![1.0, 11.0], vec![11.0, 1.0]],
            vec![vec![0.0, 9.0], vec![9.0, 0.0]],
            Provenance::IntervalLine,
        )
        .unwrap();
        let delta = Delta::finite(2.0).unwrap();
        let whole = exact_content(&s, &[0, 1], 1.0, delta)
            .unwrap()
            .value
            .expect_finite();
        let left = exact_content(&s, &[0], 1.0, delta)
            .unwrap()
            .value
            .expect_finite();
        let right = exact_content(&s, &[1], 1.0, delta)
            .unwrap()
            .value
            .expect_finite();
        assert!((whole - (left + right)).abs() < 1e-12);
    }

    #[test]
    fn oversized_atom_makes_content_infinite() {
        let s = cell_space(1, 0.5);
        let est = exact_content(&s, &[0, 1], 1.0, Delta::finite(0.4).unwrap()).unwrap();
        assert_eq!(est.value, ContentValue::Infinite);
        assert!(est.witness.is_none());
    }

    #[test]
    fn empty_target_costs_nothing() {
        let s = cell_space(1, 0.5);
        let est = exact_content(&s, &[], 1.0, Delta::Infinite).unwrap();
        assert_eq!(est.value, ContentValue::finite(0.0));
    }

    #[test]
    fn dp_limit_is_enforced() {
        let s = singleton_space(&(0..18).map(f64::from).collect::<Vec<_>>());
        let target: Vec<usize> = (0..18).collect();
        match exact_content(&s, &target, 1.0, Delta::Infinite) {
            Err(Error::TooManyAtoms {
                count: 18,
                limit: 16,
            }) => {}
            other => panic!("expected TooManyAtoms, got {other:?}"),
        }
    }

    #[test]
    fn greedy_finds_level2_grouping_on_depth4_cantor() {
        let s = cell_space(4, 1.0 / 3.0);
        let target: Vec<usize> = (0..16).collect();
        let delta = Delta::finite(1.0 / 3.0).unwrap();
        let greedy = greedy_content(&s, &target, ALPHA_STAR, delta).unwrap();
        let v = greedy.value.expect_finite();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
        let exact = exact_content(&s, &target, ALPHA_STAR, delta).unwrap();
        assert!(v >= exact.value.expect_finite() - 1e-12);
        match greedy.witness {
            Some(Witness::Covering(c)) => {
                assert_eq!(c.blocks.len(), 4);
                c.validate(&s, &target, delta).unwrap();
            }
            other => panic!("expected covering witness, got {other:?}"),
        }
    }

    #[test]
    fn greedy_rejects_oversized_atom() {
        let s = cell_space(1, 0.5);
        match greedy_content(&s, &[0, 1], 1.0, Delta::finite(0.4).unwrap()) {
            Err(Error::InadmissibleAtom { atom: 0, .. }) => {}
            other => panic!("expected InadmissibleAtom, got {other:?}"),
        }
    }

    #[test]
    fn greedy_on_singletons_is_zero() {
        let s = singleton_space(&[0.0, 1.0, 2.0]);
        let est = greedy_content(&s, &[0, 1, 2], 0.7, Delta::finite(0.5).unwrap()).unwrap();
        assert_eq!(est.value, ContentValue::finite(0.0));
    }

    #[test]
    fn profile_on_cantor_is_constant_one() {
        let s = cell_space(3, 1.0 / 3.0);
        let target: Vec<usize> = (0..8).collect();
        let grid = [
            Delta::Infinite,
            Delta::finite(1.0 / 3.0).unwrap(),
            Delta::finite(1.0 / 9.0).unwrap(),
        ];
        let profile = measure_profile(&s, &target, ALPHA_STAR, &grid).unwrap();
        for est in &profile {
            assert!((est.value.expect_finite() - 1.0).abs() < 1e-9);
            assert_eq!(est.bound, BoundKind::Exact);
        }
    }

    #[test]
    fn profile_at_alpha_zero_is_counting_measure() {
        let s = singleton_space(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let target: Vec<usize> = (0..5).collect();
        // Below the minimum separation (1.0), only singleton blocks fit.
        let grid = [Delta::finite(0.5).unwrap()];
        let profile = measure_profile(&s, &target, 0.0, &grid).unwrap();
        assert_eq!(profile[0].value, ContentValue::finite(5.0));
    }

    #[test]
    fn profile_beyond_dp_limit_degrades_to_upper_bounds() {
        let coords: Vec<f64> = (0..20).map(f64::from).collect();
        let s = singleton_space(&coords);
        let target: Vec<usize> = (0..20).collect();
        let grid = [Delta::Infinite, Delta::finite(1.5).unwrap()];
        let profile = measure_profile(&s, &target, 0.5, &grid).unwrap();
        assert_eq!(profile[0].bound, BoundKind::Upper);
        // One block spanning everything: diam 19.
        assert!((profile[0].value.expect_finite() - 19f64.powf(0.5)).abs() < 1e-12);
        assert_eq!(profile[1].bound, BoundKind::Upper);
        // Greedy at a finite scale covers singletons at zero cost.
        assert_eq!(profile[1].value, ContentValue::finite(0.0));
    }

    #[test]
    fn profile_rejects_unsorted_grid() {
        let s = cell_space(1, 0.5);
        let grid = [Delta::finite(0.5).unwrap(), Delta::finite(0.5).unwrap()];
        assert!(matches!(
            measure_profile(&s, &[0, 1], 1.0, &grid),
            Err(Error::DegenerateGrid(_))
        ));
    }

    #[test]
    fn uniform_weights_certify_cantor_content() {
        let s = cell_space(3, 1.0 / 3.0);
        let target: Vec<usize> = (0..8).collect();
        let w = WeightAssignment::uniform(8, 0.125).unwrap();
        let est = mass_lower_bound(&s, &target, ALPHA_STAR, Delta::Infinite, &w).unwrap();
        let v = est.value.expect_finite();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
        let exact = exact_content(&s, &target, ALPHA_STAR, Delta::Infinite).unwrap();
        assert!(v <= exact.value.expect_finite() + 1e-9);
    }

    #[test]
    fn weight_on_a_point_gives_zero_bound() {
        let s = singleton_space(&[0.0, 1.0]);
        let w = WeightAssignment::new(vec![1.0, 0.0]).unwrap();
        let est = mass_lower_bound(&s, &[0, 1], 0.5, Delta::Infinite, &w).unwrap();
        assert_eq!(est.value, ContentValue::finite(0.0));
    }

    #[test]
    fn weight_scaling_behavior() {
        let s = cell_space(2, 1.0 / 3.0);
        let target: Vec<usize> = (0..4).collect();
        let w1 = WeightAssignment::uniform(4, 0.25).unwrap();
        let w2 = WeightAssignment::uniform(4, 0.125).unwrap();
        // With the tightest constant computed from the weights, both the
        // mass and the constant scale, so the bound is invariant.
        let b1 = mass_lower_bound(&s, &target, ALPHA_STAR, Delta::Infinite, &w1)
            .unwrap()
            .value
            .expect_finite();
        let b2 = mass_lower_bound(&s, &target, ALPHA_STAR, Delta::Infinite, &w2)
            .unwrap()
            .value
            .expect_finite();
        assert!((b1 - b2).abs() < 1e-12);
        // With the premise constant held fixed, halving the weights
        // halves the certified bound.
        let c1 =
            mass_lower_bound_with_constant(&s, &target, ALPHA_STAR, Delta::Infinite, &w1, 1.0, 16)
                .unwrap()
                .value
                .expect_finite();
        let c2 =
            mass_lower_bound_with_constant(&s, &target, ALPHA_STAR, Delta::Infinite, &w2, 1.0, 16)
                .unwrap()
                .value
                .expect_finite();
        assert!((c1 - 2.0 * c2).abs() < 1e-12);
    }

    #[test]
    fn explicit_constant_premise_is_validated() {
        let s = cell_space(2, 1.0 / 3.0);
        let target: Vec<usize> = (0..4).collect();
        let w = WeightAssignment::uniform(4, 0.25).unwrap();
        // c = 0.5 is too small: the full block carries mass 1 > 0.5 * 1.
        assert!(mass_lower_bound_with_constant(
            &s,
            &target,
            ALPHA_STAR,
            Delta::Infinite,
            &w,
            0.5,
            16,
        )
        .is_err());
    }

    #[test]
    fn mass_bound_matches_infinite_content() {
        // Atom too large for delta, carrying weight: content is infinite
        // and so is the certified lower bound.
        let s = cell_space(1, 0.5);
        let w = WeightAssignment::uniform(2, 0.5).unwrap();
        let est = mass_lower_bound(&s, &[0, 1], 1.0, Delta::finite(0.4).unwrap(), &w).unwrap();
        assert_eq!(est.value, ContentValue::Infinite);
    }

    #[test]
    fn rejects_negative_weights() {
        assert!(matches!(
            WeightAssignment::new(vec![0.5, -0.1]),
            Err(Error::NegativeWeight { atom: 1, .. })
        ));
    }
}
