//! Metric transforms and mapping analysis: snowflake powers, Lipschitz,
//! Hölder and bilipschitz constants, scale-local Lipschitz profiles, and
//! a flatness classifier.
//!
//! Every constant here is a realized maximum over the finite point pairs
//! of the presentation: exact for the presented space, a lower bound for
//! any underlying continuum.

use serde::{Deserialize, Serialize};

use crate::atomic::AtomicSpace;
use crate::error::{Error, Result};
use crate::metric::{PointSpace, METRIC_TOL};

/// A pointwise mapping between two finite spaces: `assignment[x]` is the
/// codomain point that domain point `x` maps to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricMap {
    pub domain: PointSpace,
    pub codomain: PointSpace,
    pub assignment: Vec<usize>,
}

impl MetricMap {
    pub fn new(domain: PointSpace, codomain: PointSpace, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != domain.len() {
            return Err(Error::BadParams(format!(
                "assignment covers {} of {} domain points",
                assignment.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::BadParams(format!(
                "assignment target {bad} out of range"
            )));
        }
        Ok(MetricMap {
            domain,
            codomain,
            assignment,
        })
    }

    /// The identity on a space.
    pub fn identity(space: PointSpace) -> Self {
        let assignment = (0..space.len()).collect();
        MetricMap {
            domain: space.clone(),
            codomain: space,
            assignment,
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.domain.len();
        (0..n).flat_map(move |x| {
            ((x + 1)..n).map(move |y| {
                let d1 = self.domain.dist(x, y);
                let d2 = self.codomain.dist(self.assignment[x], self.assignment[y]);
                (d1, d2)
            })
        })
    }
}

/// Raise every distance of a point space to the power `t`.
///
/// `t` in (0, 1] always yields a metric; `t > 1` is allowed only when the
/// input validates as ultrametric, in which case the power stays
/// ultrametric for every positive exponent.
pub fn snowflake(space: &PointSpace, t: f64) -> Result<PointSpace> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidExponent(t));
    }
    if t > 1.0 && !space.validate()?.is_ultrametric {
        return Err(Error::InvalidExponent(t));
    }
    let table = space
        .table()
        .iter()
        .map(|row| row.iter().map(|d| d.powf(t)).collect())
        .collect();
    PointSpace::from_table(table)
}

/// Snowflake an atomic presentation: every diameter and distance entry is
/// raised to the power `t`.
///
/// For `t > 1` the presentation must look ultrametric: inf and sup
/// distances agree off the diagonal, the off-diagonal table satisfies the
/// ultrametric triangle inequality, and no atom is wider than its
/// distance to any other atom. Pointwise powers then preserve all of the
/// presentation's ordering relations.
pub fn snowflake_atomic(space: &AtomicSpace, t: f64) -> Result<AtomicSpace> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidExponent(t));
    }
    if t > 1.0 {
        let n = space.len();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (lo, hi) = (space.inf_dist[i][j], space.sup_dist[i][j]);
                if (hi - lo).abs() > METRIC_TOL * hi.max(1.0)
                    || space.atom_diam[i] > hi * (1.0 + METRIC_TOL)
                {
                    return Err(Error::InvalidExponent(t));
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let bound = space.sup_dist[i][k].max(space.sup_dist[k][j]);
                    if hi > bound * (1.0 + METRIC_TOL) {
                        return Err(Error::InvalidExponent(t));
                    }
                }
            }
        }
    }
    Ok(space.powered(t))
}

/// Smallest k with `d2(f x, f y) <= k d1(x, y)` on all pairs; 0 exactly
/// for constant maps (including maps with fewer than two domain points).
pub fn lipschitz_constant(map: &MetricMap) -> f64 {
    map.pairs().fold(0.0, |k, (d1, d2)| k.max(d2 / d1))
}

/// Smallest k with `d2(f x, f y) <= k d1(x, y)^a` on all pairs.
pub fn holder_constant(map: &MetricMap, a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::InvalidExponent(a));
    }
    Ok(map.pairs().fold(0.0, |k, (d1, d2)| k.max(d2 / d1.powf(a))))
}

/// Smallest k >= 1 with `k^-1 d1 <= d2(f, f) <= k d1` on all pairs; fails
/// when the map collapses two distinct points.
pub fn bilipschitz_constant(map: &MetricMap) -> Result<f64> {
    let n = map.domain.len();
    for x in 0..n {
        for y in (x + 1)..n {
            if map.codomain.dist(map.assignment[x], map.assignment[y]) == 0.0 {
                return Err(Error::NotInjective(x, y));
            }
        }
    }
    Ok(map
        .pairs()
        .fold(1.0, |k, (d1, d2)| k.max(d2 / d1).max(d1 / d2)))
}

/// One point of a scale-local Lipschitz profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub delta: f64,
    /// Max distortion ratio over pairs with `d1(x, y) < delta`; 0 when no
    /// pair is that close (see `pair_count`).
    pub k: f64,
    pub pair_count: usize,
}

/// `k(delta)` = max ratio over pairs closer than `delta`, per grid point.
/// The profile is nonincreasing as delta decreases; scales with no pairs
/// report k = 0 and a zero pair count.
pub fn local_lipschitz_profile(map: &MetricMap, delta_grid: &[f64]) -> Result<Vec<ProfilePoint>> {
    if delta_grid.is_empty() {
        return Err(Error::DegenerateGrid("empty delta grid".into()));
    }
    for &d in delta_grid {
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::DegenerateGrid(format!("non-positive scale {d}")));
        }
    }
    for w in delta_grid.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::DegenerateGrid(
                "scales must be strictly decreasing".into(),
            ));
        }
    }
    Ok(delta_grid
        .iter()
        .map(|&delta| {
            let mut k = 0.0_f64;
            let mut pair_count = 0;
            for (d1, d2) in map.pairs() {
                if d1 < delta {
                    pair_count += 1;
                    k = k.max(d2 / d1);
                }
            }
            ProfilePoint {
                delta,
                k,
                pair_count,
            }
        })
        .collect())
}

/// Flatness classification of a local Lipschitz profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flatness {
    UniformlyLocallyFlat,
    NotFlat,
    Inconclusive,
}

/// Thresholds of the flatness heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatnessConfig {
    /// Flat when the tail drops below this fraction of k at the widest scale.
    pub flat_fraction: f64,
    /// Not flat when the tail stays above this fraction.
    pub stable_fraction: f64,
    /// Minimum number of pair-carrying scales for a verdict.
    pub min_scales: usize,
}

impl Default for FlatnessConfig {
    fn default() -> Self {
        FlatnessConfig {
            flat_fraction: 0.1,
            stable_fraction: 0.5,
            min_scales: 3,
        }
    }
}

/// Classify a profile as uniformly locally flat, not flat, or
/// inconclusive. A finite-sample heuristic, never a theorem: it looks at
/// whether the tail of k(delta) has decayed below a fraction of its value
/// at the widest pair-carrying scale.
pub fn classify_flatness(profile: &[ProfilePoint], config: &FlatnessConfig) -> Result<Flatness> {
    if profile.is_empty() {
        return Err(Error::DegenerateProfile("empty profile".into()));
    }
    let carrying: Vec<&ProfilePoint> = profile.iter().filter(|p| p.pair_count > 0).collect();
    if carrying.len() < config.min_scales {
        return Ok(Flatness::Inconclusive);
    }
    let k_first = carrying[0].k;
    let k_last = carrying[carrying.len() - 1].k;
    if k_first == 0.0 {
        // Identically zero on every carried scale: a constant map.
        return Ok(Flatness::UniformlyLocallyFlat);
    }
    if k_last <= config.flat_fraction * k_first {
        Ok(Flatness::UniformlyLocallyFlat)
    } else if k_last >= config.stable_fraction * k_first {
        Ok(Flatness::NotFlat)
    } else {
        Ok(Flatness::Inconclusive)
    }
}

/// Distinct codomain atoms hit by a target under the map, in increasing
/// order; the image target for pushforward content comparisons.
pub fn image_target(map: &MetricMap, target: &[usize]) -> Result<Vec<usize>> {
    let mut image: Vec<usize> = target
        .iter()
        .map(|&x| {
            map.assignment
                .get(x)
                .copied()
                .ok_or_else(|| Error::BadParams(format!("point {x} outside the domain")))
        })
        .collect::<Result<_>>()?;
    image.sort_unstable();
    image.dedup();
    Ok(image)
}
