//! Box-counting dimension estimation on point clouds: farthest-point
//! nets at a grid of scales, then a least-squares fit of log N(delta)
//! against log(1/delta).
//!
//! The fitted slope upper-bounds the Hausdorff dimension of the
//! underlying set in general, so it is reported as an estimate, never as
//! the dimension itself.

use serde::{Deserialize, Serialize};

use crate::atomic::AtomicSpace;
use crate::error::{Error, Result};

/// Per-scale diagnostics of a dimension fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleDiagnostics {
    pub delta: f64,
    /// Net size: blocks of diameter < delta needed to cover the target.
    pub count: usize,
    pub log_inv_delta: f64,
    pub log_count: f64,
    /// Vertical deviation of this scale from the fitted line.
    pub residual: f64,
}

/// A dimension estimate with its fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub alpha_hat: f64,
    pub scales: Vec<ScaleDiagnostics>,
    /// True when the net count never changed across scales; the slope is
    /// then 0 by saturation, not by geometry.
    pub saturated: bool,
    pub bracket: Option<(f64, f64)>,
    pub within_bracket: Option<bool>,
}

/// Farthest-point net: centers are added greedily until every target
/// atom is within `radius` of one of them. Deterministic: the first
/// target atom seeds the net and argmax ties break toward lower indices.
pub fn farthest_point_net(space: &AtomicSpace, target: &[usize], radius: f64) -> Vec<usize> {
    if target.is_empty() {
        return Vec::new();
    }
    // An atom covers itself regardless of its own diameter, so the loop
    // always terminates even on presentations with fat atoms.
    let to_center = |p: usize, c: usize| if p == c { 0.0 } else { space.sup_dist[p][c] };
    let mut centers = vec![target[0]];
    let mut dist: Vec<f64> = target.iter().map(|&p| to_center(p, target[0])).collect();
    loop {
        let (far_pos, &far_dist) = dist
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(j.cmp(i)))
            .expect("target is nonempty");
        if far_dist <= radius {
            return centers;
        }
        let new_center = target[far_pos];
        centers.push(new_center);
        for (pos, &p) in target.iter().enumerate() {
            dist[pos] = dist[pos].min(to_center(p, new_center));
        }
    }
}

/// Estimate the scaling exponent of a point cloud.
///
/// At each scale, a farthest-point net with covering radius `delta / 3`
/// induces a covering by closed balls of diameter at most `2 delta / 3 <
/// delta`; the fitted slope of `log N(delta)` against `log(1/delta)` is
/// the estimate.
pub fn dimension_estimate(
    space: &AtomicSpace,
    target: &[usize],
    scale_grid: &[f64],
    bracket: Option<(f64, f64)>,
) -> Result<DimensionEstimate> {
    space.check_target(target)?;
    if target.len() < 2 {
        return Err(Error::TooFewPoints(target.len()));
    }
    if scale_grid.len() < 3 {
        return Err(Error::DegenerateGrid(format!(
            "need at least 3 scales, got {}",
            scale_grid.len()
        )));
    }
    for &d in scale_grid {
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::DegenerateGrid(format!("non-positive scale {d}")));
        }
    }
    for w in scale_grid.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::DegenerateGrid(
                "scales must be strictly decreasing".into(),
            ));
        }
    }

    let counts: Vec<usize> = scale_grid
        .iter()
        .map(|&delta| farthest_point_net(space, target, delta / 3.0).len())
        .collect();

    let xs: Vec<f64> = scale_grid.iter().map(|&d| (1.0 / d).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;

    let scales = scale_grid
        .iter()
        .zip(&counts)
        .zip(xs.iter().zip(&ys))
        .map(|((&delta, &count), (&x, &y))| ScaleDiagnostics {
            delta,
            count,
            log_inv_delta: x,
            log_count: y,
            residual: y - (slope * x + intercept),
        })
        .collect();

    let saturated = counts.windows(2).all(|w| w[0] == w[1]);
    let within_bracket = bracket.map(|(lo, hi)| lo <= slope && slope <= hi);
    Ok(DimensionEstimate {
        alpha_hat: slope,
        scales,
        saturated,
        bracket,
        within_bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::PointSpace;

    fn cloud(coords: Vec<f64>) -> AtomicSpace {
        AtomicSpace::from_point_space(
            &PointSpace::from_coords(coords.into_iter().map(|x| vec![x]).collect()).unwrap(),
        )
    }

    #[test]
    fn net_covers_every_point() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let s = cloud(xs);
        let target: Vec<usize> = (0..100).collect();
        let radius = 0.05;
        let net = farthest_point_net(&s, &target, radius);
        for &p in &target {
            let d = net
                .iter()
                .map(|&c| s.sup_dist[p][c])
                .fold(f64::INFINITY, f64::min);
            assert!(d <= radius);
        }
        // Centers are strictly more than radius apart.
        for (i, &a) in net.iter().enumerate() {
            for &b in &net[i + 1..] {
                assert!(s.sup_dist[a][b] > radius);
            }
        }
    }

    /// Optimal 1D covering count: sweep left to right, centering each
    /// ball at the first uncovered point plus the radius.
    fn optimal_line_cover(sorted: &[f64], radius: f64) -> usize {
        let mut count = 0;
        let mut covered_to = f64::NEG_INFINITY;
        for &x in sorted {
            if x > covered_to {
                count += 1;
                covered_to = x + 2.0 * radius;
            }
        }
        count
    }

    #[test]
    fn net_size_sandwiched_by_optimal_cover() {
        // Covering count at radius r <= net size <= packing bound, which
        // is at most the optimal covering count at radius r/2.
        let xs: Vec<f64> = (0..500).map(|i| (i as f64 / 499.0).powf(1.3)).collect();
        let s = cloud(xs.clone());
        let target: Vec<usize> = (0..500).collect();
        for radius in [0.2, 0.1, 0.05, 0.02] {
            let net = farthest_point_net(&s, &target, radius).len();
            let opt = optimal_line_cover(&xs, radius);
            let opt_half = optimal_line_cover(&xs, radius / 2.0);
            assert!(
                opt <= net,
                "net {net} beat the optimal cover {opt} at {radius}"
            );
            assert!(
                net <= opt_half,
                "net {net} above packing bound {opt_half} at {radius}"
            );
        }
    }

    #[test]
    fn uniform_cloud_has_slope_near_one() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let s = cloud(xs);
        let target: Vec<usize> = (0..1000).collect();
        let grid: Vec<f64> = (2..=7).map(|k| 0.5f64.powi(k)).collect();
        let est = dimension_estimate(&s, &target, &grid, Some((0.9, 1.1))).unwrap();
        assert!(
            (est.alpha_hat - 1.0).abs() < 0.05,
            "slope {}",
            est.alpha_hat
        );
        assert_eq!(est.within_bracket, Some(true));
        assert!(!est.saturated);
    }

    #[test]
    fn two_points_saturate_to_slope_zero() {
        let s = cloud(vec![0.0, 1.0]);
        let grid = [0.3, 0.2, 0.1];
        let est = dimension_estimate(&s, &[0, 1], &grid, None).unwrap();
        assert_eq!(est.alpha_hat, 0.0);
        assert!(est.saturated);
        assert!(est.scales.iter().all(|d| d.count == 2));
    }

    #[test]
    fn grid_validation() {
        let s = cloud(vec![0.0, 1.0, 2.0]);
        let t = vec![0, 1, 2];
        assert!(matches!(
            dimension_estimate(&s, &t, &[0.5, 0.25], None),
            Err(Error::DegenerateGrid(_))
        ));
        assert!(matches!(
            dimension_estimate(&s, &t, &[0.5, 0.25, 0.25], None),
            Err(Error::DegenerateGrid(_))
        ));
        assert!(matches!(
            dimension_estimate(&s, &t, &[0.5, 0.25, -0.1], None),
            Err(Error::DegenerateGrid(_))
        ));
        assert!(matches!(
            dimension_estimate(&s, &[0], &[0.5, 0.25, 0.1], None),
            Err(Error::TooFewPoints(1))
        ));
    }
}
