//! Finite metric spaces: distance tables, axiom validation, balls,
//! diameters, distance-to-set, and the distance-quotient separation
//! construction.
//!
//! A space is a fully materialized symmetric distance table; Euclidean
//! clouds compute their table on construction and keep the coordinates.
//! Triangle-inequality failures are *reported* by [`validate_metric`],
//! not rejected at construction, so quasimetric tables are representable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by the metric-axiom checks. The quasimetric
/// constant itself is reported exactly, with no tolerance applied.
pub const METRIC_TOL: f64 = 1e-9;

/// An ordered list of point (or atom) indices. Indices must be unique
/// and in range for the space they refer to; operations validate this.
pub type SubsetRef = Vec<usize>;

pub(crate) fn check_subset(subset: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in subset {
        if i >= len {
            return Err(Error::BadParams(format!(
                "index {i} out of range (len {len})"
            )));
        }
        if seen[i] {
            return Err(Error::BadParams(format!("duplicate index {i} in subset")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// A finite metric space given by its pairwise distance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSpace")]
pub struct PointSpace {
    dist: Vec<Vec<f64>>,
    /// Euclidean coordinates, retained when the space was built from a cloud.
    coords: Option<Vec<Vec<f64>>>,
}

/// Wire form of a point space; validated on conversion.
#[derive(Deserialize)]
struct RawPointSpace {
    dist: Vec<Vec<f64>>,
    #[serde(default)]
    coords: Option<Vec<Vec<f64>>>,
}

impl TryFrom<RawPointSpace> for PointSpace {
    type Error = Error;

    fn try_from(raw: RawPointSpace) -> Result<Self> {
        let mut space = PointSpace::from_table(raw.dist)?;
        if let Some(coords) = raw.coords {
            if coords.len() != space.len() {
                return Err(Error::BadParams("coords do not match the table".into()));
            }
            space.coords = Some(coords);
        }
        Ok(space)
    }
}

impl PointSpace {
    /// Build from an explicit table. The table must be square, symmetric
    /// within tolerance, nonnegative, zero exactly on the diagonal and
    /// positive off it. The triangle inequality is *not* required here.
    pub fn from_table(dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = dist.len();
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadParams(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::NegativeEntry(i, j));
                }
            }
        }
        for (i, row) in dist.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(Error::BadParams(format!("nonzero diagonal at {i}")));
            }
            for (j, other) in dist.iter().enumerate().skip(i + 1) {
                let (a, b) = (row[j], other[i]);
                if (a - b).abs() > METRIC_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::NonSymmetric(i, j));
                }
                if a == 0.0 {
                    return Err(Error::ZeroOffDiagonal(i, j));
                }
            }
        }
        Ok(PointSpace { dist, coords: None })
    }

    /// Build a Euclidean cloud; the distance table is derived from the
    /// coordinates. Duplicate points are rejected (they would violate
    /// `d(x, y) > 0` for distinct points).
    pub fn from_coords(coords: Vec<Vec<f64>>) -> Result<Self> {
        let n = coords.len();
        let dim = coords.first().map_or(0, Vec::len);
        for (i, p) in coords.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::BadParams(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::BadParams(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&coords[i], &coords[j]);
                if d == 0.0 {
                    return Err(Error::ZeroOffDiagonal(i, j));
                }
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        Ok(PointSpace {
            dist,
            coords: Some(coords),
        })
    }

    /// Internal constructor for tables known to be valid by construction
    /// (e.g. materialized sequence spaces, snowflaked tables).
    pub(crate) fn from_table_unchecked(dist: Vec<Vec<f64>>) -> Self {
        PointSpace { dist, coords: None }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist[x][y]
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Run the metric-axiom report on this space's table.
    pub fn validate(&self) -> Result<MetricReport> {
        validate_metric(&self.dist)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Outcome of the metric-axiom checks on a distance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// Triangle inequality holds on every triple (within tolerance).
    pub is_metric: bool,
    /// The stronger `d(x,z) <= max(d(x,y), d(y,z))` holds on every triple.
    pub is_ultrametric: bool,
    /// Smallest C >= 1 with `d(x,z) <= C (d(x,y) + d(y,z))` over all
    /// ordered triples, reported exactly as the maximal ratio.
    pub quasimetric_constant: f64,
    /// A triple attaining the quasimetric constant, when nontrivial.
    pub worst_triple: Option<(usize, usize, usize)>,
}

/// Validate the metric axioms on a square distance table and report the
/// exact quasimetric constant together with an ultrametric flag.
pub fn validate_metric(dist: &[Vec<f64>]) -> Result<MetricReport> {
    let n = dist.len();
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::BadParams(format!(
                "row {i} has length {}, expected {n}",
                row.len()
            )));
        }
        for (j, &d) in row.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::NegativeEntry(i, j));
            }
        }
    }
    for (i, row) in dist.iter().enumerate() {
        if row[i] != 0.0 {
            return Err(Error::BadParams(format!("nonzero diagonal at {i}")));
        }
        for (j, other) in dist.iter().enumerate().skip(i + 1) {
            let (a, b) = (row[j], other[i]);
            if (a - b).abs() > METRIC_TOL * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::NonSymmetric(i, j));
            }
            if a == 0.0 || b == 0.0 {
                return Err(Error::ZeroOffDiagonal(i, j));
            }
        }
    }

    let mut constant = 1.0_f64;
    let mut worst = None;
    let mut ultra = true;
    for x in 0..n {
        for z in 0..n {
            if x == z {
                continue;
            }
            for y in 0..n {
                if y == x || y == z {
                    continue;
                }
                let lhs = dist[x][z];
                let rhs = dist[x][y] + dist[y][z];
                let ratio = lhs / rhs;
                if ratio > constant {
                    constant = ratio;
                    worst = Some((x, y, z));
                }
                if lhs > dist[x][y].max(dist[y][z]) * (1.0 + METRIC_TOL) {
                    ultra = false;
                }
            }
        }
    }
    let is_metric = constant <= 1.0 + METRIC_TOL;
    Ok(MetricReport {
        is_metric,
        is_ultrametric: ultra && is_metric,
        quasimetric_constant: constant,
        worst_triple: worst,
    })
}

/// Max pairwise distance over a nonempty subset; 0 for singletons.
pub fn diameter(space: &PointSpace, subset: &[usize]) -> Result<f64> {
    check_subset(subset, space.len())?;
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut d = 0.0_f64;
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            d = d.max(space.dist(i, j));
        }
    }
    Ok(d)
}

/// `dist(x, A)`: minimum distance from `x` to a nonempty subset.
pub fn dist_to_set(space: &PointSpace, x: usize, a: &[usize]) -> Result<f64> {
    check_subset(a, space.len())?;
    if x >= space.len() {
        return Err(Error::BadParams(format!("point {x} out of range")));
    }
    a.iter()
        .map(|&p| space.dist(x, p))
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |m| m.min(d)))
        })
        .ok_or(Error::EmptySubset)
}

/// The quotient `phi(x) = dist(x,A) / (dist(x,A) + dist(x,B))` for every
/// point of the space: 0 on A, 1 on B, values in [0, 1]. A and B must be
/// nonempty and disjoint.
pub fn separation_function(space: &PointSpace, a: &[usize], b: &[usize]) -> Result<Vec<f64>> {
    check_subset(a, space.len())?;
    check_subset(b, space.len())?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&shared) = a.iter().find(|i| b.contains(i)) {
        return Err(Error::OverlappingSets(shared));
    }
    (0..space.len())
        .map(|x| {
            let da = dist_to_set(space, x, a)?;
            let db = dist_to_set(space, x, b)?;
            if da + db == 0.0 {
                // Unreachable once disjointness is checked: in a finite
                // space dist(x, S) = 0 iff x is in S.
                return Err(Error::OverlappingSets(x));
            }
            Ok(da / (da + db))
        })
        .collect()
}

/// Separate disjoint nonempty A and B by a threshold on phi.
///
/// Returns `(U, r)` where `r` is the midpoint of the widest gap between
/// consecutive attained phi-values (ties broken toward the smaller r) and
/// `U = {x : phi(x) < r}`. By construction no point attains phi = r, so
/// A is inside U, B is outside, and the level set at r is empty.
pub fn clopen_separation(space: &PointSpace, a: &[usize], b: &[usize]) -> Result<(SubsetRef, f64)> {
    let phi = separation_function(space, a, b)?;
    let mut attained: Vec<f64> = phi.clone();
    attained.sort_by(|x, y| x.partial_cmp(y).unwrap());
    attained.dedup();
    // A contributes 0 and B contributes 1, so there are at least two
    // attained values and at least one gap.
    let mut best_width = f64::NEG_INFINITY;
    let mut r = 0.5;
    for w in attained.windows(2) {
        let width = w[1] - w[0];
        if width > best_width {
            best_width = width;
            r = 0.5 * (w[0] + w[1]);
        }
    }
    let u: SubsetRef = (0..space.len()).filter(|&x| phi[x] < r).collect();
    Ok((u, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Open,
    Closed,
}

/// Points within `radius` of `center`: strict threshold for open balls,
/// non-strict for closed balls.
pub fn ball(space: &PointSpace, center: usize, radius: f64, kind: BallKind) -> Result<SubsetRef> {
    if center >= space.len() {
        return Err(Error::BadParams(format!("center {center} out of range")));
    }
    Ok((0..space.len())
        .filter(|&q| {
            let d = space.dist(center, q);
            match kind {
                BallKind::Open => d < radius,
                BallKind::Closed => d <= radius,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line_space(coords: &[f64]) -> PointSpace {
        PointSpace::from_coords(coords.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn collinear_points_are_metric_not_ultrametric() {
        let s = line_space(&[0.0, 1.0, 2.0]);
        let r = s.validate().unwrap();
        assert!(r.is_metric);
        assert!(!r.is_ultrametric);
        assert_eq!(r.quasimetric_constant, 1.0);
    }

    #[test]
    fn quasimetric_table_reports_constant_two() {
        // d(0,2) = 4 while d(0,1) = d(1,2) = 1.
        let t = vec![
            vec![0.0, 1.0, 4.0],
            vec![1.0, 0.0, 1.0],
            vec![4.0, 1.0, 0.0],
        ];
        let r = validate_metric(&t).unwrap();
        assert!(!r.is_metric);
        assert!(!r.is_ultrametric);
        assert_eq!(r.quasimetric_constant, 2.0);
        let (x, y, z) = r.worst_triple.unwrap();
        assert_eq!((x.min(z), y, x.max(z)), (0, 1, 2));
    }

    #[test]
    fn rejects_bad_tables() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(
            validate_metric(&asym),
            Err(Error::NonSymmetric(0, 1))
        ));
        let neg = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(
            validate_metric(&neg),
            Err(Error::NegativeEntry(0, 1))
        ));
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(
            validate_metric(&zero),
            Err(Error::ZeroOffDiagonal(0, 1))
        ));
    }

    #[test]
    fn diameter_of_line_and_singleton() {
        let s = line_space(&[0.0, 1.0, 2.0]);
        assert_eq!(diameter(&s, &[0, 1, 2]).unwrap(), 2.0);
        assert_eq!(diameter(&s, &[1]).unwrap(), 0.0);
        assert!(matches!(diameter(&s, &[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn dist_to_set_basics() {
        let s = line_space(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(dist_to_set(&s, 3, &[0]).unwrap(), 3.0);
        assert_eq!(dist_to_set(&s, 2, &[0, 2]).unwrap(), 0.0);
    }

    #[test]
    fn dist_to_set_is_one_lipschitz() {
        let s = line_space(&[0.0, 0.7, 1.9, 3.2, 4.0]);
        let a = vec![1, 3];
        for x in 0..s.len() {
            for y in 0..s.len() {
                let dx = dist_to_set(&s, x, &a).unwrap();
                let dy = dist_to_set(&s, y, &a).unwrap();
                assert!((dx - dy).abs() <= s.dist(x, y) + 1e-12);
            }
        }
    }

    #[test]
    fn separation_function_on_line() {
        let s = line_space(&[0.0, 1.0, 2.0]);
        let phi = separation_function(&s, &[0], &[2]).unwrap();
        assert_eq!(phi, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn separation_rejects_overlap() {
        let s = line_space(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            separation_function(&s, &[0, 1], &[1, 2]),
            Err(Error::OverlappingSets(1))
        ));
    }

    #[test]
    fn clopen_separation_tie_breaks_toward_smaller_r() {
        let s = line_space(&[0.0, 1.0, 2.0]);
        let (u, r) = clopen_separation(&s, &[0], &[2]).unwrap();
        // Attained values {0, 1/2, 1}: both gaps have width 1/2, the tie
        // goes to the smaller midpoint.
        assert_eq!(r, 0.25);
        assert_eq!(u, vec![0]);
    }

    #[test]
    fn clopen_separation_complement_case() {
        let s = line_space(&[0.0, 1.0, 2.0, 3.0]);
        let a = vec![0, 1, 2];
        let b = vec![3];
        let (u, r) = clopen_separation(&s, &a, &b).unwrap();
        assert_eq!(u, a);
        assert!(r > 0.0 && r < 1.0);
    }

    #[test]
    fn balls_respect_strictness() {
        let s = line_space(&[0.0, 1.0, 2.0]);
        assert_eq!(ball(&s, 0, 1.0, BallKind::Open).unwrap(), vec![0]);
        assert_eq!(ball(&s, 0, 1.0, BallKind::Closed).unwrap(), vec![0, 1]);
    }
}
