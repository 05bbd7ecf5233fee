//! Rectifiable-path machinery over sampled paths: partition sums, length,
//! split additivity, arc-length reparameterization, pushforward under
//! maps, and the length-versus-H^1 comparison.
//!
//! A sampled path *is* the path here: for a polyline the supremum over
//! partitions is attained at the full sample partition, so no refinement
//! search is needed. Convergence of samples to an underlying continuous
//! path is the caller's sampling responsibility.

use serde::{Deserialize, Serialize};

use crate::atomic::{AtomicSpace, Provenance};
use crate::content::{exact_content_with_limit, ContentEstimate, DEFAULT_DP_LIMIT, HARD_DP_CAP};
use crate::error::{Error, Result};
use crate::metric::{euclidean, PointSpace};
use crate::transforms::{lipschitz_constant, MetricMap};
use crate::value::Delta;

/// Sample geometry: either explicit Euclidean coordinates or indices into
/// a finite point space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PathPoints {
    Euclidean(Vec<Vec<f64>>),
    Indexed {
        space: PointSpace,
        indices: Vec<usize>,
    },
}

/// An ordered list of (parameter, point) samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampledPath")]
pub struct SampledPath {
    params: Vec<f64>,
    points: PathPoints,
}

/// Wire form of a path; validated on conversion.
#[derive(Deserialize)]
struct RawSampledPath {
    params: Vec<f64>,
    points: PathPoints,
}

impl TryFrom<RawSampledPath> for SampledPath {
    type Error = Error;

    fn try_from(raw: RawSampledPath) -> Result<Self> {
        match raw.points {
            PathPoints::Euclidean(coords) => SampledPath::euclidean(raw.params, coords),
            PathPoints::Indexed { space, indices } => {
                SampledPath::indexed(raw.params, space, indices)
            }
        }
    }
}

impl SampledPath {
    pub fn euclidean(params: Vec<f64>, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() != params.len() {
            return Err(Error::BadParams(format!(
                "{} parameters for {} points",
                params.len(),
                coords.len()
            )));
        }
        let dim = coords.first().map_or(0, Vec::len);
        for (i, p) in coords.iter().enumerate() {
            if p.len() != dim || p.iter().any(|c| !c.is_finite()) {
                return Err(Error::BadParams(format!("bad coordinates at sample {i}")));
            }
        }
        Self::check_params(&params)?;
        Ok(SampledPath {
            params,
            points: PathPoints::Euclidean(coords),
        })
    }

    pub fn indexed(params: Vec<f64>, space: PointSpace, indices: Vec<usize>) -> Result<Self> {
        if indices.len() != params.len() {
            return Err(Error::BadParams(format!(
                "{} parameters for {} indices",
                params.len(),
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= space.len()) {
            return Err(Error::BadParams(format!("index {bad} out of range")));
        }
        Self::check_params(&params)?;
        Ok(SampledPath {
            params,
            points: PathPoints::Indexed { space, indices },
        })
    }

    fn check_params(params: &[f64]) -> Result<()> {
        if params.is_empty() {
            return Err(Error::BadParams("a path needs at least one sample".into()));
        }
        if params.iter().any(|t| !t.is_finite()) {
            return Err(Error::BadParams("non-finite parameter".into()));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadParams(
                "parameters must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &PathPoints {
        &self.points
    }

    /// Distance between two samples.
    pub fn sample_dist(&self, i: usize, j: usize) -> f64 {
        match &self.points {
            PathPoints::Euclidean(coords) => euclidean(&coords[i], &coords[j]),
            PathPoints::Indexed { space, indices } => space.dist(indices[i], indices[j]),
        }
    }

    /// Euclidean rows when the path carries coordinates.
    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        match &self.points {
            PathPoints::Euclidean(coords) => Some(coords),
            PathPoints::Indexed { .. } => None,
        }
    }
}

/// Sum of consecutive distances along a partition of the samples. The
/// partition must be a strictly increasing index list containing the
/// first and last sample.
pub fn partition_sum(path: &SampledPath, partition: &[usize]) -> Result<f64> {
    let n = path.len();
    if partition.first() != Some(&0) || partition.last() != Some(&(n - 1)) {
        return Err(Error::BadPartition(
            "partition must contain the first and last sample".into(),
        ));
    }
    if partition.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadPartition(
            "partition indices must be strictly increasing".into(),
        ));
    }
    if partition.iter().any(|&i| i >= n) {
        return Err(Error::BadPartition("partition index out of range".into()));
    }
    Ok(partition
        .windows(2)
        .map(|w| path.sample_dist(w[0], w[1]))
        .sum())
}

/// Length of the sampled path: the partition sum over the full sample
/// partition, which dominates every coarser one by refinement
/// monotonicity. Zero iff all samples coincide.
pub fn length(path: &SampledPath) -> f64 {
    (1..path.len()).map(|j| path.sample_dist(j - 1, j)).sum()
}

/// Lengths of the two halves at a sample parameter; they regroup the same
/// summands, so they add up to the total exactly.
pub fn split_length(path: &SampledPath, x: f64) -> Result<(f64, f64)> {
    let pos = path
        .params
        .iter()
        .position(|&t| t == x)
        .ok_or(Error::NotASample(x))?;
    let left = (1..=pos).map(|j| path.sample_dist(j - 1, j)).sum();
    let right = ((pos + 1)..path.len())
        .map(|j| path.sample_dist(j - 1, j))
        .sum();
    Ok((left, right))
}

/// Reparameterize by cumulative length: sample j moves to parameter
/// `s_j = length of the path up to j`. Zero-length steps collapse onto
/// one sample (the path is constant there), making the new parameters
/// strictly increasing. The result is 1-Lipschitz in its parameter and
/// has the same length.
pub fn arclength_reparameterize(path: &SampledPath) -> SampledPath {
    let mut keep: Vec<usize> = vec![0];
    let mut s = vec![0.0_f64];
    let mut acc = 0.0;
    for j in 1..path.len() {
        let step = path.sample_dist(j - 1, j);
        acc += step;
        if step > 0.0 {
            keep.push(j);
            s.push(acc);
        }
    }
    let points = match &path.points {
        PathPoints::Euclidean(coords) => {
            PathPoints::Euclidean(keep.iter().map(|&j| coords[j].clone()).collect())
        }
        PathPoints::Indexed { space, indices } => PathPoints::Indexed {
            space: space.clone(),
            indices: keep.iter().map(|&j| indices[j]).collect(),
        },
    };
    SampledPath { params: s, points }
}

/// Result of composing a path with a map, with the Lipschitz length bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedPath {
    pub path: SampledPath,
    pub input_length: f64,
    pub output_length: f64,
    /// The constant used for the bound (global, or scale-local).
    pub k: f64,
    /// `k * input_length`; `None` when a scale-local constant does not
    /// apply because some consecutive step is too long and a sampled path
    /// cannot be refined.
    pub length_bound: Option<f64>,
}

fn compose(map: &MetricMap, path: &SampledPath) -> Result<(SampledPath, f64, f64)> {
    let indices = match &path.points {
        PathPoints::Indexed { space, indices } => {
            if space.table() != map.domain.table() {
                return Err(Error::DomainMismatch(
                    "path space and map domain have different tables".into(),
                ));
            }
            indices.clone()
        }
        PathPoints::Euclidean(_) => {
            return Err(Error::DomainMismatch(
                "composition needs a path indexed into the map domain".into(),
            ))
        }
    };
    let mapped: Vec<usize> = indices.iter().map(|&i| map.assignment[i]).collect();
    let composed = SampledPath::indexed(path.params.clone(), map.codomain.clone(), mapped)?;
    let input_length = length(path);
    let output_length = length(&composed);
    Ok((composed, input_length, output_length))
}

/// Compose with a map and report the global Lipschitz length bound
/// `length(f . p) <= k length(p)`.
pub fn map_path(map: &MetricMap, path: &SampledPath) -> Result<MappedPath> {
    let (composed, input_length, output_length) = compose(map, path)?;
    let k = lipschitz_constant(map);
    Ok(MappedPath {
        path: composed,
        input_length,
        output_length,
        k,
        length_bound: Some(k * input_length),
    })
}

/// Compose with a map using its scale-delta local constant. The bound
/// applies only when every consecutive step of the path is shorter than
/// delta; otherwise the bound is reported as not applicable.
pub fn map_path_at_scale(map: &MetricMap, path: &SampledPath, delta: f64) -> Result<MappedPath> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidDelta(delta));
    }
    let (composed, input_length, output_length) = compose(map, path)?;
    let n = map.domain.len();
    let mut k = 0.0_f64;
    for x in 0..n {
        for y in (x + 1)..n {
            let d1 = map.domain.dist(x, y);
            if d1 < delta {
                k = k.max(map.codomain.dist(map.assignment[x], map.assignment[y]) / d1);
            }
        }
    }
    let applicable = (1..path.len()).all(|j| path.sample_dist(j - 1, j) < delta);
    Ok(MappedPath {
        path: composed,
        input_length,
        output_length,
        k,
        length_bound: applicable.then_some(k * input_length),
    })
}

/// Comparison of a polyline's chord-sum length with the exact content of
/// its segment presentation at alpha = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H1Comparison {
    pub segment_count: usize,
    pub content: ContentEstimate,
    pub length: f64,
    /// Content never exceeds length (up to float tolerance).
    pub content_le_length: bool,
    /// Content equals length within 1e-9; expected for injective
    /// polylines whose segments meet only at shared endpoints.
    pub equal_within_tol: bool,
}

/// Present each consecutive chord of a coordinate path as an atom
/// (diameter = chord length, inf/sup distances from the endpoints) and
/// compare `exact_content(alpha = 1)` with the path length.
pub fn image_h1_check(path: &SampledPath) -> Result<H1Comparison> {
    image_h1_check_with_limit(path, DEFAULT_DP_LIMIT)
}

pub fn image_h1_check_with_limit(path: &SampledPath, limit: usize) -> Result<H1Comparison> {
    let coords = path
        .coords()
        .ok_or_else(|| Error::BadParams("H1 comparison needs a coordinate path".into()))?;
    let limit = limit.min(HARD_DP_CAP);
    // Zero-length chords carry no length and no content; skip them.
    let segments: Vec<(&[f64], &[f64])> = coords
        .windows(2)
        .filter(|w| euclidean(&w[0], &w[1]) > 0.0)
        .map(|w| (w[0].as_slice(), w[1].as_slice()))
        .collect();
    let count = segments.len();
    if count > limit {
        return Err(Error::TooManySegments { count, limit });
    }
    let total = length(path);
    if count == 0 {
        let est = exact_content_with_limit(
            &AtomicSpace::new(vec![], vec![], vec![], Provenance::PointCloud)?,
            &[],
            1.0,
            Delta::Infinite,
            limit,
        )?;
        return Ok(H1Comparison {
            segment_count: 0,
            content: est,
            length: total,
            content_le_length: true,
            equal_within_tol: true,
        });
    }

    let diam: Vec<f64> = segments.iter().map(|(a, b)| euclidean(a, b)).collect();
    let mut sup = vec![vec![0.0; count]; count];
    let mut inf = vec![vec![0.0; count]; count];
    for i in 0..count {
        sup[i][i] = diam[i];
        for j in (i + 1)..count {
            let ends = [
                euclidean(segments[i].0, segments[j].0),
                euclidean(segments[i].0, segments[j].1),
                euclidean(segments[i].1, segments[j].0),
                euclidean(segments[i].1, segments[j].1),
            ];
            let s = ends.iter().fold(0.0_f64, |m, &d| m.max(d));
            let d = ends.iter().fold(f64::INFINITY, |m, &e| m.min(e));
            sup[i][j] = s;
            sup[j][i] = s;
            inf[i][j] = d;
            inf[j][i] = d;
        }
    }
    let space = AtomicSpace::new(diam, sup, inf, Provenance::Custom)?;
    let target: Vec<usize> = (0..count).collect();
    let est = exact_content_with_limit(&space, &target, 1.0, Delta::Infinite, limit)?;
    let value = est.value.expect_finite();
    Ok(H1Comparison {
        segment_count: count,
        content: est,
        length: total,
        content_le_length: value <= total + 1e-9,
        equal_within_tol: (value - total).abs() <= 1e-9,
    })
}
