//! File formats: JSON space inputs and CSV paths/profiles.
//!
//! Space files are JSON objects distinguished by their fields:
//! `{"points": [[x, y, ...], ...]}` for Euclidean clouds,
//! `{"dist": [[...], ...]}` for explicit tables,
//! `{"atom_diam": ..., "sup_dist": ..., "inf_dist": ..., "provenance": ...}`
//! for atomic presentations, and `{"intervals": [[a, b], ...]}` for
//! interval sets. Paths are CSV rows `t,x1,x2,...` with no header.

use serde::Deserialize;

use crate::atomic::AtomicSpace;
use crate::curves::SampledPath;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::metric::PointSpace;
use crate::slicing::SliceProfile;
use crate::transforms::ProfilePoint;

/// Any of the space input formats.
#[derive(Debug, Clone)]
pub enum LoadedSpace {
    Points(PointSpace),
    Atomic(AtomicSpace),
    Intervals(IntervalSet),
}

#[derive(Deserialize)]
struct SpaceFile {
    points: Option<Vec<Vec<f64>>>,
    dist: Option<Vec<Vec<f64>>>,
    atom_diam: Option<Vec<f64>>,
    sup_dist: Option<Vec<Vec<f64>>>,
    inf_dist: Option<Vec<Vec<f64>>>,
    provenance: Option<crate::atomic::Provenance>,
    intervals: Option<Vec<(f64, f64)>>,
}

/// Parse a space file, dispatching on which fields are present.
pub fn load_space_json(text: &str) -> Result<LoadedSpace> {
    let file: SpaceFile =
        serde_json::from_str(text).map_err(|e| Error::BadParams(format!("json: {e}")))?;
    if let Some(coords) = file.points {
        return Ok(LoadedSpace::Points(PointSpace::from_coords(coords)?));
    }
    if let Some(dist) = file.dist {
        return Ok(LoadedSpace::Points(PointSpace::from_table(dist)?));
    }
    if let Some(atom_diam) = file.atom_diam {
        let sup = file
            .sup_dist
            .ok_or_else(|| Error::BadParams("atomic space needs sup_dist".into()))?;
        let inf = file
            .inf_dist
            .ok_or_else(|| Error::BadParams("atomic space needs inf_dist".into()))?;
        let provenance = file.provenance.unwrap_or(crate::atomic::Provenance::Custom);
        return Ok(LoadedSpace::Atomic(AtomicSpace::new(
            atom_diam, sup, inf, provenance,
        )?));
    }
    if let Some(pairs) = file.intervals {
        return Ok(LoadedSpace::Intervals(IntervalSet::new(&pairs)?));
    }
    Err(Error::BadParams(
        "space file needs one of: points, dist, atom_diam/sup_dist/inf_dist, intervals".into(),
    ))
}

/// Serialize a coordinate path as CSV rows `t,x1,x2,...`.
pub fn path_to_csv(path: &SampledPath) -> Result<String> {
    let coords = path
        .coords()
        .ok_or_else(|| Error::BadParams("only coordinate paths have a CSV form".into()))?;
    let mut out = String::new();
    for (t, row) in path.params().iter().zip(coords) {
        out.push_str(&format!("{t}"));
        for c in row {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parse CSV rows `t,x1,x2,...` into a coordinate path.
pub fn path_from_csv(text: &str) -> Result<SampledPath> {
    let mut params = Vec::new();
    let mut coords = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| Error::BadParams(format!("line {}: {e}", lineno + 1)))
        });
        let t = fields
            .next()
            .ok_or_else(|| Error::BadParams(format!("line {}: empty row", lineno + 1)))??;
        let row = fields.collect::<Result<Vec<f64>>>()?;
        if row.is_empty() {
            return Err(Error::BadParams(format!(
                "line {}: no coordinates",
                lineno + 1
            )));
        }
        params.push(t);
        coords.push(row);
    }
    SampledPath::euclidean(params, coords)
}

/// Parse a map file `{"assignment": [codomain indices]}`; the two spaces
/// travel separately.
pub fn map_assignment_from_json(text: &str) -> Result<Vec<usize>> {
    #[derive(Deserialize)]
    struct MapFile {
        assignment: Vec<usize>,
    }
    let file: MapFile =
        serde_json::from_str(text).map_err(|e| Error::BadParams(format!("json: {e}")))?;
    Ok(file.assignment)
}

/// Serialize a local Lipschitz profile as CSV rows `delta,k`.
pub fn lipschitz_profile_to_csv(profile: &[ProfilePoint]) -> String {
    profile
        .iter()
        .map(|p| format!("{},{}\n", p.delta, p.k))
        .collect()
}

/// Serialize a slice profile as CSV rows `breakpoint,value`, one row per
/// breakpoint with the value of h on the interval to its right (0 after
/// the last breakpoint).
pub fn slice_profile_to_csv(profile: &SliceProfile) -> String {
    let mut out = String::new();
    for (i, b) in profile.breakpoints.iter().enumerate() {
        let v = profile.values.get(i).copied().unwrap_or(0.0);
        out.push_str(&format!("{b},{v}\n"));
    }
    out
}
