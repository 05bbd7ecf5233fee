//! Randomized invariant suites over small instances, cross-checked
//! against the exact covering DP. Each suite is a pure function of its
//! seed; failing cases are serialized into the report for replay.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;

use crate::atomic::{AtomicSpace, Provenance};
use crate::content::{
    exact_content, greedy_content, mass_lower_bound, measure_profile, WeightAssignment, Witness,
};
use crate::curves::{
    arclength_reparameterize, length, map_path, partition_sum, split_length, SampledPath,
};
use crate::error::{Error, Result};
use crate::intervals::{ClosedInterval, IntervalSet};
use crate::metric::{clopen_separation, dist_to_set, separation_function, PointSpace};
use crate::seqspace::{materialize, SequenceSpaceSpec};
use crate::slicing::{build_slice_profile, slice_content_bound, slice_profile_sweep};
use crate::transforms::{
    bilipschitz_constant, holder_constant, image_target, lipschitz_constant, snowflake,
    snowflake_atomic, MetricMap,
};
use crate::value::{ContentValue, Delta};

/// One violated law, with the instance that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub law: String,
    pub detail: String,
    pub instance: serde_json::Value,
}

/// Outcome of one suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    /// How many times each law was checked.
    pub law_counts: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run a suite by name: `content-laws`, `transforms`, `curves`,
/// `slicing`, or `separation`.
pub fn run_suite(name: &str, seed: u64, cases: usize) -> Result<SuiteReport> {
    match name {
        "content-laws" => Ok(content_laws(seed, cases)),
        "transforms" => Ok(transforms_suite(seed, cases)),
        "curves" => Ok(curves_suite(seed, cases)),
        "slicing" => Ok(slicing_suite(seed, cases)),
        "separation" => Ok(separation_suite(seed, cases)),
        other => Err(Error::BadParams(format!("unknown suite {other}"))),
    }
}

pub const SUITES: &[&str] = &[
    "content-laws",
    "transforms",
    "curves",
    "slicing",
    "separation",
];

fn tol(a: f64, b: f64) -> f64 {
    1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// `a <= b` in the extended sense, with float slack on finite values.
fn le(a: ContentValue, b: ContentValue) -> bool {
    match (a, b) {
        (ContentValue::Finite(x), ContentValue::Finite(y)) => x <= y + tol(x, y),
        (_, ContentValue::Infinite) => true,
        (ContentValue::Infinite, ContentValue::Finite(_)) => false,
    }
}

/// `a == b` in the extended sense.
fn eq(a: ContentValue, b: ContentValue) -> bool {
    match (a, b) {
        (ContentValue::Finite(x), ContentValue::Finite(y)) => (x - y).abs() <= tol(x, y),
        (ContentValue::Infinite, ContentValue::Infinite) => true,
        _ => false,
    }
}

struct Recorder {
    suite: &'static str,
    seed: u64,
    cases: usize,
    checks: usize,
    law_counts: BTreeMap<String, usize>,
    failures: Vec<Failure>,
}

impl Recorder {
    fn new(suite: &'static str, seed: u64, cases: usize) -> Self {
        Recorder {
            suite,
            seed,
            cases,
            checks: 0,
            law_counts: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn check(
        &mut self,
        case: usize,
        law: &str,
        ok: bool,
        detail: String,
        instance: &serde_json::Value,
    ) {
        self.checks += 1;
        *self.law_counts.entry(law.to_string()).or_insert(0) += 1;
        if !ok {
            self.failures.push(Failure {
                case,
                law: law.to_string(),
                detail,
                instance: instance.clone(),
            });
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite.to_string(),
            seed: self.seed,
            cases: self.cases,
            checks: self.checks,
            law_counts: self.law_counts,
            failures: self.failures,
        }
    }
}

/// A random atomic presentation of intervals on the line, with the
/// interval data kept for refinement checks.
fn rand_interval_atoms(rng: &mut ChaCha8Rng, count: usize, offset: f64) -> Vec<ClosedInterval> {
    (0..count)
        .map(|_| {
            let lo = offset + rng.gen::<f64>() * 2.0;
            let width = rng.gen::<f64>() * 0.8;
            ClosedInterval::new(lo, lo + width).expect("generated interval is ordered")
        })
        .collect()
}

fn interval_atoms_to_space(atoms: &[ClosedInterval]) -> AtomicSpace {
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
    AtomicSpace::new(
        atoms.iter().map(ClosedInterval::length).collect(),
        sup,
        inf,
        Provenance::IntervalLine,
    )
    .expect("interval geometry is consistent")
}

fn rand_cloud(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointSpace {
    loop {
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect())
            .collect();
        if let Ok(space) = PointSpace::from_coords(coords) {
            return space;
        }
    }
}

/// One of three space flavors: interval atoms, a point cloud, or a
/// materialized cell space.
fn rand_space(rng: &mut ChaCha8Rng, case: usize) -> (AtomicSpace, serde_json::Value) {
    match case % 3 {
        0 => {
            let count = rng.gen_range(2..=6);
            let atoms = rand_interval_atoms(rng, count, 0.0);
            let space = interval_atoms_to_space(&atoms);
            let desc = json!({"kind": "intervals", "space": space});
            (space, desc)
        }
        1 => {
            let count = rng.gen_range(2..=6);
            let cloud = rand_cloud(rng, count, 2);
            let space = AtomicSpace::from_point_space(&cloud);
            let desc = json!({"kind": "cloud", "space": space});
            (space, desc)
        }
        _ => {
            let n = rng.gen_range(2..=3u32);
            let depth = rng.gen_range(2..=3u32).min(if n == 3 { 2 } else { 3 });
            let rho = 0.2 + rng.gen::<f64>() * 0.5;
            let spec = SequenceSpaceSpec::new(n, rho, depth).expect("valid random spec");
            let space = materialize(&spec).expect("small materialization").atomic;
            let desc = json!({"kind": "cells", "n": n, "rho": rho, "depth": depth});
            (space, desc)
        }
    }
}

fn rand_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.6)).collect()
}

/// Monotonicity, subadditivity, delta-separated additivity,
/// delta-monotonicity, the exponent comparison, refinement, and oracle
/// agreement between exact, greedy, and mass-distribution values.
pub fn content_laws(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new("content-laws", seed, cases);
    for case in 0..cases {
        let (space, desc) = rand_space(&mut rng, case);
        let n = space.len();
        let alpha = if rng.gen_bool(0.15) {
            0.0
        } else {
            rng.gen::<f64>() * 1.6
        };
        let max_diam = space
            .atom_diam
            .iter()
            .copied()
            .fold(0.0_f64, f64::max)
            .max(1e-3);
        let delta = Delta::finite(max_diam * (0.5 + rng.gen::<f64>() * 3.0)).unwrap();
        let target: Vec<usize> = (0..n).collect();
        let instance = json!({
            "space": desc, "alpha": alpha, "delta": delta.as_finite(), "case": case
        });

        let whole = exact_content(&space, &target, alpha, delta).expect("within DP limit");

        // Monotonicity under target restriction.
        let sub = rand_subset(&mut rng, n);
        let part = exact_content(&space, &sub, alpha, delta).expect("within DP limit");
        rec.check(
            case,
            "monotonicity",
            le(part.value, whole.value),
            format!("H({sub:?}) = {} > H(full) = {}", part.value, whole.value),
            &instance,
        );

        // Finite subadditivity on random, possibly overlapping, pieces.
        let a = rand_subset(&mut rng, n);
        let b = rand_subset(&mut rng, n);
        let mut union: Vec<usize> = a.iter().chain(&b).copied().collect();
        union.sort_unstable();
        union.dedup();
        let ha = exact_content(&space, &a, alpha, delta).expect("within DP limit");
        let hb = exact_content(&space, &b, alpha, delta).expect("within DP limit");
        let hu = exact_content(&space, &union, alpha, delta).expect("within DP limit");
        rec.check(
            case,
            "subadditivity",
            le(hu.value, ha.value + hb.value),
            format!("H(union) = {} > {} + {}", hu.value, ha.value, hb.value),
            &instance,
        );

        // Monotone in delta: shrinking the scale never lowers the value.
        let smaller =
            Delta::finite(delta.as_finite().unwrap() * (0.2 + rng.gen::<f64>() * 0.7)).unwrap();
        let at_smaller = exact_content(&space, &target, alpha, smaller).expect("within DP limit");
        rec.check(
            case,
            "delta-monotonicity",
            le(whole.value, at_smaller.value),
            format!(
                "H_delta = {} > H_eta = {} at finer scale",
                whole.value, at_smaller.value
            ),
            &instance,
        );

        // Exponent comparison at a common finite scale.
        let beta = alpha + 0.1 + rng.gen::<f64>();
        let hb2 = exact_content(&space, &target, beta, delta).expect("within DP limit");
        if let (ContentValue::Finite(va), ContentValue::Finite(vb)) = (whole.value, hb2.value) {
            let bound = delta.as_finite().unwrap().powf(beta - alpha) * va;
            rec.check(
                case,
                "exponent-comparison",
                vb <= bound + tol(vb, bound),
                format!("H^beta = {vb} > delta^(beta-alpha) H^alpha = {bound}"),
                &instance,
            );
        }

        // Greedy stays above the exact value whenever it runs.
        match greedy_content(&space, &target, alpha, delta) {
            Ok(g) => rec.check(
                case,
                "greedy-upper",
                le(whole.value, g.value),
                format!("greedy {} below exact {}", g.value, whole.value),
                &instance,
            ),
            Err(Error::InadmissibleAtom { .. }) => rec.check(
                case,
                "greedy-upper",
                whole.value == ContentValue::Infinite,
                "greedy rejected an atom but the exact value is finite".into(),
                &instance,
            ),
            Err(e) => rec.check(case, "greedy-upper", false, format!("error {e}"), &instance),
        }

        // Mass-distribution bounds stay below the exact value.
        let weights =
            WeightAssignment::new((0..n).map(|_| rng.gen::<f64>()).collect()).expect("nonnegative");
        let mass =
            mass_lower_bound(&space, &target, alpha, delta, &weights).expect("within DP limit");
        rec.check(
            case,
            "mass-lower",
            le(mass.value, whole.value),
            format!("mass bound {} above exact {}", mass.value, whole.value),
            &instance,
        );

        // Separated additivity: two interval clusters with a gap >= delta.
        let gap = delta.as_finite().unwrap();
        let left_count = rng.gen_range(1..=3);
        let right_count = rng.gen_range(1..=3);
        let left = rand_interval_atoms(&mut rng, left_count, 0.0);
        let right = rand_interval_atoms(&mut rng, right_count, 2.8 + gap);
        let mut all = left.clone();
        all.extend_from_slice(&right);
        let sep_space = interval_atoms_to_space(&all);
        let la: Vec<usize> = (0..left.len()).collect();
        let lb: Vec<usize> = (left.len()..all.len()).collect();
        let lu: Vec<usize> = (0..all.len()).collect();
        if sep_space.group_inf_dist(&la, &lb) >= gap {
            let ha = exact_content(&sep_space, &la, alpha, delta).expect("within DP limit");
            let hb = exact_content(&sep_space, &lb, alpha, delta).expect("within DP limit");
            let hu = exact_content(&sep_space, &lu, alpha, delta).expect("within DP limit");
            rec.check(
                case,
                "separated-additivity",
                eq(hu.value, ha.value + hb.value),
                format!("H(A u B) = {} != {} + {}", hu.value, ha.value, hb.value),
                &instance,
            );
        }

        // Refinement: splitting one interval atom never raises the value.
        let refine_count = rng.gen_range(2..=5);
        let atoms = rand_interval_atoms(&mut rng, refine_count, 0.0);
        let coarse_space = interval_atoms_to_space(&atoms);
        let coarse_target: Vec<usize> = (0..atoms.len()).collect();
        let split = rng.gen_range(0..atoms.len());
        let mid = 0.5 * (atoms[split].lo + atoms[split].hi);
        let mut refined = atoms.clone();
        refined[split] = ClosedInterval::new(atoms[split].lo, mid).unwrap();
        refined.push(ClosedInterval::new(mid, atoms[split].hi).unwrap());
        let fine_space = interval_atoms_to_space(&refined);
        let fine_target: Vec<usize> = (0..refined.len()).collect();
        let coarse =
            exact_content(&coarse_space, &coarse_target, alpha, delta).expect("within DP limit");
        let fine = exact_content(&fine_space, &fine_target, alpha, delta).expect("within DP limit");
        rec.check(
            case,
            "refinement",
            le(fine.value, coarse.value),
            format!("refined {} above coarse {}", fine.value, coarse.value),
            &instance,
        );

        // Profile values are nondecreasing as delta shrinks.
        let d0 = delta.as_finite().unwrap();
        let grid = [
            Delta::Infinite,
            Delta::finite(d0 * 2.0).unwrap(),
            Delta::finite(d0).unwrap(),
        ];
        let profile = measure_profile(&space, &target, alpha, &grid).expect("within DP limit");
        let monotone = profile.windows(2).all(|w| le(w[0].value, w[1].value));
        rec.check(
            case,
            "profile-monotone",
            monotone,
            "profile decreased".into(),
            &instance,
        );
    }
    rec.finish()
}

/// Snowflake re-indexing, metric validity of snowflakes, ultrametric
/// preservation, the Lipschitz pushforward bound, the bilipschitz
/// sandwich, Hölder pushforward, and the Hölder order-change identity.
pub fn transforms_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new("transforms", seed, cases);
    for case in 0..cases {
        let (space, desc) = rand_space(&mut rng, case);
        let n = space.len();
        let target: Vec<usize> = (0..n).collect();
        let alpha = 0.2 + rng.gen::<f64>() * 1.3;
        let t = 0.3 + rng.gen::<f64>() * 0.7;
        let max_diam = space
            .atom_diam
            .iter()
            .copied()
            .fold(0.0_f64, f64::max)
            .max(1e-3);
        let delta = Delta::finite(max_diam * (0.5 + rng.gen::<f64>() * 3.0)).unwrap();
        let instance = json!({
            "space": desc, "alpha": alpha, "t": t, "delta": delta.as_finite(), "case": case
        });

        // Snowflake re-indexing: block diameters transform pointwise.
        let snowflaked = snowflake_atomic(&space, t).expect("t <= 1 always valid");
        let original = exact_content(&space, &target, alpha, delta).expect("within DP limit");
        let reindexed =
            exact_content(&snowflaked, &target, alpha / t, delta.powf(t)).expect("within DP limit");
        rec.check(
            case,
            "snowflake-reindex",
            eq(original.value, reindexed.value),
            format!(
                "original {} != reindexed {}",
                original.value, reindexed.value
            ),
            &instance,
        );

        // Snowflaking a Euclidean cloud by t <= 1 keeps it a metric.
        let cloud_size = rng.gen_range(3..=6);
        let cloud = rand_cloud(&mut rng, cloud_size, 2);
        let snow = snowflake(&cloud, t).expect("t <= 1 on a metric");
        rec.check(
            case,
            "snowflake-metric",
            snow.validate().map(|r| r.is_metric).unwrap_or(false),
            "snowflaked cloud failed metric validation".into(),
            &instance,
        );

        // Ultrametric tables stay ultrametric for any positive power.
        let spec = SequenceSpaceSpec::new(2, 0.25 + rng.gen::<f64>() * 0.5, 2).unwrap();
        let cells = materialize(&spec).expect("small materialization");
        let big_t = 0.5 + rng.gen::<f64>() * 2.5;
        let powered = snowflake(&cells.points, big_t).expect("ultrametric allows any t");
        rec.check(
            case,
            "ultrametric-power",
            powered
                .validate()
                .map(|r| r.is_ultrametric)
                .unwrap_or(false),
            format!("power {big_t} lost ultrametricity"),
            &instance,
        );

        // Lipschitz pushforward at matched scales.
        let dom_size = rng.gen_range(2..=6);
        let cod_size = rng.gen_range(2..=6);
        let dom_cloud = rand_cloud(&mut rng, dom_size, 2);
        let cod_cloud = rand_cloud(&mut rng, cod_size, 2);
        let assignment: Vec<usize> = (0..dom_cloud.len())
            .map(|_| rng.gen_range(0..cod_cloud.len()))
            .collect();
        let map = MetricMap::new(dom_cloud.clone(), cod_cloud.clone(), assignment.clone())
            .expect("assignment in range");
        let k = lipschitz_constant(&map);
        if k > 0.0 {
            let dom_atomic = AtomicSpace::from_point_space(&dom_cloud);
            let cod_atomic = AtomicSpace::from_point_space(&cod_cloud);
            let dom_target: Vec<usize> = (0..dom_cloud.len()).collect();
            let image = image_target(&map, &dom_target).expect("valid target");
            let d = Delta::finite(0.2 + rng.gen::<f64>() * 2.0).unwrap();
            let hd = exact_content(&dom_atomic, &dom_target, alpha, d).expect("within DP limit");
            let hi = exact_content(
                &cod_atomic,
                &image,
                alpha,
                Delta::finite(k * d.as_finite().unwrap()).unwrap(),
            )
            .expect("within DP limit");
            let map_instance = json!({
                "domain": dom_cloud, "codomain": cod_cloud, "assignment": assignment,
                "alpha": alpha, "delta": d.as_finite(), "case": case
            });
            rec.check(
                case,
                "lipschitz-pushforward",
                le(hi.value, hd.value.scale(k.powf(alpha))),
                format!(
                    "H(image) = {} > k^a H = {}",
                    hi.value,
                    hd.value.scale(k.powf(alpha))
                ),
                &map_instance,
            );

            // Hölder pushforward at unrestricted scale.
            let a = 0.5 + rng.gen::<f64>() * 1.5;
            let ka = holder_constant(&map, a).expect("positive order");
            let h_dom = exact_content(&dom_atomic, &dom_target, a * alpha, Delta::Infinite)
                .expect("within DP limit");
            let h_img = exact_content(&cod_atomic, &image, alpha, Delta::Infinite)
                .expect("within DP limit");
            rec.check(
                case,
                "holder-pushforward",
                le(h_img.value, h_dom.value.scale(ka.powf(alpha))),
                format!(
                    "H(image) = {} > k^a H^(a alpha) = {}",
                    h_img.value,
                    h_dom.value.scale(ka.powf(alpha))
                ),
                &map_instance,
            );
        }

        // Bilipschitz sandwich via a random permutation onto a same-size cloud.
        let m = rng.gen_range(2..=6);
        let dom2 = rand_cloud(&mut rng, m, 2);
        let cod2 = rand_cloud(&mut rng, m, 2);
        let mut perm: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let bmap = MetricMap::new(dom2.clone(), cod2.clone(), perm.clone()).expect("permutation");
        let k = bilipschitz_constant(&bmap).expect("injective");
        let dom2_atomic = AtomicSpace::from_point_space(&dom2);
        let cod2_atomic = AtomicSpace::from_point_space(&cod2);
        let dom2_target: Vec<usize> = (0..m).collect();
        let image2 = image_target(&bmap, &dom2_target).expect("valid target");
        let h = exact_content(&dom2_atomic, &dom2_target, alpha, Delta::Infinite)
            .expect("within DP limit");
        let h_img =
            exact_content(&cod2_atomic, &image2, alpha, Delta::Infinite).expect("within DP limit");
        let sandwich_instance = json!({
            "domain": dom2, "codomain": cod2, "assignment": perm, "alpha": alpha, "case": case
        });
        rec.check(
            case,
            "bilipschitz-sandwich",
            le(h.value.scale(k.powf(-alpha)), h_img.value)
                && le(h_img.value, h.value.scale(k.powf(alpha))),
            format!(
                "{} not within k^alpha = {} of {}",
                h_img.value,
                k.powf(alpha),
                h.value
            ),
            &sandwich_instance,
        );

        // Hölder order change: k_a on (d1, d2) equals k_1 on (d1^a, d2).
        let a = 0.3 + rng.gen::<f64>() * 0.7;
        let snow_dom = snowflake(&dom2, a).expect("a <= 1");
        let snow_map = MetricMap::new(snow_dom, cod2.clone(), perm.clone()).expect("same shape");
        let ka = holder_constant(&bmap, a).expect("positive order");
        let k1 = lipschitz_constant(&snow_map);
        rec.check(
            case,
            "holder-order-change",
            (ka - k1).abs() <= tol(ka, k1),
            format!("holder({a}) = {ka} != lipschitz on snowflake = {k1}"),
            &sandwich_instance,
        );
    }
    rec.finish()
}

/// Refinement monotonicity, the diameter-length bound, reparameterization
/// laws, split additivity, and mapped-path length bounds.
pub fn curves_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new("curves", seed, cases);
    for case in 0..cases {
        let samples = rng.gen_range(3..=12);
        let dim = rng.gen_range(1..=3);
        let params: Vec<f64> = {
            let mut t = 0.0;
            (0..samples)
                .map(|_| {
                    t += 0.1 + rng.gen::<f64>();
                    t
                })
                .collect()
        };
        let mut coords: Vec<Vec<f64>> = Vec::with_capacity(samples);
        for i in 0..samples {
            if i > 0 && rng.gen_bool(0.2) {
                coords.push(coords[i - 1].clone());
            } else {
                coords.push((0..dim).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect());
            }
        }
        let path = SampledPath::euclidean(params.clone(), coords.clone()).expect("valid path");
        let instance = json!({"params": params, "coords": coords, "case": case});

        // A refinement never decreases the partition sum.
        let mut coarse: Vec<usize> = vec![0];
        for i in 1..samples - 1 {
            if rng.gen_bool(0.4) {
                coarse.push(i);
            }
        }
        coarse.push(samples - 1);
        let mut refined = coarse.clone();
        for i in 1..samples - 1 {
            if !refined.contains(&i) && rng.gen_bool(0.5) {
                refined.push(i);
            }
        }
        refined.sort_unstable();
        let sum_coarse = partition_sum(&path, &coarse).expect("valid partition");
        let sum_refined = partition_sum(&path, &refined).expect("valid partition");
        rec.check(
            case,
            "refinement-monotone",
            sum_coarse <= sum_refined + 1e-12,
            format!("coarse {sum_coarse} > refined {sum_refined}"),
            &instance,
        );

        // diam of the image never exceeds the length.
        let total = length(&path);
        let mut diam = 0.0_f64;
        for i in 0..samples {
            for j in (i + 1)..samples {
                diam = diam.max(path.sample_dist(i, j));
            }
        }
        rec.check(
            case,
            "diam-le-length",
            diam <= total + 1e-12,
            format!("diam {diam} > length {total}"),
            &instance,
        );

        // Arc-length reparameterization: 1-Lipschitz, same length.
        let q = arclength_reparameterize(&path);
        let mut lip_ok = true;
        for i in 0..q.len() {
            for j in (i + 1)..q.len() {
                if q.sample_dist(i, j) > (q.params()[j] - q.params()[i]).abs() + 1e-9 {
                    lip_ok = false;
                }
            }
        }
        rec.check(
            case,
            "reparam-1-lipschitz",
            lip_ok,
            "reparameterized path not 1-Lipschitz".into(),
            &instance,
        );
        rec.check(
            case,
            "reparam-length",
            (length(&q) - total).abs() <= 1e-9 * total.max(1.0),
            format!("length changed: {} vs {total}", length(&q)),
            &instance,
        );

        // Splitting at a sample regroups the same summands.
        let split_at = params[rng.gen_range(0..samples)];
        let (left, right) = split_length(&path, split_at).expect("sample parameter");
        rec.check(
            case,
            "split-additivity",
            (left + right - total).abs() <= 1e-9 * total.max(1.0),
            format!("{left} + {right} != {total}"),
            &instance,
        );

        // Monotone relabeling of parameters leaves the length unchanged.
        let relabeled = SampledPath::euclidean(
            params.iter().map(|&t| t * 3.0 + t * t).collect(),
            coords.clone(),
        )
        .expect("monotone relabel");
        rec.check(
            case,
            "relabel-invariance",
            (length(&relabeled) - total).abs() <= 1e-12,
            "length changed under relabeling".into(),
            &instance,
        );

        // Mapped paths obey the Lipschitz length bound.
        let cloud_size = rng.gen_range(2..=5);
        let cod_size = rng.gen_range(2..=5);
        let cloud = rand_cloud(&mut rng, cloud_size, 2);
        let cod = rand_cloud(&mut rng, cod_size, 2);
        let assignment: Vec<usize> = (0..cloud.len())
            .map(|_| rng.gen_range(0..cod.len()))
            .collect();
        let map = MetricMap::new(cloud.clone(), cod, assignment).expect("in range");
        let steps = rng.gen_range(2..=6);
        let indices: Vec<usize> = (0..steps).map(|_| rng.gen_range(0..cloud.len())).collect();
        let tpath: Vec<f64> = (0..steps).map(|i| i as f64).collect();
        let ipath = SampledPath::indexed(tpath, cloud, indices).expect("valid indexed path");
        let mapped = map_path(&map, &ipath).expect("composable");
        rec.check(
            case,
            "map-length-bound",
            mapped.output_length <= mapped.length_bound.unwrap() + 1e-9,
            format!(
                "mapped length {} above bound {:?}",
                mapped.output_length, mapped.length_bound
            ),
            &instance,
        );
    }
    rec.finish()
}

/// Profile integral bounds, pointwise slice bounds, and sweep behavior on
/// random interval presentations with affine slicing functions.
pub fn slicing_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new("slicing", seed, cases);
    for case in 0..cases {
        let pieces = rng.gen_range(1..=3);
        let set = IntervalSet::new(
            &(0..pieces)
                .map(|p| {
                    let lo = p as f64 * 1.5 + rng.gen::<f64>() * 0.3;
                    (lo, lo + 0.2 + rng.gen::<f64>() * 0.8)
                })
                .collect::<Vec<_>>(),
        )
        .expect("ordered pairs");
        let parts = rng.gen_range(1..=3);
        let (space, atoms) = set.atomize(parts).expect("valid atomization");
        let n = space.len();
        let target: Vec<usize> = (0..n).collect();

        // Affine slicing function f(x) = c x + b: exact per-atom images
        // and Lipschitz constant |c|.
        let c = rng.gen::<f64>() * 4.0 - 2.0;
        let b = rng.gen::<f64>() * 2.0 - 1.0;
        let k = c.abs().max(1e-6);
        let f_intervals: Vec<ClosedInterval> = atoms
            .iter()
            .map(|iv| {
                let (u, v) = (c * iv.lo + b, c * iv.hi + b);
                ClosedInterval::new(u.min(v), u.max(v)).expect("ordered image")
            })
            .collect();
        let alpha = 1.0 + rng.gen::<f64>();
        let max_diam = space
            .atom_diam
            .iter()
            .copied()
            .fold(0.0_f64, f64::max)
            .max(1e-6);
        let delta = Delta::finite(max_diam * (1.2 + rng.gen::<f64>() * 2.0)).unwrap();
        let instance = json!({
            "intervals": set, "parts": parts, "c": c, "b": b,
            "alpha": alpha, "delta": delta.as_finite(), "case": case
        });

        let est = exact_content(&space, &target, alpha, delta).expect("within DP limit");
        let covering = match est.witness {
            Some(Witness::Covering(cov)) => cov,
            _ => {
                rec.check(
                    case,
                    "profile-bound",
                    false,
                    "no covering witness".into(),
                    &instance,
                );
                continue;
            }
        };
        let profile = match build_slice_profile(&space, &f_intervals, &covering, alpha, k) {
            Ok(p) => p,
            Err(e) => {
                rec.check(
                    case,
                    "profile-bound",
                    false,
                    format!("build failed: {e}"),
                    &instance,
                );
                continue;
            }
        };
        rec.check(
            case,
            "profile-bound",
            profile.integral <= k * profile.covering_cost + 1e-9,
            format!(
                "integral {} > k cost {}",
                profile.integral,
                k * profile.covering_cost
            ),
            &instance,
        );

        // Doubling k keeps verification passing.
        let doubled = build_slice_profile(&space, &f_intervals, &covering, alpha, 2.0 * k);
        rec.check(
            case,
            "k-monotone",
            doubled.is_ok(),
            "doubling k broke the profile".into(),
            &instance,
        );

        // Pointwise slice bounds at random levels.
        let (lo, hi) = f_intervals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), iv| {
                (l.min(iv.lo), h.max(iv.hi))
            });
        for _ in 0..5 {
            let r = lo + rng.gen::<f64>() * (hi - lo).max(1e-9);
            match slice_content_bound(&space, &profile, r, delta) {
                Ok(recd) => rec.check(
                    case,
                    "slice-bound",
                    recd.holds,
                    format!("content {} > h({r}) = {}", recd.content, recd.h_r),
                    &instance,
                ),
                Err(e) => rec.check(case, "slice-bound", false, format!("error {e}"), &instance),
            }
        }
        // A level far outside every image: empty slice.
        let far = hi + 10.0;
        match slice_content_bound(&space, &profile, far, delta) {
            Ok(recd) => rec.check(
                case,
                "slice-empty",
                recd.holds && recd.slice_atoms.is_empty() && recd.content == 0.0,
                "far level not empty".into(),
                &instance,
            ),
            Err(e) => rec.check(case, "slice-empty", false, format!("error {e}"), &instance),
        }

        // Sweep across a decreasing grid of admissible scales.
        let d0 = delta.as_finite().unwrap();
        let grid = [d0 * 3.0, d0 * 2.0, d0];
        match slice_profile_sweep(&space, &f_intervals, &target, alpha, k, &grid) {
            Ok(sweep) => {
                for p in sweep {
                    rec.check(
                        case,
                        "sweep-bound",
                        p.holds,
                        format!("at {}: {} > {}", p.delta, p.integral, p.k_cost),
                        &instance,
                    );
                }
            }
            Err(e) => rec.check(case, "sweep-bound", false, format!("error {e}"), &instance),
        }
    }
    rec.finish()
}

/// Clopen separation postconditions on random clouds and on materialized
/// ultrametric spaces, where the separating set must be a union of cells
/// and the quotient must be locally constant.
pub fn separation_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new("separation", seed, cases);
    for case in 0..cases {
        let ultrametric = case % 2 == 1;
        let (points, desc, cell_info) = if ultrametric {
            let alphabet = rng.gen_range(2..=3u32);
            let depth = if alphabet == 3 {
                2
            } else {
                rng.gen_range(2..=3u32)
            };
            let rho = 0.2 + rng.gen::<f64>() * 0.5;
            let spec = SequenceSpaceSpec::new(alphabet, rho, depth).expect("valid spec");
            let m = materialize(&spec).expect("small space");
            (
                m.points,
                json!({"kind": "cells", "n": alphabet, "rho": rho, "depth": depth}),
                Some((alphabet as usize, depth)),
            )
        } else {
            let cloud_size = rng.gen_range(3..=8);
            let cloud = rand_cloud(&mut rng, cloud_size, 2);
            let desc = json!({"kind": "cloud", "space": cloud});
            (cloud, desc, None)
        };
        let n = points.len();

        // Random disjoint nonempty A and B.
        let mut a = Vec::new();
        let mut b = Vec::new();
        for x in 0..n {
            match rng.gen_range(0..4) {
                0 => a.push(x),
                1 => b.push(x),
                _ => {}
            }
        }
        if a.is_empty() {
            let x = rng.gen_range(0..n);
            a.push(x);
            b.retain(|&y| y != x);
        }
        if b.is_empty() {
            match (0..n).find(|x| !a.contains(x)) {
                Some(x) => b.push(x),
                None => {
                    let x = a.pop().expect("a had at least two points");
                    b.push(x);
                }
            }
        }
        if a.is_empty() {
            a.push((0..n).find(|x| !b.contains(x)).expect("n >= 2"));
        }
        let instance = json!({"space": desc, "a": a, "b": b, "case": case});

        let phi = match separation_function(&points, &a, &b) {
            Ok(phi) => phi,
            Err(e) => {
                rec.check(case, "phi", false, format!("error {e}"), &instance);
                continue;
            }
        };
        let range_ok = phi.iter().all(|&v| (0.0..=1.0).contains(&v))
            && a.iter().all(|&x| phi[x] == 0.0)
            && b.iter().all(|&x| phi[x] == 1.0);
        rec.check(
            case,
            "phi-range",
            range_ok,
            format!("phi = {phi:?}"),
            &instance,
        );

        let (u, r) = clopen_separation(&points, &a, &b).expect("disjoint nonempty");
        let a_in_u = a.iter().all(|x| u.contains(x));
        let b_out = b.iter().all(|x| !u.contains(x));
        let level_set_empty = phi.iter().all(|&v| v != r);
        let u_matches = (0..n).all(|x| u.contains(&x) == (phi[x] < r));
        rec.check(
            case,
            "clopen-postconditions",
            a_in_u && b_out && level_set_empty && u_matches,
            format!("U = {u:?}, r = {r}"),
            &instance,
        );

        // dist(., A) is 1-Lipschitz.
        let mut lip_ok = true;
        for x in 0..n {
            for y in 0..n {
                let dx = dist_to_set(&points, x, &a).expect("nonempty");
                let dy = dist_to_set(&points, y, &a).expect("nonempty");
                if (dx - dy).abs() > points.dist(x, y) + 1e-12 {
                    lip_ok = false;
                }
            }
        }
        rec.check(
            case,
            "dist-1-lipschitz",
            lip_ok,
            "1-Lipschitz bound failed".into(),
            &instance,
        );

        if let Some((alphabet, depth)) = cell_info {
            // Locally constant: phi agrees on pairs closer than both
            // distances to A and B.
            let mut local_ok = true;
            for x in 0..n {
                let da = dist_to_set(&points, x, &a).expect("nonempty");
                let db = dist_to_set(&points, x, &b).expect("nonempty");
                for y in 0..n {
                    if points.dist(x, y) < da.min(db) && (phi[x] - phi[y]).abs() > 1e-12 {
                        local_ok = false;
                    }
                }
            }
            rec.check(
                case,
                "phi-locally-constant",
                local_ok,
                "phi jumped inside a stability ball".into(),
                &instance,
            );

            // U is a union of maximal cells: greedy top-down decomposition
            // reconstructs it exactly.
            let in_u: Vec<bool> = (0..n).map(|x| u.contains(&x)).collect();
            let mut covered = vec![false; n];
            let mut stack = vec![(0usize, n, 0u32)];
            while let Some((lo, hi, level)) = stack.pop() {
                if in_u[lo..hi].iter().all(|&x| x) {
                    covered[lo..hi].iter_mut().for_each(|c| *c = true);
                } else if level < depth {
                    let child = (hi - lo) / alphabet;
                    for c in 0..alphabet {
                        stack.push((lo + c * child, lo + (c + 1) * child, level + 1));
                    }
                }
            }
            let union_matches = (0..n).all(|x| covered[x] == in_u[x]);
            rec.check(
                case,
                "u-is-union-of-cells",
                union_matches,
                format!("cell decomposition missed U = {u:?}"),
                &instance,
            );
        }
    }
    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_value_comparisons() {
        let fin = ContentValue::finite;
        assert!(le(fin(1.0), fin(1.0)));
        assert!(le(fin(1.0), fin(1.0 + 1e-10)));
        assert!(le(fin(1.0), ContentValue::Infinite));
        assert!(le(ContentValue::Infinite, ContentValue::Infinite));
        assert!(!le(ContentValue::Infinite, fin(1e308)));
        assert!(!le(fin(2.0), fin(1.0)));
        assert!(eq(fin(1.0), fin(1.0 + 1e-12)));
        assert!(eq(ContentValue::Infinite, ContentValue::Infinite));
        assert!(!eq(fin(1.0), ContentValue::Infinite));
        assert!(!eq(fin(1.0), fin(1.1)));
    }

    #[test]
    fn recorder_collects_failures_with_instances() {
        let mut rec = Recorder::new("demo", 1, 2);
        let instance = json!({"x": 1});
        rec.check(0, "law-a", true, "fine".into(), &instance);
        rec.check(1, "law-a", false, "broke".into(), &instance);
        let report = rec.finish();
        assert!(!report.passed());
        assert_eq!(report.checks, 2);
        assert_eq!(report.law_counts["law-a"], 2);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].case, 1);
        assert_eq!(report.failures[0].instance, instance);
    }

    #[test]
    fn all_suites_pass_on_a_fixed_seed() {
        for name in SUITES {
            let report = run_suite(name, 7, 25).unwrap();
            assert!(
                report.passed(),
                "suite {name} failed: {:?}",
                report.failures.first()
            );
            assert_eq!(report.cases, 25);
            assert!(report.checks > 0);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = content_laws(42, 10);
        let b = content_laws(42, 10);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", 0, 1).is_err());
    }
}
