//! A metric-geometry laboratory over finitely presented spaces.
//!
//! The crate computes Hausdorff content and localized pre-measures by
//! exact covering minimization over atomic presentations, estimates
//! scaling exponents of point clouds, manipulates ultrametric sequence
//! spaces and snowflake transforms, analyzes Lipschitz structure of maps
//! and sampled paths, and verifies level-set slicing bounds.
//!
//! # Model
//!
//! Spaces are presented finitely:
//!
//! * [`metric::PointSpace`] — a symmetric pairwise distance table,
//!   optionally derived from Euclidean coordinates.
//! * [`atomic::AtomicSpace`] — finitely many closed "atoms" with per-atom
//!   diameters and pairwise inf/sup distance tables; the ground model for
//!   all covering computations.
//! * [`seqspace::SequenceSpaceSpec`] — a truncated ultrametric sequence
//!   space whose cells materialize into either model exactly.
//!
//! Covering values are exact for the presentation: the infimum over
//! coverings is attained by a partition of the atoms, found by a subset
//! DP ([`content::exact_content`]). Relative to an underlying infinite
//! set the value is an upper bound, tight for ultrametric cell
//! presentations and for interval presentations at exponent 1; every
//! [`content::ContentEstimate`] carries its bound direction.
//!
//! All values are immutable after construction and every operation is a
//! pure function of its inputs, safe for concurrent use.

pub mod atomic;
pub mod content;
pub mod curves;
pub mod dimension;
pub mod error;
pub mod intervals;
pub mod io;
pub mod metric;
pub mod seqspace;
pub mod slicing;
pub mod suites;
pub mod transforms;
pub mod value;

pub use atomic::{AtomicSpace, Provenance};
pub use content::{
    exact_content, exact_content_with_limit, greedy_content, mass_lower_bound, measure_profile,
    BoundKind, ContentEstimate, Covering, WeightAssignment, Witness, DEFAULT_DP_LIMIT, HARD_DP_CAP,
};
pub use curves::{
    arclength_reparameterize, image_h1_check, length, map_path, map_path_at_scale, partition_sum,
    split_length, H1Comparison, MappedPath, PathPoints, SampledPath,
};
pub use dimension::{dimension_estimate, farthest_point_net, DimensionEstimate, ScaleDiagnostics};
pub use error::{Error, Result};
pub use intervals::{interval_content, ClosedInterval, IntervalSet};
pub use metric::{
    ball, clopen_separation, diameter, dist_to_set, separation_function, validate_metric, BallKind,
    MetricReport, PointSpace, SubsetRef,
};
pub use seqspace::{
    cell_distance, cell_relation, exact_measure, materialize, normalize_covering, Cell,
    CellRelation, SequenceSpaceSpec,
};
pub use slicing::{
    build_slice_profile, slice_content_bound, slice_profile_sweep, SliceBoundRecord, SliceProfile,
    SweepPoint,
};
pub use transforms::{
    bilipschitz_constant, classify_flatness, holder_constant, lipschitz_constant,
    local_lipschitz_profile, snowflake, snowflake_atomic, Flatness, FlatnessConfig, MetricMap,
    ProfilePoint,
};
pub use value::{alpha_cost, ContentValue, Delta};
