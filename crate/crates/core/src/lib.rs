//! Geometric machinery for numerical verification of the Kneser-Poulsen
//! inequality under bounded pairwise interaction: power (Laguerre-Voronoi)
//! diagrams of ball unions, truncated cells and walls, exact measures in low
//! dimension, seeded Monte Carlo measures in any dimension, monotone
//! expansion motions, the wall-sum volume derivative, and the Archimedes-type
//! lifting identity for truncated polytopes.
//!
//! Everything is a pure function of immutable values; Monte Carlo results are
//! bit-reproducible for a fixed seed regardless of worker-thread count.

mod arc_polygon;
mod archimedes;
mod config;
mod diagram;
mod dynamics;
mod error;
mod lens;
mod linalg;
mod mc;
mod measure;
mod motion;
pub mod random;

pub use arc_polygon::{arc_polygon_area, clip_disk_by_halfplanes, ArcEdge, ArcPolygon};
pub use archimedes::{
    archimedes_check, proof_chain_check, ArchimedesInstance, ArchimedesReport, ProofChainReport,
    EXACT_PAIR_TOL,
};
pub use config::{
    contraction_witness, distance_matrix, is_expansion, power, BallConfiguration, Point,
    RadiusFamily, Tolerances,
};
pub use diagram::{
    cell_contains, power_cell, radical_hyperplane, truncated_cell, wall, Halfspace, Hyperplane,
    PowerCell, TruncatedCell, Wall,
};
pub use dynamics::{
    csikos_derivative, kp_defect, total_volume_derivative_fd, triple_count_trace,
    wall_s_derivative_fd, MeasureMode, TraceRow,
};
pub use error::{Error, Result};
pub use lens::{
    closest_point_in_lens, lens_meets_ball, lens_nonempty, pair_interaction_count,
    theorem_condition_holds, ConditionReport, IntersectionMode,
};
pub use mc::{
    truncated_cell_volume_mc, union_volume_diff_mc, union_volume_mc, wall_volume_mc, MCEstimate,
    Measured,
};
pub use measure::{
    ball_volume, cell_area_2d, truncated_cell_region_2d, union_area_2d, union_length_1d,
    wall_length_2d, wall_measure_exact,
};
pub use motion::{lifted_monotone_motion, linear_motion, Motion, MotionKind};
