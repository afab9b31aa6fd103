//! Generalized optimal sub-pattern assignment (GOSPA) metrics.
//!
//! * [`assignment`]: rectangular linear assignment with a brute-force oracle.
//! * [`metrics`]: GOSPA (with the localization / missed / false split at
//!   `alpha = 2`), OSPA and unnormalized OSPA between finite sets.
//! * [`rfs`]: multi-Bernoulli random finite sets and seeded Monte Carlo
//!   estimates of mean and root-mean-square set metrics.
//! * [`cli`]: the `gospa` command-line front end.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the scalar type.

pub mod assignment;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod rfs;
pub mod scalar;

pub use assignment::{brute_force_assignment, solve_full_assignment, AssignmentSet, CostMatrix};
pub use error::{GospaError, Result};
pub use metrics::{
    cutoff_distance, gospa, gospa_permutation_form, ospa, ospa_with_base, unnormalized_ospa,
    unnormalized_ospa_closed_form, BaseDistance, Decomposition, GospaBreakdown, GospaParams,
    TargetSet,
};
pub use rfs::{
    estimate_metric, estimate_metric_with, run_table1, sample_multi_bernoulli, table1_scenario,
    BernoulliComponent, EstimatorConfig, Execution, MetricEstimate, MetricVariant,
    MultiBernoulli, PairSampler, Table1,
};
pub use scalar::Scalar;

pub type CostMatrix64 = CostMatrix<f64>;
pub type AssignmentSet64 = AssignmentSet<f64>;
pub type TargetSet64 = TargetSet<f64>;
pub type GospaParams64 = GospaParams<f64>;
pub type GospaBreakdown64 = GospaBreakdown<f64>;
pub type MultiBernoulli64 = MultiBernoulli<f64>;
pub type PairSampler64 = PairSampler<f64>;
pub type MetricEstimate64 = MetricEstimate<f64>;

pub type CostMatrix32 = CostMatrix<f32>;
pub type AssignmentSet32 = AssignmentSet<f32>;
pub type TargetSet32 = TargetSet<f32>;
pub type GospaParams32 = GospaParams<f32>;
pub type GospaBreakdown32 = GospaBreakdown<f32>;
pub type MultiBernoulli32 = MultiBernoulli<f32>;
pub type PairSampler32 = PairSampler<f32>;
pub type MetricEstimate32 = MetricEstimate<f32>;
