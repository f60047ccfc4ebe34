//! Approximation algorithms for the similar elements problem and for
//! unweighted metric labeling on complete graphs.
//!
//! Both solvers minimize `n` star-graph relaxations of the objective (one per
//! root node) by a two-pass dynamic program and keep the best root. The
//! result is within a factor 2 of the optimum whenever the distance is a
//! metric, in `O(n^2 k^2)` time where `k` bounds the set or label count.
//!
//! ```
//! use simlabel_core::{solve_similar, Element, MetricSpace, PointMetric, SimilarElementsInstance};
//!
//! let space = MetricSpace::points(1, PointMetric::L1).unwrap();
//! let pt = |v: f64| Element::Point(vec![v]);
//! let inst = SimilarElementsInstance::new(
//!     space,
//!     vec![vec![pt(0.0), pt(10.0)], vec![pt(1.0)], vec![pt(2.0)]],
//! )
//! .unwrap();
//! let report = solve_similar(&inst);
//! assert_eq!(report.objective, 8.0);
//! ```
//!
//! The `parallel` feature (on by default) evaluates the per-root subproblems
//! with rayon. Results are identical with and without it.

pub mod bench;
pub mod error;
pub mod exact;
pub mod generate;
pub mod io;
pub mod metric;
pub mod model;
pub mod nn;
pub mod par;
pub mod solver;

pub use error::{Error, Result};
pub use exact::{
    exact_labeling, exact_similar, exact_star_labeling, exact_star_similar, ExactResult,
    DEFAULT_BUDGET,
};
pub use io::{parse_instance, Instance, InstanceFile, ProblemKind};
pub use metric::{distance, validate_metric, Element, MetricSpace, PointMetric, Verdict, Violation};
pub use model::{
    labeling_objective, labeling_star_objective, similar_objective, similar_star_objective,
    Assignment, LabelingInstance, SimilarElementsInstance,
};
pub use nn::{nearest_allowed, LinearScan, NearestNeighbor};
pub use par::Execution;
pub use solver::{
    lift_labeling_assignment, reduce_similar_to_labeling, solve_labeling, solve_labeling_with,
    solve_similar, solve_similar_with, solve_star_labeling, solve_star_similar, SolveReport,
    StarSolution,
};
