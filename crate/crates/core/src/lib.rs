//! Pareto efficiency over generalized preference information.
//!
//! Agents rank states of an economy not by their own bundle alone but by an
//! individual transform of the whole allocation (own bundle, own bundle
//! relative to a population or neighbourhood mean, ...). This crate decides
//! whether moves are Pareto improvements under such transforms, enumerates
//! efficient states of finite feasible sets, ranks states by social welfare
//! functionals, and simulates repeated windfalls to a single agent.
//!
//! All arithmetic is exact.

pub mod discovery;
pub mod engine;
pub mod error;
pub mod feasible;
pub mod polity;
pub mod quantity;
pub mod transform;
pub mod welfare;

pub use discovery::{simulate_discovery, DiscoveryRun};
pub use engine::{
    check_improvement, check_improvement_neoclassical, check_improvement_ratio_form, enumerate_frontier,
    enumerate_frontier_naive, is_pareto_efficient, scan_all_moves, EfficiencyVerdict, Frontier, FrontierEntry,
    FrontierStatus, ImprovementVerdict, Method, ScanOptions, ScanReport, ViolationReason, DEFAULT_MOVE_CAP,
};
pub use error::{Error, Result};
pub use feasible::{enumerate_feasible, FeasibleIter, FeasibleSet};
pub use polity::{
    classify_move_agents, compare_bundles, AgentClasses, AgentId, Allocation, Bundle, Move, PartialOrderResult, Polity,
};
pub use quantity::{format_rational, parse_rational, Quantity, Rational};
pub use transform::{
    cross_effect_sign, evaluate_transform, verify_own_monotonicity, PreferenceInfo, Sign, SignReport, TransformSpec,
};
pub use welfare::{welfare_rank, welfare_value, Combiner, RankEntry, Ranking, SwfSpec};

/// Version of the engine, reported in CLI output headers.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
