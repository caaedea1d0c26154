//! Analysis of fractional repetition (FR) codes.
//!
//! An FR code stores `θ` packets on `n` nodes, each packet replicated `ρ`
//! times; node `i` holds the packet set `U_i`. Together with an outer MDS
//! code, any `θ − 1` distinct packets rebuild the file. This crate computes:
//!
//! - validation and the derived parameters `α`, `α_i`, `δ_i`, `δ`;
//! - the incidence matrix and its column supports;
//! - the reconstruction degrees `k*` and `k_FR`, greedily and exactly;
//! - the rate profile `R(k)`;
//! - per-node repair degrees `d_i`, greedily and exactly.
//!
//! ```
//! use frcode::{corpus_code, k_star_exact, rate, DEFAULT_SUBSET_CAP};
//!
//! let code = corpus_code("table1").unwrap();
//! assert_eq!(k_star_exact(&code, DEFAULT_SUBSET_CAP).unwrap(), 2);
//! assert_eq!(rate(&code, 3, DEFAULT_SUBSET_CAP).unwrap(), 4);
//! ```

use serde::Serialize;

pub mod code;
pub mod corpus;
pub mod error;
pub mod frc;
pub mod generator;
pub mod reconstruction;
pub mod repair;
pub mod report;
pub mod subsets;

pub use code::{
    column_support, derive_params, incidence_matrix, validate, validate_sets, DerivedParams,
    FrCode, IncidenceMatrix, NodeId, PacketId, ValidationReport, Violation,
};
pub use corpus::{corpus, corpus_code, CORPUS_NAMES};
pub use error::{Error, Result};
pub use frc::{parse_frc, write_frc};
pub use generator::{generate, generate_random, generate_strong, GenKind, GenSpec};
pub use reconstruction::{
    coverage, degree_report, k_fr_exact, k_fr_greedy, k_star_exact, k_star_greedy, rate,
    rate_profile, CoverageTarget, DegreeReport, GreedyOutcome, GreedyTrace, KFrGreedy, KStarGreedy,
    TraceOutcome, TraceStep,
};
pub use repair::{
    helper_sets, node_repair, repair_degree_exact, repair_degree_greedy, repair_report,
    GreedyRepair, HelperSets, NodeRepair, RepairGroup, RepairOutcome, RepairReport,
};
pub use report::{AnalysisReport, Options};
pub use subsets::DEFAULT_SUBSET_CAP;

/// Which computations to run: the greedy procedures, the exhaustive
/// oracles, or both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Greedy,
    Exact,
    #[default]
    Both,
}

impl Mode {
    pub fn greedy(self) -> bool {
        matches!(self, Mode::Greedy | Mode::Both)
    }

    pub fn exact(self) -> bool {
        matches!(self, Mode::Exact | Mode::Both)
    }
}
