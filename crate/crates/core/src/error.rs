use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A node or packet id, or a subset size, outside its admissible range.
    #[error("{what} {value} out of range 1..={max}")]
    Range {
        what: &'static str,
        value: usize,
        max: usize,
    },

    /// The code violates a structural invariant of the data model.
    #[error("malformed code: {0}")]
    Structure(String),

    /// Exhaustive enumeration would visit more subsets than allowed.
    #[error("enumeration limit exceeded: C({n},{k}) = {subsets} subsets exceeds cap {cap}")]
    Limit {
        n: usize,
        k: usize,
        subsets: u64,
        cap: u64,
    },

    /// No node subset holds enough distinct packets.
    #[error("infeasible: all nodes together hold {covered} distinct packets, {required} required")]
    Infeasible { covered: usize, required: usize },

    /// Removing the last packet left every node empty.
    #[error("degenerate code: no packets remain after deleting packet {theta}")]
    Degenerate { theta: usize },

    #[error("node {node} is unrepairable: packets {packets:?} are stored nowhere else")]
    Unrepairable { node: usize, packets: Vec<usize> },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("generator gave up after {attempts} attempts: {reason}")]
    Exhausted { attempts: usize, reason: String },

    #[error("{message}, line {line}")]
    Parse { line: usize, message: String },

    #[error("{message}, line {line}")]
    Semantic { line: usize, message: String },
}
