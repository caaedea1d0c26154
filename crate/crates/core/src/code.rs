//! The node–packet set system, its validation and derived parameters, and
//! the incidence-matrix view.
//!
//! Ids are 1-based at every public boundary. Internally each node also keeps
//! a bitset where bit `j - 1` stands for packet `j`.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// A packet of the universe `{1..θ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PacketId(usize);

impl PacketId {
    pub const fn new(value: usize) -> Self {
        PacketId(value)
    }

    pub const fn get(self) -> usize {
        self.0
    }

    pub(crate) const fn bit(self) -> usize {
        self.0 - 1
    }

    pub(crate) const fn from_bit(bit: usize) -> Self {
        PacketId(bit + 1)
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A storage node `U_i`, `1 ≤ i ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(usize);

impl NodeId {
    pub const fn new(value: usize) -> Self {
        NodeId(value)
    }

    pub const fn get(self) -> usize {
        self.0
    }

    pub(crate) const fn index(self) -> usize {
        self.0 - 1
    }

    pub(crate) const fn from_index(index: usize) -> Self {
        NodeId(index + 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A fractional repetition code: `n` packet sets over `{1..θ}` with nominal
/// replication factor `ρ`.
///
/// Construction only enforces structure (non-empty nodes, ids in range).
/// Whether every packet really appears `ρ` times is a property reported by
/// [`validate`], not a precondition, so codes such as Table III style inputs
/// can still be analysed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrCode {
    theta: usize,
    rho: usize,
    nodes: Vec<BTreeSet<PacketId>>,
    bits: Vec<FixedBitSet>,
}

impl FrCode {
    pub fn new<I, N>(theta: usize, rho: usize, nodes: I) -> Result<Self>
    where
        I: IntoIterator<Item = N>,
        N: IntoIterator<Item = usize>,
    {
        if theta == 0 {
            return Err(Error::Structure("theta must be at least 1".into()));
        }
        if rho == 0 {
            return Err(Error::Structure("rho must be at least 1".into()));
        }
        let mut sets = Vec::new();
        let mut bits = Vec::new();
        for (index, node) in nodes.into_iter().enumerate() {
            let node_id = index + 1;
            let mut set = BTreeSet::new();
            let mut row = FixedBitSet::with_capacity(theta);
            for packet in node {
                if packet == 0 || packet > theta {
                    return Err(Error::Structure(format!(
                        "node {node_id} holds packet {packet} outside 1..={theta}"
                    )));
                }
                if !set.insert(PacketId(packet)) {
                    return Err(Error::Structure(format!(
                        "node {node_id} holds packet {packet} twice"
                    )));
                }
                row.insert(packet - 1);
            }
            if set.is_empty() {
                return Err(Error::Structure(format!("node {node_id} is empty")));
            }
            sets.push(set);
            bits.push(row);
        }
        if sets.is_empty() {
            return Err(Error::Structure("a code needs at least one node".into()));
        }
        Ok(FrCode {
            theta,
            rho,
            nodes: sets,
            bits,
        })
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn nodes(&self) -> &[BTreeSet<PacketId>] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&BTreeSet<PacketId>> {
        self.check_node(id)?;
        Ok(&self.nodes[id.index()])
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n()).map(NodeId::from_index)
    }

    /// Node contents as plain integer lists, in node order.
    pub fn node_lists(&self) -> Vec<Vec<usize>> {
        self.nodes
            .iter()
            .map(|set| set.iter().map(|p| p.get()).collect())
            .collect()
    }

    pub(crate) fn bits(&self) -> &[FixedBitSet] {
        &self.bits
    }

    pub(crate) fn check_node(&self, id: NodeId) -> Result<()> {
        if id.0 == 0 || id.0 > self.n() {
            return Err(Error::Range {
                what: "node",
                value: id.0,
                max: self.n(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A packet whose replication count differs from the declared `ρ`.
    Replication {
        packet: usize,
        actual: usize,
        expected: usize,
    },
    OutOfRange {
        node: usize,
        packet: usize,
    },
    EmptyNode {
        node: usize,
    },
    DuplicatePacket {
        node: usize,
        packet: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Replication {
                packet,
                actual,
                expected,
            } => write!(
                f,
                "packet {packet} has replication {actual}, expected {expected}"
            ),
            Violation::OutOfRange { node, packet } => {
                write!(f, "node {node} holds out-of-range packet {packet}")
            }
            Violation::EmptyNode { node } => write!(f, "node {node} is empty"),
            Violation::DuplicatePacket { node, packet } => {
                write!(f, "node {node} holds packet {packet} more than once")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub per_packet_replication: Vec<usize>,
    pub violations: Vec<Violation>,
    /// `n·α − ρ·θ − δ`.
    pub eq1_residual: i64,
}

/// Checks a code against the definition: every packet of `{1..θ}` stored on
/// exactly `ρ` nodes. Never fails; findings are reported.
pub fn validate(code: &FrCode) -> ValidationReport {
    validate_sets(code.theta(), code.rho(), &code.node_lists())
}

/// Validation over raw node lists, which may contain anything a file or a
/// caller hands over (empty nodes, ids outside `1..θ`, repeats).
pub fn validate_sets(theta: usize, rho: usize, nodes: &[Vec<usize>]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut replication = vec![0usize; theta];
    let mut sizes = Vec::with_capacity(nodes.len());

    for (index, node) in nodes.iter().enumerate() {
        let node_id = index + 1;
        if node.is_empty() {
            violations.push(Violation::EmptyNode { node: node_id });
        }
        let mut seen = BTreeSet::new();
        for &packet in node {
            if packet == 0 || packet > theta {
                violations.push(Violation::OutOfRange {
                    node: node_id,
                    packet,
                });
            } else if !seen.insert(packet) {
                violations.push(Violation::DuplicatePacket {
                    node: node_id,
                    packet,
                });
            } else {
                replication[packet - 1] += 1;
            }
        }
        sizes.push(seen.len());
    }

    for (bit, &actual) in replication.iter().enumerate() {
        if actual != rho {
            violations.push(Violation::Replication {
                packet: bit + 1,
                actual,
                expected: rho,
            });
        }
    }

    let alpha = sizes.iter().copied().max().unwrap_or(0);
    let delta: usize = sizes.iter().map(|&a| alpha - a).sum();
    let eq1_residual = (nodes.len() * alpha) as i64 - (rho * theta) as i64 - delta as i64;

    ValidationReport {
        ok: violations.is_empty(),
        per_packet_replication: replication,
        violations,
        eq1_residual,
    }
}

/// Node sizes, the maximum `α`, and the weakness figures `δ_i = α − α_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedParams {
    pub n: usize,
    pub theta: usize,
    pub rho: usize,
    pub alpha: usize,
    pub alpha_i: Vec<usize>,
    pub delta_i: Vec<usize>,
    pub delta: usize,
    /// `δ = 0`: every node has the same size.
    pub strong: bool,
    pub eq1_residual: i64,
}

impl DerivedParams {
    /// Whether `n·α = ρ·θ + δ` holds for the declared `ρ`.
    pub fn eq1_holds(&self) -> bool {
        self.eq1_residual == 0
    }
}

pub fn derive_params(code: &FrCode) -> DerivedParams {
    let alpha_i: Vec<usize> = code.nodes().iter().map(BTreeSet::len).collect();
    let alpha = alpha_i.iter().copied().max().unwrap_or(0);
    let delta_i: Vec<usize> = alpha_i.iter().map(|&a| alpha - a).collect();
    let delta = delta_i.iter().sum();
    let eq1_residual =
        (code.n() * alpha) as i64 - (code.rho() * code.theta()) as i64 - delta as i64;
    DerivedParams {
        n: code.n(),
        theta: code.theta(),
        rho: code.rho(),
        alpha,
        alpha_i,
        delta_i,
        delta,
        strong: delta == 0,
        eq1_residual,
    }
}

/// Binary `n × θ` matrix with `m_ij = 1` iff packet `j` is stored on node `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: Vec<FixedBitSet>,
    cols: usize,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `m_ij`, 1-based like the ids.
    pub fn get(&self, node: NodeId, packet: PacketId) -> bool {
        self.rows[node.index()].contains(packet.bit())
    }

    pub fn row_weight(&self, node: NodeId) -> usize {
        self.rows[node.index()].count_ones(..)
    }

    pub fn column_weight(&self, packet: PacketId) -> usize {
        self.rows
            .iter()
            .filter(|r| r.contains(packet.bit()))
            .count()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|j| u8::from(r.contains(j))).collect())
            .collect()
    }

    /// Reads the node sets back from the rows.
    pub fn to_code(&self, rho: usize) -> Result<FrCode> {
        FrCode::new(
            self.cols,
            rho,
            self.rows.iter().map(|r| r.ones().map(|bit| bit + 1)),
        )
    }
}

pub fn incidence_matrix(code: &FrCode) -> IncidenceMatrix {
    IncidenceMatrix {
        rows: code.bits().to_vec(),
        cols: code.theta(),
    }
}

/// `H_j`: the nodes holding packet `j`.
pub fn column_support(m: &IncidenceMatrix, j: PacketId) -> Result<BTreeSet<NodeId>> {
    if j.0 == 0 || j.0 > m.cols {
        return Err(Error::Range {
            what: "packet",
            value: j.0,
            max: m.cols,
        });
    }
    Ok(m.rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.contains(j.bit()))
        .map(|(i, _)| NodeId::from_index(i))
        .collect())
}
