//! Per-node repair degrees.
//!
//! The greedy procedure groups the failed node's packets by a common
//! surviving helper: each round takes the largest set of remaining packets
//! whose helper sets share a node, which is exactly the set of packets held
//! by the surviving node that holds the most of them. The degree is
//! `α_i − Σ (|T_q| − 1)`, i.e. the number of groups.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::code::{FrCode, NodeId, PacketId};
use crate::error::{Error, Result};
use crate::subsets::{check_cap, for_each_combination};
use crate::Mode;

/// For failed node `i`, every packet `j ∈ U_i` mapped to `H_j \ {i}`.
///
/// Keyed by packet, so two packets stored on the same surviving nodes stay
/// separate entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HelperSets {
    pub node: NodeId,
    pub entries: BTreeMap<PacketId, BTreeSet<NodeId>>,
}

impl HelperSets {
    /// Packets stored nowhere but on the failed node.
    pub fn orphans(&self) -> Vec<PacketId> {
        self.entries
            .iter()
            .filter(|(_, h)| h.is_empty())
            .map(|(&p, _)| p)
            .collect()
    }

    fn require_repairable(&self) -> Result<()> {
        let orphans = self.orphans();
        if orphans.is_empty() {
            Ok(())
        } else {
            Err(Error::Unrepairable {
                node: self.node.get(),
                packets: orphans.iter().map(|p| p.get()).collect(),
            })
        }
    }
}

pub fn helper_sets(code: &FrCode, i: NodeId) -> Result<HelperSets> {
    let failed = code.node(i)?;
    let entries = failed
        .iter()
        .map(|&packet| {
            let holders = code
                .node_ids()
                .filter(|&h| h != i && code.bits()[h.index()].contains(packet.bit()))
                .collect();
            (packet, holders)
        })
        .collect();
    Ok(HelperSets { node: i, entries })
}

/// Packets fetched together from one helper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairGroup {
    pub helper: NodeId,
    pub packets: Vec<PacketId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyRepair {
    pub degree: usize,
    pub groups: Vec<RepairGroup>,
    /// `l_q = |T_q| − 1` per round.
    pub savings: Vec<usize>,
}

pub fn repair_degree_greedy(code: &FrCode, i: NodeId) -> Result<GreedyRepair> {
    let helpers = helper_sets(code, i)?;
    helpers.require_repairable()?;
    let alpha_i = helpers.entries.len();

    let mut remaining = helpers.entries;
    let mut groups = Vec::new();
    let mut savings = Vec::new();
    while !remaining.is_empty() {
        let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
        for holders in remaining.values() {
            for &h in holders {
                *counts.entry(h).or_default() += 1;
            }
        }
        // BTreeMap iterates by node id, so ties keep the smallest helper
        let mut best: Option<(NodeId, usize)> = None;
        for (&h, &c) in &counts {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((h, c));
            }
        }
        let (helper, _) = best.expect("every remaining packet has a holder");
        let packets: Vec<PacketId> = remaining
            .iter()
            .filter(|(_, holders)| holders.contains(&helper))
            .map(|(&p, _)| p)
            .collect();
        for p in &packets {
            remaining.remove(p);
        }
        savings.push(packets.len() - 1);
        groups.push(RepairGroup { helper, packets });
    }

    let degree = alpha_i - savings.iter().sum::<usize>();
    debug_assert_eq!(degree, groups.len());
    Ok(GreedyRepair {
        degree,
        groups,
        savings,
    })
}

/// Minimum number of surviving nodes whose union contains `U_i`, by
/// enumeration in increasing cover size.
pub fn repair_degree_exact(code: &FrCode, i: NodeId, cap: u64) -> Result<usize> {
    helper_sets(code, i)?.require_repairable()?;
    let target = &code.bits()[i.index()];
    let pieces: Vec<FixedBitSet> = code
        .bits()
        .iter()
        .enumerate()
        .filter(|&(h, b)| h != i.index() && !b.is_disjoint(target))
        .map(|(_, b)| {
            let mut piece = b.clone();
            piece.intersect_with(target);
            piece
        })
        .collect();

    let need = target.count_ones(..);
    let mut scratch = FixedBitSet::with_capacity(code.theta());
    for t in 1..=pieces.len() {
        check_cap(pieces.len(), t, cap)?;
        let found = for_each_combination(pieces.len(), t, |idx| {
            scratch.clear();
            for &k in idx {
                scratch.union_with(&pieces[k]);
            }
            if scratch.count_ones(..) == need {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if found.is_break() {
            return Ok(t);
        }
    }
    unreachable!("every packet has a holder, so all helpers together cover the node")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairOutcome {
    Degree(usize),
    Unrepairable(Vec<PacketId>),
}

impl RepairOutcome {
    pub fn degree(&self) -> Option<usize> {
        match self {
            RepairOutcome::Degree(d) => Some(*d),
            RepairOutcome::Unrepairable(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeRepair {
    pub node: NodeId,
    pub alpha_i: usize,
    pub greedy: Option<RepairOutcome>,
    pub exact: Option<RepairOutcome>,
    pub groups: Vec<RepairGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    pub per_node: Vec<NodeRepair>,
}

impl RepairReport {
    pub fn greedy_degrees(&self) -> Vec<Option<usize>> {
        self.per_node
            .iter()
            .map(|r| r.greedy.as_ref().and_then(RepairOutcome::degree))
            .collect()
    }

    pub fn exact_degrees(&self) -> Vec<Option<usize>> {
        self.per_node
            .iter()
            .map(|r| r.exact.as_ref().and_then(RepairOutcome::degree))
            .collect()
    }
}

/// Repair outcome for one node. Unrepairable nodes are reported, not raised;
/// only the enumeration cap can fail.
pub fn node_repair(code: &FrCode, i: NodeId, mode: Mode, cap: u64) -> Result<NodeRepair> {
    let helpers = helper_sets(code, i)?;
    let orphans = helpers.orphans();
    let mut out = NodeRepair {
        node: i,
        alpha_i: helpers.entries.len(),
        greedy: None,
        exact: None,
        groups: Vec::new(),
    };
    if !orphans.is_empty() {
        if mode.greedy() {
            out.greedy = Some(RepairOutcome::Unrepairable(orphans.clone()));
        }
        if mode.exact() {
            out.exact = Some(RepairOutcome::Unrepairable(orphans));
        }
        return Ok(out);
    }
    if mode.greedy() {
        let greedy = repair_degree_greedy(code, i)?;
        out.greedy = Some(RepairOutcome::Degree(greedy.degree));
        out.groups = greedy.groups;
    }
    if mode.exact() {
        out.exact = Some(RepairOutcome::Degree(repair_degree_exact(code, i, cap)?));
    }
    Ok(out)
}

pub fn repair_report(code: &FrCode, mode: Mode, cap: u64) -> Result<RepairReport> {
    let per_node = code
        .node_ids()
        .map(|i| node_repair(code, i, mode, cap))
        .collect::<Result<_>>()?;
    Ok(RepairReport { per_node })
}
