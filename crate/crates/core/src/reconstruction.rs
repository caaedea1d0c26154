//! Reconstruction degrees and the rate profile.
//!
//! Two greedy procedures are implemented step for step: one bounding `k*`
//! from above (delete packet θ, drop subsumed nodes, grow from every
//! maximum-size seed) and one estimating `k_FR` (grow from `U_m` inside the
//! shrinking prefix `U_1..U_m`). Exhaustive oracles give the exact values.
//!
//! Every "pick any" in the greedy procedures resolves to the smallest node
//! index, so traces are reproducible.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::code::{FrCode, NodeId, PacketId};
use crate::error::{Error, Result};
use crate::subsets::{check_cap, for_each_combination};
use crate::Mode;

/// Number of distinct packets that suffices to rebuild the file: any
/// `θ − 1` of the `θ` packets, the last one coming from the outer parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageTarget {
    pub required: usize,
}

impl CoverageTarget {
    pub fn for_code(code: &FrCode) -> Self {
        CoverageTarget {
            required: code.theta() - 1,
        }
    }
}

/// `|∪_{i∈s} U_i|`.
pub fn coverage(code: &FrCode, s: &[NodeId]) -> Result<usize> {
    let mut acc = FixedBitSet::with_capacity(code.theta());
    for &id in s {
        code.check_node(id)?;
        acc.union_with(&code.bits()[id.index()]);
    }
    Ok(acc.count_ones(..))
}

fn union_count(bits: &[FixedBitSet], idx: &[usize], scratch: &mut FixedBitSet) -> usize {
    scratch.clear();
    for &i in idx {
        scratch.union_with(&bits[i]);
    }
    scratch.count_ones(..)
}

fn total_coverage(code: &FrCode) -> usize {
    let mut acc = FixedBitSet::with_capacity(code.theta());
    for b in code.bits() {
        acc.union_with(b);
    }
    acc.count_ones(..)
}

fn check_k(code: &FrCode, k: usize) -> Result<()> {
    if k == 0 || k > code.n() {
        return Err(Error::Range {
            what: "subset size",
            value: k,
            max: code.n(),
        });
    }
    Ok(())
}

/// `R(k)`: the fewest distinct packets any `k` nodes can hold.
pub fn rate(code: &FrCode, k: usize, cap: u64) -> Result<usize> {
    check_k(code, k)?;
    check_cap(code.n(), k, cap)?;
    Ok(min_coverage(code, k))
}

fn min_coverage(code: &FrCode, k: usize) -> usize {
    let mut scratch = FixedBitSet::with_capacity(code.theta());
    let mut best = usize::MAX;
    let _ = for_each_combination::<()>(code.n(), k, |idx| {
        best = best.min(union_count(code.bits(), idx, &mut scratch));
        ControlFlow::Continue(())
    });
    best
}

/// `R(1), …, R(n)`.
pub fn rate_profile(code: &FrCode, cap: u64) -> Result<Vec<usize>> {
    let n = code.n();
    check_cap(n, n / 2, cap)?;
    Ok((1..=n).map(|k| min_coverage(code, k)).collect())
}

fn check_feasible(code: &FrCode) -> Result<usize> {
    let required = CoverageTarget::for_code(code).required;
    let covered = total_coverage(code);
    if covered < required {
        return Err(Error::Infeasible { covered, required });
    }
    Ok(required)
}

/// Exact `k*`: size of the smallest node subset holding at least `θ − 1`
/// distinct packets, by enumeration in increasing subset size.
pub fn k_star_exact(code: &FrCode, cap: u64) -> Result<usize> {
    let required = check_feasible(code)?;
    let mut scratch = FixedBitSet::with_capacity(code.theta());
    for t in 1..=code.n() {
        check_cap(code.n(), t, cap)?;
        let hit = for_each_combination(code.n(), t, |idx| {
            if union_count(code.bits(), idx, &mut scratch) >= required {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if hit.is_break() {
            return Ok(t);
        }
    }
    unreachable!("feasibility was checked, the full node set reaches the target")
}

/// Exact `k_FR`: the smallest `t` such that every `t` nodes hold at least
/// `θ − 1` distinct packets.
pub fn k_fr_exact(code: &FrCode, cap: u64) -> Result<usize> {
    let required = check_feasible(code)?;
    let mut scratch = FixedBitSet::with_capacity(code.theta());
    for t in 1..=code.n() {
        check_cap(code.n(), t, cap)?;
        let short = for_each_combination(code.n(), t, |idx| {
            if union_count(code.bits(), idx, &mut scratch) < required {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if short.is_continue() {
            return Ok(t);
        }
    }
    unreachable!("feasibility was checked, the full node set reaches the target")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub node: NodeId,
    /// `P` after the union.
    pub covered: Vec<PacketId>,
    pub counter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceOutcome {
    Completed,
    Failed,
}

/// One seeded run of a greedy procedure. The first step is the seed itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyTrace {
    pub seed: NodeId,
    /// Number of nodes the run could draw from.
    pub pool: usize,
    pub steps: Vec<TraceStep>,
    pub outcome: TraceOutcome,
}

impl GreedyTrace {
    fn start(seed: usize, pool: usize, p: &FixedBitSet) -> Self {
        let mut trace = GreedyTrace {
            seed: NodeId::from_index(seed),
            pool,
            steps: Vec::new(),
            outcome: TraceOutcome::Completed,
        };
        trace.push(seed, p);
        trace
    }

    fn push(&mut self, node: usize, p: &FixedBitSet) {
        self.steps.push(TraceStep {
            node: NodeId::from_index(node),
            covered: p.ones().map(PacketId::from_bit).collect(),
            counter: self.steps.len() + 1,
        });
    }

    pub fn counter(&self) -> usize {
        self.steps.last().map_or(0, |s| s.counter)
    }

    /// The counter of a completed run.
    pub fn value(&self) -> Option<usize> {
        match self.outcome {
            TraceOutcome::Completed => Some(self.counter()),
            TraceOutcome::Failed => None,
        }
    }
}

/// Highest score wins; on ties the earliest candidate is kept.
fn pick_max(candidates: impl Iterator<Item = (usize, usize)>) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (node, score) in candidates {
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((node, score));
        }
    }
    best.map(|(node, _)| node)
}

/// Outcome of the `k*` upper-bound procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KStarGreedy {
    /// `k*_upp`, the minimum counter over all seed runs.
    pub value: usize,
    /// Nodes left after deleting packet θ and dropping subsumed nodes.
    pub retained: Vec<NodeId>,
    /// Retained nodes of maximum size; each seeds one run.
    pub seeds: Vec<NodeId>,
    pub traces: Vec<GreedyTrace>,
}

/// Upper bound on `k*` by the seeded greedy procedure.
pub fn k_star_greedy(code: &FrCode) -> Result<KStarGreedy> {
    let theta = code.theta();
    let reduced: Vec<(usize, FixedBitSet)> = code
        .bits()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut b = b.clone();
            b.set(theta - 1, false);
            (i, b)
        })
        .filter(|(_, b)| !b.is_clear())
        .collect();
    if reduced.is_empty() {
        return Err(Error::Degenerate { theta });
    }

    // Drop every node contained in another; of identical nodes the first stays.
    let retained: Vec<&(usize, FixedBitSet)> = reduced
        .iter()
        .enumerate()
        .filter(|&(a, (_, va))| {
            !reduced
                .iter()
                .enumerate()
                .any(|(b, (_, vb))| a != b && va.is_subset(vb) && (va != vb || b < a))
        })
        .map(|(_, entry)| entry)
        .collect();

    let max_size = retained
        .iter()
        .map(|(_, v)| v.count_ones(..))
        .max()
        .unwrap_or(0);
    let seeds: Vec<&(usize, FixedBitSet)> = retained
        .iter()
        .copied()
        .filter(|(_, v)| v.count_ones(..) == max_size)
        .collect();

    let mut traces = Vec::with_capacity(seeds.len());
    for (seed, seed_set) in &seeds {
        let mut p = seed_set.clone();
        let mut trace = GreedyTrace::start(*seed, retained.len(), &p);
        // largest node disjoint from P, while one exists
        while let Some(next) = pick_max(
            retained
                .iter()
                .filter(|(_, v)| v.is_disjoint(&p))
                .map(|(i, v)| (*i, v.count_ones(..))),
        ) {
            p.union_with(&code_node(&retained, next));
            trace.push(next, &p);
        }
        // node adding the most, while some node is not inside P
        while let Some(next) = pick_max(
            retained
                .iter()
                .filter(|(_, v)| !v.is_subset(&p))
                .map(|(i, v)| (*i, v.difference_count(&p))),
        ) {
            p.union_with(&code_node(&retained, next));
            trace.push(next, &p);
        }
        traces.push(trace);
    }

    let value = traces
        .iter()
        .map(GreedyTrace::counter)
        .min()
        .expect("at least one seed");
    Ok(KStarGreedy {
        value,
        retained: retained
            .iter()
            .map(|(i, _)| NodeId::from_index(*i))
            .collect(),
        seeds: seeds.iter().map(|(i, _)| NodeId::from_index(*i)).collect(),
        traces,
    })
}

fn code_node(retained: &[&(usize, FixedBitSet)], node: usize) -> FixedBitSet {
    retained
        .iter()
        .find(|(i, _)| *i == node)
        .map(|(_, v)| v.clone())
        .expect("picked from the retained nodes")
}

/// Either a counter or the report that no seed run completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyOutcome {
    Value(usize),
    NoValidRun,
}

impl GreedyOutcome {
    pub fn value(self) -> Option<usize> {
        match self {
            GreedyOutcome::Value(v) => Some(v),
            GreedyOutcome::NoValidRun => None,
        }
    }
}

impl Serialize for GreedyOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GreedyOutcome::Value(v) => serializer.serialize_u64(*v as u64),
            GreedyOutcome::NoValidRun => serializer.serialize_str("no valid run"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KFrGreedy {
    /// Maximum counter over the completed runs.
    pub value: GreedyOutcome,
    /// One run per `m = n, n−1, …, 1`, seeded with `U_m`.
    pub traces: Vec<GreedyTrace>,
}

/// Greedy estimate of `k_FR` over the shrinking prefixes `U_1..U_m`.
///
/// A run succeeds once at most one packet of `{1..θ}` is missing. A run that
/// can no longer add coverage before that point is marked failed and left
/// out of the maximum.
pub fn k_fr_greedy(code: &FrCode) -> KFrGreedy {
    let theta = code.theta();
    let bits = code.bits();
    let mut traces = Vec::with_capacity(code.n());

    for m in (1..=code.n()).rev() {
        let pool = &bits[..m];
        let seed = m - 1;
        let mut p = pool[seed].clone();
        let mut trace = GreedyTrace::start(seed, m, &p);
        loop {
            if theta - p.count_ones(..) <= 1 {
                break;
            }
            let disjoint = pick_max(
                pool.iter()
                    .enumerate()
                    .filter(|(_, u)| u.is_disjoint(&p))
                    .map(|(i, u)| (i, u.count_ones(..))),
            );
            let next = disjoint.or_else(|| {
                pick_max(
                    pool.iter()
                        .enumerate()
                        .filter(|(_, u)| !u.is_subset(&p))
                        .map(|(i, u)| (i, u.difference_count(&p))),
                )
            });
            let Some(next) = next else {
                trace.outcome = TraceOutcome::Failed;
                break;
            };
            p.union_with(&pool[next]);
            trace.push(next, &p);
        }
        traces.push(trace);
    }

    let value = traces
        .iter()
        .filter_map(GreedyTrace::value)
        .max()
        .map_or(GreedyOutcome::NoValidRun, GreedyOutcome::Value);
    KFrGreedy { value, traces }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub required: usize,
    pub k_star_greedy: Option<usize>,
    pub k_star_exact: Option<usize>,
    pub k_fr_greedy: Option<GreedyOutcome>,
    pub k_fr_exact: Option<usize>,
    pub k_star_traces: Vec<GreedyTrace>,
    pub k_fr_traces: Vec<GreedyTrace>,
}

pub fn degree_report(code: &FrCode, mode: Mode, cap: u64) -> Result<DegreeReport> {
    let mut report = DegreeReport {
        required: CoverageTarget::for_code(code).required,
        k_star_greedy: None,
        k_star_exact: None,
        k_fr_greedy: None,
        k_fr_exact: None,
        k_star_traces: Vec::new(),
        k_fr_traces: Vec::new(),
    };
    if mode.greedy() {
        let star = k_star_greedy(code)?;
        report.k_star_greedy = Some(star.value);
        report.k_star_traces = star.traces;
        let fr = k_fr_greedy(code);
        report.k_fr_greedy = Some(fr.value);
        report.k_fr_traces = fr.traces;
    }
    if mode.exact() {
        report.k_star_exact = Some(k_star_exact(code, cap)?);
        report.k_fr_exact = Some(k_fr_exact(code, cap)?);
    }
    Ok(report)
}
