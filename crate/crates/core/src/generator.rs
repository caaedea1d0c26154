//! Seeded synthesis of ρ-regular codes.
//!
//! `Random` places each packet on `ρ` distinct nodes drawn uniformly, and
//! redraws the whole placement when a node ends up empty. `Strong` fills
//! `n` equal bins of `ρθ/n` slots from a shuffled multiset of packet copies
//! and then swaps copies between bins until no bin holds a packet twice.
//! Neither is uniform over all codes with the given parameters.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::FrCode;
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Random,
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenSpec {
    pub n: usize,
    pub theta: usize,
    pub rho: usize,
    pub seed: u64,
    pub kind: GenKind,
}

impl GenSpec {
    pub fn random(n: usize, theta: usize, rho: usize, seed: u64) -> Self {
        GenSpec {
            n,
            theta,
            rho,
            seed,
            kind: GenKind::Random,
        }
    }

    pub fn strong(n: usize, theta: usize, rho: usize, seed: u64) -> Self {
        GenSpec {
            n,
            theta,
            rho,
            seed,
            kind: GenKind::Strong,
        }
    }

    fn check(&self, kind: GenKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Parameter(format!(
                "spec is {:?}, expected {:?}",
                self.kind, kind
            )));
        }
        if self.n == 0 || self.theta == 0 || self.rho == 0 {
            return Err(Error::Parameter("n, theta and rho must be positive".into()));
        }
        if self.rho > self.n {
            return Err(Error::Parameter(format!(
                "rho = {} exceeds n = {}",
                self.rho, self.n
            )));
        }
        Ok(())
    }
}

pub fn generate(spec: &GenSpec) -> Result<FrCode> {
    match spec.kind {
        GenKind::Random => generate_random(spec),
        GenKind::Strong => generate_strong(spec),
    }
}

pub fn generate_random(spec: &GenSpec) -> Result<FrCode> {
    spec.check(GenKind::Random)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut nodes = vec![Vec::new(); spec.n];
        for packet in 1..=spec.theta {
            for node in sample(&mut rng, spec.n, spec.rho) {
                nodes[node].push(packet);
            }
        }
        if nodes.iter().all(|n| !n.is_empty()) {
            return FrCode::new(spec.theta, spec.rho, nodes);
        }
    }
    Err(Error::Exhausted {
        attempts: MAX_ATTEMPTS,
        reason: "every placement left a node empty".into(),
    })
}

pub fn generate_strong(spec: &GenSpec) -> Result<FrCode> {
    spec.check(GenKind::Strong)?;
    let copies = spec.rho * spec.theta;
    if !copies.is_multiple_of(spec.n) {
        return Err(Error::Parameter(format!(
            "n = {} does not divide rho * theta = {copies}",
            spec.n
        )));
    }
    let size = copies / spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    for _ in 0..MAX_ATTEMPTS {
        let mut stubs: Vec<usize> = (1..=spec.theta)
            .flat_map(|p| std::iter::repeat_n(p, spec.rho))
            .collect();
        stubs.shuffle(&mut rng);
        let mut bins: Vec<Vec<usize>> = stubs.chunks(size).map(<[usize]>::to_vec).collect();
        if repair_bins(&mut bins, &mut rng) {
            return FrCode::new(spec.theta, spec.rho, bins);
        }
    }
    Err(Error::Exhausted {
        attempts: MAX_ATTEMPTS,
        reason: "swap repair could not remove repeated packets".into(),
    })
}

fn first_repeat(bins: &[Vec<usize>]) -> Option<(usize, usize)> {
    for (b, bin) in bins.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (slot, &p) in bin.iter().enumerate() {
            if !seen.insert(p) {
                return Some((b, slot));
            }
        }
    }
    None
}

/// Each swap moves a repeated packet `p` out of bin `x` in exchange for a
/// packet `x` lacks, taken from a bin lacking `p`, so the number of repeats
/// strictly drops. Returns false if a repeat admits no such swap.
fn repair_bins(bins: &mut [Vec<usize>], rng: &mut ChaCha8Rng) -> bool {
    while let Some((x, slot)) = first_repeat(bins) {
        let p = bins[x][slot];
        let mut candidates = Vec::new();
        for (y, bin) in bins.iter().enumerate() {
            if y == x || bin.contains(&p) {
                continue;
            }
            for (s, &q) in bin.iter().enumerate() {
                if !bins[x].contains(&q) {
                    candidates.push((y, s));
                }
            }
        }
        if candidates.is_empty() {
            return false;
        }
        let (y, s) = candidates[rng.gen_range(0..candidates.len())];
        let q = bins[y][s];
        bins[x][slot] = q;
        bins[y][s] = p;
    }
    true
}
