//! Scheduling policies: which enabled step fires next.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ProcessId, Step};

pub trait Policy {
    /// Index into `steps`, which is never empty.
    fn choose(&mut self, steps: &[Step]) -> usize;
}

/// Uniform choice over the enabled steps, driven by ChaCha8 seeded with
/// `ChaCha8Rng::seed_from_u64(seed)`.
#[derive(Debug, Clone)]
pub struct Seeded {
    rng: ChaCha8Rng,
}

impl Seeded {
    pub fn new(seed: u64) -> Self {
        Seeded {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Policy for Seeded {
    fn choose(&mut self, steps: &[Step]) -> usize {
        self.rng.gen_range(0..steps.len())
    }
}

/// Serves processes in turn. Each tick moves to the next process (in
/// process order) that takes part in some enabled step, and picks among
/// that process's steps by a per-process rotating counter.
#[derive(Debug, Clone, Default)]
pub struct RoundRobin {
    last: Option<ProcessId>,
    counters: BTreeMap<ProcessId, usize>,
}

impl RoundRobin {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Policy for RoundRobin {
    fn choose(&mut self, steps: &[Step]) -> usize {
        let procs: BTreeSet<ProcessId> = steps.iter().flat_map(|s| s.processes()).collect();
        let next = match self.last {
            Some(last) => procs.range(last..).find(|&&p| p != last).or(procs.first()),
            None => procs.first(),
        };
        let p = *next.expect("steps is non-empty");
        let mine: Vec<usize> = (0..steps.len()).filter(|&i| steps[i].involves(p)).collect();
        let counter = self.counters.entry(p).or_default();
        let pick = mine[*counter % mine.len()];
        *counter += 1;
        self.last = Some(p);
        pick
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Seeded,
    RoundRobin,
}

impl PolicyKind {
    pub fn build(self, seed: u64) -> Box<dyn Policy> {
        match self {
            PolicyKind::Seeded => Box::new(Seeded::new(seed)),
            PolicyKind::RoundRobin => Box::new(RoundRobin::new()),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyKind::Seeded => "seeded",
            PolicyKind::RoundRobin => "roundrobin",
        })
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seeded" => Ok(PolicyKind::Seeded),
            "roundrobin" => Ok(PolicyKind::RoundRobin),
            other => Err(format!(
                "unknown policy {other:?} (expected seeded or roundrobin)"
            )),
        }
    }
}
