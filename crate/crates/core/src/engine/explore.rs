//! Depth-bounded breadth-first exploration of the step graph.

use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use serde::Serialize;

use super::{EngineError, Step, SystemState, World};
use crate::instance::ProgPhase;
use crate::trace::TraceEntry;

/// A path from the initial state, rendered as trace entries.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub depth: usize,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub max_depth: usize,
    pub state_count: usize,
    /// Some state at `max_depth` still had enabled steps.
    pub truncated: bool,
    pub terminated_states: usize,
    pub deadlocks: Vec<Witness>,
    /// States where an instance is halting but some of its remaining
    /// subprocess halts cannot fire.
    pub teardown_violations: Vec<Witness>,
}

struct Node {
    parent: Option<(usize, Step)>,
    depth: usize,
}

const MAX_TEARDOWN_WITNESSES: usize = 16;

pub fn explore(initial: &SystemState, max_depth: usize) -> Result<Report, EngineError> {
    explore_with(initial, max_depth, |_, _| {})
}

/// [`explore`], calling `visit` once per distinct state with its enabled steps.
pub fn explore_with(
    initial: &SystemState,
    max_depth: usize,
    mut visit: impl FnMut(&SystemState, &[Step]),
) -> Result<Report, EngineError> {
    let mut nodes = vec![Node {
        parent: None,
        depth: 0,
    }];
    let mut seen: FxHashSet<World> = FxHashSet::default();
    seen.insert(initial.world.clone());
    let mut frontier: VecDeque<(usize, World)> = VecDeque::from([(0, initial.world.clone())]);
    let mut deadlock_nodes = Vec::new();
    let mut violation_nodes = Vec::new();
    let mut truncated = false;
    let mut terminated_states = 0;

    while let Some((idx, world)) = frontier.pop_front() {
        let state = initial.with_world(world);
        let steps = state.enabled();
        visit(&state, &steps);
        let depth = nodes[idx].depth;
        if state.is_terminated() {
            terminated_states += 1;
            continue;
        }
        if steps.is_empty() {
            deadlock_nodes.push(idx);
            continue;
        }
        if violation_nodes.len() < MAX_TEARDOWN_WITNESSES && !teardown_confluent(&state, &steps) {
            violation_nodes.push(idx);
        }
        if depth >= max_depth {
            truncated = true;
            continue;
        }
        for step in steps {
            let mut next = state.clone();
            next.transition(&step)?;
            if seen.contains(&next.world) {
                continue;
            }
            seen.insert(next.world.clone());
            nodes.push(Node {
                parent: Some((idx, step)),
                depth: depth + 1,
            });
            frontier.push_back((nodes.len() - 1, next.world));
        }
    }

    let witness = |idx: usize| witness(initial, &nodes, idx);
    Ok(Report {
        max_depth,
        state_count: nodes.len(),
        truncated,
        terminated_states,
        deadlocks: deadlock_nodes
            .into_iter()
            .map(witness)
            .collect::<Result<_, _>>()?,
        teardown_violations: violation_nodes
            .into_iter()
            .map(witness)
            .collect::<Result<_, _>>()?,
    })
}

/// Every subprocess a halting instance still has to stop must be haltable now.
fn teardown_confluent(state: &SystemState, steps: &[Step]) -> bool {
    state
        .world
        .instances
        .values()
        .all(|inst| match inst.prog.phase() {
            ProgPhase::Teardown(rest) => rest
                .iter()
                .all(|&sub| SystemState::halt_enabled(steps, sub)),
            _ => true,
        })
}

fn witness(initial: &SystemState, nodes: &[Node], idx: usize) -> Result<Witness, EngineError> {
    let mut path = Vec::new();
    let mut at = idx;
    while let Some((parent, step)) = &nodes[at].parent {
        path.push(step.clone());
        at = *parent;
    }
    path.reverse();
    let mut state = initial.with_world(initial.world.clone());
    let mut trace = Vec::new();
    for step in &path {
        trace.extend(state.apply(step)?);
    }
    Ok(Witness {
        depth: nodes[idx].depth,
        trace,
    })
}
