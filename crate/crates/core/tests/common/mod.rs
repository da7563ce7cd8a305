//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use pepvm::engine::label::{ActionLabel, ActionName, Payload, Polarity, Subscript};
use pepvm::engine::policy::Policy;
use pepvm::trace::EntryKind;
use pepvm::{parse_program, EngineConfig, InstanceId, ProgramDef, Step, SystemState, TraceEntry};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

pub fn fixture(name: &str) -> ProgramDef {
    let src = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_program(&src).unwrap()
}

pub fn boot(name: &str) -> SystemState {
    SystemState::boot(fixture(name)).unwrap()
}

pub fn boot_with(name: &str, config: EngineConfig) -> SystemState {
    SystemState::boot_with(fixture(name), config).unwrap()
}

/// Actions that may only happen as a communication, listed by hand.
pub fn restricted(l: &ActionLabel) -> bool {
    use ActionName::*;
    use Subscript as S;
    matches!(
        (l.name, l.sub),
        (Qempty | Deq | Enq, S::In(_) | S::Out(_) | S::Mc)
            | (Get | NotSet | Set | Unset, S::Ctx(_) | S::Reactions(_))
            | (Out | Distrib | Start | NewId | Halt, S::Inst(_))
            | (
                Halt,
                S::Q(_) | S::In(_) | S::Out(_) | S::McIn | S::Ctx(_) | S::Reactions(_)
            )
    )
}

/// Solo entries whose label may only occur as a communication.
pub fn restricted_solos(trace: &[TraceEntry]) -> Vec<String> {
    trace
        .iter()
        .filter(|e| e.kind == EntryKind::Solo)
        .filter_map(|e| e.label.as_ref())
        .filter(|l| restricted(l) || l.polarity != Polarity::Plain)
        .map(|l| l.to_string())
        .collect()
}

pub fn comm(e: &TraceEntry, name: ActionName) -> Option<&ActionLabel> {
    e.label
        .as_ref()
        .filter(|l| e.kind == EntryKind::Comm && l.name == name)
}

/// Machine name and context of every instance started in `trace`, read off
/// the start and new_id communications. Instance 1 is `entry`.
pub fn started(trace: &[TraceEntry], entry: &str) -> BTreeMap<InstanceId, (String, InstanceId)> {
    let mut out = BTreeMap::from([(InstanceId(1), (entry.to_string(), InstanceId(0)))]);
    let mut pending: BTreeMap<Subscript, String> = BTreeMap::new();
    for e in trace {
        if let Some(l) = comm(e, ActionName::Start) {
            if let Payload::Machine(m) = &l.payload {
                pending.insert(l.sub, m.to_string());
            }
        }
        if let Some(l) = comm(e, ActionName::NewId) {
            let (Payload::Id(n), Subscript::Inst(parent)) = (&l.payload, l.sub) else {
                panic!("malformed new_id {l}");
            };
            let m = pending.remove(&l.sub).expect("new_id follows start");
            assert!(
                out.insert(*n, (m, parent)).is_none(),
                "id {n} handed out twice"
            );
        }
    }
    out
}

pub fn id_of(ids: &BTreeMap<InstanceId, (String, InstanceId)>, machine: &str) -> InstanceId {
    let found: Vec<_> = ids.iter().filter(|(_, (m, _))| m == machine).collect();
    assert_eq!(found.len(), 1, "exactly one {machine}");
    *found[0].0
}

/// Replays a recorded trace by matching each entry against the enabled steps.
pub fn replay(initial: &SystemState, trace: &[TraceEntry]) -> SystemState {
    let mut s = initial.clone();
    for e in trace.iter().filter(|e| e.label.is_some()) {
        let label = e.label.as_ref().unwrap();
        let step = s
            .enabled()
            .into_iter()
            .find(|st| {
                st.label() == label
                    && st
                        .processes()
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        == e.actors
            })
            .unwrap_or_else(|| panic!("entry {} is not enabled on replay", e.step));
        s.step(&step).unwrap();
    }
    s
}

/// Picks from a fixed list of step indices, cycling.
pub struct Scripted(pub Vec<usize>, pub usize);

impl Policy for Scripted {
    fn choose(&mut self, steps: &[Step]) -> usize {
        let i = self.0.get(self.1).copied().unwrap_or(0) % steps.len();
        self.1 += 1;
        i
    }
}
