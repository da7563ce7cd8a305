//! Machine control: the scheduler, its queue, and its incoming event handler.

use std::collections::BTreeSet;

use crate::engine::label::{
    ActionLabel, ActionName, Offer, Pattern, Payload, Polarity, QueueId, SubMatch, Subscript,
};
use crate::engine::EngineError;
use crate::events::{Event, EventType, InstanceId, Name};
use crate::instance::{Handler, HandlerKind};
use crate::queue::EventQueue;

/// Why an event was discarded without being delivered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropReason {
    /// The receiving instance had no reaction for it.
    NoReaction,
    /// A directed event whose destination is no longer live.
    DeadDest,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::NoReaction => "no-reaction",
            DropReason::DeadDest => "dead-dest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SchedPhase {
    Idle,
    /// A `start` request was taken; the new id is owed to `requester`.
    Starting {
        requester: InstanceId,
        machine: Name,
    },
    /// Enqueueing the halt announcement of an instance.
    Announcing(Event),
    Distributing {
        event: Event,
        remaining: BTreeSet<InstanceId>,
    },
    /// No live instance remains; halting the handler and the queue.
    TearingDown(BTreeSet<Subscript>),
    Terminated,
}

/// Side effects of a scheduler step that reach outside machine control.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchedEffect {
    /// `(machine, id, ctxid)` of an instance to create.
    pub spawn: Option<(Name, InstanceId, InstanceId)>,
    pub dropped: Option<(Event, DropReason)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineControl {
    n: u64,
    live: BTreeSet<InstanceId>,
    phase: SchedPhase,
    pub queue: EventQueue,
    pub handler: Handler,
}

impl MachineControl {
    /// Machine control with `n = 1` and the entry instance live.
    pub fn boot() -> Self {
        MachineControl {
            n: 1,
            live: BTreeSet::from([InstanceId(1)]),
            phase: SchedPhase::Idle,
            queue: EventQueue::new(QueueId::Mc),
            handler: Handler::new(HandlerKind::Mc),
        }
    }

    /// Highest id handed out so far.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn live(&self) -> &BTreeSet<InstanceId> {
        &self.live
    }

    pub fn phase(&self) -> &SchedPhase {
        &self.phase
    }

    pub fn sched_halted(&self) -> bool {
        self.phase == SchedPhase::Terminated
    }

    pub fn sched_offers(&self) -> Vec<Offer> {
        match &self.phase {
            SchedPhase::Idle => {
                let mut out = Vec::with_capacity(2 * self.live.len() + 1);
                for &id in &self.live {
                    out.push(Offer::receive(
                        ActionName::Start,
                        SubMatch::Exact(Subscript::Inst(id)),
                        Polarity::Primed,
                        Pattern::AnyMachine,
                    ));
                    out.push(Offer::primed(
                        ActionName::Halt,
                        Subscript::Inst(id),
                        Payload::None,
                    ));
                }
                out.push(Offer::receive(
                    ActionName::Deq,
                    SubMatch::Exact(Subscript::Mc),
                    Polarity::Primed,
                    Pattern::AnyEvent,
                ));
                out
            }
            SchedPhase::Starting { requester, .. } => vec![Offer::plain(
                ActionName::NewId,
                Subscript::Inst(*requester),
                Payload::Id(InstanceId(self.n + 1)),
            )],
            SchedPhase::Announcing(e) => {
                vec![Offer::plain(
                    ActionName::Enq,
                    Subscript::Mc,
                    Payload::Event(e.clone()),
                )]
            }
            SchedPhase::Distributing { event, remaining } => remaining
                .iter()
                .map(|&id| {
                    Offer::plain(
                        ActionName::Distrib,
                        Subscript::Inst(id),
                        Payload::Event(event.clone()),
                    )
                })
                .collect(),
            SchedPhase::TearingDown(rest) => rest
                .iter()
                .map(|&s| Offer::plain(ActionName::Halt, s, Payload::None))
                .collect(),
            SchedPhase::Terminated => Vec::new(),
        }
    }

    pub fn sched_fire(&mut self, label: &ActionLabel) -> Result<SchedEffect, EngineError> {
        let illegal = || EngineError::IllegalStep {
            process: "MC.sched".to_string(),
            label: label.to_string(),
        };
        let mut effect = SchedEffect::default();
        self.phase = match (self.phase.clone(), label.name, label.sub, &label.payload) {
            (SchedPhase::Idle, ActionName::Start, Subscript::Inst(id), Payload::Machine(m))
                if self.live.contains(&id) =>
            {
                SchedPhase::Starting {
                    requester: id,
                    machine: m.clone(),
                }
            }
            (SchedPhase::Idle, ActionName::Halt, Subscript::Inst(id), Payload::None)
                if self.live.contains(&id) =>
            {
                self.live.remove(&id);
                SchedPhase::Announcing(Event::new_unchecked(
                    id,
                    InstanceId::NONE,
                    EventType::halt(),
                    false,
                ))
            }
            (SchedPhase::Idle, ActionName::Deq, Subscript::Mc, Payload::Event(e)) => {
                self.distribute(e, &mut effect)
            }
            (
                SchedPhase::Starting { requester, machine },
                ActionName::NewId,
                Subscript::Inst(r),
                Payload::Id(n),
            ) if r == requester && n.0 == self.n + 1 => {
                self.n += 1;
                self.live.insert(*n);
                effect.spawn = Some((machine, *n, requester));
                SchedPhase::Idle
            }
            (SchedPhase::Announcing(e), ActionName::Enq, Subscript::Mc, Payload::Event(got))
                if *got == e =>
            {
                if self.live.is_empty() {
                    SchedPhase::TearingDown(BTreeSet::from([
                        Subscript::McIn,
                        Subscript::Q(QueueId::Mc),
                    ]))
                } else {
                    SchedPhase::Idle
                }
            }
            (
                SchedPhase::Distributing {
                    event,
                    mut remaining,
                },
                ActionName::Distrib,
                Subscript::Inst(id),
                Payload::Event(got),
            ) if *got == event && remaining.contains(&id) => {
                remaining.remove(&id);
                if remaining.is_empty() {
                    SchedPhase::Idle
                } else {
                    SchedPhase::Distributing { event, remaining }
                }
            }
            (SchedPhase::TearingDown(mut rest), ActionName::Halt, sub, Payload::None)
                if rest.contains(&sub) =>
            {
                rest.remove(&sub);
                if rest.is_empty() {
                    SchedPhase::Terminated
                } else {
                    SchedPhase::TearingDown(rest)
                }
            }
            _ => return Err(illegal()),
        };
        Ok(effect)
    }

    /// Phase after dequeueing `e`: directed events go to their live
    /// destination only, broadcasts to every live instance except the sender.
    fn distribute(&self, e: &Event, effect: &mut SchedEffect) -> SchedPhase {
        let remaining: BTreeSet<InstanceId> = if e.dest().is_none() {
            self.live
                .iter()
                .copied()
                .filter(|&id| id != e.sndr())
                .collect()
        } else if self.live.contains(&e.dest()) {
            BTreeSet::from([e.dest()])
        } else {
            effect.dropped = Some((e.clone(), DropReason::DeadDest));
            BTreeSet::new()
        };
        if remaining.is_empty() {
            SchedPhase::Idle
        } else {
            SchedPhase::Distributing {
                event: e.clone(),
                remaining,
            }
        }
    }

    /// Offers of the incoming event handler; see [`Handler::offers`].
    pub fn mc_in_offers(&self, fail_safe: bool) -> Vec<Offer> {
        self.handler.offers(fail_safe)
    }
}
