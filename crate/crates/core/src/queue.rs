//! The FIFO queue process.
//!
//! A queue offers `qempty` when empty, `deq(first)` when not, and always
//! accepts `enq'(e)` and `halt'`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::engine::label::{
    ActionLabel, ActionName, Offer, Pattern, Payload, Polarity, QueueId, SubMatch, Subscript,
};
use crate::events::Event;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal step {label} for queue {qid}")]
pub struct IllegalQueueStep {
    pub qid: QueueId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventQueue {
    qid: QueueId,
    items: VecDeque<Event>,
    halted: bool,
}

impl EventQueue {
    pub fn new(qid: QueueId) -> Self {
        EventQueue {
            qid,
            items: VecDeque::new(),
            halted: false,
        }
    }

    pub fn qid(&self) -> QueueId {
        self.qid
    }

    pub fn items(&self) -> impl ExactSizeIterator<Item = &Event> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    fn sub(&self) -> Subscript {
        self.qid.subscript()
    }

    fn halt_sub(&self) -> Subscript {
        Subscript::Q(self.qid)
    }

    pub fn offers(&self) -> Vec<Offer> {
        if self.halted {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(3);
        match self.items.front() {
            None => out.push(Offer::plain(ActionName::Qempty, self.sub(), Payload::None)),
            Some(first) => out.push(Offer::plain(
                ActionName::Deq,
                self.sub(),
                Payload::Event(first.clone()),
            )),
        }
        out.push(Offer::receive(
            ActionName::Enq,
            SubMatch::Exact(self.sub()),
            Polarity::Primed,
            Pattern::AnyEvent,
        ));
        out.push(Offer::primed(
            ActionName::Halt,
            self.halt_sub(),
            Payload::None,
        ));
        out
    }

    /// Applies one of this queue's offered steps.
    pub fn apply(&mut self, label: &ActionLabel) -> Result<(), IllegalQueueStep> {
        let illegal = || IllegalQueueStep {
            qid: self.qid,
            label: label.to_string(),
        };
        if self.halted {
            return Err(illegal());
        }
        match (label.name, &label.payload) {
            (ActionName::Qempty, Payload::None) if label.sub == self.sub() && self.is_empty() => {}
            (ActionName::Deq, Payload::Event(e))
                if label.sub == self.sub() && self.items.front() == Some(e) =>
            {
                self.items.pop_front();
            }
            (ActionName::Enq, Payload::Event(e)) if label.sub == self.sub() => {
                self.items.push_back(e.clone());
            }
            (ActionName::Halt, Payload::None) if label.sub == self.halt_sub() => {
                self.halted = true;
            }
            _ => return Err(illegal()),
        }
        Ok(())
    }
}
