//! Lookup-table process used for an instance's variables and reactions.
//!
//! The table itself is a pure map manipulated through [`qry`], [`ins`] and
//! [`dlt`]; [`LookupTable`] wraps it as a process that answers `get` /
//! `not_set` probes and accepts `set'` / `unset'` / `halt'`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::engine::label::{
    ActionLabel, ActionName, Offer, Pattern, Payload, Polarity, SubMatch, Subscript,
};
use crate::events::{EventType, InstanceId, Name};

/// Result of a pure lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup<V> {
    NotFound,
    Found(V),
}

pub fn qry<I: Ord, V: Clone>(entries: &BTreeMap<I, V>, index: &I) -> Lookup<V> {
    match entries.get(index) {
        Some(v) => Lookup::Found(v.clone()),
        None => Lookup::NotFound,
    }
}

pub fn ins<I: Ord + Clone, V: Clone>(
    entries: &BTreeMap<I, V>,
    index: I,
    value: V,
) -> BTreeMap<I, V> {
    let mut out = entries.clone();
    out.insert(index, value);
    out
}

pub fn dlt<I: Ord + Clone, V: Clone>(entries: &BTreeMap<I, V>, index: &I) -> BTreeMap<I, V> {
    let mut out = entries.clone();
    out.remove(index);
    out
}

/// Key of the reaction table. `machine == 0` is a regular (any-sender) reaction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReactionKey {
    pub machine: InstanceId,
    pub etype: EventType,
}

impl ReactionKey {
    pub fn new(machine: InstanceId, etype: EventType) -> Self {
        ReactionKey { machine, etype }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Var(Name),
    Reaction(ReactionKey),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Var(v) => write!(f, "\"{v}\""),
            Index::Reaction(k) => write!(f, "({},\"{}\")", k.machine, k.etype),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Id(InstanceId),
    State(Name),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Id(n) => write!(f, "{n}"),
            Value::State(s) => write!(f, "\"{s}\""),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableId {
    Ctx(InstanceId),
    Reactions(InstanceId),
}

impl TableId {
    pub fn subscript(self) -> Subscript {
        match self {
            TableId::Ctx(n) => Subscript::Ctx(n),
            TableId::Reactions(n) => Subscript::Reactions(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal step {label} for table {tid:?}")]
pub struct IllegalTableStep {
    pub tid: TableId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LookupTable {
    tid: TableId,
    entries: BTreeMap<Index, Value>,
    halted: bool,
}

impl LookupTable {
    pub fn new(tid: TableId, entries: BTreeMap<Index, Value>) -> Self {
        LookupTable {
            tid,
            entries,
            halted: false,
        }
    }

    pub fn tid(&self) -> TableId {
        self.tid
    }

    pub fn entries(&self) -> &BTreeMap<Index, Value> {
        &self.entries
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    pub fn qry(&self, index: &Index) -> Lookup<Value> {
        qry(&self.entries, index)
    }

    /// Offers of the table process.
    ///
    /// `get` is offered for every present entry; `not_set`, `set'` and
    /// `unset'` are receptive and only materialise against a concrete probe.
    pub fn offers(&self) -> Vec<Offer> {
        if self.halted {
            return Vec::new();
        }
        let sub = self.tid.subscript();
        let mut out: Vec<Offer> = self
            .entries
            .iter()
            .map(|(i, v)| Offer::plain(ActionName::Get, sub, Payload::Entry(i.clone(), v.clone())))
            .collect();
        out.push(Offer::receive(
            ActionName::NotSet,
            SubMatch::Exact(sub),
            Polarity::Plain,
            Pattern::AbsentIndex,
        ));
        out.push(Offer::receive(
            ActionName::Set,
            SubMatch::Exact(sub),
            Polarity::Primed,
            Pattern::AnyEntry,
        ));
        out.push(Offer::receive(
            ActionName::Unset,
            SubMatch::Exact(sub),
            Polarity::Primed,
            Pattern::AnyIndex,
        ));
        out.push(Offer::primed(ActionName::Halt, sub, Payload::None));
        out
    }

    pub fn apply(&mut self, label: &ActionLabel) -> Result<(), IllegalTableStep> {
        let illegal = || IllegalTableStep {
            tid: self.tid,
            label: label.to_string(),
        };
        if self.halted || label.sub != self.tid.subscript() {
            return Err(illegal());
        }
        match (label.name, &label.payload) {
            (ActionName::Get, Payload::Entry(i, v)) => {
                if self.qry(i) != Lookup::Found(v.clone()) {
                    return Err(illegal());
                }
            }
            (ActionName::NotSet, Payload::Index(i)) => {
                if self.qry(i) != Lookup::NotFound {
                    return Err(illegal());
                }
            }
            (ActionName::Set, Payload::Entry(i, v)) => {
                self.entries = ins(&self.entries, i.clone(), v.clone());
            }
            (ActionName::Unset, Payload::Index(i)) => {
                self.entries = dlt(&self.entries, i);
            }
            (ActionName::Halt, Payload::None) => self.halted = true,
            _ => return Err(illegal()),
        }
        Ok(())
    }
}
