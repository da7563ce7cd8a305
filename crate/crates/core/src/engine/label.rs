//! Action labels, subscripts and the offers processes make to the engine.
//!
//! Every step of a process is an action `name_sub(payload)`. An outbound action
//! is [`Polarity::Plain`], its inbound counterpart [`Polarity::Primed`], and a
//! matched pair fires as a single [`Polarity::Comm`] step.

use std::fmt;

use crate::events::{Event, InstanceId, Name};
use crate::table::{Index, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionName {
    Enq,
    Deq,
    Qempty,
    Get,
    NotSet,
    Set,
    Unset,
    Out,
    Distrib,
    Start,
    NewId,
    Halt,
    Internal,
}

impl ActionName {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionName::Enq => "enq",
            ActionName::Deq => "deq",
            ActionName::Qempty => "qempty",
            ActionName::Get => "get",
            ActionName::NotSet => "not_set",
            ActionName::Set => "set",
            ActionName::Unset => "unset",
            ActionName::Out => "out",
            ActionName::Distrib => "distrib",
            ActionName::Start => "start",
            ActionName::NewId => "new_id",
            ActionName::Halt => "halt",
            ActionName::Internal => "internal",
        }
    }
}

impl fmt::Display for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifies one of the three queue kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueueId {
    In(InstanceId),
    Out(InstanceId),
    Mc,
}

impl QueueId {
    /// The subscript used for this queue's enq/deq/qempty actions.
    pub fn subscript(self) -> Subscript {
        match self {
            QueueId::In(n) => Subscript::In(n),
            QueueId::Out(n) => Subscript::Out(n),
            QueueId::Mc => Subscript::Mc,
        }
    }
}

impl fmt::Display for QueueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.subscript(), f)
    }
}

/// Structured action subscript: `3`, `in(3)`, `ctx(3)`, `q(out(3))`, `MC(in)`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subscript {
    Inst(InstanceId),
    In(InstanceId),
    Out(InstanceId),
    Ctx(InstanceId),
    Reactions(InstanceId),
    Mc,
    McIn,
    Q(QueueId),
}

impl fmt::Display for Subscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subscript::Inst(n) => write!(f, "{n}"),
            Subscript::In(n) => write!(f, "in({n})"),
            Subscript::Out(n) => write!(f, "out({n})"),
            Subscript::Ctx(n) => write!(f, "ctx({n})"),
            Subscript::Reactions(n) => write!(f, "reactions({n})"),
            Subscript::Mc => f.write_str("MC"),
            Subscript::McIn => f.write_str("MC(in)"),
            Subscript::Q(q) => write!(f, "q({q})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Plain,
    Primed,
    Comm,
}

impl Polarity {
    fn marks(self) -> &'static str {
        match self {
            Polarity::Plain => "",
            Polarity::Primed => "'",
            Polarity::Comm => "''",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    None,
    Event(Event),
    Machine(Name),
    Id(InstanceId),
    Index(Index),
    Entry(Index, Value),
    Internal(Name),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::None => Ok(()),
            Payload::Event(e) => write!(f, "{e}"),
            Payload::Machine(m) => write!(f, "\"{m}\""),
            Payload::Id(n) => write!(f, "{n}"),
            Payload::Index(i) => write!(f, "{i}"),
            Payload::Entry(i, v) => write!(f, "{i},{v}"),
            Payload::Internal(l) => write!(f, "{l}"),
        }
    }
}

/// A concrete action label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionLabel {
    pub name: ActionName,
    pub sub: Subscript,
    pub polarity: Polarity,
    pub payload: Payload,
}

impl ActionLabel {
    pub fn new(name: ActionName, sub: Subscript, polarity: Polarity, payload: Payload) -> Self {
        ActionLabel {
            name,
            sub,
            polarity,
            payload,
        }
    }

    /// An internal step such as `<cycle>`. The subscript names its owner.
    pub fn internal(owner: InstanceId, label: Name) -> Self {
        ActionLabel::new(
            ActionName::Internal,
            Subscript::Inst(owner),
            Polarity::Plain,
            Payload::Internal(label),
        )
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn event(&self) -> Option<&Event> {
        match &self.payload {
            Payload::Event(e) => Some(e),
            _ => None,
        }
    }

    /// Whether `(name, sub)` belongs to the encapsulation set: such labels may
    /// only ever fire as half of a communication.
    pub fn is_encapsulated(&self) -> bool {
        in_encapsulation_set(self.name, self.sub)
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Payload::Internal(l) = &self.payload {
            return write!(f, "<{l}>");
        }
        write!(f, "{}{}_{}", self.name, self.polarity.marks(), self.sub)?;
        match &self.payload {
            Payload::None => Ok(()),
            Payload::Event(e) => write!(f, "({e})"),
            p => write!(f, "({p})"),
        }
    }
}

/// Membership in the encapsulation set of actions that can only occur as communication.
pub fn in_encapsulation_set(name: ActionName, sub: Subscript) -> bool {
    use ActionName::*;
    match name {
        Qempty | Deq | Enq => matches!(sub, Subscript::In(_) | Subscript::Out(_) | Subscript::Mc),
        Get | NotSet | Set | Unset => matches!(sub, Subscript::Ctx(_) | Subscript::Reactions(_)),
        Out | Distrib | Start | NewId => matches!(sub, Subscript::Inst(_)),
        Halt => matches!(
            sub,
            Subscript::Inst(_)
                | Subscript::Q(_)
                | Subscript::Ctx(_)
                | Subscript::Reactions(_)
                | Subscript::In(_)
                | Subscript::Out(_)
                | Subscript::McIn
        ),
        Internal => false,
    }
}

/// How a receptive offer constrains the payload it accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    AnyEvent,
    AnyMachine,
    AnyId,
    /// Any `(index, value)` entry.
    AnyEntry,
    /// Any index.
    AnyIndex,
    /// Any index the offering table has no entry for.
    AbsentIndex,
    /// An entry for this specific index, with any value.
    EntryAt(Index),
}

impl Pattern {
    /// Structural match. [`Pattern::AbsentIndex`] and [`Pattern::AnyMachine`]
    /// need context from the owner and are refined by the engine.
    pub fn admits(&self, payload: &Payload) -> bool {
        match (self, payload) {
            (Pattern::AnyEvent, Payload::Event(_)) => true,
            (Pattern::AnyMachine, Payload::Machine(_)) => true,
            (Pattern::AnyId, Payload::Id(_)) => true,
            (Pattern::AnyEntry, Payload::Entry(..)) => true,
            (Pattern::AnyIndex | Pattern::AbsentIndex, Payload::Index(_)) => true,
            (Pattern::EntryAt(i), Payload::Entry(j, _)) => i == j,
            _ => false,
        }
    }
}

/// Either a fully determined payload or a pattern standing for an (infinite) sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OfferPayload {
    Fixed(Payload),
    Pattern(Pattern),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubMatch {
    Exact(Subscript),
    Any,
}

impl SubMatch {
    pub fn exact(self) -> Option<Subscript> {
        match self {
            SubMatch::Exact(s) => Some(s),
            SubMatch::Any => None,
        }
    }
}

/// One alternative a process is ready to take.
///
/// `tag` is an opaque discriminator handed back to the process when the
/// offer fires, so it can tell apart identical labels from different branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offer {
    pub name: ActionName,
    pub sub: SubMatch,
    pub polarity: Polarity,
    pub payload: OfferPayload,
    pub tag: u32,
}

impl Offer {
    pub fn fixed(label: ActionLabel) -> Self {
        Offer {
            name: label.name,
            sub: SubMatch::Exact(label.sub),
            polarity: label.polarity,
            payload: OfferPayload::Fixed(label.payload),
            tag: 0,
        }
    }

    pub fn plain(name: ActionName, sub: Subscript, payload: Payload) -> Self {
        Offer::fixed(ActionLabel::new(name, sub, Polarity::Plain, payload))
    }

    pub fn primed(name: ActionName, sub: Subscript, payload: Payload) -> Self {
        Offer::fixed(ActionLabel::new(name, sub, Polarity::Primed, payload))
    }

    pub fn receive(name: ActionName, sub: SubMatch, polarity: Polarity, pattern: Pattern) -> Self {
        Offer {
            name,
            sub,
            polarity,
            payload: OfferPayload::Pattern(pattern),
            tag: 0,
        }
    }

    pub fn with_tag(mut self, tag: u32) -> Self {
        self.tag = tag;
        self
    }

    /// The concrete label, when the offer is fixed.
    pub fn label(&self) -> Option<ActionLabel> {
        match (&self.payload, self.sub) {
            (OfferPayload::Fixed(p), SubMatch::Exact(sub)) => {
                Some(ActionLabel::new(self.name, sub, self.polarity, p.clone()))
            }
            _ => None,
        }
    }

    /// Whether this offer would take part in a step labelled `label`
    /// (ignoring polarity).
    pub fn covers(&self, label: &ActionLabel) -> bool {
        if self.name != label.name {
            return false;
        }
        if let SubMatch::Exact(s) = self.sub {
            if s != label.sub {
                return false;
            }
        }
        match &self.payload {
            OfferPayload::Fixed(p) => *p == label.payload,
            OfferPayload::Pattern(pat) => pat.admits(&label.payload),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_labels() {
        let l = ActionLabel::new(
            ActionName::Deq,
            Subscript::In(InstanceId(3)),
            Polarity::Primed,
            Payload::None,
        );
        assert_eq!(l.to_string(), "deq'_in(3)");
        let h = ActionLabel::new(
            ActionName::Halt,
            Subscript::Q(QueueId::Out(InstanceId(2))),
            Polarity::Comm,
            Payload::None,
        );
        assert_eq!(h.to_string(), "halt''_q(out(2))");
        assert_eq!(
            ActionLabel::internal(InstanceId(1), Name::from("cycle")).to_string(),
            "<cycle>"
        );
    }

    #[test]
    fn encapsulation_set_membership() {
        let n = InstanceId(2);
        assert!(in_encapsulation_set(ActionName::Deq, Subscript::Mc));
        assert!(in_encapsulation_set(ActionName::Enq, Subscript::Out(n)));
        assert!(in_encapsulation_set(ActionName::Get, Subscript::Ctx(n)));
        assert!(in_encapsulation_set(ActionName::Start, Subscript::Inst(n)));
        assert!(in_encapsulation_set(ActionName::Halt, Subscript::McIn));
        assert!(in_encapsulation_set(
            ActionName::Halt,
            Subscript::Q(QueueId::Mc)
        ));
        assert!(!in_encapsulation_set(
            ActionName::Internal,
            Subscript::Inst(n)
        ));
        assert!(!in_encapsulation_set(ActionName::Get, Subscript::In(n)));
    }
}
