//! Events, identifier spaces, and the event-type alphabet.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeTuple, Serializer};
use thiserror::Error;

/// Suffix appended to an event type to form its acknowledgment type.
pub const ACK_SUFFIX: &str = "_ack";

/// Event type announcing that an instance halted.
pub const HALT_TYPE: &str = "halt";

/// Identifier of a running instance. `0` means "no destination" or "no context".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct InstanceId(pub u64);

impl InstanceId {
    pub const NONE: InstanceId = InstanceId(0);

    pub fn is_none(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for InstanceId {
    fn from(v: u64) -> Self {
        InstanceId(v)
    }
}

/// Shared, cheaply clonable name used for event types, states, machines and variables.
pub type Name = Arc<str>;

/// The type string of an event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventType(Name);

impl EventType {
    /// Builds an event type without checking it against any alphabet.
    ///
    /// Only identifier characters are accepted; the empty string is rejected.
    pub fn new(name: &str) -> Result<Self, EventError> {
        if name.is_empty() {
            return Err(EventError::EmptyType);
        }
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(EventError::InvalidType(name.to_string()));
        }
        Ok(EventType(Name::from(name)))
    }

    pub fn halt() -> Self {
        EventType(Name::from(HALT_TYPE))
    }

    fn sentinel() -> Self {
        EventType(Name::from(""))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Returns the acknowledgment type for `etype` (`"t"` becomes `"t_ack"`).
pub fn ack_type_of(etype: &EventType) -> EventType {
    EventType(Name::from(format!("{}{}", etype.0, ACK_SUFFIX)))
}

/// An event `(sender, destination, type, needs-ack)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    sndr: InstanceId,
    dest: InstanceId,
    etype: EventType,
    ack: bool,
}

impl Event {
    /// The `(0, 0, "", false)` placeholder an instance holds before it has reacted to anything.
    pub(crate) fn sentinel() -> Self {
        Event {
            sndr: InstanceId::NONE,
            dest: InstanceId::NONE,
            etype: EventType::sentinel(),
            ack: false,
        }
    }

    /// Builds an event without alphabet validation. Prefer [`Alphabet::make_event`].
    pub(crate) fn new_unchecked(
        sndr: InstanceId,
        dest: InstanceId,
        etype: EventType,
        ack: bool,
    ) -> Self {
        Event {
            sndr,
            dest,
            etype,
            ack,
        }
    }

    pub fn sndr(&self) -> InstanceId {
        self.sndr
    }

    pub fn dest(&self) -> InstanceId {
        self.dest
    }

    pub fn etype(&self) -> &EventType {
        &self.etype
    }

    pub fn ack(&self) -> bool {
        self.ack
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},\"{}\",{})",
            self.sndr, self.dest, self.etype, self.ack as u8
        )
    }
}

/// Serialized as `[s, d, "t", a]` with `a` as `0` or `1`.
impl Serialize for Event {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(4)?;
        t.serialize_element(&self.sndr.0)?;
        t.serialize_element(&self.dest.0)?;
        t.serialize_element(self.etype.as_str())?;
        t.serialize_element(&(self.ack as u8))?;
        t.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("event type must not be empty")]
    EmptyType,
    #[error("invalid event type {0:?}: only [A-Za-z0-9_] allowed")]
    InvalidType(String),
    #[error("unknown event type {0:?}: not in the program's alphabet")]
    UnknownEventType(String),
}

/// The finite set of event types a program may use.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    types: BTreeSet<EventType>,
}

impl Alphabet {
    pub fn new(types: impl IntoIterator<Item = EventType>) -> Self {
        Alphabet {
            types: types.into_iter().collect(),
        }
    }

    pub fn contains(&self, etype: &str) -> bool {
        self.types.iter().any(|t| t.as_str() == etype)
    }

    pub fn iter(&self) -> impl Iterator<Item = &EventType> {
        self.types.iter()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Looks up `name` in the alphabet and returns the interned type.
    pub fn event_type(&self, name: &str) -> Result<EventType, EventError> {
        self.types
            .iter()
            .find(|t| t.as_str() == name)
            .cloned()
            .ok_or_else(|| EventError::UnknownEventType(name.to_string()))
    }

    /// Constructs an event whose type must belong to this alphabet.
    pub fn make_event(
        &self,
        sndr: InstanceId,
        dest: InstanceId,
        etype: &str,
        ack: bool,
    ) -> Result<Event, EventError> {
        let etype = self.event_type(etype)?;
        Ok(Event::new_unchecked(sndr, dest, etype, ack))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harddrive_alphabet() -> Alphabet {
        Alphabet::new(
            [
                "halt",
                "cycle",
                "cycle_ack",
                "read",
                "shutdown",
                "interrupt",
                "seek",
                "found_data",
                "return",
            ]
            .iter()
            .map(|t| EventType::new(t).unwrap()),
        )
    }

    #[test]
    fn make_event_accessors() {
        let a = harddrive_alphabet();
        let e = a
            .make_event(InstanceId(1), InstanceId(0), "read", false)
            .unwrap();
        assert_eq!(e.sndr(), InstanceId(1));
        assert_eq!(e.dest(), InstanceId(0));
        assert_eq!(e.etype().as_str(), "read");
        assert!(!e.ack());

        let e = a
            .make_event(InstanceId(4), InstanceId(1), "cycle", true)
            .unwrap();
        assert_eq!(
            (e.sndr().0, e.dest().0, e.etype().as_str(), e.ack()),
            (4, 1, "cycle", true)
        );
    }

    #[test]
    fn make_event_rejects_empty_and_unknown() {
        let a = harddrive_alphabet();
        assert_eq!(
            a.make_event(InstanceId(0), InstanceId(0), "", false),
            Err(EventError::UnknownEventType(String::new()))
        );
        assert!(matches!(
            a.make_event(InstanceId(1), InstanceId(0), "boot", false),
            Err(EventError::UnknownEventType(_))
        ));
        assert_eq!(EventType::new(""), Err(EventError::EmptyType));
        assert!(EventType::new("a-b").is_err());
    }

    #[test]
    fn ack_suffix() {
        let t = |s| EventType::new(s).unwrap();
        assert_eq!(ack_type_of(&t("cycle")).as_str(), "cycle_ack");
        assert_eq!(ack_type_of(&t("t")).as_str(), "t_ack");
        assert_eq!(ack_type_of(&t("a_ack")).as_str(), "a_ack_ack");
    }

    #[test]
    fn serializes_as_tuple() {
        let a = harddrive_alphabet();
        let e = a
            .make_event(InstanceId(3), InstanceId(1), "read", true)
            .unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"[3,1,"read",1]"#);
        assert_eq!(e.to_string(), r#"(3,1,"read",1)"#);
    }

    #[test]
    fn sentinel_is_not_constructible_through_alphabet() {
        let s = Event::sentinel();
        assert_eq!(s.etype().as_str(), "");
        assert!(!harddrive_alphabet().contains(""));
    }
}
