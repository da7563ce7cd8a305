//! Trace records, the JSONL trace format and Mermaid sequence-diagram export.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::control::DropReason;
use crate::engine::label::{ActionLabel, ActionName, Payload, QueueId, Subscript};
use crate::events::{Event, InstanceId, Name};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Comm,
    Solo,
    Drop(DropReason),
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Comm => "comm",
            EntryKind::Solo => "solo",
            EntryKind::Drop(_) => "drop",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: u64,
    pub kind: EntryKind,
    /// The communicated label for `comm`, the action for `solo`, none for `drop`.
    pub label: Option<ActionLabel>,
    pub actors: Vec<String>,
    pub event: Option<Event>,
}

impl TraceEntry {
    /// `label` rendered; for drops, the reason.
    pub fn label_text(&self) -> String {
        match (&self.label, self.kind) {
            (Some(l), _) => l.to_string(),
            (None, EntryKind::Drop(r)) => r.as_str().to_string(),
            (None, _) => String::new(),
        }
    }

    pub fn is_comm(&self, name: ActionName) -> bool {
        self.kind == EntryKind::Comm && self.label.as_ref().is_some_and(|l| l.name == name)
    }
}

impl Serialize for TraceEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TraceEntry", 7)?;
        s.serialize_field("step", &self.step)?;
        s.serialize_field("kind", self.kind.as_str())?;
        s.serialize_field("label", &self.label_text())?;
        s.serialize_field("name", &self.label.as_ref().map(|l| l.name.as_str()))?;
        s.serialize_field("sub", &self.label.as_ref().map(|l| l.sub.to_string()))?;
        s.serialize_field("actors", &self.actors)?;
        s.serialize_field("event", &self.event)?;
        s.end()
    }
}

/// First line of a trace file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMeta {
    pub program: String,
    pub entry: String,
    pub policy: String,
    pub seed: u64,
}

impl Serialize for TraceMeta {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TraceMeta", 5)?;
        s.serialize_field("kind", "meta")?;
        s.serialize_field("program", &self.program)?;
        s.serialize_field("entry", &self.entry)?;
        s.serialize_field("policy", &self.policy)?;
        s.serialize_field("seed", &self.seed)?;
        s.end()
    }
}

fn json_line<T: Serialize>(sink: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *sink, value)?;
    sink.write_all(b"\n")
}

/// Streams a JSONL trace: the meta header, then one record per entry.
pub struct TraceWriter<W: Write> {
    sink: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut sink: W, meta: &TraceMeta) -> io::Result<Self> {
        json_line(&mut sink, meta)?;
        Ok(TraceWriter { sink })
    }

    pub fn write(&mut self, entry: &TraceEntry) -> io::Result<()> {
        json_line(&mut self.sink, entry)
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.sink.flush()?;
        Ok(self.sink)
    }
}

pub fn export_trace<'a>(
    meta: &TraceMeta,
    entries: impl IntoIterator<Item = &'a TraceEntry>,
    sink: &mut dyn Write,
) -> io::Result<()> {
    let mut w = TraceWriter::new(sink, meta)?;
    for e in entries {
        w.write(e)?;
    }
    w.finish().map(|_| ())
}

/// Builds a Mermaid `sequenceDiagram` incrementally from trace entries.
#[derive(Debug, Clone)]
pub struct MscBuilder {
    verbose: bool,
    names: BTreeMap<InstanceId, String>,
    pending_start: BTreeMap<InstanceId, Name>,
    lines: Vec<String>,
}

impl MscBuilder {
    /// `entry` is the machine of instance 1.
    pub fn new(entry: &str, verbose: bool) -> Self {
        MscBuilder {
            verbose,
            names: BTreeMap::from([(InstanceId(1), format!("{entry}_1"))]),
            pending_start: BTreeMap::new(),
            lines: Vec::new(),
        }
    }

    fn name(&self, id: InstanceId) -> String {
        self.names
            .get(&id)
            .cloned()
            .unwrap_or_else(|| format!("I_{id}"))
    }

    /// The participant that owns the subprocess named by `sub`.
    fn owner(&self, sub: Subscript) -> String {
        match sub {
            Subscript::Inst(n)
            | Subscript::In(n)
            | Subscript::Out(n)
            | Subscript::Ctx(n)
            | Subscript::Reactions(n)
            | Subscript::Q(QueueId::In(n) | QueueId::Out(n)) => self.name(n),
            Subscript::Mc | Subscript::McIn | Subscript::Q(QueueId::Mc) => "MC".to_string(),
        }
    }

    pub fn push(&mut self, entry: &TraceEntry) {
        let Some(label) = &entry.label else {
            if self.verbose {
                if let (EntryKind::Drop(reason), Some(e)) = (entry.kind, &entry.event) {
                    let who = match reason {
                        DropReason::NoReaction => {
                            prog_actor(entry).map_or("MC".to_string(), |n| self.name(n))
                        }
                        DropReason::DeadDest => "MC".to_string(),
                    };
                    self.lines.push(format!(
                        "    Note over {who} : drop {} {}",
                        reason.as_str(),
                        e
                    ));
                }
            }
            return;
        };
        let arrow = match (entry.kind, label.name, label.sub, &label.payload) {
            (EntryKind::Comm, ActionName::Out, Subscript::Inst(n), Payload::Event(e)) => {
                Some(format!("{} ->> MC : out {}", self.name(n), e.etype()))
            }
            (EntryKind::Comm, ActionName::Distrib, Subscript::Inst(n), Payload::Event(e)) => {
                Some(format!("MC ->> {} : distrib {}", self.name(n), e.etype()))
            }
            (EntryKind::Comm, ActionName::Start, Subscript::Inst(n), Payload::Machine(m)) => {
                self.pending_start.insert(n, m.clone());
                Some(format!("{} ->> MC : start {m}", self.name(n)))
            }
            (EntryKind::Comm, ActionName::NewId, Subscript::Inst(n), Payload::Id(id)) => {
                if let Some(m) = self.pending_start.remove(&n) {
                    self.names.insert(*id, format!("{m}_{id}"));
                }
                Some(format!("MC ->> {} : new_id {id}", self.name(n)))
            }
            (EntryKind::Comm, ActionName::Halt, Subscript::Inst(n), _) => {
                Some(format!("{} ->> MC : halt", self.name(n)))
            }
            _ => None,
        };
        match arrow {
            Some(a) => self.lines.push(format!("    {a}")),
            None if self.verbose => {
                let who = self.owner(label.sub);
                self.lines.push(format!("    Note over {who} : {label}"));
            }
            None => {}
        }
    }

    pub fn finish(&self, sink: &mut dyn Write) -> io::Result<()> {
        writeln!(sink, "sequenceDiagram")?;
        writeln!(sink, "    participant MC")?;
        for name in self.names.values() {
            writeln!(sink, "    participant {name}")?;
        }
        for l in &self.lines {
            writeln!(sink, "{l}")?;
        }
        sink.flush()
    }
}

/// The instance of a `prog(n)` actor.
fn prog_actor(entry: &TraceEntry) -> Option<InstanceId> {
    let a = entry.actors.first()?;
    a.strip_prefix("prog(")?
        .strip_suffix(')')?
        .parse()
        .ok()
        .map(InstanceId)
}

pub fn export_msc<'a>(
    entry_machine: &str,
    entries: impl IntoIterator<Item = &'a TraceEntry>,
    sink: &mut dyn Write,
    verbose: bool,
) -> io::Result<()> {
    let mut b = MscBuilder::new(entry_machine, verbose);
    for e in entries {
        b.push(e);
    }
    b.finish(sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::label::{ActionLabel, Polarity};
    use crate::events::EventType;

    fn ev(s: u64, d: u64, t: &str) -> Event {
        Event::new_unchecked(
            InstanceId(s),
            InstanceId(d),
            EventType::new(t).unwrap(),
            false,
        )
    }

    fn comm(
        step: u64,
        name: ActionName,
        sub: Subscript,
        payload: Payload,
        actors: [&str; 2],
    ) -> TraceEntry {
        let label = ActionLabel::new(name, sub, Polarity::Comm, payload);
        TraceEntry {
            step,
            kind: EntryKind::Comm,
            event: label.event().cloned(),
            label: Some(label),
            actors: actors.map(String::from).to_vec(),
        }
    }

    fn msc(entries: &[TraceEntry], verbose: bool) -> String {
        let mut out = Vec::new();
        export_msc("CPU", entries, &mut out, verbose).unwrap();
        String::from_utf8(out).unwrap()
    }

    fn start_prog_a() -> Vec<TraceEntry> {
        let one = Subscript::Inst(InstanceId(1));
        vec![
            comm(
                0,
                ActionName::Start,
                one,
                Payload::Machine("ProgA".into()),
                ["prog(1)", "MC.sched"],
            ),
            comm(
                1,
                ActionName::NewId,
                one,
                Payload::Id(InstanceId(3)),
                ["MC.sched", "prog(1)"],
            ),
        ]
    }

    #[test]
    fn empty_trace_has_only_the_header() {
        assert_eq!(
            msc(&[], false),
            "sequenceDiagram\n    participant MC\n    participant CPU_1\n"
        );
    }

    #[test]
    fn output_becomes_an_arrow_to_machine_control() {
        let mut entries = start_prog_a();
        entries.push(comm(
            2,
            ActionName::Out,
            Subscript::Inst(InstanceId(3)),
            Payload::Event(ev(3, 1, "read")),
            ["out(3)", "MC.in"],
        ));
        let text = msc(&entries, false);
        assert_eq!(
            text,
            "sequenceDiagram\n    participant MC\n    participant CPU_1\n    participant ProgA_3\n    \
             CPU_1 ->> MC : start ProgA\n    MC ->> CPU_1 : new_id 3\n    ProgA_3 ->> MC : out read\n"
        );
    }

    #[test]
    fn verbose_adds_notes_for_other_traffic() {
        let entries = vec![comm(
            0,
            ActionName::Enq,
            Subscript::In(InstanceId(1)),
            Payload::Event(ev(2, 1, "read")),
            ["in(1)", "q(in(1))"],
        )];
        assert!(!msc(&entries, false).contains("Note"));
        assert!(
            msc(&entries, true).contains("    Note over CPU_1 : enq''_in(1)((2,1,\"read\",0))\n")
        );
    }

    #[test]
    fn jsonl_records() {
        let meta = TraceMeta {
            program: "p.pep".into(),
            entry: "CPU".into(),
            policy: "seeded".into(),
            seed: 7,
        };
        let drop = TraceEntry {
            step: 3,
            kind: EntryKind::Drop(DropReason::DeadDest),
            label: None,
            actors: vec!["MC.sched".into()],
            event: Some(ev(2, 9, "read")),
        };
        let mut entries = start_prog_a();
        entries.push(drop);
        let mut out = Vec::new();
        export_trace(&meta, &entries, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            r#"{"kind":"meta","program":"p.pep","entry":"CPU","policy":"seeded","seed":7}"#
        );
        assert_eq!(
            lines[1],
            r#"{"step":0,"kind":"comm","label":"start''_1(\"ProgA\")","name":"start","sub":"1","actors":["prog(1)","MC.sched"],"event":null}"#
        );
        assert_eq!(
            lines[3],
            r#"{"step":3,"kind":"drop","label":"dead-dest","name":null,"sub":null,"actors":["MC.sched"],"event":[2,9,"read",0]}"#
        );
    }
}
