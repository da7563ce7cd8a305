//! PEP surface language: lexer, parser and compiler to [`Action`] programs.
//!
//! ```text
//! machine ProgB {
//!     init state cycle(e) {
//!         emit ("cycle") to ctx => cycle;
//!     }
//! }
//! ctl.run(ProgB);
//! ```

mod compile;
mod dump;
mod lexer;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::events::{Alphabet, EventType, Name};

pub use compile::{compile_state, compute_alphabet};
pub use dump::dump_program;

/// Name of the implicit variable holding the context id.
pub const CTX_VAR: &str = "ctx";
pub const LISTEN_STATE: &str = "listen";
pub const HALT_STATE: &str = "halt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("machine `{machine}` has no init state")]
    MissingInitState { machine: String },
    #[error("unknown machine `{name}` at {pos}")]
    UnknownMachine { name: String, pos: Pos },
    #[error("unknown variable `{name}` at {pos} in {machine}.{state}")]
    UnknownVariable {
        name: String,
        machine: String,
        state: String,
        pos: Pos,
    },
    #[error("unknown state `{name}` at {pos} in machine `{machine}`")]
    UnknownState {
        name: String,
        machine: String,
        pos: Pos,
    },
    #[error("state name `{name}` at {pos} is reserved")]
    ReservedStateName { name: String, pos: Pos },
    #[error("duplicate {what} `{name}` at {pos}")]
    Duplicate {
        what: &'static str,
        name: String,
        pos: Pos,
    },
    #[error("unreachable statement at {pos}: a transition must end its block")]
    Unreachable { pos: Pos },
    #[error("invalid event type {name:?} at {pos}")]
    InvalidEventType { name: String, pos: Pos },
}

impl FrontendError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        FrontendError::Syntax {
            pos,
            message: message.into(),
        }
    }
}

/// Surface statement of a state body, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    /// `=> s;`
    Goto(Name),
    /// `v = ctl.start(M, null);`
    Start { var: Name, machine: Name },
    /// `v = e.emitter;`
    Emitter { var: Name, event: Name },
    /// `when "t" => s;` and `when m emits "t" => s;`
    When {
        machine: Option<Name>,
        etype: Name,
        target: Name,
    },
    /// `ignore when "t";` and `ignore when m emits "t";`
    Ignore { machine: Option<Name>, etype: Name },
    /// `emit ("t") [to m] [=> s];`
    Emit {
        etype: Name,
        to: Option<Name>,
        ack_target: Option<Name>,
    },
    /// `<label>;`
    Opaque(Name),
    /// `{ ... } or { ... }`
    Choice(Vec<Vec<Stmt>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDef {
    pub name: Name,
    /// Name of the event parameter (`e` in `state s(e)`).
    pub param: Name,
    pub body: Vec<Stmt>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineDef {
    pub name: Name,
    /// Declared variables plus the implicit `ctx`.
    pub vars: BTreeSet<Name>,
    /// User-defined states; `listen` and `halt` are implicit.
    pub states: BTreeMap<Name, StateDef>,
    pub init: Name,
}

impl MachineDef {
    pub fn has_state(&self, name: &str) -> bool {
        name == LISTEN_STATE || name == HALT_STATE || self.states.contains_key(name)
    }
}

/// A compiled primitive action of a state body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Transition(Name),
    StartMachine {
        var: Name,
        machine: Name,
    },
    SetReaction {
        machine: Option<Name>,
        etype: EventType,
        state: Name,
    },
    UnsetReaction {
        machine: Option<Name>,
        etype: EventType,
    },
    Emit {
        etype: EventType,
        to: Option<Name>,
        ack_state: Option<Name>,
    },
    AssignEmitter(Name),
    Opaque(Name),
    Choice(Vec<Vec<Action>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramDef {
    pub machines: BTreeMap<Name, MachineDef>,
    pub entry: Name,
    pub alphabet: Alphabet,
}

impl ProgramDef {
    pub fn machine(&self, name: &str) -> Option<&MachineDef> {
        self.machines.get(name)
    }
}

/// Parses and validates a complete PEP program.
pub fn parse_program(source: &str) -> Result<ProgramDef, FrontendError> {
    let tokens = lexer::tokenize(source)?;
    let surface = parser::Parser::new(tokens).program()?;
    compile::build_program(surface)
}

#[cfg(test)]
mod tests;
