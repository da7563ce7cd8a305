//! Interpreter and interleaving runtime for PEP, a language of state
//! machines that communicate only through events.
//!
//! A program is parsed by [`frontend`], booted into a [`SystemState`] made
//! of machine control and instances, and then either run under a
//! scheduling [`policy`](engine::policy) or explored exhaustively to a
//! bounded depth.
//!
//! ```
//! use pepvm::engine::policy::Seeded;
//! use pepvm::{parse_program, Outcome, SystemState};
//!
//! let program = parse_program(r#"
//!     machine Main {
//!         init state start(e) { <work>; => halt; }
//!     }
//!     ctl.run(Main);
//! "#).unwrap();
//! let mut state = SystemState::boot(program).unwrap();
//! let report = state.run(&mut Seeded::new(0), 1_000).unwrap();
//! assert_eq!(report.outcome, Outcome::Terminated);
//! ```

pub mod cli;
pub mod control;
pub mod engine;
pub mod events;
pub mod frontend;
pub mod instance;
pub mod queue;
pub mod table;
pub mod trace;

pub use engine::explore::{explore, explore_with, Report};
pub use engine::{EngineConfig, EngineError, Outcome, ProcessId, Step, SystemState};
pub use events::{Alphabet, Event, EventType, InstanceId};
pub use frontend::{parse_program, FrontendError, ProgramDef};
pub use trace::{export_msc, export_trace, TraceEntry, TraceMeta};
