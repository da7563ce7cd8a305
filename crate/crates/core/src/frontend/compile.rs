//! Validation and lowering of surface statements to [`Action`] sequences.

use std::collections::{BTreeMap, BTreeSet};

use super::parser::SurfaceProgram;
use super::{
    Action, FrontendError, MachineDef, Pos, ProgramDef, StateDef, Stmt, StmtKind, CTX_VAR,
    HALT_STATE, LISTEN_STATE,
};
use crate::events::{ack_type_of, Alphabet, EventType, Name};

pub(super) fn build_program(surface: SurfaceProgram) -> Result<ProgramDef, FrontendError> {
    let mut machines = BTreeMap::new();
    let mut machine_pos = BTreeMap::new();
    for m in surface.machines {
        if machines.contains_key(&m.name) {
            return Err(FrontendError::Duplicate {
                what: "machine",
                name: m.name.to_string(),
                pos: m.pos,
            });
        }
        let mut vars = BTreeSet::from([Name::from(CTX_VAR)]);
        for (v, pos) in m.vars {
            if !vars.insert(v.clone()) {
                return Err(FrontendError::Duplicate {
                    what: "variable",
                    name: v.to_string(),
                    pos,
                });
            }
        }
        let mut states = BTreeMap::new();
        let mut init: Option<Name> = None;
        for (state, is_init) in m.states {
            if state.name.as_ref() == LISTEN_STATE || state.name.as_ref() == HALT_STATE {
                return Err(FrontendError::ReservedStateName {
                    name: state.name.to_string(),
                    pos: state.pos,
                });
            }
            if is_init {
                if init.is_some() {
                    return Err(FrontendError::Duplicate {
                        what: "init state",
                        name: state.name.to_string(),
                        pos: state.pos,
                    });
                }
                init = Some(state.name.clone());
            }
            if states.contains_key(&state.name) {
                return Err(FrontendError::Duplicate {
                    what: "state",
                    name: state.name.to_string(),
                    pos: state.pos,
                });
            }
            states.insert(state.name.clone(), state);
        }
        let init = init.ok_or_else(|| FrontendError::MissingInitState {
            machine: m.name.to_string(),
        })?;
        machine_pos.insert(m.name.clone(), m.pos);
        machines.insert(
            m.name.clone(),
            MachineDef {
                name: m.name,
                vars,
                states,
                init,
            },
        );
    }

    let (entry, entry_pos) = surface.run;
    if !machines.contains_key(&entry) {
        return Err(FrontendError::UnknownMachine {
            name: entry.to_string(),
            pos: entry_pos,
        });
    }

    for m in machines.values() {
        for state in m.states.values() {
            check_started_machines(&state.body, &machines)?;
            compile_state(m, &state.name)?;
        }
    }

    let mut program = ProgramDef {
        machines,
        entry,
        alphabet: Alphabet::default(),
    };
    program.alphabet = compute_alphabet(&program);
    Ok(program)
}

fn check_started_machines(
    body: &[Stmt],
    machines: &BTreeMap<Name, MachineDef>,
) -> Result<(), FrontendError> {
    for stmt in body {
        match &stmt.kind {
            StmtKind::Start { machine, .. } if !machines.contains_key(machine) => {
                return Err(FrontendError::UnknownMachine {
                    name: machine.to_string(),
                    pos: stmt.pos,
                })
            }
            StmtKind::Choice(branches) => {
                for b in branches {
                    check_started_machines(b, machines)?;
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn visit_stmts(body: &[Stmt], f: &mut impl FnMut(&StmtKind)) {
    for stmt in body {
        f(&stmt.kind);
        if let StmtKind::Choice(branches) = &stmt.kind {
            for b in branches {
                visit_stmts(b, f);
            }
        }
    }
}

/// All literal event types, plus `"halt"`, plus `t_ack` for every
/// emit-with-acknowledgment of `t`.
pub fn compute_alphabet(program: &ProgramDef) -> Alphabet {
    let mut types = BTreeSet::from([EventType::halt()]);
    for m in program.machines.values() {
        for state in m.states.values() {
            visit_stmts(&state.body, &mut |kind| {
                let (etype, ack) = match kind {
                    StmtKind::When { etype, .. } | StmtKind::Ignore { etype, .. } => (etype, false),
                    StmtKind::Emit {
                        etype, ack_target, ..
                    } => (etype, ack_target.is_some()),
                    _ => return,
                };
                // Types were validated when the state compiled.
                if let Ok(t) = EventType::new(etype) {
                    if ack {
                        types.insert(ack_type_of(&t));
                    }
                    types.insert(t);
                }
            });
        }
    }
    Alphabet::new(types)
}

struct Scope<'a> {
    machine: &'a MachineDef,
    state: &'a StateDef,
}

impl Scope<'_> {
    fn var(&self, name: &Name, pos: Pos) -> Result<Name, FrontendError> {
        if self.machine.vars.contains(name) {
            Ok(name.clone())
        } else {
            Err(self.unknown_var(name, pos))
        }
    }

    fn unknown_var(&self, name: &str, pos: Pos) -> FrontendError {
        FrontendError::UnknownVariable {
            name: name.to_string(),
            machine: self.machine.name.to_string(),
            state: self.state.name.to_string(),
            pos,
        }
    }

    fn target(&self, name: &Name, pos: Pos) -> Result<Name, FrontendError> {
        if self.machine.has_state(name) {
            Ok(name.clone())
        } else {
            Err(FrontendError::UnknownState {
                name: name.to_string(),
                machine: self.machine.name.to_string(),
                pos,
            })
        }
    }

    fn etype(&self, name: &str, pos: Pos) -> Result<EventType, FrontendError> {
        EventType::new(name).map_err(|_| FrontendError::InvalidEventType {
            name: name.to_string(),
            pos,
        })
    }

    fn lower(&self, stmts: &[Stmt]) -> Result<Vec<Action>, FrontendError> {
        let mut out = Vec::with_capacity(stmts.len() + 1);
        for (i, stmt) in stmts.iter().enumerate() {
            let pos = stmt.pos;
            let action = match &stmt.kind {
                StmtKind::Goto(target) => {
                    if let Some(next) = stmts.get(i + 1) {
                        return Err(FrontendError::Unreachable { pos: next.pos });
                    }
                    out.push(Action::Transition(self.target(target, pos)?));
                    return Ok(out);
                }
                StmtKind::Choice(branches) => {
                    let rest = &stmts[i + 1..];
                    let mut lowered = Vec::with_capacity(branches.len());
                    for branch in branches {
                        let mut body = branch.clone();
                        let ends_in_goto = matches!(
                            branch.last(),
                            Some(Stmt {
                                kind: StmtKind::Goto(_),
                                ..
                            })
                        );
                        if !ends_in_goto {
                            body.extend_from_slice(rest);
                        }
                        let mut actions = self.lower(&body)?;
                        // A branch must start with a step of its own, so a bare
                        // transition is guarded by an internal step named after it.
                        if let Some(Action::Transition(s)) = actions.first() {
                            actions.insert(0, Action::Opaque(s.clone()));
                        }
                        lowered.push(actions);
                    }
                    out.push(Action::Choice(lowered));
                    return Ok(out);
                }
                StmtKind::Start { var, machine } => Action::StartMachine {
                    var: self.var(var, pos)?,
                    machine: machine.clone(),
                },
                StmtKind::Emitter { var, event } => {
                    if *event != self.state.param {
                        return Err(self.unknown_var(event, pos));
                    }
                    Action::AssignEmitter(self.var(var, pos)?)
                }
                StmtKind::When {
                    machine,
                    etype,
                    target,
                } => Action::SetReaction {
                    machine: machine.as_ref().map(|m| self.var(m, pos)).transpose()?,
                    etype: self.etype(etype, pos)?,
                    state: self.target(target, pos)?,
                },
                StmtKind::Ignore { machine, etype } => Action::UnsetReaction {
                    machine: machine.as_ref().map(|m| self.var(m, pos)).transpose()?,
                    etype: self.etype(etype, pos)?,
                },
                StmtKind::Emit {
                    etype,
                    to,
                    ack_target,
                } => Action::Emit {
                    etype: self.etype(etype, pos)?,
                    to: to.as_ref().map(|m| self.var(m, pos)).transpose()?,
                    ack_state: ack_target
                        .as_ref()
                        .map(|s| self.target(s, pos))
                        .transpose()?,
                },
                StmtKind::Opaque(label) => Action::Opaque(label.clone()),
            };
            out.push(action);
        }
        out.push(Action::Transition(Name::from(LISTEN_STATE)));
        Ok(out)
    }
}

/// Compiles the body of user state `state` of `machine`.
///
/// Every branch of the result ends in a [`Action::Transition`]; a body
/// without one transitions to `listen`.
pub fn compile_state(machine: &MachineDef, state: &str) -> Result<Vec<Action>, FrontendError> {
    let def = machine
        .states
        .get(state)
        .ok_or_else(|| FrontendError::UnknownState {
            name: state.to_string(),
            machine: machine.name.to_string(),
            pos: Pos::default(),
        })?;
    Scope {
        machine,
        state: def,
    }
    .lower(&def.body)
}
