//! Canonical text rendering of a compiled program, used by `pep parse --dump-ast`.

use std::fmt::Write;

use super::{compile_state, Action, ProgramDef};

fn line(out: &mut String, depth: usize, text: impl AsRef<str>) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(text.as_ref());
    out.push('\n');
}

fn render_action(out: &mut String, depth: usize, action: &Action) {
    let text = match action {
        Action::Transition(s) => format!("transition {s}"),
        Action::StartMachine { var, machine } => format!("start {machine} -> {var}"),
        Action::SetReaction {
            machine: None,
            etype,
            state,
        } => format!("when \"{etype}\" => {state}"),
        Action::SetReaction {
            machine: Some(m),
            etype,
            state,
        } => format!("when {m} emits \"{etype}\" => {state}"),
        Action::UnsetReaction {
            machine: None,
            etype,
        } => format!("ignore when \"{etype}\""),
        Action::UnsetReaction {
            machine: Some(m),
            etype,
        } => format!("ignore when {m} emits \"{etype}\""),
        Action::Emit {
            etype,
            to,
            ack_state,
        } => {
            let mut s = format!("emit \"{etype}\"");
            if let Some(m) = to {
                let _ = write!(s, " to {m}");
            }
            if let Some(st) = ack_state {
                let _ = write!(s, " => {st}");
            }
            s
        }
        Action::AssignEmitter(v) => format!("assign-emitter {v}"),
        Action::Opaque(l) => format!("opaque {l}"),
        Action::Choice(branches) => {
            line(out, depth, "choice");
            for b in branches {
                line(out, depth + 1, "branch");
                for a in b {
                    render_action(out, depth + 2, a);
                }
            }
            return;
        }
    };
    line(out, depth, text);
}

/// Renders `program` as an indented tree; machines, variables and states are
/// sorted by name so the output is stable.
pub fn dump_program(program: &ProgramDef) -> String {
    let mut out = String::new();
    line(&mut out, 0, "program");
    line(&mut out, 1, format!("entry {}", program.entry));
    let alphabet: Vec<&str> = program.alphabet.iter().map(|t| t.as_str()).collect();
    line(&mut out, 1, format!("alphabet {}", alphabet.join(" ")));
    for m in program.machines.values() {
        line(&mut out, 1, format!("machine {}", m.name));
        let vars: Vec<&str> = m.vars.iter().map(|v| v.as_ref()).collect();
        line(&mut out, 2, format!("vars {}", vars.join(" ")));
        line(&mut out, 2, format!("init {}", m.init));
        for s in m.states.values() {
            line(&mut out, 2, format!("state {}({})", s.name, s.param));
            // States were validated by `parse_program`.
            let actions = compile_state(m, &s.name).unwrap_or_default();
            for a in &actions {
                render_action(&mut out, 3, a);
            }
        }
    }
    out
}
