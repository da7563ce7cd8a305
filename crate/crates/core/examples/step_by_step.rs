//! Drives the engine by hand: lists the enabled steps and takes the first
//! one that is not an empty-queue poll, printing what happened.

use pepvm::engine::label::ActionName;
use pepvm::{parse_program, SystemState};

const PROGRAM: &str = r#"
machine Main {
    w = null;
    init state boot(e) {
        w = ctl.start(Worker, null);
        when w emits "done" => finish;
    }
    state finish(e) {
        <finish>;
        => halt;
    }
}

machine Worker {
    init state work(e) {
        <work>;
        emit ("done") to ctx;
    }
}

ctl.run(Main);
"#;

fn main() {
    let mut state = SystemState::boot(parse_program(PROGRAM).unwrap()).unwrap();
    for _ in 0..200 {
        let steps = state.enabled();
        let Some(step) = steps
            .iter()
            .find(|s| s.label().name != ActionName::Qempty)
            .or(steps.first())
        else {
            break;
        };
        println!("{} enabled, taking {step}", steps.len());
        for entry in state.step(step).unwrap() {
            if entry.label.is_none() {
                println!("    {} {}", entry.label_text(), entry.actors.join(", "));
            }
        }
    }
    println!("terminated: {}", state.is_terminated());
}
