//! Finds the deadlock of a program that reads a variable nobody assigns,
//! and prints the witness.

use pepvm::{explore, parse_program, SystemState};

fn main() {
    let program = parse_program(include_str!("deadlock.pep")).unwrap();
    let state = SystemState::boot(program).unwrap();
    let report = explore(&state, 10).unwrap();
    println!(
        "{} states, {} deadlocks, truncated: {}",
        report.state_count,
        report.deadlocks.len(),
        report.truncated
    );
    for w in &report.deadlocks {
        println!("witness of {} steps:", w.depth);
        for e in &w.trace {
            println!("  {} {}", e.step, e.label_text());
        }
    }
    for (name, p) in state.world.instances.iter() {
        println!("instance {name} stuck in state {:?}", p.prog.state());
    }
}
