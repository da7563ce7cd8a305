//! Checks over every interleaving that a machine reaction wins over a
//! regular reaction for the same event type.

use pepvm::{explore_with, parse_program, SystemState};

fn main() {
    let program = parse_program(include_str!("priority.pep")).unwrap();
    let state = SystemState::boot(program).unwrap();
    let (mut a, mut b) = (0, 0);
    let report = explore_with(&state, 30, |s, _| {
        if let Some(root) = s.world.instances.get(&pepvm::InstanceId(1)) {
            match root.prog.state() {
                "a" => a += 1,
                "b" => b += 1,
                _ => {}
            }
        }
    })
    .unwrap();
    println!(
        "{} states; root in state a: {a}, in state b: {b}; deadlocks: {}",
        report.state_count,
        report.deadlocks.len()
    );
}
