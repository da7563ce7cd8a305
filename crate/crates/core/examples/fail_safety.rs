//! Explores the halt race with and without the handlers' halt option.
//!
//! Root starts Child and halts immediately, while Child emits an event.
//! Without the halt option, an event handler that holds the event when the
//! halt request arrives can never finish, and the system gets stuck.
//!
//! ```text
//! cargo run --release --example fail_safety -- [depth]
//! ```

use pepvm::{explore, parse_program, EngineConfig, SystemState};

fn main() {
    let depth = std::env::args()
        .nth(1)
        .map(|d| d.parse().expect("depth must be a number"))
        .unwrap_or(20);
    let program = parse_program(include_str!("haltrace.pep")).expect("fixture parses");

    for fail_safe in [true, false] {
        let state = SystemState::boot_with(program.clone(), EngineConfig { fail_safe })
            .expect("fixture compiles");
        let report = explore(&state, depth).expect("exploration");
        println!(
            "fail_safe={fail_safe}: {} states, {} deadlocks{}",
            report.state_count,
            report.deadlocks.len(),
            if report.truncated { " (truncated)" } else { "" }
        );
        if let Some(w) = report.deadlocks.first() {
            println!("  shortest witness ({} steps), last entries:", w.depth);
            for e in w.trace.iter().rev().take(6).rev() {
                println!(
                    "    {:>3} {} [{}]",
                    e.step,
                    e.label_text(),
                    e.actors.join(", ")
                );
            }
        }
    }
}
