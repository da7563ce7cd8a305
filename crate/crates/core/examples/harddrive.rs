//! Runs the hard drive program under several seeds and both policies.
//!
//! ```text
//! cargo run --release --example harddrive
//! ```

use pepvm::engine::policy::{Policy, RoundRobin, Seeded};
use pepvm::{parse_program, SystemState};

fn main() {
    let program = parse_program(include_str!("harddrive.pep")).expect("program parses");
    let mut runs: Vec<(String, Box<dyn Policy>)> = (0..5)
        .map(|s| {
            (
                format!("seeded({s})"),
                Box::new(Seeded::new(s)) as Box<dyn Policy>,
            )
        })
        .collect();
    runs.push(("roundrobin".into(), Box::new(RoundRobin::new())));

    for (name, mut policy) in runs {
        let mut state = SystemState::boot(program.clone()).expect("program compiles");
        let report = state.run(policy.as_mut(), 1_000_000).expect("run");
        let events = report.trace.iter().filter(|e| e.event.is_some()).count();
        println!(
            "{name:>14}: {} after {} steps, {events} entries carry an event",
            report.outcome.as_str(),
            report.steps
        );
    }
}
