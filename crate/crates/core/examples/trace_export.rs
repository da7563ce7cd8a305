//! Writes the JSONL trace and the sequence diagram of one run to stdout.
//!
//! ```text
//! cargo run --example trace_export -- [seed] [--verbose]
//! ```

use pepvm::engine::policy::Seeded;
use pepvm::{export_msc, export_trace, parse_program, SystemState, TraceMeta};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let verbose = args.iter().any(|a| a == "--verbose");
    let seed = args.iter().find_map(|a| a.parse().ok()).unwrap_or(0);

    let program = parse_program(include_str!("ack.pep")).unwrap();
    let entry = program.entry.to_string();
    let mut state = SystemState::boot(program).unwrap();
    let report = state.run(&mut Seeded::new(seed), 10_000).unwrap();

    let meta = TraceMeta {
        program: "ack.pep".into(),
        entry: entry.clone(),
        policy: "seeded".into(),
        seed,
    };
    let mut out = std::io::stdout().lock();
    export_trace(&meta, &report.trace, &mut out).unwrap();
    println!();
    export_msc(&entry, &report.trace, &mut out, verbose).unwrap();
}
