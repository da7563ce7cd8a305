//! Runs the broadcast program under many seeds and checks where each
//! event was delivered.

use pepvm::engine::label::{ActionName, Subscript};
use pepvm::engine::policy::Seeded;
use pepvm::{parse_program, SystemState};

fn main() {
    let program = parse_program(include_str!("broadcast.pep")).unwrap();
    let mut deliveries = 0;
    for seed in 0..200 {
        let mut state = SystemState::boot(program.clone()).unwrap();
        let report = state.run(&mut Seeded::new(seed), 100_000).unwrap();
        for e in report
            .trace
            .iter()
            .filter(|e| e.is_comm(ActionName::Distrib))
        {
            let (Some(label), Some(ev)) = (&e.label, &e.event) else {
                continue;
            };
            let Subscript::Inst(target) = label.sub else {
                continue;
            };
            assert_ne!(target, ev.sndr(), "broadcast delivered to its sender");
            if !ev.dest().is_none() {
                assert_eq!(target, ev.dest(), "directed event delivered elsewhere");
            }
            deliveries += 1;
        }
    }
    println!("200 runs, {deliveries} deliveries, none to the sender");
}
