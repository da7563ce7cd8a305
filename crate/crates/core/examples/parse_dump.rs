//! Parses a program and prints its compiled form.
//!
//! ```text
//! cargo run --example parse_dump -- [file.pep]
//! ```

use pepvm::frontend::{dump_program, parse_program};

fn main() {
    let src = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).expect("readable file"),
        None => include_str!("harddrive.pep").to_string(),
    };
    match parse_program(&src) {
        Ok(p) => print!("{}", dump_program(&p)),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
