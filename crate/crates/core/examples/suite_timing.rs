//! Runs each check of the default suite and prints its verdict and wall time.
//!
//! `cargo run --release --example suite_timing -- [degree] [check-id...]`

use holoball::harness::{run_check, CheckEntry, CheckId};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let degree = args.first().and_then(|a| a.parse().ok()).unwrap_or(32);
    let ids: Vec<CheckId> = if args.len() > 1 {
        args[1..].iter().map(|a| a.parse().expect("registered check id")).collect()
    } else {
        CheckId::ALL.to_vec()
    };
    let start = Instant::now();
    for id in ids {
        let t = Instant::now();
        match run_check(&CheckEntry::new(id), 0, degree) {
            Ok(r) => println!("{:<34} {:>7.2}s {:?}: {}", id.name(), t.elapsed().as_secs_f64(), r.verdict, r.reason),
            Err(e) => println!("{:<34} {:>7.2}s error: {e}", id.name(), t.elapsed().as_secs_f64()),
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
}
