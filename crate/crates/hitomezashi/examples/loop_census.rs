//! Enumerate every loop of a given width and height modulo translation.
//!
//! Usage: cargo run --example loop_census [-- WIDTH HEIGHT]

use hitomezashi::extremal::{enumerate_loops, EnumGuard};
use hitomezashi::loops::loop_metrics;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let w: i64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(7);
    let h: i64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(9);
    let t = Instant::now();
    let result = enumerate_loops(w, h, &EnumGuard::default()).expect("enumeration");
    println!(
        "{} loops of width {w} and height {h} (modulo translation), {:?}",
        result.loops.len(),
        t.elapsed()
    );
    let mut by_length = std::collections::BTreeMap::<usize, usize>::new();
    for c in &result.loops {
        let m = loop_metrics(&c.as_loop()).unwrap();
        *by_length.entry(m.length).or_default() += 1;
    }
    println!("loops per length:");
    for (len, count) in by_length {
        println!("  length {len:3}: {count}");
    }
}
