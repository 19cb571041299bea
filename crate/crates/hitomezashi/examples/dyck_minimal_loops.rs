//! The minimum-length loops of a given long dimension are counted by a
//! Catalan number: they biject with Dyck words, the short dimension being
//! twice the word's depth plus one. This example runs the census in both
//! directions against an independent word generator.

use hitomezashi::extremal::{dyck_census, dyck_words, loop_from_dyck, EnumGuard};
use hitomezashi::loops::loop_metrics;

fn main() {
    let guard = EnumGuard::default();
    for long in [5i64, 7, 9] {
        let census = dyck_census(long, &guard).expect("census cross-check");
        println!(
            "long dimension {long}: {} minimum-length loops = {} Dyck words of semilength {}",
            census.total_loops, census.word_count, census.semilength
        );
        for (short, count) in &census.per_short_dim {
            if *count > 0 {
                println!("  {count} of size {long} x {short}");
            }
        }
    }
    println!("\nwords of semilength 3 and the loops they build:");
    for word in dyck_words(3) {
        let l = loop_from_dyck(&word).unwrap();
        let m = loop_metrics(&l.as_loop()).unwrap();
        println!(
            "  {word:8} -> {} x {} loop of length {}",
            m.width, m.height, m.length
        );
    }
}
