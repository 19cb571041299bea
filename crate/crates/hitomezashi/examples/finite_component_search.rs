//! Seeded randomized search for finite connected components in patterns
//! whose stitch directions form an arbitrary non-parallel set.
//!
//! With two directions these are ordinary loops and turn up immediately.
//! With the sheared triangular set the finite components are rarer, and
//! every one found has a vertex count divisible by 16; a find that broke
//! that divisibility would be a counterexample to the conjecture and is
//! flagged loudly. With the four-direction set finite components are rarer
//! still; this demo uses a small budget, so finding none here is normal.

use hitomezashi::grid::Window;
use hitomezashi::multigrid::*;

fn main() {
    let cases: Vec<(&str, DirectionSet, u64, i64)> = vec![
        ("ordinary", DirectionSet::ordinary(), 50, 16),
        ("triangular", DirectionSet::triangular(), 30_000, 48),
        (
            "four-direction",
            DirectionSet::new(&[(1, 0), (0, 1), (1, 1), (-1, 1)]).unwrap(),
            30_000,
            48,
        ),
    ];
    for (name, dirs, budget, side) in cases {
        let out = search_finite_components(&dirs, 1, budget, Window::square(side), None);
        let distinct = out.distinct_components();
        println!(
            "{name}: {} finite components ({} distinct) in {} trials on a side-{side} window",
            out.found.len(),
            distinct.len(),
            out.trials_run
        );
        for f in distinct.iter().take(4) {
            let check = check_divisibility_16(&f.component);
            let divisible = if dirs.len() == 3 {
                format!(", divisible by 16: {}", check.consistent)
            } else {
                String::new()
            };
            println!(
                "  trial {}: {} vertices{divisible}",
                f.trial, check.vertex_count
            );
            if dirs.len() == 3 {
                assert!(
                    check.consistent,
                    "COUNTEREXAMPLE: {} vertices",
                    check.vertex_count
                );
                let pattern = generate_phi(&dirs, &f.labeling).unwrap();
                let hist = vertex_histogram(&pattern, &f.component).unwrap();
                println!("    vertex types: {:?}", hist.counts);
            }
        }
    }
}
