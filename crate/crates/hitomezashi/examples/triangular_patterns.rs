//! a-over-b stitching on the triangular grid is rigid: only 2-over-1 works,
//! and then the pattern is a honeycomb of side-2 hexagons, unique up to
//! translation (three window-distinct translates).
//!
//! The exhaustive offset search proves both halves at desk scale; the
//! honeycomb is also grown directly from a single seed stitch and charted
//! in true 60-degree geometry.

use hitomezashi::grid::{LatticePoint, Window};
use hitomezashi::multigrid::{ab_triangular_sat, make_21_triangular, TriSatOutcome};
use hitomezashi::render::{render_tri_svg, RenderStyle};

fn main() {
    for (a, b) in [(2i64, 1i64), (3, 1), (3, 2), (5, 2)] {
        let side = (4 * (a + b)).max(12);
        match ab_triangular_sat(a, b, side).expect("search") {
            TriSatOutcome::Sat(patterns) => {
                println!(
                    "({a},{b}) on side {side}: SAT with {} window-distinct patterns",
                    patterns.len()
                );
            }
            TriSatOutcome::Unsat(cert) => {
                println!(
                    "({a},{b}) on side {side}: UNSAT ({} nodes explored)",
                    cert.nodes_explored
                );
            }
        }
    }
    let window = Window::square(24);
    let pattern = make_21_triangular(0, LatticePoint::new(12, 12), window).expect("honeycomb");
    println!(
        "\nunique 2-over-1 pattern: {} stitches in a side-24 window",
        pattern.stitches.len()
    );
    std::fs::create_dir_all("target/charts").unwrap();
    let path = "target/charts/triangular_2_1.svg";
    std::fs::write(path, render_tri_svg(&pattern, &RenderStyle::default())).unwrap();
    println!("chart written to {path}");
}
