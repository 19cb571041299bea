//! Chart a random ordinary pattern and report its loops.
//!
//! Usage: cargo run --example stitch_chart [-- SEED]

use hitomezashi::grid::{generate_window, random_labeling, Window};
use hitomezashi::loops::{loop_metrics, loops_of};
use hitomezashi::render::{render_pattern_svg, RenderStyle};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let labeling = random_labeling(1, 1, 1, 1, Window::new(0, 24, 0, 24), seed).unwrap();
    let pattern = generate_window(&labeling);
    std::fs::create_dir_all("target/charts").unwrap();
    let path = format!("target/charts/random_{seed}.svg");
    let style = RenderStyle {
        grid: true,
        ..RenderStyle::default()
    };
    std::fs::write(&path, render_pattern_svg(&pattern, None, &style)).unwrap();
    println!("{} stitches charted to {path}", pattern.stitches.len());
    let mut loops = loops_of(&pattern);
    loops.sort_by_key(|l| std::cmp::Reverse(l.vertices().len()));
    println!("{} interior loops; the largest:", loops.len());
    for l in loops.iter().take(5) {
        let m = loop_metrics(l).unwrap();
        println!(
            "  {} x {}, length {}, area {} (length mod 8 = {}, area mod 4 = {})",
            m.width,
            m.height,
            m.length,
            m.area,
            m.length % 8,
            m.area.to_integer() % 4
        );
    }
}
