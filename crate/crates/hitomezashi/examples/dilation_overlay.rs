//! Compose valid patterns by dilation: scaling g patterns by g and
//! overlaying them with shifts arranged by a permutation yields a valid
//! pattern with g-times-larger parameters. Three (3,1,2,2) patterns become
//! a (9,3,6,6) pattern.

use hitomezashi::cli::rotated_equal_pair_example;
use hitomezashi::grid::{default_margin, generate_window, validate_compatibility, Window};
use hitomezashi::longstitch::dilate_overlay;

fn main() {
    let window = Window::new(-12, 12, -12, 12);
    let v_bits = |seed: u8| -> Vec<u8> {
        (0..25)
            .map(|i| (i as u8).wrapping_mul(seed).wrapping_add(seed) % 2)
            .collect()
    };
    let inputs: Vec<_> = (1..=3u8)
        .map(|s| rotated_equal_pair_example(&v_bits(s), window).expect("valid input pattern"))
        .collect();
    for (i, l) in inputs.iter().enumerate() {
        let pattern = generate_window(l);
        let ok = validate_compatibility(&pattern, default_margin(l))
            .unwrap()
            .is_empty();
        println!("input {}: params {:?}, valid = {ok}", i + 1, l.params());
    }
    let overlay = dilate_overlay(&inputs, &[1, 2, 0]).expect("overlay");
    let pattern = generate_window(&overlay);
    let violations = validate_compatibility(&pattern, default_margin(&overlay)).unwrap();
    println!(
        "overlay: params {:?}, {} stitches, violations {}",
        overlay.params(),
        pattern.stitches.len(),
        violations.len()
    );
    assert!(violations.is_empty());
}
