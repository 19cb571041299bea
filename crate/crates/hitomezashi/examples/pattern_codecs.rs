//! The explicit pattern codecs: rectangle codes for the generic case and
//! equal-pair codes for a = b, plus the rigid zig-zag family.
//!
//! Every all-rectangle pattern is two bit vectors and a permutation; the
//! codec round-trips through the labels. Equal-pair patterns keep one free
//! bit per latitude, and zig-zags are a single linear label formula.

use hitomezashi::grid::{default_margin, generate_window, validate_compatibility, Window};
use hitomezashi::longstitch::*;
use hitomezashi::loops::trace_strands;

fn main() {
    // Rectangle codec, generic case (3,1,3,1): the full code space.
    let p = derive_params(3, 1, 3, 1).unwrap();
    let window = Window::new(0, 11, 0, 11);
    println!("rectangle codes for (3,1,3,1):");
    for u in 0..2u8 {
        for v in 0..2u8 {
            for sigma in [vec![0usize, 1], vec![1usize, 0]] {
                let code = RectangleCode {
                    u: vec![u],
                    v: vec![v],
                    sigma: sigma.clone(),
                };
                let labeling = phi_decode(&code, &p, window).unwrap();
                let pattern = generate_window(&labeling);
                let ok = validate_compatibility(&pattern, default_margin(&labeling))
                    .unwrap()
                    .is_empty();
                let back = phi_encode(&labeling, &p).unwrap();
                println!(
                    "  u={u} v={v} sigma={sigma:?}: valid={ok} round-trip={}",
                    back == code
                );
            }
        }
    }

    // Zig-zags: the other half of the (3,1,3,1) pattern set.
    let l = zigzag_pattern(&p, 0, Sign::Positive, Window::new(-16, 16, -16, 16)).unwrap();
    let strands = trace_strands(&generate_window(&l));
    let zigzags = strands
        .iter()
        .filter(|s| s.stitches.len() >= 4)
        .filter(|s| classify_strand(s, &p).unwrap() == StrandClass::ZigZagPos)
        .count();
    println!("\npositive zig-zag pattern at offset 0: {zigzags} zig-zag strands in the window");

    // Equal-pair codec (2,2,3,1): vertical labels have period 2; the free
    // per-latitude bits mix rectangles with horizontal accordions.
    let code = AbCode {
        u: vec![0],
        v: vec![0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0],
        sigma: vec![1, 0],
    };
    let l = psi_decode(&code, 2, 3, 1, Window::new(-10, 22, 0, 11)).unwrap();
    let pattern = generate_window(&l);
    let params = derive_params(2, 2, 3, 1).unwrap();
    let mut tally = std::collections::BTreeMap::<String, usize>::new();
    for s in trace_strands(&pattern) {
        if s.closed || s.stitches.len() >= 5 {
            *tally
                .entry(classify_strand(&s, &params).unwrap().to_string())
                .or_default() += 1;
        }
    }
    println!("\nequal-pair pattern (2,2,3,1) with mixed latitude bits:");
    for (class, count) in tally {
        println!("  {class}: {count}");
    }
}
