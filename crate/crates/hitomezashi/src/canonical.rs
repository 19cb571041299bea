//! Constructors for the named extremal loop families.
//!
//! Each constructor returns the grid labels that generate the family member
//! on the window `[-1, w+1] x [-1, h+1]`; the loop itself is recovered by
//! tracing. Keeping labels as the single source of truth means the closed
//! forms below can be checked against traced metrics.
//!
//! The families:
//! - the `w x h` rug: boundary lines labeled 1, everything else 0; the
//!   longest-area loop of its size;
//! - the cross: two crossing width-3 bars, the minimum-area loop when both
//!   dimensions are at least 5;
//! - horizontal and vertical combs: a spine with teeth, maximizing length
//!   among non-rugs (the long dimension must be 1 mod 4);
//! - wands: the width-5 (or height-5) family that also attains maximum
//!   non-rug length, with a free bit per tooth pair. A comb whose short
//!   side is 5 is a wand.

use num_rational::Ratio;

use crate::grid::{generate_window, SquareLabeling, Window};
use crate::loops::{canonicalize, loop_metrics, loops_of, CanonicalLoop, Loop};
use crate::{Error, Result};

/// Identifies one member of a named family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalKind {
    Rug {
        w: i64,
        h: i64,
    },
    Cross {
        w: i64,
        h: i64,
        alpha: i64,
        beta: i64,
    },
    HComb {
        w: i64,
        h: i64,
        alpha: i64,
    },
    VComb {
        w: i64,
        h: i64,
        beta: i64,
    },
    Wand {
        axis: WandAxis,
        long: i64,
        teeth: Vec<bool>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WandAxis {
    /// Width 5, height `long`.
    Width5,
    /// Height 5, width `long`; the quarter-turn of a width-5 wand.
    Height5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombAxis {
    Horizontal,
    Vertical,
}

/// Closed-form metrics where the family has them. `None` fields have no
/// stated closed form and are obtained by tracing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormMetrics {
    pub width: i64,
    pub height: i64,
    pub length: Option<usize>,
    pub area: Option<Ratio<i64>>,
}

fn require_odd(name: &str, v: i64) -> Result<()> {
    if v < 1 || v % 2 == 0 {
        return Err(Error::Domain(format!(
            "{name} must be odd and positive, got {v}"
        )));
    }
    Ok(())
}

fn framed_window(w: i64, h: i64) -> Window {
    Window::new(-1, w + 1, -1, h + 1)
}

/// Grid labels of the `w x h` rug: boundary lines 1, all others 0.
///
/// At `w = h = 1` the boundary-line recipe degenerates (lines 0 and 1 are
/// adjacent and the trace yields a 3x3 loop instead), so the 1x1 rug is the
/// unit loop, generated by all-zero labels. Sizes with exactly one
/// dimension equal to 1 are rejected: the unit loop is the only loop of
/// width or height 1.
pub fn make_rug(w: i64, h: i64) -> Result<SquareLabeling> {
    require_odd("width", w)?;
    require_odd("height", h)?;
    if (w == 1) != (h == 1) {
        return Err(Error::Domain(format!(
            "no loop has dimensions {w} x {h}: width or height 1 forces the unit loop"
        )));
    }
    if w == 1 && h == 1 {
        return SquareLabeling::new(1, 1, 1, 1, framed_window(1, 1), |_| 0, |_| 0);
    }
    SquareLabeling::new(
        1,
        1,
        1,
        1,
        framed_window(w, h),
        |i| i64::from(i == 0 || i == h),
        |j| i64::from(j == 0 || j == w),
    )
}

/// Grid labels of the cross with arm longitudes `alpha - 1/2` and latitudes
/// `beta - 1/2`: the eight listed lines are 0, every other line is 1.
pub fn make_cross(w: i64, h: i64, alpha: i64, beta: i64) -> Result<SquareLabeling> {
    require_odd("width", w)?;
    require_odd("height", h)?;
    if w < 5 || h < 5 {
        return Err(Error::Domain(format!(
            "crosses need w, h >= 5, got {w} x {h}"
        )));
    }
    if alpha % 2 == 0 || alpha < 3 || alpha > w - 2 {
        return Err(Error::Domain(format!(
            "alpha must be odd in [3, {}], got {alpha}",
            w - 2
        )));
    }
    if beta % 2 == 0 || beta < 3 || beta > h - 2 {
        return Err(Error::Domain(format!(
            "beta must be odd in [3, {}], got {beta}",
            h - 2
        )));
    }
    SquareLabeling::new(
        1,
        1,
        1,
        1,
        framed_window(w, h),
        |i| i64::from(!(i == 0 || i == h || i == beta - 1 || i == beta)),
        |j| i64::from(!(j == 0 || j == w || j == alpha - 1 || j == alpha)),
    )
}

/// Grid labels of a comb. For the horizontal comb the height must be
/// 1 mod 4 and the tooth gap sits at longitude `pos - 1/2`; the vertical
/// comb is the transpose with the width 1 mod 4.
pub fn make_comb(axis: CombAxis, w: i64, h: i64, pos: i64) -> Result<SquareLabeling> {
    require_odd("width", w)?;
    require_odd("height", h)?;
    if w < 5 || h < 5 {
        return Err(Error::Domain(format!(
            "combs need w, h >= 5, got {w} x {h}"
        )));
    }
    match axis {
        CombAxis::Horizontal => {
            if h % 4 != 1 {
                return Err(Error::Domain(format!(
                    "horizontal combs need height 1 mod 4, got {h}"
                )));
            }
            if pos % 2 == 0 || pos < 3 || pos > w - 2 {
                return Err(Error::Domain(format!(
                    "comb position must be odd in [3, {}], got {pos}",
                    w - 2
                )));
            }
            SquareLabeling::new(
                1,
                1,
                1,
                1,
                framed_window(w, h),
                move |i| {
                    if i == 0 || i == h {
                        0
                    } else {
                        i64::from(!matches!(i.rem_euclid(4), 2 | 3))
                    }
                },
                move |j| i64::from(!(j == 0 || j == w || j == pos - 1 || j == pos)),
            )
        }
        CombAxis::Vertical => {
            if w % 4 != 1 {
                return Err(Error::Domain(format!(
                    "vertical combs need width 1 mod 4, got {w}"
                )));
            }
            if pos % 2 == 0 || pos < 3 || pos > h - 2 {
                return Err(Error::Domain(format!(
                    "comb position must be odd in [3, {}], got {pos}",
                    h - 2
                )));
            }
            SquareLabeling::new(
                1,
                1,
                1,
                1,
                framed_window(w, h),
                move |i| i64::from(!(i == 0 || i == h || i == pos - 1 || i == pos)),
                move |j| {
                    if j == 0 || j == w {
                        0
                    } else {
                        i64::from(!matches!(j.rem_euclid(4), 2 | 3))
                    }
                },
            )
        }
    }
}

/// Grid labels of a wand. A width-5 wand of height `long` has fixed frame
/// labels plus one free bit per latitude pair `(2i, 2i+1)`; at least one
/// tooth bit must be 0 or the loop never reaches width 5. The height-5 wand
/// is its quarter-turn.
pub fn make_wand(axis: WandAxis, long: i64, teeth: &[bool]) -> Result<SquareLabeling> {
    require_odd("long dimension", long)?;
    if long < 5 {
        return Err(Error::Domain(format!(
            "wands need the long dimension >= 5, got {long}"
        )));
    }
    let expected = ((long - 3) / 2) as usize;
    if teeth.len() != expected {
        return Err(Error::Domain(format!(
            "expected {expected} tooth bits for length {long}, got {}",
            teeth.len()
        )));
    }
    if teeth.iter().all(|&t| t) {
        return Err(Error::Domain(
            "at least one tooth bit must be 0, or the wand falls short of width 5".into(),
        ));
    }
    let teeth = teeth.to_vec();
    let eps_w5 = move |i: i64| -> i64 {
        if i == 0 || i == long {
            0
        } else if i == 1 || i == long - 1 {
            1
        } else if i >= 2 && i <= long - 2 {
            i64::from(teeth[((i - 2) / 2) as usize])
        } else {
            0
        }
    };
    let eta_w5 = |j: i64| -> i64 { i64::from(j == 1 || j == 4) };
    match axis {
        WandAxis::Width5 => SquareLabeling::new(1, 1, 1, 1, framed_window(5, long), eps_w5, eta_w5),
        WandAxis::Height5 => {
            SquareLabeling::new(1, 1, 1, 1, framed_window(long, 5), eta_w5, move |j| {
                eps_w5(long - j)
            })
        }
    }
}

/// Stated closed-form metrics for a family member.
pub fn closed_form_metrics(kind: &CanonicalKind) -> Result<ClosedFormMetrics> {
    Ok(match kind {
        CanonicalKind::Rug { w: 1, h: 1 } => ClosedFormMetrics {
            width: 1,
            height: 1,
            length: Some(4),
            area: Some(Ratio::new(1, 1)),
        },
        CanonicalKind::Rug { w, h } => ClosedFormMetrics {
            width: *w,
            height: *h,
            length: Some((4 * (w + h - 3)) as usize),
            area: Some(Ratio::new((w - 1) * (h - 1) + 1, 1)),
        },
        CanonicalKind::Cross { w, h, .. } => ClosedFormMetrics {
            width: *w,
            height: *h,
            length: None,
            area: Some(Ratio::new(2 * (w + h) - 7, 1)),
        },
        CanonicalKind::HComb { w, h, .. } | CanonicalKind::VComb { w, h, .. } => {
            ClosedFormMetrics {
                width: *w,
                height: *h,
                length: Some(((w - 1) * (h - 1) + 4) as usize),
                area: None,
            }
        }
        CanonicalKind::Wand { axis, long, .. } => {
            let (w, h) = match axis {
                WandAxis::Width5 => (5, *long),
                WandAxis::Height5 => (*long, 5),
            };
            ClosedFormMetrics {
                width: w,
                height: h,
                length: Some((4 * long) as usize),
                area: None,
            }
        }
    })
}

/// Builds the labels for a family member.
pub fn make(kind: &CanonicalKind) -> Result<SquareLabeling> {
    match kind {
        CanonicalKind::Rug { w, h } => make_rug(*w, *h),
        CanonicalKind::Cross { w, h, alpha, beta } => make_cross(*w, *h, *alpha, *beta),
        CanonicalKind::HComb { w, h, alpha } => make_comb(CombAxis::Horizontal, *w, *h, *alpha),
        CanonicalKind::VComb { w, h, beta } => make_comb(CombAxis::Vertical, *w, *h, *beta),
        CanonicalKind::Wand { axis, long, teeth } => make_wand(*axis, *long, teeth),
    }
}

/// Traces the labeling and returns its unique loop of the given dimensions.
/// Errors if the count differs from one.
pub fn trace_unique_loop(labeling: &SquareLabeling, w: i64, h: i64) -> Result<Loop> {
    let pattern = generate_window(labeling);
    let mut hits: Vec<Loop> = loops_of(&pattern)
        .into_iter()
        .filter(|l| {
            let m = loop_metrics(l).unwrap();
            m.width == w && m.height == h
        })
        .collect();
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        n => Err(Error::Integrity(format!(
            "expected exactly one {w} x {h} loop in the construction window, found {n}"
        ))),
    }
}

/// Canonical form of a family member, via construction and tracing.
pub fn canonical_form(kind: &CanonicalKind) -> Result<CanonicalLoop> {
    let cf = closed_form_metrics(kind)?;
    let labeling = make(kind)?;
    let l = trace_unique_loop(&labeling, cf.width, cf.height)?;
    Ok(canonicalize(&l))
}

/// The width-5-and-height-15 wand instance used in the chart examples.
pub fn wand_preset_15() -> Result<SquareLabeling> {
    make_wand(
        WandAxis::Width5,
        15,
        &[false, true, false, true, false, true],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{default_margin, validate_compatibility};
    use crate::loops::loop_metrics;

    fn traced_metrics(kind: &CanonicalKind) -> crate::loops::LoopMetrics {
        let cf = closed_form_metrics(kind).unwrap();
        let labeling = make(kind).unwrap();
        let l = trace_unique_loop(&labeling, cf.width, cf.height).unwrap();
        loop_metrics(&l).unwrap()
    }

    #[test]
    fn rug_metrics_match_the_closed_forms() {
        for (w, h) in [(1, 1), (3, 3), (7, 9), (11, 13), (9, 5)] {
            let kind = CanonicalKind::Rug { w, h };
            let cf = closed_form_metrics(&kind).unwrap();
            let m = traced_metrics(&kind);
            assert_eq!(Some(m.length), cf.length, "rug {w}x{h} length");
            assert_eq!(Some(m.area), cf.area, "rug {w}x{h} area");
        }
    }

    #[test]
    fn rug_rejects_impossible_sizes() {
        assert!(make_rug(2, 3).is_err());
        assert!(make_rug(-1, 3).is_err());
        assert!(make_rug(1, 3).is_err());
        assert!(make_rug(5, 1).is_err());
    }

    #[test]
    fn cross_metrics_match_the_closed_forms() {
        for (w, h, a, b) in [(5, 5, 3, 3), (11, 13, 7, 11), (7, 9, 3, 5), (9, 7, 5, 3)] {
            let kind = CanonicalKind::Cross {
                w,
                h,
                alpha: a,
                beta: b,
            };
            let cf = closed_form_metrics(&kind).unwrap();
            let m = traced_metrics(&kind);
            assert_eq!(Some(m.area), cf.area, "cross {w}x{h} area");
        }
    }

    #[test]
    fn cross_rejects_even_arms() {
        assert!(make_cross(5, 5, 2, 3).is_err());
        assert!(make_cross(5, 5, 3, 7).is_err());
        assert!(make_cross(3, 5, 3, 3).is_err());
    }

    #[test]
    fn comb_metrics_match_the_closed_forms() {
        for (axis, w, h, pos) in [
            (CombAxis::Horizontal, 11, 13, 7),
            (CombAxis::Horizontal, 7, 9, 3),
            (CombAxis::Horizontal, 5, 5, 3),
            (CombAxis::Vertical, 13, 11, 7),
            (CombAxis::Vertical, 9, 7, 3),
        ] {
            let kind = match axis {
                CombAxis::Horizontal => CanonicalKind::HComb { w, h, alpha: pos },
                CombAxis::Vertical => CanonicalKind::VComb { w, h, beta: pos },
            };
            let cf = closed_form_metrics(&kind).unwrap();
            let m = traced_metrics(&kind);
            assert_eq!(Some(m.length), cf.length, "comb {w}x{h} length");
        }
    }

    #[test]
    fn comb_rejects_bad_congruence() {
        assert!(make_comb(CombAxis::Horizontal, 7, 11, 3).is_err());
        assert!(make_comb(CombAxis::Vertical, 11, 7, 3).is_err());
    }

    #[test]
    fn wand_metrics_match_the_closed_forms() {
        let kind = CanonicalKind::Wand {
            axis: WandAxis::Width5,
            long: 15,
            teeth: vec![false, true, false, true, false, true],
        };
        assert_eq!(traced_metrics(&kind).length, 60);

        let kind = CanonicalKind::Wand {
            axis: WandAxis::Width5,
            long: 5,
            teeth: vec![false],
        };
        assert_eq!(traced_metrics(&kind).length, 20);

        let kind = CanonicalKind::Wand {
            axis: WandAxis::Height5,
            long: 9,
            teeth: vec![false, true, false],
        };
        assert_eq!(traced_metrics(&kind).length, 36);
    }

    #[test]
    fn every_family_member_up_to_13x13_traces_to_its_closed_forms() {
        // Exhaustive construction-vs-formula consistency: each constructor
        // yields exactly one loop of the nominal size, whose measured
        // metrics equal the stated closed forms.
        let mut members = Vec::new();
        let mut w = 1i64;
        while w <= 13 {
            let mut h = 1i64;
            while h <= 13 {
                if (w == 1 && h == 1) || (w >= 3 && h >= 3) {
                    members.push(CanonicalKind::Rug { w, h });
                }
                if w >= 5 && h >= 5 {
                    for alpha in (3..=w - 2).step_by(2) {
                        for beta in (3..=h - 2).step_by(2) {
                            members.push(CanonicalKind::Cross { w, h, alpha, beta });
                        }
                    }
                    if h % 4 == 1 {
                        for alpha in (3..=w - 2).step_by(2) {
                            members.push(CanonicalKind::HComb { w, h, alpha });
                        }
                    }
                    if w % 4 == 1 {
                        for beta in (3..=h - 2).step_by(2) {
                            members.push(CanonicalKind::VComb { w, h, beta });
                        }
                    }
                }
                h += 2;
            }
            w += 2;
        }
        for long in [5i64, 7, 9, 11, 13] {
            for axis in [WandAxis::Width5, WandAxis::Height5] {
                for bits in 0..(1u32 << ((long - 3) / 2)) - 1 {
                    let teeth: Vec<bool> =
                        (0..(long - 3) / 2).map(|k| bits >> k & 1 == 1).collect();
                    members.push(CanonicalKind::Wand { axis, long, teeth });
                }
            }
        }
        assert!(
            members.len() > 400,
            "only {} members generated",
            members.len()
        );
        for kind in members {
            let cf = closed_form_metrics(&kind).unwrap();
            let m = traced_metrics(&kind);
            assert_eq!((m.width, m.height), (cf.width, cf.height), "{kind:?}");
            if let Some(len) = cf.length {
                assert_eq!(m.length, len, "{kind:?}");
            }
            if let Some(area) = cf.area {
                assert_eq!(m.area, area, "{kind:?}");
            }
        }
    }

    #[test]
    fn wand_rejects_all_ones_teeth() {
        assert!(make_wand(WandAxis::Width5, 7, &[true, true]).is_err());
        assert!(make_wand(WandAxis::Width5, 7, &[true]).is_err());
    }

    #[test]
    fn every_construction_is_a_valid_pattern() {
        let kinds = vec![
            CanonicalKind::Rug { w: 7, h: 9 },
            CanonicalKind::Cross {
                w: 7,
                h: 9,
                alpha: 5,
                beta: 3,
            },
            CanonicalKind::HComb {
                w: 7,
                h: 9,
                alpha: 3,
            },
            CanonicalKind::VComb {
                w: 9,
                h: 7,
                beta: 5,
            },
            CanonicalKind::Wand {
                axis: WandAxis::Width5,
                long: 9,
                teeth: vec![true, false, true],
            },
        ];
        for kind in kinds {
            let labeling = make(&kind).unwrap();
            let p = generate_window(&labeling);
            // The window is only two lines wider than the loop, so check with
            // the smallest sound margin.
            let v = validate_compatibility(&p, default_margin(&labeling) / 2).unwrap();
            assert!(v.is_empty(), "{kind:?} violates compatibility: {v:?}");
        }
    }

    #[test]
    fn comb_of_short_side_five_is_a_wand_instance() {
        // HComb with min(w,h) = 5 equals a width-5 wand with the matching
        // teeth bits.
        let comb = canonical_form(&CanonicalKind::HComb {
            w: 5,
            h: 9,
            alpha: 3,
        })
        .unwrap();
        let mut found = false;
        for bits in 0..(1u32 << 3) {
            let teeth: Vec<bool> = (0..3).map(|k| bits >> k & 1 == 1).collect();
            if teeth.iter().all(|&t| t) {
                continue;
            }
            let wand = canonical_form(&CanonicalKind::Wand {
                axis: WandAxis::Width5,
                long: 9,
                teeth,
            })
            .unwrap();
            if wand == comb {
                found = true;
            }
        }
        assert!(found, "no wand teeth assignment reproduces the 5x9 comb");
    }
}
