//! Build the named extremal loop families and chart them.
//!
//! Rugs maximize area, crosses minimize it, and combs and wands maximize
//! length among non-rugs. Each constructor returns grid labels; the loop is
//! recovered by tracing, and its measured metrics are checked against the
//! closed forms. Charts land in target/charts/.

use hitomezashi::canonical::*;
use hitomezashi::loops::loop_metrics;
use hitomezashi::render::{render_loop_svg, RenderStyle};

fn main() {
    let kinds = vec![
        CanonicalKind::Rug { w: 11, h: 13 },
        CanonicalKind::Cross {
            w: 11,
            h: 13,
            alpha: 7,
            beta: 11,
        },
        CanonicalKind::HComb {
            w: 11,
            h: 13,
            alpha: 7,
        },
        CanonicalKind::Wand {
            axis: WandAxis::Width5,
            long: 15,
            teeth: vec![false, true, false, true, false, true],
        },
    ];
    let dir = std::path::Path::new("target/charts");
    std::fs::create_dir_all(dir).expect("chart directory");
    for kind in kinds {
        let cf = closed_form_metrics(&kind).unwrap();
        let labeling = make(&kind).unwrap();
        let l = trace_unique_loop(&labeling, cf.width, cf.height).unwrap();
        let m = loop_metrics(&l).unwrap();
        if let Some(len) = cf.length {
            assert_eq!(m.length, len);
        }
        if let Some(area) = cf.area {
            assert_eq!(m.area, area);
        }
        let name = match &kind {
            CanonicalKind::Rug { w, h } => format!("rug_{w}x{h}"),
            CanonicalKind::Cross { w, h, .. } => format!("cross_{w}x{h}"),
            CanonicalKind::HComb { w, h, .. } => format!("hcomb_{w}x{h}"),
            CanonicalKind::VComb { w, h, .. } => format!("vcomb_{w}x{h}"),
            CanonicalKind::Wand { long, .. } => format!("wand_5x{long}"),
        };
        let path = dir.join(format!("{name}.svg"));
        std::fs::write(&path, render_loop_svg(&l, &RenderStyle::default())).unwrap();
        println!(
            "{name}: {} x {}, length {}, area {}  -> {}",
            m.width,
            m.height,
            m.length,
            m.area,
            path.display()
        );
    }
}
