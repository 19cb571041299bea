//! Deterministic SVG stitch charts.
//!
//! One line element per stitch, sorted, with fixed number formatting, so
//! identical inputs produce byte-identical documents. The y axis is flipped
//! so larger latitudes render higher, and triangular patterns are unsheared
//! into true 60-degree geometry.

use std::fmt::Write as _;

use crate::grid::{PatternWindow, Stitch, Window};
use crate::longstitch::StrandClass;
use crate::loops::Loop;
use crate::multigrid::{PhiPattern, TriPattern};

/// Stroke colors per strand class; rectangles render blue and horizontal
/// accordions green.
pub fn class_color(class: StrandClass) -> &'static str {
    match class {
        StrandClass::Rectangle => "#1f6feb",
        StrandClass::AccordionH => "#2da44e",
        StrandClass::AccordionV => "#0aa8a7",
        StrandClass::ZigZagPos => "#d4760c",
        StrandClass::ZigZagNeg => "#8250df",
        StrandClass::Other => "#6e7781",
    }
}

#[derive(Clone, Debug)]
pub struct RenderStyle {
    /// Pixels per lattice unit.
    pub unit: f64,
    pub stroke_width: f64,
    pub stroke: String,
    /// Draw the faint background grid.
    pub grid: bool,
    /// Margin around the window, in pixels.
    pub margin: f64,
    /// Unshear into true triangular geometry.
    pub triangular: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            unit: 18.0,
            stroke_width: 2.6,
            stroke: "#24292f".into(),
            grid: false,
            margin: 12.0,
            triangular: false,
        }
    }
}

struct Canvas {
    style: RenderStyle,
    window: Window,
    lines: Vec<String>,
    grid_lines: Vec<String>,
}

impl Canvas {
    fn new(style: RenderStyle, window: Window) -> Canvas {
        Canvas {
            style,
            window,
            lines: Vec::new(),
            grid_lines: Vec::new(),
        }
    }

    /// Maps a lattice point to pixel coordinates, flipping y and optionally
    /// unshearing.
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (gx, gy) = if self.style.triangular {
            (x - y / 2.0, y * 3.0f64.sqrt() / 2.0)
        } else {
            (x, y)
        };
        let px = self.style.margin
            + (gx - self.window.x0 as f64 + (self.window.y1 - self.window.y0) as f64 / 2.0)
                * self.style.unit;
        let py = self.style.margin + (self.window.y1 as f64 - gy) * self.style.unit;
        (px, py)
    }

    fn push_segment(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, color: &str) {
        let (ax, ay) = self.map(x1, y1);
        let (bx, by) = self.map(x2, y2);
        let w = self.style.stroke_width;
        let mut s = String::new();
        write!(
            s,
            "  <line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"{color}\" stroke-width=\"{w:.2}\" stroke-linecap=\"round\"/>"
        )
        .unwrap();
        self.lines.push(s);
    }

    fn push_grid(&mut self) {
        for x in self.window.x0..=self.window.x1 {
            let (ax, ay) = self.map(x as f64, self.window.y0 as f64);
            let (bx, by) = self.map(x as f64, self.window.y1 as f64);
            self.grid_lines.push(format!(
                "  <line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"#d0d7de\" stroke-width=\"0.5\"/>"
            ));
        }
        for y in self.window.y0..=self.window.y1 {
            let (ax, ay) = self.map(self.window.x0 as f64, y as f64);
            let (bx, by) = self.map(self.window.x1 as f64, y as f64);
            self.grid_lines.push(format!(
                "  <line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"#d0d7de\" stroke-width=\"0.5\"/>"
            ));
        }
    }

    fn finish(self) -> String {
        let width = 2.0 * self.style.margin
            + (self.window.x1 - self.window.x0 + (self.window.y1 - self.window.y0) / 2 + 1) as f64
                * self.style.unit;
        let height =
            2.0 * self.style.margin + (self.window.y1 - self.window.y0) as f64 * self.style.unit;
        let mut doc = String::new();
        writeln!(doc, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>").unwrap();
        writeln!(
            doc,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.2}\" height=\"{height:.2}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
        )
        .unwrap();
        for l in &self.grid_lines {
            writeln!(doc, "{l}").unwrap();
        }
        for l in &self.lines {
            writeln!(doc, "{l}").unwrap();
        }
        doc.push_str("</svg>\n");
        doc
    }
}

fn stitch_coords(s: &Stitch) -> (f64, f64, f64, f64) {
    let (p, q) = s.endpoints();
    (p.x as f64, p.y as f64, q.x as f64, q.y as f64)
}

/// Renders the stitches of a pattern window. With `classes`, stitches are
/// colored by the class of the strand they belong to.
pub fn render_pattern_svg(
    pattern: &PatternWindow,
    classes: Option<&[(Vec<Stitch>, StrandClass)]>,
    style: &RenderStyle,
) -> String {
    let mut canvas = Canvas::new(style.clone(), pattern.window());
    if style.grid {
        canvas.push_grid();
    }
    match classes {
        None => {
            let stroke = style.stroke.clone();
            for s in &pattern.stitches {
                let (x1, y1, x2, y2) = stitch_coords(s);
                canvas.push_segment(x1, y1, x2, y2, &stroke);
            }
        }
        Some(classified) => {
            let mut colored: Vec<(Stitch, &'static str)> = Vec::new();
            for (stitches, class) in classified {
                for s in stitches {
                    colored.push((*s, class_color(*class)));
                }
            }
            colored.sort_by_key(|(s, _)| s.sort_key());
            for (s, color) in colored {
                let (x1, y1, x2, y2) = stitch_coords(&s);
                canvas.push_segment(x1, y1, x2, y2, color);
            }
        }
    }
    canvas.finish()
}

/// Renders a single loop.
pub fn render_loop_svg(l: &Loop, style: &RenderStyle) -> String {
    let window = crate::loops::bounding_window(l);
    let mut canvas = Canvas::new(style.clone(), window);
    if style.grid {
        canvas.push_grid();
    }
    let stroke = style.stroke.clone();
    for s in l.edge_stitches() {
        let (x1, y1, x2, y2) = stitch_coords(&s);
        canvas.push_segment(x1, y1, x2, y2, &stroke);
    }
    canvas.finish()
}

/// Renders a multi-direction pattern; triangular sets are usually drawn
/// with `style.triangular` for true 60-degree geometry.
pub fn render_phi_svg(pattern: &PhiPattern, style: &RenderStyle) -> String {
    let mut canvas = Canvas::new(style.clone(), pattern.window);
    if style.grid {
        canvas.push_grid();
    }
    let stroke = style.stroke.clone();
    for &(p, k) in &pattern.segments {
        let (dx, dy) = pattern.dirs.dirs()[k];
        canvas.push_segment(
            p.x as f64,
            p.y as f64,
            (p.x + dx) as f64,
            (p.y + dy) as f64,
            &stroke,
        );
    }
    canvas.finish()
}

/// Renders an a-over-b triangular pattern in true geometry.
pub fn render_tri_svg(pattern: &TriPattern, style: &RenderStyle) -> String {
    let dirs = crate::multigrid::DirectionSet::triangular();
    let mut style = style.clone();
    style.triangular = true;
    let stroke = style.stroke.clone();
    let mut canvas = Canvas::new(style, pattern.core);
    for &(k, base) in &pattern.stitches {
        let (dx, dy) = dirs.dirs()[k];
        canvas.push_segment(
            base.x as f64,
            base.y as f64,
            (base.x + pattern.a * dx) as f64,
            (base.y + pattern.a * dy) as f64,
            &stroke,
        );
    }
    canvas.finish()
}
