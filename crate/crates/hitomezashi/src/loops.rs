//! Strand tracing and loop metrics.
//!
//! The stitches of a pattern window are the edges of a graph on their
//! endpoints; a strand is a connected component of that graph. Every lattice
//! point meets at most one horizontal and at most one vertical stitch, so a
//! strand is a path or a cycle whose stitches alternate orientation. A
//! strand that closes up without touching the window boundary is a loop;
//! boundary-touching strands are never classified as loops because their
//! planar component may extend beyond the window.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::grid::{LatticePoint, Orientation, PatternWindow, Stitch, Window};
use crate::{Error, Result};

/// A maximal alternating run of stitches. Consecutive stitches share an
/// endpoint; for closed strands the last also shares one with the first.
#[derive(Clone, Debug)]
pub struct Strand {
    pub stitches: Vec<Stitch>,
    pub closed: bool,
    pub touches_boundary: bool,
}

/// A loop: a simple closed alternating curve, stored as its stitch
/// endpoints in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    vertices: Vec<LatticePoint>,
}

/// Width, height, stitch count, and enclosed area of a loop. The area is
/// exact; it is integer-valued for every square-grid loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopMetrics {
    pub width: i64,
    pub height: i64,
    pub length: usize,
    pub area: Ratio<i64>,
}

/// The extremal stitches of a loop and the latitudes/longitudes they pair
/// up on. Coordinates are doubled so half-integer midpoints stay integral.
#[derive(Clone, Debug)]
pub struct ExtremalProfile {
    pub west: Vec<Stitch>,
    pub east: Vec<Stitch>,
    pub south: Vec<Stitch>,
    pub north: Vec<Stitch>,
    pub extremal_latitudes2: Vec<i64>,
    pub extremal_longitudes2: Vec<i64>,
}

/// Translation-canonical form of a loop: vertices shifted to nonnegative
/// coordinates with minima zero, traversal counterclockwise, and the cycle
/// rotated to its lexicographically least starting vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLoop {
    vertices: Vec<LatticePoint>,
}

impl Loop {
    /// Builds a loop from a vertex cycle. The cycle must alternate
    /// horizontal and vertical edges and close up.
    pub fn from_vertices(vertices: Vec<LatticePoint>) -> Result<Loop> {
        if vertices.len() < 4 || vertices.len() % 2 != 0 {
            return Err(Error::Domain(format!(
                "a loop needs an even vertex count of at least 4, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for k in 0..n {
            let p = vertices[k];
            let q = vertices[(k + 1) % n];
            let horizontal = p.y == q.y && p.x != q.x;
            let vertical = p.x == q.x && p.y != q.y;
            if !(horizontal || vertical) {
                return Err(Error::Domain(format!(
                    "edge {p} -> {q} is not axis-parallel"
                )));
            }
        }
        Ok(Loop { vertices })
    }

    /// Extracts the loop from a closed strand that stays off the window
    /// boundary; `None` otherwise.
    pub fn from_strand(strand: &Strand) -> Option<Loop> {
        if !strand.closed || strand.touches_boundary {
            return None;
        }
        let n = strand.stitches.len();
        let mut vertices = Vec::with_capacity(n);
        for k in 0..n {
            let prev = &strand.stitches[(k + n - 1) % n];
            let cur = &strand.stitches[k];
            vertices.push(shared_endpoint(prev, cur)?);
        }
        Some(Loop { vertices })
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// The edges of the loop as stitches, in traversal order.
    pub fn edge_stitches(&self) -> Vec<Stitch> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let p = self.vertices[k];
                let q = self.vertices[(k + 1) % n];
                if p.y == q.y {
                    let span = (q.x - p.x).abs();
                    Stitch::horizontal(LatticePoint::new(p.x.min(q.x), p.y), span)
                } else {
                    let span = (q.y - p.y).abs();
                    Stitch::vertical(LatticePoint::new(p.x, p.y.min(q.y)), span)
                }
            })
            .collect()
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Loop {
        Loop {
            vertices: self.vertices.iter().map(|p| p.translate(dx, dy)).collect(),
        }
    }

    /// Mirror image across the diagonal, swapping the two axes.
    pub fn transpose(&self) -> Loop {
        Loop {
            vertices: self
                .vertices
                .iter()
                .map(|p| LatticePoint::new(p.y, p.x))
                .collect(),
        }
    }

    /// Twice the signed area of the vertex polygon. Positive for
    /// counterclockwise traversal.
    pub fn signed_area2(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let p = self.vertices[k];
                let q = self.vertices[(k + 1) % n];
                p.x * q.y - q.x * p.y
            })
            .sum()
    }
}

fn shared_endpoint(a: &Stitch, b: &Stitch) -> Option<LatticePoint> {
    let (a0, a1) = a.endpoints();
    let (b0, b1) = b.endpoints();
    if a0 == b0 || a0 == b1 {
        Some(a0)
    } else if a1 == b0 || a1 == b1 {
        Some(a1)
    } else {
        None
    }
}

/// Splits the window's stitches into maximal strands. Every stitch lands in
/// exactly one strand; the output order is deterministic.
pub fn trace_strands(pattern: &PatternWindow) -> Vec<Strand> {
    let stitches = &pattern.stitches;
    let window = pattern.window();
    // Incident stitch ids per endpoint: at most one of each orientation.
    let mut incident: HashMap<LatticePoint, [Option<usize>; 2]> = HashMap::new();
    for (idx, s) in stitches.iter().enumerate() {
        let slot = match s.orientation {
            Orientation::Horizontal => 0,
            Orientation::Vertical => 1,
        };
        let (p, q) = s.endpoints();
        for v in [p, q] {
            let entry = incident.entry(v).or_default();
            debug_assert!(
                entry[slot].is_none(),
                "two {:?} stitches at {v}",
                s.orientation
            );
            entry[slot] = Some(idx);
        }
    }
    let other_end = |idx: usize, v: LatticePoint| -> LatticePoint {
        let (p, q) = stitches[idx].endpoints();
        if p == v {
            q
        } else {
            p
        }
    };
    // Walk from `start` along stitch `first`, alternating orientation.
    // Returns the stitch ids visited and whether the walk closed up.
    let walk = |first: usize, start: LatticePoint, visited: &mut [bool]| {
        let mut path = vec![first];
        visited[first] = true;
        let mut v = other_end(first, start);
        let mut orient = stitches[first].orientation;
        loop {
            let slot = match orient.other() {
                Orientation::Horizontal => 0,
                Orientation::Vertical => 1,
            };
            match incident[&v][slot] {
                Some(next) if next == path[0] => return (path, true),
                Some(next) => {
                    visited[next] = true;
                    path.push(next);
                    v = other_end(next, v);
                    orient = orient.other();
                }
                None => return (path, false),
            }
        }
    };
    let mut visited = vec![false; stitches.len()];
    let mut strands = Vec::new();
    for seed in 0..stitches.len() {
        if visited[seed] {
            continue;
        }
        let (p, q) = stitches[seed].endpoints();
        let (forward, closed) = walk(seed, p, &mut visited);
        let ordered = if closed {
            forward
        } else {
            // Extend in the other direction and stitch the halves together.
            visited[seed] = false;
            let (mut backward, back_closed) = walk(seed, q, &mut visited);
            debug_assert!(!back_closed);
            backward.reverse();
            backward.pop();
            backward.extend(forward);
            backward
        };
        let touches = ordered.iter().any(|&i| {
            let (p, q) = stitches[i].endpoints();
            window.on_boundary(p) || window.on_boundary(q)
        });
        strands.push(Strand {
            stitches: ordered.into_iter().map(|i| stitches[i]).collect(),
            closed,
            touches_boundary: touches,
        });
    }
    strands
}

/// The loops of a pattern window: closed strands clear of the boundary.
pub fn loops_of(pattern: &PatternWindow) -> Vec<Loop> {
    trace_strands(pattern)
        .iter()
        .filter_map(Loop::from_strand)
        .collect()
}

/// Computes width, height, length, and enclosed area. The area comes from
/// the shoelace sum over the vertex cycle; an oracle based on counting
/// interior cells agrees with it (see the tests).
pub fn loop_metrics(l: &Loop) -> Result<LoopMetrics> {
    let mut seen = std::collections::HashSet::new();
    for v in l.vertices() {
        if !seen.insert(v) {
            return Err(Error::Integrity(format!("loop revisits vertex {v}")));
        }
    }
    let edges = l.edge_stitches();
    let (mut lo_long, mut hi_long) = (i64::MAX, i64::MIN);
    let (mut lo_lat, mut hi_lat) = (i64::MAX, i64::MIN);
    for s in &edges {
        lo_long = lo_long.min(s.longitude2());
        hi_long = hi_long.max(s.longitude2());
        lo_lat = lo_lat.min(s.latitude2());
        hi_lat = hi_lat.max(s.latitude2());
    }
    let (dw, dh) = (hi_long - lo_long, hi_lat - lo_lat);
    if dw % 2 != 0 || dh % 2 != 0 {
        return Err(Error::Integrity(format!(
            "loop has non-integer width or height ({dw}/2 x {dh}/2)"
        )));
    }
    Ok(LoopMetrics {
        width: dw / 2,
        height: dh / 2,
        length: l.vertices().len(),
        area: Ratio::new(l.signed_area2().abs(), 2),
    })
}

/// Computes the extremal stitches of a loop and checks their pairing: a
/// west-extremal vertical stitch and an east-extremal one sit at each
/// extremal latitude, and they are the only two vertical stitches of the
/// loop there (likewise for horizontal stitches and longitudes). A loop
/// that breaks the pairing is a counterexample and raises an integrity
/// error.
pub fn extremal_profile(l: &Loop) -> Result<ExtremalProfile> {
    let edges = l.edge_stitches();
    let verticals: Vec<&Stitch> = edges
        .iter()
        .filter(|s| s.orientation == Orientation::Vertical)
        .collect();
    let horizontals: Vec<&Stitch> = edges
        .iter()
        .filter(|s| s.orientation == Orientation::Horizontal)
        .collect();

    let min_long = verticals.iter().map(|s| s.longitude2()).min().unwrap();
    let max_long = verticals.iter().map(|s| s.longitude2()).max().unwrap();
    let west: Vec<Stitch> = verticals
        .iter()
        .filter(|s| s.longitude2() == min_long)
        .map(|s| **s)
        .collect();
    let east: Vec<Stitch> = verticals
        .iter()
        .filter(|s| s.longitude2() == max_long)
        .map(|s| **s)
        .collect();

    let min_lat = horizontals.iter().map(|s| s.latitude2()).min().unwrap();
    let max_lat = horizontals.iter().map(|s| s.latitude2()).max().unwrap();
    let south: Vec<Stitch> = horizontals
        .iter()
        .filter(|s| s.latitude2() == min_lat)
        .map(|s| **s)
        .collect();
    let north: Vec<Stitch> = horizontals
        .iter()
        .filter(|s| s.latitude2() == max_lat)
        .map(|s| **s)
        .collect();

    let mut extremal_latitudes2: Vec<i64> = west.iter().map(|s| s.latitude2()).collect();
    extremal_latitudes2.sort_unstable();
    extremal_latitudes2.dedup();
    let mut east_lats: Vec<i64> = east.iter().map(|s| s.latitude2()).collect();
    east_lats.sort_unstable();
    east_lats.dedup();
    if extremal_latitudes2 != east_lats {
        return Err(Error::Integrity(format!(
            "west/east extremal latitudes differ: {extremal_latitudes2:?} vs {east_lats:?}"
        )));
    }
    for &lat in &extremal_latitudes2 {
        let count = verticals.iter().filter(|s| s.latitude2() == lat).count();
        if count != 2 {
            return Err(Error::Integrity(format!(
                "extremal latitude {lat}/2 carries {count} vertical stitches, expected 2"
            )));
        }
    }

    let mut extremal_longitudes2: Vec<i64> = south.iter().map(|s| s.longitude2()).collect();
    extremal_longitudes2.sort_unstable();
    extremal_longitudes2.dedup();
    let mut north_longs: Vec<i64> = north.iter().map(|s| s.longitude2()).collect();
    north_longs.sort_unstable();
    north_longs.dedup();
    if extremal_longitudes2 != north_longs {
        return Err(Error::Integrity(format!(
            "south/north extremal longitudes differ: {extremal_longitudes2:?} vs {north_longs:?}"
        )));
    }
    for &long in &extremal_longitudes2 {
        let count = horizontals
            .iter()
            .filter(|s| s.longitude2() == long)
            .count();
        if count != 2 {
            return Err(Error::Integrity(format!(
                "extremal longitude {long}/2 carries {count} horizontal stitches, expected 2"
            )));
        }
    }

    Ok(ExtremalProfile {
        west,
        east,
        south,
        north,
        extremal_latitudes2,
        extremal_longitudes2,
    })
}

/// Reduces a loop modulo translation, traversal direction, and starting
/// vertex.
pub fn canonicalize(l: &Loop) -> CanonicalLoop {
    let min_x = l.vertices().iter().map(|p| p.x).min().unwrap();
    let min_y = l.vertices().iter().map(|p| p.y).min().unwrap();
    let mut verts: Vec<LatticePoint> = l
        .vertices()
        .iter()
        .map(|p| p.translate(-min_x, -min_y))
        .collect();
    if l.signed_area2() < 0 {
        verts.reverse();
    }
    let n = verts.len();
    let mut best = 0usize;
    for start in 1..n {
        for k in 0..n {
            let a = verts[(start + k) % n];
            let b = verts[(best + k) % n];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    best = start;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let vertices = (0..n).map(|k| verts[(best + k) % n]).collect();
    CanonicalLoop { vertices }
}

impl CanonicalLoop {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn as_loop(&self) -> Loop {
        Loop {
            vertices: self.vertices.clone(),
        }
    }

    /// Bounding-box width; equals the loop width.
    pub fn width(&self) -> i64 {
        self.vertices.iter().map(|p| p.x).max().unwrap()
    }

    /// Bounding-box height; equals the loop height.
    pub fn height(&self) -> i64 {
        self.vertices.iter().map(|p| p.y).max().unwrap()
    }

    pub fn transpose(&self) -> CanonicalLoop {
        canonicalize(&self.as_loop().transpose())
    }
}

/// Enclosing window of a loop, for rendering.
pub fn bounding_window(l: &Loop) -> Window {
    let xs: Vec<i64> = l.vertices().iter().map(|p| p.x).collect();
    let ys: Vec<i64> = l.vertices().iter().map(|p| p.y).collect();
    Window::new(
        *xs.iter().min().unwrap(),
        *xs.iter().max().unwrap(),
        *ys.iter().min().unwrap(),
        *ys.iter().max().unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{generate_window, random_labeling, SquareLabeling};

    fn unit_loop() -> Loop {
        Loop::from_vertices(vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(1, 0),
            LatticePoint::new(1, 1),
            LatticePoint::new(0, 1),
        ])
        .unwrap()
    }

    #[test]
    fn unit_loop_metrics() {
        let m = loop_metrics(&unit_loop()).unwrap();
        assert_eq!((m.width, m.height, m.length), (1, 1, 4));
        assert_eq!(m.area, Ratio::new(1, 1));
    }

    #[test]
    fn unit_loop_profile() {
        let p = extremal_profile(&unit_loop()).unwrap();
        assert_eq!(p.extremal_latitudes2.len(), 1);
        assert_eq!(p.extremal_longitudes2.len(), 1);
    }

    #[test]
    fn empty_pattern_has_no_strands() {
        let l = SquareLabeling::new(
            1,
            1,
            1,
            1,
            crate::grid::Window::new(1, 0, 1, 0),
            |_| 0,
            |_| 0,
        )
        .unwrap();
        assert!(trace_strands(&generate_window(&l)).is_empty());
    }

    #[test]
    fn uniform_labels_leave_no_interior_loop_in_a_tight_window() {
        // With every label zero, the 3x3 window holds only boundary-touching
        // strands.
        let l =
            SquareLabeling::new(1, 1, 1, 1, crate::grid::Window::square(3), |_| 0, |_| 0).unwrap();
        let strands = trace_strands(&generate_window(&l));
        assert!(!strands.is_empty());
        assert!(loops_of(&generate_window(&l)).is_empty());
    }

    #[test]
    fn canonical_form_is_translation_invariant() {
        let a = unit_loop();
        let b = a.translate(5, -2);
        assert_eq!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn canonical_form_ignores_traversal_direction() {
        let a = unit_loop();
        let mut rev = a.vertices().to_vec();
        rev.reverse();
        let b = Loop::from_vertices(rev).unwrap();
        assert_eq!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn shoelace_area_matches_cell_counting() {
        // Interior cell count is an independent area oracle.
        fn cell_count_area(l: &Loop) -> i64 {
            let edges = l.edge_stitches();
            let win = bounding_window(l);
            let mut area = 0;
            for cy in win.y0..win.y1 {
                for cx in win.x0..win.x1 {
                    // Cast a ray east from the cell center, counting vertical
                    // crossings of the loop.
                    let mut crossings = 0;
                    for s in &edges {
                        if s.orientation == Orientation::Vertical {
                            let (p, q) = s.endpoints();
                            if p.x > cx && cy >= p.y && cy < q.y {
                                crossings += 1;
                            }
                        }
                    }
                    if crossings % 2 == 1 {
                        area += 1;
                    }
                }
            }
            area
        }

        let mut checked = 0;
        for seed in 0..40u64 {
            let l = random_labeling(1, 1, 1, 1, Window::new(-1, 12, -1, 14), seed).unwrap();
            for lp in loops_of(&generate_window(&l)) {
                let m = loop_metrics(&lp).unwrap();
                assert_eq!(m.area, Ratio::new(cell_count_area(&lp), 1));
                checked += 1;
            }
        }
        assert!(
            checked > 20,
            "oracle exercised on too few loops ({checked})"
        );
        // The named families up to 11 x 13 as well.
        use crate::canonical::*;
        for kind in [
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
                long: 13,
                teeth: vec![true, false, true, false, true],
            },
        ] {
            let lp = canonical_form(&kind).unwrap().as_loop();
            let m = loop_metrics(&lp).unwrap();
            assert_eq!(m.area, Ratio::new(cell_count_area(&lp), 1), "{kind:?}");
        }
    }

    #[test]
    fn random_window_loops_satisfy_the_structure_theorems() {
        for seed in 0..50u64 {
            let l = random_labeling(1, 1, 1, 1, Window::new(0, 13, 0, 13), seed).unwrap();
            for lp in loops_of(&generate_window(&l)) {
                let m = loop_metrics(&lp).unwrap();
                assert_eq!(m.width % 2, 1, "even width at seed {seed}");
                assert_eq!(m.height % 2, 1, "even height at seed {seed}");
                assert_eq!(m.length % 8, 4, "length mod 8 at seed {seed}");
                assert_eq!(m.area.to_integer() % 4, 1, "area mod 4 at seed {seed}");
                extremal_profile(&lp).unwrap();
            }
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::grid::{generate_window, random_labeling, Window};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn canonicalize_absorbs_translations(seed in 0u64..500, dx in -50i64..50, dy in -50i64..50) {
            let l = random_labeling(1, 1, 1, 1, Window::new(0, 11, 0, 11), seed).unwrap();
            for lp in loops_of(&generate_window(&l)) {
                prop_assert_eq!(canonicalize(&lp.translate(dx, dy)), canonicalize(&lp));
            }
        }

        #[test]
        fn generation_is_pure(seed in 0u64..200) {
            let l = random_labeling(1, 1, 1, 1, Window::new(0, 9, 0, 9), seed).unwrap();
            let a = generate_window(&l);
            let b = generate_window(&l);
            prop_assert_eq!(a.stitches, b.stitches);
        }
    }
}
