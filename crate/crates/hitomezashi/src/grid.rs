//! Grid labels and stitch generation on the square lattice.
//!
//! The horizontal line `y = i` carries a label `eps_i` in `Z/(a+b)`; its
//! stitches are the segments `[(k, i), (k+a, i)]` with `k ≡ eps_i (mod a+b)`.
//! The vertical line `x = j` carries `eta_j` in `Z/(c+d)` and stitches
//! `[(j, k), (j, k+c)]` with `k ≡ eta_j (mod c+d)`. A labeling is an
//! `(a,b,c,d)`-hitomezashi pattern when every endpoint of a vertical stitch
//! is also the endpoint of a horizontal stitch and vice versa; for
//! `(1,1,1,1)` this holds for every label assignment.
//!
//! Everything is windowed: a stitch belongs to a window only if both of its
//! endpoints do, and compatibility is only asserted on a margin-shrunk
//! interior so that truncation at the window edge never masquerades as a
//! violation.

use std::collections::{BTreeMap, HashSet};

use crate::{Error, Result};

/// A point of the integer lattice.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn translate(self, dx: i64, dy: i64) -> Self {
        LatticePoint::new(self.x + dx, self.y + dy)
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub fn other(self) -> Self {
        match self {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        }
    }
}

/// A single stitch. The anchor is the west endpoint of a horizontal stitch
/// or the south endpoint of a vertical one; `span` is its length (`a` for
/// horizontal, `c` for vertical stitches of an `(a,b,c,d)` pattern).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Stitch {
    pub orientation: Orientation,
    pub anchor: LatticePoint,
    pub span: i64,
}

impl Stitch {
    pub fn horizontal(anchor: LatticePoint, span: i64) -> Self {
        debug_assert!(span >= 1);
        Stitch {
            orientation: Orientation::Horizontal,
            anchor,
            span,
        }
    }

    pub fn vertical(anchor: LatticePoint, span: i64) -> Self {
        debug_assert!(span >= 1);
        Stitch {
            orientation: Orientation::Vertical,
            anchor,
            span,
        }
    }

    pub fn endpoints(&self) -> (LatticePoint, LatticePoint) {
        match self.orientation {
            Orientation::Horizontal => (self.anchor, self.anchor.translate(self.span, 0)),
            Orientation::Vertical => (self.anchor, self.anchor.translate(0, self.span)),
        }
    }

    /// Twice the x-coordinate of the midpoint. Kept doubled so half-integer
    /// longitudes stay in integer arithmetic.
    pub fn longitude2(&self) -> i64 {
        let (p, q) = self.endpoints();
        p.x + q.x
    }

    /// Twice the y-coordinate of the midpoint.
    pub fn latitude2(&self) -> i64 {
        let (p, q) = self.endpoints();
        p.y + q.y
    }

    /// Sort key: endpoint pair in lexicographic order.
    pub fn sort_key(&self) -> (LatticePoint, LatticePoint) {
        self.endpoints()
    }
}

/// A closed integer rectangle `[x0, x1] x [y0, y1]`; empty when a bound is
/// inverted.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Window {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl Window {
    pub const fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        Window { x0, x1, y0, y1 }
    }

    /// Square window `[0, side] x [0, side]`.
    pub const fn square(side: i64) -> Self {
        Window::new(0, side, 0, side)
    }

    pub fn is_empty(&self) -> bool {
        self.x0 > self.x1 || self.y0 > self.y1
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn contains_stitch(&self, s: &Stitch) -> bool {
        let (p, q) = s.endpoints();
        self.contains(p) && self.contains(q)
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.contains(p) && (p.x == self.x0 || p.x == self.x1 || p.y == self.y0 || p.y == self.y1)
    }

    pub fn shrink(&self, margin: i64) -> Window {
        Window::new(
            self.x0 + margin,
            self.x1 - margin,
            self.y0 + margin,
            self.y1 - margin,
        )
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        let ys = self.y0..=self.y1;
        ys.flat_map(move |y| (self.x0..=self.x1).map(move |x| LatticePoint::new(x, y)))
    }
}

/// Grid labels for a window: one residue per horizontal and per vertical
/// grid line. Residues are stored reduced; constructors accept arbitrary
/// integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareLabeling {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    window: Window,
    eps: Vec<i64>,
    eta: Vec<i64>,
}

impl SquareLabeling {
    /// Builds a labeling from label functions; labels are reduced into
    /// `[0, a+b)` and `[0, c+d)`. Rejects any parameter below 1.
    pub fn new(
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        window: Window,
        eps_of: impl Fn(i64) -> i64,
        eta_of: impl Fn(i64) -> i64,
    ) -> Result<Self> {
        if a < 1 || b < 1 || c < 1 || d < 1 {
            return Err(Error::Domain(format!(
                "stitch parameters must be positive, got ({a},{b},{c},{d})"
            )));
        }
        if window.is_empty() {
            return Ok(SquareLabeling {
                a,
                b,
                c,
                d,
                window,
                eps: Vec::new(),
                eta: Vec::new(),
            });
        }
        let mh = a + b;
        let mv = c + d;
        let eps = (window.y0..=window.y1)
            .map(|i| eps_of(i).rem_euclid(mh))
            .collect();
        let eta = (window.x0..=window.x1)
            .map(|j| eta_of(j).rem_euclid(mv))
            .collect();
        Ok(SquareLabeling {
            a,
            b,
            c,
            d,
            window,
            eps,
            eta,
        })
    }

    /// Builds a labeling from explicit per-line maps, which must cover every
    /// line of the window.
    pub fn from_maps(
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        window: Window,
        eps: &BTreeMap<i64, i64>,
        eta: &BTreeMap<i64, i64>,
    ) -> Result<Self> {
        for i in window.y0..=window.y1 {
            if !eps.contains_key(&i) {
                return Err(Error::Domain(format!("missing eps label for latitude {i}")));
            }
        }
        for j in window.x0..=window.x1 {
            if !eta.contains_key(&j) {
                return Err(Error::Domain(format!(
                    "missing eta label for longitude {j}"
                )));
            }
        }
        SquareLabeling::new(a, b, c, d, window, |i| eps[&i], |j| eta[&j])
    }

    pub fn params(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Period of the horizontal-line labels, `a + b`.
    pub fn period_h(&self) -> i64 {
        self.a + self.b
    }

    /// Period of the vertical-line labels, `c + d`.
    pub fn period_v(&self) -> i64 {
        self.c + self.d
    }

    pub fn eps(&self, i: i64) -> Result<i64> {
        if self.window.is_empty() || i < self.window.y0 || i > self.window.y1 {
            return Err(Error::Domain(format!("latitude {i} outside window")));
        }
        Ok(self.eps[(i - self.window.y0) as usize])
    }

    pub fn eta(&self, j: i64) -> Result<i64> {
        if self.window.is_empty() || j < self.window.x0 || j > self.window.x1 {
            return Err(Error::Domain(format!("longitude {j} outside window")));
        }
        Ok(self.eta[(j - self.window.x0) as usize])
    }

    /// Rotates the labeling a quarter turn counterclockwise. Horizontal
    /// stitches of span `a` become vertical and vice versa, so the
    /// parameters transform as `(a,b,c,d) -> (c,d,a,b)`.
    pub fn rotate_ccw(&self) -> Result<SquareLabeling> {
        let w = self.window;
        let rotated = Window::new(-w.y1, -w.y0, w.x0, w.x1);
        SquareLabeling::new(
            self.c,
            self.d,
            self.a,
            self.b,
            rotated,
            |i| -self.eta(i).unwrap() - self.c,
            |j| self.eps(-j).unwrap(),
        )
    }
}

/// A labeling together with the stitches it generates inside its window.
#[derive(Clone, Debug)]
pub struct PatternWindow {
    pub labeling: SquareLabeling,
    pub stitches: Vec<Stitch>,
}

impl PatternWindow {
    pub fn window(&self) -> Window {
        self.labeling.window()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ViolationKind {
    /// A vertical stitch ends at a point no horizontal stitch reaches.
    VerticalEndpointUnmatched,
    /// A horizontal stitch ends at a point no vertical stitch reaches.
    HorizontalEndpointUnmatched,
}

/// A failed endpoint match, localized to one lattice point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Violation {
    pub point: LatticePoint,
    pub kind: ViolationKind,
}

/// Horizontal stitches on the line `y = i` whose endpoints both lie in
/// `xrange`, sorted by anchor.
pub fn stitches_on_latitude(
    labeling: &SquareLabeling,
    i: i64,
    xrange: (i64, i64),
) -> Result<Vec<Stitch>> {
    let eps = labeling.eps(i)?;
    let w = labeling.window();
    if xrange.0 < w.x0 || xrange.1 > w.x1 {
        return Err(Error::Precondition(format!(
            "xrange {xrange:?} exceeds window [{}, {}]",
            w.x0, w.x1
        )));
    }
    Ok(
        anchored_stitches(eps, labeling.period_h(), labeling.a, xrange)
            .map(|k| Stitch::horizontal(LatticePoint::new(k, i), labeling.a))
            .collect(),
    )
}

/// Vertical stitches on the line `x = j` whose endpoints both lie in
/// `yrange`, sorted by anchor.
pub fn stitches_on_longitude(
    labeling: &SquareLabeling,
    j: i64,
    yrange: (i64, i64),
) -> Result<Vec<Stitch>> {
    let eta = labeling.eta(j)?;
    let w = labeling.window();
    if yrange.0 < w.y0 || yrange.1 > w.y1 {
        return Err(Error::Precondition(format!(
            "yrange {yrange:?} exceeds window [{}, {}]",
            w.y0, w.y1
        )));
    }
    Ok(
        anchored_stitches(eta, labeling.period_v(), labeling.c, yrange)
            .map(|k| Stitch::vertical(LatticePoint::new(j, k), labeling.c))
            .collect(),
    )
}

/// Anchors `k ≡ residue (mod period)` with `[k, k + span]` inside `range`.
fn anchored_stitches(
    residue: i64,
    period: i64,
    span: i64,
    range: (i64, i64),
) -> impl Iterator<Item = i64> {
    let first = range.0 + (residue - range.0).rem_euclid(period);
    (0..)
        .map(move |t| first + t * period)
        .take_while(move |k| k + span <= range.1)
}

/// All stitches the labeling generates inside its window. Deterministic:
/// the result is sorted by endpoint pairs.
pub fn generate_window(labeling: &SquareLabeling) -> PatternWindow {
    let w = labeling.window();
    let mut stitches = Vec::new();
    if !w.is_empty() {
        for i in w.y0..=w.y1 {
            stitches.extend(stitches_on_latitude(labeling, i, (w.x0, w.x1)).unwrap());
        }
        for j in w.x0..=w.x1 {
            stitches.extend(stitches_on_longitude(labeling, j, (w.y0, w.y1)).unwrap());
        }
    }
    stitches.sort_by_key(|s| s.sort_key());
    PatternWindow {
        labeling: labeling.clone(),
        stitches,
    }
}

/// Default compatibility margin: twice the larger label period.
pub fn default_margin(labeling: &SquareLabeling) -> i64 {
    2 * labeling.period_h().max(labeling.period_v())
}

/// Checks the endpoint-matching condition on the margin-shrunk interior of
/// the window: every interior endpoint of a vertical stitch must also be a
/// horizontal stitch endpoint and vice versa. Returns the violations, empty
/// exactly when the interior restriction satisfies the condition.
///
/// The margin must be at least `max(a+b, c+d)` so that a stitch truncated by
/// the window edge can never be mistaken for a missing partner.
pub fn validate_compatibility(pattern: &PatternWindow, margin: i64) -> Result<Vec<Violation>> {
    let labeling = &pattern.labeling;
    let min_margin = labeling.period_h().max(labeling.period_v());
    if margin < min_margin {
        return Err(Error::Precondition(format!(
            "margin {margin} below minimum {min_margin}"
        )));
    }
    let interior = pattern.window().shrink(margin);
    let mut h_ends: HashSet<LatticePoint> = HashSet::new();
    let mut v_ends: HashSet<LatticePoint> = HashSet::new();
    for s in &pattern.stitches {
        let (p, q) = s.endpoints();
        match s.orientation {
            Orientation::Horizontal => {
                h_ends.insert(p);
                h_ends.insert(q);
            }
            Orientation::Vertical => {
                v_ends.insert(p);
                v_ends.insert(q);
            }
        }
    }
    let mut violations = Vec::new();
    if !interior.is_empty() {
        for p in interior.points() {
            let h = h_ends.contains(&p);
            let v = v_ends.contains(&p);
            if v && !h {
                violations.push(Violation {
                    point: p,
                    kind: ViolationKind::VerticalEndpointUnmatched,
                });
            } else if h && !v {
                violations.push(Violation {
                    point: p,
                    kind: ViolationKind::HorizontalEndpointUnmatched,
                });
            }
        }
    }
    Ok(violations)
}

/// Random labels on a window, reproducible from the seed. Residues are
/// uniform in `Z/(a+b)` and `Z/(c+d)` per line.
pub fn random_labeling(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    window: Window,
    seed: u64,
) -> Result<SquareLabeling> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mh = a + b;
    let mv = c + d;
    if a < 1 || b < 1 || c < 1 || d < 1 {
        return Err(Error::Domain(format!(
            "stitch parameters must be positive, got ({a},{b},{c},{d})"
        )));
    }
    let eps: Vec<i64> = (window.y0..=window.y1)
        .map(|_| rng.gen_range(0..mh))
        .collect();
    let eta: Vec<i64> = (window.x0..=window.x1)
        .map(|_| rng.gen_range(0..mv))
        .collect();
    SquareLabeling::new(
        a,
        b,
        c,
        d,
        window,
        |i| eps[(i - window.y0) as usize],
        |j| eta[(j - window.x0) as usize],
    )
}
