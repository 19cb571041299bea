//! Long-stitch patterns: horizontal stitches run a-over-b, vertical ones
//! c-over-d.
//!
//! A valid pattern forces `a + b = c + d =: M` (count stitch endpoints in an
//! `(a+b-1) x (c+d-1)` box by rows and by columns). Writing `q` and `r` for
//! the additive orders of `a` and `c` modulo `M`, the patterns with
//! `gcd(a,b,c,d) = 1` fall into rigid classes:
//!
//! - generic (`a != b`, `c != d`): every pattern is all rectangles or all
//!   zig-zags of one sign. Rectangle patterns exist when `q` and `r` are
//!   both even and are parameterized by a code of two bit vectors and a
//!   permutation; zig-zag patterns exist when `gcd(a,b) = gcd(c,d) = 1` and
//!   number `2M`. Both kinds repeat with period `M` in each direction,
//!   which makes exhaustive counting on an `M x M` torus a complete,
//!   independent oracle for the closed-form counts.
//! - `a = b` (or `c = d`, its quarter-turn): vertical labels satisfy
//!   `eta_j = eta_{j+a}`, strands are rectangles and horizontal accordions,
//!   and the pattern set is parameterized by a code with one free bit per
//!   latitude, hence a continuum.
//! - `gcd(a,b,c,d) = g > 1`: every pattern is an overlay of `g` dilated
//!   patterns with the reduced parameters, arranged by a permutation.

use rayon::prelude::*;

use crate::grid::{SquareLabeling, Stitch, Window};
use crate::loops::Strand;
use crate::{Error, Result};

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Inverse of `x` modulo `m`; requires `gcd(x, m) = 1`.
fn mod_inverse(x: i64, m: i64) -> i64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, x.rem_euclid(m));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{x} is not invertible mod {m}");
    t.rem_euclid(m)
}

/// Additive order of `x` in `Z/m`.
fn additive_order(x: i64, m: i64) -> i64 {
    m / gcd(x.rem_euclid(m), m)
}

/// Which classes of pattern the parameters admit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PatternCase {
    /// No pattern exists at all.
    NoPatterns,
    /// Every pattern consists of rectangles.
    RectanglesOnly,
    /// Every pattern consists of zig-zags of a single sign.
    ZigZagsOnly,
    /// Rectangle patterns and zig-zag patterns both exist.
    RectanglesOrZigZags,
    /// `a = b` or `c = d`: rectangles mixed with accordions, a continuum.
    ABCase,
    /// `gcd(a,b,c,d) > 1`: reduce and compose by dilation overlay.
    Degenerate,
}

impl std::fmt::Display for PatternCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PatternCase::NoPatterns => "no-patterns",
            PatternCase::RectanglesOnly => "rectangles-only",
            PatternCase::ZigZagsOnly => "zig-zags-only",
            PatternCase::RectanglesOrZigZags => "rectangles-or-zig-zags",
            PatternCase::ABCase => "equal-pair",
            PatternCase::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

/// Derived arithmetic of a parameter quadruple.
#[derive(Clone, Copy, Debug)]
pub struct LongStitchParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    /// `a + b` (equals `c + d` whenever patterns exist).
    pub m: i64,
    /// Additive order of `a` mod `m`.
    pub q: i64,
    /// Additive order of `c` mod `m`.
    pub r: i64,
    pub gcd_ab: i64,
    pub gcd_cd: i64,
    pub case: PatternCase,
}

/// Classifies a parameter quadruple. Rejects non-positive entries and the
/// all-ones quadruple (ordinary patterns are unconstrained, so there is
/// nothing to classify).
pub fn derive_params(a: i64, b: i64, c: i64, d: i64) -> Result<LongStitchParams> {
    if a < 1 || b < 1 || c < 1 || d < 1 {
        return Err(Error::Domain(format!(
            "parameters must be positive, got ({a},{b},{c},{d})"
        )));
    }
    if (a, b, c, d) == (1, 1, 1, 1) {
        return Err(Error::Domain(
            "(1,1,1,1) is the ordinary case: every labeling is valid and no classification applies"
                .into(),
        ));
    }
    let m = a + b;
    let q = additive_order(a, m);
    let r = additive_order(c, m);
    let gcd_ab = gcd(a, b);
    let gcd_cd = gcd(c, d);
    let g4 = gcd(gcd_ab, gcd_cd);
    let case = if m != c + d {
        PatternCase::NoPatterns
    } else if g4 > 1 {
        PatternCase::Degenerate
    } else if a == b {
        // m = 2a; patterns exist exactly when c has even order.
        if r % 2 == 0 {
            PatternCase::ABCase
        } else {
            PatternCase::NoPatterns
        }
    } else if c == d {
        if q % 2 == 0 {
            PatternCase::ABCase
        } else {
            PatternCase::NoPatterns
        }
    } else {
        let zigzags = gcd_ab == gcd_cd; // both 1, given gcd(a,b,c,d) = 1
        let rects = q % 2 == 0 && r % 2 == 0;
        match (rects, zigzags) {
            (false, false) => PatternCase::NoPatterns,
            (true, false) => PatternCase::RectanglesOnly,
            (false, true) => PatternCase::ZigZagsOnly,
            (true, true) => PatternCase::RectanglesOrZigZags,
        }
    };
    Ok(LongStitchParams {
        a,
        b,
        c,
        d,
        m,
        q,
        r,
        gcd_ab,
        gcd_cd,
        case,
    })
}

/// The strand taxonomy.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum StrandClass {
    /// A four-stitch loop.
    Rectangle,
    /// Stitches alternate east and north in some orientation.
    ZigZagPos,
    /// Stitches alternate east and south in some orientation.
    ZigZagNeg,
    /// Horizontal stitches all run one way, vertical ones alternate.
    AccordionH,
    /// Vertical stitches all run one way, horizontal ones alternate.
    AccordionV,
    Other,
}

impl std::fmt::Display for StrandClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StrandClass::Rectangle => "rectangle",
            StrandClass::ZigZagPos => "zig-zag-positive",
            StrandClass::ZigZagNeg => "zig-zag-negative",
            StrandClass::AccordionH => "accordion-horizontal",
            StrandClass::AccordionV => "accordion-vertical",
            StrandClass::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    East,
    West,
    North,
    South,
}

/// Directed stitch sequence of a strand, walking from one end (or around
/// the cycle).
fn direction_word(strand: &Strand) -> Result<Vec<Dir>> {
    let n = strand.stitches.len();
    if n == 0 {
        return Err(Error::Indeterminate("empty strand".into()));
    }
    let ends = |s: &Stitch| s.endpoints();
    // Start vertex: for closed strands the endpoint shared with the last
    // stitch; for open strands the free endpoint of the first stitch.
    let first = &strand.stitches[0];
    let (f0, f1) = ends(first);
    let start = if n == 1 {
        f0
    } else {
        let (n0, n1) = ends(if strand.closed {
            &strand.stitches[n - 1]
        } else {
            &strand.stitches[1]
        });
        let shared = if f0 == n0 || f0 == n1 { f0 } else { f1 };
        if strand.closed {
            shared
        } else if shared == f0 {
            f1
        } else {
            f0
        }
    };
    let mut cur = start;
    let mut word = Vec::with_capacity(n);
    for s in &strand.stitches {
        let (p, q) = ends(s);
        let nxt = if p == cur {
            q
        } else if q == cur {
            p
        } else {
            return Err(Error::Domain("strand stitches are not consecutive".into()));
        };
        word.push(match (nxt.x - cur.x, nxt.y - cur.y) {
            (dx, 0) if dx > 0 => Dir::East,
            (dx, 0) if dx < 0 => Dir::West,
            (0, dy) if dy > 0 => Dir::North,
            _ => Dir::South,
        });
        cur = nxt;
    }
    Ok(word)
}

/// Classifies a strand from its oriented stitch directions. Open strands
/// shorter than four stitches cannot be told apart and raise an
/// indeterminate error.
pub fn classify_strand(strand: &Strand, params: &LongStitchParams) -> Result<StrandClass> {
    for s in &strand.stitches {
        let expected = match s.orientation {
            crate::grid::Orientation::Horizontal => params.a,
            crate::grid::Orientation::Vertical => params.c,
        };
        if s.span != expected {
            return Err(Error::Domain(format!(
                "stitch span {} does not match the parameters ({},{},{},{})",
                s.span, params.a, params.b, params.c, params.d
            )));
        }
    }
    if strand.closed {
        return Ok(if strand.stitches.len() == 4 {
            StrandClass::Rectangle
        } else {
            StrandClass::Other
        });
    }
    if strand.stitches.len() < 4 {
        return Err(Error::Indeterminate(format!(
            "open strand of {} stitches is too short to classify",
            strand.stitches.len()
        )));
    }
    let word = direction_word(strand)?;
    let hs: Vec<Dir> = word
        .iter()
        .copied()
        .filter(|d| matches!(d, Dir::East | Dir::West))
        .collect();
    let vs: Vec<Dir> = word
        .iter()
        .copied()
        .filter(|d| matches!(d, Dir::North | Dir::South))
        .collect();
    let all_same = |dirs: &[Dir]| dirs.windows(2).all(|w| w[0] == w[1]);
    let alternating = |dirs: &[Dir]| dirs.windows(2).all(|w| w[0] != w[1]);
    Ok(if all_same(&hs) && all_same(&vs) {
        match (hs[0], vs[0]) {
            (Dir::East, Dir::North) | (Dir::West, Dir::South) => StrandClass::ZigZagPos,
            (Dir::East, Dir::South) | (Dir::West, Dir::North) => StrandClass::ZigZagNeg,
            _ => StrandClass::Other,
        }
    } else if all_same(&vs) && alternating(&hs) {
        StrandClass::AccordionV
    } else if all_same(&hs) && alternating(&vs) {
        StrandClass::AccordionH
    } else {
        StrandClass::Other
    })
}

/// Code for an all-rectangle pattern: one bit per longitude class of the
/// subgroup generated by `a`, one per latitude class of the subgroup
/// generated by `c`, and a pairing permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleCode {
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    /// Permutation of `0..M/2`, matching west longitudes to south latitudes.
    pub sigma: Vec<usize>,
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::Domain(format!(
            "permutation length {} differs from {n}",
            sigma.len()
        )));
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::Domain(format!(
                "{sigma:?} is not a permutation of 0..{n}"
            )));
        }
        seen[s] = true;
    }
    Ok(())
}

fn check_bits(bits: &[u8], n: usize, name: &str) -> Result<()> {
    if bits.len() != n {
        return Err(Error::Domain(format!(
            "{name} must have {n} bits, got {}",
            bits.len()
        )));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::Domain(format!("{name} entries must be bits")));
    }
    Ok(())
}

/// The concatenated coset walk: for each class representative `i` in
/// `1..=m/order`, the values `i + (bit + 2t) * step` for `t < order/2`,
/// reduced mod `m`. Picks out half of each coset of the subgroup generated
/// by `step`.
fn tilde(m: i64, step: i64, order: i64, bits: &[u8]) -> Vec<i64> {
    let classes = m / order;
    let mut out = Vec::with_capacity((m / 2) as usize);
    for i in 1..=classes {
        let bit = i64::from(bits[(i - 1) as usize]);
        for t in 0..order / 2 {
            out.push((i + (bit + 2 * t) * step).rem_euclid(m));
        }
    }
    out
}

fn require_rectangle_case(params: &LongStitchParams) -> Result<()> {
    match params.case {
        PatternCase::RectanglesOnly | PatternCase::RectanglesOrZigZags => Ok(()),
        other => Err(Error::Domain(format!(
            "rectangle codes need the generic even-order case, but ({},{},{},{}) is {other}",
            params.a, params.b, params.c, params.d
        ))),
    }
}

/// Decodes a rectangle code into grid labels on the window. The decoded
/// pattern consists entirely of rectangles whose southwest corners are the
/// pairs matched by the permutation, repeated with period `M` both ways.
pub fn phi_decode(
    code: &RectangleCode,
    params: &LongStitchParams,
    window: Window,
) -> Result<SquareLabeling> {
    require_rectangle_case(params)?;
    let (m, a, c) = (params.m, params.a, params.c);
    check_bits(&code.u, (m / params.q) as usize, "u")?;
    check_bits(&code.v, (m / params.r) as usize, "v")?;
    check_permutation(&code.sigma, (m / 2) as usize)?;
    let ut = tilde(m, a, params.q, &code.u);
    let vt = tilde(m, c, params.r, &code.v);
    let mut eps: Vec<Option<i64>> = vec![None; m as usize];
    let mut eta: Vec<Option<i64>> = vec![None; m as usize];
    let put = |slot: &mut Vec<Option<i64>>, idx: i64, val: i64| -> Result<()> {
        let cell = &mut slot[idx.rem_euclid(m) as usize];
        if cell.is_some() && *cell != Some(val) {
            return Err(Error::Integrity(format!(
                "rectangle corners assign conflicting labels at line {idx}"
            )));
        }
        *cell = Some(val);
        Ok(())
    };
    for (k, &x) in ut.iter().enumerate() {
        let y = vt[code.sigma[k]];
        put(&mut eta, x, y)?;
        put(&mut eta, x + a, y)?;
        put(&mut eps, y, x)?;
        put(&mut eps, y + c, x)?;
    }
    let eps: Vec<i64> = eps
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Integrity("rectangle corners leave a latitude unlabeled".into()))?;
    let eta: Vec<i64> = eta
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Integrity("rectangle corners leave a longitude unlabeled".into()))?;
    SquareLabeling::new(
        params.a,
        params.b,
        params.c,
        params.d,
        window,
        |i| eps[i.rem_euclid(m) as usize],
        |j| eta[j.rem_euclid(m) as usize],
    )
}

/// Reads the label residues of one period out of a labeling, verifying the
/// labels repeat with period `m` across the whole window.
fn periodic_base(labeling: &SquareLabeling, m: i64) -> Result<(Vec<i64>, Vec<i64>)> {
    let w = labeling.window();
    let mut eps: Vec<Option<i64>> = vec![None; m as usize];
    let mut eta: Vec<Option<i64>> = vec![None; m as usize];
    for i in w.y0..=w.y1 {
        let r = i.rem_euclid(m) as usize;
        let val = labeling.eps(i)?;
        if *eps[r].get_or_insert(val) != val {
            return Err(Error::Domain(format!(
                "eps labels are not {m}-periodic at latitude {i}"
            )));
        }
    }
    for j in w.x0..=w.x1 {
        let r = j.rem_euclid(m) as usize;
        let val = labeling.eta(j)?;
        if *eta[r].get_or_insert(val) != val {
            return Err(Error::Domain(format!(
                "eta labels are not {m}-periodic at longitude {j}"
            )));
        }
    }
    let eps = eps.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
        Error::Precondition(format!(
            "window too small to read a full period of {m} latitudes"
        ))
    })?;
    let eta = eta.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
        Error::Precondition(format!(
            "window too small to read a full period of {m} longitudes"
        ))
    })?;
    Ok((eps, eta))
}

/// Inverts `phi_decode`: recovers the rectangle code of an all-rectangle
/// pattern. Fails on patterns that are not `M`-periodic or not made of
/// rectangles.
pub fn phi_encode(labeling: &SquareLabeling, params: &LongStitchParams) -> Result<RectangleCode> {
    require_rectangle_case(params)?;
    let (m, a, c) = (params.m, params.a, params.c);
    if labeling.params() != (params.a, params.b, params.c, params.d) {
        return Err(Error::Domain(
            "labeling parameters differ from the given quadruple".into(),
        ));
    }
    let (eps, eta) = periodic_base(labeling, m)?;
    // Southwest rectangle corners in one period.
    let mut corners = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if eta[x as usize] == y
                && eta[(x + a).rem_euclid(m) as usize] == y
                && eps[y as usize] == x
                && eps[(y + c).rem_euclid(m) as usize] == x
            {
                corners.push((x, y));
            }
        }
    }
    if corners.len() != (m / 2) as usize {
        return Err(Error::Domain(format!(
            "pattern is not entirely rectangles: found {} southwest corners, expected {}",
            corners.len(),
            m / 2
        )));
    }
    // Each coset half determines one bit.
    let derive_bits = |step: i64, order: i64, values: &[i64], name: &str| -> Result<Vec<u8>> {
        let classes = m / order;
        let subgroup = gcd(step, m);
        let mut bits = Vec::with_capacity(classes as usize);
        for i in 1..=classes {
            let half = |bit: i64| -> Vec<i64> {
                let mut v: Vec<i64> = (0..order / 2)
                    .map(|t| (i + (bit + 2 * t) * step).rem_euclid(m))
                    .collect();
                v.sort_unstable();
                v
            };
            let mut class_vals: Vec<i64> = values
                .iter()
                .copied()
                .filter(|&x| (x - i).rem_euclid(subgroup) == 0)
                .collect();
            class_vals.sort_unstable();
            class_vals.dedup();
            if class_vals == half(0) {
                bits.push(0);
            } else if class_vals == half(1) {
                bits.push(1);
            } else {
                return Err(Error::Domain(format!(
                    "{name} class {i} does not match either coset half"
                )));
            }
        }
        Ok(bits)
    };
    let west: Vec<i64> = corners.iter().map(|&(x, _)| x).collect();
    let south: Vec<i64> = corners.iter().map(|&(_, y)| y).collect();
    let u = derive_bits(a, params.q, &west, "west")?;
    let v = derive_bits(c, params.r, &south, "south")?;
    let ut = tilde(m, a, params.q, &u);
    let vt = tilde(m, c, params.r, &v);
    let mut sigma = vec![0usize; (m / 2) as usize];
    for (k, &x) in ut.iter().enumerate() {
        let y = corners
            .iter()
            .find(|&&(cx, _)| cx == x)
            .map(|&(_, cy)| cy)
            .ok_or_else(|| Error::Domain(format!("no rectangle corner at longitude {x}")))?;
        let l = vt.iter().position(|&vy| vy == y).ok_or_else(|| {
            Error::Domain(format!("corner latitude {y} is outside the coset walk"))
        })?;
        sigma[k] = l;
    }
    let code = RectangleCode { u, v, sigma };
    // Round-trip guard: the recovered code must regenerate the labels.
    let again = phi_decode(&code, params, labeling.window())?;
    if &again != labeling {
        return Err(Error::Domain("pattern is not entirely rectangles".into()));
    }
    Ok(code)
}

/// Zig-zag sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Positive,
    Negative,
}

/// Grid labels of the unique zig-zag pattern of the given sign with
/// horizontal label `offset` at latitude 0. The labels are linear:
/// `eps_i = i a c^{-1} + offset` for the positive sign, with the vertical
/// labels shifted to match; the negative sign is the mirror image.
pub fn zigzag_pattern(
    params: &LongStitchParams,
    offset: i64,
    sign: Sign,
    window: Window,
) -> Result<SquareLabeling> {
    if params.gcd_ab != 1 || params.gcd_cd != 1 {
        return Err(Error::Domain(format!(
            "zig-zags need gcd(a,b) = gcd(c,d) = 1, got {} and {}",
            params.gcd_ab, params.gcd_cd
        )));
    }
    if !matches!(
        params.case,
        PatternCase::ZigZagsOnly | PatternCase::RectanglesOrZigZags
    ) {
        return Err(Error::Domain(format!(
            "({},{},{},{}) admits no zig-zag patterns",
            params.a, params.b, params.c, params.d
        )));
    }
    let m = params.m;
    let (a, c) = (params.a, params.c);
    let c_inv = mod_inverse(c, m);
    let a_inv = mod_inverse(a, m);
    let o = offset.rem_euclid(m);
    SquareLabeling::new(
        params.a,
        params.b,
        params.c,
        params.d,
        window,
        move |i| match sign {
            Sign::Positive => i * a * c_inv + o,
            Sign::Negative => -i * a * c_inv + o,
        },
        move |j| match sign {
            Sign::Positive => (j - o) * c * a_inv - c,
            Sign::Negative => -(j - o) * c * a_inv,
        },
    )
}

/// Code for an `(a,a,c,d)` pattern: the coset bits and permutation fix the
/// vertical stitches; one bit per latitude then picks between the two
/// horizontal placements, so the bit vector `v` is indexed by latitude over
/// the decode window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbCode {
    pub u: Vec<u8>,
    /// `v[i - y0]` is the bit for latitude `i` of the decode window.
    pub v: Vec<u8>,
    /// Permutation of `0..a`.
    pub sigma: Vec<usize>,
}

/// Decodes an `(a,a,c,d)` pattern code on the window. The vertical labels
/// repeat with period `a`; per latitude, bit 0 places the horizontal stitch
/// with its west endpoint in `[0, a-1]` and bit 1 in `[a, 2a-1]`.
pub fn psi_decode(code: &AbCode, a: i64, c: i64, d: i64, window: Window) -> Result<SquareLabeling> {
    if a < 1 || c < 1 || d < 1 {
        return Err(Error::Domain("parameters must be positive".into()));
    }
    if (a, c, d) == (1, 1, 1) {
        return Err(Error::Domain("(1,1,1,1) is the ordinary case".into()));
    }
    let m = 2 * a;
    if c + d != m {
        return Err(Error::Domain(format!(
            "need c + d = 2a, got {c} + {d} != {m}"
        )));
    }
    if gcd(a, gcd(c, d)) != 1 {
        return Err(Error::Domain(
            "gcd(a,c,d) must be 1; factor out and dilate".into(),
        ));
    }
    if c == d {
        return Err(Error::Domain(
            "c and d must differ in the equal-pair case".into(),
        ));
    }
    let r = additive_order(c, m);
    if r % 2 != 0 {
        return Err(Error::Domain(format!(
            "c = {c} has odd order {r} mod {m}: no (a,a,c,d) patterns exist"
        )));
    }
    check_bits(&code.u, (m / r) as usize, "u")?;
    check_permutation(&code.sigma, a as usize)?;
    let lat_count = (window.y1 - window.y0 + 1) as usize;
    if code.v.len() != lat_count {
        return Err(Error::Domain(format!(
            "v must carry one bit per window latitude ({lat_count}), got {}",
            code.v.len()
        )));
    }
    if code.v.iter().any(|&b| b > 1) {
        return Err(Error::Domain("v entries must be bits".into()));
    }
    let ut = tilde(m, c, r, &code.u);
    debug_assert_eq!(ut.len() as i64, a);
    let eta_of_class = |class0: usize| ut[code.sigma[class0]];
    // Latitude coverage: longitude class k owns the latitudes eta and
    // eta + c mod M; together the classes cover each latitude exactly once.
    let mut owner: Vec<Option<usize>> = vec![None; m as usize];
    for k in 0..a as usize {
        let base = eta_of_class(k);
        for lat in [base, (base + c).rem_euclid(m)] {
            if owner[lat as usize].is_some() {
                return Err(Error::Integrity(format!(
                    "latitude {lat} is covered twice by vertical stitch endpoints"
                )));
            }
            owner[lat as usize] = Some(k);
        }
    }
    let eps_for = |i: i64, bit: u8| -> i64 {
        let k = owner[i.rem_euclid(m) as usize].expect("every latitude is covered");
        // Longitude class k holds the longitudes j = k + 1 mod a.
        let rho = (k as i64 + 1).rem_euclid(a);
        rho + a * i64::from(bit)
    };
    SquareLabeling::new(
        a,
        a,
        c,
        d,
        window,
        |i| eps_for(i, code.v[(i - window.y0) as usize]),
        |j| eta_of_class((j - 1).rem_euclid(a) as usize),
    )
}

/// Overlays `g` dilated patterns with the same parameters: pattern `i`
/// (1-indexed) is scaled by `g` and shifted by `(i, sigma(i))`. The result
/// is a `(ga, gb, gc, gd)` labeling; every pattern with those parameters
/// arises this way.
pub fn dilate_overlay(patterns: &[SquareLabeling], sigma: &[usize]) -> Result<SquareLabeling> {
    let g = patterns.len();
    if g == 0 {
        return Err(Error::Domain("need at least one pattern to overlay".into()));
    }
    check_permutation(sigma, g)?;
    let (a, b, c, d) = patterns[0].params();
    let window = patterns[0].window();
    for p in patterns {
        if p.params() != (a, b, c, d) {
            return Err(Error::Domain(
                "all overlay inputs must share their parameters".into(),
            ));
        }
        if p.window() != window {
            return Err(Error::Domain(
                "all overlay inputs must share their window".into(),
            ));
        }
    }
    let g_i = g as i64;
    let out_window = Window::new(
        g_i * (window.x0 + 1),
        g_i * window.x1,
        g_i * (window.y0 + 1),
        g_i * window.y1,
    );
    if out_window.is_empty() {
        return Err(Error::Domain(
            "input windows too small for the dilated overlay".into(),
        ));
    }
    // Row j of the output belongs to the pattern i with sigma(i) + 1 = j
    // mod g; its source row is (j - sigma(i) - 1) / g. Columns mirror this
    // with the roles of i and sigma(i) exchanged.
    let mut row_owner = vec![usize::MAX; g];
    let mut col_owner = vec![usize::MAX; g];
    for i in 0..g {
        row_owner[(sigma[i] + 1) % g] = i;
        col_owner[(i + 1) % g] = i;
    }
    SquareLabeling::new(
        g_i * a,
        g_i * b,
        g_i * c,
        g_i * d,
        out_window,
        |j| {
            let i = row_owner[j.rem_euclid(g_i) as usize];
            let shift = sigma[i] as i64 + 1;
            let src = (j - shift).div_euclid(g_i);
            g_i * patterns[i].eps(src).unwrap() + (i as i64 + 1)
        },
        |j| {
            let i = col_owner[j.rem_euclid(g_i) as usize];
            let shift = i as i64 + 1;
            let src = (j - shift).div_euclid(g_i);
            g_i * patterns[i].eta(src).unwrap() + (sigma[i] as i64 + 1)
        },
    )
}

/// Exact number of patterns for a parameter quadruple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CountResult {
    Zero,
    Finite(u128),
    /// The `a = b` (or `c = d`) case: one free bit per latitude.
    Continuum,
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// The closed-form pattern count per classification case.
pub fn count_patterns(params: &LongStitchParams) -> Result<CountResult> {
    let m = params.m as u128;
    let rect = || 2u128.pow((params.m / params.q + params.m / params.r) as u32) * factorial(m / 2);
    Ok(match params.case {
        PatternCase::NoPatterns => CountResult::Zero,
        PatternCase::RectanglesOnly => CountResult::Finite(rect()),
        PatternCase::ZigZagsOnly => CountResult::Finite(2 * m),
        PatternCase::RectanglesOrZigZags => CountResult::Finite(rect() + 2 * m),
        PatternCase::ABCase => CountResult::Continuum,
        PatternCase::Degenerate => {
            return Err(Error::Domain(
                "gcd(a,b,c,d) > 1: factor it out and compose with the dilation overlay".into(),
            ))
        }
    })
}

/// A full label assignment on the `M x M` torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusLabeling {
    pub eps: Vec<i64>,
    pub eta: Vec<i64>,
}

impl TorusLabeling {
    /// Expands the torus labels periodically over a window.
    pub fn to_labeling(&self, params: &LongStitchParams, window: Window) -> Result<SquareLabeling> {
        let m = params.m;
        SquareLabeling::new(
            params.a,
            params.b,
            params.c,
            params.d,
            window,
            |i| self.eps[i.rem_euclid(m) as usize],
            |j| self.eta[j.rem_euclid(m) as usize],
        )
    }
}

fn require_generic(params: &LongStitchParams) -> Result<()> {
    if params.m != params.c + params.d {
        // Densities differ: no patterns exist, which the oracle reports
        // directly without the torus model.
        return Ok(());
    }
    if params.a == params.b || params.c == params.d {
        return Err(Error::Domain(
            "the equal-pair case is not vertically periodic; the torus oracle does not apply"
                .into(),
        ));
    }
    if gcd(params.gcd_ab, params.gcd_cd) > 1 {
        return Err(Error::Domain(
            "reduce gcd(a,b,c,d) to 1 before counting".into(),
        ));
    }
    Ok(())
}

/// Counts valid label assignments on the `M x M` torus by depth-first
/// assignment of the horizontal labels, in ascending value order, with
/// forward propagation into the vertical label domains. Complete for the
/// generic case because every such pattern repeats with period `M` both
/// ways; once all rows are fixed, the columns are independent, so the leaf
/// count is the product of the remaining domain sizes.
pub fn brute_force_count(params: &LongStitchParams) -> Result<u64> {
    require_generic(params)?;
    if params.m != params.c + params.d {
        return Ok(0);
    }
    let m = params.m;
    if m > 8 {
        return Err(Error::Resource(format!(
            "torus oracle scans up to {m}^{m} row prefixes; M = {m} exceeds the guard of 8"
        )));
    }
    // The top-level branch on eps_0 splits across workers; each branch runs
    // the same deterministic scan and the counts are summed.
    let total: u64 = (0..m)
        .into_par_iter()
        .map(|e0| {
            let mut domains = vec![(1u64 << m) - 1; m as usize];
            if propagate_row(params, 0, e0, &mut domains) {
                dfs_count(params, 1, &domains)
            } else {
                0
            }
        })
        .sum();
    Ok(total)
}

/// Applies the constraints of row `y` (with label `e`) to every vertical
/// domain; returns false when a domain empties.
fn propagate_row(params: &LongStitchParams, y: i64, e: i64, domains: &mut [u64]) -> bool {
    let m = params.m;
    let (a, c) = (params.a, params.c);
    for x in 0..m {
        // (x, y) is a horizontal endpoint iff x = eps_y or eps_y + a; it is
        // a vertical endpoint iff eta_x = y or y - c. The two must agree.
        let h_end = x == e || x == (e + a).rem_euclid(m);
        let pair = (1u64 << y.rem_euclid(m)) | (1u64 << (y - c).rem_euclid(m));
        let dom = &mut domains[x as usize];
        if h_end {
            *dom &= pair;
        } else {
            *dom &= !pair;
        }
        if *dom == 0 {
            return false;
        }
    }
    true
}

fn dfs_count(params: &LongStitchParams, depth: i64, domains: &[u64]) -> u64 {
    let m = params.m;
    if depth == m {
        return domains.iter().map(|d| d.count_ones() as u64).product();
    }
    let mut total = 0;
    for e in 0..m {
        let mut next = domains.to_vec();
        if propagate_row(params, depth, e, &mut next) {
            total += dfs_count(params, depth + 1, &next);
        }
    }
    total
}

/// Enumerates the valid torus labelings themselves (small `M` only).
pub fn brute_force_patterns(params: &LongStitchParams) -> Result<Vec<TorusLabeling>> {
    require_generic(params)?;
    if params.m != params.c + params.d {
        return Ok(Vec::new());
    }
    let m = params.m;
    if m > 6 {
        return Err(Error::Resource(format!(
            "pattern collection is guarded to M <= 6, got {m}"
        )));
    }
    fn rec(
        params: &LongStitchParams,
        depth: i64,
        eps: &mut Vec<i64>,
        domains: &[u64],
        out: &mut Vec<TorusLabeling>,
    ) {
        let m = params.m;
        if depth == m {
            // Vertical labels are independent once all rows are fixed.
            let choices: Vec<Vec<i64>> = domains
                .iter()
                .map(|d| (0..m).filter(|v| d >> v & 1 == 1).collect())
                .collect();
            let mut eta = vec![0i64; m as usize];
            fn emit(
                k: usize,
                choices: &[Vec<i64>],
                eta: &mut Vec<i64>,
                eps: &[i64],
                out: &mut Vec<TorusLabeling>,
            ) {
                if k == choices.len() {
                    out.push(TorusLabeling {
                        eps: eps.to_vec(),
                        eta: eta.clone(),
                    });
                    return;
                }
                for &v in &choices[k] {
                    eta[k] = v;
                    emit(k + 1, choices, eta, eps, out);
                }
            }
            emit(0, &choices, &mut eta, eps, out);
            return;
        }
        for e in 0..m {
            let mut next = domains.to_vec();
            if propagate_row(params, depth, e, &mut next) {
                eps[depth as usize] = e;
                rec(params, depth + 1, eps, &next, out);
            }
        }
    }
    let mut out = Vec::new();
    let mut eps = vec![0i64; m as usize];
    let domains = vec![(1u64 << m) - 1; m as usize];
    rec(params, 0, &mut eps, &domains, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{default_margin, generate_window, validate_compatibility};
    use crate::loops::trace_strands;

    fn params(a: i64, b: i64, c: i64, d: i64) -> LongStitchParams {
        derive_params(a, b, c, d).unwrap()
    }

    #[test]
    fn parameter_cases() {
        assert_eq!(params(3, 1, 3, 1).case, PatternCase::RectanglesOrZigZags);
        assert_eq!(params(2, 1, 2, 1).case, PatternCase::ZigZagsOnly);
        assert_eq!(params(2, 4, 5, 1).case, PatternCase::NoPatterns);
        assert_eq!(params(2, 2, 3, 1).case, PatternCase::ABCase);
        assert_eq!(params(3, 1, 2, 2).case, PatternCase::ABCase);
        assert_eq!(params(1, 3, 1, 3).case, PatternCase::RectanglesOrZigZags);
        assert_eq!(params(2, 1, 1, 2).case, PatternCase::ZigZagsOnly);
        assert_eq!(params(2, 4, 2, 4).case, PatternCase::Degenerate);
        assert_eq!(params(1, 2, 2, 2).case, PatternCase::NoPatterns);
        assert_eq!(params(3, 1, 2, 1).case, PatternCase::NoPatterns);
        assert!(derive_params(1, 1, 1, 1).is_err());
        assert!(derive_params(0, 1, 1, 1).is_err());
    }

    #[test]
    fn orders_and_gcds() {
        let p = params(3, 1, 3, 1);
        assert_eq!((p.m, p.q, p.r), (4, 4, 4));
        let p = params(2, 1, 2, 1);
        assert_eq!((p.m, p.q, p.r), (3, 3, 3));
        let p = params(2, 4, 5, 1);
        assert_eq!((p.m, p.q, p.r, p.gcd_ab, p.gcd_cd), (6, 3, 6, 2, 1));
    }

    #[test]
    fn zigzag_labels_match_the_linear_formula() {
        // (3,1,3,1): c^{-1} = 3 mod 4, so eps_i = i and eta_j = j + 1.
        let p = params(3, 1, 3, 1);
        let l = zigzag_pattern(&p, 0, Sign::Positive, Window::new(0, 7, 0, 7)).unwrap();
        for i in 0..=7 {
            assert_eq!(l.eps(i).unwrap(), i.rem_euclid(4));
            assert_eq!(l.eta(i).unwrap(), (i + 1).rem_euclid(4));
        }
    }

    #[test]
    fn zigzag_patterns_validate_and_classify() {
        let p = params(3, 1, 3, 1);
        for (offset, sign) in [
            (0, Sign::Positive),
            (2, Sign::Positive),
            (1, Sign::Negative),
            (3, Sign::Negative),
        ] {
            let l = zigzag_pattern(&p, offset, sign, Window::new(-20, 20, -20, 20)).unwrap();
            let pat = generate_window(&l);
            let v = validate_compatibility(&pat, default_margin(&l)).unwrap();
            assert!(v.is_empty(), "offset {offset} {sign:?}: {v:?}");
            let want = match sign {
                Sign::Positive => StrandClass::ZigZagPos,
                Sign::Negative => StrandClass::ZigZagNeg,
            };
            let mut classified = 0;
            for s in trace_strands(&pat) {
                if s.stitches.len() >= 4 {
                    assert_eq!(classify_strand(&s, &p).unwrap(), want);
                    classified += 1;
                }
            }
            assert!(classified > 0);
        }
    }

    #[test]
    fn zigzag_rejects_shared_factors() {
        let p = params(2, 4, 5, 1);
        assert!(zigzag_pattern(&p, 0, Sign::Positive, Window::square(8)).is_err());
    }

    #[test]
    fn zigzag_family_members_are_distinct() {
        let p = params(2, 1, 2, 1);
        let mut seen = std::collections::HashSet::new();
        for offset in 0..3 {
            for sign in [Sign::Positive, Sign::Negative] {
                let l = zigzag_pattern(&p, offset, sign, Window::new(0, 8, 0, 8)).unwrap();
                let key: Vec<i64> = (0..=8)
                    .map(|i| l.eps(i).unwrap())
                    .chain((0..=8).map(|j| l.eta(j).unwrap()))
                    .collect();
                assert!(
                    seen.insert(key),
                    "duplicate zig-zag at offset {offset} {sign:?}"
                );
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn phi_decode_places_the_stated_corners() {
        let p = params(3, 1, 3, 1);
        let w = Window::new(0, 11, 0, 11);
        let l = phi_decode(
            &RectangleCode {
                u: vec![0],
                v: vec![0],
                sigma: vec![0, 1],
            },
            &p,
            w,
        )
        .unwrap();
        // Coset walk u~ = v~ = (1, 3): southwest corners (1,1) and (3,3).
        assert_eq!(l.eta(1).unwrap(), 1);
        assert_eq!(l.eta(4).unwrap(), 1);
        assert_eq!(l.eps(1).unwrap(), 1);
        assert_eq!(l.eps(3).unwrap(), 3);
        let pat = generate_window(&l);
        assert!(validate_compatibility(&pat, default_margin(&l))
            .unwrap()
            .is_empty());

        let l = phi_decode(
            &RectangleCode {
                u: vec![1],
                v: vec![0],
                sigma: vec![0, 1],
            },
            &p,
            w,
        )
        .unwrap();
        // Flipping u shifts the west longitudes by a: u~ = (0, 2).
        assert_eq!(l.eta(0).unwrap(), 1);
        assert_eq!(l.eta(2).unwrap(), 3);
    }

    #[test]
    fn phi_rejects_bad_codes() {
        let p = params(3, 1, 3, 1);
        let w = Window::square(8);
        assert!(phi_decode(
            &RectangleCode {
                u: vec![0],
                v: vec![0],
                sigma: vec![0, 0]
            },
            &p,
            w
        )
        .is_err());
        assert!(phi_decode(
            &RectangleCode {
                u: vec![0, 1],
                v: vec![0],
                sigma: vec![0, 1]
            },
            &p,
            w
        )
        .is_err());
        let ab = params(2, 2, 3, 1);
        assert!(phi_decode(
            &RectangleCode {
                u: vec![0],
                v: vec![0],
                sigma: vec![0, 1]
            },
            &ab,
            w
        )
        .is_err());
    }

    #[test]
    fn phi_round_trips_every_code() {
        let p = params(3, 1, 3, 1);
        let w = Window::new(0, 11, 0, 11);
        let mut distinct = std::collections::HashSet::new();
        for u in 0..2u8 {
            for v in 0..2u8 {
                for sigma in [vec![0usize, 1], vec![1usize, 0]] {
                    let code = RectangleCode {
                        u: vec![u],
                        v: vec![v],
                        sigma,
                    };
                    let l = phi_decode(&code, &p, w).unwrap();
                    let back = phi_encode(&l, &p).unwrap();
                    assert_eq!(back, code);
                    let key: Vec<i64> = (0..4)
                        .map(|i| l.eps(i).unwrap())
                        .chain((0..4).map(|j| l.eta(j).unwrap()))
                        .collect();
                    distinct.insert(key);
                }
            }
        }
        // The code space is 2 * 2 * 2! = 8 and decoding is injective.
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn phi_encode_rejects_zigzags() {
        let p = params(3, 1, 3, 1);
        let l = zigzag_pattern(&p, 0, Sign::Positive, Window::new(0, 11, 0, 11)).unwrap();
        assert!(phi_encode(&l, &p).is_err());
    }

    #[test]
    fn counts_match_the_oracle() {
        for (quad, want) in [
            ((3, 1, 3, 1), 16u64),
            ((2, 1, 2, 1), 6),
            ((1, 2, 1, 2), 6),
            ((2, 4, 5, 1), 0),
        ] {
            let p = params(quad.0, quad.1, quad.2, quad.3);
            let formula = match count_patterns(&p).unwrap() {
                CountResult::Zero => 0u64,
                CountResult::Finite(n) => n as u64,
                CountResult::Continuum => panic!("unexpected continuum"),
            };
            assert_eq!(formula, want, "formula for {quad:?}");
            assert_eq!(brute_force_count(&p).unwrap(), want, "oracle for {quad:?}");
        }
    }

    #[test]
    fn oracle_rejects_the_equal_pair_case() {
        let p = params(2, 2, 3, 1);
        assert!(brute_force_count(&p).is_err());
    }

    #[test]
    fn count_rejects_degenerate_parameters() {
        let p = params(2, 4, 2, 4);
        assert!(count_patterns(&p).is_err());
    }

    #[test]
    fn oracle_patterns_obey_the_dichotomy() {
        // Every valid assignment is all rectangles or all zig-zags of one
        // sign.
        let p = params(3, 1, 3, 1);
        let pats = brute_force_patterns(&p).unwrap();
        assert_eq!(pats.len(), 16);
        let mut rect_patterns = 0;
        let mut zig_patterns = 0;
        for t in &pats {
            let l = t.to_labeling(&p, Window::new(-12, 12, -12, 12)).unwrap();
            let pat = generate_window(&l);
            assert!(validate_compatibility(&pat, default_margin(&l))
                .unwrap()
                .is_empty());
            let mut closed_classes = std::collections::HashSet::new();
            let mut open_classes = std::collections::HashSet::new();
            for s in trace_strands(&pat) {
                if s.closed {
                    closed_classes.insert(classify_strand(&s, &p).unwrap());
                } else if s.stitches.len() >= 5 {
                    open_classes.insert(classify_strand(&s, &p).unwrap());
                }
            }
            if closed_classes.contains(&StrandClass::Rectangle) {
                assert_eq!(closed_classes, [StrandClass::Rectangle].into());
                assert!(
                    open_classes.is_empty(),
                    "rectangles mixed with {open_classes:?}"
                );
                rect_patterns += 1;
                assert_eq!(p.q % 2, 0);
                assert_eq!(p.r % 2, 0);
            } else {
                assert!(closed_classes.is_empty());
                assert_eq!(open_classes.len(), 1, "{open_classes:?}");
                let class = *open_classes.iter().next().unwrap();
                assert!(
                    matches!(class, StrandClass::ZigZagPos | StrandClass::ZigZagNeg),
                    "{class:?}"
                );
                zig_patterns += 1;
            }
        }
        assert_eq!(rect_patterns, 8);
        assert_eq!(zig_patterns, 8);
    }

    #[test]
    fn phi_image_is_exactly_the_oracle_rectangle_set() {
        let p = params(3, 1, 3, 1);
        let torus: std::collections::HashSet<(Vec<i64>, Vec<i64>)> = brute_force_patterns(&p)
            .unwrap()
            .into_iter()
            .map(|t| (t.eps, t.eta))
            .collect();
        let mut image = std::collections::HashSet::new();
        for u in 0..2u8 {
            for v in 0..2u8 {
                for sigma in [vec![0usize, 1], vec![1usize, 0]] {
                    let l = phi_decode(
                        &RectangleCode {
                            u: vec![u],
                            v: vec![v],
                            sigma,
                        },
                        &p,
                        Window::new(0, 3, 0, 3),
                    )
                    .unwrap();
                    let eps: Vec<i64> = (0..4).map(|i| l.eps(i).unwrap()).collect();
                    let eta: Vec<i64> = (0..4).map(|j| l.eta(j).unwrap()).collect();
                    assert!(torus.contains(&(eps.clone(), eta.clone())));
                    image.insert((eps, eta));
                }
            }
        }
        assert_eq!(image.len(), 8);
        // The other 8 valid assignments are the zig-zags.
        let mut zig = std::collections::HashSet::new();
        for offset in 0..4 {
            for sign in [Sign::Positive, Sign::Negative] {
                let l = zigzag_pattern(&p, offset, sign, Window::new(0, 3, 0, 3)).unwrap();
                let eps: Vec<i64> = (0..4).map(|i| l.eps(i).unwrap()).collect();
                let eta: Vec<i64> = (0..4).map(|j| l.eta(j).unwrap()).collect();
                assert!(torus.contains(&(eps.clone(), eta.clone())));
                zig.insert((eps, eta));
            }
        }
        assert_eq!(zig.len(), 8);
        assert!(image.is_disjoint(&zig));
    }

    #[test]
    fn three_zigzagging_stitches_extend_to_a_zigzag() {
        // A strand containing a north-step, east-step, north-step corner in
        // a valid window is a positive zig-zag.
        let p = params(3, 1, 3, 1);
        let l = zigzag_pattern(&p, 0, Sign::Positive, Window::new(-16, 16, -16, 16)).unwrap();
        let pat = generate_window(&l);
        let target = Stitch::horizontal(crate::grid::LatticePoint::new(0, 0), 3);
        assert!(pat.stitches.contains(&target));
        let strand = trace_strands(&pat)
            .into_iter()
            .find(|s| s.stitches.contains(&target))
            .expect("strand through the origin stitch");
        assert!(strand.stitches.len() >= 3);
        assert_eq!(
            classify_strand(&strand, &p).unwrap(),
            StrandClass::ZigZagPos
        );
    }

    #[test]
    fn psi_constant_bits_make_rectangles() {
        let (a, c, d) = (2, 3, 1);
        let w = Window::new(-6, 18, 0, 11);
        let code = AbCode {
            u: vec![0],
            v: vec![0; 12],
            sigma: vec![0, 1],
        };
        let l = psi_decode(&code, a, c, d, w).unwrap();
        // Vertical labels repeat with period a.
        for j in -6..=16 {
            assert_eq!(l.eta(j).unwrap(), l.eta(j + 2).unwrap());
        }
        let pat = generate_window(&l);
        assert!(validate_compatibility(&pat, default_margin(&l))
            .unwrap()
            .is_empty());
        let p = params(2, 2, 3, 1);
        let classes: std::collections::HashSet<StrandClass> = trace_strands(&pat)
            .iter()
            .filter(|s| s.closed)
            .map(|s| classify_strand(s, &p).unwrap())
            .collect();
        assert_eq!(classes, [StrandClass::Rectangle].into());
    }

    #[test]
    fn psi_mixed_bits_make_rectangles_and_accordions() {
        let (a, c, d) = (2, 3, 1);
        let w = Window::new(-10, 22, 0, 11);
        let v = vec![0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0];
        let code = AbCode {
            u: vec![0],
            v,
            sigma: vec![1, 0],
        };
        let l = psi_decode(&code, a, c, d, w).unwrap();
        let pat = generate_window(&l);
        assert!(validate_compatibility(&pat, default_margin(&l))
            .unwrap()
            .is_empty());
        let p = params(2, 2, 3, 1);
        let mut classes = std::collections::HashSet::new();
        for s in trace_strands(&pat) {
            if s.closed || s.stitches.len() >= 5 {
                classes.insert(classify_strand(&s, &p).unwrap());
            }
        }
        assert!(classes.contains(&StrandClass::Rectangle), "{classes:?}");
        assert!(classes.contains(&StrandClass::AccordionH), "{classes:?}");
        assert!(classes
            .iter()
            .all(|c| matches!(c, StrandClass::Rectangle | StrandClass::AccordionH)));
    }

    #[test]
    fn rotated_equal_pair_patterns_contain_vertical_accordions() {
        // The c = d flavor is the quarter turn of a = b: strands are
        // rectangles and vertical accordions.
        let window = Window::new(-12, 12, -12, 12);
        let v_bits: Vec<u8> = (0..25).map(|i| (i % 2 == 0) as u8).collect();
        let l = crate::cli::rotated_equal_pair_example(&v_bits, window).unwrap();
        assert_eq!(l.params(), (3, 1, 2, 2));
        let p = params(3, 1, 2, 2);
        assert_eq!(p.case, PatternCase::ABCase);
        let pat = generate_window(&l);
        assert!(validate_compatibility(&pat, default_margin(&l))
            .unwrap()
            .is_empty());
        let mut classes = std::collections::HashSet::new();
        for s in trace_strands(&pat) {
            if s.closed || s.stitches.len() >= 5 {
                classes.insert(classify_strand(&s, &p).unwrap());
            }
        }
        assert!(classes.contains(&StrandClass::AccordionV), "{classes:?}");
        assert!(classes
            .iter()
            .all(|c| matches!(c, StrandClass::Rectangle | StrandClass::AccordionV)));
    }

    #[test]
    fn psi_rejects_odd_order_triples() {
        // (a,c,d) = (3,2,4): the order of 2 mod 6 is 3, odd.
        let code = AbCode {
            u: vec![0, 0],
            v: vec![0; 8],
            sigma: vec![0, 1, 2],
        };
        assert!(psi_decode(&code, 3, 2, 4, Window::new(0, 7, 0, 7)).is_err());
    }

    #[test]
    fn dilation_identity_keeps_the_pattern() {
        let p = params(3, 1, 3, 1);
        let l = zigzag_pattern(&p, 0, Sign::Positive, Window::new(-8, 8, -8, 8)).unwrap();
        let out = dilate_overlay(&[l.clone()], &[0]).unwrap();
        // g = 1 shifts by (1, 1) and leaves the labels congruent.
        for i in -7..=8 {
            assert_eq!(
                out.eps(i).unwrap(),
                (l.eps(i - 1).unwrap() + 1).rem_euclid(4)
            );
        }
    }

    #[test]
    fn dilation_overlay_validates() {
        let p = params(3, 1, 3, 1);
        let win = Window::new(-10, 10, -10, 10);
        let inputs = vec![
            zigzag_pattern(&p, 0, Sign::Positive, win).unwrap(),
            zigzag_pattern(&p, 1, Sign::Negative, win).unwrap(),
            phi_decode(
                &RectangleCode {
                    u: vec![0],
                    v: vec![1],
                    sigma: vec![1, 0],
                },
                &p,
                win,
            )
            .unwrap(),
        ];
        let out = dilate_overlay(&inputs, &[1, 2, 0]).unwrap();
        assert_eq!(out.params(), (9, 3, 9, 3));
        let pat = generate_window(&out);
        let v = validate_compatibility(&pat, default_margin(&out)).unwrap();
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn dilation_rejects_mixed_parameters() {
        let p1 = params(3, 1, 3, 1);
        let p2 = params(2, 1, 2, 1);
        let win = Window::new(-8, 8, -8, 8);
        let a = zigzag_pattern(&p1, 0, Sign::Positive, win).unwrap();
        let b = zigzag_pattern(&p2, 0, Sign::Positive, win).unwrap();
        assert!(dilate_overlay(&[a, b], &[0, 1]).is_err());
    }
}
