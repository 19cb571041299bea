//! Patterns with stitch directions beyond the two axes.
//!
//! Fix a finite set of pairwise non-parallel primitive integer vectors. A
//! pattern assigns to every lattice point and direction exactly one of the
//! two segments leaving the point along that direction; on each lattice
//! line this is a perfect matching of consecutive points, so it reduces to
//! one parity bit per line. Ordinary patterns are the two-direction case
//! `{(1,0), (0,1)}`.
//!
//! Triangular patterns live here through a shear: mapping the triangular
//! axes onto `(1,0)`, `(0,1)`, `(1,1)` turns them into three-direction
//! patterns on the square lattice. Every vertex of a triangular pattern
//! meets one stitch per direction, each pointing forward or backward, which
//! splits the vertices into eight types; the number of vertices in a finite
//! connected component is conjectured to always be divisible by 16, so the
//! component search reports any indivisible find as a counterexample
//! instead of suppressing it.
//!
//! The a-over-b triangular variant with equal stitch lengths in all three
//! directions is handled by an exhaustive offset search: per direction and
//! line an anchor offset modulo `a + b`, constrained so all three
//! directions produce the same endpoint set. Only `(2,1)` is satisfiable,
//! with exactly three patterns, all translates of one honeycomb.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::grid::{LatticePoint, Window};
use crate::{Error, Result};

/// A finite set of pairwise non-parallel primitive directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionSet {
    dirs: Vec<(i64, i64)>,
    /// Bezout companion per direction: `beta x dir = 1`, giving a base
    /// point `key * beta` on the line with a given cross-product key.
    betas: Vec<(i64, i64)>,
}

fn wedge(px: i64, py: i64, dx: i64, dy: i64) -> i64 {
    px * dy - py * dx
}

impl DirectionSet {
    pub fn new(dirs: &[(i64, i64)]) -> Result<Self> {
        if dirs.is_empty() {
            return Err(Error::Domain("direction set must be nonempty".into()));
        }
        let mut betas = Vec::with_capacity(dirs.len());
        for (i, &(dx, dy)) in dirs.iter().enumerate() {
            if (dx, dy) == (0, 0) {
                return Err(Error::Domain("the zero vector is not a direction".into()));
            }
            if num_integer::gcd(dx.abs(), dy.abs()) != 1 {
                return Err(Error::Domain(format!(
                    "direction ({dx},{dy}) is not primitive; scale it down"
                )));
            }
            for &(ex, ey) in &dirs[..i] {
                if wedge(dx, dy, ex, ey) == 0 {
                    return Err(Error::Domain(format!(
                        "directions ({dx},{dy}) and ({ex},{ey}) are parallel"
                    )));
                }
            }
            let (bx, by) = bezout_for(dx, dy);
            debug_assert_eq!(bx * dy - by * dx, 1, "bezout for ({dx},{dy})");
            betas.push((bx, by));
        }
        Ok(DirectionSet {
            dirs: dirs.to_vec(),
            betas,
        })
    }

    /// The ordinary two-direction set.
    pub fn ordinary() -> Self {
        DirectionSet::new(&[(1, 0), (0, 1)]).unwrap()
    }

    /// The sheared triangular set.
    pub fn triangular() -> Self {
        DirectionSet::new(&[(1, 0), (0, 1), (1, 1)]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dirs(&self) -> &[(i64, i64)] {
        &self.dirs
    }

    /// Cross-product key of the line through `p` in direction `k`.
    pub fn line_key(&self, k: usize, p: LatticePoint) -> i64 {
        let (dx, dy) = self.dirs[k];
        wedge(p.x, p.y, dx, dy)
    }

    /// Position of `p` along its direction-`k` line, relative to the
    /// canonical base point of that line.
    pub fn step_index(&self, k: usize, p: LatticePoint) -> i64 {
        let (dx, dy) = self.dirs[k];
        let (bx, by) = self.betas[k];
        let key = self.line_key(k, p);
        if dx != 0 {
            (p.x - key * bx) / dx
        } else {
            (p.y - key * by) / dy
        }
    }

    /// Inclusive key range of the lines meeting a window.
    pub fn key_range(&self, k: usize, window: Window) -> (i64, i64) {
        let corners = [
            (window.x0, window.y0),
            (window.x0, window.y1),
            (window.x1, window.y0),
            (window.x1, window.y1),
        ];
        let (dx, dy) = self.dirs[k];
        let keys = corners.map(|(x, y)| wedge(x, y, dx, dy));
        (*keys.iter().min().unwrap(), *keys.iter().max().unwrap())
    }

    /// Largest coordinate reach of any direction.
    pub fn max_reach(&self) -> i64 {
        self.dirs
            .iter()
            .map(|&(dx, dy)| dx.abs().max(dy.abs()))
            .max()
            .unwrap()
    }
}

/// Solves `bx * dy - by * dx = 1` for a primitive `(dx, dy)`.
fn bezout_for(dx: i64, dy: i64) -> (i64, i64) {
    let (mut r0, mut r1) = (dy, dx);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    // r0 = s0*dy + t0*dx = +-1; flip signs to get bx*dy - by*dx = 1.
    if r0 > 0 {
        (s0, -t0)
    } else {
        (-s0, t0)
    }
}

/// One parity bit per line and direction, over a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiLabeling {
    /// `parities[k][key]` is the parity for the direction-`k` line `key`.
    pub parities: Vec<BTreeMap<i64, u8>>,
    pub window: Window,
}

impl PhiLabeling {
    /// Uniform random parities for every line meeting the window,
    /// reproducible from the seed.
    pub fn random(dirs: &DirectionSet, window: Window, seed: u64) -> PhiLabeling {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parities = (0..dirs.len())
            .map(|k| {
                let (lo, hi) = dirs.key_range(k, window);
                (lo..=hi).map(|key| (key, rng.gen_range(0..2u8))).collect()
            })
            .collect();
        PhiLabeling { parities, window }
    }

    /// Constant parity per direction.
    pub fn constant(dirs: &DirectionSet, window: Window, bits: &[u8]) -> Result<PhiLabeling> {
        if bits.len() != dirs.len() {
            return Err(Error::Domain(
                "one parity bit per direction required".into(),
            ));
        }
        let parities = (0..dirs.len())
            .map(|k| {
                let (lo, hi) = dirs.key_range(k, window);
                (lo..=hi).map(|key| (key, bits[k] & 1)).collect()
            })
            .collect();
        Ok(PhiLabeling { parities, window })
    }
}

/// The segments a labeling generates in its window. A segment is stored as
/// its base point and direction index: it runs from the base to
/// `base + dir`.
#[derive(Clone, Debug)]
pub struct PhiPattern {
    pub dirs: DirectionSet,
    pub window: Window,
    pub segments: BTreeSet<(LatticePoint, usize)>,
}

/// Generates the segment set of a parity labeling: on each line, the
/// matching picks the segments whose step index has the line's parity.
pub fn generate_phi(dirs: &DirectionSet, labeling: &PhiLabeling) -> Result<PhiPattern> {
    let window = labeling.window;
    if labeling.parities.len() != dirs.len() {
        return Err(Error::Domain(
            "labeling direction count differs from the set".into(),
        ));
    }
    let mut segments = BTreeSet::new();
    for p in window.points() {
        for k in 0..dirs.len() {
            let (dx, dy) = dirs.dirs()[k];
            let q = LatticePoint::new(p.x + dx, p.y + dy);
            if !window.contains(q) {
                continue;
            }
            let key = dirs.line_key(k, p);
            let parity = labeling.parities[k].get(&key).copied().ok_or_else(|| {
                Error::Domain(format!("missing parity for line {key} of direction {k}"))
            })?;
            if dirs.step_index(k, p).rem_euclid(2) == i64::from(parity) {
                segments.insert((p, k));
            }
        }
    }
    Ok(PhiPattern {
        dirs: dirs.clone(),
        window,
        segments,
    })
}

/// A connected component of the segment graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiComponent {
    pub vertices: Vec<LatticePoint>,
    /// Set when every vertex keeps a full margin from the window edge, so
    /// the component cannot extend beyond the window.
    pub finite: bool,
}

impl PhiComponent {
    /// Translation-invariant key: vertices shifted so their minima are 0.
    pub fn canonical_key(&self) -> Vec<LatticePoint> {
        let min_x = self.vertices.iter().map(|p| p.x).min().unwrap();
        let min_y = self.vertices.iter().map(|p| p.y).min().unwrap();
        let mut v: Vec<LatticePoint> = self
            .vertices
            .iter()
            .map(|p| p.translate(-min_x, -min_y))
            .collect();
        v.sort();
        v
    }
}

/// Margin inside which finiteness cannot be certified.
pub fn default_phi_margin(dirs: &DirectionSet) -> i64 {
    2 * dirs.max_reach()
}

/// Splits a pattern into connected components and flags the ones that are
/// provably finite in the plane: they keep `margin` away from the window
/// edge, so every incident segment of every vertex was generated.
pub fn phi_components(pattern: &PhiPattern, margin: i64) -> Vec<PhiComponent> {
    let w = pattern.window;
    let mut adj: HashMap<LatticePoint, Vec<LatticePoint>> = HashMap::new();
    for &(p, k) in &pattern.segments {
        let (dx, dy) = pattern.dirs.dirs()[k];
        let q = LatticePoint::new(p.x + dx, p.y + dy);
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    }
    let mut keys: Vec<LatticePoint> = adj.keys().copied().collect();
    keys.sort();
    let mut seen: HashSet<LatticePoint> = HashSet::new();
    let mut out = Vec::new();
    for start in keys {
        if seen.contains(&start) {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        let mut vertices = Vec::new();
        while let Some(p) = queue.pop_front() {
            vertices.push(p);
            for &q in &adj[&p] {
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        vertices.sort();
        let finite = vertices.iter().all(|p| {
            p.x - w.x0 > margin && w.x1 - p.x > margin && p.y - w.y0 > margin && w.y1 - p.y > margin
        });
        out.push(PhiComponent { vertices, finite });
    }
    out
}

/// Vertex-type counts for a three-direction pattern: each vertex meets one
/// stitch per direction, pointing forward or backward, giving eight types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexHistogram {
    /// Index bit `k` is set when the direction-`k` stitch points forward.
    pub counts: [usize; 8],
}

impl VertexHistogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Classifies every vertex of a finite component of a three-direction
/// pattern by the forward/backward signs of its three stitches.
pub fn vertex_histogram(pattern: &PhiPattern, component: &PhiComponent) -> Result<VertexHistogram> {
    if pattern.dirs.len() != 3 {
        return Err(Error::Domain(format!(
            "vertex types need exactly 3 directions, got {}",
            pattern.dirs.len()
        )));
    }
    if !component.finite {
        return Err(Error::Domain(
            "vertex types are only certified for components clear of the margin".into(),
        ));
    }
    let mut counts = [0usize; 8];
    for &p in &component.vertices {
        let mut ty = 0usize;
        for k in 0..3 {
            let (dx, dy) = pattern.dirs.dirs()[k];
            let forward = pattern.segments.contains(&(p, k));
            let backward = pattern
                .segments
                .contains(&(LatticePoint::new(p.x - dx, p.y - dy), k));
            match (forward, backward) {
                (true, false) => ty |= 1 << k,
                (false, true) => {}
                _ => {
                    return Err(Error::Integrity(format!(
                        "vertex {p} has {} direction-{k} stitches",
                        usize::from(forward) + usize::from(backward)
                    )))
                }
            }
        }
        counts[ty] += 1;
    }
    Ok(VertexHistogram { counts })
}

/// Divisibility-by-16 verdict for a finite component's vertex count. An
/// indivisible component would refute the conjecture, so it is surfaced as
/// a counterexample, never silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisibilityCheck {
    pub vertex_count: usize,
    pub consistent: bool,
}

pub fn check_divisibility_16(component: &PhiComponent) -> DivisibilityCheck {
    let n = component.vertices.len();
    DivisibilityCheck {
        vertex_count: n,
        consistent: n % 16 == 0,
    }
}

/// A finite component found by the randomized search, with the labeling
/// that produced it.
#[derive(Clone, Debug)]
pub struct FoundComponent {
    pub trial: u64,
    pub component: PhiComponent,
    pub labeling: PhiLabeling,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub found: Vec<FoundComponent>,
    pub trials_run: u64,
}

impl SearchOutcome {
    /// The distinct finite components modulo translation, in first-found
    /// order.
    pub fn distinct_components(&self) -> Vec<&FoundComponent> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for f in &self.found {
            if seen.insert(f.component.canonical_key()) {
                out.push(f);
            }
        }
        out
    }
}

fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 over the pair, so trials are independent of chunking.
    let mut z = seed ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic randomized search for finite components: `budget` labeling
/// trials, each drawn from its own trial seed, scanned with a union-find
/// over the window. Results are identical for any worker count; with
/// `stop_after` the search still completes whole chunks, so early stopping
/// is deterministic too.
pub fn search_finite_components(
    dirs: &DirectionSet,
    seed: u64,
    budget: u64,
    window: Window,
    stop_after: Option<usize>,
) -> SearchOutcome {
    let margin = default_phi_margin(dirs);
    let chunk: u64 = 2048;
    let mut found: Vec<FoundComponent> = Vec::new();
    let mut trials_run = 0;
    let mut start = 0u64;
    while start < budget {
        let end = (start + chunk).min(budget);
        let mut batch: Vec<FoundComponent> = (start..end)
            .into_par_iter()
            .flat_map_iter(|trial| {
                run_trial(dirs, trial_seed(seed, trial), window, margin)
                    .into_iter()
                    .map(move |(component, labeling)| FoundComponent {
                        trial,
                        component,
                        labeling,
                    })
            })
            .collect();
        batch.sort_by(|a, b| {
            (a.trial, &a.component.vertices).cmp(&(b.trial, &b.component.vertices))
        });
        found.extend(batch);
        trials_run = end;
        start = end;
        if let Some(k) = stop_after {
            if found.len() >= k {
                break;
            }
        }
    }
    SearchOutcome { found, trials_run }
}

/// One search trial: random parities, dense union-find, finite components
/// extracted.
fn run_trial(
    dirs: &DirectionSet,
    seed: u64,
    window: Window,
    margin: i64,
) -> Vec<(PhiComponent, PhiLabeling)> {
    let cols = (window.x1 - window.x0 + 1) as usize;
    let rows = (window.y1 - window.y0 + 1) as usize;
    let n = cols * rows;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Parities drawn in fixed order: direction-major, key ascending.
    let parities: Vec<(i64, Vec<u8>)> = (0..dirs.len())
        .map(|k| {
            let (lo, hi) = dirs.key_range(k, window);
            (lo, (lo..=hi).map(|_| rng.gen_range(0..2u8)).collect())
        })
        .collect();
    let seg_present = |p: LatticePoint, k: usize| -> bool {
        let key = dirs.line_key(k, p);
        let (lo, bits) = &parities[k];
        let parity = i64::from(bits[(key - lo) as usize]);
        dirs.step_index(k, p).rem_euclid(2) == parity
    };
    let idx = |p: LatticePoint| ((p.y - window.y0) as usize) * cols + (p.x - window.x0) as usize;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for y in window.y0..=window.y1 {
        for x in window.x0..=window.x1 {
            let p = LatticePoint::new(x, y);
            for k in 0..dirs.len() {
                let (dx, dy) = dirs.dirs()[k];
                let q = LatticePoint::new(x + dx, y + dy);
                if window.contains(q) && seg_present(p, k) {
                    let (rp, rq) = (
                        find(&mut parent, idx(p) as u32),
                        find(&mut parent, idx(q) as u32),
                    );
                    if rp != rq {
                        parent[rp as usize] = rq;
                    }
                }
            }
        }
    }
    // A component counts as finite only when all its vertices stay more
    // than `margin` inside the window.
    let mut interior: Vec<bool> = vec![true; n];
    let mut occupied: Vec<bool> = vec![false; n];
    for y in window.y0..=window.y1 {
        for x in window.x0..=window.x1 {
            let p = LatticePoint::new(x, y);
            let has_stitch = (0..dirs.len()).any(|k| {
                let (dx, dy) = dirs.dirs()[k];
                (window.contains(LatticePoint::new(x + dx, y + dy)) && seg_present(p, k))
                    || (window.contains(LatticePoint::new(x - dx, y - dy))
                        && seg_present(LatticePoint::new(x - dx, y - dy), k))
            });
            if !has_stitch {
                continue;
            }
            let i = idx(p);
            occupied[i] = true;
            let r = find(&mut parent, i as u32) as usize;
            let deep = p.x - window.x0 > margin
                && window.x1 - p.x > margin
                && p.y - window.y0 > margin
                && window.y1 - p.y > margin;
            if !deep {
                interior[r] = false;
            }
        }
    }
    let mut members: HashMap<u32, Vec<LatticePoint>> = HashMap::new();
    for y in window.y0..=window.y1 {
        for x in window.x0..=window.x1 {
            let p = LatticePoint::new(x, y);
            let i = idx(p);
            if !occupied[i] {
                continue;
            }
            let r = find(&mut parent, i as u32);
            if interior[r as usize] {
                members.entry(r).or_default().push(p);
            }
        }
    }
    if members.is_empty() {
        return Vec::new();
    }
    let labeling = PhiLabeling {
        parities: (0..dirs.len())
            .map(|k| {
                let (lo, bits) = &parities[k];
                bits.iter()
                    .enumerate()
                    .map(|(i, &b)| (lo + i as i64, b))
                    .collect()
            })
            .collect(),
        window,
    };
    let mut out: Vec<(PhiComponent, PhiLabeling)> = members
        .into_values()
        .map(|mut vertices| {
            vertices.sort();
            (
                PhiComponent {
                    vertices,
                    finite: true,
                },
                labeling.clone(),
            )
        })
        .collect();
    out.sort_by(|a, b| a.0.vertices.cmp(&b.0.vertices));
    out
}

/// Anchors of an a-over-b triangular pattern: the core stitch set generated
/// by one offset per direction and line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriPattern {
    pub a: i64,
    pub b: i64,
    pub core: Window,
    /// Stitches as (direction index, base point); a stitch spans `a` steps.
    pub stitches: BTreeSet<(usize, LatticePoint)>,
}

/// Search certificate for an exhausted offset search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCertificate {
    pub nodes_explored: u64,
    pub assignments_tried: u64,
}

#[derive(Clone, Debug)]
pub enum TriSatOutcome {
    /// All window-distinct patterns, deduplicated on the core region.
    Sat(Vec<TriPattern>),
    Unsat(SearchCertificate),
}

/// Exhaustive backtracking over per-line anchor offsets for the a-over-b
/// triangular condition on a square window: every window point must be a
/// stitch endpoint in all three directions or in none. Sound for
/// unsatisfiability because the window constraints are a subset of the
/// plane's.
pub fn ab_triangular_sat(a: i64, b: i64, side: i64) -> Result<TriSatOutcome> {
    if b < 1 || a <= b {
        return Err(Error::Domain(format!(
            "need a > b >= 1 (flip the cloth to swap them), got a = {a}, b = {b}"
        )));
    }
    if num_integer::gcd(a, b) != 1 {
        return Err(Error::Domain("reduce gcd(a,b) to 1 first".into()));
    }
    let period = a + b;
    if side < 4 * period {
        return Err(Error::Precondition(format!(
            "window side must be at least 4(a+b) = {}",
            4 * period
        )));
    }
    let dirs = DirectionSet::triangular();
    let window = Window::square(side);

    // Variables: one offset per line meeting the window.
    let mut var_of: HashMap<(usize, i64), usize> = HashMap::new();
    let mut var_lines: Vec<(usize, i64)> = Vec::new();
    for k in 0..3 {
        let (lo, hi) = dirs.key_range(k, window);
        for key in lo..=hi {
            var_of.insert((k, key), var_lines.len());
            var_lines.push((k, key));
        }
    }
    // Constraint triples per window point: (variable, step index mod period).
    let points: Vec<[(usize, i64); 3]> = window
        .points()
        .map(|p| {
            let mut triple = [(0usize, 0i64); 3];
            for k in 0..3 {
                let var = var_of[&(k, dirs.line_key(k, p))];
                triple[k] = (var, dirs.step_index(k, p).rem_euclid(period));
            }
            triple
        })
        .collect();
    let mut points_of_var: Vec<Vec<usize>> = vec![Vec::new(); var_lines.len()];
    for (pi, triple) in points.iter().enumerate() {
        for &(var, _) in triple {
            points_of_var[var].push(pi);
        }
    }
    // Assign center-most lines first so conflicts surface early.
    let center = side / 2;
    let mut order: Vec<usize> = (0..var_lines.len()).collect();
    order.sort_by_key(|&v| {
        let (k, key) = var_lines[v];
        let (dx, dy) = dirs.dirs()[k];
        let dist = (wedge(center, center, dx, dy) - key).abs();
        (dist, k, key)
    });

    let full: u16 = (1 << period) - 1;
    // For each residue t, the offsets that make t an endpoint: o = t or t-a.
    let hit_mask: Vec<u16> = (0..period)
        .map(|t| {
            (0..period)
                .filter(|&o| {
                    let d = (t - o).rem_euclid(period);
                    d == 0 || d == a
                })
                .fold(0u16, |m, o| m | 1 << o)
        })
        .collect();

    struct Search {
        domains: Vec<u16>,
        assigned: Vec<Option<i64>>,
        nodes: u64,
        assignments: u64,
        solutions: Vec<Vec<i64>>,
    }
    let mut st = Search {
        domains: vec![full; var_lines.len()],
        assigned: vec![None; var_lines.len()],
        nodes: 0,
        assignments: 0,
        solutions: Vec::new(),
    };

    // Forward checking: assigning a line decides the endpoint indicator at
    // each of its points, which filters the crossing lines' domains.
    fn assign(
        st: &mut Search,
        var: usize,
        value: i64,
        points: &[[(usize, i64); 3]],
        points_of_var: &[Vec<usize>],
        hit_mask: &[u16],
        full: u16,
        trail: &mut Vec<(usize, u16)>,
    ) -> bool {
        st.assigned[var] = Some(value);
        for &pi in &points_of_var[var] {
            let triple = &points[pi];
            let t_here = triple.iter().find(|&&(v, _)| v == var).unwrap().1;
            let indicator = hit_mask[t_here as usize] >> value & 1 == 1;
            for &(other, t_other) in triple {
                if other == var {
                    continue;
                }
                let mask = if indicator {
                    hit_mask[t_other as usize]
                } else {
                    full & !hit_mask[t_other as usize]
                };
                let old = st.domains[other];
                let new = old & mask;
                if new != old {
                    trail.push((other, old));
                    st.domains[other] = new;
                    if new == 0 {
                        return false;
                    }
                    if let Some(v) = st.assigned[other] {
                        if new >> v & 1 == 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        st: &mut Search,
        depth: usize,
        order: &[usize],
        points: &[[(usize, i64); 3]],
        points_of_var: &[Vec<usize>],
        hit_mask: &[u16],
        full: u16,
        period: i64,
    ) -> Result<()> {
        st.nodes += 1;
        if depth == order.len() {
            st.assignments += 1;
            if st.assignments > 1_000_000 {
                return Err(Error::Resource(
                    "offset search found over 10^6 raw assignments; window too loose".into(),
                ));
            }
            st.solutions
                .push(st.assigned.iter().map(|v| v.unwrap()).collect());
            return Ok(());
        }
        let var = order[depth];
        for value in 0..period {
            if st.domains[var] >> value & 1 == 0 {
                continue;
            }
            let mut trail = Vec::new();
            let ok = assign(
                st,
                var,
                value,
                points,
                points_of_var,
                hit_mask,
                full,
                &mut trail,
            );
            if ok {
                dfs(
                    st,
                    depth + 1,
                    order,
                    points,
                    points_of_var,
                    hit_mask,
                    full,
                    period,
                )?;
            }
            st.assigned[var] = None;
            for (v, old) in trail.into_iter().rev() {
                st.domains[v] = old;
            }
        }
        Ok(())
    }

    dfs(
        &mut st,
        0,
        &order,
        &points,
        &points_of_var,
        &hit_mask,
        full,
        period,
    )?;
    if st.solutions.is_empty() {
        return Ok(TriSatOutcome::Unsat(SearchCertificate {
            nodes_explored: st.nodes,
            assignments_tried: st.assignments,
        }));
    }
    // Project each solution to the core and deduplicate: boundary lines
    // through a handful of points can float without changing the pattern.
    let core = window.shrink(period);
    let mut seen = HashSet::new();
    let mut patterns = Vec::new();
    for sol in &st.solutions {
        let mut stitches = BTreeSet::new();
        for (var, &(k, key)) in var_lines.iter().enumerate() {
            let offset = sol[var];
            let (dx, dy) = dirs.dirs()[k];
            for t in (-2 * side)..=(2 * side) {
                if (t - offset).rem_euclid(period) != 0 {
                    continue;
                }
                let base = base_point(&dirs, k, key, t);
                let tip = LatticePoint::new(base.x + a * dx, base.y + a * dy);
                if core.contains(base) && core.contains(tip) {
                    stitches.insert((k, base));
                }
            }
        }
        if seen.insert(stitches.clone()) {
            patterns.push(TriPattern {
                a,
                b,
                core,
                stitches,
            });
        }
    }
    Ok(TriSatOutcome::Sat(patterns))
}

fn base_point(dirs: &DirectionSet, k: usize, key: i64, t: i64) -> LatticePoint {
    let (dx, dy) = dirs.dirs()[k];
    let (bx, by) = dirs.betas[k];
    LatticePoint::new(key * bx + t * dx, key * by + t * dy)
}

/// Grows the unique 2-over-1 triangular pattern from a seed stitch. A
/// stitch pins the anchor offset of its whole line; every stitch endpoint
/// on a pinned line meets its three stitches at 120 degrees, which pins the
/// crossing lines in turn. In sheared coordinates one vertex type points
/// along `{+(1,0), +(0,1), -(1,1)}` and the other along the negations.
pub fn make_21_triangular(
    seed_dir: usize,
    seed_base: LatticePoint,
    window: Window,
) -> Result<TriPattern> {
    let dirs = DirectionSet::triangular();
    if seed_dir >= 3 {
        return Err(Error::Domain(format!(
            "seed direction must be 0..3, got {seed_dir}"
        )));
    }
    let type_a: [(usize, i64); 3] = [(0, 1), (1, 1), (2, -1)];
    let type_b: [(usize, i64); 3] = [(0, -1), (1, -1), (2, 1)];
    // Within each type, the ray along a given direction.
    let ray_sign = |is_a: bool, k: usize| -> i64 {
        let rays = if is_a { &type_a } else { &type_b };
        rays.iter().find(|&&(rk, _)| rk == k).unwrap().1
    };
    // A stitch base leaves along +dir: bases carry the type whose ray in
    // that direction is positive.
    let base_is_a = |k: usize| ray_sign(true, k) > 0;
    let mut offsets: HashMap<(usize, i64), i64> = HashMap::new();
    let mut queue = VecDeque::new();
    let seed_key = dirs.line_key(seed_dir, seed_base);
    let seed_offset = dirs.step_index(seed_dir, seed_base).rem_euclid(3);
    offsets.insert((seed_dir, seed_key), seed_offset);
    queue.push_back((seed_dir, seed_key));
    // Keys of lines that meet a slightly padded window, so propagation
    // covers every line relevant to the output.
    let padded = Window::new(window.x0 - 2, window.x1 + 2, window.y0 - 2, window.y1 + 2);
    let mut key_ranges = Vec::new();
    for k in 0..3 {
        key_ranges.push(dirs.key_range(k, padded));
    }
    while let Some((k, key)) = queue.pop_front() {
        let offset = offsets[&(k, key)];
        let (dx, dy) = dirs.dirs()[k];
        // Walk the anchors of this line across the padded window.
        let span = padded.x1 - padded.x0 + padded.y1 - padded.y0;
        for t in -2 * span..=2 * span {
            if (t - offset).rem_euclid(3) != 0 {
                continue;
            }
            let base = base_point(&dirs, k, key, t);
            let tip = LatticePoint::new(base.x + 2 * dx, base.y + 2 * dy);
            for (p, is_a) in [(base, base_is_a(k)), (tip, !base_is_a(k))] {
                if !padded.contains(p) {
                    continue;
                }
                // The other two stitches at p fix their lines' offsets.
                for k2 in 0..3 {
                    if k2 == k {
                        continue;
                    }
                    let s = ray_sign(is_a, k2);
                    let anchor = dirs.step_index(k2, p) + if s > 0 { 0 } else { -2 };
                    let key2 = dirs.line_key(k2, p);
                    let o2 = anchor.rem_euclid(3);
                    let (lo, hi) = key_ranges[k2];
                    if key2 < lo || key2 > hi {
                        continue;
                    }
                    match offsets.get(&(k2, key2)) {
                        Some(&prev) if prev == o2 => {}
                        Some(&prev) => {
                            return Err(Error::Integrity(format!(
                                "line ({k2}, {key2}) forced to offsets {prev} and {o2}"
                            )))
                        }
                        None => {
                            offsets.insert((k2, key2), o2);
                            queue.push_back((k2, key2));
                        }
                    }
                }
            }
        }
    }
    // Emit the stitches of every pinned line that fit in the window.
    let mut stitches = BTreeSet::new();
    for (&(k, key), &offset) in &offsets {
        let (dx, dy) = dirs.dirs()[k];
        let span = window.x1 - window.x0 + window.y1 - window.y0;
        for t in -2 * span..=2 * span {
            if (t - offset).rem_euclid(3) != 0 {
                continue;
            }
            let base = base_point(&dirs, k, key, t);
            let tip = LatticePoint::new(base.x + 2 * dx, base.y + 2 * dy);
            if window.contains(base) && window.contains(tip) {
                stitches.insert((k, base));
            }
        }
    }
    Ok(TriPattern {
        a: 2,
        b: 1,
        core: window,
        stitches,
    })
}
