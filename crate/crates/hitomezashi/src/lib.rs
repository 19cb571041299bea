//! Hitomezashi stitch patterns as combinatorial objects.
//!
//! A hitomezashi pattern is an arrangement of axis-parallel stitches on the
//! integer grid in which every lattice point is the endpoint of exactly one
//! horizontal and exactly one vertical stitch. Each grid line carries a
//! residue label that fixes the stitch anchors on that line, so a whole
//! pattern is determined by one label per horizontal line and one per
//! vertical line. This crate builds patterns from labels, traces their
//! strands and loops, and verifies the structural facts that hold for them:
//!
//! - loop tracing with exact metrics (width, height, length, enclosed area)
//!   and a translation-canonical form ([`loops`]);
//! - constructors for the named extremal loop families — rugs, crosses,
//!   combs, wands — together with their closed-form metrics ([`canonical`]);
//! - exhaustive enumeration of all loops of a given width and height modulo
//!   translation, with extremal bound checks and a Dyck-word census of the
//!   minimum-length loops ([`extremal`]);
//! - the long-stitch generalization where horizontal stitches run a-over-b
//!   and vertical stitches run c-over-d: parameter classification, strand
//!   taxonomy, explicit pattern codecs, exact pattern counts, and an
//!   independent torus backtracking oracle ([`longstitch`]);
//! - patterns whose stitch directions form an arbitrary non-parallel set of
//!   integer vectors, triangular patterns via a shear, and seeded searches
//!   for finite connected components ([`multigrid`]);
//! - deterministic SVG stitch charts ([`render`]) and a command-line
//!   interface ([`cli`]).
//!
//! ```
//! use hitomezashi::canonical::{make_rug, trace_unique_loop};
//! use hitomezashi::loops::loop_metrics;
//!
//! let labeling = make_rug(7, 9).unwrap();
//! let rug = trace_unique_loop(&labeling, 7, 9).unwrap();
//! let m = loop_metrics(&rug).unwrap();
//! assert_eq!(m.length, 52);
//! assert_eq!(m.area.to_integer(), 49);
//! ```
//!
//! Everything is a pure function over immutable values; the exhaustive and
//! randomized entry points shard work internally and merge results in a
//! deterministic order, so outputs do not depend on thread count.

pub mod canonical;
pub mod cli;
pub mod extremal;
pub mod grid;
pub mod longstitch;
pub mod loops;
pub mod multigrid;
pub mod render;

use thiserror::Error;

/// Errors reported by the pattern engine.
///
/// `Integrity` is reserved for violations of verified structural claims: a
/// traced object that contradicts one of them is a counterexample and is
/// reported loudly rather than silently repaired. The command-line layer
/// maps `Integrity` to exit code 2 and every other error to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for this error: 2 for integrity violations
    /// (a found counterexample to a verified claim), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Integrity(_) => 2,
            _ => 1,
        }
    }
}
