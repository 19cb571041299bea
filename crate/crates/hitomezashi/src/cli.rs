//! Command-line surface.
//!
//! JSON is the machine interface and SVG the human one. Exit codes: 0 on
//! success, 1 on usage or domain errors, and 2 exclusively for integrity
//! violations, i.e. a traced counterexample to a verified structural claim,
//! so a pipeline can watch for refutations.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::extremal::{self, EnumGuard};
use crate::grid::{self, SquareLabeling, Window};
use crate::longstitch::{self, AbCode, CountResult, RectangleCode, Sign};
use crate::loops::{self, CanonicalLoop};
use crate::multigrid::{self, DirectionSet};
use crate::render::{self, RenderStyle};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "hitomezashi",
    version,
    about = "Hitomezashi stitch pattern toolkit"
)]
struct Cli {
    /// Worker threads for exhaustive and randomized commands
    /// (HITOZ_JOBS is the fallback; results do not depend on this).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the stitches of a labeling and optionally validate it.
    Generate(GenerateArgs),
    /// Trace the strands of a pattern file.
    Trace(TraceArgs),
    /// Enumerate all loops of a width and height modulo translation.
    Enumerate(EnumerateArgs),
    /// Enumerate and check the sharp length/area bounds.
    Extremal(ExtremalArgs),
    /// Long-stitch patterns: counting, classification, codecs, dilation.
    Longstitch(LongstitchArgs),
    /// a-over-b triangular patterns.
    Tri(TriArgs),
    /// Multi-direction patterns and finite-component search.
    Phi(PhiArgs),
    /// Render a pattern file as an SVG stitch chart.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Stitch parameters a,b,c,d.
    #[arg(short, long, default_value = "1,1,1,1", value_parser = parse_quad)]
    params: (i64, i64, i64, i64),
    /// Window x0,x1,y0,y1.
    #[arg(long, default_value = "0,16,0,16", value_parser = parse_window)]
    window: Window,
    /// Draw the labels uniformly at random from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Read labels from a pattern JSON file instead.
    #[arg(long, conflicts_with = "seed")]
    labels: Option<PathBuf>,
    /// Build a named loop family instead: rug:WxH, cross:WxH:A:B,
    /// hcomb:WxH:A, vcomb:WxH:B, wand:w5:H:BITS, wand:h5:W:BITS.
    #[arg(long, conflicts_with_all = ["seed", "labels"])]
    preset: Option<String>,
    /// Report endpoint-compatibility violations on the interior.
    #[arg(long)]
    validate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a stitch chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Pattern JSON file with the labeling.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    width: i64,
    #[arg(long)]
    height: i64,
    /// json writes one report; svg-dir writes one chart per loop into --out.
    #[arg(long, default_value = "json")]
    format: String,
    /// Guard on the label bits w + h + 2.
    #[arg(long, default_value_t = 28)]
    max_bits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExtremalArgs {
    #[arg(long)]
    width: i64,
    #[arg(long)]
    height: i64,
    #[arg(long, default_value_t = 28)]
    max_bits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LongstitchArgs {
    #[command(subcommand)]
    command: LongstitchCommand,
}

#[derive(Subcommand, Debug)]
enum LongstitchCommand {
    /// Classify the parameters and report the exact pattern count.
    Count {
        #[arg(short, long, value_parser = parse_quad)]
        params: (i64, i64, i64, i64),
        /// Also run the exhaustive torus oracle and cross-check.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every strand of a pattern file.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a rectangle code (u:v:sigma) into a labeling.
    Phi {
        #[arg(long)]
        code: String,
        #[arg(short, long, value_parser = parse_quad)]
        params: (i64, i64, i64, i64),
        #[arg(long, default_value = "0,15,0,15", value_parser = parse_window)]
        window: Window,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Overlay g dilated patterns arranged by a permutation.
    Dilate {
        #[arg(short = 'g', long)]
        factor: usize,
        /// Permutation of 1..=g, comma-separated.
        #[arg(long)]
        sigma: String,
        /// One pattern JSON file per slot.
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct TriArgs {
    #[command(subcommand)]
    command: TriCommand,
}

#[derive(Subcommand, Debug)]
enum TriCommand {
    /// Exhaustive satisfiability of the a-over-b triangular condition.
    Sat {
        #[arg(short, long)]
        a: i64,
        #[arg(short, long)]
        b: i64,
        /// Window side; defaults to max(12, 4(a+b)).
        #[arg(long)]
        side: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grow the unique 2-over-1 pattern.
    Unique {
        #[arg(long, default_value_t = 20)]
        side: i64,
        /// Write the pattern in true triangular geometry.
        #[arg(long)]
        render: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[command(subcommand)]
    command: PhiCommand,
}

#[derive(Subcommand, Debug)]
enum PhiCommand {
    /// Seeded random search for finite connected components.
    Search {
        /// Directions as "dx,dy;dx,dy;...".
        #[arg(long)]
        dirs: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Square window side.
        #[arg(long, default_value_t = 48)]
        window: i64,
        /// Stop after this many finds (still whole deterministic chunks).
        #[arg(long)]
        stop_after: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Pattern JSON file to chart.
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
    /// Chart a named loop family instead (see generate --preset).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Pixels per lattice unit.
    #[arg(long, default_value_t = 18.0)]
    unit: f64,
    /// Stroke palette: single CSS color, or "class" to color by strand class.
    #[arg(long, default_value = "#24292f")]
    palette: String,
    /// Draw the background grid.
    #[arg(long)]
    grid: bool,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let jobs = cli.jobs.or_else(|| {
        std::env::var("HITOZ_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let body = || match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(body),
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        None => body(),
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Extremal(args) => cmd_extremal(args),
        Command::Longstitch(args) => match args.command {
            LongstitchCommand::Count {
                params,
                oracle,
                out,
            } => cmd_count(params, oracle, out),
            LongstitchCommand::Classify { input, out } => cmd_classify(input, out),
            LongstitchCommand::Phi {
                code,
                params,
                window,
                out,
            } => cmd_phi_decode(code, params, window, out),
            LongstitchCommand::Dilate {
                factor,
                sigma,
                inputs,
                out,
            } => cmd_dilate(factor, sigma, inputs, out),
        },
        Command::Tri(args) => match args.command {
            TriCommand::Sat { a, b, side, out } => cmd_tri_sat(a, b, side, out),
            TriCommand::Unique { side, render, out } => cmd_tri_unique(side, render, out),
        },
        Command::Phi(args) => match args.command {
            PhiCommand::Search {
                dirs,
                seed,
                budget,
                window,
                stop_after,
                out,
            } => cmd_phi_search(dirs, seed, budget, window, stop_after, out),
        },
        Command::Render(args) => cmd_render(args),
    }
}

fn parse_quad(s: &str) -> std::result::Result<(i64, i64, i64, i64), String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("{e}")))
        .collect::<std::result::Result<_, _>>()?;
    if parts.len() != 4 {
        return Err(format!("expected a,b,c,d, got {s:?}"));
    }
    Ok((parts[0], parts[1], parts[2], parts[3]))
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("{e}")))
        .collect::<std::result::Result<_, _>>()?;
    if parts.len() != 4 {
        return Err(format!("expected x0,x1,y0,y1, got {s:?}"));
    }
    Ok(Window::new(parts[0], parts[1], parts[2], parts[3]))
}

fn metadata(command: &str, seed: Option<u64>) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    if let Some(s) = seed {
        m.insert("seed".into(), json!(s));
    }
    Value::Object(m)
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn point_json(p: grid::LatticePoint) -> Value {
    json!([p.x, p.y])
}

/// Labeling (and stitches) as the pattern interchange object: decimal-string
/// keys for the per-line labels, endpoint pairs for stitches.
pub fn labeling_to_json(labeling: &SquareLabeling, include_stitches: bool) -> Value {
    let w = labeling.window();
    let (a, b, c, d) = labeling.params();
    let eps: BTreeMap<String, i64> = (w.y0..=w.y1)
        .map(|i| (i.to_string(), labeling.eps(i).unwrap()))
        .collect();
    let eta: BTreeMap<String, i64> = (w.x0..=w.x1)
        .map(|j| (j.to_string(), labeling.eta(j).unwrap()))
        .collect();
    let mut v = json!({
        "a": a, "b": b, "c": c, "d": d,
        "window": [w.x0, w.x1, w.y0, w.y1],
        "eps": eps,
        "eta": eta,
    });
    if include_stitches {
        let pattern = grid::generate_window(labeling);
        let stitches: Vec<Value> = pattern
            .stitches
            .iter()
            .map(|s| {
                let (p, q) = s.endpoints();
                json!([point_json(p), point_json(q)])
            })
            .collect();
        v["stitches"] = json!(stitches);
    }
    v
}

/// Reads a labeling out of the pattern interchange object.
pub fn labeling_from_json(v: &Value) -> Result<SquareLabeling> {
    let get = |k: &str| -> Result<i64> {
        v.get(k)
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Domain(format!("pattern JSON lacks integer field {k:?}")))
    };
    let (a, b, c, d) = (get("a")?, get("b")?, get("c")?, get("d")?);
    let win = v
        .get("window")
        .and_then(Value::as_array)
        .filter(|w| w.len() == 4)
        .ok_or_else(|| Error::Domain("pattern JSON lacks window [x0,x1,y0,y1]".into()))?;
    let w = Window::new(
        win[0].as_i64().unwrap_or(0),
        win[1].as_i64().unwrap_or(0),
        win[2].as_i64().unwrap_or(0),
        win[3].as_i64().unwrap_or(0),
    );
    let read_map = |k: &str| -> Result<BTreeMap<i64, i64>> {
        let obj = v
            .get(k)
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Domain(format!("pattern JSON lacks map {k:?}")))?;
        obj.iter()
            .map(|(key, val)| {
                let idx: i64 = key
                    .parse()
                    .map_err(|_| Error::Domain(format!("{k} key {key:?} is not an integer")))?;
                let r = val
                    .as_i64()
                    .ok_or_else(|| Error::Domain(format!("{k}[{key}] is not an integer")))?;
                Ok((idx, r))
            })
            .collect()
    };
    SquareLabeling::from_maps(a, b, c, d, w, &read_map("eps")?, &read_map("eta")?)
}

fn load_labeling(path: &Path) -> Result<SquareLabeling> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    labeling_from_json(&v)
}

fn loop_json(c: &CanonicalLoop) -> Value {
    json!({ "vertices": c.vertices().iter().map(|&p| point_json(p)).collect::<Vec<_>>() })
}

fn metrics_json(m: &loops::LoopMetrics) -> Value {
    json!({
        "width": m.width,
        "height": m.height,
        "length": m.length,
        "area": *m.area.numer() as f64 / *m.area.denom() as f64,
    })
}

/// Parses a named-family preset like `rug:7x9` or `wand:w5:15:010101`.
pub fn parse_preset(s: &str) -> Result<crate::canonical::CanonicalKind> {
    use crate::canonical::{CanonicalKind, WandAxis};
    let parts: Vec<&str> = s.split(':').collect();
    let dims = |t: &str| -> Result<(i64, i64)> {
        let (w, h) = t
            .split_once('x')
            .ok_or_else(|| Error::Domain(format!("expected WxH, got {t:?}")))?;
        Ok((
            w.parse()
                .map_err(|e| Error::Domain(format!("width {w:?}: {e}")))?,
            h.parse()
                .map_err(|e| Error::Domain(format!("height {h:?}: {e}")))?,
        ))
    };
    let num = |t: &str| -> Result<i64> {
        t.parse()
            .map_err(|e| Error::Domain(format!("number {t:?}: {e}")))
    };
    match parts.as_slice() {
        ["rug", wh] => {
            let (w, h) = dims(wh)?;
            Ok(CanonicalKind::Rug { w, h })
        }
        ["cross", wh, a, b] => {
            let (w, h) = dims(wh)?;
            Ok(CanonicalKind::Cross { w, h, alpha: num(a)?, beta: num(b)? })
        }
        ["hcomb", wh, a] => {
            let (w, h) = dims(wh)?;
            Ok(CanonicalKind::HComb { w, h, alpha: num(a)? })
        }
        ["vcomb", wh, b] => {
            let (w, h) = dims(wh)?;
            Ok(CanonicalKind::VComb { w, h, beta: num(b)? })
        }
        ["wand", axis, long, bits] => {
            let axis = match *axis {
                "w5" => WandAxis::Width5,
                "h5" => WandAxis::Height5,
                other => return Err(Error::Domain(format!("wand axis must be w5 or h5, got {other:?}"))),
            };
            let teeth: Vec<bool> = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Domain(format!("tooth bit {other:?} is not 0/1"))),
                })
                .collect::<Result<_>>()?;
            Ok(CanonicalKind::Wand { axis, long: num(long)?, teeth })
        }
        _ => Err(Error::Domain(format!(
            "unknown preset {s:?}; expected rug:WxH, cross:WxH:A:B, hcomb:WxH:A, vcomb:WxH:B, or wand:w5:H:BITS"
        ))),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let (a, b, c, d) = args.params;
    let labeling = match (&args.preset, &args.labels, args.seed) {
        (Some(preset), _, _) => crate::canonical::make(&parse_preset(preset)?)?,
        (None, Some(path), _) => load_labeling(path)?,
        (None, None, seed) => grid::random_labeling(a, b, c, d, args.window, seed.unwrap_or(0))?,
    };
    let seed_meta = if args.labels.is_none() && args.preset.is_none() {
        Some(args.seed.unwrap_or(0))
    } else {
        None
    };
    let mut report = json!({
        "meta": metadata("generate", seed_meta),
        "pattern": labeling_to_json(&labeling, true),
    });
    if args.validate {
        let pattern = grid::generate_window(&labeling);
        let violations = grid::validate_compatibility(&pattern, grid::default_margin(&labeling))?;
        report["violations"] = json!(violations
            .iter()
            .map(|v| json!({
                "point": point_json(v.point),
                "kind": match v.kind {
                    grid::ViolationKind::VerticalEndpointUnmatched => "vertical-endpoint-unmatched",
                    grid::ViolationKind::HorizontalEndpointUnmatched => "horizontal-endpoint-unmatched",
                },
            }))
            .collect::<Vec<_>>());
        report["valid"] = json!(violations.is_empty());
    }
    if let Some(svg_path) = &args.svg {
        let pattern = grid::generate_window(&labeling);
        let svg = render::render_pattern_svg(&pattern, None, &RenderStyle::default());
        std::fs::write(svg_path, svg)?;
    }
    emit(&report, args.out.as_deref())
}

fn cmd_trace(args: TraceArgs) -> Result<()> {
    let labeling = load_labeling(&args.input)?;
    let pattern = grid::generate_window(&labeling);
    let strands = loops::trace_strands(&pattern);
    let strand_json: Vec<Value> = strands
        .iter()
        .map(|s| {
            json!({
                "stitches": s.stitches.len(),
                "closed": s.closed,
                "touches_boundary": s.touches_boundary,
            })
        })
        .collect();
    let the_loops: Vec<Value> = loops::loops_of(&pattern)
        .iter()
        .map(|l| {
            let m = loops::loop_metrics(l).unwrap();
            json!({
                "loop": loop_json(&loops::canonicalize(l)),
                "metrics": metrics_json(&m),
            })
        })
        .collect();
    let report = json!({
        "meta": metadata("trace", None),
        "strands": strand_json,
        "loops": the_loops,
    });
    emit(&report, args.out.as_deref())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<()> {
    let guard = EnumGuard {
        max_bits: args.max_bits,
    };
    match args.format.as_str() {
        "json" => {
            let report = extremal::extremal_report(args.width, args.height, &guard)?;
            emit(
                &extremal_report_json("enumerate", &report),
                args.out.as_deref(),
            )
        }
        "svg-dir" => {
            let dir = args
                .out
                .ok_or_else(|| Error::Domain("svg-dir output needs --out DIRECTORY".into()))?;
            std::fs::create_dir_all(&dir)?;
            let result = extremal::enumerate_loops(args.width, args.height, &guard)?;
            for (i, c) in result.loops.iter().enumerate() {
                let svg = render::render_loop_svg(&c.as_loop(), &RenderStyle::default());
                std::fs::write(dir.join(format!("loop_{i:03}.svg")), svg)?;
            }
            Ok(())
        }
        other => Err(Error::Domain(format!("unknown format {other:?}"))),
    }
}

fn extremal_report_json(command: &str, r: &extremal::ExtremalReport) -> Value {
    let mut tallies: BTreeMap<String, usize> = BTreeMap::new();
    for rec in &r.records {
        *tallies.entry(rec.class.to_string()).or_default() += 1;
    }
    let witnesses = |pred: &dyn Fn(&extremal::LoopRecord) -> bool| -> Vec<Value> {
        r.records
            .iter()
            .filter(|rec| pred(rec))
            .map(|rec| loop_json(&rec.canonical))
            .collect()
    };
    json!({
        "meta": metadata(command, None),
        "width": r.w,
        "height": r.h,
        "count": r.records.len(),
        "extremal": {
            "min_length": r.min_length,
            "max_length": r.max_length,
            "min_area": r.min_area,
            "max_area": r.max_area,
            "max_nonrug_length": r.max_nonrug_length,
            "open_case": r.open_case,
            "min_length_witnesses": witnesses(&|rec| Some(rec.metrics.length) == r.min_length),
            "max_area_witnesses": witnesses(&|rec| Some(rec.metrics.area.to_integer()) == r.max_area),
            "min_area_witnesses": witnesses(&|rec| Some(rec.metrics.area.to_integer()) == r.min_area),
        },
        "classes": tallies,
        "loops": r.records.iter().map(|rec| json!({
            "loop": loop_json(&rec.canonical),
            "metrics": metrics_json(&rec.metrics),
            "class": rec.class.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn cmd_extremal(args: ExtremalArgs) -> Result<()> {
    let guard = EnumGuard {
        max_bits: args.max_bits,
    };
    let report = extremal::extremal_report(args.width, args.height, &guard)?;
    emit(
        &extremal_report_json("extremal", &report),
        args.out.as_deref(),
    )
}

fn cmd_count(params: (i64, i64, i64, i64), oracle: bool, out: Option<PathBuf>) -> Result<()> {
    let p = longstitch::derive_params(params.0, params.1, params.2, params.3)?;
    let count = longstitch::count_patterns(&p)?;
    let mut report = json!({
        "meta": metadata("longstitch-count", None),
        "params": [p.a, p.b, p.c, p.d],
        "case": p.case.to_string(),
        "m": p.m,
        "orders": [p.q, p.r],
        "formula": match count {
            CountResult::Zero => json!(0),
            CountResult::Finite(n) => json!(n as u64),
            CountResult::Continuum => json!("continuum"),
        },
        "value": match count {
            CountResult::Zero => json!(0),
            CountResult::Finite(n) => json!(n as u64),
            CountResult::Continuum => json!("continuum"),
        },
    });
    if oracle {
        let counted = longstitch::brute_force_count(&p)?;
        report["oracle"] = json!(counted);
        let formula_value = match count {
            CountResult::Zero => Some(0),
            CountResult::Finite(n) => Some(n as u64),
            CountResult::Continuum => None,
        };
        if formula_value != Some(counted) {
            return Err(Error::Integrity(format!(
                "formula count {formula_value:?} disagrees with the torus oracle {counted}"
            )));
        }
    }
    emit(&report, out.as_deref())
}

fn cmd_classify(input: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let labeling = load_labeling(&input)?;
    let (a, b, c, d) = labeling.params();
    let p = longstitch::derive_params(a, b, c, d)?;
    let pattern = grid::generate_window(&labeling);
    let mut tallies: BTreeMap<String, usize> = BTreeMap::new();
    let mut indeterminate = 0usize;
    for s in loops::trace_strands(&pattern) {
        match longstitch::classify_strand(&s, &p) {
            Ok(class) => *tallies.entry(class.to_string()).or_default() += 1,
            Err(Error::Indeterminate(_)) => indeterminate += 1,
            Err(e) => return Err(e),
        }
    }
    let report = json!({
        "meta": metadata("longstitch-classify", None),
        "params": [a, b, c, d],
        "case": p.case.to_string(),
        "strands": tallies,
        "indeterminate": indeterminate,
    });
    emit(&report, out.as_deref())
}

fn parse_bits(s: &str, name: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Domain(format!("{name} bit {other:?} is not 0/1"))),
        })
        .collect()
}

fn cmd_phi_decode(
    code: String,
    params: (i64, i64, i64, i64),
    window: Window,
    out: Option<PathBuf>,
) -> Result<()> {
    let p = longstitch::derive_params(params.0, params.1, params.2, params.3)?;
    let parts: Vec<&str> = code.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Domain(format!(
            "code must be u:v:sigma, got {code:?}"
        )));
    }
    let sigma: Vec<usize> = parts[2]
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Domain(format!("sigma entry {t:?}: {e}")))
                .and_then(|v| {
                    v.checked_sub(1)
                        .ok_or_else(|| Error::Domain("sigma entries are 1-based".into()))
                })
        })
        .collect::<Result<_>>()?;
    let rc = RectangleCode {
        u: parse_bits(parts[0], "u")?,
        v: parse_bits(parts[1], "v")?,
        sigma,
    };
    let labeling = longstitch::phi_decode(&rc, &p, window)?;
    let round_trip = longstitch::phi_encode(&labeling, &p)?;
    let report = json!({
        "meta": metadata("longstitch-phi", None),
        "params": [p.a, p.b, p.c, p.d],
        "round_trip_ok": round_trip == rc,
        "pattern": labeling_to_json(&labeling, true),
    });
    emit(&report, out.as_deref())
}

fn cmd_dilate(
    factor: usize,
    sigma: String,
    inputs: Vec<PathBuf>,
    out: Option<PathBuf>,
) -> Result<()> {
    let sigma: Vec<usize> = sigma
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Domain(format!("sigma entry {t:?}: {e}")))
                .and_then(|v| {
                    v.checked_sub(1)
                        .ok_or_else(|| Error::Domain("sigma entries are 1-based".into()))
                })
        })
        .collect::<Result<_>>()?;
    if inputs.len() != factor {
        return Err(Error::Domain(format!(
            "need exactly {factor} input patterns, got {}",
            inputs.len()
        )));
    }
    let patterns: Vec<SquareLabeling> = inputs
        .iter()
        .map(|p| load_labeling(p))
        .collect::<Result<_>>()?;
    let overlay = longstitch::dilate_overlay(&patterns, &sigma)?;
    let pattern = grid::generate_window(&overlay);
    let violations = grid::validate_compatibility(&pattern, grid::default_margin(&overlay))?;
    let report = json!({
        "meta": metadata("longstitch-dilate", None),
        "valid": violations.is_empty(),
        "pattern": labeling_to_json(&overlay, true),
    });
    emit(&report, out.as_deref())
}

fn cmd_tri_sat(a: i64, b: i64, side: Option<i64>, out: Option<PathBuf>) -> Result<()> {
    let side = side.unwrap_or_else(|| (4 * (a + b)).max(12));
    let outcome = multigrid::ab_triangular_sat(a, b, side)?;
    let report = match &outcome {
        multigrid::TriSatOutcome::Sat(patterns) => json!({
            "meta": metadata("tri-sat", None),
            "a": a, "b": b, "side": side,
            "result": "SAT",
            "distinct_patterns": patterns.len(),
            "patterns": patterns.iter().map(|p| json!({
                "stitches": p.stitches.iter().map(|&(k, base)| json!([k, point_json(base)])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        multigrid::TriSatOutcome::Unsat(cert) => json!({
            "meta": metadata("tri-sat", None),
            "a": a, "b": b, "side": side,
            "result": "UNSAT",
            "nodes_explored": cert.nodes_explored,
            "assignments_tried": cert.assignments_tried,
        }),
    };
    emit(&report, out.as_deref())
}

fn cmd_tri_unique(side: i64, render_path: Option<PathBuf>, out: Option<PathBuf>) -> Result<()> {
    let window = Window::square(side);
    let seed = grid::LatticePoint::new(side / 2, side / 2);
    let pattern = multigrid::make_21_triangular(0, seed, window)?;
    if let Some(path) = &render_path {
        let svg = render::render_tri_svg(&pattern, &RenderStyle::default());
        std::fs::write(path, svg)?;
    }
    let report = json!({
        "meta": metadata("tri-unique", None),
        "a": 2, "b": 1, "side": side,
        "stitch_count": pattern.stitches.len(),
        "stitches": pattern.stitches.iter().map(|&(k, base)| json!([k, point_json(base)])).collect::<Vec<_>>(),
    });
    emit(&report, out.as_deref())
}

fn parse_dirs(s: &str) -> Result<DirectionSet> {
    let dirs: Vec<(i64, i64)> = s
        .split(';')
        .map(|pair| {
            let nums: Vec<i64> = pair
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|e| Error::Domain(format!("direction {pair:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Domain(format!("direction {pair:?} is not dx,dy")));
            }
            Ok((nums[0], nums[1]))
        })
        .collect::<Result<_>>()?;
    DirectionSet::new(&dirs)
}

fn cmd_phi_search(
    dirs: String,
    seed: u64,
    budget: u64,
    window: i64,
    stop_after: Option<usize>,
    out: Option<PathBuf>,
) -> Result<()> {
    let dirs = parse_dirs(&dirs)?;
    let outcome = multigrid::search_finite_components(
        &dirs,
        seed,
        budget,
        Window::square(window),
        stop_after,
    );
    let mut counterexamples = Vec::new();
    let components: Vec<Value> = outcome
        .found
        .iter()
        .map(|f| {
            let check = multigrid::check_divisibility_16(&f.component);
            let mut v = json!({
                "trial": f.trial,
                "vertex_count": f.component.vertices.len(),
                "vertices": f.component.vertices.iter().map(|&p| point_json(p)).collect::<Vec<_>>(),
            });
            if dirs.len() == 3 {
                v["divisible_by_16"] = json!(check.consistent);
                if !check.consistent {
                    counterexamples.push(f.component.vertices.len());
                }
            }
            v
        })
        .collect();
    let distinct = outcome.distinct_components().len();
    let report = json!({
        "meta": metadata("phi-search", Some(seed)),
        "directions": dirs.dirs().iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
        "budget": budget,
        "trials_run": outcome.trials_run,
        "window_side": window,
        "found": outcome.found.len(),
        "distinct": distinct,
        "components": components,
    });
    emit(&report, out.as_deref())?;
    if !counterexamples.is_empty() {
        return Err(Error::Integrity(format!(
            "finite components with vertex counts {counterexamples:?} are not divisible by 16"
        )));
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    let labeling = match (&args.input, &args.preset) {
        (Some(path), None) => load_labeling(path)?,
        (None, Some(preset)) => {
            // A named family renders as its loop alone.
            let kind = parse_preset(preset)?;
            let cf = crate::canonical::closed_form_metrics(&kind)?;
            let labeling = crate::canonical::make(&kind)?;
            let l = crate::canonical::trace_unique_loop(&labeling, cf.width, cf.height)?;
            let style = RenderStyle {
                unit: args.unit,
                grid: args.grid,
                ..RenderStyle::default()
            };
            std::fs::write(&args.out, render::render_loop_svg(&l, &style))?;
            return Ok(());
        }
        _ => {
            return Err(Error::Domain(
                "render needs exactly one of --input or --preset".into(),
            ))
        }
    };
    let pattern = grid::generate_window(&labeling);
    let style = RenderStyle {
        unit: args.unit,
        grid: args.grid,
        stroke: if args.palette == "class" {
            RenderStyle::default().stroke
        } else {
            args.palette.clone()
        },
        ..RenderStyle::default()
    };
    let svg = if args.palette == "class" {
        let (a, b, c, d) = labeling.params();
        let params = longstitch::derive_params(a, b, c, d)?;
        let classified: Vec<(Vec<grid::Stitch>, longstitch::StrandClass)> =
            loops::trace_strands(&pattern)
                .into_iter()
                .map(|s| {
                    let class = longstitch::classify_strand(&s, &params)
                        .unwrap_or(longstitch::StrandClass::Other);
                    (s.stitches, class)
                })
                .collect();
        render::render_pattern_svg(&pattern, Some(&classified), &style)
    } else {
        render::render_pattern_svg(&pattern, None, &style)
    };
    std::fs::write(&args.out, svg)?;
    Ok(())
}

/// Decodes an equal-pair code from CLI-ish strings; used by the examples.
pub fn psi_decode_strings(
    u: &str,
    v: &str,
    sigma: &[usize],
    a: i64,
    c: i64,
    d: i64,
    window: Window,
) -> Result<SquareLabeling> {
    let code = AbCode {
        u: parse_bits(u, "u")?,
        v: parse_bits(v, "v")?,
        sigma: sigma.to_vec(),
    };
    longstitch::psi_decode(&code, a, c, d, window)
}

/// A ready-made valid labeling for the c = d flavor of the equal-pair case,
/// built by rotating an equal-pair pattern a quarter turn.
pub fn rotated_equal_pair_example(v_bits: &[u8], window: Window) -> Result<SquareLabeling> {
    // (2,2,3,1) pattern on the transposed window, rotated into (3,1,2,2).
    let src_window = Window::new(window.y0, window.y1, -window.x1, -window.x0);
    let code = AbCode {
        u: vec![0],
        v: v_bits.to_vec(),
        sigma: vec![0, 1],
    };
    let src = longstitch::psi_decode(
        &code,
        2,
        3,
        1,
        Window::new(src_window.x0, src_window.x1, src_window.y0, src_window.y1),
    )?;
    src.rotate_ccw()
}

/// Positive/negative zig-zag labels exposed for the examples.
pub fn zigzag_example(
    quad: (i64, i64, i64, i64),
    offset: i64,
    positive: bool,
    window: Window,
) -> Result<SquareLabeling> {
    let p = longstitch::derive_params(quad.0, quad.1, quad.2, quad.3)?;
    longstitch::zigzag_pattern(
        &p,
        offset,
        if positive {
            Sign::Positive
        } else {
            Sign::Negative
        },
        window,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_vec(args: &[&str]) -> i32 {
        run(args.iter().map(|s| s.to_string()))
    }

    #[test]
    fn exit_codes_follow_the_error_taxonomy() {
        assert_eq!(Error::Domain("x".into()).exit_code(), 1);
        assert_eq!(Error::Precondition("x".into()).exit_code(), 1);
        assert_eq!(Error::Resource("x".into()).exit_code(), 1);
        assert_eq!(Error::Indeterminate("x".into()).exit_code(), 1);
        assert_eq!(Error::Integrity("x".into()).exit_code(), 2);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(
            run_vec(&["hitomezashi", "enumerate", "--width", "4", "--height", "5"]),
            1
        );
        assert_eq!(run_vec(&["hitomezashi", "no-such-command"]), 1);
    }

    #[test]
    fn labeling_json_round_trips() {
        let l = grid::random_labeling(3, 1, 2, 2, Window::new(-2, 9, -1, 7), 9).unwrap();
        let v = labeling_to_json(&l, false);
        let back = labeling_from_json(&v).unwrap();
        assert_eq!(l, back);
    }

    #[test]
    fn labeling_json_uses_decimal_string_keys() {
        let l = grid::random_labeling(1, 1, 1, 1, Window::new(-2, 2, -2, 2), 1).unwrap();
        let v = labeling_to_json(&l, true);
        assert!(v["eps"].get("-2").is_some());
        assert!(v["eta"].get("0").is_some());
        // Stitches are endpoint pairs sorted lexicographically.
        let stitches = v["stitches"].as_array().unwrap();
        assert!(!stitches.is_empty());
        let firsts: Vec<(i64, i64)> = stitches
            .iter()
            .map(|s| (s[0][0].as_i64().unwrap(), s[0][1].as_i64().unwrap()))
            .collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        assert_eq!(firsts, sorted);
    }

    #[test]
    fn count_command_reports_formula_and_oracle() {
        let tmp = std::env::temp_dir().join("hitoz_count_test.json");
        let code = run_vec(&[
            "hitomezashi",
            "longstitch",
            "count",
            "-p",
            "3,1,3,1",
            "--oracle",
            "--out",
            tmp.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&tmp).unwrap()).unwrap();
        assert_eq!(v["formula"], json!(16));
        assert_eq!(v["oracle"], json!(16));
        std::fs::remove_file(&tmp).ok();
    }

    #[test]
    fn enumerate_command_reports_the_census_count() {
        let tmp = std::env::temp_dir().join("hitoz_enum_count.json");
        let code = run_vec(&[
            "hitomezashi",
            "enumerate",
            "--width",
            "7",
            "--height",
            "9",
            "--out",
            tmp.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&tmp).unwrap()).unwrap();
        assert_eq!(v["count"], json!(27));
        assert_eq!(v["extremal"]["min_length"], json!(36));
        std::fs::remove_file(&tmp).ok();
    }

    #[test]
    fn preset_parsing_accepts_the_named_families() {
        assert!(parse_preset("rug:7x9").is_ok());
        assert!(parse_preset("cross:11x13:7:11").is_ok());
        assert!(parse_preset("hcomb:11x13:7").is_ok());
        assert!(parse_preset("vcomb:13x11:7").is_ok());
        assert!(parse_preset("wand:w5:15:010101").is_ok());
        assert!(parse_preset("wand:h5:9:010").is_ok());
        assert!(parse_preset("rug:7").is_err());
        assert!(parse_preset("blob:3x3").is_err());
    }

    #[test]
    fn identical_invocations_are_byte_identical() {
        let tmp1 = std::env::temp_dir().join("hitoz_det_1.json");
        let tmp2 = std::env::temp_dir().join("hitoz_det_2.json");
        for (tmp, jobs) in [(&tmp1, "1"), (&tmp2, "4")] {
            let code = run_vec(&[
                "hitomezashi",
                "--jobs",
                jobs,
                "enumerate",
                "--width",
                "5",
                "--height",
                "5",
                "--out",
                tmp.to_str().unwrap(),
            ]);
            assert_eq!(code, 0);
        }
        let a = std::fs::read(&tmp1).unwrap();
        let b = std::fs::read(&tmp2).unwrap();
        assert_eq!(a, b);
        std::fs::remove_file(&tmp1).ok();
        std::fs::remove_file(&tmp2).ok();
    }
}
