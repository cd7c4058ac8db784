//! Command line front end. Vector ids are 1-based on input and output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dimension::{
    endpoint, essential_bracket, generalized_regular_sufficient, measure_table, periodic_dim,
    regularity_diagnostics, BracketOptions, Bounds, DimensionBracket, EndpointInfo, PeriodicPoint,
};
use crate::error::{Error, Result};
use crate::ifs::{Commensurability, Ifs};
use crate::net::analyze;
use crate::numberfield::{format_rational, parse_rational};
use crate::specfile::SpecFile;
use crate::transitions::{labels, PositiveType, VectorGraph};

#[derive(Debug, Parser)]
#[command(name = "finitype", version, about = "Multifractal analysis of self-similar measures of finite type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// JSON spec file.
    pub spec: PathBuf,
    /// Value substituted for a "param" probability.
    #[arg(long)]
    pub param: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the spec: field, contraction ratios, hull, probabilities.
    Validate(SpecArgs),
    /// Build characteristic vectors, transition matrices and loop classes.
    Analyze {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write the vector graph in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Local dimension at a periodic point given by a prefix and a cycle.
    Dims {
        #[command(flatten)]
        spec: SpecArgs,
        /// Comma separated vector ids from the root, e.g. `1,2`.
        #[arg(long, default_value = "")]
        prefix: String,
        /// Comma separated closed path, e.g. `2,2`.
        #[arg(long)]
        cycle: String,
        /// Prefix of a second representation of the same point.
        #[arg(long, requires = "cycle2")]
        prefix2: Option<String>,
        #[arg(long)]
        cycle2: Option<String>,
    },
    /// Bracket the essential interval of local dimensions and the endpoint dimensions.
    Bounds {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        max_cycle_len: Option<usize>,
    },
    /// Sweep the "param" probability and write the brackets as CSV.
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_cycle_len: Option<usize>,
    },
    /// Net intervals of one generation with their exact P_n.
    Measure {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        generation: usize,
    },
    /// Sufficient condition for generalized regularity and the B(n) diagnostics.
    Regularity {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        mmax: Option<usize>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Errors are printed to stderr as JSON.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let mut body = json!({"error": e.kind(), "message": e.to_string()});
            if let Error::NotFiniteType { partial, limit } = &e {
                body["limit"] = json!(limit);
                body["partial_vectors"] = json!(partial.len());
            }
            eprintln!("{}", serde_json::to_string_pretty(&body).expect("json"));
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    let value = match command {
        Command::Validate(s) => validate(s)?,
        Command::Analyze { spec, dot } => analyze_cmd(spec, dot.as_deref())?,
        Command::Dims {
            spec,
            prefix,
            cycle,
            prefix2,
            cycle2,
        } => dims(spec, prefix, cycle, prefix2.as_deref(), cycle2.as_deref())?,
        Command::Bounds { spec, max_cycle_len } => bounds(spec, *max_cycle_len)?,
        Command::Sweep {
            spec,
            from,
            to,
            steps,
            out: path,
            max_cycle_len,
        } => sweep(spec, from, to, *steps, path, *max_cycle_len)?,
        Command::Measure { spec, generation } => measure(spec, *generation)?,
        Command::Regularity { spec, nmax, mmax } => regularity(spec, *nmax, *mmax)?,
    };
    match writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json")) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Error::Unsupported(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn load(spec: &SpecArgs) -> Result<(SpecFile, Ifs)> {
    let file = SpecFile::load(&spec.spec)?;
    let param = spec.param.as_deref().map(parse_rational).transpose()?;
    let ifs = file.ifs(param.as_ref())?;
    Ok((file, ifs))
}

fn validate(spec: &SpecArgs) -> Result<Value> {
    let (_, ifs) = load(spec)?;
    let mut warnings = Vec::new();
    let commensurability = match ifs.commensurability_exponents(64) {
        Commensurability::Exponents(e) => json!({"exponents": e}),
        Commensurability::NotCommensurable { map } => {
            warnings.push(format!(
                "no relation |r_{}|^b = r_min^c with b, c ≤ 64 was found; the IFS may not be of finite type",
                map + 1
            ));
            json!({"not_commensurable": map + 1})
        }
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(json!({
        "ok": true,
        "degree": ifs.field().degree(),
        "generator": ifs.field().generator().to_f64(),
        "maps": ifs.len(),
        "r_min": ifs.r_min().to_string(),
        "r_min_f64": ifs.r_min().to_f64(),
        "equicontractive": ifs.is_equicontractive(),
        "hull": [0, 1],
        "probabilities": ifs.probs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "commensurability": commensurability,
        "warnings": warnings,
    }))
}

fn graph_for(file: &SpecFile, ifs: &Ifs) -> Result<VectorGraph> {
    analyze(ifs, file.options.max_vectors)
}

fn analyze_cmd(spec: &SpecArgs, dot: Option<&Path>) -> Result<Value> {
    let (file, ifs) = load(spec)?;
    let graph = graph_for(&file, &ifs)?;
    if let Some(path) = dot {
        std::fs::write(path, graph.to_dot())
            .map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", path.display())))?;
    }
    let reduced = graph.reduced_labels();
    let vectors: Vec<Value> = graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let v = &n.vector;
            json!({
                "id": i + 1,
                "length": v.length.to_string(),
                "neighbours": v.neighbours.iter().map(|nb| [nb.a.to_string(), nb.l.to_string()]).collect::<Vec<_>>(),
                "sibling_index": v.sibling_index,
                "reduced": reduced[i] + 1,
                "children": labels(&graph.children(i)),
                "essential": graph.is_essential(i),
            })
        })
        .collect();
    let transitions: Vec<Value> = graph
        .nodes()
        .iter()
        .enumerate()
        .flat_map(|(i, n)| {
            n.edges.iter().map(move |e| {
                let rows: Vec<Vec<String>> = (0..e.matrix.rows())
                    .map(|r| e.matrix.row(r).iter().map(ToString::to_string).collect())
                    .collect();
                json!({"from": i + 1, "to": e.to + 1, "order": e.order + 1, "matrix": rows})
            })
        })
        .collect();
    let dec = graph.decomposition().expect("analyze decomposes");
    let classes: Vec<Value> = dec
        .classes
        .iter()
        .map(|c| json!({"members": labels(&c.members), "cyclic": c.cyclic, "terminal": c.terminal}))
        .collect();
    let essential = graph.essential_class()?.to_vec();
    let positive = match graph.is_positive_type(&essential, 64) {
        PositiveType::Positive(w) => json!({"positive": true, "witness": labels(&w)}),
        PositiveType::Unknown => json!({"positive": false, "searched_up_to": 64}),
    };
    let endpoints: Vec<Value> = [0u8, 1]
        .iter()
        .map(|&p| endpoint(&graph, p).map(|e| endpoint_json(&e, None)))
        .collect::<Result<_>>()?;
    Ok(json!({
        "vector_count": graph.len(),
        "reduced_count": graph.reduced_count(),
        "vectors": vectors,
        "transitions": transitions,
        "loop_classes": classes,
        "essential_class": labels(&essential),
        "positive_type": positive,
        "endpoints": endpoints,
        "regularity": generalized_regular_sufficient(&ifs),
    }))
}

fn parse_ids(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(Error::InvalidPath(format!("bad vector id {s:?}; ids start at 1"))),
        })
        .collect()
}

fn check_ids(graph: &VectorGraph, ids: &[usize]) -> Result<()> {
    match ids.iter().find(|&&i| i >= graph.len()) {
        Some(i) => Err(Error::InvalidPath(format!(
            "vector {} does not exist (there are {})",
            i + 1,
            graph.len()
        ))),
        None => Ok(()),
    }
}

fn bounds_json(b: &Bounds) -> Value {
    json!({"lo": b.lo, "hi": b.hi})
}

fn dims(
    spec: &SpecArgs,
    prefix: &str,
    cycle: &str,
    prefix2: Option<&str>,
    cycle2: Option<&str>,
) -> Result<Value> {
    let (file, ifs) = load(spec)?;
    let graph = graph_for(&file, &ifs)?;
    let (p, c) = (parse_ids(prefix)?, parse_ids(cycle)?);
    check_ids(&graph, &p)?;
    check_ids(&graph, &c)?;
    let mut pt = PeriodicPoint::new(&graph, p, c)?;
    if let Some(c2) = cycle2 {
        let (p2, c2) = (parse_ids(prefix2.unwrap_or(""))?, parse_ids(c2)?);
        check_ids(&graph, &p2)?;
        check_ids(&graph, &c2)?;
        pt = pt.with_alternate(&graph, p2, c2)?;
    }
    let d = periodic_dim(&graph, &pt)?;
    Ok(json!({
        "point": pt.value(&graph)?.to_string(),
        "point_f64": pt.value(&graph)?.to_f64(),
        "prefix": labels(&pt.prefix),
        "cycle": labels(&pt.cycle),
        "dimension": d.dimension.mid(),
        "dimension_bounds": bounds_json(&d.dimension),
        "spectral_radius": bounds_json(&d.spectral_radius),
        "exact_spectral_radius": d.exact_spectral_radius,
        "cycle_length": d.cycle_length,
        "representation": d.representation + 1,
    }))
}

fn endpoint_json(e: &EndpointInfo, bracket: Option<&DimensionBracket>) -> Value {
    let d = &e.dimension.dimension;
    let mut v = json!({
        "point": e.point,
        "prefix": labels(&e.representation.prefix),
        "cycle": labels(&e.representation.cycle),
        "essential": e.essential,
        "dimension": d.mid(),
        "dimension_bounds": bounds_json(d),
    });
    if let Some(b) = bracket {
        v["isolated"] = json!(is_isolated(e, b));
    }
    v
}

/// The endpoint lies outside the essential class and its dimension is
/// certainly outside the outer bracket of `[a, b]`.
pub fn is_isolated(e: &EndpointInfo, b: &DimensionBracket) -> bool {
    let d = &e.dimension.dimension;
    !e.essential && (d.lo > b.b_hi.hi || d.hi < b.a_lo.lo)
}

fn bracket_options(file: &SpecFile, max_cycle_len: Option<usize>) -> BracketOptions {
    BracketOptions {
        max_cycle_len: max_cycle_len.unwrap_or(file.options.max_cycle_len),
        ..BracketOptions::default()
    }
}

fn bounds(spec: &SpecArgs, max_cycle_len: Option<usize>) -> Result<Value> {
    let (file, ifs) = load(spec)?;
    let graph = graph_for(&file, &ifs)?;
    let b = essential_bracket(&graph, &bracket_options(&file, max_cycle_len))?;
    let endpoints: Vec<Value> = [0u8, 1]
        .iter()
        .map(|&p| endpoint(&graph, p).map(|e| endpoint_json(&e, Some(&b))))
        .collect::<Result<_>>()?;
    Ok(json!({
        "a_lo": b.a_lo.lo,
        "a_hi": b.a_hi.hi,
        "b_lo": b.b_lo.lo,
        "b_hi": b.b_hi.hi,
        "a_lo_witness": {"generator": labels(&b.a_lo_witness.generator), "variant": b.a_lo_witness.variant},
        "b_hi_witness": {"generator": labels(&b.b_hi_witness.generator), "variant": b.b_hi_witness.variant},
        "a_hi_cycle": labels(&b.a_hi_witness),
        "b_lo_cycle": labels(&b.b_lo_witness),
        "generators": b.generators.iter().map(|g| labels(g)).collect::<Vec<_>>(),
        "positive_witness": labels(&b.positive_witness),
        "cycle_length_used": b.cycle_length_used,
        "cycles_sampled": b.cycles_sampled,
        "degenerate": b.degenerate,
        "endpoints": endpoints,
    }))
}

/// Formats a float with 15 significant digits.
pub fn fmt15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("float");
    format!("{rounded}")
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: BigRational,
    pub a_lo: f64,
    pub a_hi: f64,
    pub b_lo: f64,
    pub b_hi: f64,
    pub dim0: f64,
    pub dim1: f64,
    pub isolated0: bool,
    pub isolated1: bool,
}

pub const SWEEP_HEADER: &str = "param,a_lo,a_hi,b_lo,b_hi,dim0,dim1,isolated0,isolated1";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt15(rational_f64(&self.param)),
            fmt15(self.a_lo),
            fmt15(self.a_hi),
            fmt15(self.b_lo),
            fmt15(self.b_hi),
            fmt15(self.dim0),
            fmt15(self.dim1),
            self.isolated0,
            self.isolated1
        )
    }
}

fn rational_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Evenly spaced exact grid from `from` to `to` inclusive.
pub fn grid(from: &BigRational, to: &BigRational, steps: usize) -> Vec<BigRational> {
    match steps {
        0 => Vec::new(),
        1 => vec![from.clone()],
        _ => {
            let span = to - from;
            let den = BigRational::from_integer(((steps - 1) as i64).into());
            (0..steps)
                .map(|i| from + &span * BigRational::from_integer((i as i64).into()) / &den)
                .collect()
        }
    }
}

/// Brackets and endpoint dimensions for every grid value of the `"param"`
/// slot. Values giving an invalid probability vector are skipped with a
/// warning. The vector graph is built once; only the matrices change.
pub fn sweep_rows(
    file: &SpecFile,
    params: &[BigRational],
    opts: &BracketOptions,
) -> Result<Vec<SweepRow>> {
    if !file.has_param() {
        return Err(Error::Spec("sweep needs a \"param\" probability".into()));
    }
    let mut valid: Vec<(BigRational, Ifs)> = Vec::new();
    for p in params {
        match file.ifs(Some(p)) {
            Ok(ifs) => valid.push((p.clone(), ifs)),
            Err(Error::Ifs(e)) => eprintln!("warning: skipping param {}: {e}", format_rational(p)),
            Err(e) => return Err(e),
        }
    }
    let Some((_, first)) = valid.first() else {
        return Ok(Vec::new());
    };
    let base = analyze(first, file.options.max_vectors)?;
    valid
        .par_iter()
        .map(|(p, ifs)| {
            let graph = base.with_probabilities(ifs.probs().to_vec())?;
            let b = essential_bracket(&graph, opts)?;
            let e0 = endpoint(&graph, 0)?;
            let e1 = endpoint(&graph, 1)?;
            Ok(SweepRow {
                param: p.clone(),
                a_lo: b.a_lo.lo,
                a_hi: b.a_hi.hi,
                b_lo: b.b_lo.lo,
                b_hi: b.b_hi.hi,
                dim0: e0.dimension.dimension.mid(),
                dim1: e1.dimension.dimension.mid(),
                isolated0: is_isolated(&e0, &b),
                isolated1: is_isolated(&e1, &b),
            })
        })
        .collect()
}

fn sweep(
    spec: &Path,
    from: &str,
    to: &str,
    steps: usize,
    out: &Path,
    max_cycle_len: Option<usize>,
) -> Result<Value> {
    let file = SpecFile::load(spec)?;
    let (from, to) = (parse_rational(from)?, parse_rational(to)?);
    if steps == 0 {
        return Err(Error::Unsupported("steps must be at least 1".into()));
    }
    let params = grid(&from, &to, steps);
    let rows = sweep_rows(&file, &params, &bracket_options(&file, max_cycle_len))?;
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for r in &rows {
        let _ = writeln!(csv, "{}", r.to_csv());
    }
    std::fs::write(out, csv)
        .map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", out.display())))?;
    Ok(json!({
        "rows": rows.len(),
        "skipped": params.len() - rows.len(),
        "out": out.display().to_string(),
    }))
}

fn measure(spec: &SpecArgs, generation: usize) -> Result<Value> {
    let (file, ifs) = load(spec)?;
    let graph = graph_for(&file, &ifs)?;
    let rows = measure_table(&graph, generation);
    let total = rows
        .iter()
        .fold(ifs.field().zero(), |acc, r| acc + &r.p_n);
    let intervals: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "path": labels(&r.path),
                "left": r.interval.left.to_string(),
                "right": r.interval.right.to_string(),
                "left_f64": r.interval.left.to_f64(),
                "right_f64": r.interval.right.to_f64(),
                "vector": r.path.last().map(|v| v + 1),
                "q": r.q.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "p_n": r.p_n.to_string(),
                "p_n_f64": r.p_n.to_f64(),
            })
        })
        .collect();
    Ok(json!({
        "generation": generation,
        "count": rows.len(),
        "total_p_n": total.to_string(),
        "intervals": intervals,
    }))
}

fn regularity(spec: &SpecArgs, nmax: Option<usize>, mmax: Option<usize>) -> Result<Value> {
    let (file, ifs) = load(spec)?;
    let report = generalized_regular_sufficient(&ifs);
    let graph = graph_for(&file, &ifs)?;
    let rows = regularity_diagnostics(
        &graph,
        nmax.unwrap_or(file.options.n_max),
        mmax.unwrap_or(file.options.m_max),
    )?;
    let mut report = serde_json::to_value(&report).expect("json");
    // 1-based map numbers in the output
    if let Some(Value::Array(pair)) = report.get_mut("extreme_maps") {
        for v in pair.iter_mut() {
            *v = json!(v.as_u64().unwrap_or(0) + 1);
        }
    }
    if let Some(Value::Array(cmps)) = report.get_mut("comparisons") {
        for c in cmps.iter_mut() {
            for key in ["left", "right"] {
                c[key] = json!(c[key].as_u64().unwrap_or(0) + 1);
            }
        }
    }
    Ok(json!({"sufficient_condition": report, "diagnostics": rows}))
}
