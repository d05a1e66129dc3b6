//! Command-line front end. Every subcommand parses its input, calls one
//! library operation and prints the result.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use gorenstein_core::base_polytope::{build_polytope, default_delta_bound, gorenstein_oracle, BasePolytope};
use gorenstein_core::census::{census_report, verify_classification, verify_equivalence, verify_facets, CensusBounds};
use gorenstein_core::constructions::{decompose, delta_gluing, ConstructionTrace, GluingSpec};
use gorenstein_core::gorenstein_check::{is_gorenstein, weight_function, WeightAssignment};
use gorenstein_core::graphic_matroid::good_flats;
use gorenstein_core::{EdgeId, Multigraph, VertexSubset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable overriding the oracle's dilation bound.
pub const DELTA_MAX_VAR: &str = "GORENSTEIN_DELTA_MAX";

#[derive(Parser, Debug)]
#[command(name = "gorenstein", version, about = "Gorenstein base polytopes of graphic matroids")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a multigraph is Gorenstein.
    Check {
        file: PathBuf,
        /// Also run the polyhedral oracle.
        #[arg(long)]
        oracle: bool,
        /// Largest dilation the oracle scans.
        #[arg(long)]
        delta_max: Option<i64>,
    },
    /// Print the weight function at a given delta.
    Weights {
        file: PathBuf,
        #[arg(long)]
        delta: i64,
    },
    /// Print the facets of the base polytope with reduced equations.
    Facets {
        file: PathBuf,
        /// Take the facets from the convex hull of the vertices.
        #[arg(long)]
        hull: bool,
    },
    /// Glue two graphs from a JSON gluing spec, or replay a construction trace.
    Glue { spec: PathBuf },
    /// Search for a construction of a Gorenstein graph.
    Decompose {
        file: PathBuf,
        /// Defaults to the Gorenstein index of the graph.
        #[arg(long)]
        delta: Option<i64>,
    },
    /// Enumerate 2-connected multigraphs and construct the Gorenstein ones.
    Census(BoundArgs),
    /// Run a verification harness over the census.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Index for the classification suite; all of 2..=max(max_e,3) when omitted.
        #[arg(long)]
        delta: Option<i64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Equivalence,
    Classification,
    Facets,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 6)]
    pub max_v: usize,
    #[arg(long, default_value_t = 10)]
    pub max_e: usize,
    #[arg(long, default_value_t = 5)]
    pub max_mult: usize,
}

impl From<BoundArgs> for CensusBounds {
    fn from(b: BoundArgs) -> Self {
        CensusBounds::new(b.max_v, b.max_e, b.max_mult)
    }
}

/// A graph inside a JSON document: vertex count and endpoint pairs, with
/// edge ids `0..m` in list order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    pub fn to_graph(&self) -> Result<Multigraph, String> {
        Multigraph::from_pairs(self.vertices, &self.edges).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueFile {
    pub left: GraphSpec,
    pub left_class: Vec<EdgeId>,
    pub right: GraphSpec,
    pub right_class: Vec<EdgeId>,
    pub delta: i64,
    #[serde(default)]
    pub flip: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GlueInput {
    Spec(GlueFile),
    Trace(ConstructionTrace),
}

#[derive(Debug, Serialize)]
pub struct CheckOutput {
    pub gorenstein: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<EdgeId, i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub good_flats: Option<Vec<VertexSubset>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutput>,
}

#[derive(Debug, Serialize)]
pub struct OracleOutput {
    pub delta_max: i64,
    pub delta: Option<i64>,
    pub point: Option<Vec<i64>>,
}

#[derive(Debug, Serialize)]
pub struct WeightsOutput {
    pub delta: i64,
    pub weights: BTreeMap<EdgeId, i64>,
}

impl From<WeightAssignment> for WeightsOutput {
    fn from(w: WeightAssignment) -> Self {
        WeightsOutput { delta: w.delta, weights: w.weights }
    }
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type Outcome = Result<i32, Failure>;

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn read_graph(path: &Path) -> Result<Multigraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Multigraph::parse_edge_list(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn delta_max_from_env() -> Result<Option<i64>, Failure> {
    match std::env::var(DELTA_MAX_VAR) {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .map(Some)
            .map_err(|_| input_error(format!("{DELTA_MAX_VAR}={v:?} is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(|e| input_error(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| input_error(e.to_string()))
}

fn text(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    out.write_all(s.as_bytes()).map_err(|e| input_error(e.to_string()))
}

fn validate(cli: &Cli) -> Result<(), Failure> {
    let dot_ok = matches!(cli.command, Command::Check { .. } | Command::Glue { .. } | Command::Decompose { .. });
    if cli.format == Format::Dot && !dot_ok {
        return Err(input_error("--format dot applies only to check, glue and decompose"));
    }
    match &cli.command {
        Command::Weights { delta, .. } if *delta < 2 => Err(input_error("--delta must be at least 2")),
        Command::Decompose { delta: Some(d), .. } if *d < 2 => Err(input_error("--delta must be at least 2")),
        Command::Verify { delta: Some(d), .. } if *d < 2 => Err(input_error("--delta must be at least 2")),
        Command::Check { delta_max: Some(d), .. } if *d < 2 => Err(input_error("--delta-max must be at least 2")),
        Command::Census(b) | Command::Verify { bounds: b, .. } if b.max_v > VertexSubset::MAX_VERTICES => {
            Err(input_error(format!("--max-v is at most {}", VertexSubset::MAX_VERTICES)))
        }
        _ => Ok(()),
    }
}

fn weighted_dot(g: &Multigraph, w: &WeightAssignment) -> String {
    let mut s = String::from("graph G {\n");
    for v in 0..g.vertex_count() {
        s.push_str(&format!("  {v};\n"));
    }
    for e in g.edges() {
        s.push_str(&format!("  {} -- {} [label=\"{}:{}\"];\n", e.u, e.v, e.id, w.get(e.id).unwrap_or(0)));
    }
    s.push_str("}\n");
    s
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    validate(cli)?;
    match &cli.command {
        Command::Check { file, oracle, delta_max } => {
            let g = read_graph(file)?;
            let env_max = delta_max_from_env()?;
            let verdict = check(&g, *oracle, delta_max.or(env_max))?;
            match (cli.format, is_gorenstein(&g)) {
                (Format::Dot, Some(w)) => text(out, &weighted_dot(&g, &w))?,
                (Format::Dot, None) => text(out, &g.to_dot())?,
                _ => json_line(out, &verdict)?,
            }
            Ok(EXIT_OK)
        }
        Command::Weights { file, delta } => {
            let g = read_graph(file)?;
            match weight_function(&g, *delta) {
                Some(w) => json_line(out, &WeightsOutput::from(w))?,
                None => text(out, "none\n")?,
            }
            Ok(EXIT_OK)
        }
        Command::Facets { file, hull } => {
            let g = read_graph(file)?;
            let p = if *hull { BasePolytope::from_hull(&g) } else { build_polytope(&g) };
            let p = p.map_err(|e| input_error(e.to_string()))?;
            if cli.format == Format::Text {
                text(out, &facet_table(&p))?;
            } else {
                json_line(out, &p)?;
            }
            Ok(EXIT_OK)
        }
        Command::Glue { spec } => {
            let g = glue(spec)?;
            match cli.format {
                Format::Dot => text(out, &g.to_dot())?,
                _ => text(out, &g.to_edge_list())?,
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { file, delta } => {
            let g = read_graph(file)?;
            let delta = match delta {
                Some(d) => Some(*d),
                None => is_gorenstein(&g).map(|w| w.delta),
            };
            match delta.and_then(|d| decompose(&g, d)) {
                Some(t) if cli.format == Format::Dot => {
                    let h = t.replay().map_err(|e| input_error(e.to_string()))?;
                    text(out, &h.to_dot())?
                }
                Some(t) => json_line(out, &t)?,
                None => text(out, "none\n")?,
            }
            Ok(EXIT_OK)
        }
        Command::Census(b) => {
            let report = census_report((*b).into());
            emit(out, cli.format, &report, &report.to_table())?;
            Ok(status(&report.mismatches))
        }
        Command::Verify { suite, bounds, delta } => {
            let bounds: CensusBounds = (*bounds).into();
            match suite {
                Suite::Equivalence => {
                    let r = verify_equivalence(bounds);
                    emit(out, cli.format, &r, &r.to_table())?;
                    Ok(status(&r.mismatches))
                }
                Suite::Facets => {
                    let r = verify_facets(bounds);
                    emit(out, cli.format, &r, &r.to_table())?;
                    Ok(status(&r.mismatches))
                }
                Suite::Classification => {
                    let deltas: Vec<i64> = match delta {
                        Some(d) => vec![*d],
                        None => (2..=bounds.max_edges.max(3) as i64).collect(),
                    };
                    let reports: Vec<_> = deltas.iter().map(|&d| verify_classification(d, bounds)).collect();
                    let table: String = reports.iter().map(|r| r.to_table()).collect();
                    emit(out, cli.format, &reports, &table)?;
                    let failed = reports.iter().any(|r| !r.mismatches.is_empty());
                    Ok(if failed { EXIT_MISMATCH } else { EXIT_OK })
                }
            }
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, value: &T, table: &str) -> Result<(), Failure> {
    match format {
        Format::Text => text(out, table),
        _ => json_line(out, value),
    }
}

fn status(mismatches: &[String]) -> i32 {
    if mismatches.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

/// The verdict printed by `check`.
pub fn check(g: &Multigraph, oracle: bool, delta_max: Option<i64>) -> Result<CheckOutput, Failure> {
    let oracle = if oracle {
        let bound = delta_max.unwrap_or_else(|| default_delta_bound(g));
        if !g.is_two_connected() {
            None
        } else {
            let hit = gorenstein_oracle(g, bound).map_err(|e| input_error(e.to_string()))?;
            Some(OracleOutput {
                delta_max: bound,
                delta: hit.as_ref().map(|p| p.delta),
                point: hit.map(|p| p.coordinates),
            })
        }
    } else {
        None
    };
    if !g.is_two_connected() {
        return Ok(CheckOutput {
            gorenstein: false,
            delta: None,
            weights: None,
            good_flats: None,
            reason: Some("not 2-connected".into()),
            oracle,
        });
    }
    Ok(match is_gorenstein(g) {
        Some(w) => {
            let flats = good_flats(g).map_err(|e| input_error(e.to_string()))?;
            CheckOutput {
                gorenstein: true,
                delta: Some(w.delta),
                weights: Some(w.weights),
                good_flats: Some(flats.into_iter().map(|f| f.subset).collect()),
                reason: None,
                oracle,
            }
        }
        None => CheckOutput {
            gorenstein: false,
            delta: None,
            weights: None,
            good_flats: None,
            reason: Some("no delta satisfies the good-flat equations".into()),
            oracle,
        },
    })
}

/// Reads a gluing spec or a construction trace and builds the graph.
pub fn glue(path: &Path) -> Result<Multigraph, Failure> {
    let raw = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let parsed: GlueInput = serde_json::from_str(&raw).map_err(|_| {
        // Report the position from the stricter of the two shapes.
        match serde_json::from_str::<GlueFile>(&raw) {
            Err(e) => input_error(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())),
            Ok(_) => input_error(format!("{}: not a gluing spec or construction trace", path.display())),
        }
    })?;
    let failed = |e: gorenstein_core::ConstructionError| input_error(format!("precondition violated: {e}"));
    match parsed {
        GlueInput::Spec(s) => {
            let left = s.left.to_graph().map_err(|e| input_error(format!("left: {e}")))?;
            let right = s.right.to_graph().map_err(|e| input_error(format!("right: {e}")))?;
            let spec = GluingSpec {
                left: &left,
                left_class: s.left_class,
                right: &right,
                right_class: s.right_class,
                delta: s.delta,
                flip: s.flip,
            };
            Ok(delta_gluing(&spec).map_err(failed)?.graph)
        }
        GlueInput::Trace(t) => t.replay().map_err(failed),
    }
}

fn facet_table(p: &BasePolytope) -> String {
    let mut s = format!("dim {} in R^{}, {} vertices, {} facets\n", p.dim(), p.ambient_dim, p.vertices.len(), p.facets.len());
    for f in &p.facets {
        let kind = serde_json::to_string(&f.kind).unwrap_or_default();
        s.push_str(&format!(
            "{kind}  normal {:?} <= delta*{}  distance delta*{} - {:?}.x\n",
            f.normal, f.offset, f.reduced.constant, f.reduced.coefficients
        ));
    }
    s
}
