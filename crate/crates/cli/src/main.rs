//! `systole`: command-line front end for systole-core.
//!
//! Every command prints a deterministic report on stdout (text or JSON) and
//! the elapsed wall-clock time on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use systole_core::cutting::cut_curves;
use systole_core::essential_arcs::{build_arc_tables, query_arc, shortest_essential_arc_on};
use systole_core::{format, format_rational, oracle, systoles, Error, HalfEdge, Surface};

#[derive(Parser)]
#[command(name = "systole", version, about = "Systoles and shortest essential arcs on combinatorial surfaces")]
struct Cli {
    /// Surface file in the `surface / rot / w / perforate` text format.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Worker threads for internal parallelism (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the surface and print its genus and number of boundaries.
    Validate,
    /// Compute the k-th systole.
    Systole {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        k: u8,
    },
    /// Shortest essential arc between two vertices of a boundary face.
    Arc {
        #[arg(long)]
        boundary: usize,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
        pair: Vec<usize>,
    },
    /// Shortest essential arcs between all pairs of corners of a boundary face.
    ArcsAll {
        #[arg(long)]
        boundary: usize,
    },
    /// Length spectrum up to a bound (default: three times the systole).
    Spectrum {
        #[arg(long)]
        bound: Option<String>,
        /// Search states explored before giving up with exit code 4.
        #[arg(long, default_value_t = oracle::DEFAULT_STATE_CAP)]
        max_states: usize,
    },
    /// Cut the surface along the curves of a curve file.
    Cut {
        #[arg(long)]
        curves: PathBuf,
    },
}

/// Failure categories, each with its own exit code.
enum Failure {
    Input(String),
    Nonexistent(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Nonexistent(_) => 3,
            Failure::Cap(_) => 4,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Nonexistent(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Nonexistent(_) => Failure::Nonexistent(e.to_string()),
            Error::ResourceCap(_) => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Command output: JSON payload, text lines, and whether the answer is a
/// topological nonexistence.
struct Outcome {
    json: Value,
    text: Vec<String>,
    nonexistent: bool,
}

impl Outcome {
    fn found(json: Value, text: Vec<String>) -> Outcome {
        Outcome { json, text, nonexistent: false }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn walk_ids(hs: &[HalfEdge]) -> Vec<usize> {
    hs.iter().map(|h| h.0).collect()
}

fn walk_text(hs: &[HalfEdge]) -> String {
    hs.iter().map(|h| h.0.to_string()).collect::<Vec<_>>().join(" ")
}

fn validate(s: &Surface) -> Outcome {
    let (g, b) = s.genus_and_boundaries();
    Outcome::found(
        json!({"vertices": s.n_vertices(), "edges": s.n_edges(), "faces": s.n_faces(), "perforated": s.perforated_faces(), "g": g, "b": b}),
        vec![format!("n_V={} n_E={} n_F={}", s.n_vertices(), s.n_edges(), s.n_faces()), format!("g={g} b={b}")],
    )
}

fn systole(s: &Surface, k: u8) -> Result<Outcome, Failure> {
    let r = systoles::systoles(s, k as usize)?.pop().expect("k reports");
    let len = format_rational(&r.length);
    let crossings = r.crossings.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    Ok(Outcome::found(
        json!({
            "k": r.k, "length": len, "case": r.case.name(), "walk": walk_ids(&r.walk.half_edges),
            "self_crossings": r.self_crossings, "crossings": r.crossings,
        }),
        vec![
            format!("k={} length={len} case={}", r.k, r.case),
            format!("walk {}", walk_text(&r.walk.half_edges)),
            format!("self-crossings={} crossings=[{crossings}]", r.self_crossings),
        ],
    ))
}

fn arc(s: &Surface, boundary: usize, x: usize, y: usize) -> Result<Outcome, Failure> {
    Ok(match shortest_essential_arc_on(s, x, y, boundary)? {
        Some(a) => {
            let len = format_rational(&a.length(s));
            Outcome::found(
                json!({"boundary": boundary, "x": x, "y": y, "length": len, "walk": walk_ids(&a.walk.half_edges)}),
                vec![format!("pair {x} {y} length={len}"), format!("walk {}", walk_text(&a.walk.half_edges))],
            )
        }
        None => Outcome {
            json: json!({"boundary": boundary, "x": x, "y": y, "length": Value::Null}),
            text: vec![format!("pair {x} {y} none")],
            nonexistent: true,
        },
    })
}

fn arcs_all(s: &Surface, boundary: usize) -> Result<Outcome, Failure> {
    let t = build_arc_tables(s, boundary)?;
    let mut rows = Vec::new();
    let mut text = vec![format!("boundary {boundary} corners={}", t.d())];
    for i in 0..t.d() {
        for j in (i + 1)..t.d() {
            let (x, y) = (t.vertex(s, i), t.vertex(s, j));
            if x == y {
                continue;
            }
            match query_arc(s, &t, i, j)? {
                Some(a) => {
                    let len = format_rational(&a.length(s));
                    text.push(format!("{i} {j} vertices {x} {y} length={len} walk {}", walk_text(&a.walk.half_edges)));
                    rows.push(json!({"i": i, "j": j, "x": x, "y": y, "length": len, "walk": walk_ids(&a.walk.half_edges)}));
                }
                None => {
                    text.push(format!("{i} {j} vertices {x} {y} none"));
                    rows.push(json!({"i": i, "j": j, "x": x, "y": y, "length": Value::Null}));
                }
            }
        }
    }
    Ok(Outcome::found(json!({"boundary": boundary, "corners": t.d(), "pairs": rows}), text))
}

fn spectrum(s: &Surface, bound: Option<&str>, cap: usize) -> Result<Outcome, Failure> {
    let bound = match bound {
        Some(b) => format::parse_rational(b).ok_or_else(|| Failure::Input(format!("invalid bound `{b}`, expected p/q")))?,
        None => oracle::default_bound(s)?.ok_or_else(|| Failure::Nonexistent("no non-contractible closed curve".into()))?,
    };
    let entries = oracle::enumerate_spectrum_capped(s, &bound, cap)?;
    let values: Vec<String> = oracle::spectrum_values(s, &entries).iter().map(format_rational).collect();
    let mut text = vec![format!("bound={}", format_rational(&bound)), format!("values {}", values.join(" "))];
    let mut rows = Vec::new();
    for (e, v) in entries.iter().zip(&values) {
        let key = serde_json::to_value(&e.key).expect("serializable key");
        text.push(format!("{v} key {key} walk {}", walk_text(&e.walk.half_edges)));
        rows.push(json!({"length": v, "key": key, "walk": walk_ids(&e.walk.half_edges)}));
    }
    Ok(Outcome::found(json!({"bound": format_rational(&bound), "values": values, "classes": rows}), text))
}

fn cut(s: &Surface, curves_path: &Path) -> Result<Outcome, Failure> {
    let curves = format::parse_curves(s, &read(curves_path)?)?;
    let cut = cut_curves(s, &curves)?;
    let mut text = vec![format!("pieces={}", cut.n_pieces())];
    let mut rows = Vec::new();
    for (i, p) in cut.pieces.iter().enumerate() {
        let (g, b) = p.surface.genus_and_boundaries();
        text.push(format!("piece {i} g={g} b={b} n_V={} n_E={}", p.surface.n_vertices(), p.surface.n_edges()));
        rows.push(json!({"g": g, "b": b, "surface": format::write_surface(&p.surface)}));
    }
    Ok(Outcome::found(json!({"pieces": rows}), text))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Systole { .. } => "systole",
        Command::Arc { .. } => "arc",
        Command::ArcsAll { .. } => "arcs-all",
        Command::Spectrum { .. } => "spectrum",
        Command::Cut { .. } => "cut",
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let path = cli.input.as_deref().ok_or_else(|| Failure::Input("--input <path> is required".into()))?;
    let s = format::parse_surface(&read(path)?)?;
    match &cli.command {
        Command::Validate => Ok(validate(&s)),
        Command::Systole { k } => systole(&s, *k),
        Command::Arc { boundary, pair } => arc(&s, *boundary, pair[0], pair[1]),
        Command::ArcsAll { boundary } => arcs_all(&s, *boundary),
        Command::Spectrum { bound, max_states } => spectrum(&s, bound.as_deref(), *max_states),
        Command::Cut { curves } => cut(&s, curves),
    }
}

fn digest(path: Option<&Path>) -> String {
    let bytes = path.and_then(|p| std::fs::read(p).ok()).unwrap_or_default();
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("time {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    let name = command_name(&cli.command);
    let sha = digest(cli.input.as_deref());
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            if cli.format == OutputFormat::Json {
                println!("{}", json!({"command": name, "input_sha256": sha, "error": f.message(), "exit_code": f.code()}));
            }
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    match cli.format {
        OutputFormat::Json => {
            let report = json!({"command": name, "input_sha256": sha, "outputs": outcome.json});
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
        }
        OutputFormat::Text => {
            println!("command {name}");
            println!("input-sha256 {sha}");
            for line in &outcome.text {
                println!("{line}");
            }
        }
    }
    ExitCode::from(if outcome.nonexistent { 3 } else { 0 })
}
