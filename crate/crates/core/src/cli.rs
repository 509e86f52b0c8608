//! Command-line front end. Every command prints one JSON document.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::canvas::{validate_canvas, CanvasJson, Color, ListAssignment};
use crate::genfuzz::{random_canvas, run_property_suite, GeneratorProfile, ProfileId};
use crate::governments::{classify, find_confederacy, Classification, GovernmentKind};
use crate::harmonica::{
    decide_with_certificate, verify_coloring_harmonica, DecideError, Decision, HarmonicaCertificate,
};
use crate::plane_graph::{PlaneGraph, VertexId};
use crate::reductions::democratic_reduction;
use crate::solver::{extension_set, Coloring, EdgeColoringSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OBSTRUCTED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "harmonica",
    version,
    about = "List colouring of plane graphs with certificates"
)]
struct Cli {
    /// Colours allowed in input lists and drawn by generators are 1..=N.
    #[arg(long, global = true)]
    palette: Option<Color>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide colourability; exit 0 with a colouring or 2 with a certificate.
    Decide(Terminals),
    /// Like decide, writing the witness alone.
    Certify {
        #[command(flatten)]
        terminals: Terminals,
        /// Write the witness here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a colouring or certificate file against a canvas.
    VerifyCert {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        cert: PathBuf,
    },
    /// Colourings of one boundary edge extending a set on another.
    Phi {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        p: (u32, u32),
        #[arg(long, value_parser = parse_pair)]
        pprime: (u32, u32),
        /// JSON array of colour pairs, e.g. `[[1,2],[1,3]]`.
        #[arg(long)]
        colorings: String,
    },
    /// Democratic reduction of a canvas along a boundary path.
    Reduce {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<VertexId>,
        #[arg(long, value_parser = parse_pair)]
        l0: (u32, u32),
        #[arg(long)]
        center: VertexId,
    },
    /// Print one generated instance.
    Gen {
        #[arg(long)]
        profile: ProfileId,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the property suite of a profile.
    Fuzz {
        #[arg(long)]
        profile: ProfileId,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write each counterexample to its own canvas file here.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct Terminals {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    p1: VertexId,
    #[arg(long)]
    p2: VertexId,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.trim().parse().map_err(|e| format!("{a}: {e}"))?,
            b.trim().parse().map_err(|e| format!("{b}: {e}"))?,
        )),
        _ => Err(format!("expected two comma-separated values, got {s:?}")),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("hypotheses violated")]
    Hypotheses(Vec<String>),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Hypotheses(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY_FAILED,
        }
    }

    fn payload(&self) -> Value {
        match self {
            CliError::Hypotheses(clauses) => json!({"error": self.to_string(), "clauses": clauses}),
            _ => json!({"error": self.to_string()}),
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Stable output: keys sorted because `Value` objects are ordered maps.
fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

struct Loaded {
    graph: PlaneGraph,
    json: CanvasJson,
    lists: ListAssignment,
}

fn load(path: &Path, palette: Option<Color>) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let json: CanvasJson = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let graph = json.graph().map_err(usage)?;
    let lists = json.list_assignment();
    if let Some(n) = palette {
        if let Some((v, c)) = lists
            .iter()
            .find_map(|(v, l)| l.iter().find(|&&c| c < 1 || c > n).map(|&c| (v, c)))
        {
            return Err(usage(format!(
                "colour {c} at vertex {v} is outside the palette 1..={n}"
            )));
        }
    }
    Ok(Loaded { graph, json, lists })
}

fn decide(t: &Terminals, palette: Option<Color>) -> Result<Decision, CliError> {
    let c = load(&t.input, palette)?;
    decide_with_certificate(&c.graph, &c.lists, t.p1, t.p2).map_err(|e| match e {
        DecideError::HypothesesViolated(clauses) => CliError::Hypotheses(clauses),
        DecideError::Solver(e) => usage(e),
        DecideError::Disagreement(d) => CliError::Verification(d),
    })
}

fn witness(d: &Decision) -> (i32, Value) {
    match d {
        Decision::Colorable(c) => (EXIT_OK, json!({"coloring": c})),
        Decision::Obstructed(h) => (EXIT_OBSTRUCTED, to_value(h)),
    }
}

fn government_json(set: &EdgeColoringSet) -> Value {
    let members: Vec<[Color; 2]> = set.members().iter().map(|&(a, b)| [a, b]).collect();
    let kind = match classify(set) {
        Ok(Classification::Government(g)) => match g.kind() {
            GovernmentKind::Dictatorship { dictator, color, .. } => {
                json!({"type": "dictatorship", "dictator": dictator, "color": color})
            }
            GovernmentKind::Democracy { .. } => json!({"type": "democracy"}),
        },
        _ => match find_confederacy(set) {
            Some(_) => json!({"type": "contains_confederacy"}),
            None => json!({"type": "neither"}),
        },
    };
    json!({"path": [set.path().0, set.path().1], "members": members, "classification": kind})
}

fn execute(cli: Cli) -> Result<(i32, Value), CliError> {
    let palette = cli.palette;
    match cli.command {
        Command::Decide(t) => {
            let d = decide(&t, palette)?;
            let (code, w) = witness(&d);
            let verdict = if d.is_colorable() { "colorable" } else { "obstructed" };
            let mut out = json!({"verdict": verdict});
            if let (Value::Object(o), Value::Object(w)) = (&mut out, w) {
                match d {
                    Decision::Colorable(_) => o.extend(w),
                    Decision::Obstructed(_) => {
                        o.insert("certificate".into(), Value::Object(w));
                    }
                }
            }
            Ok((code, out))
        }
        Command::Certify { terminals, output } => {
            let d = decide(&terminals, palette)?;
            let (code, w) = witness(&d);
            match output {
                Some(path) => {
                    let text = serde_json::to_string_pretty(&w).expect("json");
                    fs::write(&path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    Ok((code, json!({"written": path.display().to_string()})))
                }
                None => Ok((code, w)),
            }
        }
        Command::VerifyCert { input, cert } => {
            let c = load(&input, palette)?;
            let text = fs::read_to_string(&cert).map_err(|e| usage(format!("{}: {e}", cert.display())))?;
            let raw: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", cert.display())))?;
            if let Some(col) = raw.get("coloring") {
                let col: Coloring = serde_json::from_value(col.clone()).map_err(usage)?;
                let covers = c.graph.vertices().all(|v| col.get(v).is_some());
                if covers && col.is_proper_for(&c.graph, &c.lists) {
                    Ok((EXIT_OK, json!({"valid": true, "kind": "coloring"})))
                } else {
                    Err(CliError::Verification(
                        "not a proper list colouring of the whole graph".into(),
                    ))
                }
            } else {
                let h: HarmonicaCertificate = serde_json::from_value(raw).map_err(usage)?;
                match verify_coloring_harmonica(&c.graph, &c.lists, &h, h.origin, h.to) {
                    Ok(()) => Ok((EXIT_OBSTRUCTED, json!({"valid": true, "kind": "harmonica"}))),
                    Err(f) => Err(CliError::Verification(f.to_string())),
                }
            }
        }
        Command::Phi {
            input,
            p,
            pprime,
            colorings,
        } => {
            let c = load(&input, palette)?;
            let pairs: Vec<(Color, Color)> = serde_json::from_str::<Vec<[Color; 2]>>(&colorings)
                .map_err(|e| usage(format!("--colorings: {e}")))?
                .into_iter()
                .map(|[a, b]| (a, b))
                .collect();
            let set = EdgeColoringSet::new(p, pairs).map_err(usage)?;
            let canvas = validate_canvas(c.graph, c.json.precolored(), c.lists)
                .map_err(|v| CliError::Hypotheses(v.iter().map(|x| x.to_string()).collect()))?;
            let out = extension_set(&canvas, p, &set, pprime).map_err(usage)?;
            Ok((
                EXIT_OK,
                json!({"from": government_json(&set), "phi": government_json(&out)}),
            ))
        }
        Command::Reduce {
            input,
            path,
            l0,
            center,
        } => {
            let c = load(&input, palette)?;
            let canvas = validate_canvas(c.graph, c.json.precolored(), c.lists)
                .map_err(|v| CliError::Hypotheses(v.iter().map(|x| x.to_string()).collect()))?;
            let r = democratic_reduction(&canvas, &path, [l0.0, l0.1], center).map_err(usage)?;
            Ok((
                EXIT_OK,
                json!({"canvas": CanvasJson::from(r.reduced()), "report": r.report()}),
            ))
        }
        Command::Gen { profile, seed } => {
            let mut p = GeneratorProfile::new(profile, seed);
            if let Some(n) = palette {
                p.palette = n;
            }
            let inst = random_canvas(&p).map_err(usage)?;
            let mut out = to_value(&CanvasJson::from(&inst.canvas));
            if let Value::Object(o) = &mut out {
                o.insert("designation".into(), to_value(&inst.designation));
                o.insert("profile".into(), to_value(&inst.profile));
            }
            Ok((EXIT_OK, out))
        }
        Command::Fuzz {
            profile,
            trials,
            seed,
            dump_dir,
        } => {
            let mut p = GeneratorProfile::new(profile, seed);
            if let Some(n) = palette {
                p.palette = n;
            }
            let report = run_property_suite(&[p], trials, seed);
            if let Some(dir) = dump_dir {
                fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                for cx in &report.counterexamples {
                    let path = dir.join(format!(
                        "{}-{}-{}.json",
                        cx.profile,
                        cx.trial,
                        cx.property.replace('/', "_")
                    ));
                    let text = serde_json::to_string_pretty(&to_value(cx)).expect("json");
                    fs::write(&path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
                }
            }
            let code = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            Ok((code, to_value(&report)))
        }
    }
}

/// Parses `args` (program name first), runs the command and writes its JSON
/// to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (code, value) = match execute(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            (e.code(), e.payload())
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("json");
    let _ = writeln!(out, "{text}");
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("3, 4"), Ok((3, 4)));
        assert!(parse_pair("3").is_err());
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        let mut out = Vec::new();
        assert_eq!(run(["harmonica", "decide", "--p1", "1"], &mut out), EXIT_USAGE);
        assert_eq!(run(["harmonica", "fuzz", "--profile", "nope"], &mut out), EXIT_USAGE);
    }
}
