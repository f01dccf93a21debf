//! `adb`: command line front end for the annular decomposable Barnette
//! graph library. Commands read and write the JSON documents defined in
//! `adb::json`; every command defaults to standard input and standard
//! output so they compose in a pipe.
//!
//! Exit codes: 0 on success, 1 on a negative mathematical result (a failed
//! check, an inapplicable strategy, a failed verification), 2 on usage or
//! I/O errors. Failures print `{"error":...,"detail":...}` on standard
//! error.

use std::fmt::Display;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use adb::annular::{decompose, AnnularEmbedding, AnnulusKind};
use adb::construct::{generate_adbac, reduce_to_b0, ConstructionRecipe};
use adb::graph::PlanarCubicGraph;
use adb::hamilton::{mixed_strategy, pr_strategy, pyramid_strategy, ring_strategy, verify_hamiltonian};
use adb::json;
use adb::oracle::count_hamiltonian_cycles;

#[derive(Parser)]
#[command(name = "adb", version, about = "Annular decomposable Barnette graph tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Ring,
    Pyramid,
    Pr,
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from an annulus kind/size specification.
    Gen {
        /// Annulus kinds, innermost first, e.g. RRB.
        #[arg(long)]
        kinds: String,
        /// Faces per annulus, comma separated, e.g. 8,8,6.
        #[arg(long)]
        faces: String,
        /// Generator seed; generation is deterministic per seed.
        #[arg(long)]
        seed: u64,
        /// Output path for the graph document (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the construction recipe here.
        #[arg(long)]
        recipe: Option<PathBuf>,
    },
    /// Check the Barnette properties and print the report.
    Check {
        input: Option<PathBuf>,
    },
    /// Compute an annular decomposition and attach it to the graph document.
    Decompose {
        input: Option<PathBuf>,
        /// Inner face id.
        #[arg(long, requires = "outer", conflicts_with = "auto")]
        inner: Option<usize>,
        /// Outer face id.
        #[arg(long, requires = "inner", conflicts_with = "auto")]
        outer: Option<usize>,
        /// Try all face pairs in id order and keep the first that works.
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce a certified Hamiltonian cycle from a decomposed graph.
    Hamilton {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count all Hamiltonian cycles by exhaustive search (small graphs).
    Count {
        input: Option<PathBuf>,
    },
    /// Verify a cycle document against its graph.
    Verify {
        /// Graph document; omit it if the cycle document carries the graph.
        graph: Option<PathBuf>,
        /// Cycle document (default: stdin, or the first positional).
        cycle: Option<PathBuf>,
    },
    /// Reduce a decomposed graph to the cube; prints the rebuild recipe.
    Reduce {
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a decomposed graph as DOT or as a radial SVG drawing.
    Export {
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Cycle document whose grey faces are shaded.
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error already split into an exit code, a short machine name and a
/// human-readable detail.
struct Failure {
    code: u8,
    name: String,
    detail: String,
}

impl Failure {
    fn usage(err: impl Display) -> Self {
        Failure {
            code: 2,
            name: "Usage".into(),
            detail: err.to_string(),
        }
    }

    /// Negative mathematical result; the name is the error's variant name.
    fn math(err: impl std::fmt::Debug + Display) -> Self {
        let debug = format!("{err:?}");
        let name = debug
            .split(|c: char| c == '(' || c == ' ' || c == '{')
            .next()
            .unwrap_or("Error")
            .to_string();
        Failure {
            code: 1,
            name,
            detail: err.to_string(),
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout(), "{text}") {
                Ok(()) => Ok(()),
                // a closed pipe downstream is not our error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(Failure::usage(format!("cannot write stdout: {e}"))),
            }
        }
    }
}

fn parse_graph(text: &str) -> Result<(PlanarCubicGraph, Option<AnnularEmbedding>), Failure> {
    json::read_graph(text).map_err(|e| match e {
        json::JsonError::Parse(_) | json::JsonError::Format(_) => Failure::usage(e),
        other => Failure::math(other),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!(
                "{}",
                serde_json::json!({"error": f.name, "detail": f.detail})
            );
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Gen {
            kinds,
            faces,
            seed,
            out,
            recipe,
        } => {
            let kinds: Vec<AnnulusKind> = kinds
                .chars()
                .map(AnnulusKind::from_char)
                .collect::<Option<_>>()
                .ok_or_else(|| Failure::usage("kinds must be a string over R and B"))?;
            let faces: Vec<usize> = faces
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::usage(format!("bad face count: {e}")))?;
            let gen = generate_adbac(seed, &kinds, &faces).map_err(Failure::math)?;
            if let Some(path) = recipe {
                write_output(&Some(path), &json::write_recipe(&gen.recipe))?;
            }
            write_output(&out, &json::write_graph(&gen.graph, Some(&gen.embedding)))
        }
        Command::Check { input } => {
            let (g, _) = parse_graph(&read_input(&input)?)?;
            let report = g.check_barnette();
            write_output(
                &None,
                &serde_json::to_string(&report).expect("reports always serialize"),
            )?;
            if report.is_barnette() {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    name: "NotBarnette".into(),
                    detail: "one or more Barnette properties failed".into(),
                })
            }
        }
        Command::Decompose {
            input,
            inner,
            outer,
            auto,
            out,
        } => {
            let (g, _) = parse_graph(&read_input(&input)?)?;
            let emb = match (inner, outer, auto) {
                (Some(i), Some(e), false) => decompose(&g, i, e).map_err(Failure::math)?,
                (None, None, true) => auto_decompose(&g)?,
                _ => {
                    return Err(Failure::usage(
                        "pass either --inner and --outer, or --auto",
                    ))
                }
            };
            write_output(&out, &json::write_graph(&g, Some(&emb)))
        }
        Command::Hamilton {
            input,
            strategy,
            out,
        } => {
            let (g, emb) = parse_graph(&read_input(&input)?)?;
            let emb = emb.ok_or_else(|| {
                Failure::usage("the graph document has no decomposition; run decompose first")
            })?;
            let cert = match strategy {
                StrategyArg::Auto | StrategyArg::Mixed => {
                    mixed_strategy(&g, &emb).map_err(Failure::math)?
                }
                StrategyArg::Ring => ring_strategy(&g, &emb, None).map_err(Failure::math)?,
                StrategyArg::Pyramid => pyramid_strategy(&g, &emb).map_err(Failure::math)?,
                StrategyArg::Pr => {
                    let [h1, _, _] = pr_strategy(&g, &emb).map_err(Failure::math)?;
                    h1
                }
            };
            if !verify_hamiltonian(&g, &cert.vertices) {
                return Err(Failure {
                    code: 1,
                    name: "VerificationFailed".into(),
                    detail: "strategy produced a non-Hamiltonian cycle".into(),
                });
            }
            let doc = json::GraphDoc::with_embedding(&g, &emb);
            write_output(&out, &json::write_cycle(&cert, Some(&doc)))
        }
        Command::Count { input } => {
            let (g, _) = parse_graph(&read_input(&input)?)?;
            let n = count_hamiltonian_cycles(&g).map_err(Failure::math)?;
            write_output(&None, &serde_json::json!({ "count": n }).to_string())
        }
        Command::Verify { graph, cycle } => {
            let (g, cert) = match (&graph, &cycle) {
                (Some(_), Some(_)) => {
                    let (g, _) = parse_graph(&read_input(&graph)?)?;
                    let (cert, _) =
                        json::read_cycle(&read_input(&cycle)?).map_err(Failure::usage)?;
                    (g, cert)
                }
                // a single source: the cycle document must carry its graph
                (source, None) => {
                    let (cert, doc) =
                        json::read_cycle(&read_input(source)?).map_err(Failure::usage)?;
                    let doc = doc.ok_or_else(|| {
                        Failure::usage("cycle document carries no graph; pass one explicitly")
                    })?;
                    (doc.to_graph().map_err(Failure::usage)?, cert)
                }
                _ => unreachable!("clap orders positionals"),
            };
            if verify_hamiltonian(&g, &cert.vertices) {
                write_output(&None, "{\"verified\":true}")
            } else {
                Err(Failure {
                    code: 1,
                    name: "VerificationFailed".into(),
                    detail: "the vertex sequence is not a Hamiltonian cycle of the graph".into(),
                })
            }
        }
        Command::Reduce { input, out } => {
            let (g, emb) = parse_graph(&read_input(&input)?)?;
            let emb = emb.ok_or_else(|| {
                Failure::usage("the graph document has no decomposition; run decompose first")
            })?;
            let red = reduce_to_b0(&g, &emb).map_err(Failure::math)?;
            let recipe = ConstructionRecipe {
                seed: 0,
                kinds: Vec::new(),
                faces: Vec::new(),
                steps: red.replay,
            };
            write_output(&out, &json::write_recipe(&recipe))
        }
        Command::Export {
            input,
            format,
            cycle,
            out,
        } => {
            let (g, emb) = parse_graph(&read_input(&input)?)?;
            let grey: Vec<usize> = match &cycle {
                Some(_) => {
                    let (cert, _) =
                        json::read_cycle(&read_input(&cycle)?).map_err(Failure::usage)?;
                    cert.grey
                }
                None => Vec::new(),
            };
            let text = match format {
                ExportFormat::Dot => export_dot(&g),
                ExportFormat::Svg => {
                    let emb = emb.ok_or_else(|| {
                        Failure::usage(
                            "SVG export needs a decomposition; run decompose first",
                        )
                    })?;
                    export_svg(&g, &emb, &grey)
                }
            };
            write_output(&out, &text)
        }
    }
}

/// First face pair, in id order, that yields a decomposition.
fn auto_decompose(g: &PlanarCubicGraph) -> Result<AnnularEmbedding, Failure> {
    let n = g.faces().len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Ok(emb) = decompose(g, i, j) {
                return Ok(emb);
            }
        }
    }
    Err(Failure {
        code: 1,
        name: "NotAnnular".into(),
        detail: "no face pair yields an annular decomposition".into(),
    })
}

fn export_dot(g: &PlanarCubicGraph) -> String {
    let mut s = String::from("graph adb {\n");
    for v in 0..g.vertex_count() {
        s.push_str(&format!("  {v};\n"));
    }
    for (u, v) in g.edges() {
        s.push_str(&format!("  {u} -- {v};\n"));
    }
    s.push('}');
    s
}

/// Radial drawing on a fixed 1000 by 1000 canvas: the boundary cycles sit
/// on evenly spaced concentric circles, grey faces are filled, and the
/// inner face is filled when selected.
fn export_svg(g: &PlanarCubicGraph, emb: &AnnularEmbedding, grey: &[usize]) -> String {
    let n = g.vertex_count();
    let x = emb.depth();
    let (cx, cy) = (500.0f64, 500.0f64);
    let step = 400.0 / x as f64;

    // polar position per vertex: circle C_0 is the inner boundary of
    // annulus 1, circle C_k the outer boundary of annulus k
    let mut pos = vec![(0.0f64, 0.0f64); n];
    let mut place = |cycle: &[usize], radius: f64| {
        let m = cycle.len() as f64;
        for (i, &v) in cycle.iter().enumerate() {
            let a = std::f64::consts::TAU * i as f64 / m;
            pos[v] = (cx + radius * a.cos(), cy + radius * a.sin());
        }
    };
    place(&emb.annulus(1).inner, 100.0);
    for k in 1..=x {
        place(&emb.annulus(k).outer, 100.0 + step * k as f64);
    }

    let mut s = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" \
         viewBox=\"0 0 1000 1000\">\n<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n",
    );
    for &f in grey {
        if f == emb.outer_face {
            continue;
        }
        let pts: Vec<String> = g
            .face(f)
            .boundary
            .iter()
            .map(|&v| format!("{:.1},{:.1}", pos[v].0, pos[v].1))
            .collect();
        s.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#bbbbbb\" stroke=\"none\"/>\n",
            pts.join(" ")
        ));
    }
    for (u, v) in g.edges() {
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" \
             stroke=\"black\" stroke-width=\"1.5\"/>\n",
            pos[u].0, pos[u].1, pos[v].0, pos[v].1
        ));
    }
    for v in 0..n {
        s.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"black\"/>\n",
            pos[v].0, pos[v].1
        ));
    }
    s.push_str("</svg>");
    s
}
