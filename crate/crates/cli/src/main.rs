use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use vguard::io::{
    format_report, generate_polygon, parse_instance, parse_report, render_svg, serialize_instance, GuardReport, Style,
    SvgLayers,
};
use vguard::oracle::{optimal_vertex_guards, verify_coverage, Witness};
use vguard::partition::window_partition;
use vguard::pipeline::{guard_polygon, prune_redundant, PipelineOptions};
use vguard::properties::{run_property_suite, Check, Corpus, CorpusConfig};
use vguard::{Mode, Polygon};

#[derive(Parser)]
#[command(name = "guard", version, about = "Vertex guards for simple polygons")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layer {
    Windows,
    Visibility,
}

#[derive(Subcommand)]
enum Cmd {
    /// Place guards and write a guard report.
    Run {
        /// What must be seen: vertices, boundary or interior.
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Extra SVG layers.
        #[arg(long, value_enum, value_delimiter = ',')]
        layer: Vec<Layer>,
        #[arg(long, default_value_t = 0)]
        start_vertex: usize,
        /// Drop guards whose removal keeps coverage.
        #[arg(long)]
        redundancy_prune: bool,
        /// Also compute the exact optimum and the ratio.
        #[arg(long)]
        with_opt: bool,
    },
    /// Print the window partition.
    Partition {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        start_vertex: usize,
    },
    /// Generate an instance file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        style: Style,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a guard set; exits 1 when something is left unseen.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// A guard report or a whitespace-separated list of vertex indices.
        #[arg(long)]
        guards: PathBuf,
        /// What must be seen: vertices, boundary or interior.
        #[arg(long)]
        mode: Mode,
    },
    /// Run the property suite over a generated corpus.
    Proptest {
        #[arg(long)]
        corpus_config: PathBuf,
    },
}

/// Errors in what the user handed us; these exit with status 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| InputError(e).into())
}

fn read(path: &Path) -> Result<String> {
    input(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn load_polygon(path: &Path) -> Result<Polygon> {
    let text = read(path)?;
    input(parse_instance(&text).with_context(|| format!("parsing {}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_guards(text: &str, p: &Polygon) -> Result<Vec<usize>> {
    let guards: Vec<usize> = if text.starts_with(vguard::io::REPORT_HEADER) {
        parse_report(text)?.guards.into_iter().map(|(g, _)| g).collect()
    } else {
        text.split_whitespace()
            .map(|w| w.parse().map_err(|_| anyhow!("bad guard index {w:?}")))
            .collect::<Result<_>>()?
    };
    if let Some(g) = guards.iter().find(|&&g| g >= p.n()) {
        return Err(anyhow!("guard {g} is not a vertex of a {}-gon", p.n()));
    }
    Ok(guards)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Run {
            mode,
            input: path,
            output,
            svg,
            layer,
            start_vertex,
            redundancy_prune,
            with_opt,
        } => {
            let p = load_polygon(&path)?;
            if start_vertex >= p.n() {
                return input(Err(anyhow!("start vertex {start_vertex} out of range")));
            }
            let opts = PipelineOptions {
                start_vertex,
                ..Default::default()
            };
            let run = guard_polygon(&p, mode, opts)?;
            let opt = if with_opt {
                match optimal_vertex_guards(&p, mode, None) {
                    Ok((k, _)) => Some(k),
                    Err(e) => {
                        eprintln!("warning: no optimum: {e}");
                        None
                    }
                }
            } else {
                None
            };
            let mut report = GuardReport::from_run(&p, &run, opt);
            if redundancy_prune {
                let keep = prune_redundant(&p, &run.guards(), mode);
                report.guards.retain(|(g, _)| keep.contains(g));
                report.placements.retain(|pl| keep.contains(&pl.guard));
                report.covered = verify_coverage(&p, &keep, mode).covered;
            }
            let text = format_report(&report);
            match output {
                Some(o) => write(&o, &text)?,
                None => print!("{text}"),
            }
            if let Some(s) = svg {
                let layers = SvgLayers {
                    windows: layer.iter().any(|l| matches!(l, Layer::Windows)).then_some(&run.tree),
                    visibility: layer.iter().any(|l| matches!(l, Layer::Visibility)),
                };
                let guards: Vec<usize> = report.guards.iter().map(|(g, _)| *g).collect();
                write(&s, &render_svg(&p, &guards, layers))?;
            }
            Ok(if report.covered {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Partition {
            input: path,
            svg,
            start_vertex,
        } => {
            let p = load_polygon(&path)?;
            if start_vertex >= p.n() {
                return input(Err(anyhow!("start vertex {start_vertex} out of range")));
            }
            let tree = window_partition(&p, start_vertex);
            println!(
                "levels {}",
                tree.level_sizes()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            for w in &tree.windows {
                let parent = w.parent.map_or("-".to_string(), |q| {
                    let id = tree.windows[q].id;
                    format!("{}.{}", id.0, id.1)
                });
                println!(
                    "window {}.{} parent {parent} corners {} area {}",
                    w.id.0,
                    w.id.1,
                    w.region.len(),
                    vguard::geom_kernel::format_decimal(&(w.area2() / vguard::geom_kernel::rat(2)), 6)
                );
            }
            if let Some(s) = svg {
                let layers = SvgLayers {
                    windows: Some(&tree),
                    visibility: false,
                };
                write(&s, &render_svg(&p, &[start_vertex], layers))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { n, seed, style, out } => {
            let p = input(generate_polygon(n, seed, style).map_err(Into::into))?;
            write(&out, &serialize_instance(&p))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            input: path,
            guards,
            mode,
        } => {
            let p = load_polygon(&path)?;
            let g = input(parse_guards(&read(&guards)?, &p))?;
            let report = verify_coverage(&p, &g, mode);
            if report.covered {
                println!("covered");
                return Ok(ExitCode::SUCCESS);
            }
            println!("uncovered {}", report.witnesses.len());
            for w in &report.witnesses {
                match w {
                    Witness::Vertex(v) => println!("vertex {v}"),
                    Witness::BoundaryInterval { edge, from, to } => println!("boundary {edge} {from} {to}"),
                    Witness::Cell(q) => println!("cell {q}"),
                }
            }
            Ok(ExitCode::from(1))
        }
        Cmd::Proptest { corpus_config } => {
            let cfg = input(CorpusConfig::from_toml(&read(&corpus_config)?).map_err(Into::into))?;
            let corpus = input(Corpus::generate(&cfg).map_err(Into::into))?;
            let report = run_property_suite(&corpus, &cfg, &Check::ALL);
            print!("{}", report.format());
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<InputError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
