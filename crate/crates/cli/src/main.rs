use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use homlab::scan::{emit_report_to_path, write_replays, ListSeeds, Replay};
use homlab::{
    build_named, check_local_lemma, emit_report, hom, lemmas::parse_lemma_instance,
    model::parse_model_spec, random_instance, run_scan, search_counterexample,
    toy::reproduce_toy_c6_with, ColorSet, CompareConfig, EnumOptions, Graph, GraphFamilySpec,
    GraphSource, IneqReport, ModelSource, RandomKind, ReportFormat, ScanIneq, ScanJob, SearchJob,
    VertexConstraint,
};

/// Exact homomorphism counts and inequality checks on small graphs.
#[derive(Parser)]
#[command(name = "homlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// json, csv or text
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Operand size cap, in bits, for the exact comparison path.
    #[arg(long, global = true, env = "HOMLAB_BITCAP")]
    bitcap: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Exact (weighted) homomorphism count.
    Count {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        model: String,
        /// Per-vertex color lists, e.g. "0,2;0,1;1,2", or a file holding them.
        #[arg(long)]
        lists: Option<String>,
    },
    /// Check one inequality instance.
    Verify {
        #[arg(long, required_unless_present = "replay")]
        ineq: Option<String>,
        #[arg(long, required_unless_present = "replay")]
        graph: Option<String>,
        #[arg(long, required_unless_present = "replay")]
        model: Option<String>,
        #[arg(long)]
        lists: Option<String>,
        /// Replay file written by `scan` or `search`.
        #[arg(long, conflicts_with_all = ["ineq", "graph", "model", "lists"])]
        replay: Option<PathBuf>,
    },
    /// Check an inequality over a graph × model grid.
    Scan {
        #[command(flatten)]
        grid: Grid,
        /// Write replay files for findings, to `--replays` or `./findings`.
        #[arg(long)]
        finding_mode: bool,
    },
    /// Look for violations; writes replay files for each one found.
    Search {
        #[command(flatten)]
        grid: Grid,
    },
    /// Check a local lemma instance.
    Lemma {
        /// JSON instance file.
        file: Option<PathBuf>,
        /// Draw a random instance of this lemma instead.
        #[arg(long, conflicts_with = "file")]
        random: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Step-by-step list-coloring calculation on the 6-cycle.
    ToyC6,
}

#[derive(Args)]
struct Grid {
    #[arg(long)]
    ineq: String,
    /// Named graph, graph6 string or file; repeatable.
    #[arg(long)]
    graph: Vec<String>,
    /// Enumerate all graphs up to this many vertices.
    #[arg(long, conflicts_with = "graph")]
    max_vertices: Option<usize>,
    #[arg(long, default_value_t = 1)]
    min_vertices: usize,
    #[arg(long)]
    connected: bool,
    #[arg(long)]
    no_isolated: bool,
    #[arg(long)]
    triangle_free: bool,
    /// Keep labeled copies of isomorphic graphs.
    #[arg(long)]
    labeled: bool,
    /// Model spec or JSON file; repeatable.
    #[arg(long)]
    model: Vec<String>,
    /// Every K_q^ell with q up to this value.
    #[arg(long)]
    complete_looped: Option<usize>,
    /// Random model family: general, psd or antiferro-2spin.
    #[arg(long)]
    random: Option<String>,
    /// Color counts for random models, `a..b` (inclusive).
    #[arg(long, default_value = "2..3")]
    q: String,
    /// Random model seeds, `a..b` (exclusive) or a count.
    #[arg(long, default_value = "0..20")]
    seeds: String,
    /// Random list seeds, `a..b` (exclusive) or a count.
    #[arg(long)]
    lists: Option<String>,
    /// Directory for replay files of findings.
    #[arg(long)]
    replays: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = &cli.common;
    let format = ReportFormat::parse(&common.format)?;
    let cfg = match common.bitcap {
        Some(cap) => CompareConfig::with_bitcap(cap),
        None => CompareConfig::default(),
    };
    match cli.command {
        Command::Count {
            graph,
            model,
            lists,
        } => {
            let g = load_graph(&graph)?;
            let m = parse_model_spec(&model)?;
            let constraints = lists
                .map(|l| -> Result<Vec<VertexConstraint>> {
                    let sets = parse_lists(&l, g.n())?;
                    Ok(sets
                        .into_iter()
                        .map(|s| VertexConstraint::from_set(m.q(), s))
                        .collect())
                })
                .transpose()?;
            let count = hom(&g, &m, constraints.as_deref())?;
            let text = match format {
                ReportFormat::Json => serde_json::json!({ "count": count.to_string() }).to_string(),
                _ => count.to_string(),
            };
            output(common, &format!("{text}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            ineq,
            graph,
            model,
            lists,
            replay,
        } => {
            let report = match replay {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let replay: Replay = serde_json::from_str(&text)?;
                    replay.run(&cfg)?
                }
                None => {
                    let ineq = ScanIneq::parse(ineq.as_deref().unwrap_or_default())?;
                    let g = load_graph(graph.as_deref().unwrap_or_default())?;
                    let m = parse_model_spec(model.as_deref().unwrap_or_default())?;
                    let lists = lists.map(|l| parse_lists(&l, g.n())).transpose()?;
                    homlab::scan::check_instance(ineq, &g, &m, lists.as_deref(), &cfg)?
                }
            };
            emit_reports(common, format, std::slice::from_ref(&report))?;
            Ok(exit_for(&[report]))
        }
        Command::Scan { grid, finding_mode } => {
            let mut job = ScanJob::new(
                ScanIneq::parse(&grid.ineq)?,
                graph_source(&grid)?,
                model_sources(&grid)?,
            );
            job.lists = grid.lists.as_deref().map(parse_seeds).transpose()?;
            job.jobs = common.jobs;
            job.finding_mode = finding_mode;
            job.out = common.out.clone();
            job.bitcap = common.bitcap;
            let summary = run_scan(&job)?;
            let h = &summary.histogram;
            log::info!(
                "{} instances: {} holds, {} equality, {} violated, {} undecided, {} errors",
                summary.instances,
                h.holds,
                h.equality,
                h.violated,
                h.undecided,
                summary.errors.len()
            );
            match &common.out {
                Some(path) => emit_report_to_path(&summary, format, path)?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    emit_report(&summary, format, &mut stdout)?;
                    stdout.flush()?;
                }
            }
            let dir = grid
                .replays
                .clone()
                .or_else(|| finding_mode.then(|| PathBuf::from("findings")));
            if let Some(dir) = dir.filter(|_| !summary.findings.is_empty()) {
                for p in write_replays(&summary.findings, &dir)? {
                    log::info!("wrote {}", p.display());
                }
            }
            Ok(if summary.findings.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Search { grid } => {
            let job = SearchJob {
                ineq: ScanIneq::parse(&grid.ineq)?,
                graphs: graph_source(&grid)?,
                models: model_sources(&grid)?,
                lists: grid.lists.as_deref().map(parse_seeds).transpose()?,
                jobs: common.jobs,
                bitcap: common.bitcap,
            };
            let findings = search_counterexample(&job)?;
            log::info!("{} findings", findings.len());
            if let Some(dir) = &grid.replays {
                for p in write_replays(&findings, dir)? {
                    log::info!("wrote {}", p.display());
                }
            }
            let reports: Vec<IneqReport> = findings.into_iter().map(|f| f.report).collect();
            emit_reports(common, format, &reports)?;
            Ok(if reports.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Lemma { file, random, seed } => {
            let inst = match (file, random) {
                (Some(path), _) => parse_lemma_instance(
                    &std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?,
                )?,
                (None, Some(id)) => random_instance(&id, seed)?,
                (None, None) => bail!("give a lemma instance file or --random <id>"),
            };
            let report = check_local_lemma(&inst, &cfg)?;
            emit_reports(common, format, std::slice::from_ref(&report))?;
            Ok(exit_for(&[report]))
        }
        Command::ToyC6 => {
            let reports = reproduce_toy_c6_with(&cfg)?;
            emit_reports(common, format, &reports)?;
            Ok(exit_for(&reports))
        }
    }
}

fn exit_for(reports: &[IneqReport]) -> ExitCode {
    if reports.iter().all(IneqReport::is_ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn output(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn emit_reports(common: &Common, format: ReportFormat, reports: &[IneqReport]) -> Result<()> {
    let text = match format {
        ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(reports)?),
        ReportFormat::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
        ReportFormat::Csv => {
            let mut w = csv_line(&[
                "ineq",
                "instance",
                "lhs",
                "rhs",
                "verdict",
                "exact",
                "slack_log10",
            ]);
            for r in reports {
                let slack = r.slack_log10.map(|s| s.to_string()).unwrap_or_default();
                w.push_str(&csv_line(&[
                    &r.ineq,
                    &r.instance,
                    &r.lhs.to_string(),
                    &r.rhs.to_string(),
                    r.verdict.name(),
                    &r.exact.to_string(),
                    &slack,
                ]));
            }
            w
        }
    };
    output(common, &text)
}

fn csv_line(fields: &[&str]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        })
        .collect();
    format!("{}\n", quoted.join(","))
}

/// Named family, file (edge list, or graph6 when ending in `.g6`), or a
/// graph6 string.
fn load_graph(s: &str) -> Result<Graph> {
    if let Ok(spec) = GraphFamilySpec::parse(s) {
        return Ok(build_named(&spec)?);
    }
    let path = Path::new(s);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return Ok(if path.extension().is_some_and(|e| e == "g6") {
            Graph::parse_graph6(text.lines().next().unwrap_or(""))?
        } else {
            Graph::parse_edge_list(&text)?
        });
    }
    Graph::parse_graph6(s).map_err(|_| anyhow!("not a graph name, file or graph6 string: {s:?}"))
}

/// `"0,2;0,1;1,2"`, inline or as file contents.
fn parse_lists(s: &str, n: usize) -> Result<Vec<ColorSet>> {
    let text = if Path::new(s).is_file() {
        std::fs::read_to_string(s)?
    } else {
        s.to_string()
    };
    let lists = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| -> Result<ColorSet> {
            let colors = t
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<usize>()
                        .with_context(|| format!("bad color {c:?}"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ColorSet::from_colors(&colors))
        })
        .collect::<Result<Vec<_>>>()?;
    if lists.len() != n {
        bail!("{} lists given for a graph on {n} vertices", lists.len());
    }
    Ok(lists)
}

/// `a..b` (exclusive) or a bare count starting at 0.
fn parse_seeds(s: &str) -> Result<ListSeeds> {
    let (first, end) = parse_range(s)?;
    if end < first {
        bail!("empty seed range {s:?}");
    }
    Ok(ListSeeds {
        first,
        count: end - first,
    })
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .with_context(|| format!("bad range {s:?}"))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b)?)),
        None => Ok((0, num(s)?)),
    }
}

fn graph_source(grid: &Grid) -> Result<GraphSource> {
    if let Some(max) = grid.max_vertices {
        return Ok(GraphSource::Enumerate {
            min_vertices: grid.min_vertices,
            max_vertices: max,
            options: EnumOptions {
                connected: grid.connected,
                no_isolated: grid.no_isolated,
                triangle_free: grid.triangle_free,
                dedup: !grid.labeled,
            },
        });
    }
    if grid.graph.is_empty() {
        bail!("give --graph or --max-vertices");
    }
    let specs = grid
        .graph
        .iter()
        .map(|s| {
            let g = load_graph(s)?;
            Ok(
                GraphFamilySpec::parse(s).unwrap_or_else(|_| GraphFamilySpec::EdgeList {
                    n: g.n(),
                    edges: g.edges().to_vec(),
                }),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphSource::Named { specs })
}

fn model_sources(grid: &Grid) -> Result<Vec<ModelSource>> {
    let mut out = Vec::new();
    if !grid.model.is_empty() {
        for m in &grid.model {
            parse_model_spec(m)?;
        }
        out.push(ModelSource::Named {
            specs: grid.model.clone(),
        });
    }
    if let Some(max_q) = grid.complete_looped {
        out.push(ModelSource::CompleteLooped { min_q: 1, max_q });
    }
    if let Some(kind) = &grid.random {
        let (min_q, max_q) = match grid.q.split_once("..") {
            Some(_) => parse_range(&grid.q)?,
            None => {
                let q = parse_range(&grid.q)?.1;
                (q, q)
            }
        };
        let seeds = parse_seeds(&grid.seeds)?;
        out.push(ModelSource::Random {
            family: RandomKind::parse(kind)?,
            min_q: min_q as usize,
            max_q: max_q as usize,
            first: seeds.first,
            count: seeds.count,
        });
    }
    if out.is_empty() {
        bail!("give --model, --complete-looped or --random");
    }
    Ok(out)
}
