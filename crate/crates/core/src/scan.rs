//! Batch scans over graph × model grids, counterexample search, and report
//! emission.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{
    check_bst, check_clique_max, check_graphical_bl, check_reverse_sidorenko, fold_lists, BST,
    CLIQUE_MAX, GRAPHICAL_BL, REVERSE_SIDORENKO,
};
use crate::coloring::ColorSet;
use crate::enumerate::{enumerate_graphs, EnumOptions, MAX_ENUM_VERTICES};
use crate::error::{Error, Result};
use crate::graph::{build_named, Graph, GraphFamilySpec};
use crate::hom::VertexConstraint;
use crate::model::{
    load_model, model_complete_looped, parse_model_spec, random_model, Model, RandomKind,
};
use crate::power::CompareConfig;
use crate::report::{IneqReport, Verdict};

/// Largest graph a scan may enumerate.
pub const MAX_SCAN_VERTICES: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanIneq {
    ReverseSidorenko,
    /// Reverse Sidorenko with random 0/1 lists on `K_q^ℓ` models.
    SemiproperList,
    /// Graphical Brascamp–Lieb with lists folded into the model kernel.
    GraphicalBl,
    CliqueMax,
    Bst,
}

impl ScanIneq {
    pub const ALL: [ScanIneq; 5] = [
        ScanIneq::ReverseSidorenko,
        ScanIneq::SemiproperList,
        ScanIneq::GraphicalBl,
        ScanIneq::CliqueMax,
        ScanIneq::Bst,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ScanIneq::ReverseSidorenko => REVERSE_SIDORENKO,
            ScanIneq::SemiproperList => "semiproper-list",
            ScanIneq::GraphicalBl => GRAPHICAL_BL,
            ScanIneq::CliqueMax => CLIQUE_MAX,
            ScanIneq::Bst => BST,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.id() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown inequality {s:?}")))
    }

    fn uses_lists(self) -> bool {
        matches!(self, ScanIneq::SemiproperList | ScanIneq::GraphicalBl)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSource {
    Named {
        specs: Vec<GraphFamilySpec>,
    },
    Enumerate {
        min_vertices: usize,
        max_vertices: usize,
        #[serde(default)]
        options: EnumOptions,
    },
    /// Edge-list files, or graph6 files (one graph per line) ending in `.g6`.
    Files {
        paths: Vec<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSource {
    /// Model spec strings as accepted by `parse_model_spec`.
    Named {
        specs: Vec<String>,
    },
    /// Every `K_q^ℓ` with `min_q ≤ q ≤ max_q` and `ℓ ≤ q`.
    CompleteLooped {
        min_q: usize,
        max_q: usize,
    },
    /// Seeds `first..first+count`; seed `s` uses `q = min_q + s mod (max_q - min_q + 1)`.
    Random {
        family: RandomKind,
        min_q: usize,
        max_q: usize,
        first: u64,
        count: u64,
    },
    Files {
        paths: Vec<PathBuf>,
    },
}

/// Seeds of the random list assignments drawn per (graph, model) cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListSeeds {
    pub first: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanJob {
    pub ineq: ScanIneq,
    pub graphs: GraphSource,
    pub models: Vec<ModelSource>,
    #[serde(default)]
    pub lists: Option<ListSeeds>,
    /// Worker threads; 0 uses all cores.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub finding_mode: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub bitcap: Option<u64>,
}

impl ScanJob {
    pub fn new(ineq: ScanIneq, graphs: GraphSource, models: Vec<ModelSource>) -> Self {
        ScanJob {
            ineq,
            graphs,
            models,
            lists: None,
            jobs: 0,
            finding_mode: false,
            out: None,
            bitcap: None,
        }
    }

    fn config(&self) -> CompareConfig {
        match self.bitcap {
            Some(cap) => CompareConfig::with_bitcap(cap),
            None => CompareConfig::from_env(),
        }
    }
}

/// Everything needed to re-run one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub ineq: ScanIneq,
    pub graph: GraphFamilySpec,
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lists: Option<Vec<ColorSet>>,
}

impl Replay {
    pub fn run(&self, cfg: &CompareConfig) -> Result<IneqReport> {
        let g = build_named(&self.graph)?;
        check_instance(self.ineq, &g, &self.model, self.lists.as_deref(), cfg)
    }
}

/// Runs the checker behind `ineq` on one instance.
pub fn check_instance(
    ineq: ScanIneq,
    g: &Graph,
    m: &Model,
    lists: Option<&[ColorSet]>,
    cfg: &CompareConfig,
) -> Result<IneqReport> {
    let constraints: Option<Vec<VertexConstraint>> = lists.map(|ls| {
        ls.iter()
            .map(|&s| VertexConstraint::from_set(m.q(), s))
            .collect()
    });
    match ineq {
        ScanIneq::ReverseSidorenko | ScanIneq::SemiproperList => {
            check_reverse_sidorenko(g, m, constraints.as_deref(), cfg)
        }
        ScanIneq::GraphicalBl => {
            let full = vec![ColorSet::full(m.q()); g.n()];
            let kernels = fold_lists(g, m, lists.unwrap_or(&full))?;
            let mut r = check_graphical_bl(g, &kernels, cfg)?;
            r.instance = format!("{} H={}", r.instance, crate::model::describe_model(m));
            Ok(r)
        }
        ScanIneq::CliqueMax => check_clique_max(g, m, constraints.as_deref(), cfg),
        ScanIneq::Bst => check_bst(g, m, cfg),
    }
}

/// One row of a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub instance_id: String,
    /// graph6
    pub graph: String,
    /// Model spec, or file path.
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list_seed: Option<u64>,
    /// `None` when the comparison was undecided.
    pub verdict: Option<Verdict>,
    pub exact: bool,
    pub slack_log10: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub record: ScanRecord,
    pub report: IneqReport,
    pub replay: Replay,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceError {
    pub instance_id: String,
    pub graph: String,
    pub model: String,
    pub error: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub undecided: usize,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.holds + self.equality + self.violated + self.undecided
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub ineq: ScanIneq,
    pub instances: usize,
    pub histogram: Histogram,
    /// Decided record with the smallest slack.
    pub worst: Option<ScanRecord>,
    pub findings: Vec<Finding>,
    pub errors: Vec<InstanceError>,
    /// Random model seeds used, in scan order.
    pub model_seeds: Vec<u64>,
    pub records: Vec<ScanRecord>,
}

struct ModelCell {
    label: String,
    seed: Option<u64>,
    model: Model,
}

fn load_graphs(src: &GraphSource) -> Result<Vec<Graph>> {
    match src {
        GraphSource::Named { specs } => specs.iter().map(build_named).collect(),
        GraphSource::Enumerate {
            min_vertices,
            max_vertices,
            options,
        } => {
            if *max_vertices > MAX_SCAN_VERTICES.min(MAX_ENUM_VERTICES) {
                return Err(Error::LimitExceeded {
                    what: format!("scan over graphs on {max_vertices} vertices"),
                    limit: MAX_SCAN_VERTICES,
                });
            }
            let mut out = Vec::new();
            for n in (*min_vertices).max(1)..=*max_vertices {
                out.extend(enumerate_graphs(n, *options)?);
            }
            Ok(out)
        }
        GraphSource::Files { paths } => {
            let mut out = Vec::new();
            for p in paths {
                let text = std::fs::read_to_string(p)?;
                if p.extension().is_some_and(|e| e == "g6") {
                    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                        out.push(Graph::parse_graph6(line)?);
                    }
                } else {
                    out.push(Graph::parse_edge_list(&text)?);
                }
            }
            Ok(out)
        }
    }
}

fn load_models(sources: &[ModelSource]) -> Result<Vec<ModelCell>> {
    let mut out = Vec::new();
    for src in sources {
        match src {
            ModelSource::Named { specs } => {
                for s in specs {
                    out.push(ModelCell {
                        label: s.clone(),
                        seed: None,
                        model: parse_model_spec(s)?,
                    });
                }
            }
            ModelSource::CompleteLooped { min_q, max_q } => {
                for q in (*min_q).max(1)..=*max_q {
                    for ell in 0..=q {
                        out.push(ModelCell {
                            label: format!("Kq-looped:{q},{ell}"),
                            seed: None,
                            model: model_complete_looped(q, ell)?,
                        });
                    }
                }
            }
            ModelSource::Random {
                family: kind,
                min_q,
                max_q,
                first,
                count,
            } => {
                if max_q < min_q {
                    return Err(Error::InvalidArgument(format!(
                        "empty q range {min_q}..={max_q}"
                    )));
                }
                let span = (max_q - min_q + 1) as u64;
                for seed in *first..first + count {
                    let q = min_q + (seed % span) as usize;
                    out.push(ModelCell {
                        label: format!("random:{q},{seed},{}", kind.name()),
                        seed: Some(seed),
                        model: random_model(q, seed, *kind)?,
                    });
                }
            }
            ModelSource::Files { paths } => {
                for p in paths {
                    out.push(ModelCell {
                        label: p.display().to_string(),
                        seed: None,
                        model: load_model(p)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Random nonempty list per vertex, deterministic in `(seed, n, q)`.
pub fn random_lists(n: usize, q: usize, seed: u64) -> Vec<ColorSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(7);
    (0..n)
        .map(|_| ColorSet(rng.gen_range(1..1u64 << q)))
        .collect()
}

struct Cell<'a> {
    index: usize,
    graph: &'a Graph,
    model: &'a ModelCell,
    list_seed: Option<u64>,
}

enum Outcome {
    Report(Box<IneqReport>),
    Undecided,
    Failed(String),
}

fn run_cell(ineq: ScanIneq, cell: &Cell, cfg: &CompareConfig) -> Outcome {
    let lists = cell
        .list_seed
        .map(|s| random_lists(cell.graph.n(), cell.model.model.q(), s));
    match check_instance(ineq, cell.graph, &cell.model.model, lists.as_deref(), cfg) {
        Ok(r) => Outcome::Report(Box::new(r)),
        Err(Error::UndecidedAtPrecisionCap(_)) => Outcome::Undecided,
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

/// Runs every (graph, model, lists) cell of the job. Results do not depend on
/// the worker count.
pub fn run_scan(job: &ScanJob) -> Result<ScanSummary> {
    let graphs = load_graphs(&job.graphs)?;
    let models = load_models(&job.models)?;
    let list_seeds: Vec<Option<u64>> = match (&job.lists, job.ineq.uses_lists()) {
        (Some(ls), true) => (ls.first..ls.first + ls.count).map(Some).collect(),
        (None, _) if job.ineq == ScanIneq::SemiproperList => {
            return Err(Error::InvalidArgument(
                "semiproper-list scans need list seeds".into(),
            ))
        }
        _ => vec![None],
    };
    let mut cells = Vec::new();
    for g in &graphs {
        for m in &models {
            for &s in &list_seeds {
                cells.push(Cell {
                    index: cells.len(),
                    graph: g,
                    model: m,
                    list_seed: s,
                });
            }
        }
    }
    log::info!("{}: {} cells", job.ineq.id(), cells.len());
    let cfg = job.config();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| run_cell(job.ineq, c, &cfg))
            .collect()
    });

    let width = cells.len().max(1).to_string().len();
    let mut summary = ScanSummary {
        ineq: job.ineq,
        instances: 0,
        histogram: Histogram::default(),
        worst: None,
        findings: Vec::new(),
        errors: Vec::new(),
        model_seeds: models.iter().filter_map(|m| m.seed).collect(),
        records: Vec::new(),
    };
    for (cell, outcome) in cells.iter().zip(outcomes) {
        let instance_id = format!("{}-{:0width$}", job.ineq.id(), cell.index);
        let graph = cell.graph.to_graph6();
        let model = cell.model.label.clone();
        let mut record = ScanRecord {
            instance_id: instance_id.clone(),
            graph: graph.clone(),
            model: model.clone(),
            list_seed: cell.list_seed,
            verdict: None,
            exact: false,
            slack_log10: None,
        };
        match outcome {
            Outcome::Failed(error) => {
                summary.errors.push(InstanceError {
                    instance_id,
                    graph,
                    model,
                    error,
                });
                continue;
            }
            Outcome::Undecided => summary.histogram.undecided += 1,
            Outcome::Report(report) => {
                record.verdict = Some(report.verdict);
                record.exact = report.exact;
                record.slack_log10 = report.slack_log10;
                match report.verdict {
                    Verdict::Holds => summary.histogram.holds += 1,
                    Verdict::Equality => summary.histogram.equality += 1,
                    Verdict::Violated => {
                        summary.histogram.violated += 1;
                        let replay = Replay {
                            ineq: job.ineq,
                            graph: GraphFamilySpec::EdgeList {
                                n: cell.graph.n(),
                                edges: cell.graph.edges().to_vec(),
                            },
                            model: cell.model.model.clone(),
                            lists: cell
                                .list_seed
                                .map(|s| random_lists(cell.graph.n(), cell.model.model.q(), s)),
                        };
                        // confirm on the exact path before reporting
                        match replay.run(&CompareConfig::exact_only()) {
                            Ok(again) if again.verdict == Verdict::Violated => {
                                summary.findings.push(Finding {
                                    record: record.clone(),
                                    report: *report,
                                    replay,
                                })
                            }
                            Ok(again) => summary.errors.push(InstanceError {
                                instance_id: instance_id.clone(),
                                graph: graph.clone(),
                                model: model.clone(),
                                error: format!(
                                    "violation not confirmed on re-check: {}",
                                    again.verdict
                                ),
                            }),
                            Err(e) => summary.errors.push(InstanceError {
                                instance_id: instance_id.clone(),
                                graph: graph.clone(),
                                model: model.clone(),
                                error: format!("re-check failed: {e}"),
                            }),
                        }
                    }
                }
            }
        }
        if let Some(s) = record.slack_log10 {
            let worse = summary
                .worst
                .as_ref()
                .is_none_or(|w| w.slack_log10.is_some_and(|ws| s < ws));
            if worse {
                summary.worst = Some(record.clone());
            }
        }
        summary.records.push(record);
    }
    summary.instances = summary.histogram.total();
    log::info!(
        "{}: {} checked, {} violated, {} errors",
        job.ineq.id(),
        summary.instances,
        summary.histogram.violated,
        summary.errors.len()
    );
    Ok(summary)
}

/// Bounds for a counterexample search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchJob {
    pub ineq: ScanIneq,
    pub graphs: GraphSource,
    pub models: Vec<ModelSource>,
    #[serde(default)]
    pub lists: Option<ListSeeds>,
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub bitcap: Option<u64>,
}

/// All violations found in the search space. An empty list is a normal
/// outcome.
pub fn search_counterexample(job: &SearchJob) -> Result<Vec<Finding>> {
    let scan = ScanJob {
        ineq: job.ineq,
        graphs: job.graphs.clone(),
        models: job.models.clone(),
        lists: job.lists.clone(),
        jobs: job.jobs,
        finding_mode: true,
        out: None,
        bitcap: job.bitcap,
    };
    Ok(run_scan(&scan)?.findings)
}

/// Writes `finding-<k>.json` replay files into `dir`; returns their paths.
pub fn write_replays(findings: &[Finding], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    findings
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let path = dir.join(format!("finding-{k}.json"));
            std::fs::write(&path, serde_json::to_string_pretty(&f.replay)?)?;
            Ok(path)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    instance_id: &'a str,
    graph: &'a str,
    model: &'a str,
    verdict: &'a str,
    exact: bool,
    slack_log10: Option<f64>,
}

/// Writes the summary; identical summaries give identical bytes.
pub fn emit_report(summary: &ScanSummary, format: ReportFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, summary)?;
            writeln!(out)?;
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record([
                "instance_id",
                "graph",
                "model",
                "verdict",
                "exact",
                "slack_log10",
            ])?;
            for r in &summary.records {
                w.serialize(CsvRow {
                    instance_id: &r.instance_id,
                    graph: &r.graph,
                    model: &r.model,
                    verdict: r.verdict.map_or("undecided", Verdict::name),
                    exact: r.exact,
                    slack_log10: r.slack_log10,
                })?;
            }
            w.flush()?;
        }
        ReportFormat::Text => {
            let h = &summary.histogram;
            writeln!(
                out,
                "{}: {} instances",
                summary.ineq.id(),
                summary.instances
            )?;
            writeln!(
                out,
                "holds {}  equality {}  violated {}  undecided {}  errors {}",
                h.holds,
                h.equality,
                h.violated,
                h.undecided,
                summary.errors.len()
            )?;
            if let Some(w) = &summary.worst {
                writeln!(
                    out,
                    "worst slack {:.6e} at {} (graph {}, model {})",
                    w.slack_log10.unwrap_or(f64::NAN),
                    w.instance_id,
                    w.graph,
                    w.model
                )?;
            }
            for f in &summary.findings {
                writeln!(out, "finding {}: {}", f.record.instance_id, f.report)?;
            }
            for e in &summary.errors {
                writeln!(out, "error {}: {}", e.instance_id, e.error)?;
            }
        }
    }
    Ok(())
}

pub fn emit_report_to_path(summary: &ScanSummary, format: ReportFormat, path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    emit_report(summary, format, &mut file)?;
    file.flush()?;
    Ok(())
}
