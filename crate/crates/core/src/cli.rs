//! The `ellembed` command line.
//!
//! Exit codes: 0 on success, 1 on numerical failure, 2 on usage or I/O
//! errors. Every command computes all of its outputs before writing any of
//! them.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::descriptor::Descriptor;
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, load_ground_truth, Graph};
use crate::io::{
    align_rows, read_embedding_csv, read_partition_csv, write_embedding_csv, write_partition_csv,
    write_spectrum_csv, write_trace_csv,
};
use crate::metrics::{summarize, RunArtifacts};
use crate::partition::PartitionConfig;
use crate::pipeline::{embed, partition, Embedded};
use crate::plot::render_scatter_svg;
use crate::solver::{MomentumVariant, SolverConfig};
use crate::synthetic::{generate_planted_partition, PlantedPartitionSpec};

pub const OUT_DIR_ENV: &str = "ELLEMBED_OUT";

#[derive(Parser, Debug)]
#[command(name = "ellembed", version, about = "Ellipsoidal graph embeddings and embed-and-partition community detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Embed a graph; writes embedding.csv, spectrum.csv, trace.csv and summary.json.
    Embed(EmbedCmd),
    /// Partition an embedding, or run the whole pipeline with --pipeline;
    /// writes partition.csv, summary.json and runlog.json.
    Partition(PartitionCmd),
    /// Scatter plot of embedding coordinates as SVG.
    Plot(PlotCmd),
    /// Sample a planted-partition graph; writes edges.txt and truth.txt.
    Generate(GenerateCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DescriptorArg {
    Modularity,
    Normlap,
}

impl From<DescriptorArg> for Descriptor {
    fn from(d: DescriptorArg) -> Self {
        match d {
            DescriptorArg::Modularity => Descriptor::Modularity,
            DescriptorArg::Normlap => Descriptor::NormalizedLaplacian,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Main,
    Appendix,
}

impl From<VariantArg> for MomentumVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Main => MomentumVariant::Main,
            VariantArg::Appendix => MomentumVariant::Appendix,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
    /// Record per-stage wall-clock times in summary.json.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    /// Descriptor matrix.
    #[arg(long, value_enum, default_value = "modularity")]
    pub descriptor: DescriptorArg,
    /// Embedding dimension bound d0.
    #[arg(long, default_value_t = 30)]
    pub d0: usize,
    /// Relative objective change at which iteration stops.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Use momentum (the default).
    #[arg(long, overrides_with = "no_momentum")]
    pub momentum: bool,
    /// Plain power iteration without momentum.
    #[arg(long, overrides_with = "momentum")]
    pub no_momentum: bool,
    /// Stopping rule of the momentum iteration.
    #[arg(long, value_enum, default_value = "main")]
    pub momentum_variant: VariantArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Extra margin added to the diagonal shift.
    #[arg(long, default_value_t = 0.0)]
    pub shift_epsilon: f64,
    /// Trace fraction left out of the effective dimension.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
}

impl SolveArgs {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            dimension: self.d0,
            tol: self.tol,
            max_iter: self.max_iter,
            momentum: !self.no_momentum,
            momentum_variant: self.momentum_variant.into(),
            seed: self.seed,
            shift_epsilon: self.shift_epsilon,
        }
    }
}

#[derive(Args, Debug)]
pub struct EmbedCmd {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Write unit-norm spherical coordinates instead of ellipsoidal ones.
    #[arg(long)]
    pub spherical: bool,
    /// Keep only the first d_eff coordinates.
    #[arg(long)]
    pub truncate: bool,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Args, Debug)]
pub struct PartitionCmd {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Embedding CSV written by `embed`. Spherical coordinates
    /// (`embed --spherical`) carry the singular values needed by
    /// --tail-tolerance; ellipsoidal ones are partitioned as given.
    #[arg(long, required_unless_present = "pipeline", conflicts_with = "pipeline")]
    pub embedding: Option<PathBuf>,
    /// Embed the graph first instead of reading --embedding.
    #[arg(long)]
    pub pipeline: bool,
    /// Ground-truth `node community` file; adds NMI to the summary.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Initial centroids, capped at the node count.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_rounds: usize,
    /// Threads used for restarts; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Skip embedding directions whose rho eigenvalue is at most this
    /// fraction of the largest.
    #[arg(long, default_value_t = crate::partition::TAIL_TOLERANCE)]
    pub tail_tolerance: f64,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Args, Debug)]
pub struct PlotCmd {
    /// Embedding CSV written by `embed`.
    #[arg(long)]
    pub embedding: PathBuf,
    /// Partition CSV used for colors.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// 1 plots coordinates (1,2); 2 adds a (1,3) panel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub panels: u8,
    /// Output SVG file.
    #[arg(long, default_value = "scatter.svg")]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenerateCmd {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    /// Number of planted blocks.
    #[arg(long, default_value_t = 3)]
    pub blocks: usize,
    #[arg(long, default_value_t = 0.2)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_out: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        1
    } else {
        2
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Embed(cmd) => cmd_embed(&cmd),
        Command::Partition(cmd) => cmd_partition(&cmd),
        Command::Plot(cmd) => cmd_plot(&cmd),
        Command::Generate(cmd) => cmd_generate(&cmd),
    }
}

/// Files to write, in order, once everything has been computed.
type Outputs = Vec<(PathBuf, Vec<u8>)>;

fn commit(outputs: Outputs) -> Result<()> {
    for (path, bytes) in outputs {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(&path, bytes)?;
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    let (graph, report) = load_edge_list(open(path)?)?;
    if report.self_loops + report.duplicate_edges + report.dropped_nodes > 0 {
        eprintln!(
            "note: dropped {} self-loops, {} duplicate edges, {} nodes outside the largest component",
            report.self_loops, report.duplicate_edges, report.dropped_nodes
        );
    }
    Ok(graph)
}

struct Clock {
    enabled: bool,
    times: BTreeMap<String, f64>,
    last: Instant,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock { enabled, times: BTreeMap::new(), last: Instant::now() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.times
            .insert(stage.to_owned(), (now - self.last).as_secs_f64() * 1e3);
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.times)
    }
}

fn embedding_outputs(
    out: &Path,
    graph: &Graph,
    embedded: &Embedded,
    spherical: bool,
    truncate: bool,
) -> Result<Outputs> {
    let emb = if truncate { embedded.embedding.truncate() } else { embedded.embedding.clone() };
    let coords = if spherical { emb.spherical() } else { emb.ellipsoidal().to_owned() };
    let mut csv = Vec::new();
    write_embedding_csv(&mut csv, graph.labels(), coords.view())?;
    let mut spectrum = Vec::new();
    write_spectrum_csv(&mut spectrum, &embedded.embedding.rho_spectrum())?;
    let mut trace = Vec::new();
    write_trace_csv(&mut trace, &embedded.solve.trace)?;
    Ok(vec![
        (out.join("embedding.csv"), csv),
        (out.join("spectrum.csv"), spectrum),
        (out.join("trace.csv"), trace),
    ])
}

fn cmd_embed(cmd: &EmbedCmd) -> Result<()> {
    let mut clock = Clock::new(cmd.output.timings);
    let graph = load_graph(&cmd.input)?;
    clock.lap("load");
    let cfg = cmd.solve.solver_config();
    let descriptor = cmd.solve.descriptor.into();
    let embedded = embed(&graph, descriptor, &cfg, cmd.solve.epsilon)?;
    clock.lap("embed");
    let mut outputs = embedding_outputs(&cmd.output.out, &graph, &embedded, cmd.spherical, cmd.truncate)?;
    let summary = summarize(&RunArtifacts {
        graph: &graph,
        solve: Some((descriptor, &cfg, &embedded.solve)),
        embedding: Some(&embedded.embedding),
        partition: None,
        truth: None,
        timings_ms: clock.finish(),
    })?;
    outputs.push((cmd.output.out.join("summary.json"), summary.to_json()?.into_bytes()));
    commit(outputs)
}

fn cmd_partition(cmd: &PartitionCmd) -> Result<()> {
    let mut clock = Clock::new(cmd.output.timings);
    let graph = load_graph(&cmd.input)?;
    let truth = match &cmd.truth {
        Some(path) => Some(load_ground_truth(open(path)?, &graph)?),
        None => None,
    };
    clock.lap("load");
    let cfg = cmd.solve.solver_config();
    let descriptor = cmd.solve.descriptor.into();
    let pcfg = PartitionConfig {
        k: cmd.k,
        restarts: cmd.restarts,
        max_rounds: cmd.max_rounds,
        seed: cmd.solve.seed,
        jobs: cmd.jobs,
        tail_tolerance: cmd.tail_tolerance,
    };
    let mut outputs = Outputs::new();
    let (embedded, part) = if cmd.pipeline {
        let embedded = embed(&graph, descriptor, &cfg, cmd.solve.epsilon)?;
        clock.lap("embed");
        let part = partition(&graph, &embedded.embedding, &pcfg)?;
        outputs = embedding_outputs(&cmd.output.out, &graph, &embedded, false, false)?;
        (Some(embedded), part)
    } else {
        let path = cmd.embedding.as_ref().expect("clap requires --embedding");
        let (labels, coords) = read_embedding_csv(open(path)?)?;
        let coords = align_rows(&graph, &labels, coords.view())?;
        let embedding = crate::embedding::svd_embedding(coords.view(), cmd.solve.epsilon)?;
        let part = partition(&graph, &embedding, &pcfg)?;
        (None, part)
    };
    clock.lap("partition");

    let mut csv = Vec::new();
    write_partition_csv(&mut csv, graph.labels(), part.labels())?;
    let summary = summarize(&RunArtifacts {
        graph: &graph,
        solve: embedded.as_ref().map(|e| (descriptor, &cfg, &e.solve)),
        embedding: embedded.as_ref().map(|e| &e.embedding),
        partition: Some((&part, &pcfg)),
        truth: truth.as_deref(),
        timings_ms: clock.finish(),
    })?;
    outputs.push((cmd.output.out.join("partition.csv"), csv));
    outputs.push((cmd.output.out.join("summary.json"), summary.to_json()?.into_bytes()));
    outputs.push((cmd.output.out.join("runlog.json"), part.log_json()?.into_bytes()));
    commit(outputs)
}

fn cmd_plot(cmd: &PlotCmd) -> Result<()> {
    let (names, coords) = read_embedding_csv(open(&cmd.embedding)?)?;
    let labels = match &cmd.labels {
        Some(path) => {
            let map = read_partition_csv(open(path)?)?;
            let labels = names
                .iter()
                .map(|n| map.get(n).copied().ok_or_else(|| Error::UnknownNode(n.clone())))
                .collect::<Result<Vec<_>>>()?;
            Some(labels)
        }
        None => None,
    };
    let svg = render_scatter_svg(coords.view(), labels.as_deref(), cmd.panels as usize)?;
    commit(vec![(cmd.output.clone(), svg.into_bytes())])
}

fn cmd_generate(cmd: &GenerateCmd) -> Result<()> {
    let spec = PlantedPartitionSpec {
        n: cmd.n,
        k: cmd.blocks,
        p_in: cmd.p_in,
        p_out: cmd.p_out,
        seed: cmd.seed,
    };
    let (graph, truth) = generate_planted_partition(&spec)?;
    let mut edges = Vec::new();
    graph.write_edge_list(&mut edges)?;
    let mut communities = String::new();
    for (label, c) in graph.labels().iter().zip(&truth) {
        communities.push_str(&format!("{label} {c}\n"));
    }
    commit(vec![
        (cmd.out.join("edges.txt"), edges),
        (cmd.out.join("truth.txt"), communities.into_bytes()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn momentum_defaults_on() {
        let cli = Cli::try_parse_from(["ellembed", "embed", "--input", "g.txt"]).unwrap();
        let Command::Embed(cmd) = cli.command else { panic!() };
        let cfg = cmd.solve.solver_config();
        assert!(cfg.momentum);
        assert_eq!(cfg.dimension, 30);
        assert_eq!(cfg.tol, 1e-8);
        let cli = Cli::try_parse_from(["ellembed", "embed", "--input", "g.txt", "--no-momentum"]).unwrap();
        let Command::Embed(cmd) = cli.command else { panic!() };
        assert!(!cmd.solve.solver_config().momentum);
    }

    #[test]
    fn partition_needs_a_source() {
        assert!(Cli::try_parse_from(["ellembed", "partition", "--input", "g.txt"]).is_err());
        assert!(Cli::try_parse_from(["ellembed", "partition", "--input", "g.txt", "--pipeline"]).is_ok());
    }
}
