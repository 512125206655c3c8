use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wordmotif::ingest::IngestConfig;
use wordmotif::manifest::{parse_probs, InputFormat, RunManifest};
use wordmotif::pipeline;

/// Network motif analysis of word co-occurrence networks.
#[derive(Parser)]
#[command(name = "wordmotif", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct IngestFlags {
    /// Keep original letter case.
    #[arg(long)]
    keep_case: bool,
    /// Let adjacency run across sentence-final punctuation.
    #[arg(long)]
    cross_sentences: bool,
    /// Keep repeated-word self-loops in the emitted edge list.
    #[arg(long)]
    keep_self_loops: bool,
}

impl IngestFlags {
    fn apply(&self, cfg: &mut IngestConfig) {
        cfg.lowercase &= !self.keep_case;
        cfg.sentence_break &= !self.cross_sentences;
        cfg.drop_self_loops &= !self.keep_self_loops;
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build edge lists, vocabularies and a summary table from text files.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[command(flatten)]
        flags: IngestFlags,
    },
    /// Census, random ensemble and significance profile for one network.
    Analyze(AnalyzeArgs),
    /// Overlay significance profiles and correlate them.
    Compare {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "compare")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge list (or text with --text). Overrides the manifest input.
    input: Option<PathBuf>,
    /// key = value manifest; flags given on the command line take precedence.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Treat the input as running text and build the network first.
    #[arg(long)]
    text: bool,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    subgraph_size: Option<usize>,
    /// Comma-separated per-depth probabilities; switches to sampled enumeration.
    #[arg(long)]
    sample_probs: Option<String>,
    #[arg(long)]
    num_networks: Option<usize>,
    #[arg(long)]
    exchanges_per_edge: Option<usize>,
    #[arg(long)]
    exchange_attempts: Option<usize>,
    /// Swap reciprocal arc pairs like single arcs.
    #[arg(long)]
    no_preserve_reciprocal: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cutoff: Option<f64>,
    /// Write every replica as an edge list under <out_dir>/replicas.
    #[arg(long)]
    dump_replicas: bool,
    /// Alternative triad numbering table (export_id<TAB>adjacency).
    #[arg(long)]
    triad_id_table: Option<PathBuf>,
    #[command(flatten)]
    flags: IngestFlags,
}

enum Failure {
    Usage(String),
    Data(wordmotif::Error),
}

impl From<wordmotif::Error> for Failure {
    fn from(e: wordmotif::Error) -> Self {
        Failure::Data(e)
    }
}

fn build_manifest(a: AnalyzeArgs) -> Result<RunManifest, Failure> {
    let mut m = match &a.manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Data(wordmotif::Error::Io { path: path.clone(), source: e }))?;
            RunManifest::parse(&text)?
        }
        None => RunManifest::default(),
    };
    if a.input.is_some() {
        m.input = a.input;
    }
    if a.text {
        m.input_format = InputFormat::Text;
    }
    if a.label.is_some() {
        m.label = a.label;
    }
    if let Some(d) = a.out_dir {
        m.out_dir = d;
    }
    if let Some(k) = a.subgraph_size {
        m.subgraph_size = k;
    }
    if let Some(p) = a.sample_probs {
        m.sample_probs =
            Some(parse_probs(&p).ok_or_else(|| Failure::Usage(format!("--sample-probs: `{p}` is not a list of numbers")))?);
    }
    if let Some(n) = a.num_networks {
        m.randomize.num_networks = n;
    }
    if let Some(n) = a.exchanges_per_edge {
        m.randomize.exchanges_per_edge = n;
    }
    if let Some(n) = a.exchange_attempts {
        m.randomize.exchange_attempts = n;
    }
    if a.no_preserve_reciprocal {
        m.randomize.preserve_reciprocal = false;
    }
    if let Some(s) = a.seed {
        m.randomize.seed = s;
    }
    if let Some(c) = a.cutoff {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Failure::Usage(format!("--cutoff {c} is not in (0, 1]")));
        }
        m.cutoff = c;
    }
    m.dump_replicas |= a.dump_replicas;
    if a.triad_id_table.is_some() {
        m.triad_id_table = a.triad_id_table;
    }
    a.flags.apply(&mut m.ingest);
    if m.input.is_none() {
        return Err(Failure::Usage("analyze needs an input file or a manifest with `input`".into()));
    }
    if !(3..=4).contains(&m.subgraph_size) {
        return Err(Failure::Usage(format!("--subgraph-size {} is not 3 or 4", m.subgraph_size)));
    }
    Ok(m)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Ingest { files, out_dir, flags } => {
            let mut cfg = IngestConfig::default();
            flags.apply(&mut cfg);
            let rows = pipeline::ingest_files(&files, &cfg, &out_dir)?;
            print!("{}", pipeline::summary_tsv(&rows));
        }
        Command::Analyze(args) => {
            let manifest = build_manifest(args)?;
            let analysis = pipeline::run_analyze(&manifest)?;
            let motifs: Vec<String> = analysis
                .profile
                .rows
                .iter()
                .filter(|r| r.label != wordmotif::significance::MotifLabel::None)
                .map(|r| format!("{}:{}", r.export_id, r.label.as_str()))
                .collect();
            println!(
                "{}: {} subgraphs, {} random networks, significant classes [{}]; outputs in {}",
                analysis.profile.dataset,
                analysis.real.total(),
                analysis.stats.replicas,
                motifs.join(", "),
                manifest.out_dir.display()
            );
        }
        Command::Compare { files, out_dir } => {
            let matrix = pipeline::run_compare(&files, &out_dir)?;
            println!("compared {} profiles; outputs in {}", matrix.len(), out_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
