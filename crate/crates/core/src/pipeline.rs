//! File-level drivers behind the `ingest`, `analyze` and `compare` commands.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::census::{census_tsv, CensusResult, Enumeration};
use crate::classes::ClassTable;
use crate::error::{Error, Result};
use crate::graph::{load_edgelist, save_edgelist, DirectedGraph};
use crate::ingest::{ingest_text, IngestConfig};
use crate::manifest::{InputFormat, RunManifest};
use crate::null_model::{generate_ensemble, SwapReport};
use crate::report::{self, ReportContext, Scale};
use crate::significance::{compare_profiles, EnsembleAccumulator, EnsembleStats, SignificanceProfile};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

/// One row of the words / vertices / arcs summary table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSummary {
    pub dataset: String,
    pub words: usize,
    pub vertices: usize,
    pub edges: usize,
}

pub fn summary_tsv(rows: &[IngestSummary]) -> String {
    let mut s = String::from("dataset\twords\tvertices\tedges\n");
    for r in rows {
        s.push_str(&format!("{}\t{}\t{}\t{}\n", r.dataset, r.words, r.vertices, r.edges));
    }
    s
}

/// Builds one network per text file and writes `<stem>.edges`,
/// `<stem>.vocab.tsv` and `summary.tsv` into `out_dir`.
pub fn ingest_files(paths: &[PathBuf], config: &IngestConfig, out_dir: &Path) -> Result<Vec<IngestSummary>> {
    let texts = paths.iter().map(|p| read(p)).collect::<Result<Vec<_>>>()?;
    create_dir(out_dir)?;
    let mut rows = Vec::new();
    for (path, text) in paths.iter().zip(&texts) {
        let net = ingest_text(text, config);
        let name = stem(path);
        write(&out_dir.join(format!("{name}.edges")), &net.edgelist())?;
        write(&out_dir.join(format!("{name}.vocab.tsv")), &net.vocabulary.to_tsv())?;
        rows.push(IngestSummary {
            dataset: name,
            words: net.words,
            vertices: net.graph.vertex_count(),
            edges: net.graph.arc_count(),
        });
    }
    write(&out_dir.join("summary.tsv"), &summary_tsv(&rows))?;
    Ok(rows)
}

/// SplitMix64 finalizer; turns `(seed, index)` into independent seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn enumeration_for(base: &Enumeration, index: u64) -> Enumeration {
    match base {
        Enumeration::Full => Enumeration::Full,
        Enumeration::Sampled { probs, seed } => Enumeration::Sampled {
            probs: probs.clone(),
            seed: derive_seed(*seed, index),
        },
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub real: CensusResult,
    pub stats: EnsembleStats,
    pub profile: SignificanceProfile,
    pub swaps: SwapReport,
}

/// Census of `g`, census of every replica, and the significance profile.
/// Replicas are generated and counted in parallel, one graph per worker at a
/// time, then folded into the statistics in replica order. The real graph is
/// sampled with seed index 0 and replica `i` with index `i + 1`.
pub fn analyze_graph(
    g: &DirectedGraph,
    table: &ClassTable,
    manifest: &RunManifest,
    label: &str,
    dump_dir: Option<&Path>,
) -> Result<Analysis> {
    let enumeration = manifest.enumeration()?;
    let real = enumeration_for(&enumeration, 0).run(g, table)?;
    let ensemble = generate_ensemble(g, &manifest.randomize)?;
    if let Some(dir) = dump_dir {
        create_dir(dir)?;
    }

    let per_replica: Vec<(CensusResult, SwapReport)> = (0..ensemble.len())
        .into_par_iter()
        .map(|i| {
            let (replica, swaps) = ensemble.replica(i);
            if let Some(dir) = dump_dir {
                write(&dir.join(format!("replica_{i:05}.edges")), &save_edgelist(&replica))?;
            }
            let census = enumeration_for(&enumeration, i as u64 + 1).run(&replica, table)?;
            Ok((census, swaps))
        })
        .collect::<Result<_>>()?;

    let mut acc = EnsembleAccumulator::new(&real);
    let mut swaps = SwapReport::default();
    for (census, s) in &per_replica {
        acc.push(census)?;
        swaps.attempted += s.attempted;
        swaps.successful += s.successful;
    }
    let stats = acc.finish();
    let profile = SignificanceProfile::compute(label, table, &real, &stats, manifest.cutoff)?;
    Ok(Analysis {
        real,
        stats,
        profile,
        swaps,
    })
}

pub fn load_class_table(manifest: &RunManifest) -> Result<ClassTable> {
    match (&manifest.triad_id_table, manifest.subgraph_size) {
        (Some(path), 3) => ClassTable::with_export_ids(3, &read(path)?),
        (_, k) => ClassTable::build(k),
    }
}

/// Runs the manifest and writes `census.tsv`, `significance.tsv`,
/// `report.txt`, `report.html` and `manifest.txt` into its output directory.
pub fn run_analyze(manifest: &RunManifest) -> Result<Analysis> {
    let input = manifest.input.as_ref().ok_or(Error::Manifest {
        line: 0,
        reason: "no input given".into(),
    })?;
    let table = load_class_table(manifest)?;
    let text = read(input)?;
    let out = &manifest.out_dir;
    create_dir(out)?;

    let graph = match manifest.input_format {
        InputFormat::EdgeList => {
            let loaded = load_edgelist(&text)?;
            if loaded.self_loops_dropped > 0 {
                log::warn!("{}: dropped {} self-loop line(s)", input.display(), loaded.self_loops_dropped);
            }
            loaded.graph
        }
        InputFormat::Text => {
            let net = ingest_text(&text, &manifest.ingest);
            write(&out.join("network.edges"), &net.edgelist())?;
            write(&out.join("vocabulary.tsv"), &net.vocabulary.to_tsv())?;
            net.graph
        }
    };
    let label = manifest.label.clone().unwrap_or_else(|| stem(input));
    let dump = manifest.dump_replicas.then(|| out.join("replicas"));
    let analysis = analyze_graph(&graph, &table, manifest, &label, dump.as_deref())?;

    write(&out.join("manifest.txt"), &manifest.to_text())?;
    write(&out.join("census.tsv"), &census_tsv(&analysis.real, &table))?;
    write(&out.join("significance.tsv"), &analysis.profile.to_tsv())?;
    let ctx = ReportContext {
        profile: &analysis.profile,
        vertices: graph.vertex_count(),
        arcs: graph.arc_count(),
        replicas: manifest.randomize.num_networks,
        swaps: analysis.swaps,
        enumeration: match &manifest.sample_probs {
            None => "full".into(),
            Some(p) => format!(
                "sampled ({})",
                p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            ),
        },
        cutoff: manifest.cutoff,
    };
    if manifest.ascii_report {
        write(&out.join("report.txt"), &report::ascii_report(&ctx))?;
    }
    if manifest.html_report {
        write(&out.join("report.html"), &report::html_report(&ctx))?;
    }
    Ok(analysis)
}

/// Dataset name for a significance TSV: the file stem, or the parent
/// directory when the file carries the default `significance` name.
pub fn dataset_name(path: &Path) -> String {
    let s = stem(path);
    if s == "significance" {
        if let Some(dir) = path.parent().and_then(Path::file_name) {
            return dir.to_string_lossy().into_owned();
        }
    }
    s
}

/// Reads significance TSVs and writes `tsp.svg`, `frequency_linear.svg`,
/// `frequency_log.svg` and `correlation.tsv`.
pub fn run_compare(paths: &[PathBuf], out_dir: &Path) -> Result<Vec<Vec<f64>>> {
    let profiles = paths
        .iter()
        .map(|p| SignificanceProfile::from_tsv(dataset_name(p), &read(p)?))
        .collect::<Result<Vec<_>>>()?;
    let matrix = compare_profiles(&profiles)?;
    create_dir(out_dir)?;
    write(&out_dir.join("tsp.svg"), &report::tsp_chart(&profiles))?;
    write(
        &out_dir.join("frequency_linear.svg"),
        &report::frequency_chart(&profiles, Scale::Linear),
    )?;
    write(
        &out_dir.join("frequency_log.svg"),
        &report::frequency_chart(&profiles, Scale::Log10),
    )?;
    write(
        &out_dir.join("correlation.tsv"),
        &report::correlation_tsv(&profiles, &matrix),
    )?;
    Ok(matrix)
}
