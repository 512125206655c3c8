//! Acceptance gate: one check per criterion, one PASS/FAIL line each.
//!
//! Run with `cargo test -p wordmotif --test acceptance`. The process exits
//! non-zero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wordmotif::census::enumerate_sampled;
use wordmotif::ingest::ingest_text;
use wordmotif::manifest::{InputFormat, RunManifest};
use wordmotif::null_model::generate_ensemble;
use wordmotif::pipeline::{analyze_graph, run_analyze};
use wordmotif::significance::{classify, pvalues, zscore, zscores, EnsembleStats, DEFAULT_CUTOFF};
use wordmotif::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Result<(), String> {
    ensure(
        elapsed <= budget,
        format!("{what} took {elapsed:.2?}, budget {budget:?}"),
    )
}

/// 1. Exactly 13 triad and 199 tetrad classes, in under a second.
fn class_table_cardinality() -> Outcome {
    let start = Instant::now();
    let t3 = ClassTable::build(3).map_err(|e| e.to_string())?;
    let t4 = ClassTable::build(4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(t3.len() == 13, format!("k=3 has {} classes", t3.len()))?;
    ensure(t4.len() == 199, format!("k=4 has {} classes", t4.len()))?;
    within(elapsed, Duration::from_secs(1), "class tables")?;
    Ok(format!("13 / 199 classes in {elapsed:.2?}"))
}

struct OracleRun {
    graphs: usize,
    mismatches: Vec<String>,
    total_mismatches: Vec<String>,
}

fn oracle_sweep(k: usize, graphs: usize, max_n: usize, seed: u64) -> OracleRun {
    let table = ClassTable::build(k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = OracleRun {
        graphs,
        mismatches: Vec::new(),
        total_mismatches: Vec::new(),
    };
    for i in 0..graphs {
        let n = rng.gen_range(k..=max_n);
        let p = if i % 2 == 0 { 0.1 } else { 0.3 };
        let g = common::random_digraph(n, p, &mut rng);
        let esu = enumerate_full(&g, &table);
        let (oracle, connected) = common::brute_force_census(&g, &table);
        if esu.hits() != oracle.as_slice() {
            run.mismatches.push(format!("k={k} graph {i} (n={n}, p={p})"));
        }
        if esu.total() != connected as f64 {
            run.total_mismatches.push(format!(
                "k={k} graph {i}: total {} vs {connected} connected subsets",
                esu.total()
            ));
        }
    }
    run
}

/// 2 and 3 share the same graphs.
fn census_oracle() -> (Outcome, Outcome) {
    let start = Instant::now();
    let runs = [oracle_sweep(3, 200, 12, 2024), oracle_sweep(4, 50, 10, 4048)];
    let elapsed = start.elapsed();
    let graphs: usize = runs.iter().map(|r| r.graphs).sum();

    let c2 = (|| {
        let bad: Vec<&String> = runs.iter().flat_map(|r| &r.mismatches).collect();
        ensure(bad.is_empty(), format!("class counts differ on {bad:?}"))?;
        within(elapsed, Duration::from_secs(30), "oracle sweep")?;
        Ok(format!("{graphs} graphs match class-for-class in {elapsed:.2?}"))
    })();
    let c3 = (|| {
        let bad: Vec<&String> = runs.iter().flat_map(|r| &r.total_mismatches).collect();
        ensure(bad.is_empty(), format!("{bad:?}"))?;
        Ok(format!("totals equal connected-subset counts on {graphs} graphs"))
    })();
    (c2, c3)
}

/// 4. Degree sequences, simplicity and mutual dyads survive randomization.
fn null_model_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut replicas = 0usize;
    let mut graphs = 0usize;
    while graphs < 100 {
        let n = rng.gen_range(6..40);
        let p = rng.gen_range(0.05..0.3);
        let g = common::random_digraph(n, p, &mut rng);
        if g.arc_count() < 2 {
            continue;
        }
        graphs += 1;
        let cfg = RandomizeConfig {
            num_networks: 20,
            seed: rng.gen(),
            ..RandomizeConfig::default()
        };
        let degrees = g.degrees();
        let mutual = g.mutual_dyads();
        for (i, (r, _)) in generate_ensemble(&g, &cfg).map_err(|e| e.to_string())?.enumerate() {
            replicas += 1;
            ensure(r.degrees() == degrees, format!("graph {graphs} replica {i}: degrees changed"))?;
            let arcs: Vec<_> = r.arcs().collect();
            ensure(arcs.iter().all(|(u, v)| u != v), "self-loop in replica")?;
            let mut dedup = arcs.clone();
            dedup.dedup();
            ensure(dedup.len() == arcs.len() && arcs.len() == g.arc_count(), "duplicate arc in replica")?;
            ensure(r.mutual_dyads() == mutual, format!("graph {graphs} replica {i}: mutual dyads changed"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30), "null model sweep")?;
    Ok(format!("{graphs} graphs, {replicas} replicas exact in {elapsed:.2?}"))
}

/// 5. RAND-ESU totals average to the exact total.
fn sampling_unbiasedness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5050);
    let g = common::random_digraph(50, 0.08, &mut rng);
    let table = ClassTable::build(3).unwrap();
    let exact = enumerate_full(&g, &table).total();
    let totals: Vec<f64> = (0..200u64)
        .map(|seed| enumerate_sampled(&g, &table, &[1.0, 1.0, 0.5], seed).map(|r| r.total()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let m = totals.len() as f64;
    let mean = totals.iter().sum::<f64>() / m;
    let var = totals.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    let elapsed = start.elapsed();
    ensure(
        (mean - exact).abs() <= 3.0 * se,
        format!("mean {mean:.2} vs exact {exact} exceeds 3 SE ({se:.3})"),
    )?;
    within(elapsed, Duration::from_secs(60), "sampling check")?;
    Ok(format!(
        "mean {mean:.2} vs exact {exact} (|diff| = {:.2} SE) in {elapsed:.2?}",
        (mean - exact).abs() / se
    ))
}

/// 6. SP normalization, worked Z / p examples and the 0.01 cutoff.
fn significance_math() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let len = rng.gen_range(1..200);
        let z: Vec<ZScore> = (0..len)
            .map(|_| {
                if rng.gen::<f64>() < 0.1 {
                    ZScore::Undefined
                } else {
                    ZScore::Finite(rng.gen_range(-50.0..50.0))
                }
            })
            .collect();
        if z.iter().all(|z| z.value().is_none()) {
            continue;
        }
        let sp = significance_profile(&z).map_err(|e| e.to_string())?;
        let norm2: f64 = sp.iter().map(|x| x * x).sum();
        worst = worst.max((norm2 - 1.0).abs());
    }
    ensure(worst < 1e-12, format!("|sum SP^2 - 1| reached {worst:e}"))?;

    ensure(zscore(10.0, 10.0, 0.0) == ZScore::Finite(0.0), "Z(10,10,0) != 0")?;
    ensure(zscore(12.0, 10.0, 1.0) == ZScore::Finite(2.0), "Z(12,10,1) != 2")?;
    ensure(zscore(12.0, 10.0, 0.0) == ZScore::Undefined, "Z(12,10,0) defined")?;
    let sp = significance_profile(&[ZScore::Finite(3.0), ZScore::Finite(4.0)]).map_err(|e| e.to_string())?;
    ensure(sp == [0.6, 0.8], format!("SP(3,4) = {sp:?}"))?;

    let real = CensusResult::from_counts(3, vec![100]);
    let below: Vec<CensusResult> = (0..1000).map(|_| CensusResult::from_counts(3, vec![40])).collect();
    let stats = EnsembleStats::from_replicas(&real, &below).map_err(|e| e.to_string())?;
    let p = pvalues(&real, &stats).map_err(|e| e.to_string())?[0];
    ensure(p.0 == 0.0, format!("all-below p_over = {}", p.0))?;
    let equal: Vec<CensusResult> = (0..1000).map(|_| CensusResult::from_counts(3, vec![100])).collect();
    let stats = EnsembleStats::from_replicas(&real, &equal).map_err(|e| e.to_string())?;
    let p = pvalues(&real, &stats).map_err(|e| e.to_string())?[0];
    ensure(p == (1.0, 1.0), format!("all-equal p = {p:?}"))?;

    let seven: Vec<CensusResult> = (0..1000)
        .map(|i| CensusResult::from_counts(3, vec![if i < 7 { 130 } else { 60 }]))
        .collect();
    let stats = EnsembleStats::from_replicas(&real, &seven).map_err(|e| e.to_string())?;
    let (p_over, p_under) = pvalues(&real, &stats).map_err(|e| e.to_string())?[0];
    let z = zscores(&real, &stats).map_err(|e| e.to_string())?[0];
    ensure(p_over == 0.007, format!("p_over = {p_over}"))?;
    ensure(DEFAULT_CUTOFF == 0.01, "cutoff is not 0.01")?;
    let label = classify(z, p_over, p_under, DEFAULT_CUTOFF);
    ensure(label == MotifLabel::Motif, format!("p_over=0.007 labelled {label:?}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5), "significance math")?;
    Ok(format!("max |sum SP^2 - 1| = {worst:e}; p_over=0.007 -> MOTIF; {elapsed:.2?}"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// 7. Signs of the triad profile on a public-domain English text.
fn qualitative_tsp() -> Outcome {
    let start = Instant::now();
    let path = fixture("kjv_genesis_exodus.txt");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let net = ingest_text(&text, &IngestConfig::default());
    ensure(net.words >= 50_000, format!("text has only {} words", net.words))?;
    let table = ClassTable::build(3).unwrap();
    let manifest = RunManifest {
        randomize: RandomizeConfig {
            num_networks: 1000,
            seed: 1,
            ..RandomizeConfig::default()
        },
        ..RunManifest::default()
    };
    let analysis = analyze_graph(&net.graph, &table, &manifest, "kjv", None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let rows = &analysis.profile.rows;
    let sp_of = |id: u32| rows.iter().find(|r| r.export_id == id).map(|r| r.sp).unwrap();
    let three_arc: Vec<(u32, f64)> = table
        .classes()
        .iter()
        .filter(|c| c.arc_count == 3)
        .map(|c| (c.export_id, sp_of(c.export_id)))
        .collect();
    let negative = three_arc.iter().filter(|(_, sp)| *sp < 0.0).count();
    let closed: Vec<f64> = table
        .classes()
        .iter()
        .filter(|c| {
            let m = c.canonical_code;
            let pair = |i: u32, j: u32| m >> (i * 3 + j) & 1 == 1 || m >> (j * 3 + i) & 1 == 1;
            pair(0, 1) && pair(0, 2) && pair(1, 2)
        })
        .map(|c| sp_of(c.export_id))
        .collect();
    let closed_negative = closed.iter().filter(|sp| **sp < 0.0).count();
    let profile: Vec<String> = rows.iter().map(|r| format!("{}:{:+.3}", r.export_id, r.sp)).collect();
    let detail = format!(
        "N={} K={} words={}; SP {}; three-arc negative {negative}/{}; closed-triangle negative {closed_negative}/{}",
        net.graph.vertex_count(),
        net.graph.arc_count(),
        net.words,
        profile.join(" "),
        three_arc.len(),
        closed.len()
    );
    ensure(sp_of(1) > 0.0 && sp_of(3) > 0.0, format!("two-arc triads not positive: {detail}"))?;
    // "Three-edge" triads are those with all three vertex pairs adjacent;
    // the complete triad (ID 13) belongs to this group.
    ensure(2 * closed_negative > closed.len(), format!("closed triads not mostly negative: {detail}"))?;
    within(elapsed, Duration::from_secs(15 * 60), "qualitative run")?;
    Ok(format!("{detail}; {elapsed:.2?}"))
}

/// 8. Census at the largest dataset scale, then a 100-replica pipeline.
fn scale_and_performance() -> Outcome {
    let text = common::zipf_text(199_188, 100_000, 1.12, 7);
    let g = ingest_text(&text, &IngestConfig::default()).graph;
    let table = ClassTable::build(3).unwrap();

    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let census = single.install(|| enumerate_full(&g, &table));
    let census_time = start.elapsed();
    within(census_time, Duration::from_secs(10), "single-threaded k=3 census")?;

    let workers = rayon::ThreadPoolBuilder::new().num_threads(8).build().map_err(|e| e.to_string())?;
    let manifest = RunManifest {
        randomize: RandomizeConfig {
            num_networks: 100,
            seed: 8,
            ..RandomizeConfig::default()
        },
        ..RunManifest::default()
    };
    let start = Instant::now();
    workers
        .install(|| analyze_graph(&g, &table, &manifest, "synthetic", None))
        .map_err(|e| e.to_string())?;
    let pipeline_time = start.elapsed();
    within(pipeline_time, Duration::from_secs(300), "100-replica pipeline")?;
    Ok(format!(
        "N={} K={} triads={}: census {census_time:.2?}; 100-replica pipeline {pipeline_time:.2?} ({} cores available)",
        g.vertex_count(),
        g.arc_count(),
        census.total(),
        std::thread::available_parallelism().map_or(1, |n| n.get())
    ))
}

/// 9. Re-running a manifest reproduces the TSVs byte for byte, with any
/// number of workers.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus.txt");
    std::fs::write(&corpus, common::zipf_text(20_000, 3_000, 1.1, 99)).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (run, threads, probs) in [
        (0, 1, None),
        (1, 1, None),
        (2, 4, None),
        (3, 1, Some(vec![1.0, 0.8, 0.6])),
        (4, 3, Some(vec![1.0, 0.8, 0.6])),
    ] {
        let manifest = RunManifest {
            input: Some(corpus.clone()),
            input_format: InputFormat::Text,
            sample_probs: probs,
            randomize: RandomizeConfig {
                num_networks: 30,
                seed: 123,
                ..RandomizeConfig::default()
            },
            out_dir: dir.path().join(format!("run{run}")),
            ..RunManifest::default()
        };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        pool.install(|| run_analyze(&manifest)).map_err(|e| e.to_string())?;
        let read = |f: &str| std::fs::read(manifest.out_dir.join(f)).map_err(|e| e.to_string());
        outputs.push((read("census.tsv")?, read("significance.tsv")?));
    }
    ensure(outputs[0] == outputs[1], "full enumeration rerun differs")?;
    ensure(outputs[0] == outputs[2], "full enumeration differs across worker counts")?;
    ensure(outputs[3] == outputs[4], "sampled enumeration differs across worker counts")?;
    ensure(outputs[0] != outputs[3], "sampled run identical to full run")?;
    Ok("census.tsv and significance.tsv byte-identical across reruns and 1/3/4 workers".into())
}

fn main() {
    let (c2, c3) = census_oracle();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 class-table cardinality", class_table_cardinality()),
        ("2 census oracle equivalence", c2),
        ("3 census total identity", c3),
        ("4 null-model exactness", null_model_exactness()),
        ("5 sampling unbiasedness", sampling_unbiasedness()),
        ("6 significance math", significance_math()),
        ("7 qualitative TSP reproduction", qualitative_tsp()),
        ("8 scale and performance", scale_and_performance()),
        ("9 determinism", determinism()),
    ];
    let mut failed = 0;
    for (name, outcome) in &criteria {
        match outcome {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
