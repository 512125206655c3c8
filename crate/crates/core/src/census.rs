//! Connected induced subgraph census by ESU enumeration.
//!
//! Each weakly connected `k`-vertex set is reached exactly once: the set is
//! grown from its smallest vertex (the root) by adding only exclusive
//! neighbors with a larger id. The loop over roots runs in parallel and
//! accumulates integer counts, so the result does not depend on the number
//! of workers.
//!
//! Sampled enumeration (RAND-ESU) keeps every child at depth `d` with
//! probability `p_d`. Every surviving leaf stands for `1 / prod(p)` subgraphs.
//! Random streams: root `v` draws from `ChaCha8Rng::seed_from_u64(seed)` with
//! its stream set to `v`, so results depend only on `(seed, graph)` and never
//! on scheduling.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classes::{check_size, ClassTable};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub struct CensusResult {
    k: usize,
    hits: Vec<u64>,
    weight: f64,
}

impl CensusResult {
    /// Exact counts, one per class in table order.
    pub fn from_counts(k: usize, counts: Vec<u64>) -> Self {
        CensusResult {
            k,
            hits: counts,
            weight: 1.0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn class_count(&self) -> usize {
        self.hits.len()
    }

    /// Leaves reached per class, before weighting.
    pub fn hits(&self) -> &[u64] {
        &self.hits
    }

    /// Weight carried by each leaf (1 for full enumeration).
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn count(&self, class: usize) -> f64 {
        self.hits[class] as f64 * self.weight
    }

    pub fn counts(&self) -> Vec<f64> {
        (0..self.hits.len()).map(|i| self.count(i)).collect()
    }

    pub fn total(&self) -> f64 {
        self.hits.iter().sum::<u64>() as f64 * self.weight
    }

    /// `count / total`, all zero for an empty census.
    pub fn frequencies(&self) -> Vec<f64> {
        let total: u64 = self.hits.iter().sum();
        self.hits
            .iter()
            .map(|&h| if total == 0 { 0.0 } else { h as f64 / total as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Sampling<'a> {
    probs: &'a [f64],
}

struct Esu<'a> {
    g: &'a DirectedGraph,
    k: usize,
    classes: usize,
    lookup: &'a [u16],
    triad_lookup: [u16; 64],
    sampling: Option<Sampling<'a>>,
    force_general: bool,
}

impl<'a> Esu<'a> {
    fn keep(&self, depth: usize, rng: &mut Option<ChaCha8Rng>) -> bool {
        match (self.sampling, rng) {
            (Some(s), Some(rng)) => {
                let p = s.probs[depth - 1];
                p >= 1.0 || rng.gen::<f64>() < p
            }
            _ => true,
        }
    }

    #[inline]
    fn leaf(&self, sub: &[Vertex], counts: &mut [u64]) {
        let mut packed = 0u32;
        let mut bit = 0;
        for (i, &a) in sub.iter().enumerate() {
            let row = self.g.out_neighbors(a);
            for (j, &b) in sub.iter().enumerate() {
                if i != j {
                    if row.binary_search(&b).is_ok() {
                        packed |= 1 << bit;
                    }
                    bit += 1;
                }
            }
        }
        let class = self.lookup[packed as usize];
        debug_assert!(class != u16::MAX, "ESU produced a disconnected set");
        counts[class as usize] += 1;
    }

    /// `u` is an exclusive neighbor with respect to `sub`: not in it and not
    /// adjacent to any member.
    #[inline]
    fn exclusive(&self, u: Vertex, sub: &[Vertex]) -> bool {
        sub.iter().all(|&s| s != u && !self.g.adjacent(s, u))
    }

    fn root(&self, v: Vertex, counts: &mut [u64], rng: &mut Option<ChaCha8Rng>) {
        if !self.keep(1, rng) {
            return;
        }
        let mut sub = [0 as Vertex; 4];
        sub[0] = v;
        let mut ext: Vec<Vertex> = self
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| u > v)
            .collect();
        self.extend(&mut sub, 1, &mut ext, counts, rng);
    }

    /// `sub[..size]` is the current set, `ext` its extension set.
    fn extend(
        &self,
        sub: &mut [Vertex; 4],
        size: usize,
        ext: &mut Vec<Vertex>,
        counts: &mut [u64],
        rng: &mut Option<ChaCha8Rng>,
    ) {
        let root = sub[0];
        while let Some(w) = ext.pop() {
            if !self.keep(size + 1, rng) {
                continue;
            }
            sub[size] = w;
            if size + 1 == self.k {
                self.leaf(&sub[..self.k], counts);
                continue;
            }
            if size + 2 == self.k {
                // Children of this node are leaves; walk them without
                // materializing the next extension set.
                for i in 0..ext.len() {
                    if self.keep(size + 2, rng) {
                        sub[size + 1] = ext[i];
                        self.leaf(&sub[..self.k], counts);
                    }
                }
                for &u in self.g.neighbors(w) {
                    if u > root && self.exclusive(u, &sub[..size]) && self.keep(size + 2, rng) {
                        sub[size + 1] = u;
                        self.leaf(&sub[..self.k], counts);
                    }
                }
                continue;
            }
            let mut next = ext.clone();
            next.extend(
                self.g
                    .neighbors(w)
                    .iter()
                    .copied()
                    .filter(|&u| u > root && self.exclusive(u, &sub[..size])),
            );
            self.extend(sub, size + 1, &mut next, counts, rng);
        }
    }

    /// Triad specialization of [`Esu::root`]. Visits the same leaves in the
    /// same order (so sampled runs draw identical random numbers) but reads
    /// dyad states from marked neighborhoods instead of searching rows.
    fn root_triads(&self, v: Vertex, counts: &mut [u64], rng: &mut Option<ChaCha8Rng>, scratch: &mut Scratch) {
        if !self.keep(1, rng) {
            return;
        }
        let (row, dirs) = self.g.neighbors_with_dirs(v);
        let root_mark = v + 1;
        for &u in row {
            scratch.root[u as usize] = root_mark;
        }
        let start = row.partition_point(|&u| u <= v);
        for idx in (start..row.len()).rev() {
            if !self.keep(2, rng) {
                continue;
            }
            let w = row[idx];
            let dvw = dirs[idx] as usize;
            let stamp = scratch.next_stamp();
            let (wrow, wdirs) = self.g.neighbors_with_dirs(w);
            for (&u, &d) in wrow.iter().zip(wdirs) {
                scratch.mark[u as usize] = stamp;
                scratch.dir[u as usize] = d;
            }
            for j in start..idx {
                if self.keep(3, rng) {
                    let u = row[j] as usize;
                    let dwu = if scratch.mark[u] == stamp { scratch.dir[u] as usize } else { 0 };
                    counts[self.triad_lookup[dvw | (dirs[j] as usize) << 2 | dwu << 4] as usize] += 1;
                }
            }
            for (&u, &dwu) in wrow.iter().zip(wdirs) {
                if u > v && scratch.root[u as usize] != root_mark && self.keep(3, rng) {
                    counts[self.triad_lookup[dvw | (dwu as usize) << 4] as usize] += 1;
                }
            }
        }
    }

    fn run(&self, seed: u64) -> Vec<u64> {
        let classes = self.classes;
        let n = self.g.vertex_count();
        let sampled = self.sampling.is_some();
        let fast = self.k == 3 && !self.force_general;
        (0..n as Vertex)
            .into_par_iter()
            .fold(
                || (vec![0u64; classes], fast.then(|| Scratch::new(n))),
                |(mut acc, mut scratch), v| {
                    let mut rng = sampled.then(|| {
                        let mut r = ChaCha8Rng::seed_from_u64(seed);
                        r.set_stream(v as u64);
                        r
                    });
                    match scratch.as_mut() {
                        Some(sc) => self.root_triads(v, &mut acc, &mut rng, sc),
                        None => self.root(v, &mut acc, &mut rng),
                    }
                    (acc, scratch)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(
                || vec![0u64; classes],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }

    fn new(g: &'a DirectedGraph, table: &'a ClassTable, sampling: Option<Sampling<'a>>) -> Self {
        let lookup = table.packed_lookup();
        let mut triad_lookup = [u16::MAX; 64];
        if table.k() == 3 {
            // Dyad codes of (v,w), (v,u), (w,u) -> packed pattern on labels
            // v=0, w=1, u=2.
            for (i, slot) in triad_lookup.iter_mut().enumerate() {
                let (vw, vu, wu) = (i & 3, (i >> 2) & 3, (i >> 4) & 3);
                let packed = (vw & 1) | (vu & 1) << 1 | (vw >> 1) << 2 | (wu & 1) << 3 | (vu >> 1) << 4 | (wu >> 1) << 5;
                *slot = lookup[packed];
            }
        }
        Esu {
            g,
            k: table.k(),
            classes: table.len(),
            lookup,
            triad_lookup,
            sampling,
            force_general: false,
        }
    }
}

/// Per-worker marks for the triad path.
struct Scratch {
    root: Vec<Vertex>,
    mark: Vec<u32>,
    dir: Vec<u8>,
    stamp: u32,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            root: vec![0; n],
            mark: vec![0; n],
            dir: vec![0; n],
            stamp: 0,
        }
    }

    fn next_stamp(&mut self) -> u32 {
        if self.stamp == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 1;
        self.stamp
    }
}

/// Counts every weakly connected induced `k`-vertex subgraph of `g`.
pub fn enumerate_full(g: &DirectedGraph, table: &ClassTable) -> CensusResult {
    let esu = Esu::new(g, table, None);
    CensusResult::from_counts(table.k(), esu.run(0))
}

/// Unbiased estimate of the census from a RAND-ESU sample.
pub fn enumerate_sampled(
    g: &DirectedGraph,
    table: &ClassTable,
    probs: &[f64],
    seed: u64,
) -> Result<CensusResult> {
    let k = table.k();
    check_size(k)?;
    if probs.len() != k {
        return Err(Error::SamplingProbabilities(format!(
            "expected {k} values, got {}",
            probs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(Error::SamplingProbabilities(format!("{p} is outside (0, 1]")));
    }
    let esu = Esu::new(g, table, Some(Sampling { probs }));
    let hits = esu.run(seed);
    Ok(CensusResult {
        k,
        hits,
        weight: 1.0 / probs.iter().product::<f64>(),
    })
}

/// Full or sampled enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum Enumeration {
    Full,
    Sampled { probs: Vec<f64>, seed: u64 },
}

impl Enumeration {
    pub fn run(&self, g: &DirectedGraph, table: &ClassTable) -> Result<CensusResult> {
        match self {
            Enumeration::Full => Ok(enumerate_full(g, table)),
            Enumeration::Sampled { probs, seed } => enumerate_sampled(g, table, probs, *seed),
        }
    }
}

pub const CENSUS_HEADER: &str =
    "class_export_id\tcanonical_code\tadjacency_string\tarc_count\tcount\tfrequency";

/// Census TSV, rows in export-id order.
pub fn census_tsv(result: &CensusResult, table: &ClassTable) -> String {
    let freq = result.frequencies();
    let mut s = String::new();
    s.push_str(CENSUS_HEADER);
    s.push('\n');
    for i in table.export_order() {
        let c = table.class(i);
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}",
            c.export_id,
            c.canonical_code,
            c.adjacency_string(),
            c.arc_count,
            result.count(i),
            freq[i]
        );
    }
    s
}
