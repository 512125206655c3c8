//! Degree-preserving randomization by arc swaps.
//!
//! A swap takes arcs `a->b` and `c->d` and rewires them to `a->d` and `c->b`.
//! With `preserve_reciprocal` on, single arcs only swap with single arcs and
//! must not create a new mutual dyad, while mutual pairs `a<->b`, `c<->d`
//! swap as units into `a<->d`, `c<->b`. Both keep every vertex's in- and
//! out-degree and the mutual-dyad count.
//!
//! Replica `i` draws from `ChaCha8Rng::seed_from_u64(seed)` with its stream
//! set to `i`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizeConfig {
    pub num_networks: usize,
    /// Swap rounds per arc; a replica runs `exchanges_per_edge * K` rounds.
    pub exchanges_per_edge: usize,
    /// Tries per round before the round counts as failed.
    pub exchange_attempts: usize,
    pub preserve_reciprocal: bool,
    pub seed: u64,
}

impl Default for RandomizeConfig {
    fn default() -> Self {
        RandomizeConfig {
            num_networks: 1000,
            exchanges_per_edge: 3,
            exchange_attempts: 3,
            preserve_reciprocal: true,
            seed: 0,
        }
    }
}

impl RandomizeConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("num_networks", self.num_networks),
            ("exchanges_per_edge", self.exchanges_per_edge),
            ("exchange_attempts", self.exchange_attempts),
        ] {
            if v == 0 {
                return Err(Error::RandomizeConfig(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SwapReport {
    pub attempted: u64,
    pub successful: u64,
}

impl SwapReport {
    pub fn success_ratio(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.successful as f64 / self.attempted as f64
        }
    }
}

pub const LOW_SUCCESS_RATIO: f64 = 0.5;

#[inline]
fn key(u: Vertex, v: Vertex) -> u64 {
    ((u as u64) << 32) | v as u64
}

struct Swapper {
    arcs: FxHashSet<u64>,
    /// Arcs without a reverse arc (all arcs when reciprocity is ignored).
    singles: Vec<(Vertex, Vertex)>,
    /// Mutual dyads, stored once each.
    mutual: Vec<(Vertex, Vertex)>,
    preserve_reciprocal: bool,
}

impl Swapper {
    fn new(g: &DirectedGraph, preserve_reciprocal: bool) -> Self {
        let mut arcs = FxHashSet::default();
        arcs.reserve(g.arc_count());
        let mut singles = Vec::new();
        let mut mutual = Vec::new();
        for (u, v) in g.arcs() {
            arcs.insert(key(u, v));
            if preserve_reciprocal && g.has_arc(v, u) {
                if u < v {
                    mutual.push((u, v));
                }
            } else {
                singles.push((u, v));
            }
        }
        Swapper {
            arcs,
            singles,
            mutual,
            preserve_reciprocal,
        }
    }

    #[inline]
    fn has(&self, u: Vertex, v: Vertex) -> bool {
        self.arcs.contains(&key(u, v))
    }

    fn two_distinct(len: usize, rng: &mut ChaCha8Rng) -> Option<(usize, usize)> {
        if len < 2 {
            return None;
        }
        let i = rng.gen_range(0..len);
        let mut j = rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        Some((i, j))
    }

    fn try_single(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let Some((i, j)) = Self::two_distinct(self.singles.len(), rng) else {
            return false;
        };
        let (a, b) = self.singles[i];
        let (c, d) = self.singles[j];
        if a == c || b == d || a == d || c == b || self.has(a, d) || self.has(c, b) {
            return false;
        }
        if self.preserve_reciprocal && (self.has(d, a) || self.has(b, c)) {
            return false;
        }
        for (u, v) in [(a, b), (c, d)] {
            self.arcs.remove(&key(u, v));
        }
        for (u, v) in [(a, d), (c, b)] {
            self.arcs.insert(key(u, v));
        }
        self.singles[i] = (a, d);
        self.singles[j] = (c, b);
        true
    }

    fn try_mutual(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let Some((i, j)) = Self::two_distinct(self.mutual.len(), rng) else {
            return false;
        };
        let (a, b) = self.mutual[i];
        let (c, d) = if rng.gen::<bool>() {
            self.mutual[j]
        } else {
            let (x, y) = self.mutual[j];
            (y, x)
        };
        if a == c || a == d || b == c || b == d {
            return false;
        }
        if self.has(a, d) || self.has(d, a) || self.has(c, b) || self.has(b, c) {
            return false;
        }
        for (u, v) in [(a, b), (b, a), (c, d), (d, c)] {
            self.arcs.remove(&key(u, v));
        }
        for (u, v) in [(a, d), (d, a), (c, b), (b, c)] {
            self.arcs.insert(key(u, v));
        }
        self.mutual[i] = (a.min(d), a.max(d));
        self.mutual[j] = (c.min(b), c.max(b));
        true
    }

    /// One round: choose an arc uniformly, then swap within its kind.
    fn round(&mut self, attempts: usize, rng: &mut ChaCha8Rng) -> bool {
        let total = self.singles.len() + 2 * self.mutual.len();
        for _ in 0..attempts {
            let pick = rng.gen_range(0..total);
            let ok = if pick < self.singles.len() {
                self.try_single(rng)
            } else {
                self.try_mutual(rng)
            };
            if ok {
                return true;
            }
        }
        false
    }

    fn into_graph(self, n: usize) -> DirectedGraph {
        let arcs = self.arcs.iter().map(|&k| ((k >> 32) as Vertex, k as Vertex));
        DirectedGraph::from_arcs(n, arcs).expect("swaps keep the graph simple")
    }
}

pub fn replica_rng(seed: u64, replica_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica_index);
    rng
}

/// Produces replica `replica_index` of `g`.
pub fn randomize(
    g: &DirectedGraph,
    config: &RandomizeConfig,
    replica_index: u64,
) -> Result<(DirectedGraph, SwapReport)> {
    config.validate()?;
    if g.arc_count() < 2 {
        return Err(Error::TooFewArcs(g.arc_count()));
    }
    let mut rng = replica_rng(config.seed, replica_index);
    let mut swapper = Swapper::new(g, config.preserve_reciprocal);
    let rounds = (config.exchanges_per_edge * g.arc_count()) as u64;
    let mut report = SwapReport {
        attempted: rounds,
        successful: 0,
    };
    for _ in 0..rounds {
        if swapper.round(config.exchange_attempts, &mut rng) {
            report.successful += 1;
        }
    }
    if report.success_ratio() < LOW_SUCCESS_RATIO {
        log::warn!(
            "replica {replica_index}: only {}/{} swap rounds succeeded; consider raising exchange attempts or checking the network",
            report.successful,
            report.attempted
        );
    }
    Ok((swapper.into_graph(g.vertex_count()), report))
}

/// Lazily generated replicas; `replica(i)` can also be called out of order
/// from parallel workers.
#[derive(Debug, Clone)]
pub struct Ensemble<'g> {
    graph: &'g DirectedGraph,
    config: RandomizeConfig,
    next: usize,
}

pub fn generate_ensemble<'g>(g: &'g DirectedGraph, config: &RandomizeConfig) -> Result<Ensemble<'g>> {
    config.validate()?;
    if g.arc_count() < 2 {
        return Err(Error::TooFewArcs(g.arc_count()));
    }
    Ok(Ensemble {
        graph: g,
        config: *config,
        next: 0,
    })
}

impl Ensemble<'_> {
    pub fn len(&self) -> usize {
        self.config.num_networks
    }

    pub fn is_empty(&self) -> bool {
        self.config.num_networks == 0
    }

    pub fn replica(&self, index: usize) -> (DirectedGraph, SwapReport) {
        randomize(self.graph, &self.config, index as u64).expect("validated on construction")
    }
}

impl Iterator for Ensemble<'_> {
    type Item = (DirectedGraph, SwapReport);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.config.num_networks {
            return None;
        }
        let item = self.replica(self.next);
        self.next += 1;
        Some(item)
    }
}
