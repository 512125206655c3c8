//! Immutable simple directed graph stored as compressed adjacency rows.
//!
//! Three row sets are kept: out-neighbors, in-neighbors, and the undirected
//! union of both (deduplicated). Every row is sorted, so arc queries are a
//! binary search. The undirected rows drive subgraph enumeration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Sorted adjacency rows in compressed form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Rows {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Rows {
    /// `pairs` must be sorted and deduplicated.
    fn from_sorted_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, v)| v).collect();
        Rows { offsets, targets }
    }

    #[inline]
    fn row(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    out: Rows,
    inc: Rows,
    und: Rows,
    /// Parallel to `und.targets`: for row `x`, entry `y`, bit 0 is `x -> y`
    /// and bit 1 is `y -> x`.
    und_dirs: Vec<u8>,
}

impl DirectedGraph {
    /// Builds a graph on `n` vertices. Duplicate arcs collapse; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut out: Vec<(Vertex, Vertex)> = Vec::new();
        for (u, v) in arcs {
            if u == v {
                return Err(Error::SelfLoop(u, v));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::VertexOutOfRange { from: u, to: v, n });
            }
            out.push((u, v));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self::from_sorted_unique(n, out))
    }

    fn from_sorted_unique(n: usize, out: Vec<(Vertex, Vertex)>) -> Self {
        let mut inc: Vec<(Vertex, Vertex)> = out.iter().map(|&(u, v)| (v, u)).collect();
        inc.sort_unstable();
        let mut coded: Vec<(Vertex, Vertex, u8)> = Vec::with_capacity(out.len() * 2);
        coded.extend(out.iter().map(|&(u, v)| (u, v, 1)));
        coded.extend(inc.iter().map(|&(v, u)| (v, u, 2)));
        coded.sort_unstable();
        let mut und: Vec<(Vertex, Vertex)> = Vec::with_capacity(coded.len());
        let mut und_dirs: Vec<u8> = Vec::with_capacity(coded.len());
        for (x, y, code) in coded {
            if und.last() == Some(&(x, y)) {
                *und_dirs.last_mut().expect("parallel to und") |= code;
            } else {
                und.push((x, y));
                und_dirs.push(code);
            }
        }
        DirectedGraph {
            n,
            out: Rows::from_sorted_pairs(n, &out),
            inc: Rows::from_sorted_pairs(n, &inc),
            und: Rows::from_sorted_pairs(n, &und),
            und_dirs,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out.targets.len()
    }

    #[inline]
    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.out.row(u).binary_search(&v).is_ok()
    }

    /// True when `u` and `v` are joined by an arc in either direction.
    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.und.row(u).len() <= self.und.row(v).len() {
            (u, v)
        } else {
            (v, u)
        };
        self.und.row(a).binary_search(&b).is_ok()
    }

    #[inline]
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        self.out.row(v)
    }

    #[inline]
    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        self.inc.row(v)
    }

    /// Union of in- and out-neighbors, sorted and deduplicated.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.und.row(v)
    }

    /// Undirected row of `v` with its direction codes: bit 0 of `dirs[i]` is
    /// `v -> row[i]`, bit 1 is `row[i] -> v`.
    #[inline]
    pub fn neighbors_with_dirs(&self, v: Vertex) -> (&[Vertex], &[u8]) {
        let (a, b) = (self.und.offsets[v as usize], self.und.offsets[v as usize + 1]);
        (&self.und.targets[a..b], &self.und_dirs[a..b])
    }

    /// Arcs in lexicographic `(source, target)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n as Vertex).flat_map(move |u| self.out.row(u).iter().map(move |&v| (u, v)))
    }

    /// Per-vertex `(in_degree, out_degree)`.
    pub fn degrees(&self) -> Vec<(usize, usize)> {
        (0..self.n as Vertex)
            .map(|v| (self.in_neighbors(v).len(), self.out_neighbors(v).len()))
            .collect()
    }

    /// Number of unordered pairs `{u, v}` joined by arcs in both directions.
    pub fn mutual_dyads(&self) -> usize {
        self.arcs()
            .filter(|&(u, v)| u < v && self.has_arc(v, u))
            .count()
    }

    /// Vertices adjacent (either direction) to some member of `subset` that
    /// are not themselves in `subset`, in ascending order.
    pub fn neighbors_exclusive(&self, subset: &[Vertex]) -> Vec<Vertex> {
        let mut found: Vec<Vertex> = subset
            .iter()
            .flat_map(|&v| self.neighbors(v).iter().copied())
            .filter(|w| !subset.contains(w))
            .collect();
        found.sort_unstable();
        found.dedup();
        found
    }
}

/// Outcome of parsing an edge-list file.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    /// `original_ids[v]` is the id vertex `v` carried in the input file.
    pub original_ids: Vec<u64>,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    pub lines_with_extra_columns: usize,
}

/// Parses the whitespace-separated edge-list format: one arc per line as two
/// non-negative integers, optionally followed by up to three ignored color
/// columns. `#` starts a comment line. Vertex ids are compacted to `0..N`
/// preserving their numeric order.
pub fn load_edgelist(text: &str) -> Result<LoadedGraph> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0usize;
    let mut extra = 0usize;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 5 {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("expected 2 to 5 integers, found {} fields", fields.len()),
            });
        }
        let mut ints = [0u64; 5];
        for (slot, field) in ints.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("`{field}` is not a non-negative integer"),
            })?;
        }
        if fields.len() > 2 {
            extra += 1;
        }
        if ints[0] == ints[1] {
            log::warn!("line {lineno}: self-loop on vertex {} dropped", ints[0]);
            self_loops += 1;
            continue;
        }
        raw.push((ints[0], ints[1]));
    }
    if extra > 0 {
        log::warn!("{extra} line(s) carry color columns; columns beyond the first two are ignored");
    }

    let mut ids: BTreeMap<u64, Vertex> = BTreeMap::new();
    for &(u, v) in &raw {
        ids.insert(u, 0);
        ids.insert(v, 0);
    }
    for (i, slot) in ids.values_mut().enumerate() {
        *slot = i as Vertex;
    }
    let original_ids: Vec<u64> = ids.keys().copied().collect();

    let mut arcs: Vec<(Vertex, Vertex)> = raw.iter().map(|(u, v)| (ids[u], ids[v])).collect();
    let before = arcs.len();
    arcs.sort_unstable();
    arcs.dedup();
    let duplicates = before - arcs.len();

    Ok(LoadedGraph {
        graph: DirectedGraph::from_sorted_unique(original_ids.len(), arcs),
        original_ids,
        self_loops_dropped: self_loops,
        duplicates_collapsed: duplicates,
        lines_with_extra_columns: extra,
    })
}

/// Writes arcs as `u v` lines in sorted order using the compact ids.
pub fn save_edgelist(g: &DirectedGraph) -> String {
    let mut s = String::with_capacity(g.arc_count() * 12);
    for (u, v) in g.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}
