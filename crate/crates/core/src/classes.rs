//! Isomorphism classes of weakly connected directed patterns on 3 and 4
//! vertices.
//!
//! A pattern on `k` labeled vertices is a bitmask with bit `i*k + j` set iff
//! arc `i -> j` is present (diagonal bits unused). Its canonical code is the
//! smallest mask reachable by relabeling the vertices. Hot-path lookups use a
//! packed index over the `k*(k-1)` off-diagonal positions instead of the raw
//! mask, so the k=4 table has 4096 entries.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Default triad numbering, one row per class: `export_id<TAB>adjacency`.
pub const DEFAULT_TRIAD_EXPORT_IDS: &str = include_str!("../data/triad_export_ids.tsv");

const NOT_CONNECTED: u16 = u16::MAX;

pub fn check_size(k: usize) -> Result<()> {
    match k {
        3 | 4 => Ok(()),
        _ => Err(Error::UnsupportedSize(k)),
    }
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

fn relabel(mask: u32, k: usize, perm: &[usize]) -> u32 {
    let mut out = 0u32;
    for i in 0..k {
        for j in 0..k {
            if i != j && mask & (1 << (i * k + j)) != 0 {
                out |= 1 << (perm[i] * k + perm[j]);
            }
        }
    }
    out
}

fn diagonal_bits(k: usize) -> u32 {
    (0..k).fold(0, |m, i| m | (1 << (i * k + i)))
}

/// Weak connectivity of a labeled pattern.
pub fn is_weakly_connected(mask: u32, k: usize) -> bool {
    let mut seen = 1u32;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for j in 0..k {
            let linked = mask & (1 << (i * k + j)) != 0 || mask & (1 << (j * k + i)) != 0;
            if linked && seen & (1 << j) == 0 {
                seen |= 1 << j;
                frontier.push(j);
            }
        }
    }
    seen.count_ones() as usize == k
}

/// Minimum mask over all `k!` relabelings of a weakly connected pattern.
pub fn canonical_code(mask: u32, k: usize) -> Result<u32> {
    check_size(k)?;
    if mask >> (k * k) != 0 || mask & diagonal_bits(k) != 0 || !is_weakly_connected(mask, k) {
        return Err(Error::Disconnected { mask, k });
    }
    Ok(permutations(k)
        .iter()
        .map(|p| relabel(mask, k, p))
        .min()
        .expect("k! >= 1"))
}

/// Expands a packed off-diagonal index into a `k*k` mask.
pub fn unpack(packed: u32, k: usize) -> u32 {
    let mut mask = 0u32;
    let mut bit = 0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                if packed & (1 << bit) != 0 {
                    mask |= 1 << (i * k + j);
                }
                bit += 1;
            }
        }
    }
    mask
}

/// Row-major `k*k` string of `0`/`1`.
pub fn adjacency_string(mask: u32, k: usize) -> String {
    (0..k * k)
        .map(|b| if mask & (1 << b) != 0 { '1' } else { '0' })
        .collect()
}

pub fn parse_adjacency_string(s: &str, k: usize) -> Option<u32> {
    if s.len() != k * k {
        return None;
    }
    s.chars().enumerate().try_fold(0u32, |m, (b, c)| match c {
        '0' => Some(m),
        '1' => Some(m | (1 << b)),
        _ => None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgraphClass {
    pub k: usize,
    pub canonical_code: u32,
    pub arc_count: u32,
    pub export_id: u32,
}

impl SubgraphClass {
    pub fn adjacency_string(&self) -> String {
        adjacency_string(self.canonical_code, self.k)
    }
}

/// The complete set of classes for one subgraph size. Internal class indices
/// follow ascending canonical code.
#[derive(Debug, Clone)]
pub struct ClassTable {
    k: usize,
    classes: Vec<SubgraphClass>,
    by_packed: Vec<u16>,
}

impl ClassTable {
    /// Enumerates every pattern, keeps the weakly connected ones and groups
    /// them by canonical code. Triads get the default export numbering; size-4
    /// classes are numbered by ascending canonical code.
    pub fn build(k: usize) -> Result<Self> {
        match k {
            3 => Self::with_export_ids(3, DEFAULT_TRIAD_EXPORT_IDS),
            _ => Self::ranked(k),
        }
    }

    /// Builds the table with export ids equal to the 1-based canonical rank.
    pub fn ranked(k: usize) -> Result<Self> {
        check_size(k)?;
        let pairs = k * (k - 1);
        let mut packed_codes = vec![None; 1 << pairs];
        let mut codes = BTreeSet::new();
        for (packed, slot) in packed_codes.iter_mut().enumerate() {
            let mask = unpack(packed as u32, k);
            if is_weakly_connected(mask, k) {
                let code = canonical_code(mask, k)?;
                codes.insert(code);
                *slot = Some(code);
            }
        }
        let expected = if k == 3 { 13 } else { 199 };
        assert_eq!(codes.len(), expected, "class count for k={k}");

        let codes: Vec<u32> = codes.into_iter().collect();
        let classes = codes
            .iter()
            .enumerate()
            .map(|(rank, &code)| SubgraphClass {
                k,
                canonical_code: code,
                arc_count: code.count_ones(),
                export_id: rank as u32 + 1,
            })
            .collect();
        let by_packed = packed_codes
            .iter()
            .map(|c| match c {
                Some(code) => codes.binary_search(code).expect("code present") as u16,
                None => NOT_CONNECTED,
            })
            .collect();
        Ok(ClassTable {
            k,
            classes,
            by_packed,
        })
    }

    /// Builds the table and assigns export ids from a data table with lines
    /// `export_id<TAB>adjacency_string`. Blank lines and `#` comments are
    /// skipped. Every class must be listed exactly once and the ids must be
    /// `1..=class_count`.
    pub fn with_export_ids(k: usize, table: &str) -> Result<Self> {
        let mut t = Self::ranked(k)?;
        let n = t.classes.len();
        let mut assigned = vec![None; n];
        let mut used = vec![false; n];
        for (idx, line) in table.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| Error::ExportTable(format!("line {}: {reason}", idx + 1));
            let mut fields = line.split_whitespace();
            let (Some(id), Some(adj), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad("expected `export_id adjacency`".into()));
            };
            let id: usize = id
                .parse()
                .ok()
                .filter(|&i| (1..=n).contains(&i))
                .ok_or_else(|| bad(format!("export id `{id}` outside 1..={n}")))?;
            let mask = parse_adjacency_string(adj, k)
                .ok_or_else(|| bad(format!("`{adj}` is not a {k}x{k} 0/1 matrix")))?;
            let code = canonical_code(mask, k).map_err(|e| bad(e.to_string()))?;
            let class = t.classes.binary_search_by_key(&code, |c| c.canonical_code).expect("complete table");
            if assigned[class].is_some() {
                return Err(bad(format!("class {} listed twice", adjacency_string(code, k))));
            }
            if used[id - 1] {
                return Err(bad(format!("export id {id} used twice")));
            }
            assigned[class] = Some(id as u32);
            used[id - 1] = true;
        }
        for (class, id) in t.classes.iter_mut().zip(&assigned) {
            class.export_id = id.ok_or_else(|| {
                Error::ExportTable(format!(
                    "class {} has no export id",
                    adjacency_string(class.canonical_code, k)
                ))
            })?;
        }
        Ok(t)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[SubgraphClass] {
        &self.classes
    }

    pub fn class(&self, index: usize) -> &SubgraphClass {
        &self.classes[index]
    }

    /// Class indices ordered by export id.
    pub fn export_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.classes[i].export_id);
        order
    }

    pub fn index_of_export_id(&self, export_id: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.export_id == export_id)
    }

    /// Class index of a packed off-diagonal pattern, if weakly connected.
    #[inline]
    pub fn index_of_packed(&self, packed: u32) -> Option<usize> {
        match self.by_packed[packed as usize] {
            NOT_CONNECTED => None,
            i => Some(i as usize),
        }
    }

    pub(crate) fn packed_lookup(&self) -> &[u16] {
        &self.by_packed
    }

    /// Classifies a labeled `k*k` mask.
    pub fn classify(&self, mask: u32) -> Result<&SubgraphClass> {
        let code = canonical_code(mask, self.k)?;
        let i = self
            .classes
            .binary_search_by_key(&code, |c| c.canonical_code)
            .expect("every connected pattern has a class");
        Ok(&self.classes[i])
    }

    /// Same export ids and canonical codes.
    pub fn same_classes(&self, other: &ClassTable) -> bool {
        self.k == other.k && self.classes == other.classes
    }
}

/// Shorthand for `ClassTable::build(k)?.classify(mask)`.
pub fn canonical_class(mask: u32, k: usize) -> Result<SubgraphClass> {
    ClassTable::build(k)?.classify(mask).copied()
}
