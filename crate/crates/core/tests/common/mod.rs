#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wordmotif::classes::is_weakly_connected;
use wordmotif::{ClassTable, DirectedGraph, Vertex};

/// Erdos-Renyi digraph: every ordered pair is an arc with probability `p`.
pub fn random_digraph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> DirectedGraph {
    let mut arcs = Vec::new();
    for u in 0..n as Vertex {
        for v in 0..n as Vertex {
            if u != v && rng.gen::<f64>() < p {
                arcs.push((u, v));
            }
        }
    }
    DirectedGraph::from_arcs(n, arcs).unwrap()
}

/// Brute-force census over all k-subsets: build each labeled mask directly,
/// keep the weakly connected ones and classify through the canonical code.
/// Returns (per-class counts in table order, number of connected subsets).
pub fn brute_force_census(g: &DirectedGraph, table: &ClassTable) -> (Vec<u64>, u64) {
    let k = table.k();
    let n = g.vertex_count();
    let mut counts = vec![0u64; table.len()];
    let mut connected = 0u64;
    let mut idx: Vec<usize> = (0..k).collect();
    if n < k {
        return (counts, 0);
    }
    loop {
        let mut mask = 0u32;
        for i in 0..k {
            for j in 0..k {
                if i != j && g.has_arc(idx[i] as Vertex, idx[j] as Vertex) {
                    mask |= 1 << (i * k + j);
                }
            }
        }
        if is_weakly_connected(mask, k) {
            connected += 1;
            let code = wordmotif::canonical_code(mask, k).unwrap();
            let class = table
                .classes()
                .iter()
                .position(|c| c.canonical_code == code)
                .unwrap();
            counts[class] += 1;
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return (counts, connected);
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return (counts, connected);
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Synthetic running text: words drawn from a Zipf law over `vocab` types,
/// sentences of 5..=30 words.
pub fn zipf_text(words: usize, vocab: usize, exponent: f64, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cdf = Vec::with_capacity(vocab);
    let mut acc = 0.0;
    for r in 1..=vocab {
        acc += 1.0 / (r as f64).powf(exponent);
        cdf.push(acc);
    }
    let mut s = String::with_capacity(words * 8);
    let mut left_in_sentence = 0usize;
    for _ in 0..words {
        if left_in_sentence == 0 {
            left_in_sentence = rng.gen_range(5..=30);
        }
        let x = rng.gen::<f64>() * acc;
        let r = cdf.partition_point(|&c| c < x);
        s.push_str(&format!("w{r}"));
        left_in_sentence -= 1;
        s.push_str(if left_in_sentence == 0 { ". " } else { " " });
    }
    s
}
