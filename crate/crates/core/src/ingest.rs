//! Word-adjacency networks from running text.
//!
//! Every distinct normalized word becomes a vertex; two words that follow one
//! another inside a sentence are joined by an arc from the first to the
//! second. Repeated pairs collapse to one arc.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::graph::{DirectedGraph, Vertex};

const SENTENCE_FINAL: [char; 4] = ['.', '!', '?', '…'];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestConfig {
    pub lowercase: bool,
    /// Adjacent pairs never cross sentence-final punctuation.
    pub sentence_break: bool,
    pub drop_self_loops: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            lowercase: true,
            sentence_break: true,
            drop_self_loops: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Ordinal index in the whole token stream.
    pub position: usize,
}

pub type Sentence = Vec<Token>;

/// Splits `text` on whitespace, strips leading and trailing punctuation from
/// each chunk, and groups the surviving tokens into sentences.
pub fn tokenize(text: &str, config: &IngestConfig) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut current: Sentence = Vec::new();
    let mut position = 0usize;

    for chunk in text.split_whitespace() {
        let core = chunk.trim_matches(|c: char| !c.is_alphanumeric());
        let tail = match chunk.rfind(|c: char| c.is_alphanumeric()) {
            Some(i) => &chunk[i..],
            None => chunk,
        };
        if !core.is_empty() {
            let surface = if config.lowercase {
                core.to_lowercase()
            } else {
                core.to_string()
            };
            current.push(Token { surface, position });
            position += 1;
        }
        if config.sentence_break && tail.contains(SENTENCE_FINAL) && !current.is_empty() {
            sentences.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}

/// Bijection between words and dense vertex ids, assigned in order of first
/// occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, Vertex>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<Vertex> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: Vertex) -> Option<&str> {
        self.words.get(id as usize).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &str)> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| (i as Vertex, w.as_str()))
    }

    fn intern(&mut self, word: &str) -> Vertex {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = self.words.len() as Vertex;
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), id);
        id
    }

    /// `<id>\t<word>` per line.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (id, w) in self.iter() {
            let _ = writeln!(s, "{id}\t{w}");
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Network {
    pub graph: DirectedGraph,
    pub vocabulary: Vocabulary,
    /// Running tokens across all sentences.
    pub words: usize,
    /// Vertices with a repeated-word self-loop. Only filled when
    /// `drop_self_loops` is off; the graph itself never holds loops.
    pub self_loops: Vec<Vertex>,
}

impl Network {
    /// Edge-list text: sorted arcs, followed by self-loop lines when kept.
    pub fn edgelist(&self) -> String {
        let mut s = crate::graph::save_edgelist(&self.graph);
        for &v in &self.self_loops {
            let _ = writeln!(s, "{v} {v}");
        }
        s
    }
}

pub fn build_network(sentences: &[Sentence], config: &IngestConfig) -> Network {
    let mut vocabulary = Vocabulary::default();
    let mut arcs: Vec<(Vertex, Vertex)> = Vec::new();
    let mut loops: Vec<Vertex> = Vec::new();
    let mut words = 0usize;

    for sentence in sentences {
        words += sentence.len();
        let mut prev: Option<Vertex> = None;
        for token in sentence {
            let id = vocabulary.intern(&token.surface);
            if let Some(p) = prev {
                if p == id {
                    if !config.drop_self_loops {
                        loops.push(id);
                    }
                } else {
                    arcs.push((p, id));
                }
            }
            prev = Some(id);
        }
    }
    loops.sort_unstable();
    loops.dedup();

    let graph = DirectedGraph::from_arcs(vocabulary.len(), arcs)
        .expect("adjacent distinct words always form a valid arc");
    Network {
        graph,
        vocabulary,
        words,
        self_loops: loops,
    }
}

/// Tokenizes and builds in one step.
pub fn ingest_text(text: &str, config: &IngestConfig) -> Network {
    build_network(&tokenize(text, config), config)
}
