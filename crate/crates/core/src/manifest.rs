//! Line-based `key = value` run manifest.
//!
//! Blank lines and `#` comments are ignored. Unknown keys are an error so a
//! typo never silently falls back to a default. [`RunManifest::to_text`]
//! writes every key, so a saved manifest pins the full configuration.

use std::path::PathBuf;

use crate::census::Enumeration;
use crate::error::{Error, Result};
use crate::ingest::IngestConfig;
use crate::null_model::RandomizeConfig;
use crate::significance::DEFAULT_CUTOFF;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    EdgeList,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub input: Option<PathBuf>,
    pub input_format: InputFormat,
    /// Dataset name used in reports; defaults to the input file stem.
    pub label: Option<String>,
    pub ingest: IngestConfig,
    pub subgraph_size: usize,
    /// `None` for full enumeration.
    pub sample_probs: Option<Vec<f64>>,
    pub randomize: RandomizeConfig,
    pub cutoff: f64,
    pub out_dir: PathBuf,
    pub ascii_report: bool,
    pub html_report: bool,
    pub dump_replicas: bool,
    pub triad_id_table: Option<PathBuf>,
}

impl Default for RunManifest {
    fn default() -> Self {
        RunManifest {
            input: None,
            input_format: InputFormat::EdgeList,
            label: None,
            ingest: IngestConfig::default(),
            subgraph_size: 3,
            sample_probs: None,
            randomize: RandomizeConfig::default(),
            cutoff: DEFAULT_CUTOFF,
            out_dir: PathBuf::from("out"),
            ascii_report: true,
            html_report: true,
            dump_replicas: false,
            triad_id_table: None,
        }
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "on" | "yes" | "1" => Some(true),
        "false" | "off" | "no" | "0" => Some(false),
        _ => None,
    }
}

pub fn parse_probs(v: &str) -> Option<Vec<f64>> {
    v.split(',').map(|p| p.trim().parse::<f64>().ok()).collect()
}

impl RunManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = RunManifest::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::Manifest {
                line: idx + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let boolean = || parse_bool(value).ok_or_else(|| err(format!("`{value}` is not a boolean")));
            let integer = || {
                value
                    .parse::<u64>()
                    .map_err(|_| err(format!("`{value}` is not a non-negative integer")))
            };
            match key {
                "input" => m.input = Some(PathBuf::from(value)),
                "input_format" => {
                    m.input_format = match value {
                        "edgelist" => InputFormat::EdgeList,
                        "text" => InputFormat::Text,
                        _ => return Err(err(format!("input_format `{value}` is not edgelist or text"))),
                    }
                }
                "label" => m.label = Some(value.to_string()),
                "lowercase" => m.ingest.lowercase = boolean()?,
                "sentence_break" => m.ingest.sentence_break = boolean()?,
                "drop_self_loops" => m.ingest.drop_self_loops = boolean()?,
                "subgraph_size" => m.subgraph_size = integer()? as usize,
                "enumeration" => match value {
                    "full" => m.sample_probs = None,
                    "sampled" => {
                        m.sample_probs.get_or_insert_with(Vec::new);
                    }
                    _ => return Err(err(format!("enumeration `{value}` is not full or sampled"))),
                },
                "sample_probs" => {
                    m.sample_probs =
                        Some(parse_probs(value).ok_or_else(|| err(format!("`{value}` is not a list of numbers")))?)
                }
                "num_networks" => m.randomize.num_networks = integer()? as usize,
                "exchanges_per_edge" => m.randomize.exchanges_per_edge = integer()? as usize,
                "exchange_attempts" => m.randomize.exchange_attempts = integer()? as usize,
                "preserve_reciprocal" => m.randomize.preserve_reciprocal = boolean()?,
                "seed" => m.randomize.seed = integer()?,
                "cutoff" => {
                    m.cutoff = value
                        .parse()
                        .ok()
                        .filter(|c: &f64| *c > 0.0 && *c <= 1.0)
                        .ok_or_else(|| err(format!("cutoff `{value}` is not in (0, 1]")))?
                }
                "out_dir" => m.out_dir = PathBuf::from(value),
                "ascii_report" => m.ascii_report = boolean()?,
                "html_report" => m.html_report = boolean()?,
                "dump_replicas" => m.dump_replicas = boolean()?,
                "triad_id_table" => m.triad_id_table = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        Ok(m)
    }

    pub fn enumeration(&self) -> Result<Enumeration> {
        match &self.sample_probs {
            None => Ok(Enumeration::Full),
            Some(p) if p.len() == self.subgraph_size => Ok(Enumeration::Sampled {
                probs: p.clone(),
                seed: self.randomize.seed,
            }),
            Some(p) => Err(Error::SamplingProbabilities(format!(
                "expected {} values for subgraph size {}, got {}",
                self.subgraph_size,
                self.subgraph_size,
                p.len()
            ))),
        }
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        let mut kv = |k: &str, v: String| lines.push(format!("{k} = {v}"));
        if let Some(i) = &self.input {
            kv("input", i.display().to_string());
        }
        kv(
            "input_format",
            match self.input_format {
                InputFormat::EdgeList => "edgelist",
                InputFormat::Text => "text",
            }
            .into(),
        );
        if let Some(l) = &self.label {
            kv("label", l.clone());
        }
        kv("lowercase", self.ingest.lowercase.to_string());
        kv("sentence_break", self.ingest.sentence_break.to_string());
        kv("drop_self_loops", self.ingest.drop_self_loops.to_string());
        kv("subgraph_size", self.subgraph_size.to_string());
        match &self.sample_probs {
            None => kv("enumeration", "full".into()),
            Some(p) => {
                kv("enumeration", "sampled".into());
                kv(
                    "sample_probs",
                    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                );
            }
        }
        kv("num_networks", self.randomize.num_networks.to_string());
        kv("exchanges_per_edge", self.randomize.exchanges_per_edge.to_string());
        kv("exchange_attempts", self.randomize.exchange_attempts.to_string());
        kv("preserve_reciprocal", self.randomize.preserve_reciprocal.to_string());
        kv("seed", self.randomize.seed.to_string());
        kv("cutoff", self.cutoff.to_string());
        kv("out_dir", self.out_dir.display().to_string());
        kv("ascii_report", self.ascii_report.to_string());
        kv("html_report", self.html_report.to_string());
        kv("dump_replicas", self.dump_replicas.to_string());
        if let Some(t) = &self.triad_id_table {
            kv("triad_id_table", t.display().to_string());
        }
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_mirror_fanmod_knobs() {
        let m = RunManifest::parse("").unwrap();
        assert_eq!(m.randomize.num_networks, 1000);
        assert_eq!(m.subgraph_size, 3);
        assert_eq!(m.cutoff, 0.01);
        assert_eq!(m.enumeration().unwrap(), Enumeration::Full);
    }

    #[test]
    fn parses_and_round_trips() {
        let text = "# run\ninput = data/bo.edges\nsubgraph_size=4\nsample_probs = 1, 1, 0.5, 0.25\n\
                    num_networks = 50\nseed = 9\npreserve_reciprocal = off\nlabel = BO\n";
        let m = RunManifest::parse(text).unwrap();
        assert_eq!(m.subgraph_size, 4);
        assert_eq!(m.sample_probs, Some(vec![1.0, 1.0, 0.5, 0.25]));
        assert!(!m.randomize.preserve_reciprocal);
        assert_eq!(
            m.enumeration().unwrap(),
            Enumeration::Sampled {
                probs: vec![1.0, 1.0, 0.5, 0.25],
                seed: 9
            }
        );
        assert_eq!(RunManifest::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn rejects_bad_lines() {
        for bad in ["seed = -3", "nonsense", "colour = red", "cutoff = 2", "lowercase = maybe"] {
            assert!(
                matches!(RunManifest::parse(bad), Err(Error::Manifest { line: 1, .. })),
                "{bad}"
            );
        }
        let m = RunManifest::parse("sample_probs = 1,0.5").unwrap();
        assert!(m.enumeration().is_err());
    }
}
