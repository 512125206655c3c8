//! Z-scores, empirical p-values and the normalized significance profile.
//!
//! Ensemble statistics are accumulated one replica at a time (Welford), and
//! replicas must be pushed in index order for bit-identical output. Standard
//! deviations use the population form (divide by `m`).

use std::fmt;
use std::fmt::Write as _;

use crate::census::CensusResult;
use crate::classes::ClassTable;
use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF: f64 = 0.01;
/// Share of undefined Z-scores above which a warning is logged.
pub const UNDEFINED_WARN_SHARE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub replicas: usize,
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
    /// Replicas with count >= the real count, per class.
    pub at_least: Vec<usize>,
    /// Replicas with count <= the real count, per class.
    pub at_most: Vec<usize>,
}

/// Streaming accumulator for [`EnsembleStats`].
#[derive(Debug, Clone)]
pub struct EnsembleAccumulator {
    real: Vec<f64>,
    m: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
    at_least: Vec<usize>,
    at_most: Vec<usize>,
}

impl EnsembleAccumulator {
    pub fn new(real: &CensusResult) -> Self {
        let n = real.class_count();
        EnsembleAccumulator {
            real: real.counts(),
            m: 0,
            mean: vec![0.0; n],
            m2: vec![0.0; n],
            at_least: vec![0; n],
            at_most: vec![0; n],
        }
    }

    pub fn push(&mut self, replica: &CensusResult) -> Result<()> {
        if replica.class_count() != self.real.len() {
            return Err(Error::ClassMismatch(format!(
                "replica has {} classes, real census has {}",
                replica.class_count(),
                self.real.len()
            )));
        }
        self.m += 1;
        let m = self.m as f64;
        for i in 0..self.real.len() {
            let x = replica.count(i);
            let delta = x - self.mean[i];
            self.mean[i] += delta / m;
            self.m2[i] += delta * (x - self.mean[i]);
            if x >= self.real[i] {
                self.at_least[i] += 1;
            }
            if x <= self.real[i] {
                self.at_most[i] += 1;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> EnsembleStats {
        let m = self.m.max(1) as f64;
        EnsembleStats {
            replicas: self.m,
            sd: self.m2.iter().map(|&s| (s / m).max(0.0).sqrt()).collect(),
            mean: self.mean,
            at_least: self.at_least,
            at_most: self.at_most,
        }
    }
}

impl EnsembleStats {
    pub fn from_replicas<'a, I>(real: &CensusResult, replicas: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CensusResult>,
    {
        let mut acc = EnsembleAccumulator::new(real);
        for r in replicas {
            acc.push(r)?;
        }
        Ok(acc.finish())
    }

    fn check(&self, real: &CensusResult) -> Result<()> {
        if self.mean.len() != real.class_count() {
            return Err(Error::ClassMismatch(format!(
                "ensemble has {} classes, real census has {}",
                self.mean.len(),
                real.class_count()
            )));
        }
        if self.replicas < 2 {
            return Err(Error::TooFew {
                what: "random networks",
                needed: 2,
                got: self.replicas,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZScore {
    Finite(f64),
    /// The ensemble has no spread but its mean differs from the real count.
    Undefined,
}

impl ZScore {
    pub fn value(self) -> Option<f64> {
        match self {
            ZScore::Finite(z) => Some(z),
            ZScore::Undefined => None,
        }
    }
}

impl fmt::Display for ZScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZScore::Finite(z) => match f.precision() {
                Some(p) => write!(f, "{z:.p$}"),
                None => write!(f, "{z}"),
            },
            ZScore::Undefined => f.write_str("n/a"),
        }
    }
}

pub fn zscore(real: f64, mean: f64, sd: f64) -> ZScore {
    if sd > 0.0 {
        ZScore::Finite((real - mean) / sd)
    } else if real == mean {
        ZScore::Finite(0.0)
    } else {
        ZScore::Undefined
    }
}

pub fn zscores(real: &CensusResult, stats: &EnsembleStats) -> Result<Vec<ZScore>> {
    stats.check(real)?;
    Ok((0..real.class_count())
        .map(|i| zscore(real.count(i), stats.mean[i], stats.sd[i]))
        .collect())
}

/// `(p_over, p_under)` per class, both tails inclusive.
pub fn pvalues(real: &CensusResult, stats: &EnsembleStats) -> Result<Vec<(f64, f64)>> {
    stats.check(real)?;
    let m = stats.replicas as f64;
    Ok(stats
        .at_least
        .iter()
        .zip(&stats.at_most)
        .map(|(&ge, &le)| (ge as f64 / m, le as f64 / m))
        .collect())
}

/// Each finite Z divided by the Euclidean norm of the finite entries;
/// undefined entries map to 0. An all-zero Z vector yields all zeros.
pub fn significance_profile(z: &[ZScore]) -> Result<Vec<f64>> {
    let finite: Vec<f64> = z.iter().filter_map(|z| z.value()).collect();
    if finite.is_empty() {
        return Err(Error::AllUndefined);
    }
    let norm = finite.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(z.iter()
        .map(|z| match z.value() {
            Some(v) if norm > 0.0 => v / norm,
            _ => 0.0,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotifLabel {
    Motif,
    AntiMotif,
    None,
}

impl MotifLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            MotifLabel::Motif => "MOTIF",
            MotifLabel::AntiMotif => "ANTI-MOTIF",
            MotifLabel::None => "NONE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "MOTIF" => Some(MotifLabel::Motif),
            "ANTI-MOTIF" => Some(MotifLabel::AntiMotif),
            "NONE" => Some(MotifLabel::None),
            _ => None,
        }
    }
}

pub fn classify(z: ZScore, p_over: f64, p_under: f64, cutoff: f64) -> MotifLabel {
    match z {
        ZScore::Finite(z) if z > 0.0 && p_over < cutoff => MotifLabel::Motif,
        ZScore::Finite(z) if z < 0.0 && p_under < cutoff => MotifLabel::AntiMotif,
        _ => MotifLabel::None,
    }
}

/// One class of a [`SignificanceProfile`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSignificance {
    pub export_id: u32,
    pub count: f64,
    pub frequency: f64,
    pub mean_random: f64,
    pub sd_random: f64,
    pub z: ZScore,
    pub p_over: f64,
    pub p_under: f64,
    pub sp: f64,
    pub label: MotifLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceProfile {
    pub dataset: String,
    pub k: usize,
    /// Rows in export-id order.
    pub rows: Vec<ClassSignificance>,
}

impl SignificanceProfile {
    /// Combines the real census with the ensemble statistics.
    pub fn compute(
        dataset: impl Into<String>,
        table: &ClassTable,
        real: &CensusResult,
        stats: &EnsembleStats,
        cutoff: f64,
    ) -> Result<Self> {
        if real.class_count() != table.len() {
            return Err(Error::ClassMismatch(format!(
                "census has {} classes, table has {}",
                real.class_count(),
                table.len()
            )));
        }
        let z = zscores(real, stats)?;
        let p = pvalues(real, stats)?;
        let undefined = z.iter().filter(|z| z.value().is_none()).count();
        if undefined as f64 > UNDEFINED_WARN_SHARE * z.len() as f64 {
            log::warn!(
                "{undefined} of {} Z-scores are undefined; increase the number of random networks",
                z.len()
            );
        }
        let sp = significance_profile(&z)?;
        let freq = real.frequencies();
        let rows = table
            .export_order()
            .into_iter()
            .map(|i| ClassSignificance {
                export_id: table.class(i).export_id,
                count: real.count(i),
                frequency: freq[i],
                mean_random: stats.mean[i],
                sd_random: stats.sd[i],
                z: z[i],
                p_over: p[i].0,
                p_under: p[i].1,
                sp: sp[i],
                label: classify(z[i], p[i].0, p[i].1, cutoff),
            })
            .collect();
        Ok(SignificanceProfile {
            dataset: dataset.into(),
            k: table.k(),
            rows,
        })
    }

    pub fn export_ids(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.export_id).collect()
    }

    pub fn sp(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sp).collect()
    }

    /// Relabels every class with a different cutoff.
    pub fn relabel(&mut self, cutoff: f64) {
        for r in &mut self.rows {
            r.label = classify(r.z, r.p_over, r.p_under, cutoff);
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        s.push_str(SIGNIFICANCE_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.export_id,
                r.count,
                r.frequency,
                r.mean_random,
                r.sd_random,
                r.z,
                r.p_over,
                r.p_under,
                r.sp,
                r.label.as_str()
            );
        }
        s
    }

    /// Parses a significance TSV. `k` is inferred from the row count.
    pub fn from_tsv(dataset: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim_end() == SIGNIFICANCE_HEADER => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    reason: "missing significance header".into(),
                })
            }
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let bad = |reason: String| Error::Parse {
                line: idx + 1,
                reason,
            };
            let f: Vec<&str> = line.trim_end().split('\t').collect();
            if f.len() != 10 {
                return Err(bad(format!("expected 10 columns, found {}", f.len())));
            }
            let num = |i: usize| -> Result<f64> {
                f[i].parse::<f64>()
                    .map_err(|_| bad(format!("column {}: `{}` is not a number", i + 1, f[i])))
            };
            let z = if f[5] == "n/a" {
                ZScore::Undefined
            } else {
                ZScore::Finite(num(5)?)
            };
            rows.push(ClassSignificance {
                export_id: f[0]
                    .parse()
                    .map_err(|_| bad(format!("`{}` is not a class id", f[0])))?,
                count: num(1)?,
                frequency: num(2)?,
                mean_random: num(3)?,
                sd_random: num(4)?,
                z,
                p_over: num(6)?,
                p_under: num(7)?,
                sp: num(8)?,
                label: MotifLabel::parse(f[9]).ok_or_else(|| bad(format!("unknown label `{}`", f[9])))?,
            });
        }
        let k = match rows.len() {
            13 => 3,
            199 => 4,
            n => {
                return Err(Error::ClassMismatch(format!(
                    "{n} class rows match neither 13 triads nor 199 tetrads"
                )))
            }
        };
        Ok(SignificanceProfile {
            dataset: dataset.into(),
            k,
            rows,
        })
    }
}

pub const SIGNIFICANCE_HEADER: &str =
    "class_export_id\tcount\tfrequency\tmean_random\tsd_random\tz_score\tp_over\tp_under\tsp\tlabel";

/// Pearson correlation of two equal-length vectors; `None` when either has
/// zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Pairwise Pearson correlation of SP vectors. The diagonal is 1; a pair
/// involving a constant profile gets 0.
pub fn compare_profiles(profiles: &[SignificanceProfile]) -> Result<Vec<Vec<f64>>> {
    let Some(first) = profiles.first() else {
        return Err(Error::TooFew {
            what: "profiles",
            needed: 1,
            got: 0,
        });
    };
    let ids = first.export_ids();
    for p in profiles {
        if p.k != first.k || p.export_ids() != ids {
            return Err(Error::ClassMismatch(format!(
                "`{}` and `{}` use different class tables",
                first.dataset, p.dataset
            )));
        }
    }
    let sp: Vec<Vec<f64>> = profiles.iter().map(|p| p.sp()).collect();
    let n = profiles.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = 1.0;
        for j in i + 1..n {
            let r = pearson(&sp[i], &sp[j]).unwrap_or(0.0);
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    Ok(m)
}
