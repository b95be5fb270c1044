//! Per-query effectiveness measures over a judged ranking.
//!
//! Binary relevance means grade > 0. NDCG uses the grade itself as gain and
//! a `log2(rank + 1)` discount at every rank. Unjudged documents have gain 0
//! and are skipped by bpref.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::trec::{Grade, Qrels, RunList};

/// A ranking joined with the query's judgments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgedRanking {
    /// Grade of each retrieved document in rank order; `None` if unjudged.
    pub grades: Vec<Option<Grade>>,
    /// Judged documents with grade > 0.
    pub relevant: usize,
    /// Judged documents with grade 0.
    pub nonrelevant: usize,
    /// All judged grades, highest first.
    pub ideal: Vec<Grade>,
}

impl JudgedRanking {
    pub fn new(run: &RunList, qrels: &Qrels, qid: &str) -> Self {
        let judged = qrels.judgments(qid);
        let grades = run
            .ranking(qid)
            .iter()
            .map(|d| judged.and_then(|j| j.get(&d.doc).copied()))
            .collect();
        Self::from_parts(grades, judged.into_iter().flat_map(|j| j.values().copied()))
    }

    /// `grades` in rank order; `judged` lists every judged grade of the query.
    pub fn from_parts(grades: Vec<Option<Grade>>, judged: impl IntoIterator<Item = Grade>) -> Self {
        let mut ideal: Vec<Grade> = judged.into_iter().collect();
        ideal.sort_unstable_by(|a, b| b.cmp(a));
        let relevant = ideal.iter().filter(|&&g| g > 0).count();
        Self {
            grades,
            relevant,
            nonrelevant: ideal.len() - relevant,
            ideal,
        }
    }

    fn is_relevant(grade: &Option<Grade>) -> bool {
        matches!(grade, Some(g) if *g > 0)
    }

    pub fn average_precision(&self) -> f64 {
        if self.relevant == 0 {
            return 0.0;
        }
        let mut hits = 0usize;
        let mut sum = 0.0;
        for (i, g) in self.grades.iter().enumerate() {
            if Self::is_relevant(g) {
                hits += 1;
                sum += hits as f64 / (i + 1) as f64;
            }
        }
        sum / self.relevant as f64
    }

    pub fn ndcg_at(&self, k: usize) -> f64 {
        let dcg = |gains: &mut dyn Iterator<Item = Grade>| -> f64 {
            gains
                .take(k)
                .enumerate()
                .map(|(i, g)| g as f64 / ((i + 2) as f64).log2())
                // an empty f64 sum is -0.0
                .fold(0.0, |acc, x| acc + x)
        };
        let ideal = dcg(&mut self.ideal.iter().copied());
        if ideal == 0.0 {
            return 0.0;
        }
        dcg(&mut self.grades.iter().map(|g| g.unwrap_or(0))) / ideal
    }

    /// Retrieved lists shorter than `k` count the missing slots as misses.
    pub fn precision_at(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let hits = self
            .grades
            .iter()
            .take(k)
            .filter(|g| Self::is_relevant(g))
            .count();
        hits as f64 / k as f64
    }

    pub fn reciprocal_rank(&self) -> f64 {
        self.grades
            .iter()
            .position(Self::is_relevant)
            .map_or(0.0, |i| 1.0 / (i + 1) as f64)
    }

    /// Judged-only bpref with a `min(R, N)` denominator.
    pub fn bpref(&self) -> f64 {
        if self.relevant == 0 {
            return 0.0;
        }
        let cap = self.relevant.min(self.nonrelevant);
        let mut nonrel_above = 0usize;
        let mut sum = 0.0;
        for g in &self.grades {
            match g {
                Some(0) => nonrel_above += 1,
                Some(_) => {
                    sum += if cap == 0 {
                        1.0
                    } else {
                        1.0 - nonrel_above.min(cap) as f64 / cap as f64
                    };
                }
                None => {}
            }
        }
        sum / self.relevant as f64
    }
}

pub fn average_precision(run: &RunList, qrels: &Qrels, qid: &str) -> f64 {
    JudgedRanking::new(run, qrels, qid).average_precision()
}

pub fn ndcg_at(run: &RunList, qrels: &Qrels, qid: &str, k: usize) -> f64 {
    JudgedRanking::new(run, qrels, qid).ndcg_at(k)
}

pub fn precision_at(run: &RunList, qrels: &Qrels, qid: &str, k: usize) -> f64 {
    JudgedRanking::new(run, qrels, qid).precision_at(k)
}

pub fn mrr(run: &RunList, qrels: &Qrels, qid: &str) -> f64 {
    JudgedRanking::new(run, qrels, qid).reciprocal_rank()
}

pub fn bpref(run: &RunList, qrels: &Qrels, qid: &str) -> f64 {
    JudgedRanking::new(run, qrels, qid).bpref()
}

/// The six reported measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Map,
    Ndcg,
    Bpref,
    P10,
    Ndcg10,
    Mrr,
}

/// Cutoff for the full-ranking NDCG.
pub const NDCG_DEPTH: usize = 1000;

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Map,
        Metric::Ndcg,
        Metric::Bpref,
        Metric::P10,
        Metric::Ndcg10,
        Metric::Mrr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Map => "map",
            Metric::Ndcg => "ndcg",
            Metric::Bpref => "bpref",
            Metric::P10 => "p10",
            Metric::Ndcg10 => "ndcg10",
            Metric::Mrr => "mrr",
        }
    }

    pub fn compute(self, ranking: &JudgedRanking) -> f64 {
        match self {
            Metric::Map => ranking.average_precision(),
            Metric::Ndcg => ranking.ndcg_at(NDCG_DEPTH),
            Metric::Bpref => ranking.bpref(),
            Metric::P10 => ranking.precision_at(10),
            Metric::Ndcg10 => ranking.ndcg_at(10),
            Metric::Mrr => ranking.reciprocal_rank(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}
