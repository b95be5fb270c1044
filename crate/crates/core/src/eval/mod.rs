//! Retrieval evaluation: run/qrels parsing, the six effectiveness measures,
//! and rank correlation between fused opinion components and per-query
//! effectiveness.

mod metrics;
mod spearman;
mod trec;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::polyrep::CombinationResult;

pub use metrics::{average_precision, bpref, mrr, ndcg_at, precision_at, JudgedRanking, Metric, NDCG_DEPTH};
pub use spearman::{fractional_ranks, spearman, CorrelationError};
pub use trec::{parse_qrels, parse_run, Grade, ParseError, Qrels, RunList, ScoredDoc, MAX_DEPTH, MAX_GRADE};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("the run shares no query ids with the judgments")]
    NoOverlap,
    #[error("the judgments contain no queries")]
    EmptyQrels,
}

/// Values of all six measures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Scores {
    pub map: f64,
    pub ndcg: f64,
    pub bpref: f64,
    pub p10: f64,
    pub ndcg10: f64,
    pub mrr: f64,
}

impl Scores {
    pub fn of(ranking: &JudgedRanking) -> Self {
        Self {
            map: Metric::Map.compute(ranking),
            ndcg: Metric::Ndcg.compute(ranking),
            bpref: Metric::Bpref.compute(ranking),
            p10: Metric::P10.compute(ranking),
            ndcg10: Metric::Ndcg10.compute(ranking),
            mrr: Metric::Mrr.compute(ranking),
        }
    }

    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Map => self.map,
            Metric::Ndcg => self.ndcg,
            Metric::Bpref => self.bpref,
            Metric::P10 => self.p10,
            Metric::Ndcg10 => self.ndcg10,
            Metric::Mrr => self.mrr,
        }
    }
}

/// Per-query scores for every query in the judgments, plus their means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub per_query: BTreeMap<String, Scores>,
    pub mean: Scores,
}

impl MetricReport {
    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.per_query.keys().map(String::as_str)
    }

    pub fn value(&self, qid: &str, metric: Metric) -> Option<f64> {
        self.per_query.get(qid).map(|s| s.get(metric))
    }
}

pub fn evaluate(run: &RunList, qrels: &Qrels) -> Result<MetricReport, EvalError> {
    evaluate_with(run, qrels, Execution::default())
}

/// Scores every query of `qrels`; queries the run does not cover score 0.
///
/// An empty run is accepted and scores 0 everywhere. A non-empty run that
/// shares no query with `qrels` is rejected.
pub fn evaluate_with(run: &RunList, qrels: &Qrels, exec: Execution) -> Result<MetricReport, EvalError> {
    if qrels.is_empty() {
        return Err(EvalError::EmptyQrels);
    }
    if !run.is_empty() && !qrels.query_ids().any(|q| run.contains_query(q)) {
        return Err(EvalError::NoOverlap);
    }
    let qids: Vec<&str> = qrels.query_ids().collect();
    let scores = exec.map(&qids, |qid| Scores::of(&JudgedRanking::new(run, qrels, qid)));

    let n = scores.len() as f64;
    let mean_of = |m: Metric| scores.iter().map(|s| s.get(m)).sum::<f64>() / n;
    let mean = Scores {
        map: mean_of(Metric::Map),
        ndcg: mean_of(Metric::Ndcg),
        bpref: mean_of(Metric::Bpref),
        p10: mean_of(Metric::P10),
        ndcg10: mean_of(Metric::Ndcg10),
        mrr: mean_of(Metric::Mrr),
    };
    Ok(MetricReport {
        per_query: qids.into_iter().map(String::from).zip(scores).collect(),
        mean,
    })
}

/// `qid metric value` rows, queries in id order, then the `all` rows.
pub fn write_metric_tsv<W: Write>(report: &MetricReport, mut out: W) -> io::Result<()> {
    writeln!(out, "qid\tmetric\tvalue")?;
    for (qid, scores) in &report.per_query {
        for m in Metric::ALL {
            writeln!(out, "{qid}\t{m}\t{:.4}", scores.get(m))?;
        }
    }
    for m in Metric::ALL {
        writeln!(out, "all\t{m}\t{:.4}", report.mean.get(m))?;
    }
    Ok(())
}

/// Opinion component correlated against effectiveness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Belief,
    Uncertainty,
}

impl Component {
    pub const ALL: [Component; 2] = [Component::Belief, Component::Uncertainty];

    pub fn name(self) -> &'static str {
        match self {
            Component::Belief => "belief",
            Component::Uncertainty => "uncertainty",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "belief" => Ok(Component::Belief),
            "uncertainty" => Ok(Component::Uncertainty),
            _ => Err(format!("unknown component `{s}`")),
        }
    }
}

/// `(metric value, component value)` for each topic, in the result's topic
/// order. Fails if the topic ids of the two sides differ.
pub fn component_points(
    result: &CombinationResult,
    report: &MetricReport,
    metric: Metric,
    which: Component,
) -> Result<Vec<(f64, f64)>, CorrelationError> {
    let topics: BTreeSet<&str> = result.per_topic.iter().map(|t| t.topic_id.as_str()).collect();
    let queries: BTreeSet<&str> = report.query_ids().collect();
    if topics != queries {
        return Err(CorrelationError::MissingTopics {
            missing_from_metrics: topics.difference(&queries).map(|s| s.to_string()).collect(),
            missing_from_results: queries.difference(&topics).map(|s| s.to_string()).collect(),
        });
    }
    Ok(result
        .per_topic
        .iter()
        .map(|t| {
            let x = report.value(&t.topic_id, metric).expect("aligned ids");
            let y = match which {
                Component::Belief => t.opinion.belief(),
                Component::Uncertainty => t.opinion.uncertainty(),
            };
            (x, y)
        })
        .collect())
}

/// Spearman's rho between a fused opinion component and a per-query measure.
pub fn correlate_components(
    result: &CombinationResult,
    report: &MetricReport,
    metric: Metric,
    which: Component,
) -> Result<f64, CorrelationError> {
    let points = component_points(result, report, metric, which)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    spearman(&ys, &xs)
}
