//! Pairwise fusion of query context representations.
//!
//! Each context representation is read as an opinion about the original
//! query (the keywords). Two representations are fused by consensus or
//! recommendation, and the expectation of the fused opinion is the
//! polyrepresentation probability of the pair.

mod report;
mod topic;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::evidence::{consensus_evidence, recommendation_evidence, EvidencePair, PositiveRule};
use crate::exec::Execution;
use crate::opinion::{Opinion, OpinionError};
use crate::text::{tokenize, PrepLevel, TermSet};

pub use report::{table_rows, write_table_tsv, TableRow, TABLE_HEADER};
pub use topic::{parse_topics, parse_topics_str, Representation, Topic, TopicError, UnknownRepresentation};

/// The six unordered context pairs, in report order.
pub const CONTEXT_PAIRS: [(Representation, Representation); 6] = [
    (Representation::Background, Representation::IdealAnswer),
    (Representation::Background, Representation::WorkTask),
    (Representation::InformationNeed, Representation::Background),
    (Representation::InformationNeed, Representation::IdealAnswer),
    (Representation::InformationNeed, Representation::WorkTask),
    (Representation::WorkTask, Representation::IdealAnswer),
];

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Error)]
pub enum PolyrepError {
    #[error("no topics to combine")]
    EmptyTopicList,
    #[error("no preprocessing levels selected")]
    NoLevels,
    #[error("alpha = {0} is outside [0, 1]")]
    InvalidAlpha(f64),
    #[error("a combination needs two different representations, got {0} twice")]
    SameRepresentation(Representation),
    #[error("topic `{topic}`: {source}")]
    Fusion {
        topic: String,
        #[source]
        source: OpinionError,
    },
    #[error(transparent)]
    Opinion(#[from] OpinionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Consensus,
    Recommendation,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::Consensus => "consensus",
            Operator::Recommendation => "recommendation",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Order of a recommendation: `AB` is `rep_a ⊗ rep_b`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Order {
    #[default]
    AB,
    BA,
}

impl Order {
    pub fn name(self) -> &'static str {
        match self {
            Order::AB => "AB",
            Order::BA => "BA",
        }
    }
}

/// How per-topic evidence becomes one probability per combination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMode {
    /// Mean of the per-topic expectations.
    #[default]
    Macro,
    /// Evidence counts summed over all topics, then mapped and fused once.
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{value}`")]
pub struct UnknownName {
    pub kind: &'static str,
    pub value: String,
}

impl FromStr for AggregationMode {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "macro" => Ok(AggregationMode::Macro),
            "pooled" => Ok(AggregationMode::Pooled),
            _ => Err(UnknownName {
                kind: "aggregation mode",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for AggregationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregationMode::Macro => "macro",
            AggregationMode::Pooled => "pooled",
        })
    }
}

/// One pairwise combination to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CombinationSpec {
    pub rep_a: Representation,
    pub rep_b: Representation,
    pub operator: Operator,
    /// Ignored for consensus.
    pub order: Order,
    pub level: PrepLevel,
    pub alpha: f64,
    pub positive_rule: PositiveRule,
}

impl CombinationSpec {
    pub fn consensus(rep_a: Representation, rep_b: Representation, level: PrepLevel) -> Self {
        Self {
            rep_a,
            rep_b,
            operator: Operator::Consensus,
            order: Order::AB,
            level,
            alpha: DEFAULT_ALPHA,
            positive_rule: PositiveRule::Union,
        }
    }

    pub fn recommendation(
        rep_a: Representation,
        rep_b: Representation,
        order: Order,
        level: PrepLevel,
    ) -> Self {
        Self {
            operator: Operator::Recommendation,
            order,
            ..Self::consensus(rep_a, rep_b, level)
        }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_rule(self, positive_rule: PositiveRule) -> Self {
        Self {
            positive_rule,
            ..self
        }
    }

    /// The order as reported: `-` for consensus.
    pub fn order_label(&self) -> &'static str {
        match self.operator {
            Operator::Consensus => "-",
            Operator::Recommendation => self.order.name(),
        }
    }

    /// Short identifier, e.g. `III_recommendation_work_task_information_need_AB`.
    pub fn slug(&self) -> String {
        let order = match self.operator {
            Operator::Consensus => "",
            Operator::Recommendation => self.order.name(),
        };
        let mut s = format!("{}_{}_{}_{}", self.level, self.operator, self.rep_a, self.rep_b);
        if !order.is_empty() {
            s.push('_');
            s.push_str(order);
        }
        s
    }

    fn validate(&self) -> Result<(), PolyrepError> {
        if self.rep_a == self.rep_b {
            return Err(PolyrepError::SameRepresentation(self.rep_a));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(PolyrepError::InvalidAlpha(self.alpha));
        }
        Ok(())
    }
}

/// Evidence for the spec's pair, with `for_a` always describing `rep_a`.
pub fn spec_evidence(a: &TermSet, b: &TermSet, q: &TermSet, spec: &CombinationSpec) -> EvidencePair {
    match spec.operator {
        Operator::Consensus => consensus_evidence(a, b, q, spec.positive_rule),
        Operator::Recommendation => recommendation_evidence(a, b, q),
    }
}

/// Maps both sides of `evidence` to opinions and fuses them.
///
/// For a recommendation `X ⊗ Y`, the opinion about the recommender comes from
/// `X`'s evidence and the opinion about the query from `Y`'s evidence.
pub fn fuse_evidence(evidence: &EvidencePair, spec: &CombinationSpec) -> Result<Opinion, OpinionError> {
    let a = Opinion::from_evidence(evidence.for_a, spec.alpha)?;
    let b = Opinion::from_evidence(evidence.for_b, spec.alpha)?;
    match (spec.operator, spec.order) {
        (Operator::Consensus, _) => a.consensus(&b),
        (Operator::Recommendation, Order::AB) => Ok(a.recommend(&b)),
        (Operator::Recommendation, Order::BA) => Ok(b.recommend(&a)),
    }
}

/// Fuses the term sets of one topic. Returns the fused opinion and its
/// expectation.
pub fn combine_terms(
    a: &TermSet,
    b: &TermSet,
    q: &TermSet,
    spec: &CombinationSpec,
) -> Result<(Opinion, f64), PolyrepError> {
    spec.validate()?;
    let fused = fuse_evidence(&spec_evidence(a, b, q, spec), spec)?;
    Ok((fused, fused.expectation()))
}

pub fn combine_topic(topic: &Topic, spec: &CombinationSpec) -> Result<(Opinion, f64), PolyrepError> {
    let terms = TopicTerms::new(topic, spec.level);
    combine_terms(terms.get(spec.rep_a), terms.get(spec.rep_b), terms.query(), spec).map_err(|e| match e {
        PolyrepError::Opinion(source) => PolyrepError::Fusion {
            topic: topic.id.clone(),
            source,
        },
        other => other,
    })
}

/// All five term sets of a topic at one level.
#[derive(Debug, Clone)]
pub struct TopicTerms {
    pub id: String,
    sets: [TermSet; 5],
}

impl TopicTerms {
    pub fn new(topic: &Topic, level: PrepLevel) -> Self {
        Self {
            id: topic.id.clone(),
            sets: Representation::ALL.map(|rep| tokenize(topic.text(rep), level)),
        }
    }

    pub fn get(&self, rep: Representation) -> &TermSet {
        &self.sets[rep as usize]
    }

    pub fn query(&self) -> &TermSet {
        self.get(Representation::Keywords)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicOpinion {
    pub topic_id: String,
    pub opinion: Opinion,
    pub expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationResult {
    pub spec: CombinationSpec,
    pub per_topic: Vec<TopicOpinion>,
    pub aggregate_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixConfig {
    pub levels: Vec<PrepLevel>,
    pub alpha: f64,
    pub positive_rule: PositiveRule,
    pub aggregation: AggregationMode,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        Self {
            levels: PrepLevel::ALL.to_vec(),
            alpha: DEFAULT_ALPHA,
            positive_rule: PositiveRule::Union,
            aggregation: AggregationMode::Macro,
        }
    }
}

/// The 18 combinations reported per level: for each context pair, one
/// consensus and the two recommendation orders.
pub fn matrix_specs(config: &MatrixConfig) -> Vec<CombinationSpec> {
    let mut specs = Vec::with_capacity(config.levels.len() * 18);
    for &level in &config.levels {
        let base = |spec: CombinationSpec| spec.with_alpha(config.alpha).with_rule(config.positive_rule);
        for (a, b) in CONTEXT_PAIRS {
            specs.push(base(CombinationSpec::consensus(a, b, level)));
        }
        for (a, b) in CONTEXT_PAIRS {
            specs.push(base(CombinationSpec::recommendation(a, b, Order::AB, level)));
            specs.push(base(CombinationSpec::recommendation(a, b, Order::BA, level)));
        }
    }
    specs
}

pub fn run_matrix(topics: &[Topic], config: &MatrixConfig) -> Result<Vec<CombinationResult>, PolyrepError> {
    run_matrix_with(topics, config, Execution::default())
}

/// Evaluates every combination of [`matrix_specs`] over `topics`.
pub fn run_matrix_with(
    topics: &[Topic],
    config: &MatrixConfig,
    exec: Execution,
) -> Result<Vec<CombinationResult>, PolyrepError> {
    if topics.is_empty() {
        return Err(PolyrepError::EmptyTopicList);
    }
    if config.levels.is_empty() {
        return Err(PolyrepError::NoLevels);
    }
    if !(0.0..=1.0).contains(&config.alpha) {
        return Err(PolyrepError::InvalidAlpha(config.alpha));
    }

    let mut levels = config.levels.clone();
    levels.sort();
    levels.dedup();
    let terms: Vec<(PrepLevel, Vec<TopicTerms>)> = levels
        .iter()
        .map(|&level| (level, exec.map(topics, |t| TopicTerms::new(t, level))))
        .collect();

    let specs = matrix_specs(config);
    exec.try_map(&specs, |spec| {
        let (_, level_terms) = terms
            .iter()
            .find(|(l, _)| *l == spec.level)
            .expect("terms computed for every level");
        evaluate_spec(level_terms, spec, config.aggregation, exec)
    })
}

fn evaluate_spec(
    terms: &[TopicTerms],
    spec: &CombinationSpec,
    aggregation: AggregationMode,
    exec: Execution,
) -> Result<CombinationResult, PolyrepError> {
    let per_topic = exec.try_map(terms, |t| {
        let evidence = spec_evidence(t.get(spec.rep_a), t.get(spec.rep_b), t.query(), spec);
        let opinion = fuse_evidence(&evidence, spec).map_err(|source| PolyrepError::Fusion {
            topic: t.id.clone(),
            source,
        })?;
        Ok::<_, PolyrepError>((evidence, opinion))
    })?;

    let aggregate_probability = match aggregation {
        AggregationMode::Macro => {
            per_topic.iter().map(|(_, o)| o.expectation()).sum::<f64>() / per_topic.len() as f64
        }
        AggregationMode::Pooled => {
            let pooled = EvidencePair {
                for_a: per_topic.iter().map(|(e, _)| e.for_a).sum(),
                for_b: per_topic.iter().map(|(e, _)| e.for_b).sum(),
            };
            fuse_evidence(&pooled, spec)?.expectation()
        }
    };

    Ok(CombinationResult {
        spec: *spec,
        per_topic: terms
            .iter()
            .zip(per_topic)
            .map(|(t, (_, opinion))| TopicOpinion {
                topic_id: t.id.clone(),
                expectation: opinion.expectation(),
                opinion,
            })
            .collect(),
        aggregate_probability,
    })
}

fn tie_key(spec: &CombinationSpec) -> (&'static str, &'static str, &'static str, &'static str, PrepLevel) {
    (
        spec.operator.name(),
        spec.rep_a.name(),
        spec.rep_b.name(),
        spec.order_label(),
        spec.level,
    )
}

/// Sorts by descending probability. Ties fall back to
/// `(operator, rep_a, rep_b, order, level)` in lexicographic order.
pub fn rank_combinations(mut results: Vec<CombinationResult>) -> Vec<CombinationResult> {
    results.sort_by(|x, y| {
        y.aggregate_probability
            .partial_cmp(&x.aggregate_probability)
            .unwrap_or(Ordering::Equal)
            .then_with(|| tie_key(&x.spec).cmp(&tie_key(&y.spec)))
    });
    results
}
