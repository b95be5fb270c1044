//! Run and qrels files in the usual whitespace-separated layout.
//!
//! Run: `qid Q0 docid rank score tag`. Qrels: `qid 0 docid grade`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// Graded relevance: 3 very, 2 fairly, 1 marginally relevant, 0 not relevant.
pub type Grade = u8;

pub const MAX_GRADE: Grade = 3;

/// Only the top this-many documents of each query are kept.
pub const MAX_DEPTH: usize = 1000;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: document `{doc}` appears twice for query `{qid}`")]
    Duplicate { line: usize, qid: String, doc: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> ParseError {
    ParseError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Relevance judgments: query id → document id → grade.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Qrels {
    queries: BTreeMap<String, BTreeMap<String, Grade>>,
}

impl Qrels {
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self, ParseError> {
        let mut queries: BTreeMap<String, BTreeMap<String, Grade>> = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| malformed(lineno, e.to_string()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let [qid, _iteration, doc, grade] = fields[..] else {
                return Err(malformed(
                    lineno,
                    format!("expected 4 fields `qid 0 docid grade`, found {}", fields.len()),
                ));
            };
            let grade: Grade = grade
                .parse()
                .ok()
                .filter(|g| *g <= MAX_GRADE)
                .ok_or_else(|| malformed(lineno, format!("grade `{grade}` is not one of 0, 1, 2, 3")))?;
            match queries.entry(qid.to_string()).or_default().entry(doc.to_string()) {
                Entry::Occupied(_) => {
                    return Err(ParseError::Duplicate {
                        line: lineno,
                        qid: qid.to_string(),
                        doc: doc.to_string(),
                    })
                }
                Entry::Vacant(v) => {
                    v.insert(grade);
                }
            }
        }
        Ok(Self { queries })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ParseError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| io_error(path, e))?;
        Self::from_reader(BufReader::new(file))
    }

    pub fn insert(&mut self, qid: &str, doc: &str, grade: Grade) {
        self.queries
            .entry(qid.to_string())
            .or_default()
            .insert(doc.to_string(), grade.min(MAX_GRADE));
    }

    pub fn judgments(&self, qid: &str) -> Option<&BTreeMap<String, Grade>> {
        self.queries.get(qid)
    }

    pub fn grade(&self, qid: &str, doc: &str) -> Option<Grade> {
        self.queries.get(qid)?.get(doc).copied()
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.queries.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }
}

pub fn parse_qrels(path: impl AsRef<Path>) -> Result<Qrels, ParseError> {
    Qrels::from_path(path)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredDoc {
    pub doc: String,
    pub score: f64,
}

/// Ranked documents per query, best first.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunList {
    queries: BTreeMap<String, Vec<ScoredDoc>>,
}

impl RunList {
    /// Parses a run. The rank column is ignored; documents are ordered by
    /// descending score, ties by ascending document id, and cut at
    /// [`MAX_DEPTH`].
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self, ParseError> {
        let mut queries: BTreeMap<String, Vec<ScoredDoc>> = BTreeMap::new();
        let mut seen: HashSet<(String, String)> = HashSet::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| malformed(lineno, e.to_string()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let [qid, _q0, doc, _rank, score, _tag] = fields[..] else {
                return Err(malformed(
                    lineno,
                    format!(
                        "expected 6 fields `qid Q0 docid rank score tag`, found {}",
                        fields.len()
                    ),
                ));
            };
            let score: f64 = score
                .parse()
                .ok()
                .filter(|s: &f64| s.is_finite())
                .ok_or_else(|| malformed(lineno, format!("score `{score}` is not a finite number")))?;
            if !seen.insert((qid.to_string(), doc.to_string())) {
                return Err(ParseError::Duplicate {
                    line: lineno,
                    qid: qid.to_string(),
                    doc: doc.to_string(),
                });
            }
            queries.entry(qid.to_string()).or_default().push(ScoredDoc {
                doc: doc.to_string(),
                score,
            });
        }
        for docs in queries.values_mut() {
            sort_ranking(docs);
        }
        Ok(Self { queries })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ParseError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| io_error(path, e))?;
        Self::from_reader(BufReader::new(file))
    }

    /// Builds a run from documents already in rank order; scores descend
    /// from the list length.
    pub fn from_rankings<'a, I, D>(rankings: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, D)>,
        D: IntoIterator<Item = &'a str>,
    {
        let mut queries = BTreeMap::new();
        for (qid, docs) in rankings {
            let docs: Vec<&str> = docs.into_iter().collect();
            let n = docs.len();
            let mut ranked: Vec<ScoredDoc> = docs
                .into_iter()
                .enumerate()
                .map(|(i, doc)| ScoredDoc {
                    doc: doc.to_string(),
                    score: (n - i) as f64,
                })
                .collect();
            ranked.truncate(MAX_DEPTH);
            queries.insert(qid.to_string(), ranked);
        }
        Self { queries }
    }

    pub fn ranking(&self, qid: &str) -> &[ScoredDoc] {
        self.queries.get(qid).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.queries.keys().map(String::as_str)
    }

    pub fn contains_query(&self, qid: &str) -> bool {
        self.queries.contains_key(qid)
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }
}

fn sort_ranking(docs: &mut Vec<ScoredDoc>) {
    docs.sort_by(|x, y| y.score.total_cmp(&x.score).then_with(|| x.doc.cmp(&y.doc)));
    docs.truncate(MAX_DEPTH);
}

pub fn parse_run(path: impl AsRef<Path>) -> Result<RunList, ParseError> {
    RunList::from_path(path)
}
