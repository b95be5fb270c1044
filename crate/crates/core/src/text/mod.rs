//! Tokenization and the four cumulative preprocessing levels.

mod porter;
mod stoplist;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use porter::porter_stem;
pub use stoplist::{is_stopword, stoplist_entries};

/// Preprocessing level. Each level includes everything the previous one does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PrepLevel {
    /// I: whitespace split, tokens kept verbatim.
    Raw,
    /// II: lowercase, punctuation removed.
    CasePunct,
    /// III: II plus SMART stopword removal.
    Stop,
    /// IV: III plus Porter stemming.
    Stem,
}

impl PrepLevel {
    pub const ALL: [PrepLevel; 4] = [
        PrepLevel::Raw,
        PrepLevel::CasePunct,
        PrepLevel::Stop,
        PrepLevel::Stem,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            PrepLevel::Raw => "I",
            PrepLevel::CasePunct => "II",
            PrepLevel::Stop => "III",
            PrepLevel::Stem => "IV",
        }
    }
}

impl fmt::Display for PrepLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown preprocessing level `{0}` (expected I, II, III or IV)")]
pub struct UnknownLevel(pub String);

impl FromStr for PrepLevel {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" | "raw" => Ok(PrepLevel::Raw),
            "ii" | "2" | "case_punct" => Ok(PrepLevel::CasePunct),
            "iii" | "3" | "stop" => Ok(PrepLevel::Stop),
            "iv" | "4" | "stem" => Ok(PrepLevel::Stem),
            _ => Err(UnknownLevel(s.to_string())),
        }
    }
}

/// A deduplicated set of terms. Iteration is in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TermSet(BTreeSet<String>);

impl TermSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a term; empty strings are ignored.
    pub fn insert(&mut self, term: impl Into<String>) -> bool {
        let term = term.into();
        !term.is_empty() && self.0.insert(term)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_subset(&self, other: &TermSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Space-joined terms, in sorted order.
    pub fn join(&self) -> String {
        self.iter().collect::<Vec<_>>().join(" ")
    }
}

impl<S: Into<String>> FromIterator<S> for TermSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut set = TermSet::new();
        for term in iter {
            set.insert(term);
        }
        set
    }
}

impl<'a> IntoIterator for &'a TermSet {
    type Item = &'a String;
    type IntoIter = std::collections::btree_set::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

fn case_punct_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.chars().flat_map(char::to_lowercase).collect())
}

/// Turns `text` into the term set for `level`.
pub fn tokenize(text: &str, level: PrepLevel) -> TermSet {
    match level {
        PrepLevel::Raw => text.split_whitespace().collect(),
        PrepLevel::CasePunct => case_punct_tokens(text).collect(),
        PrepLevel::Stop => case_punct_tokens(text).filter(|t| !is_stopword(t)).collect(),
        PrepLevel::Stem => case_punct_tokens(text)
            .filter(|t| !is_stopword(t))
            .map(|t| porter_stem(&t))
            .collect(),
    }
}
