//! Positive and negative evidence counted from the overlaps and complements
//! of two context term sets `A`, `B` and the query term set `Q`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::opinion::EvidenceCounts;
use crate::text::TermSet;

/// How positive evidence for consensus is read off the term sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub enum PositiveRule {
    /// `r_A = |(A∩B) ∪ (A∩Q)|`, `r_B = |(A∩B) ∪ (B∩Q)|`.
    #[default]
    Union,
    /// `r_A = r_B = |A∩B∩Q|`.
    Intersection,
}

impl fmt::Display for PositiveRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PositiveRule::Union => "union",
            PositiveRule::Intersection => "intersection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown positive rule `{0}` (expected union or intersection)")]
pub struct UnknownRule(pub String);

impl FromStr for PositiveRule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "union" => Ok(PositiveRule::Union),
            "intersection" => Ok(PositiveRule::Intersection),
            _ => Err(UnknownRule(s.to_string())),
        }
    }
}

/// Evidence for each side of a pairwise combination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EvidencePair {
    pub for_a: EvidenceCounts,
    pub for_b: EvidenceCounts,
}

impl EvidencePair {
    pub fn swapped(self) -> Self {
        Self {
            for_a: self.for_b,
            for_b: self.for_a,
        }
    }
}

fn count(set: &TermSet, pred: impl Fn(&str) -> bool) -> u64 {
    set.iter().filter(|t| pred(t)).count() as u64
}

/// `|X ∖ (Y ∪ Q)|`: terms of `x` found neither in `y` nor in the query.
fn unshared(x: &TermSet, y: &TermSet, q: &TermSet) -> u64 {
    count(x, |t| !y.contains(t) && !q.contains(t))
}

pub fn consensus_evidence(a: &TermSet, b: &TermSet, q: &TermSet, rule: PositiveRule) -> EvidencePair {
    let (r_a, r_b) = match rule {
        PositiveRule::Union => (
            count(a, |t| b.contains(t) || q.contains(t)),
            count(b, |t| a.contains(t) || q.contains(t)),
        ),
        PositiveRule::Intersection => {
            let r = count(a, |t| b.contains(t) && q.contains(t));
            (r, r)
        }
    };
    EvidencePair {
        for_a: EvidenceCounts::new(r_a, unshared(a, b, q)),
        for_b: EvidenceCounts::new(r_b, unshared(b, a, q)),
    }
}

pub fn recommendation_evidence(a: &TermSet, b: &TermSet, q: &TermSet) -> EvidencePair {
    let shared = count(a, |t| b.contains(t));
    EvidencePair {
        for_a: EvidenceCounts::new(shared, unshared(a, b, q)),
        for_b: EvidenceCounts::new(shared, unshared(b, a, q)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(terms: &[&str]) -> TermSet {
        terms.iter().copied().collect()
    }

    fn ev(r: u64, s: u64) -> EvidenceCounts {
        EvidenceCounts::new(r, s)
    }

    #[test]
    fn consensus_worked_example() {
        let (q, a, b) = (
            set(&["a", "b", "c"]),
            set(&["a", "b", "d"]),
            set(&["b", "d", "e"]),
        );
        let pair = consensus_evidence(&a, &b, &q, PositiveRule::Union);
        assert_eq!(pair.for_a, ev(3, 0));
        assert_eq!(pair.for_b, ev(2, 1));

        let pair = consensus_evidence(&a, &b, &q, PositiveRule::Intersection);
        assert_eq!(pair.for_a, ev(1, 0));
        assert_eq!(pair.for_b, ev(1, 1));
    }

    #[test]
    fn identical_sets() {
        let s = set(&["a"]);
        for rule in [PositiveRule::Union, PositiveRule::Intersection] {
            let pair = consensus_evidence(&s, &s, &s, rule);
            assert_eq!(pair.for_a, ev(1, 0));
            assert_eq!(pair.for_b, ev(1, 0));
        }
    }

    #[test]
    fn disjoint_sets_are_all_negative() {
        let (q, a, b) = (set(&["q1"]), set(&["a1", "a2"]), set(&["b1", "b2", "b3"]));
        let pair = consensus_evidence(&a, &b, &q, PositiveRule::Union);
        assert_eq!(pair.for_a, ev(0, 2));
        assert_eq!(pair.for_b, ev(0, 3));
        let pair = recommendation_evidence(&a, &b, &q);
        assert_eq!(pair.for_a, ev(0, 2));
        assert_eq!(pair.for_b, ev(0, 3));
    }

    #[test]
    fn recommendation_worked_example() {
        let (q, a, b) = (
            set(&["a", "b", "c"]),
            set(&["a", "b", "d"]),
            set(&["b", "d", "e"]),
        );
        let pair = recommendation_evidence(&a, &b, &q);
        assert_eq!(pair.for_a, ev(2, 0));
        assert_eq!(pair.for_b, ev(2, 1));
    }

    #[test]
    fn recommendation_identical_representations() {
        let q = set(&["x"]);
        let a = set(&["a", "b", "x"]);
        let pair = recommendation_evidence(&a, &a, &q);
        assert_eq!(pair.for_a, ev(3, 0));
        assert_eq!(pair.for_b, ev(3, 0));
    }

    #[test]
    fn empty_sets() {
        let e = TermSet::new();
        let pair = consensus_evidence(&e, &e, &e, PositiveRule::Union);
        assert_eq!(pair, EvidencePair::default());
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("UNION".parse::<PositiveRule>().unwrap(), PositiveRule::Union);
        assert_eq!(
            "intersection".parse::<PositiveRule>().unwrap(),
            PositiveRule::Intersection
        );
        assert!("both".parse::<PositiveRule>().is_err());
    }
}
