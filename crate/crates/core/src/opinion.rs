//! Binomial subjective-logic opinions and the two fusion operators used to
//! combine query context representations.
//!
//! An [`Opinion`] is a `(belief, disbelief, uncertainty, base_rate)` quadruple
//! whose first three components sum to one. Opinions are plain `Copy` values,
//! so every operation here is a pure function.

use serde::Serialize;
use thiserror::Error;

/// Tolerance used when validating additivity and comparing opinions.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpinionError {
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("{name} is not finite")]
    NotFinite { name: &'static str },
    #[error("belief + disbelief + uncertainty = {sum}, expected 1")]
    NotAdditive { sum: f64 },
    /// Both operands of a consensus have zero uncertainty, so `kappa = 0`.
    #[error("consensus of two dogmatic opinions is undefined (kappa = 0)")]
    DogmaticConflict,
}

/// Positive and negative evidence counts (`r`, `s`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct EvidenceCounts {
    pub positive: u64,
    pub negative: u64,
}

impl EvidenceCounts {
    pub const fn new(positive: u64, negative: u64) -> Self {
        Self { positive, negative }
    }

    pub fn total(&self) -> u64 {
        self.positive + self.negative
    }
}

impl std::ops::Add for EvidenceCounts {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.positive + rhs.positive, self.negative + rhs.negative)
    }
}

impl std::iter::Sum for EvidenceCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |acc, e| acc + e)
    }
}

/// A binomial opinion about a single proposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Opinion {
    belief: f64,
    disbelief: f64,
    uncertainty: f64,
    base_rate: f64,
}

fn check_unit(name: &'static str, value: f64) -> Result<(), OpinionError> {
    if !value.is_finite() {
        return Err(OpinionError::NotFinite { name });
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(OpinionError::OutOfRange { name, value });
    }
    Ok(())
}

impl Opinion {
    /// Validating constructor.
    pub fn new(belief: f64, disbelief: f64, uncertainty: f64, base_rate: f64) -> Result<Self, OpinionError> {
        check_unit("belief", belief)?;
        check_unit("disbelief", disbelief)?;
        check_unit("uncertainty", uncertainty)?;
        check_unit("base_rate", base_rate)?;
        let sum = belief + disbelief + uncertainty;
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(OpinionError::NotAdditive { sum });
        }
        Ok(Self {
            belief,
            disbelief,
            uncertainty,
            base_rate,
        })
    }

    /// Total ignorance: `(0, 0, 1, base_rate)`.
    pub fn vacuous(base_rate: f64) -> Result<Self, OpinionError> {
        Self::new(0.0, 0.0, 1.0, base_rate)
    }

    /// Maps evidence counts to an opinion:
    /// `b = r/(r+s+2)`, `d = s/(r+s+2)`, `u = 2/(r+s+2)`.
    ///
    /// `u` is always exactly `2/(r+s+2)`. When the three quotients do not add
    /// up to exactly `1.0` in floating point, belief and disbelief are moved
    /// by at most a few ulps so that `belief + disbelief + uncertainty == 1.0`.
    pub fn from_evidence(evidence: EvidenceCounts, base_rate: f64) -> Result<Self, OpinionError> {
        check_unit("base_rate", base_rate)?;
        let total = (evidence.total() + 2) as f64;
        let belief = evidence.positive as f64 / total;
        let disbelief = evidence.negative as f64 / total;
        let uncertainty = 2.0 / total;
        let (belief, disbelief) = snap_to_unit_sum(belief, disbelief, uncertainty);
        Ok(Self {
            belief,
            disbelief,
            uncertainty,
            base_rate,
        })
    }

    pub fn belief(&self) -> f64 {
        self.belief
    }

    pub fn disbelief(&self) -> f64 {
        self.disbelief
    }

    pub fn uncertainty(&self) -> f64 {
        self.uncertainty
    }

    pub fn base_rate(&self) -> f64 {
        self.base_rate
    }

    /// Same opinion under a different prior.
    pub fn with_base_rate(self, base_rate: f64) -> Result<Self, OpinionError> {
        check_unit("base_rate", base_rate)?;
        Ok(Self { base_rate, ..self })
    }

    /// Probability expectation `E = b + a * u`.
    pub fn expectation(&self) -> f64 {
        self.belief + self.base_rate * self.uncertainty
    }

    /// Consensus of two independent opinions about the same proposition.
    ///
    /// The result keeps `self`'s base rate.
    pub fn consensus(&self, other: &Opinion) -> Result<Opinion, OpinionError> {
        let (ua, ub) = (self.uncertainty, other.uncertainty);
        let kappa = ua + ub - ua * ub;
        if kappa == 0.0 {
            return Err(OpinionError::DogmaticConflict);
        }
        Ok(Opinion {
            belief: (self.belief * ub + other.belief * ua) / kappa,
            disbelief: (self.disbelief * ub + other.disbelief * ua) / kappa,
            uncertainty: (ua * ub) / kappa,
            base_rate: self.base_rate,
        })
    }

    /// Recommendation: `self` is the opinion about the recommender, `about_x`
    /// is the recommender's opinion about the proposition.
    ///
    /// The result keeps `about_x`'s base rate.
    pub fn recommend(&self, about_x: &Opinion) -> Opinion {
        Opinion {
            belief: self.belief * about_x.belief,
            disbelief: self.belief * about_x.disbelief,
            uncertainty: self.disbelief + self.uncertainty + self.belief * about_x.uncertainty,
            base_rate: about_x.base_rate,
        }
    }

    /// Componentwise comparison within `tol`, base rate included.
    pub fn approx_eq(&self, other: &Opinion, tol: f64) -> bool {
        (self.belief - other.belief).abs() <= tol
            && (self.disbelief - other.disbelief).abs() <= tol
            && (self.uncertainty - other.uncertainty).abs() <= tol
            && (self.base_rate - other.base_rate).abs() <= tol
    }
}

/// Free-function form of [`Opinion::new`].
pub fn make_opinion(b: f64, d: f64, u: f64, a: f64) -> Result<Opinion, OpinionError> {
    Opinion::new(b, d, u, a)
}

pub fn from_evidence(evidence: EvidenceCounts, base_rate: f64) -> Result<Opinion, OpinionError> {
    Opinion::from_evidence(evidence, base_rate)
}

pub fn expectation(opinion: &Opinion) -> f64 {
    opinion.expectation()
}

pub fn consensus(a: &Opinion, b: &Opinion) -> Result<Opinion, OpinionError> {
    a.consensus(b)
}

pub fn recommendation(about_recommender: &Opinion, about_x: &Opinion) -> Opinion {
    about_recommender.recommend(about_x)
}

const MAX_ULP_SHIFT: i32 = 4;

fn step(x: f64, ulps: i32) -> f64 {
    let mut x = x;
    for _ in 0..ulps.unsigned_abs() {
        x = if ulps > 0 { x.next_up() } else { x.next_down() };
    }
    x
}

// Smallest (|db| + |dd|) ulp shift of belief and disbelief that makes the
// left-to-right sum exactly one. Zero components stay zero.
fn snap_to_unit_sum(belief: f64, disbelief: f64, uncertainty: f64) -> (f64, f64) {
    if belief + disbelief + uncertainty == 1.0 {
        return (belief, disbelief);
    }
    let range = |v: f64| if v == 0.0 { 0 } else { MAX_ULP_SHIFT };
    let (rb, rd) = (range(belief), range(disbelief));
    for radius in 1..=(rb + rd) {
        for db in -rb.min(radius)..=rb.min(radius) {
            let rest = radius - db.abs();
            if rest > rd {
                continue;
            }
            for dd in [-rest, rest] {
                let (b, d) = (step(belief, db), step(disbelief, dd));
                if b >= 0.0 && d >= 0.0 && b + d + uncertainty == 1.0 {
                    return (b, d);
                }
                if rest == 0 {
                    break;
                }
            }
        }
    }
    (belief, disbelief)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(b: f64, d: f64, u: f64) -> Opinion {
        Opinion::new(b, d, u, 0.5).unwrap()
    }

    #[test]
    fn constructor_boundaries() {
        assert_eq!(op(1.0, 0.0, 0.0).belief(), 1.0);
        assert_eq!(op(0.0, 0.0, 1.0).uncertainty(), 1.0);
        assert!(matches!(
            Opinion::new(0.5, 0.5, 0.5, 0.5),
            Err(OpinionError::NotAdditive { .. })
        ));
        assert!(matches!(
            Opinion::new(1.1, -0.1, 0.0, 0.5),
            Err(OpinionError::OutOfRange { name: "belief", .. })
        ));
        assert!(matches!(
            Opinion::new(1.0, 0.0, 0.0, 1.5),
            Err(OpinionError::OutOfRange {
                name: "base_rate",
                ..
            })
        ));
        assert!(matches!(
            Opinion::new(f64::NAN, 0.0, 1.0, 0.5),
            Err(OpinionError::NotFinite { .. })
        ));
    }

    #[test]
    fn evidence_mapping_examples() {
        let o = Opinion::from_evidence(EvidenceCounts::new(0, 0), 0.5).unwrap();
        assert_eq!(o, op(0.0, 0.0, 1.0));
        let o = Opinion::from_evidence(EvidenceCounts::new(2, 2), 0.5).unwrap();
        assert_eq!(o, op(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
        let o = Opinion::from_evidence(EvidenceCounts::new(3, 0), 0.5).unwrap();
        assert_eq!(o, op(0.6, 0.0, 0.4));
        assert!(Opinion::from_evidence(EvidenceCounts::new(1, 1), -0.1).is_err());
    }

    #[test]
    fn snapping_moves_only_a_few_ulps() {
        for n in 0..200u64 {
            for r in 0..=n {
                let ev = EvidenceCounts::new(r, n - r);
                let o = Opinion::from_evidence(ev, 0.5).unwrap();
                let total = (n + 2) as f64;
                assert_eq!(o.belief() + o.disbelief() + o.uncertainty(), 1.0);
                assert_eq!(o.uncertainty(), 2.0 / total);
                assert!((o.belief() - r as f64 / total).abs() < 1e-15);
                assert!((o.disbelief() - (n - r) as f64 / total).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(op(1.0, 0.0, 0.0).expectation(), 1.0);
        assert_eq!(op(0.0, 0.0, 1.0).expectation(), 0.5);
        assert!((op(0.5, 0.3, 0.2).expectation() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn consensus_examples() {
        let v = op(0.0, 0.0, 1.0);
        assert_eq!(v.consensus(&v).unwrap(), v);

        let fused = op(0.6, 0.0, 0.4).consensus(&op(0.4, 0.2, 0.4)).unwrap();
        assert!(fused.approx_eq(&op(0.625, 0.125, 0.25), TOLERANCE));

        // kappa = 0.52
        let fused = op(0.6, 0.2, 0.2).consensus(&op(0.4, 0.2, 0.4)).unwrap();
        let expected = op(0.32 / 0.52, 0.12 / 0.52, 0.08 / 0.52);
        assert!(fused.approx_eq(&expected, TOLERANCE));
        assert!((fused.belief() - 0.6154).abs() < 1e-4);
    }

    #[test]
    fn consensus_of_dogmatic_opinions_is_rejected() {
        let a = op(1.0, 0.0, 0.0);
        let b = op(0.0, 1.0, 0.0);
        assert_eq!(a.consensus(&b), Err(OpinionError::DogmaticConflict));
        // one dogmatic operand is fine: it dominates
        let fused = a.consensus(&op(0.2, 0.3, 0.5)).unwrap();
        assert!(fused.approx_eq(&a, TOLERANCE));
    }

    #[test]
    fn consensus_keeps_first_base_rate() {
        let a = Opinion::new(0.2, 0.2, 0.6, 0.1).unwrap();
        let b = Opinion::new(0.2, 0.2, 0.6, 0.9).unwrap();
        assert_eq!(a.consensus(&b).unwrap().base_rate(), 0.1);
        assert_eq!(b.consensus(&a).unwrap().base_rate(), 0.9);
    }

    #[test]
    fn recommendation_examples() {
        let x = op(0.5, 0.3, 0.2);
        assert!(op(1.0, 0.0, 0.0).recommend(&x).approx_eq(&x, TOLERANCE));
        assert!(op(0.0, 1.0, 0.0)
            .recommend(&x)
            .approx_eq(&op(0.0, 0.0, 1.0), TOLERANCE));
        assert!(op(0.8, 0.1, 0.1)
            .recommend(&x)
            .approx_eq(&op(0.4, 0.24, 0.36), TOLERANCE));
    }

    #[test]
    fn recommendation_keeps_proposition_base_rate() {
        let trust = Opinion::new(0.7, 0.1, 0.2, 0.3).unwrap();
        let x = Opinion::new(0.5, 0.3, 0.2, 0.8).unwrap();
        assert_eq!(trust.recommend(&x).base_rate(), 0.8);
    }
}
