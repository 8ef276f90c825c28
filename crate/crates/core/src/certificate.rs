//! Structured verdicts.
//!
//! A [`Certificate`] lists every hypothesis that was checked together with
//! the exact quantity that decided it (a rank, a cohomology pair, a factor
//! clash). The conclusion is attached only when no hypothesis failed.
//! Hypotheses marked [`Status::Asserted`] were supplied by the caller and
//! are not verified; [`Status::Assumed`] marks a hypothesis certified by a
//! separate certificate.
//!
//! Factor and point indices inside witnesses are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::multiproj::Cohomology;
use crate::shape::{FactorPartition, FactorSubset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Claim {
    NonRedundant,
    CactusRankLowerBound,
    ExactRank,
    MinimalRank,
    Identifiable,
    DifferentCoordinatesObstruction,
    ProjectionPinning,
    SpanIntersectionIdentity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// Supplied by the caller, not verified.
    Asserted,
    /// Established by a separate certificate.
    Assumed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Asserted => "ASSERTED (not verified)",
            Status::Assumed => "ASSUMED (separate certificate)",
        })
    }
}

/// The quantity that decided a hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Rank of a rows × cols matrix.
    Rank { rows: usize, cols: usize, rank: usize },
    /// Rank of a matrix before and after appending the tensor as a row.
    SpanMembership { base_rank: usize, augmented_rank: usize },
    /// h⁰/h¹ of the point set twisted by a factor subset.
    Cohomology {
        subset: FactorSubset,
        h0: usize,
        h1: usize,
        rank: usize,
    },
    /// A bipartition with the cohomology of both parts.
    Partition {
        partition: FactorPartition,
        e: Cohomology,
        f: Cohomology,
    },
    /// Two points (1-based) with proportional projections to `factor`.
    CoordinateClash { factor: usize, first: usize, second: usize },
    /// Integer comparison `lhs relation rhs`.
    Arithmetic { lhs: u64, relation: String, rhs: u64 },
    /// Projective dimensions of the smallest product of linear spaces
    /// containing the point set, with its factor count and maximum.
    EffectiveSpace { dims: Vec<usize>, k: usize, m: usize },
    /// Projective dimensions compared by an identity.
    Dimensions { lhs: isize, rhs: isize },
    /// Ranks of evaluation matrices tried per degree.
    DegreeSearch { attempts: Vec<DegreeAttempt> },
    Note { text: String },
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeAttempt {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

impl Witness {
    pub fn note(text: impl Into<String>) -> Self {
        Witness::Note { text: text.into() }
    }

    pub fn cohomology(subset: &FactorSubset, c: Cohomology) -> Self {
        Witness::Cohomology {
            subset: subset.clone(),
            h0: c.h0,
            h1: c.h1,
            rank: c.rank,
        }
    }

    pub fn compare(lhs: u64, relation: &str, rhs: u64) -> Self {
        Witness::Arithmetic {
            lhs,
            relation: relation.to_string(),
            rhs,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Rank { rows, cols, rank } => write!(f, "rank {rank} of {rows}x{cols} matrix"),
            Witness::SpanMembership {
                base_rank,
                augmented_rank,
            } => write!(f, "rank {base_rank} -> {augmented_rank} with tensor appended"),
            Witness::Cohomology { subset, h0, h1, rank } => {
                write!(f, "u={{{subset}}}: h0={h0} h1={h1} rank={rank}")
            }
            Witness::Partition { partition, e, f: fc } => write!(
                f,
                "partition {partition}: h1(E)={} h1(F)={} rank(E)={} rank(F)={}",
                e.h1, fc.h1, e.rank, fc.rank
            ),
            Witness::CoordinateClash {
                factor,
                first,
                second,
            } => write!(f, "points {first} and {second} agree in factor {factor}"),
            Witness::Arithmetic { lhs, relation, rhs } => write!(f, "{lhs} {relation} {rhs}"),
            Witness::EffectiveSpace { dims, k, m } => {
                let dims: Vec<String> = dims.iter().map(ToString::to_string).collect();
                write!(f, "effective dims ({}), k={k}, m={m}", dims.join(","))
            }
            Witness::Dimensions { lhs, rhs } => write!(f, "{lhs} vs {rhs}"),
            Witness::DegreeSearch { attempts } => {
                let parts: Vec<String> = attempts
                    .iter()
                    .map(|a| format!("e={}: rank {} of {}x{}", a.degree, a.rank, a.rows, a.cols))
                    .collect();
                f.write_str(&parts.join("; "))
            }
            Witness::Note { text } => f.write_str(text),
            Witness::None => f.write_str("-"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: Status,
    pub witness: Witness,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, status: Status, witness: Witness) -> Self {
        Hypothesis {
            name: name.into(),
            status,
            witness,
        }
    }

    pub fn check(name: impl Into<String>, ok: bool, witness: Witness) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, witness)
    }

    pub fn is_satisfied(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    NonRedundant { summands: usize },
    CactusRankLowerBound { bound: usize, partition: FactorPartition },
    /// rank = cactus rank.
    ExactRank {
        rank: usize,
        partition: Option<FactorPartition>,
    },
    /// rank = symmetric rank = cactus rank of a symmetric tensor.
    SymmetricExactRank { rank: usize, degree: Option<usize> },
    MinimalRank { rank: usize },
    Identifiable { rank: usize },
    DifferentCoordinatesObstruction { max_summands: usize },
    ProjectionPinning {
        summands: usize,
        /// 1-based factors whose projections are pinned.
        pinned_factors: Vec<usize>,
    },
    SpanIntersectionIdentity { lhs: isize, rhs: isize },
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::NonRedundant { summands } => {
                write!(f, "non-redundant decomposition with {summands} summands")
            }
            Conclusion::CactusRankLowerBound { bound, partition } => write!(
                f,
                "cactus rank >= {bound}, hence rank >= {bound} (partition {partition})"
            ),
            Conclusion::ExactRank { rank, .. } => write!(f, "rank = cactus rank = {rank}"),
            Conclusion::SymmetricExactRank { rank, .. } => {
                write!(f, "rank = symmetric rank = cactus rank = {rank}")
            }
            Conclusion::MinimalRank { rank } => {
                write!(f, "rank = {rank}; the decomposition is minimal")
            }
            Conclusion::Identifiable { rank } => write!(
                f,
                "rank = {rank}; the decomposition is the unique minimal one (identifiable)"
            ),
            Conclusion::DifferentCoordinatesObstruction { max_summands } => write!(
                f,
                "no other non-redundant decomposition with at most {max_summands} summands has different coordinates"
            ),
            Conclusion::ProjectionPinning {
                summands,
                pinned_factors,
            } => {
                let factors: Vec<String> = pinned_factors.iter().map(ToString::to_string).collect();
                write!(
                    f,
                    "any other decomposition with at most {summands} summands has exactly {summands} points and the same projections to factors {{{}}}; it may still differ from S",
                    factors.join(",")
                )
            }
            Conclusion::SpanIntersectionIdentity { lhs, rhs } => write!(
                f,
                "dim(<v(A)> ∩ <v(B)>) = {lhs} = dim<v(A∩B)> + h1(A∪B) = {rhs}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Option<Conclusion>,
    pub theorem_ref: String,
}

impl Certificate {
    pub fn new(claim: Claim, theorem_ref: impl Into<String>) -> Self {
        Certificate {
            claim,
            hypotheses: Vec::new(),
            conclusion: None,
            theorem_ref: theorem_ref.into(),
        }
    }

    pub fn push(&mut self, h: Hypothesis) {
        self.hypotheses.push(h);
    }

    pub fn extend(&mut self, hs: impl IntoIterator<Item = Hypothesis>) {
        self.hypotheses.extend(hs);
    }

    pub fn all_satisfied(&self) -> bool {
        self.hypotheses.iter().all(Hypothesis::is_satisfied)
    }

    /// Attaches `c` iff every hypothesis is satisfied.
    pub fn conclude(mut self, c: Conclusion) -> Self {
        self.conclusion = self.all_satisfied().then_some(c);
        self
    }

    pub fn is_certified(&self) -> bool {
        self.conclusion.is_some()
    }

    pub fn has_asserted(&self) -> bool {
        self.hypotheses.iter().any(|h| h.status == Status::Asserted)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter().filter(|h| h.status == Status::Fail)
    }
}
