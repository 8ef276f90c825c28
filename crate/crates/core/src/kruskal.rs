//! Kruskal ranks of factor matrices and the k-way Kruskal condition, the
//! baseline the flattening criteria are compared against.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Claim, Conclusion, Hypothesis, Status, Witness};
use crate::certify::{bound_cactus_rank, certify_ee4, certify_exact_rank, check_non_redundant};
use crate::linalg::{rank_of_rows, RatMatrix};
use crate::multiproj::{AmbientTensor, PointSet};
use crate::shape::FactorPartition;
use crate::{Error, Result};

/// Largest column count accepted by the exhaustive search.
pub const MAX_KRUSKAL_COLUMNS: usize = 20;

pub const BASELINE: &str = "k-way Kruskal condition: sum of Kruskal ranks >= 2r + k - 1";
pub const REF_KRUSKAL: &str = "Kruskal baseline";

/// Largest κ such that every κ columns of `m` are independent.
///
/// Sizes are tried in increasing order and the search stops at the first
/// dependent subset, so only the sizes up to the answer plus one are
/// enumerated.
pub fn kruskal_rank(m: &RatMatrix) -> Result<usize> {
    if m.cols() > MAX_KRUSKAL_COLUMNS {
        return Err(Error::Precondition(format!(
            "{} columns exceeds the limit of {MAX_KRUSKAL_COLUMNS}",
            m.cols()
        )));
    }
    let columns: Vec<_> = (0..m.cols()).map(|j| m.column(j)).collect();
    if let Some(j) = columns.iter().position(|c| c.iter().all(|x| x.is_zero())) {
        return Err(Error::Precondition(format!("column {} is zero", j + 1)));
    }
    let limit = m.rows().min(m.cols());
    for size in 2..=limit {
        let dependent = (0..columns.len()).combinations(size).any(|subset| {
            rank_of_rows(subset.iter().map(|&j| columns[j].as_slice()), m.rows()) < size
        });
        if dependent {
            return Ok(size - 1);
        }
    }
    Ok(limit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KruskalReport {
    pub per_factor: Vec<usize>,
    /// Σ kᵢ.
    pub lhs: usize,
    /// 2r + k − 1.
    pub rhs: usize,
    pub applies: bool,
    pub baseline: String,
}

impl KruskalReport {
    /// Identifiability by the baseline, as a certificate.
    pub fn certificate(&self, summands: usize) -> Certificate {
        let mut cert = Certificate::new(Claim::Identifiable, REF_KRUSKAL);
        for (i, &k) in self.per_factor.iter().enumerate() {
            cert.push(Hypothesis::new(
                format!("Kruskal rank of factor {}", i + 1),
                Status::Pass,
                Witness::note(format!("Kruskal rank {k}")),
            ));
        }
        cert.push(Hypothesis::check(
            "sum of Kruskal ranks >= 2r + k - 1",
            self.applies,
            Witness::compare(self.lhs as u64, ">=", self.rhs as u64),
        ));
        cert.conclude(Conclusion::Identifiable { rank: summands })
    }
}

/// Kruskal ranks of the factor matrices of `S` and the condition
/// Σkᵢ ≥ 2r + k − 1.
pub fn kruskal_certificate(s: &PointSet) -> Result<KruskalReport> {
    let k = s.shape().k();
    let per_factor = (0..k)
        .map(|i| kruskal_rank(&s.factor_matrix(i)))
        .collect::<Result<Vec<_>>>()?;
    let lhs = per_factor.iter().sum();
    let rhs = 2 * s.len() + k - 1;
    Ok(KruskalReport {
        per_factor,
        lhs,
        rhs,
        applies: lhs >= rhs,
        baseline: BASELINE.to_string(),
    })
}

/// Side-by-side outcome of every criterion on one decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub summands: usize,
    pub non_redundant: bool,
    pub best_bound: usize,
    pub best_partition: Option<FactorPartition>,
    /// Rank certified by a flattening with h¹(E) = h¹(F) = 0.
    pub exact_rank: Option<usize>,
    pub exact_partition: Option<FactorPartition>,
    /// `MinimalRank` or `Identifiable` from the small-rank criterion.
    pub small_rank: Option<Claim>,
    pub kruskal: KruskalReport,
    /// Kruskal's condition holds and the decomposition is non-redundant.
    pub kruskal_applies: bool,
    /// Exact rank is certified while the Kruskal baseline does not apply.
    pub flattening_only: bool,
}

pub fn compare_criteria(t: &AmbientTensor, s: &PointSet) -> Result<Comparison> {
    let non_redundant = check_non_redundant(t, s)?.is_certified();
    let bound = bound_cactus_rank(s, None)?;
    let exact = certify_exact_rank(t, s, None)?;
    let small = certify_ee4(t, s)?;
    let kruskal = kruskal_certificate(s)?;
    let (exact_rank, exact_partition) = match exact.conclusion {
        Some(Conclusion::ExactRank { rank, partition }) => (Some(rank), partition),
        _ => (None, None),
    };
    let small_rank = small.is_certified().then_some(small.claim);
    let kruskal_applies = non_redundant && kruskal.applies;
    Ok(Comparison {
        summands: s.len(),
        non_redundant,
        // The bound is only meaningful for a non-redundant decomposition.
        best_bound: if non_redundant { bound.best_bound } else { 1 },
        best_partition: if non_redundant { bound.best_partition } else { None },
        exact_rank,
        exact_partition,
        small_rank,
        flattening_only: exact_rank.is_some() && !kruskal_applies,
        kruskal_applies,
        kruskal,
    })
}
