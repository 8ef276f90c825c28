//! Certificates for non-redundancy, rank bounds, exact rank, minimality,
//! identifiability and the constraints on alternative decompositions.
//!
//! Every check reduces to ranks of Segre matrices of projections of `S`,
//! so each hypothesis carries the rank or cohomology pair that decided it.
//! The T-dependent part (span membership) lives in [`check_non_redundant`];
//! everything else depends on `S` alone.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Claim, Conclusion, Hypothesis, Status, Witness};
use crate::linalg::{rank_of_rows, span_intersection_dim};
use crate::multiproj::{cohomology, different_coordinates_witness, segre_vector, AmbientTensor, Cohomology, PointSet};
use crate::shape::{FactorPartition, FactorSubset};
use crate::{Error, Result};

pub const REF_NON_REDUNDANT: &str = "non-redundancy by span membership";
pub const REF_LOWER_BOUND: &str = "flattening lower bound";
pub const REF_EXACT_RANK: &str = "flattening exact rank";
pub const REF_SMALL_RANK: &str = "small-rank identifiability";
pub const REF_SPAN_INTERSECTION: &str = "span intersection identity";
pub const REF_OBSTRUCTION: &str = "different-coordinates obstruction";
pub const REF_PINNING: &str = "projection pinning";
pub const REF_PINNING_FAMILY: &str = "projection pinning, single family";

fn check_shapes(t: &AmbientTensor, s: &PointSet) -> Result<()> {
    if t.shape() != s.shape() {
        return Err(Error::InvalidShape(format!(
            "tensor has shape {}, decomposition has shape {}",
            t.shape(),
            s.shape()
        )));
    }
    Ok(())
}

fn full_segre_rows(s: &PointSet) -> Vec<Vec<crate::Rational>> {
    let full = FactorSubset::full(s.shape().k());
    s.points().iter().map(|p| segre_vector(p, &full)).collect()
}

/// Certifies that `S` is a non-redundant decomposition of `T`: ν(S) is
/// independent, `T ∈ ⟨ν(S)⟩`, and `T ∉ ⟨ν(S∖{p})⟩` for every `p ∈ S`.
/// Given independence, maximal proper subsets are enough.
pub fn check_non_redundant(t: &AmbientTensor, s: &PointSet) -> Result<Certificate> {
    check_shapes(t, s)?;
    let cols = s.shape().ambient_len();
    let full = FactorSubset::full(s.shape().k());
    let rows = full_segre_rows(s);
    let r = s.len();
    let mut cert = Certificate::new(Claim::NonRedundant, REF_NON_REDUNDANT);

    let c = cohomology(s, &full);
    cert.push(Hypothesis::check(
        "Segre points independent",
        c.h1 == 0,
        Witness::cohomology(&full, c),
    ));

    let base = c.rank;
    let augmented = rank_of_rows(
        rows.iter().map(Vec::as_slice).chain(std::iter::once(t.coords())),
        cols,
    );
    cert.push(Hypothesis::check(
        "tensor in span",
        augmented == base,
        Witness::SpanMembership {
            base_rank: base,
            augmented_rank: augmented,
        },
    ));

    for skip in 0..r {
        let others = || {
            rows.iter()
                .enumerate()
                .filter(move |&(i, _)| i != skip)
                .map(|(_, row)| row.as_slice())
        };
        let base = rank_of_rows(others(), cols);
        let augmented = rank_of_rows(others().chain(std::iter::once(t.coords())), cols);
        cert.push(Hypothesis::check(
            format!("point {} needed", skip + 1),
            augmented > base,
            Witness::SpanMembership {
                base_rank: base,
                augmented_rank: augmented,
            },
        ));
    }
    Ok(cert.conclude(Conclusion::NonRedundant { summands: r }))
}

/// Cohomology numbers of `S` for every subset that occurs in `partitions`,
/// computed in parallel.
fn cohomology_table(s: &PointSet, partitions: &[FactorPartition]) -> HashMap<FactorSubset, Cohomology> {
    let mut subsets: Vec<FactorSubset> = partitions
        .iter()
        .flat_map(|p| [p.e().clone(), p.f().clone()])
        .collect();
    subsets.sort();
    subsets.dedup();
    subsets
        .into_par_iter()
        .map(|u| {
            let c = cohomology(s, &u);
            (u, c)
        })
        .collect()
}

fn partitions_for(s: &PointSet, partition: Option<&FactorPartition>) -> Result<Vec<FactorPartition>> {
    let k = s.shape().k();
    match partition {
        Some(p) => {
            let covered = p.e().len() + p.f().len();
            let in_range = p.e().iter().chain(p.f().iter()).all(|i| i < k);
            if covered != k || !in_range {
                return Err(Error::InvalidSubset(format!(
                    "partition {p} does not split the {k} factors"
                )));
            }
            Ok(vec![p.clone()])
        }
        None => Ok(FactorPartition::all(k)),
    }
}

/// Outcome of the lower-bound test on one bipartition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionOutcome {
    pub partition: FactorPartition,
    pub e: Cohomology,
    pub f: Cohomology,
    pub applicable: bool,
    /// M_F − h⁰(S,F), present when applicable.
    pub bound: Option<usize>,
    pub reason: Option<String>,
}

/// Lower bounds on the cactus rank (hence the rank) of any `T` for which
/// `S` is a non-redundant decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Non-redundancy of `(T, S)`; certified separately.
    pub assumed: Hypothesis,
    pub best_bound: usize,
    pub best_partition: Option<FactorPartition>,
    pub per_partition: Vec<PartitionOutcome>,
}

impl BoundReport {
    /// The best bound as a certificate. With no applicable partition the
    /// certificate carries a failed hypothesis and no conclusion.
    pub fn certificate(&self) -> Certificate {
        let mut cert = Certificate::new(Claim::CactusRankLowerBound, REF_LOWER_BOUND);
        cert.push(self.assumed.clone());
        let chosen = match &self.best_partition {
            Some(best) => self.per_partition.iter().find(|o| &o.partition == best),
            None if self.per_partition.len() == 1 => self.per_partition.first(),
            None => None,
        };
        match chosen {
            Some(o) => {
                cert.push(Hypothesis::check(
                    "h1(E) = 0",
                    o.e.h1 == 0,
                    Witness::cohomology(o.partition.e(), o.e),
                ));
                cert.push(Hypothesis::check(
                    "rank of F-flattening >= 2",
                    o.f.rank >= 2,
                    Witness::cohomology(o.partition.f(), o.f),
                ));
            }
            None => cert.push(Hypothesis::check(
                "applicable partition",
                false,
                Witness::note(format!(
                    "none of {} partitions has h1(E) = 0 and bound >= 2",
                    self.per_partition.len()
                )),
            )),
        }
        match &self.best_partition {
            Some(p) => cert.conclude(Conclusion::CactusRankLowerBound {
                bound: self.best_bound,
                partition: p.clone(),
            }),
            None => cert,
        }
    }
}

/// Lower bound from each bipartition `E ⊔ F`: the partition applies when
/// h¹(S,E) = 0, and then bounds the cactus rank below by M_F − h⁰(S,F),
/// provided that number is at least 2. Without `partition` every proper
/// bipartition is tried and the largest bound wins (ties go to the first
/// partition in enumeration order).
pub fn bound_cactus_rank(s: &PointSet, partition: Option<&FactorPartition>) -> Result<BoundReport> {
    let partitions = partitions_for(s, partition)?;
    let table = cohomology_table(s, &partitions);
    let per_partition: Vec<PartitionOutcome> = partitions
        .into_iter()
        .map(|p| {
            let e = table[p.e()];
            let f = table[p.f()];
            let (applicable, bound, reason) = if e.h1 != 0 {
                (false, None, Some(format!("h1(E) = {} != 0", e.h1)))
            } else if f.rank < 2 {
                (false, None, Some(format!("bound {} <= 1", f.rank)))
            } else {
                (true, Some(f.rank), None)
            };
            PartitionOutcome {
                partition: p,
                e,
                f,
                applicable,
                bound,
                reason,
            }
        })
        .collect();
    let mut best_bound = 1;
    let mut best_partition = None;
    for o in &per_partition {
        if let Some(b) = o.bound {
            if b > best_bound {
                best_bound = b;
                best_partition = Some(o.partition.clone());
            }
        }
    }
    Ok(BoundReport {
        assumed: Hypothesis::new(
            "non-redundant decomposition",
            Status::Assumed,
            Witness::note("checked by the non-redundancy certificate"),
        ),
        best_bound,
        best_partition,
        per_partition,
    })
}

/// Certifies rank(T) = cactus rank(T) = #S from a bipartition with
/// h¹(S,E) = h¹(S,F) = 0 and non-redundancy of `(T, S)`.
pub fn certify_exact_rank(
    t: &AmbientTensor,
    s: &PointSet,
    partition: Option<&FactorPartition>,
) -> Result<Certificate> {
    let non_redundant = check_non_redundant(t, s)?;
    let mut cert = Certificate::new(Claim::ExactRank, REF_EXACT_RANK);
    cert.extend(non_redundant.hypotheses);
    let r = s.len();

    if s.shape().k() == 1 {
        cert.push(Hypothesis::check(
            "single factor with one summand",
            r == 1,
            Witness::compare(r as u64, "=", 1),
        ));
        return Ok(cert.conclude(Conclusion::ExactRank {
            rank: r,
            partition: None,
        }));
    }

    let partitions = partitions_for(s, partition)?;
    let table = cohomology_table(s, &partitions);
    let witness_of = |p: &FactorPartition| Witness::Partition {
        partition: p.clone(),
        e: table[p.e()],
        f: table[p.f()],
    };
    let found = partitions
        .iter()
        .find(|p| table[p.e()].h1 == 0 && table[p.f()].h1 == 0);
    let name = "flattening with h1(E) = h1(F) = 0";
    match found {
        Some(p) => {
            cert.push(Hypothesis::check(name, true, witness_of(p)));
            Ok(cert.conclude(Conclusion::ExactRank {
                rank: r,
                partition: Some(p.clone()),
            }))
        }
        None => {
            let witness = if partitions.len() == 1 {
                witness_of(&partitions[0])
            } else {
                Witness::note(format!("none of {} partitions qualifies", partitions.len()))
            };
            cert.push(Hypothesis::check(name, false, witness));
            Ok(cert)
        }
    }
}

/// Projective dimensions of the smallest product of linear subspaces
/// containing `S`: dim ⟨πᵢ(S)⟩ for each factor.
pub fn effective_dims(s: &PointSet) -> Vec<usize> {
    (0..s.shape().k()).map(|i| s.factor_rank(i) - 1).collect()
}

/// Minimality (2r ≤ k+m) and identifiability (2r < k+m) for small r.
///
/// `k` and `m` are read off the smallest multiprojective space containing
/// `S`: factors whose projection is a single point are dropped and each
/// remaining factor is replaced by the span of the projection. The
/// certificate also checks that `T` is concise there (each single-factor
/// flattening of `T` has rank dim ⟨πᵢ(S)⟩ + 1), so `T` is non-degenerate in
/// that space and every minimal decomposition of `T` lives in it.
pub fn certify_ee4(t: &AmbientTensor, s: &PointSet) -> Result<Certificate> {
    let non_redundant = check_non_redundant(t, s)?;
    let r = s.len();
    let dims = effective_dims(s);
    let k = dims.iter().filter(|&&d| d >= 1).count();
    let m = dims.iter().copied().max().unwrap_or(0);
    let strict = r == 1 || 2 * r < k + m;
    let claim = if strict { Claim::Identifiable } else { Claim::MinimalRank };
    let mut cert = Certificate::new(claim, REF_SMALL_RANK);
    cert.extend(non_redundant.hypotheses);
    cert.push(Hypothesis::new(
        "minimal multiprojective space",
        Status::Pass,
        Witness::EffectiveSpace { dims, k, m },
    ));
    cert.extend(conciseness(t, s));
    if r == 1 {
        cert.push(Hypothesis::check(
            "single summand",
            true,
            Witness::compare(1, "=", 1),
        ));
        return Ok(cert.conclude(Conclusion::Identifiable { rank: 1 }));
    }
    let (lhs, rhs) = (2 * r as u64, (k + m) as u64);
    if strict {
        cert.push(Hypothesis::check("2r < k+m", true, Witness::compare(lhs, "<", rhs)));
        Ok(cert.conclude(Conclusion::Identifiable { rank: r }))
    } else {
        cert.push(Hypothesis::check(
            "2r <= k+m",
            lhs <= rhs,
            Witness::compare(lhs, "<=", rhs),
        ));
        Ok(cert.conclude(Conclusion::MinimalRank { rank: r }))
    }
}

/// One hypothesis per factor: the flattening of `T` that separates factor
/// `i` has the rank of the factor matrix of `S`.
fn conciseness(t: &AmbientTensor, s: &PointSet) -> Vec<Hypothesis> {
    let k = s.shape().k();
    (0..k)
        .map(|i| {
            let name = format!("T concise in factor {}", i + 1);
            let span = s.factor_rank(i);
            let Some(rest) = FactorSubset::single(i).complement(k) else {
                return Hypothesis::check(name, span == 1, Witness::compare(span as u64, "=", 1));
            };
            let partition = FactorPartition::new(FactorSubset::single(i), rest, k)
                .expect("a factor and its complement partition the factors");
            let flat = t.flattening(&partition);
            let rank = flat.rank();
            Hypothesis::check(
                name,
                rank == span,
                Witness::Rank {
                    rows: flat.rows(),
                    cols: flat.cols(),
                    rank,
                },
            )
        })
        .collect()
}

/// Checks dim(⟨ν(A)⟩ ∩ ⟨ν(B)⟩) = dim⟨ν(A∩B)⟩ + h¹(A∪B) for sets with
/// independent Segre images, with dim⟨∅⟩ = −1.
pub fn verify_prop_bb(a: &PointSet, b: &PointSet) -> Result<Certificate> {
    if a.shape() != b.shape() {
        return Err(Error::InvalidShape(format!(
            "sets have shapes {} and {}",
            a.shape(),
            b.shape()
        )));
    }
    let k = a.shape().k();
    let full = FactorSubset::full(k);
    let cols = a.shape().ambient_len();
    let mut cert = Certificate::new(Claim::SpanIntersectionIdentity, REF_SPAN_INTERSECTION);
    let ca = cohomology(a, &full);
    let cb = cohomology(b, &full);
    cert.push(Hypothesis::check("A independent", ca.h1 == 0, Witness::cohomology(&full, ca)));
    cert.push(Hypothesis::check("B independent", cb.h1 == 0, Witness::cohomology(&full, cb)));

    let lhs = span_intersection_dim(&a.segre_matrix(&full), &b.segre_matrix(&full))?;
    let common: Vec<Vec<crate::Rational>> = a
        .points()
        .iter()
        .filter(|p| b.contains(p))
        .map(|p| segre_vector(p, &full))
        .collect();
    let common_dim = rank_of_rows(common.iter().map(Vec::as_slice), cols) as isize - 1;
    let union: Vec<Vec<crate::Rational>> = a
        .points()
        .iter()
        .chain(b.points().iter().filter(|q| !a.contains(q)))
        .map(|p| segre_vector(p, &full))
        .collect();
    let union_h1 = union.len() - rank_of_rows(union.iter().map(Vec::as_slice), cols);
    let rhs = common_dim + union_h1 as isize;
    cert.push(Hypothesis::check(
        "intersection dimension identity",
        lhs == rhs,
        Witness::Dimensions { lhs, rhs },
    ));
    Ok(cert.conclude(Conclusion::SpanIntersectionIdentity { lhs, rhs }))
}

/// Rules out alternative non-redundant decompositions with at most `x`
/// points and different coordinates. Non-redundancy of `S` is assumed.
pub fn obstruct_alt_decompositions(s: &PointSet, x: usize) -> Result<Certificate> {
    let k = s.shape().k();
    if x == 0 || x >= k {
        return Err(Error::Precondition(format!("x = {x} must satisfy 0 < x < {k}")));
    }
    let r = s.len();
    let mut cert = Certificate::new(Claim::DifferentCoordinatesObstruction, REF_OBSTRUCTION);
    cert.push(Hypothesis::new(
        "non-redundant decomposition",
        Status::Assumed,
        Witness::note("checked by the non-redundancy certificate"),
    ));
    match different_coordinates_witness(s) {
        None => cert.push(Hypothesis::check(
            "different coordinates",
            true,
            Witness::note("every factor projection is injective"),
        )),
        Some(c) => cert.push(Hypothesis::check(
            "different coordinates",
            false,
            Witness::CoordinateClash {
                factor: c.factor + 1,
                first: c.first + 1,
                second: c.second + 1,
            },
        )),
    }
    let base = (s.shape().min_dim() + 1) as u64;
    let power = base.checked_pow((k - x) as u32).unwrap_or(u64::MAX);
    cert.push(Hypothesis::check(
        "(m'+1)^(k-x) >= r",
        power >= r as u64,
        Witness::compare(power, ">=", r as u64),
    ));
    let subsets = FactorSubset::all_of_size(k, k - x);
    let results: Vec<(FactorSubset, Cohomology)> = subsets
        .into_par_iter()
        .map(|u| {
            let c = cohomology(s, &u);
            (u, c)
        })
        .collect();
    for (u, c) in results {
        cert.push(Hypothesis::check(
            format!("h1(S, {{{u}}}) = 0"),
            c.h1 == 0,
            Witness::cohomology(&u, c),
        ));
    }
    Ok(cert.conclude(Conclusion::DifferentCoordinatesObstruction { max_summands: x }))
}

/// The overall pinning certificate and one certificate per family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinReport {
    /// Requires every family's hypotheses; pins every factor projection.
    pub overall: Certificate,
    /// Family `i` alone pins the projection to the factors in Fᵢ.
    pub per_family: Vec<Certificate>,
}

fn family_hypotheses(
    s: &PointSet,
    idx: usize,
    f: &FactorSubset,
    quasi_general: bool,
) -> Vec<Hypothesis> {
    let k = s.shape().k();
    let e = f.complement(k).expect("family is a proper subset");
    let r = s.len();
    let m_f = s.shape().subset_len(f);
    let m_e = s.shape().subset_len(&e);
    let tag = format!("F{}", idx + 1);
    let cf = cohomology(s, f);
    let ce = cohomology(s, &e);
    vec![
        Hypothesis::check(
            format!("{tag} r < M_F"),
            r < m_f,
            Witness::compare(r as u64, "<", m_f as u64),
        ),
        Hypothesis::check(
            format!("{tag} r <= M_E"),
            r <= m_e,
            Witness::compare(r as u64, "<=", m_e as u64),
        ),
        Hypothesis::check(format!("{tag} h0(F) = M_F - r"), cf.h0 + r == m_f, Witness::cohomology(f, cf)),
        Hypothesis::check(format!("{tag} h0(E) = M_E - r"), ce.h0 + r == m_e, Witness::cohomology(&e, ce)),
        if quasi_general {
            Hypothesis::new(
                format!("{tag} quasi-general"),
                Status::Asserted,
                Witness::note(format!("projection to {{{f}}} asserted by the caller")),
            )
        } else {
            Hypothesis::check(
                format!("{tag} quasi-general"),
                false,
                Witness::note("not verifiable; pass the assertion flag to accept it"),
            )
        },
    ]
}

/// Pins the factor projections of any other decomposition with at most
/// `#S` points. `families[i]` must contain factor `i`; `quasi_general[i]`
/// is the caller's assertion for the projection of `S` to that family.
pub fn pin_projections(
    t: &AmbientTensor,
    s: &PointSet,
    families: &[FactorSubset],
    quasi_general: &[bool],
) -> Result<PinReport> {
    let k = s.shape().k();
    if families.len() != k {
        return Err(Error::InvalidSubset(format!(
            "expected {k} families, found {}",
            families.len()
        )));
    }
    if quasi_general.len() != k {
        return Err(Error::InvalidSubset(format!(
            "expected {k} quasi-generality flags, found {}",
            quasi_general.len()
        )));
    }
    for (i, f) in families.iter().enumerate() {
        if !f.contains(i) {
            return Err(Error::InvalidSubset(format!("family {} must contain factor {}", i + 1, i + 1)));
        }
        if f.iter().any(|j| j >= k) || f.complement(k).is_none() {
            return Err(Error::InvalidSubset(format!(
                "family {} = {{{f}}} must be a proper subset of the factors",
                i + 1
            )));
        }
    }
    let non_redundant = check_non_redundant(t, s)?;
    let r = s.len();
    let mut overall = Certificate::new(Claim::ProjectionPinning, REF_PINNING);
    overall.extend(non_redundant.hypotheses.iter().cloned());
    let mut per_family = Vec::with_capacity(k);
    for (i, f) in families.iter().enumerate() {
        let hyps = family_hypotheses(s, i, f, quasi_general[i]);
        overall.extend(hyps.iter().cloned());
        let mut cert = Certificate::new(Claim::ProjectionPinning, REF_PINNING_FAMILY);
        cert.extend(non_redundant.hypotheses.iter().cloned());
        cert.extend(hyps);
        per_family.push(cert.conclude(Conclusion::ProjectionPinning {
            summands: r,
            pinned_factors: f.iter().map(|j| j + 1).collect(),
        }));
    }
    let overall = overall.conclude(Conclusion::ProjectionPinning {
        summands: r,
        pinned_factors: (1..=k).collect(),
    });
    Ok(PinReport { overall, per_family })
}
