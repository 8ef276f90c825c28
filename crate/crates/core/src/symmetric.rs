//! Symmetric tensors as points of the Veronese variety.
//!
//! A symmetric tensor of degree `k` on `n+1` variables is stored by its
//! coordinates in the monomial basis, so `Σ λᵢ v_k(pᵢ)` is the vector of
//! `Σ λᵢ pᵢ^α` over all exponent vectors `α` with `|α| = k`. Span questions
//! are linear and do not depend on the multinomial scaling of the basis.

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Claim, Conclusion, DegreeAttempt, Hypothesis, Witness};
use crate::linalg::rank_of_rows;
use crate::multiproj::normalize;
use crate::rational::Rational;
use crate::shape::MAX_AMBIENT_LEN;
use crate::{Error, Result};

pub const REF_COMON: &str = "symmetric flattening exact rank";

/// C(n, k), or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n.checked_sub(k)?);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc = C(n, i), so acc * (n - i) is divisible by i + 1.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    u64::try_from(acc).ok()
}

fn monomial_count(n: usize, d: usize) -> Result<usize> {
    binomial((n + d) as u64, n as u64)
        .and_then(|c| usize::try_from(c).ok())
        .filter(|&c| c <= MAX_AMBIENT_LEN)
        .ok_or_else(|| Error::InvalidShape(format!("degree {d} on P^{n} is too large")))
}

/// Exponent vectors of length `vars` summing to `d`, lexicographically
/// descending: x₀ᵈ first, x_nᵈ last.
pub fn exponents(vars: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(vars: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if vars == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(vars - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, d, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

/// All degree-`d` monomials evaluated at `p`, in the order of [`exponents`].
pub fn veronese_vector(p: &[Rational], d: usize) -> Vec<Rational> {
    let powers: Vec<Vec<Rational>> = p
        .iter()
        .map(|x| {
            let mut v = Vec::with_capacity(d + 1);
            v.push(Rational::one());
            for e in 1..=d {
                let next = &v[e - 1] * x;
                v.push(next);
            }
            v
        })
        .collect();
    exponents(p.len(), d)
        .into_iter()
        .map(|alpha| {
            alpha
                .iter()
                .enumerate()
                .fold(Rational::one(), |acc, (i, &a)| &acc * &powers[i][a])
        })
        .collect()
}

/// Distinct points of Pⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymPointSet {
    n: usize,
    points: Vec<Vec<Rational>>,
}

impl SymPointSet {
    pub fn new(n: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("symmetric tensors need n >= 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Precondition("point set is empty".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != n + 1 {
                return Err(Error::InvalidPoint(format!(
                    "point {} has {} coordinates, expected {}",
                    i + 1,
                    p.len(),
                    n + 1
                )));
            }
            if p.iter().all(Rational::is_zero) {
                return Err(Error::InvalidPoint(format!("point {} is the zero vector", i + 1)));
            }
        }
        let normal: Vec<Vec<Rational>> = points.iter().map(|p| normalize(p)).collect();
        for i in 0..normal.len() {
            for j in i + 1..normal.len() {
                if normal[i] == normal[j] {
                    return Err(Error::DuplicatePoint {
                        first: i + 1,
                        second: j + 1,
                    });
                }
            }
        }
        Ok(SymPointSet { n, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rank of the #A × C(n+d, n) evaluation matrix in degree `d`.
    pub fn evaluation_rank(&self, d: usize) -> usize {
        let rows: Vec<Vec<Rational>> = self.points.iter().map(|p| veronese_vector(p, d)).collect();
        let cols = rows.first().map_or(0, Vec::len);
        rank_of_rows(rows.iter().map(Vec::as_slice), cols)
    }
}

/// A nonzero symmetric tensor in monomial coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricTensor {
    n: usize,
    k: usize,
    coords: Vec<Rational>,
}

impl SymmetricTensor {
    pub fn new(n: usize, k: usize, coords: Vec<Rational>) -> Result<Self> {
        let expected = monomial_count(n, k)?;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coords.len(),
            });
        }
        if coords.iter().all(Rational::is_zero) {
            return Err(Error::ZeroTensor);
        }
        Ok(SymmetricTensor { n, k, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

/// `Σ weightsᵢ · v_k(aᵢ)`.
pub fn assemble_symmetric(weights: &[Rational], a: &SymPointSet, k: usize) -> Result<SymmetricTensor> {
    if k == 0 {
        return Err(Error::InvalidShape("degree must be at least 1".into()));
    }
    if weights.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: weights.len(),
        });
    }
    if let Some(i) = weights.iter().position(Rational::is_zero) {
        return Err(Error::Precondition(format!("weight {} is zero", i + 1)));
    }
    let mut coords = vec![Rational::zero(); monomial_count(a.n, k)?];
    for (w, p) in weights.iter().zip(&a.points) {
        for (c, x) in coords.iter_mut().zip(veronese_vector(p, k)) {
            *c = &*c + &(w * &x);
        }
    }
    SymmetricTensor::new(a.n, k, coords)
}

/// Certifies rank = symmetric rank = cactus rank = #A for `T`, from some
/// e ≤ k/2 with h¹(J_A(e)) = 0 and non-redundancy of `A` for `T`.
///
/// Degrees are tried from ⌊k/2⌋ down to 1 and the search stops at the
/// first success. A single point is certified directly.
pub fn comon_certify(t: &SymmetricTensor, a: &SymPointSet) -> Result<Certificate> {
    if t.n != a.n {
        return Err(Error::InvalidShape(format!(
            "tensor lives on P^{}, points on P^{}",
            t.n, a.n
        )));
    }
    let k = t.k;
    let r = a.len();
    let mut cert = Certificate::new(Claim::ExactRank, REF_COMON);

    let mut attempts = Vec::new();
    let mut found = None;
    if r == 1 {
        found = Some(0);
    } else {
        for e in (1..=k / 2).rev() {
            let rank = a.evaluation_rank(e);
            attempts.push(DegreeAttempt {
                degree: e,
                rows: r,
                cols: monomial_count(a.n, e)?,
                rank,
            });
            if rank == r {
                found = Some(e);
                break;
            }
        }
    }
    let witness = if r == 1 {
        Witness::note("single point")
    } else {
        Witness::DegreeSearch { attempts }
    };
    cert.push(Hypothesis::check("h1(J_A(e)) = 0 for some e <= k/2", found.is_some(), witness));

    let rows: Vec<Vec<Rational>> = a.points.iter().map(|p| veronese_vector(p, k)).collect();
    let cols = t.coords.len();
    let base = rank_of_rows(rows.iter().map(Vec::as_slice), cols);
    let augmented = rank_of_rows(
        rows.iter().map(Vec::as_slice).chain(std::iter::once(t.coords())),
        cols,
    );
    cert.push(Hypothesis::check(
        "Veronese points independent",
        base == r,
        Witness::Rank { rows: r, cols, rank: base },
    ));
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
    Ok(cert.conclude(Conclusion::SymmetricExactRank {
        rank: r,
        degree: found.filter(|&e| e > 0),
    }))
}

/// Where an exceptional case comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionSource {
    /// Quadrics, and quartics in P², P³, P⁴.
    EvenDegree,
    /// Cubics in P⁴, from the classical classification only.
    ClassicalList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricBounds {
    /// Largest #A for which a general A has h¹(J_A(⌊k/2⌋)) = 0, plus one
    /// for odd k.
    pub r0: u64,
    /// ⌈C(n+k, k)/(n+1)⌉.
    pub rg: u64,
    pub exceptional: bool,
    /// Symmetric rank of a general form.
    pub generic_rank: u64,
    pub source: Option<ExceptionSource>,
}

/// The r₀ and generic-rank numbers for degree `k` forms on Pⁿ.
pub fn symmetric_bounds(n: usize, k: usize) -> Result<SymmetricBounds> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidShape(format!("need n >= 1 and k >= 1, got n = {n}, k = {k}")));
    }
    let overflow = || Error::InvalidShape(format!("binomials for n = {n}, k = {k} overflow"));
    let (n64, k64) = (n as u64, k as u64);
    let e = k64 / 2;
    let base = binomial(n64 + e, e).ok_or_else(overflow)?;
    let r0 = if k.is_multiple_of(2) { base } else { base.checked_add(1).ok_or_else(overflow)? };
    let rg = binomial(n64 + k64, k64).ok_or_else(overflow)?.div_ceil(n64 + 1);
    let source = match (k, n) {
        (2, n) if n >= 2 => Some(ExceptionSource::EvenDegree),
        (4, 2..=4) => Some(ExceptionSource::EvenDegree),
        (3, 4) => Some(ExceptionSource::ClassicalList),
        _ => None,
    };
    let generic_rank = match source {
        None => rg,
        Some(_) if k == 2 => n64 + 1,
        Some(_) => rg + 1,
    };
    Ok(SymmetricBounds {
        r0,
        rg,
        exceptional: source.is_some(),
        generic_rank,
        source,
    })
}
