//! Points of P^{n₁}×⋯×P^{n_k}, their Segre vectors and the numbers h⁰/h¹.
//!
//! For a reduced finite set `S` and a factor subset `u`, h⁰(I_S(u)) is the
//! codimension of the span of ν(π_u(S)) and h¹(I_S(u)) is the number of
//! linear dependencies among those vectors. Both are read off the rank of
//! the `#S × M_u` matrix whose rows are the Segre vectors of the projected
//! points.
//!
//! Flat coordinates use the multi-index (i₁,…,i_k) with the last index
//! varying fastest, for Segre vectors and tensors alike.

use serde::{Deserialize, Serialize};

use crate::linalg::{rank_of_rows, RatMatrix};
use crate::rational::Rational;
use crate::shape::{check_permutation, FactorPartition, FactorSubset, MultiShape};
use crate::Error;

/// True iff the two vectors are scalar multiples of each other. Both are
/// assumed nonzero and of equal length.
pub fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    // Cross products all vanish against a zero vector, so compare supports.
    a.iter().zip(b).all(|(x, y)| x.is_zero() == y.is_zero())
}

/// Canonical representative of a projective vector: first nonzero entry 1.
pub fn normalize(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let lead = lead.clone();
            v.iter().map(|x| x / &lead).collect()
        }
    }
}

/// A point (p₁,…,p_k) of a product of projective spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiPoint {
    factors: Vec<Vec<Rational>>,
}

impl MultiPoint {
    /// Each factor vector must be nonzero.
    pub fn new(factors: Vec<Vec<Rational>>) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::InvalidPoint("point has no factors".into()));
        }
        if let Some(i) = factors
            .iter()
            .position(|v| v.iter().all(Rational::is_zero))
        {
            return Err(Error::InvalidPoint(format!("factor {} is the zero vector", i + 1)));
        }
        Ok(MultiPoint { factors })
    }

    pub fn from_i64(factors: &[&[i64]]) -> Result<Self, Error> {
        Self::new(
            factors
                .iter()
                .map(|f| f.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &[Rational] {
        &self.factors[i]
    }

    pub fn factors(&self) -> &[Vec<Rational>] {
        &self.factors
    }

    pub fn conforms_to(&self, shape: &MultiShape) -> Result<(), Error> {
        if self.k() != shape.k() {
            return Err(Error::InvalidPoint(format!(
                "point has {} factors, shape has {}",
                self.k(),
                shape.k()
            )));
        }
        for (i, v) in self.factors.iter().enumerate() {
            if v.len() != shape.size(i) {
                return Err(Error::InvalidPoint(format!(
                    "factor {} has {} coordinates, expected {}",
                    i + 1,
                    v.len(),
                    shape.size(i)
                )));
            }
        }
        Ok(())
    }

    /// Equality of the underlying projective points.
    pub fn projectively_eq(&self, other: &MultiPoint) -> bool {
        self.k() == other.k()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.len() == b.len() && proportional(a, b))
    }

    /// Canonical representative, every factor normalized.
    pub fn normalized(&self) -> MultiPoint {
        MultiPoint {
            factors: self.factors.iter().map(|v| normalize(v)).collect(),
        }
    }

    /// Copy with factor `i` replaced by `v`.
    pub fn with_factor(&self, i: usize, v: Vec<Rational>) -> Result<MultiPoint, Error> {
        let mut factors = self.factors.clone();
        factors[i] = v;
        MultiPoint::new(factors)
    }

    pub fn permuted(&self, perm: &[usize]) -> MultiPoint {
        MultiPoint {
            factors: perm.iter().map(|&p| self.factors[p].clone()).collect(),
        }
    }

    /// Copy with factor `i` multiplied by `scale`.
    pub fn rescaled(&self, i: usize, scale: &Rational) -> Result<MultiPoint, Error> {
        if scale.is_zero() {
            return Err(Error::InvalidPoint("rescaling by zero".into()));
        }
        let mut factors = self.factors.clone();
        for x in factors[i].iter_mut() {
            *x = &*x * scale;
        }
        Ok(MultiPoint { factors })
    }
}

/// A reduced finite set of points, all conforming to one shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    shape: MultiShape,
    points: Vec<MultiPoint>,
}

impl PointSet {
    /// Rejects an empty list, nonconforming points and repeated projective
    /// points.
    pub fn new(shape: MultiShape, points: Vec<MultiPoint>) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::Precondition("point set is empty".into()));
        }
        for (idx, p) in points.iter().enumerate() {
            p.conforms_to(&shape)
                .map_err(|e| Error::InvalidPoint(format!("point {}: {e}", idx + 1)))?;
        }
        let normal: Vec<MultiPoint> = points.iter().map(MultiPoint::normalized).collect();
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
        Ok(PointSet { shape, points })
    }

    pub fn shape(&self) -> &MultiShape {
        &self.shape
    }

    pub fn points(&self) -> &[MultiPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &MultiPoint) -> bool {
        self.points.iter().any(|q| q.projectively_eq(p))
    }

    /// Matrix with one row segre_vector(p, u) per point.
    pub fn segre_matrix(&self, u: &FactorSubset) -> RatMatrix {
        let cols = self.shape.subset_len(u);
        let rows = self.points.iter().map(|p| segre_vector(p, u)).collect();
        RatMatrix::from_rows(cols, rows).expect("segre vectors have uniform length")
    }

    /// The (nᵢ+1) × r matrix whose columns are the factor-`i` vectors.
    pub fn factor_matrix(&self, i: usize) -> RatMatrix {
        let rows = self.points.iter().map(|p| p.factor(i).to_vec()).collect();
        RatMatrix::from_rows(self.shape.size(i), rows)
            .expect("points conform to shape")
            .transpose()
    }

    /// Rank of the factor-`i` coordinate matrix, i.e. 1 + dim ⟨πᵢ(S)⟩.
    pub fn factor_rank(&self, i: usize) -> usize {
        rank_of_rows(self.points.iter().map(|p| p.factor(i)), self.shape.size(i))
    }

    /// Reorders the factors of every point: new factor `j` is old `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<PointSet, Error> {
        let shape = self.shape.permuted(perm)?;
        Ok(PointSet {
            shape,
            points: self.points.iter().map(|p| p.permuted(perm)).collect(),
        })
    }

    /// The set with point `idx` removed; `None` if that leaves it empty.
    pub fn without(&self, idx: usize) -> Option<PointSet> {
        if self.points.len() <= 1 {
            return None;
        }
        let mut points = self.points.clone();
        points.remove(idx);
        Some(PointSet {
            shape: self.shape.clone(),
            points,
        })
    }
}

/// The Kronecker product of the factor vectors of `p` indexed by `u`, last
/// listed factor fastest.
pub fn segre_vector(p: &MultiPoint, u: &FactorSubset) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for i in u.iter() {
        let v = p.factor(i);
        let mut next = Vec::with_capacity(out.len() * v.len());
        for a in &out {
            for b in v {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Cohomology numbers of a reduced finite set with respect to O(u).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cohomology {
    /// M_u − rank.
    pub h0: usize,
    /// #S − rank.
    pub h1: usize,
    /// Rank of the #S × M_u Segre matrix of π_u(S).
    pub rank: usize,
}

pub fn cohomology(s: &PointSet, u: &FactorSubset) -> Cohomology {
    let m_u = s.shape.subset_len(u);
    let rows: Vec<Vec<Rational>> = s.points.iter().map(|p| segre_vector(p, u)).collect();
    let rank = rank_of_rows(rows.iter().map(Vec::as_slice), m_u);
    Cohomology {
        h0: m_u - rank,
        h1: s.len() - rank,
        rank,
    }
}

/// SF_S(i) = 1 + dim ⟨ν(π_{1..i}(S))⟩ for i = 1..k.
pub fn segre_function(s: &PointSet) -> Vec<usize> {
    (1..=s.shape.k())
        .map(|i| cohomology(s, &FactorSubset::prefix(i)).rank)
        .collect()
}

/// A pair of points whose projections to one factor coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateClash {
    pub factor: usize,
    pub first: usize,
    pub second: usize,
}

/// First clash in (factor, first, second) order, or `None` if every factor
/// projection is injective on `S`.
pub fn different_coordinates_witness(s: &PointSet) -> Option<CoordinateClash> {
    for factor in 0..s.shape.k() {
        let proj: Vec<Vec<Rational>> = s.points.iter().map(|p| normalize(p.factor(factor))).collect();
        for first in 0..proj.len() {
            for second in first + 1..proj.len() {
                if proj[first] == proj[second] {
                    return Some(CoordinateClash {
                        factor,
                        first,
                        second,
                    });
                }
            }
        }
    }
    None
}

pub fn has_different_coordinates(s: &PointSet) -> bool {
    different_coordinates_witness(s).is_none()
}

/// Result of the degeneracy test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneracy {
    pub degenerate: bool,
    /// First factor whose projection does not span its projective space.
    pub witness: Option<usize>,
}

pub fn is_degenerate(s: &PointSet) -> Degeneracy {
    let witness = (0..s.shape.k()).find(|&i| s.factor_rank(i) < s.shape.size(i));
    Degeneracy {
        degenerate: witness.is_some(),
        witness,
    }
}

/// A nonzero tensor, taken up to scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbientTensor {
    shape: MultiShape,
    coords: Vec<Rational>,
}

impl AmbientTensor {
    pub fn new(shape: MultiShape, coords: Vec<Rational>) -> Result<Self, Error> {
        if coords.len() != shape.ambient_len() {
            return Err(Error::DimensionMismatch {
                expected: shape.ambient_len(),
                found: coords.len(),
            });
        }
        if coords.iter().all(Rational::is_zero) {
            return Err(Error::ZeroTensor);
        }
        Ok(AmbientTensor { shape, coords })
    }

    pub fn shape(&self) -> &MultiShape {
        &self.shape
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Copy multiplied by a nonzero scalar.
    pub fn scaled(&self, c: &Rational) -> Result<AmbientTensor, Error> {
        if c.is_zero() {
            return Err(Error::ZeroTensor);
        }
        Ok(AmbientTensor {
            shape: self.shape.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        })
    }

    /// True iff the two tensors are the same projective point.
    pub fn projectively_eq(&self, other: &AmbientTensor) -> bool {
        self.shape == other.shape && proportional(&self.coords, &other.coords)
    }

    fn strides(shape: &MultiShape) -> Vec<usize> {
        let k = shape.k();
        let mut strides = vec![1; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * shape.size(i + 1);
        }
        strides
    }

    fn multi_index(shape: &MultiShape, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; shape.k()];
        for i in (0..shape.k()).rev() {
            idx[i] = flat % shape.size(i);
            flat /= shape.size(i);
        }
        idx
    }

    /// Reorders the factors: new factor `j` is old factor `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<AmbientTensor, Error> {
        check_permutation(perm, self.shape.k())?;
        let new_shape = self.shape.permuted(perm)?;
        let old_strides = Self::strides(&self.shape);
        let coords = (0..new_shape.ambient_len())
            .map(|flat| {
                let new_idx = Self::multi_index(&new_shape, flat);
                let old_flat: usize = perm
                    .iter()
                    .zip(&new_idx)
                    .map(|(&old, &i)| i * old_strides[old])
                    .sum();
                self.coords[old_flat].clone()
            })
            .collect();
        Ok(AmbientTensor {
            shape: new_shape,
            coords,
        })
    }

    /// The flattening matrix with rows indexed by the E multi-index and
    /// columns by the F multi-index (each in last-fastest order).
    pub fn flattening(&self, partition: &FactorPartition) -> RatMatrix {
        let rows = self.shape.subset_len(partition.e());
        let cols = self.shape.subset_len(partition.f());
        let strides = Self::strides(&self.shape);
        let sub_index = |u: &FactorSubset, mut flat: usize| -> usize {
            let mut off = 0;
            for i in u.members().iter().rev() {
                off += (flat % self.shape.size(*i)) * strides[*i];
                flat /= self.shape.size(*i);
            }
            off
        };
        let entries = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| self.coords[sub_index(partition.e(), r) + sub_index(partition.f(), c)].clone())
            .collect();
        RatMatrix::new(rows, cols, entries).expect("flattening dimensions")
    }
}

/// T = Σ weightsᵢ · ν(pᵢ).
pub fn assemble_tensor(weights: &[Rational], s: &PointSet) -> Result<AmbientTensor, Error> {
    if weights.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            found: weights.len(),
        });
    }
    if let Some(i) = weights.iter().position(Rational::is_zero) {
        return Err(Error::Precondition(format!("weight {} is zero", i + 1)));
    }
    let full = FactorSubset::full(s.shape.k());
    let mut coords = vec![Rational::zero(); s.shape.ambient_len()];
    for (w, p) in weights.iter().zip(&s.points) {
        for (c, x) in coords.iter_mut().zip(segre_vector(p, &full)) {
            *c = &*c + &(w * &x);
        }
    }
    AmbientTensor::new(s.shape.clone(), coords)
}
