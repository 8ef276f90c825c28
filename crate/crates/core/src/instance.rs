//! JSON instance files.
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "points": [[["1", "0"], ["1", "2"]], [["0", "1"], ["3", "-1/2"]]],
//!   "weights": ["1", "1"],
//!   "tensor": ["1", "2", "3", "-1/2"]
//! }
//! ```
//!
//! `dims` lists the factor sizes nᵢ+1, every rational is a string, and
//! `tensor` is flat with the last index varying fastest. Weights default
//! to one. A `tensor` given next to `points` must equal the weighted sum
//! exactly. Symmetric instances use a separate `symmetric` object with
//! `n`, `k`, `points` and optional `weights`.

use serde::{Deserialize, Serialize};

use crate::multiproj::{assemble_tensor, AmbientTensor, MultiPoint, PointSet};
use crate::rational::Rational;
use crate::shape::MultiShape;
use crate::symmetric::{assemble_symmetric, SymPointSet, SymmetricTensor};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<Vec<Rational>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<SymmetricStanza>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetricStanza {
    pub n: usize,
    pub k: usize,
    pub points: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rational>>,
}

/// A validated decomposition and its tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub set: PointSet,
    pub weights: Vec<Rational>,
    pub tensor: AmbientTensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricInstance {
    pub points: SymPointSet,
    pub weights: Vec<Rational>,
    pub tensor: SymmetricTensor,
}

fn default_weights(given: &Option<Vec<Rational>>, len: usize) -> Vec<Rational> {
    given.clone().unwrap_or_else(|| vec![Rational::one(); len])
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    /// A file describing `set` with the given weights and the tensor.
    pub fn from_decomposition(set: &PointSet, weights: &[Rational], tensor: Option<&AmbientTensor>) -> Self {
        InstanceFile {
            dims: Some(set.shape().sizes()),
            points: Some(set.points().iter().map(|p| p.factors().to_vec()).collect()),
            weights: Some(weights.to_vec()),
            tensor: tensor.map(|t| t.coords().to_vec()),
            symmetric: None,
        }
    }

    pub fn shape(&self) -> Result<MultiShape> {
        let dims = self
            .dims
            .as_ref()
            .ok_or_else(|| Error::InvalidShape("instance has no \"dims\"".into()))?;
        MultiShape::from_sizes(dims)
    }

    /// The point set alone; weights and tensor are not consulted.
    pub fn point_set(&self) -> Result<PointSet> {
        let shape = self.shape()?;
        let raw = self
            .points
            .as_ref()
            .ok_or_else(|| Error::Precondition("instance has no \"points\"".into()))?;
        let points = raw
            .iter()
            .enumerate()
            .map(|(i, factors)| {
                MultiPoint::new(factors.clone())
                    .map_err(|e| Error::InvalidPoint(format!("point {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(shape, points)
    }

    /// Points, weights and the tensor they define, cross-checked against
    /// the `tensor` field when present.
    pub fn decomposition(&self) -> Result<Decomposition> {
        let set = self.point_set()?;
        let weights = default_weights(&self.weights, set.len());
        let tensor = assemble_tensor(&weights, &set)?;
        if let Some(coords) = &self.tensor {
            let given = AmbientTensor::new(set.shape().clone(), coords.clone())?;
            if given != tensor {
                return Err(Error::Precondition(
                    "\"tensor\" disagrees with the weighted sum of \"points\"".into(),
                ));
            }
        }
        Ok(Decomposition { set, weights, tensor })
    }

    pub fn symmetric_instance(&self) -> Result<SymmetricInstance> {
        let stanza = self
            .symmetric
            .as_ref()
            .ok_or_else(|| Error::Precondition("instance has no \"symmetric\" object".into()))?;
        let points = SymPointSet::new(stanza.n, stanza.points.clone())?;
        let weights = default_weights(&stanza.weights, points.len());
        let tensor = assemble_symmetric(&weights, &points, stanza.k)?;
        Ok(SymmetricInstance { points, weights, tensor })
    }
}
