//! Factor shapes, factor subsets and bipartitions.
//!
//! Factor indices are 0-based in the API and 1-based in every textual and
//! serialized form (`"1,2/3"`, JSON lists), matching how users number the
//! factors of a tensor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Largest supported number of factors. Partition search is exhaustive.
pub const MAX_FACTORS: usize = 10;

/// Largest supported number of tensor coordinates, Π(nᵢ+1).
pub const MAX_AMBIENT_LEN: usize = 1 << 20;

/// The projective dimensions (n₁,…,n_k) of a product P^{n₁}×⋯×P^{n_k}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct MultiShape {
    dims: Vec<usize>,
}

impl MultiShape {
    pub fn new(dims: Vec<usize>) -> Result<Self, Error> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("at least one factor is required".into()));
        }
        if dims.len() > MAX_FACTORS {
            return Err(Error::InvalidShape(format!(
                "{} factors exceeds the supported maximum of {MAX_FACTORS}",
                dims.len()
            )));
        }
        let mut len: usize = 1;
        for &n in &dims {
            len = n
                .checked_add(1)
                .and_then(|d| len.checked_mul(d))
                .filter(|&l| l <= MAX_AMBIENT_LEN)
                .ok_or_else(|| {
                    Error::InvalidShape(format!(
                        "tensor with dims {dims:?} exceeds {MAX_AMBIENT_LEN} coordinates"
                    ))
                })?;
        }
        Ok(MultiShape { dims })
    }

    /// Builds a shape from factor sizes dᵢ = nᵢ + 1.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, Error> {
        let dims = sizes
            .iter()
            .map(|&d| {
                d.checked_sub(1)
                    .ok_or_else(|| Error::InvalidShape("factor sizes must be at least 1".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dims)
    }

    /// Number of factors k.
    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Projective dimension nᵢ of factor `i`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    /// Vector length nᵢ + 1 of factor `i`.
    pub fn size(&self, i: usize) -> usize {
        self.dims[i] + 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.dims.iter().map(|n| n + 1).collect()
    }

    /// M_u = Π_{i∈u}(nᵢ+1).
    pub fn subset_len(&self, u: &FactorSubset) -> usize {
        u.iter().map(|i| self.size(i)).product()
    }

    /// Number of tensor coordinates, M + 1.
    pub fn ambient_len(&self) -> usize {
        self.dims.iter().map(|n| n + 1).product()
    }

    /// M = −1 + Π(nᵢ+1), the dimension of the Segre ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_len() - 1
    }

    /// m = max nᵢ.
    pub fn max_dim(&self) -> usize {
        *self.dims.iter().max().expect("non-empty shape")
    }

    /// m′ = min nᵢ.
    pub fn min_dim(&self) -> usize {
        *self.dims.iter().min().expect("non-empty shape")
    }

    /// Reorders the factors: new factor `j` is old factor `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<MultiShape, Error> {
        check_permutation(perm, self.k())?;
        Ok(MultiShape {
            dims: perm.iter().map(|&p| self.dims[p]).collect(),
        })
    }
}

impl TryFrom<Vec<usize>> for MultiShape {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self, Error> {
        MultiShape::new(dims)
    }
}

impl From<MultiShape> for Vec<usize> {
    fn from(s: MultiShape) -> Vec<usize> {
        s.dims
    }
}

impl fmt::Display for MultiShape {
    /// Tensor type, e.g. `3x4x6` for dims (2,3,5).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes().iter().map(ToString::to_string).collect();
        f.write_str(&sizes.join("x"))
    }
}

impl std::str::FromStr for MultiShape {
    type Err = Error;

    /// Parses a tensor type such as `3x4x6`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let sizes = s
            .split('x')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid factor size {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if sizes.len() > MAX_FACTORS {
            return Err(Error::InvalidShape(format!(
                "{} factors exceeds the supported maximum of {MAX_FACTORS}",
                sizes.len()
            )));
        }
        MultiShape::from_sizes(&sizes)
    }
}

/// Parses colon-separated factor lists, e.g. `"1,2:1,2:3"`.
pub fn parse_families(s: &str, k: usize) -> Result<Vec<FactorSubset>, Error> {
    s.split(':').map(|part| FactorSubset::parse(part, k)).collect()
}

pub(crate) fn check_permutation(perm: &[usize], k: usize) -> Result<(), Error> {
    let mut seen = vec![false; k];
    if perm.len() != k {
        return Err(Error::InvalidSubset(format!(
            "permutation of length {} for {k} factors",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= k || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidSubset(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// A nonempty set of factor indices, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FactorSubset {
    members: Vec<usize>,
}

impl FactorSubset {
    /// `members` are 0-based factor indices below `k`; order is irrelevant,
    /// repeats are rejected.
    pub fn new(mut members: Vec<usize>, k: usize) -> Result<Self, Error> {
        members.sort_unstable();
        if members.is_empty() {
            return Err(Error::InvalidSubset("empty factor subset".into()));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("repeated factor in {members:?}")));
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= k) {
            return Err(Error::InvalidSubset(format!(
                "factor {} out of range 1..={k}",
                bad + 1
            )));
        }
        Ok(FactorSubset { members })
    }

    pub fn full(k: usize) -> Self {
        FactorSubset {
            members: (0..k).collect(),
        }
    }

    pub fn single(i: usize) -> Self {
        FactorSubset { members: vec![i] }
    }

    /// The first `i` factors {1,…,i}.
    pub fn prefix(i: usize) -> Self {
        FactorSubset {
            members: (0..i).collect(),
        }
    }

    /// Parses a 1-based comma list such as `"1,2"`.
    pub fn parse(s: &str, k: usize) -> Result<Self, Error> {
        let members = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .ok()
                    .filter(|&i| i >= 1)
                    .map(|i| i - 1)
                    .ok_or_else(|| Error::Parse(format!("invalid factor index {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(members, k)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// The complementary subset, or `None` if `self` is every factor.
    pub fn complement(&self, k: usize) -> Option<FactorSubset> {
        let members: Vec<usize> = (0..k).filter(|i| !self.contains(*i)).collect();
        (!members.is_empty()).then_some(FactorSubset { members })
    }

    pub fn is_subset_of(&self, other: &FactorSubset) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Image of this subset after reordering factors with `perm` (new factor
    /// `j` is old factor `perm[j]`).
    pub fn permuted(&self, perm: &[usize]) -> FactorSubset {
        let mut members: Vec<usize> = (0..perm.len()).filter(|&j| self.contains(perm[j])).collect();
        members.sort_unstable();
        FactorSubset { members }
    }

    /// All subsets of `k` factors with exactly `size` members, in
    /// lexicographic order.
    pub fn all_of_size(k: usize, size: usize) -> Vec<FactorSubset> {
        use itertools::Itertools;
        (0..k)
            .combinations(size)
            .map(|members| FactorSubset { members })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for FactorSubset {
    type Error = Error;
    /// From a 1-based list.
    fn try_from(one_based: Vec<usize>) -> Result<Self, Error> {
        if one_based.contains(&0) {
            return Err(Error::InvalidSubset("factor indices start at 1".into()));
        }
        let k = one_based.iter().copied().max().unwrap_or(0);
        FactorSubset::new(one_based.into_iter().map(|i| i - 1).collect(), k)
    }
}

impl From<FactorSubset> for Vec<usize> {
    fn from(s: FactorSubset) -> Vec<usize> {
        s.members.into_iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for FactorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A bipartition E ⊔ F of the factors, both parts nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct FactorPartition {
    e: FactorSubset,
    f: FactorSubset,
}

impl FactorPartition {
    pub fn new(e: FactorSubset, f: FactorSubset, k: usize) -> Result<Self, Error> {
        if e.iter().chain(f.iter()).any(|i| i >= k) {
            return Err(Error::InvalidSubset(format!("partition {e}/{f} out of range for {k} factors")));
        }
        if e.iter().any(|i| f.contains(i)) {
            return Err(Error::InvalidSubset(format!("parts {e} and {f} overlap")));
        }
        if e.len() + f.len() != k {
            return Err(Error::InvalidSubset(format!("parts {e} and {f} do not cover all {k} factors")));
        }
        Ok(FactorPartition { e, f })
    }

    /// Parses `"E/F"` with 1-based comma lists, e.g. `"1,2/3"`.
    pub fn parse(s: &str, k: usize) -> Result<Self, Error> {
        let (e, f) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("partition {s:?} must look like 1,2/3")))?;
        Self::new(FactorSubset::parse(e, k)?, FactorSubset::parse(f, k)?, k)
    }

    /// Partition whose E part is the set bits of `mask`.
    fn from_mask(mask: u32, k: usize) -> Self {
        let (e, f): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| mask & (1 << i) != 0);
        FactorPartition {
            e: FactorSubset { members: e },
            f: FactorSubset { members: f },
        }
    }

    /// All 2^k − 2 ordered bipartitions, ordered by the bitmask of E.
    pub fn all(k: usize) -> Vec<FactorPartition> {
        if k < 2 {
            return Vec::new();
        }
        (1..(1u32 << k) - 1).map(|mask| Self::from_mask(mask, k)).collect()
    }

    pub fn e(&self) -> &FactorSubset {
        &self.e
    }

    pub fn f(&self) -> &FactorSubset {
        &self.f
    }

    pub fn swapped(&self) -> FactorPartition {
        FactorPartition {
            e: self.f.clone(),
            f: self.e.clone(),
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> FactorPartition {
        FactorPartition {
            e: self.e.permuted(perm),
            f: self.f.permuted(perm),
        }
    }
}

#[derive(Deserialize)]
struct RawPartition {
    e: FactorSubset,
    f: FactorSubset,
}

impl TryFrom<RawPartition> for FactorPartition {
    type Error = Error;
    fn try_from(raw: RawPartition) -> Result<Self, Error> {
        let k = raw.e.len() + raw.f.len();
        FactorPartition::new(raw.e, raw.f, k)
    }
}

impl fmt::Display for FactorPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.e, self.f)
    }
}
