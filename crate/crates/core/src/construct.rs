//! Random decompositions, augmentation of a non-redundant decomposition by
//! one point, and the criterion survey.
//!
//! "General" points are replaced by seeded random integer points, and every
//! constructed decomposition is verified exactly before it is returned.
//! All randomness comes from ChaCha8 streams keyed by the caller's seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::certify::check_non_redundant;
use crate::kruskal::{compare_criteria, MAX_KRUSKAL_COLUMNS};
use crate::linalg::{in_row_span, row_combination, RatMatrix};
use crate::multiproj::{
    assemble_tensor, cohomology, has_different_coordinates, proportional, segre_vector, AmbientTensor,
    MultiPoint, PointSet,
};
use crate::rational::Rational;
use crate::shape::{FactorSubset, MultiShape};
use crate::{Error, Result};

/// Default coordinate bound for sampled points and weights.
pub const DEFAULT_BOX: i64 = 9;

/// Attempts made by [`augment_decomposition`] before giving up.
pub const MAX_RETRIES: usize = 32;

/// Resampling cap for [`random_decomposition`].
pub const SAMPLE_CAP: usize = 1000;

/// A random decomposition together with the tensor it defines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomInstance {
    pub set: PointSet,
    pub weights: Vec<Rational>,
    pub tensor: AmbientTensor,
}

fn nonzero_int<R: Rng>(rng: &mut R, bx: i64) -> i64 {
    loop {
        let x = rng.gen_range(-bx..=bx);
        if x != 0 {
            return x;
        }
    }
}

/// A factor vector with first coordinate in 1..=bx and the others in
/// [−bx, bx].
fn sample_factor<R: Rng>(rng: &mut R, size: usize, bx: i64) -> Vec<Rational> {
    (0..size)
        .map(|j| {
            let x = if j == 0 { rng.gen_range(1..=bx) } else { rng.gen_range(-bx..=bx) };
            Rational::from(x)
        })
        .collect()
}

fn sample_point<R: Rng>(rng: &mut R, shape: &MultiShape, bx: i64) -> MultiPoint {
    let factors = (0..shape.k()).map(|i| sample_factor(rng, shape.size(i), bx)).collect();
    MultiPoint::new(factors).expect("first coordinate is nonzero")
}

pub fn random_decomposition(shape: &MultiShape, r: usize, bx: i64, seed: u64) -> Result<RandomInstance> {
    random_decomposition_with(shape, r, bx, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `r` random points with distinct, pairwise different coordinates and
/// nonzero integer weights, resampled until the tensor is nonzero.
pub fn random_decomposition_with<R: Rng>(
    shape: &MultiShape,
    r: usize,
    bx: i64,
    rng: &mut R,
) -> Result<RandomInstance> {
    if r == 0 || bx < 1 {
        return Err(Error::Precondition(format!("need r >= 1 and box >= 1, got r = {r}, box = {bx}")));
    }
    if r >= 2 && shape.min_dim() == 0 {
        return Err(Error::Precondition(
            "a factor P^0 cannot carry two different coordinates".into(),
        ));
    }
    for _ in 0..SAMPLE_CAP {
        let points = (0..r).map(|_| sample_point(rng, shape, bx)).collect();
        let Ok(set) = PointSet::new(shape.clone(), points) else {
            continue;
        };
        if !has_different_coordinates(&set) {
            continue;
        }
        let weights: Vec<Rational> = (0..r).map(|_| Rational::from(nonzero_int(rng, bx))).collect();
        if let Ok(tensor) = assemble_tensor(&weights, &set) {
            return Ok(RandomInstance { set, weights, tensor });
        }
    }
    Err(Error::RetryExhausted(format!(
        "no admissible sample of {r} points in shape {shape} after {SAMPLE_CAP} draws"
    )))
}

/// A decomposition with one more point, certified non-redundant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Augmentation {
    pub set: PointSet,
    /// Weights of `set` reproducing the input tensor exactly.
    pub weights: Vec<Rational>,
    pub certificate: Certificate,
    /// Index in the input of the point that was split.
    pub pivot: usize,
    /// Factor along which it was split.
    pub factor: usize,
    pub attempts: usize,
}

fn segre_rows(points: &[MultiPoint], full: &FactorSubset, cols: usize) -> RatMatrix {
    RatMatrix::from_rows(cols, points.iter().map(|p| segre_vector(p, full)).collect())
        .expect("segre vectors have uniform length")
}

enum Attempt {
    Done(Augmentation),
    Failed(String),
}

/// One pass of the construction: starting from `pivot`, walk the factors
/// with positive dimension. A random replacement `bᵢ` of the i-th factor
/// gives `O`; if ν(O) leaves the span, `P` is split into `O` and
/// `Q = P` with factor `pᵢ − t·bᵢ`, so that ν(P) lies on the line through
/// ν(O) and ν(Q). Otherwise `O` replaces `P` and the next factor is tried.
fn attempt<R: Rng>(
    t: &AmbientTensor,
    a: &PointSet,
    pivot: usize,
    bx: i64,
    rng: &mut R,
    attempts: usize,
) -> Result<Attempt> {
    let shape = a.shape();
    let k = shape.k();
    let full = FactorSubset::full(k);
    let cols = shape.ambient_len();
    let eligible: Vec<usize> = (0..k).filter(|&i| shape.dim(i) > 0).collect();
    let start = rng.gen_range(0..eligible.len());
    let mut current: Vec<MultiPoint> = a.points().to_vec();
    for step in 0..k {
        let factor = eligible[(start + step) % eligible.len()];
        let p = current[pivot].clone();
        let b = loop {
            let b = sample_factor(rng, shape.size(factor), bx);
            if !proportional(&b, p.factor(factor)) {
                break b;
            }
        };
        let o = p.with_factor(factor, b.clone())?;
        let span = segre_rows(&current, &full, cols);
        if in_row_span(&segre_vector(&o, &full), &span)? {
            current[pivot] = o;
            continue;
        }
        let scale = Rational::from(nonzero_int(rng, bx));
        let c: Vec<Rational> = p
            .factor(factor)
            .iter()
            .zip(&b)
            .map(|(x, y)| x - &(&scale * y))
            .collect();
        let q = p.with_factor(factor, c)?;
        let mut points = current.clone();
        points[pivot] = o;
        points.push(q);
        let set = match PointSet::new(shape.clone(), points) {
            Ok(set) => set,
            Err(e) => return Ok(Attempt::Failed(e.to_string())),
        };
        let certificate = check_non_redundant(t, &set)?;
        if let Some(h) = certificate.failed().next() {
            return Ok(Attempt::Failed(format!("hypothesis '{}' failed", h.name)));
        }
        let span = set.segre_matrix(&full);
        let weights = row_combination(t.coords(), &span)?
            .expect("a certified decomposition spans the tensor");
        return Ok(Attempt::Done(Augmentation {
            set,
            weights,
            certificate,
            pivot,
            factor,
            attempts,
        }));
    }
    Ok(Attempt::Failed("every factor replacement stayed in the span".into()))
}

/// Builds a non-redundant decomposition of `T` with `#A + 1` points from a
/// decomposition `A` with independent Segre image. The result is verified
/// by [`check_non_redundant`]; failed attempts are retried with fresh
/// randomness up to [`MAX_RETRIES`] times.
pub fn augment_decomposition(
    t: &AmbientTensor,
    a: &PointSet,
    weights: &[Rational],
    bx: i64,
    seed: u64,
) -> Result<Augmentation> {
    let shape = a.shape();
    if t.shape() != shape {
        return Err(Error::InvalidShape(format!(
            "tensor has shape {}, decomposition has shape {shape}",
            t.shape()
        )));
    }
    if bx < 1 {
        return Err(Error::Precondition(format!("box must be at least 1, got {bx}")));
    }
    if shape.max_dim() == 0 {
        return Err(Error::Precondition("every factor is P^0".into()));
    }
    if a.len() > shape.ambient_dim() {
        return Err(Error::Precondition(format!(
            "#A = {} exceeds M = {}",
            a.len(),
            shape.ambient_dim()
        )));
    }
    let c = cohomology(a, &FactorSubset::full(shape.k()));
    if c.h1 != 0 {
        return Err(Error::Precondition(format!(
            "Segre points of A are dependent (h1 = {})",
            c.h1
        )));
    }
    if !assemble_tensor(weights, a)?.projectively_eq(t) {
        return Err(Error::Precondition("tensor is not the weighted sum of A".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for attempts in 1..=MAX_RETRIES {
        let pivot = rng.gen_range(0..a.len());
        match attempt(t, a, pivot, bx, &mut rng, attempts)? {
            Attempt::Done(aug) => return Ok(aug),
            Attempt::Failed(reason) => last = reason,
        }
    }
    Err(Error::RetryExhausted(format!(
        "augmentation failed {MAX_RETRIES} times; last failure: {last}"
    )))
}

/// Tallies for one (shape, r) cell of a survey.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub shape: MultiShape,
    pub r: usize,
    pub trials: usize,
    /// Trials for which an admissible random decomposition was drawn.
    pub sampled: usize,
    pub non_redundant: usize,
    pub exact_rank: usize,
    pub small_rank: usize,
    pub kruskal: usize,
    pub flattening_only: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub seed: u64,
    pub sample_box: i64,
    pub rows: Vec<SurveyRow>,
}

#[derive(Default)]
struct Tally {
    sampled: usize,
    non_redundant: usize,
    exact_rank: usize,
    small_rank: usize,
    kruskal: usize,
    flattening_only: usize,
}

impl Tally {
    fn add(mut self, o: Tally) -> Tally {
        self.sampled += o.sampled;
        self.non_redundant += o.non_redundant;
        self.exact_rank += o.exact_rank;
        self.small_rank += o.small_rank;
        self.kruskal += o.kruskal;
        self.flattening_only += o.flattening_only;
        self
    }
}

/// The random stream for one trial, independent of execution order.
pub fn trial_rng(seed: u64, shape_index: usize, r: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((shape_index as u64) << 48) | ((r as u64) << 32) | trial as u64);
    rng
}

/// Runs every criterion on `trials` random decompositions for each shape
/// and each `r` in `ranks`.
pub fn survey(
    shapes: &[MultiShape],
    ranks: &[usize],
    trials: usize,
    bx: i64,
    seed: u64,
) -> Result<SurveyReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if let Some(&r) = ranks.iter().find(|&&r| r == 0 || r > MAX_KRUSKAL_COLUMNS) {
        return Err(Error::Precondition(format!(
            "r = {r} outside 1..={MAX_KRUSKAL_COLUMNS}"
        )));
    }
    let mut rows = Vec::new();
    for (si, shape) in shapes.iter().enumerate() {
        for &r in ranks {
            let tally = (0..trials)
                .into_par_iter()
                .map(|trial| -> Result<Tally> {
                    let mut rng = trial_rng(seed, si, r, trial);
                    let Ok(inst) = random_decomposition_with(shape, r, bx, &mut rng) else {
                        return Ok(Tally::default());
                    };
                    let cmp = compare_criteria(&inst.tensor, &inst.set)?;
                    Ok(Tally {
                        sampled: 1,
                        non_redundant: cmp.non_redundant as usize,
                        exact_rank: cmp.exact_rank.is_some() as usize,
                        small_rank: cmp.small_rank.is_some() as usize,
                        kruskal: cmp.kruskal_applies as usize,
                        flattening_only: cmp.flattening_only as usize,
                    })
                })
                .try_reduce(Tally::default, |a, b| Ok(a.add(b)))?;
            rows.push(SurveyRow {
                shape: shape.clone(),
                r,
                trials,
                sampled: tally.sampled,
                non_redundant: tally.non_redundant,
                exact_rank: tally.exact_rank,
                small_rank: tally.small_rank,
                kruskal: tally.kruskal,
                flattening_only: tally.flattening_only,
            });
        }
    }
    Ok(SurveyReport {
        seed,
        sample_box: bx,
        rows,
    })
}
