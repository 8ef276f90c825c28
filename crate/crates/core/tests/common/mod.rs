//! Reference implementations used to cross-check the library. They work on
//! `BigRational` directly and share no code with the crate's kernels.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tensorcert::{MultiPoint, Rational};

pub type Q = BigRational;

pub fn q(x: i64) -> Q {
    Q::from_integer(x.into())
}

pub fn to_q(rows: &[Vec<Rational>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|x| x.as_big().clone()).collect()).collect()
}

/// Rank by textbook Gauss-Jordan elimination with exact fractions, pivoting
/// on the largest absolute value in the column.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<Q>]) -> Q {
    match m.len() {
        0 => Q::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Q>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .fold(Q::zero(), |a, b| a + b),
    }
}

pub fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Kruskal rank straight from the definition: every subset of every size
/// is checked, with no early exit.
pub fn kruskal_rank(m: &[Vec<Q>]) -> usize {
    let cols = transpose(m);
    let n = cols.len();
    let mut best = 0;
    for size in 1..=n {
        let mut all_independent = true;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let chosen: Vec<Vec<Q>> = (0..n).filter(|&j| mask >> j & 1 == 1).map(|j| cols[j].clone()).collect();
            if rank(&chosen) < size {
                all_independent = false;
            }
        }
        if all_independent {
            best = size;
        }
    }
    best
}

/// Outer product of the factors, flattened by decoding each flat index into
/// a multi-index (last factor fastest).
pub fn outer(factors: &[Vec<Q>]) -> Vec<Q> {
    let sizes: Vec<usize> = factors.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    (0..total)
        .map(|mut flat| {
            let mut idx = vec![0; sizes.len()];
            for i in (0..sizes.len()).rev() {
                idx[i] = flat % sizes[i];
                flat /= sizes[i];
            }
            idx.iter().zip(factors).fold(Q::one(), |acc, (&j, v)| acc * &v[j])
        })
        .collect()
}

pub fn point_q(p: &MultiPoint) -> Vec<Vec<Q>> {
    to_q(p.factors())
}

/// Σ wᵢ · outer(pᵢ).
pub fn assemble(weights: &[Rational], points: &[MultiPoint]) -> Vec<Q> {
    let mut acc: Option<Vec<Q>> = None;
    for (w, p) in weights.iter().zip(points) {
        let v = outer(&point_q(p));
        acc = Some(match acc {
            None => v.into_iter().map(|x| x * w.as_big()).collect(),
            Some(a) => a.into_iter().zip(v).map(|(a, x)| a + x * w.as_big()).collect(),
        });
    }
    acc.unwrap_or_default()
}

/// Reshape a flat k = 2 tensor into its d₁ × d₂ matrix.
pub fn as_matrix(flat: &[Q], d1: usize, d2: usize) -> Vec<Vec<Q>> {
    (0..d1).map(|i| flat[i * d2..(i + 1) * d2].to_vec()).collect()
}

/// Whether `u` and `v` span the same line (both nonzero).
pub fn proportional(u: &[Q], v: &[Q]) -> bool {
    u.len() == v.len() && rank(&[u.to_vec(), v.to_vec()]) == 1
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bx: i64) -> Vec<Vec<Q>> {
    (0..rows).map(|_| (0..cols).map(|_| q(rng.gen_range(-bx..=bx))).collect()).collect()
}

pub fn to_rational(m: &[Vec<Q>]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.iter().map(|x| Rational::from(x.clone())).collect()).collect()
}

/// A nonzero rational with numerator and denominator in [1, 7], random sign.
pub fn random_scalar(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(1..=7i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new(n, rng.gen_range(1..=7i64)).unwrap()
}
