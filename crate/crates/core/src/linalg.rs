//! Exact rank computations over ℚ.
//!
//! Rows are cleared of denominators and reduced with fraction-free
//! elimination. After every elimination step the touched row is divided by
//! the gcd of its entries, which keeps coefficient growth in check. Pivots
//! are the first nonzero entry found scanning columns left to right and,
//! within a column, rows top to bottom.
//!
//! Elimination first runs on `i128` with checked arithmetic and restarts on
//! `BigInt` if any intermediate value overflows, so the result is exact in
//! both cases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::rational::Rational;
use crate::Error;

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, Error> {
        if rows.checked_mul(cols) != Some(entries.len()) {
            return Err(Error::DimensionMismatch {
                expected: rows.saturating_mul(cols),
                found: entries.len(),
            });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds a matrix with `cols` columns from explicit rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RatMatrix {
            rows: n,
            cols,
            entries,
        })
    }

    /// Convenience constructor for integer matrices, mostly used in tests.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &RatMatrix) -> Result<RatMatrix, Error> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn push_row(&mut self, row: &[Rational]) -> Result<(), Error> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.entries.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Submatrix keeping only the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        rat_rank(self)
    }
}

/// Exact rank of `m` over ℚ.
pub fn rat_rank(m: &RatMatrix) -> usize {
    rank_of_rows(m.row_iter(), m.cols)
}

/// True iff `v` is a ℚ-combination of the rows of `m`.
pub fn in_row_span(v: &[Rational], m: &RatMatrix) -> Result<bool, Error> {
    if v.len() != m.cols {
        return Err(Error::DimensionMismatch {
            expected: m.cols,
            found: v.len(),
        });
    }
    if v.iter().all(Rational::is_zero) {
        return Ok(true);
    }
    let base = rat_rank(m);
    let augmented = rank_of_rows(m.row_iter().chain(std::iter::once(v)), m.cols);
    Ok(augmented == base)
}

/// Projective dimension of the intersection of the row spaces of `m1` and
/// `m2`, via Grassmann's formula. Returns −1 when the intersection is zero.
pub fn span_intersection_dim(m1: &RatMatrix, m2: &RatMatrix) -> Result<isize, Error> {
    if m1.cols != m2.cols {
        return Err(Error::DimensionMismatch {
            expected: m1.cols,
            found: m2.cols,
        });
    }
    let r1 = rat_rank(m1) as isize;
    let r2 = rat_rank(m2) as isize;
    let r12 = rank_of_rows(m1.row_iter().chain(m2.row_iter()), m1.cols) as isize;
    Ok((r1 - 1) + (r2 - 1) - (r12 - 1))
}

/// Coefficients `c` with `Σ cᵢ · row_i(m) = v`, or `None` if `v` is not in
/// the row span. Free variables are set to zero, so the answer is unique
/// when the rows are independent.
pub fn row_combination(v: &[Rational], m: &RatMatrix) -> Result<Option<Vec<Rational>>, Error> {
    if v.len() != m.cols {
        return Err(Error::DimensionMismatch {
            expected: m.cols,
            found: v.len(),
        });
    }
    // Gauss-Jordan on the system mᵀ c = v, one equation per column of m.
    let n = m.rows;
    let mut eqs: Vec<Vec<Rational>> = (0..m.cols)
        .map(|j| {
            let mut eq: Vec<Rational> = (0..n).map(|i| m.get(i, j).clone()).collect();
            eq.push(v[j].clone());
            eq
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..eqs.len()).find(|&i| !eqs[i][col].is_zero()) else {
            continue;
        };
        eqs.swap(row, p);
        let inv = eqs[row][col].recip().expect("pivot is nonzero");
        eqs[row] = eqs[row].iter().map(|x| x * &inv).collect();
        let pivot_row = eqs[row].clone();
        for (i, eq) in eqs.iter_mut().enumerate() {
            if i != row && !eq[col].is_zero() {
                let factor = eq[col].clone();
                for (x, p) in eq[col..=n].iter_mut().zip(&pivot_row[col..=n]) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if eqs[row..].iter().any(|eq| !eq[n].is_zero()) {
        return Ok(None);
    }
    let mut coeffs = vec![Rational::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        coeffs[col] = eqs[i][n].clone();
    }
    Ok(Some(coeffs))
}

/// Rank of the matrix whose rows are the given slices, each of length `cols`.
pub fn rank_of_rows<'a, I>(rows: I, cols: usize) -> usize
where
    I: IntoIterator<Item = &'a [Rational]>,
{
    let int_rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            debug_assert_eq!(row.len(), cols);
            clear_denominators(row)
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    if int_rows.is_empty() {
        return 0;
    }
    let small: Option<Vec<Vec<i128>>> = int_rows
        .iter()
        .map(|row| row.iter().map(ToPrimitive::to_i128).collect())
        .collect();
    if let Some(small) = small {
        if let Some(rank) = echelon_rank(small, cols) {
            return rank;
        }
    }
    echelon_rank(int_rows, cols).expect("big integer elimination cannot overflow")
}

/// Scales a rational row by the lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    reduce_content(&mut out);
    out
}

fn reduce_content<T: Integer + Signed + Clone>(row: &mut [T]) {
    let g = row.iter().fold(T::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
}

/// Integer types usable by the elimination loop.
trait ElimInt: Integer + Signed + Clone + CheckedMul + CheckedSub {
    /// False for values whose negation overflows (gcd negates internally).
    fn in_range(&self) -> bool;
}

impl ElimInt for i128 {
    fn in_range(&self) -> bool {
        *self != i128::MIN
    }
}

impl ElimInt for BigInt {
    fn in_range(&self) -> bool {
        true
    }
}

/// Fraction-free row reduction. `None` signals arithmetic overflow.
fn echelon_rank<T: ElimInt>(mut rows: Vec<Vec<T>>, cols: usize) -> Option<usize> {
    if !rows.iter().flatten().all(ElimInt::in_range) {
        return None;
    }
    let n = rows.len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot.gcd(&row[c]);
            let a = pivot.div_floor(&g);
            let b = row[c].div_floor(&g);
            for j in c..cols {
                let lhs = a.checked_mul(&row[j])?;
                let rhs = b.checked_mul(&pivot_row[j])?;
                let v = lhs.checked_sub(&rhs)?;
                if !v.in_range() {
                    return None;
                }
                row[j] = v;
            }
            reduce_content(&mut row[c..]);
        }
        rank += 1;
    }
    Some(rank)
}
