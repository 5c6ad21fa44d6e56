//! Exact rational linear algebra.
//!
//! Elimination runs fraction-free (Bareiss) over integers after clearing the
//! denominators of each row, so no intermediate value is ever rounded. The
//! pivot in each column is the entry of largest absolute value at or below
//! the current row, the first such row winning ties.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exprcore::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has length {len}, expected {cols}")]
    Ragged { row: usize, len: usize, cols: usize },
    #[error("vectors of different ambient dimension ({0} vs {1})")]
    DimensionMismatch(usize, usize),
}

/// Dense rectangular matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix with `cols` columns from row vectors.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    row,
                    len: r.len(),
                    cols,
                });
            }
            data.extend(r);
        }
        Ok(RatMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect())
            .collect();
        RatMatrix::from_rows(cols, rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect()
    }
}

/// Row echelon form produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn bareiss(m: &RatMatrix) -> Echelon {
    let mut a = m.integer_rows();
    let (nr, nc) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).filter(|&i| !a[i][c].is_zero()).fold(
            None,
            |best: Option<usize>, i| match best {
                Some(b) if a[b][c].abs() >= a[i][c].abs() => Some(b),
                _ => Some(i),
            },
        ) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..nc {
                let num = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

/// Reduced row echelon form: the nonzero rows and their pivot columns.
pub fn rref(m: &RatMatrix) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let ech = bareiss(m);
    let mut rows: Vec<Vec<Rat>> = ech
        .rows
        .into_iter()
        .zip(&ech.pivots)
        .map(|(row, &pc)| {
            let p = Rat::from_integer(row[pc].clone());
            row.into_iter().map(|v| Rat::from_integer(v) / &p).collect()
        })
        .collect();
    for (i, &pc) in ech.pivots.iter().enumerate().rev() {
        let (above, from) = rows.split_at_mut(i);
        let pivot_row = &from[0];
        for row in above.iter_mut() {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(pivot_row).skip(pc) {
                *v -= &factor * p;
            }
        }
    }
    (rows, ech.pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    bareiss(m).pivots.len()
}

/// Nullspace basis read off the reduced echelon form: one vector per free
/// column, carrying a 1 there and 0 at every other free column.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let (rows, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rat::zero(); m.cols];
            v[free] = Rat::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Reduced echelon basis of the span of `vectors` (a canonical form of the
/// subspace for a fixed coordinate order).
pub fn canonical_basis(dim: usize, vectors: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>, LinalgError> {
    let m = RatMatrix::from_rows(dim, vectors.to_vec())?;
    Ok(rref(&m).0)
}

fn common_dim(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Result<usize, LinalgError> {
    let mut dims = a.iter().chain(b).map(Vec::len);
    let Some(first) = dims.next() else {
        return Ok(0);
    };
    match dims.find(|&d| d != first) {
        Some(d) => Err(LinalgError::DimensionMismatch(first, d)),
        None => Ok(first),
    }
}

/// Whether two families of vectors span the same subspace.
pub fn span_equal(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Result<bool, LinalgError> {
    let dim = common_dim(a, b)?;
    let rk = |vs: Vec<Vec<Rat>>| RatMatrix::from_rows(dim, vs).map(|m| rank(&m));
    let ra = rk(a.to_vec())?;
    let rb = rk(b.to_vec())?;
    let rab = rk(a.iter().chain(b).cloned().collect())?;
    Ok(ra == rb && rb == rab)
}

/// One solution of `m x = b` (free variables set to zero), if consistent.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.rows);
    let aug: Vec<Vec<Rat>> = (0..m.rows)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let aug = RatMatrix::from_rows(m.cols + 1, aug).expect("augmented rows are rectangular");
    let (rows, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[m.cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprcore::int;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RatMatrix::identity(3)), 3);
        assert_eq!(rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&RatMatrix::identity(4)).is_empty());
        assert_eq!(
            nullspace(&RatMatrix::from_i64(&[&[1, -1]])),
            vec![v(&[1, 1])]
        );
        assert_eq!(
            nullspace(&RatMatrix::zeros(2, 3)),
            vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]
        );
        assert_eq!(nullspace(&RatMatrix::zeros(0, 2)).len(), 2);
    }

    #[test]
    fn rational_entries() {
        let half = Rat::new(1.into(), 2.into());
        let m = RatMatrix::from_rows(2, vec![vec![half.clone(), int(1)], vec![int(1), int(2)]])
            .unwrap();
        assert_eq!(rank(&m), 1);
        assert_eq!(nullspace(&m), vec![v(&[-2, 1])]);
    }

    #[test]
    fn span_examples() {
        assert!(span_equal(&[v(&[1, 0]), v(&[0, 1])], &[v(&[1, 1]), v(&[1, -1])]).unwrap());
        assert!(!span_equal(&[v(&[1, 0])], &[v(&[0, 1])]).unwrap());
        assert!(span_equal(&[], &[]).unwrap());
        assert_eq!(
            span_equal(&[v(&[1, 0])], &[v(&[0, 1, 0])]),
            Err(LinalgError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            RatMatrix::from_rows(2, vec![v(&[1, 2]), v(&[1])]),
            Err(LinalgError::Ragged { row: 1, .. })
        ));
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&m, &v(&[3, 1])), Some(v(&[2, 1])));
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&m, &v(&[1, 3])), None);
    }

    #[test]
    fn column_skip_keeps_division_exact() {
        let m = RatMatrix::from_i64(&[&[0, 2, 3, 5], &[0, 4, 6, 1], &[0, 6, 9, 7], &[3, 1, 1, 1]]);
        assert_eq!(rank(&m), 3);
        for n in nullspace(&m) {
            assert!(m.mul_vec(&n).iter().all(Zero::is_zero));
        }
    }
}
