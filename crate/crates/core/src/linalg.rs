//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::Rational;

pub type Vector = Vec<Rational>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Rows in reduced row-echelon form: every pivot is 1, pivot columns are
/// strictly increasing and zero in every other row. Zero rows are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtracts the row combination that zeroes `v` on every pivot column.
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let factor = out[p].clone();
                for (o, r) in out.iter_mut().zip(row) {
                    *o -= &factor * r;
                }
            }
        }
        out
    }

    pub fn spans(&self, v: &[Rational]) -> bool {
        is_zero(&self.reduce(v))
    }
}

/// Reduced row-echelon form of `rows`, each of length `ncols`.
pub fn rref(mut rows: Vec<Vector>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

/// A basis of `{x | row · x = 0 for every row}` in `ncols` dimensions.
pub fn null_space(rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    let e = rref(rows, ncols);
    (0..ncols)
        .filter(|c| !e.pivots.contains(c))
        .map(|free| {
            let mut v = zeros(ncols);
            v[free] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b`, returning a particular solution (free variables zero)
/// and a basis of the kernel, or `None` when inconsistent.
pub fn solve(a: &[Vector], b: &[Rational], ncols: usize) -> Option<(Vector, Vec<Vector>)> {
    let augmented: Vec<Vector> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = rref(augmented, ncols + 1);
    if e.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[ncols].clone();
    }
    Some((x, null_space(a.to_vec(), ncols)))
}
