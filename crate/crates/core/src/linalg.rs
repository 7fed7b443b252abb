//! Dense exact linear algebra over the rationals.
//!
//! The elimination core is fraction-free (Bareiss): rows are scaled to
//! integer vectors and pivoting uses the two-step determinant identity, so
//! intermediate entries are minors of the scaled matrix rather than
//! arbitrarily deep fractions. Reduced echelon data is recovered rationally
//! from the integer echelon form at the end.

use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>, // row-major
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut m = RatMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).clone() + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j).clone())
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self.at(i, j).is_zero() {
                        acc += self.at(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Reduced row echelon data with respect to an explicit column order.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Fully reduced rows: for each pivot, the row rescaled so the pivot
    /// entry is 1 and all other pivot columns are eliminated.
    pub rref: RatMatrix,
    /// Pivot positions `(row, col)` in elimination order.
    pub pivots: Vec<(usize, usize)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(_, c)| c).collect()
    }
}

fn row_to_int(row: &[Rat]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for v in row {
        l = l.lcm(v.denom());
    }
    row.iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect()
}

/// Fraction-free reduced elimination. Columns are considered in `col_order`
/// (a permutation of a subset of the columns is allowed: remaining columns
/// never carry pivots). Row scaling does not change the row space, so the
/// result is the RREF of the original matrix up to the column order.
///
/// The forward sweep is Bareiss elimination on integer rows: the update
/// `(pivot*a[r][j] - a[r][col]*a[p][j]) / prev_pivot` is an exact integer
/// division because the entries stay minors of the scaled input. Reduction
/// above the pivots is done rationally afterwards.
pub fn rref_in_order(m: &RatMatrix, col_order: &[usize]) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| row_to_int(&(0..m.cols).map(|j| m.at(i, j).clone()).collect::<Vec<_>>()))
        .collect();
    let nrows = m.rows;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut next_row = 0usize;
    for &col in col_order {
        if next_row >= nrows {
            break;
        }
        let Some(pr) = (next_row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(next_row, pr);
        let pivot = a[next_row][col].clone();
        for r in (next_row + 1)..nrows {
            let factor = a[r][col].clone();
            for j in 0..m.cols {
                let v = &pivot * &a[r][j] - &factor * &a[next_row][j];
                a[r][j] = &v / &prev;
            }
        }
        prev = pivot;
        pivots.push((next_row, col));
        next_row += 1;
    }
    // rational back-substitution to reach reduced form
    let mut rows: Vec<Vec<Rat>> = a
        .iter()
        .map(|row| row.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    for idx in (0..pivots.len()).rev() {
        let (r, c) = pivots[idx];
        let p = rows[r][c].clone();
        for j in 0..m.cols {
            rows[r][j] = rows[r][j].clone() / p.clone();
        }
        for &(r2, _) in &pivots[..idx] {
            let f = rows[r2][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..m.cols {
                let v = rows[r2][j].clone() - &f * &rows[r][j];
                rows[r2][j] = v;
            }
        }
    }
    let pivot_rows: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
    let mut rref = RatMatrix::zero(nrows, m.cols);
    for (r, row) in rows.into_iter().enumerate() {
        if pivot_rows.contains(&r) {
            for (j, v) in row.into_iter().enumerate() {
                rref.set(r, j, v);
            }
        }
    }
    Echelon { rref, pivots }
}

pub fn rref(m: &RatMatrix) -> Echelon {
    let order: Vec<usize> = (0..m.cols).collect();
    rref_in_order(m, &order)
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).rank()
}

/// Basis of the null space of `m` (solutions of `m x = 0`), one vector per
/// non-pivot column, in column order.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let ech = rref(m);
    let pivot_cols = ech.pivot_cols();
    let mut basis = Vec::new();
    for j in 0..m.cols {
        if pivot_cols.contains(&j) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols];
        v[j] = Rat::one();
        for &(r, pc) in &ech.pivots {
            v[pc] = -ech.rref.at(r, j).clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of `m x = b`, if any.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.rows);
    let aug = RatMatrix::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m.at(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    // the b-column never carries a pivot, so setting free variables to zero
    // gives a particular solution whenever the system is consistent; the
    // final residual check rejects inconsistent systems
    let order: Vec<usize> = (0..m.cols).collect();
    let ech = rref_in_order(&aug, &order);
    let mut x = vec![Rat::zero(); m.cols];
    for &(r, c) in &ech.pivots {
        x[c] = ech.rref.at(r, m.cols).clone();
    }
    if m.apply(&x) == b.to_vec() {
        Some(x)
    } else {
        None
    }
}

/// Solves `m X = B` column-wise. All columns must be solvable.
pub fn solve_matrix(m: &RatMatrix, b: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(m.rows, b.rows);
    let mut out = RatMatrix::zero(m.cols, b.cols);
    for j in 0..b.cols {
        let x = solve(m, &b.col(j))?;
        for (i, v) in x.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Some(out)
}

/// Flat variable indexing for unknown degreewise matrices: one block per
/// degree, of shape `rows x cols`.
#[derive(Debug, Clone, Default)]
pub struct VarTable {
    blocks: std::collections::BTreeMap<i64, (usize, usize, usize)>, // deg -> (offset, rows, cols)
    next: usize,
}

impl VarTable {
    pub fn new() -> Self {
        VarTable::default()
    }

    pub fn add_block(&mut self, deg: i64, rows: usize, cols: usize) {
        self.blocks.insert(deg, (self.next, rows, cols));
        self.next += rows * cols;
    }

    pub fn var(&self, deg: i64, r: usize, c: usize) -> usize {
        let &(off, rows, cols) = self.blocks.get(&deg).expect("variable block");
        assert!(r < rows && c < cols, "variable index out of block");
        off + r * cols + c
    }

    pub fn has_block(&self, deg: i64) -> bool {
        self.blocks.contains_key(&deg)
    }

    pub fn len(&self) -> usize {
        self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }
}

/// Sparse linear system `A x = b`, solved by one dense elimination.
#[derive(Debug, Clone)]
pub struct LinSys {
    n_vars: usize,
    rows: Vec<(Vec<(usize, Rat)>, Rat)>,
}

impl LinSys {
    pub fn new(n_vars: usize) -> Self {
        LinSys { n_vars, rows: Vec::new() }
    }

    pub fn eq(&mut self, coeffs: Vec<(usize, Rat)>, rhs: Rat) {
        if coeffs.is_empty() && rhs.is_zero() {
            return;
        }
        self.rows.push((coeffs, rhs));
    }

    pub fn solve(&self) -> Option<Vec<Rat>> {
        if self.rows.is_empty() {
            return Some(vec![Rat::zero(); self.n_vars]);
        }
        let (m, b) = self.to_dense();
        solve(&m, &b)
    }

    fn to_dense(&self) -> (RatMatrix, Vec<Rat>) {
        let mut m = RatMatrix::zero(self.rows.len(), self.n_vars);
        let mut b = vec![Rat::zero(); self.rows.len()];
        for (i, (coeffs, rhs)) in self.rows.iter().enumerate() {
            for (j, c) in coeffs {
                let v = m.at(i, *j).clone() + c;
                m.set(i, *j, v);
            }
            b[i] = rhs.clone();
        }
        (m, b)
    }

    /// Dimension of the solution space of the homogeneous part.
    pub fn solution_space_dim(&self) -> usize {
        if self.rows.is_empty() {
            return self.n_vars;
        }
        let (m, _) = self.to_dense();
        self.n_vars - rank(&m)
    }

    /// Kernel basis of the homogeneous part (right-hand sides ignored).
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        if self.rows.is_empty() {
            return (0..self.n_vars)
                .map(|i| {
                    let mut v = vec![Rat::zero(); self.n_vars];
                    v[i] = Rat::one();
                    v
                })
                .collect();
        }
        let (m, _) = self.to_dense();
        kernel_basis(&m)
    }
}

pub fn is_injective(m: &RatMatrix) -> bool {
    rank(m) == m.cols
}

pub fn is_surjective(m: &RatMatrix) -> bool {
    rank(m) == m.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = solve(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&b, &[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn rational_entries() {
        let a = RatMatrix::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), ratio(1, 6)]]);
        assert_eq!(rank(&a), 1);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn rref_respects_column_order() {
        let a = m(&[&[1, 1]]);
        let e1 = rref_in_order(&a, &[0, 1]);
        assert_eq!(e1.pivot_cols(), vec![0]);
        let e2 = rref_in_order(&a, &[1, 0]);
        assert_eq!(e2.pivot_cols(), vec![1]);
    }
}
