//! Exact integer matrices for the change to difference coordinates.
//!
//! `M = (e : -I)` maps phases `x` to differences `d_k = x_1 - x_{k+1}`. The
//! cyclic relabelling `P*(x_1, ..., x_N) = (x_2, ..., x_N, x_1)` induces a
//! transform `T*` on differences with `T* M = M P*`; writing `M P* = (v : M')`
//! gives `T* = -M'`.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        (0..k).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// `self * v` for a real vector.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a as f64 * x)
                    .sum()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 oscillators, got {n}")));
    }
    Ok(())
}

/// `M = (e : -I_{N-1})`, the `(N-1) x N` map from phases to differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMatrix {
    n: usize,
    matrix: IntMatrix,
}

impl DifferenceMatrix {
    pub fn oscillators(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }
}

pub fn build_difference_matrix(n: usize) -> Result<DifferenceMatrix> {
    check_n(n)?;
    let mut m = IntMatrix::zeros(n - 1, n);
    for k in 0..n - 1 {
        m[(k, 0)] = 1;
        m[(k, k + 1)] = -1;
    }
    Ok(DifferenceMatrix { n, matrix: m })
}

/// Permutation matrix with `(P* x)_i = x_{i+1 mod N}`.
pub fn cyclic_permutation(n: usize) -> Result<IntMatrix> {
    check_n(n)?;
    let mut p = IntMatrix::zeros(n, n);
    for i in 0..n {
        p[(i, (i + 1) % n)] = 1;
    }
    Ok(p)
}

/// `T*`, the action of the cyclic relabelling on difference coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicTransform {
    n: usize,
    matrix: IntMatrix,
}

impl CyclicTransform {
    pub fn oscillators(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, d: &[f64]) -> Vec<f64> {
        self.matrix.apply(d)
    }
}

/// Builds `T* = -M'` from the column split `M P* = (v : M')` and checks
/// `T* M = M P*` and `v = -M' e` exactly before returning.
pub fn build_cyclic_transform(n: usize) -> Result<CyclicTransform> {
    let m = build_difference_matrix(n)?.matrix;
    let p = cyclic_permutation(n)?;
    let mp = &m * &p;

    let v = mp.column(0);
    let mut m_rest = IntMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            m_rest[(i, j)] = mp[(i, j + 1)];
        }
    }
    let t = m_rest.neg();

    let e = vec![1i64; n - 1];
    let minus_m_rest_e: Vec<i64> = (0..n - 1)
        .map(|i| -m_rest.row(i).iter().zip(&e).map(|(a, b)| a * b).sum::<i64>())
        .collect();
    if v != minus_m_rest_e {
        return Err(Error::Internal(format!(
            "first column of M P* is {v:?}, expected -M'e = {minus_m_rest_e:?}"
        )));
    }
    if &t * &m != mp {
        return Err(Error::Internal(format!("T* M != M P* for n = {n}")));
    }
    Ok(CyclicTransform { n, matrix: t })
}
