//! Exact dense linear algebra over fields.

use std::fmt;

use num_traits::{One, Zero};

use super::field::FieldElement;
use super::qpoly::Q;
use super::ratfunc::RatFunc;

/// Minimal exact-scalar interface. Zero and one are produced from an
/// existing value because field elements carry their field.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for non-units.
    fn try_inv(&self) -> Option<Self>;
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl Scalar for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let zero = entries[0].zero_like();
        Self::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Scalar, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let zero = self.data.first().or(other.data.first()).map(|x| x.zero_like());
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone().unwrap();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(other.get(k, j)));
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (k, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, k).mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols).mul(other.get(i % other.rows, j % other.cols))
        })
    }

    pub fn block_diagonal(&self, other: &Self) -> Self {
        let zero = self.data[0].zero_like();
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                zero.clone()
            }
        })
    }

    /// Reduced row echelon form (field entries). Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).try_inv().expect("nonzero pivot must be invertible");
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn nullspace(&self, zero: &T) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let one = zero.one_like();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = one.clone();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// Inverse by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let one = self.data[0].one_like();
        let zero = one.zero_like();
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                one.clone()
            } else {
                zero.clone()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.data[0].one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return det.zero_like();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.try_inv().expect("nonzero pivot must be invertible");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Solutions of `M u = rhs`: a particular solution (free variables set to
/// zero) and a basis of the homogeneous solutions, or `None` if the system
/// is inconsistent.
pub fn solve_affine<T: Scalar>(m: &Matrix<T>, rhs: &[T], zero: &T) -> Option<(Vec<T>, Vec<Vec<T>>)> {
    assert_eq!(m.rows(), rhs.len(), "dimension mismatch");
    let n = m.cols();
    let mut aug = Matrix::from_fn(m.rows(), n + 1, |i, j| if j < n { m.get(i, j).clone() } else { rhs[i].clone() });
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut part = vec![zero.clone(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        part[pc] = aug.get(r, n).clone();
    }
    Some((part, m.nullspace(zero)))
}

pub fn det_rational(rows: Vec<Vec<Q>>) -> Q {
    if rows.is_empty() {
        return Q::one();
    }
    Matrix::from_rows(rows).det()
}
