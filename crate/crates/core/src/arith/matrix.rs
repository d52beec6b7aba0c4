//! Dense matrices over the exact rings of this crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::hlaurent::HLaurent;
use super::qpoly::QPoly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// The commutative rings matrices are built over.
pub trait Ring: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse when `self` is a unit of the ring.
    fn try_inv(&self) -> Result<Self>;
}

macro_rules! impl_ring {
    ($t:ty, $inv:expr) => {
        impl Ring for $t {
            fn zero() -> Self {
                <$t>::zero()
            }
            fn one() -> Self {
                <$t>::one()
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn add(&self, other: &Self) -> Self {
                self + other
            }
            fn sub(&self, other: &Self) -> Self {
                self - other
            }
            fn mul(&self, other: &Self) -> Self {
                self * other
            }
            fn neg(&self) -> Self {
                -self
            }
            fn try_inv(&self) -> Result<Self> {
                $inv(self)
            }
        }
    };
}

impl_ring!(Rat, Rat::recip);
impl_ring!(QPoly, QPoly::inv);
impl_ring!(HLaurent, HLaurent::inv);

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Mat<T> {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat<T> {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(entries: Vec<T>) -> Mat<T> {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Mat<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Mat<T>> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, v)| (k / c, k % c, v))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Mat<U>> {
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.rows)
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        self.map(|x| x.mul(c))
    }

    fn check_same(&self, other: &Mat<T>) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "matrix shapes differ: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    let slot: &mut T = &mut out.data[i * other.cols + j];
                    *slot = slot.add(&prod);
                }
            }
        }
        out
    }

    /// `M · v` for a column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// `v · M` for a row vector.
    pub fn apply_left(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector length mismatch");
        (0..self.cols)
            .map(|j| {
                let mut acc = T::zero();
                for (i, b) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&b.mul(a));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, n: u32) -> Mat<T> {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// Row vector `x` with `x · self = b` by forward substitution, when `self`
    /// is upper triangular. `None` when it is not.
    pub fn solve_left_upper(&self, b: &[T]) -> Option<Result<Vec<T>>> {
        let n = self.rows;
        if !self.is_square() || b.len() != n {
            return None;
        }
        if (0..n).any(|i| (0..i).any(|j| !self[(i, j)].is_zero())) {
            return None;
        }
        let mut x: Vec<T> = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = b[j].clone();
            for (k, xk) in x.iter().enumerate() {
                let m = &self[(k, j)];
                if !m.is_zero() && !xk.is_zero() {
                    acc = acc.sub(&xk.mul(m));
                }
            }
            match self[(j, j)].try_inv() {
                Ok(inv) => x.push(acc.mul(&inv)),
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(x))
    }

    /// Exact inverse. Gauss-Jordan with unit pivots, falling back to the
    /// finite Neumann series when `self - I` is nilpotent.
    pub fn inverse(&self) -> Result<Mat<T>> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        match self.inverse_gauss_jordan() {
            Ok(inv) => Ok(inv),
            Err(e @ Error::Singular { .. }) => self.inverse_unipotent().map_err(|_| e),
            Err(e) => Err(e),
        }
    }

    fn inverse_gauss_jordan(&self) -> Result<Mat<T>> {
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let (pivot_row, pivot_inv) = (col..n)
                .find_map(|r| {
                    let x = &a[(r, col)];
                    if x.is_zero() {
                        None
                    } else {
                        x.try_inv().ok().map(|i| (r, i))
                    }
                })
                .ok_or(Error::Singular { column: col })?;
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            a.scale_row(col, &pivot_inv);
            inv.scale_row(col, &pivot_inv);
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                a.sub_row_multiple(r, col, &factor);
                inv.sub_row_multiple(r, col, &factor);
            }
        }
        Ok(inv)
    }

    fn inverse_unipotent(&self) -> Result<Mat<T>> {
        let n = self.rows;
        let nil = self - &Mat::identity(n);
        if !nil.pow(n as u32).is_zero() {
            return Err(Error::Singular { column: 0 });
        }
        let neg = -&nil;
        let mut acc = Mat::identity(n);
        let mut term = Mat::identity(n);
        for _ in 1..n {
            term = term.matmul(&neg);
            acc = &acc + &term;
        }
        Ok(acc)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &T) {
        for j in 0..self.cols {
            let k = r * self.cols + j;
            self.data[k] = self.data[k].mul(c);
        }
    }

    /// row `target` -= factor · row `src`
    fn sub_row_multiple(&mut self, target: usize, src: usize, factor: &T) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let d = s.mul(factor);
            let k = target * self.cols + j;
            self.data[k] = self.data[k].sub(&d);
        }
    }
}

impl Mat<Rat> {
    /// Determinant by Gaussian elimination over ℚ.
    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let piv = a[(col, col)].clone();
            det *= &piv;
            let pinv = piv.recip().expect("nonzero pivot");
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] * &pinv;
                a.sub_row_multiple(r, col, &f);
            }
        }
        det
    }
}

impl Mat<HLaurent> {
    pub fn negate_hbar(&self) -> Mat<HLaurent> {
        self.map(HLaurent::negate_hbar)
    }

    pub fn theta(&self) -> Mat<HLaurent> {
        self.map(HLaurent::theta)
    }

    pub fn at_q_zero(&self) -> Mat<HLaurent> {
        self.map(HLaurent::at_q_zero)
    }

    /// `X̄ᵀ`, the ħ-reversed transpose.
    pub fn adjoint(&self) -> Mat<HLaurent> {
        self.transpose().negate_hbar()
    }

    pub fn is_hbar_free(&self) -> bool {
        self.data.iter().all(HLaurent::is_hbar_free)
    }

    pub fn to_qpoly(&self) -> Option<Mat<QPoly>> {
        self.try_map(|x| x.as_qpoly().ok_or(Error::Internal(String::new())))
            .ok()
    }

    pub fn to_rat(&self) -> Option<Mat<Rat>> {
        self.try_map(|x| x.as_rat().ok_or(Error::Internal(String::new())))
            .ok()
    }

    pub fn check_window(&self, window: i32) -> Result<()> {
        self.data.iter().try_for_each(|x| x.check_window(window))
    }
}

impl Mat<QPoly> {
    pub fn to_hlaurent(&self) -> Mat<HLaurent> {
        self.map(|x| HLaurent::from(x.clone()))
    }

    pub fn theta(&self) -> Mat<QPoly> {
        self.map(QPoly::theta)
    }

    pub fn constant_terms(&self) -> Mat<Rat> {
        self.map(QPoly::constant_term)
    }
}

impl Mat<Rat> {
    pub fn to_hlaurent(&self) -> Mat<HLaurent> {
        self.map(|x| HLaurent::constant(x.clone()))
    }

    pub fn to_qpoly(&self) -> Mat<QPoly> {
        self.map(|x| QPoly::constant(x.clone()))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Add<&Mat<T>> for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        self.check_same(rhs);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }
}

impl<T: Ring> Sub<&Mat<T>> for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        self.check_same(rhs);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }
}

impl<T: Ring> Mul<&Mat<T>> for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}

impl<T: Ring> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(T::neg)
    }
}

impl<T: Ring> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Ring> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}\n{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: i64) -> QPoly {
        QPoly::q().scale(&Rat::integer(c))
    }

    #[test]
    fn unitriangular_inverse() {
        // Q0 for the cubic threefold: 6q and 21q above the diagonal.
        let mut q0: Mat<QPoly> = Mat::identity(4);
        q0[(0, 2)] = q(6);
        q0[(1, 3)] = q(21);
        let inv = q0.inverse().unwrap();
        let mut expected: Mat<QPoly> = Mat::identity(4);
        expected[(0, 2)] = q(-6);
        expected[(1, 3)] = q(-21);
        assert_eq!(inv, expected);
        assert!(q0.matmul(&inv).is_identity());
    }

    #[test]
    fn non_unit_diagonal() {
        // I + N with N = [[q, q], [-q, -q]] nilpotent; 1 + q is not a unit.
        let m: Mat<QPoly> = Mat::from_rows(vec![
            vec![&QPoly::one() + &q(1), q(1)],
            vec![q(-1), &QPoly::one() - &q(1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        assert!(inv.entries().all(|(_, _, x)| !x.has_negative_exponent()));
        assert!(m.inverse_unipotent().unwrap() == inv);
    }

    #[test]
    fn singular_reports_column() {
        let m: Mat<Rat> = Mat::from_rows(vec![
            vec![Rat::one(), Rat::integer(2)],
            vec![Rat::integer(2), Rat::integer(4)],
        ])
        .unwrap();
        assert!(matches!(m.inverse(), Err(Error::Singular { column: 1 })));
        assert!(m.det().is_zero());
    }

    #[test]
    fn row_and_column_application() {
        let m: Mat<Rat> = Mat::from_fn(2, 2, |i, j| Rat::integer((2 * i + j) as i64));
        let v = vec![Rat::one(), Rat::integer(2)];
        assert_eq!(m.apply(&v), vec![Rat::integer(2), Rat::integer(8)]);
        assert_eq!(m.apply_left(&v), vec![Rat::integer(4), Rat::integer(7)]);
    }
}
