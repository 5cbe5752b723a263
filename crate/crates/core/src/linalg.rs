//! Dense exact linear algebra over ℚ and prime fields.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact field arithmetic. Implementors are cheap handles; elements are
/// plain values.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of a rational number, `None` if its denominator vanishes.
    fn embed_rational(&self, r: &BigRational) -> Option<Self::Elem>;
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn embed_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
}

/// The prime field `F_p`, for `p` small enough that products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 31)).contains(&p), "prime out of supported range");
        PrimeField { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn embed_rational(&self, r: &BigRational) -> Option<u64> {
        let d = self.reduce(r.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.reduce(r.numer()), &self.inv(&d)))
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<E> = rows.into_iter().flat_map(|row| {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            row
        }).collect();
        Matrix { rows: r, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<E>], fill: E) -> Self {
        let mut m = Matrix::filled(rows, cols.len(), fill);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.cols * idx.len());
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.row(i)[c0..c1]);
        }
        Matrix { rows: r1 - r0, cols: c1 - c0, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&E) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Clone>(&self, f: impl Fn(&E) -> Option<U>) -> Option<Matrix<U>> {
        Some(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Option<_>>()? })
    }
}

/// Operations that need field arithmetic.
pub trait MatrixOps<F: Field> {
    fn zeros(f: &F, rows: usize, cols: usize) -> Self;
    fn identity(f: &F, n: usize) -> Self;
    fn mul(&self, f: &F, other: &Self) -> Self;
    fn add(&self, f: &F, other: &Self) -> Self;
    fn sub(&self, f: &F, other: &Self) -> Self;
    fn scale(&self, f: &F, c: &F::Elem) -> Self;
    fn is_zero(&self, f: &F) -> bool;
    fn rref(&self, f: &F) -> (Self, Vec<usize>)
    where
        Self: Sized;
    fn rank(&self, f: &F) -> usize;
    fn kernel(&self, f: &F) -> Self;
    fn column_space(&self, f: &F) -> Self;
    fn solve(&self, f: &F, rhs: &Self) -> Option<Self>
    where
        Self: Sized;
    fn complement_columns(&self, f: &F, within: &Self) -> Self;
}

impl<F: Field> MatrixOps<F> for Matrix<F::Elem> {
    fn zeros(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    fn identity(f: &F, n: usize) -> Self {
        let mut m = Matrix::filled(n, n, f.zero());
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    fn mul(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::filled(self.rows, other.cols, f.zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(i, j), &f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn add(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    fn sub(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    fn scale(&self, f: &F, c: &F::Elem) -> Self {
        self.map(|a| f.mul(a, c))
    }

    fn is_zero(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_zero(a))
    }

    /// Reduced row-echelon form and pivot columns.
    fn rref(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn rank(&self, f: &F) -> usize {
        MatrixOps::<F>::rref(self, f).1.len()
    }

    /// Columns form a basis of the null space, one per free column of the
    /// RREF.
    fn kernel(&self, f: &F) -> Self {
        let (r, pivots) = MatrixOps::<F>::rref(self, f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::filled(self.cols, free.len(), f.zero());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// Pivot columns of `self`, a basis of the column space.
    fn column_space(&self, f: &F) -> Self {
        let (_, pivots) = MatrixOps::<F>::rref(self, f);
        self.select_columns(&pivots)
    }

    /// Some `X` with `self · X = rhs`, if one exists.
    fn solve(&self, f: &F, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = MatrixOps::<F>::rref(&aug, f);
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::filled(self.cols, rhs.cols, f.zero());
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Columns of `within` that extend the column space of `self` to the
    /// column space of `self | within`, chosen greedily left to right.
    fn complement_columns(&self, f: &F, within: &Self) -> Self {
        let aug = self.hstack(within);
        let (_, pivots) = MatrixOps::<F>::rref(&aug, f);
        let picked: Vec<usize> = pivots.into_iter().filter(|&p| p >= self.cols).map(|p| p - self.cols).collect();
        within.select_columns(&picked)
    }
}

/// Rational matrix with integer entries.
pub fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix<BigRational> {
    Matrix::from_vec(rows, cols, entries.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
}

/// Least common multiple of the denominators of a rational matrix.
pub fn denominator_lcm(m: &Matrix<BigRational>) -> BigInt {
    m.data().iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Whether every entry is an integer in `{-1, 0, 1}`.
pub fn is_unimodular_entries(m: &Matrix<BigRational>) -> bool {
    m.data().iter().all(|r| r.is_integer() && r.numer().abs() <= BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: usize, cols: usize, v: &[i64]) -> Matrix<BigRational> {
        int_matrix(rows, cols, v)
    }

    #[test]
    fn rank_and_kernel_over_q() {
        let f = Rationals;
        let m = q(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(&f), 1);
        let k = MatrixOps::<Rationals>::kernel(&m, &f);
        assert_eq!(k.cols(), 2);
        assert!(MatrixOps::<Rationals>::mul(&m, &f, &k).is_zero(&f));
    }

    #[test]
    fn rank_depends_on_the_field() {
        let m = q(2, 2, &[1, 1, 1, 3]);
        assert_eq!(m.rank(&Rationals), 2);
        let f2 = PrimeField::new(2);
        let m2 = m.try_map(|r| f2.embed_rational(r)).unwrap();
        assert_eq!(m2.rank(&f2), 1);
    }

    #[test]
    fn solve_and_complement() {
        let f = Rationals;
        let a = q(3, 2, &[1, 0, 0, 1, 1, 1]);
        let b = q(3, 1, &[2, 3, 5]);
        let x = a.solve(&f, &b).unwrap();
        assert_eq!(MatrixOps::<Rationals>::mul(&a, &f, &x), b);
        assert!(a.solve(&f, &q(3, 1, &[1, 1, 1])).is_none());
        let id = MatrixOps::<Rationals>::identity(&f, 3);
        let c = a.complement_columns(&f, &id);
        assert_eq!(c.cols(), 1);
        assert_eq!(a.hstack(&c).rank(&f), 3);
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.embed_rational(&half), Some(4));
        assert_eq!(PrimeField::new(2).embed_rational(&half), None);
    }
}
