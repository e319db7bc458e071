//! Dense matrices over a finite field and the exact linear algebra on them.
//!
//! Matrices act on column vectors: `Im(A)` is the column space and
//! `ker(A) = { v : Av = 0 }`. Both come back as canonical [`Subspace`]s.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::subspace::Subspace;

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && self.field == other.field
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

/// Shape first, then entries in row-major lexicographic code order.
impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// `rows joined by ';', entries by ','`.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn first_nonzero(v: &[Scalar]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Reduce `rows` (each of equal length) in place to reduced row echelon form,
/// dropping zero rows. Returns the pivot columns.
pub(crate) fn rref_rows(field: &Field, rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimMismatch("matrices need positive dimensions".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.code() >= field.q()) {
            return Err(Error::Parse(format!("scalar {bad} out of range for F_{field}")));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Build from rows of codes; panics on ragged input or out-of-range codes.
    pub fn from_rows(field: &Field, rows: &[&[u8]]) -> Matrix {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| Scalar(x))).collect();
        Matrix::new(field, r, c, data).expect("valid matrix")
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::ONE;
        }
        m
    }

    /// The matrix unit with a single 1 at (i, j), zero-based.
    pub fn unit(field: &Field, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        m.data[i * n + j] = Scalar::ONE;
        m
    }

    /// Square matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, cols: &[Vec<Scalar>]) -> Matrix {
        let n = cols[0].len();
        let mut m = Matrix::zero(field, n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = x;
            }
        }
        m
    }

    pub fn diag(field: &Field, entries: &[u8]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zero(field, n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * n + i] = Scalar(x);
        }
        m
    }

    pub fn parse(field: &Field, s: &str) -> Result<Matrix> {
        let rows: Vec<Vec<Scalar>> = s
            .trim()
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        let code: u64 = x
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad scalar `{x}` in `{s}`")))?;
                        field.scalar(code)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix `{s}`")));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Position of this square matrix in the lexicographic enumeration of
    /// all matrices of its shape (first entry most significant).
    pub fn index(&self) -> u64 {
        let q = self.field.q() as u64;
        self.data.iter().fold(0, |acc, x| acc * q + x.code() as u64)
    }

    pub fn from_index(field: &Field, rows: usize, cols: usize, mut index: u64) -> Matrix {
        let q = field.q() as u64;
        let mut data = vec![Scalar::ZERO; rows * cols];
        for slot in data.iter_mut().rev() {
            *slot = Scalar((index % q) as u8);
            index /= q;
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut data = vec![Scalar::ZERO; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out = &mut data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimMismatch("addition of differently shaped matrices".into()));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, lambda: Scalar) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(lambda, a)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.checked_add(&rhs.neg())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn pow(&self, e: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// `A v` for a column vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Scalar::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.row_vecs();
        let pivots = rref_rows(&self.field, &mut rows);
        let mut data: Vec<Scalar> = rows.concat();
        data.resize(self.rows * self.cols, Scalar::ZERO);
        (
            Matrix {
                field: self.field.clone(),
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref_rows(&self.field, &mut rows).len()
    }

    pub fn kernel(&self) -> Subspace {
        let mut rows = self.row_vecs();
        let pivots = rref_rows(&self.field, &mut rows);
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Scalar::ZERO; self.cols];
                v[fc] = Scalar::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(rows[r][fc]);
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span(f, self.cols, &basis)
    }

    pub fn image(&self) -> Subspace {
        let cols: Vec<Vec<Scalar>> = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::span(&self.field, self.rows, &cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend((0..n).map(|j| if i == j { Scalar::ONE } else { Scalar::ZERO }));
                r
            })
            .collect();
        let pivots = rref_rows(&self.field, &mut rows);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let data = rows.iter().flat_map(|r| r[n..].iter().copied()).collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: n,
            cols: n,
            data,
        })
    }

    /// `g⁻¹ A g`.
    pub fn conjugate_by(&self, g: &Matrix) -> Result<Matrix> {
        let gi = g.inverse()?;
        gi.checked_mul(self)?.checked_mul(g)
    }

    /// Unique `M = λ v wᵗ` with `v`, `w` hat-normalized (first nonzero coordinate 1).
    pub fn rank1_factor(&self) -> Result<Rank1Factorization> {
        let rank = self.rank();
        if rank != 1 {
            return Err(Error::RankNotOne(rank));
        }
        let f = &self.field;
        let j0 = (0..self.cols)
            .find(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero()))
            .expect("rank 1");
        let i0 = (0..self.rows).find(|&i| !self.get(i, j0).is_zero()).unwrap();
        let v = hat_normalize(f, &self.column(j0));
        let w = hat_normalize(f, &self.row(i0));
        let iv = first_nonzero(&v).unwrap();
        let jw = first_nonzero(&w).unwrap();
        Ok(Rank1Factorization {
            lambda: self.get(iv, jw),
            v,
            w,
        })
    }
}

/// Scale a nonzero vector so its first nonzero coordinate is 1.
pub fn hat_normalize(field: &Field, v: &[Scalar]) -> Vec<Scalar> {
    match first_nonzero(v) {
        None => v.to_vec(),
        Some(i) => {
            let inv = field.inv(v[i]).unwrap();
            v.iter().map(|&x| field.mul(inv, x)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rank1Factorization {
    pub lambda: Scalar,
    pub v: Vec<Scalar>,
    pub w: Vec<Scalar>,
}

impl Rank1Factorization {
    pub fn reassemble(&self, field: &Field) -> Matrix {
        let data = self
            .v
            .iter()
            .flat_map(|&a| {
                self.w
                    .iter()
                    .map(move |&b| field.mul(self.lambda, field.mul(a, b)))
            })
            .collect();
        Matrix::new(field, self.v.len(), self.w.len(), data).unwrap()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on shape or field mismatch; use [`Matrix::checked_mul`] otherwise.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product")
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix sum")
    }
}
