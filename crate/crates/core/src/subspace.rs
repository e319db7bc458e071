//! Subspaces of F^n in canonical form.
//!
//! A subspace is stored as the nonzero rows of its reduced row echelon
//! basis, so two equal subspaces have identical representations and `==`
//! is structural. The zero subspace has an empty basis and prints as `-`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{check_cap, Error, Result};
use crate::field::{Field, Scalar};
use crate::limits::Limits;
use crate::matrix::{rref_rows, Matrix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

/// Dimension first, then basis encoding.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient, self.basis.len(), &self.basis).cmp(&(
            other.ambient,
            other.basis.len(),
            &other.basis,
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return f.write_str("-");
        }
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Subspace {
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
        assert!(rows.iter().all(|v| v.len() == ambient), "vector length");
        rref_rows(field, &mut rows);
        Subspace {
            field: field.clone(),
            ambient,
            basis: rows,
        }
    }

    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, &standard_basis(ambient))
    }

    /// Span of the standard basis vectors `e_i` for the given zero-based indices.
    pub fn coordinate(field: &Field, ambient: usize, indices: &[usize]) -> Subspace {
        let std = standard_basis(ambient);
        let vs: Vec<_> = indices.iter().map(|&i| std[i].clone()).collect();
        Subspace::span(field, ambient, &vs)
    }

    /// Parse the subspace text format (`-` or rows in matrix format).
    pub fn parse(field: &Field, ambient: usize, s: &str) -> Result<Subspace> {
        let s = s.trim();
        if s == "-" {
            return Ok(Subspace::zero(field, ambient));
        }
        let m = Matrix::parse(field, s)?;
        if m.cols() != ambient {
            return Err(Error::AmbientMismatch(m.cols(), ambient));
        }
        let rows: Vec<_> = (0..m.rows()).map(|i| m.row(i)).collect();
        Ok(Subspace::span(field, ambient, &rows))
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Re-derive the canonical form. Always returns an equal value.
    pub fn canonicalize(&self) -> Subspace {
        Subspace::span(&self.field, self.ambient, &self.basis)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    /// Residue of `v` after eliminating against the echelon basis.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut v = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).unwrap();
            let c = v[pivot];
            if !c.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(other.basis.iter().all(|v| self.contains_vector(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Subspace::span(&self.field, self.ambient, &vs))
    }

    /// `{ x : x·v = 0 for all v }` under the standard bilinear form.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(&self.field, self.ambient);
        }
        let m = Matrix::new(
            &self.field,
            self.basis.len(),
            self.ambient,
            self.basis.concat(),
        )
        .unwrap();
        m.kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Extend `self` to the whole space with standard basis vectors taken in
    /// increasing index order; returns the complement they span.
    pub fn standard_complement(&self) -> Subspace {
        let mut current = self.clone();
        let mut chosen = Vec::new();
        for e in standard_basis(self.ambient) {
            if current.is_full() {
                break;
            }
            if !current.contains_vector(&e) {
                current = Subspace::span(&self.field, self.ambient, &[current.basis.clone(), vec![e.clone()]].concat());
                chosen.push(e);
            }
        }
        Subspace::span(&self.field, self.ambient, &chosen)
    }

    /// A basis of `self` that starts with the given independent vectors of `self`
    /// and is completed greedily from the canonical basis rows.
    pub fn basis_extending(&self, start: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let mut out: Vec<Vec<Scalar>> = start.to_vec();
        let mut span = Subspace::span(&self.field, self.ambient, &out);
        for v in &self.basis {
            if span.dim() == self.dim() {
                break;
            }
            if !span.contains_vector(v) {
                out.push(v.clone());
                span = Subspace::span(&self.field, self.ambient, &out);
            }
        }
        out
    }

    /// The basis rows as a matrix (`dim × ambient`), `None` for the zero subspace.
    pub fn to_matrix(&self) -> Option<Matrix> {
        if self.basis.is_empty() {
            None
        } else {
            Some(Matrix::new(&self.field, self.dim(), self.ambient, self.basis.concat()).unwrap())
        }
    }
}

pub fn standard_basis(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Scalar::ZERO; n];
            v[i] = Scalar::ONE;
            v
        })
        .collect()
}

/// The projection onto `image` along `kernel`, i.e. the idempotent e(V₁, V₂).
pub fn projection(image: &Subspace, kernel: &Subspace) -> Result<Matrix> {
    image.check(kernel)?;
    let n = image.ambient;
    if image.dim() + kernel.dim() != n || !image.intersect(kernel)?.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "{image} and {kernel} are not complementary"
        )));
    }
    let f = &image.field;
    if n == image.dim() {
        return Ok(Matrix::identity(f, n));
    }
    if image.is_zero() {
        return Ok(Matrix::zero(f, n, n));
    }
    let cols: Vec<Vec<Scalar>> = image.basis.iter().chain(&kernel.basis).cloned().collect();
    let p = Matrix::from_columns(f, &cols);
    let mut d = Matrix::zero(f, n, n);
    for i in 0..image.dim() {
        d.set(i, i, Scalar::ONE);
    }
    Ok(&(&p * &d) * &p.inverse()?)
}

/// Number of `d`-dimensional subspaces of F_q^n, by the q-Pascal recurrence.
pub fn gaussian_binomial(n: usize, d: usize, q: u128) -> u128 {
    if d > n {
        return 0;
    }
    // row[j] = [m choose j]_q, built up for m = 0..=n
    let mut row = vec![0u128; n + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=m).rev() {
            row[j] = row[j - 1].saturating_add(q.saturating_pow(j as u32).saturating_mul(row[j]));
        }
    }
    row[d]
}

/// All `d`-dimensional subspaces of F^n, sorted by basis encoding.
pub fn enumerate_subspaces(field: &Field, n: usize, d: usize, limits: &Limits) -> Result<Vec<Subspace>> {
    if d > n {
        return Err(Error::PreconditionViolated(format!("dimension {d} > ambient {n}")));
    }
    check_cap("ambient dimension", n as u128, limits.max_n as u128)?;
    let count = gaussian_binomial(n, d, field.q() as u128);
    check_cap("subspace enumeration", count, limits.max_enum as u128)?;

    let mut out = Vec::with_capacity(count as usize);
    let mut pivots = Vec::with_capacity(d);
    choose_pivots(field, n, d, 0, &mut pivots, &mut out);
    out.sort();
    Ok(out)
}

fn choose_pivots(
    field: &Field,
    n: usize,
    d: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<Subspace>,
) {
    if pivots.len() == d {
        // free slots: for each row, columns after its pivot that are not pivots
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                (p + 1..n)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let q = field.q() as u64;
        let total = q.pow(slots.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![Scalar::ZERO; n]; d];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = Scalar::ONE;
            }
            let mut c = code;
            for &(r, col) in &slots {
                rows[r][col] = Scalar((c % q) as u8);
                c /= q;
            }
            out.push(Subspace {
                field: field.clone(),
                ambient: n,
                basis: rows,
            });
        }
        return;
    }
    for p in start..n {
        pivots.push(p);
        choose_pivots(field, n, d, p + 1, pivots, out);
        pivots.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    #[test]
    fn intersect_and_sum_of_axes() {
        let f = f2();
        let e1 = Subspace::coordinate(&f, 2, &[0]);
        let e2 = Subspace::coordinate(&f, 2, &[1]);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(&f, 2));
    }

    #[test]
    fn membership_in_plane() {
        let f = f2();
        let plane = Subspace::coordinate(&f, 3, &[0, 1]);
        let line = Subspace::span(&f, 3, &[vec![Scalar(1), Scalar(1), Scalar(0)]]);
        assert!(plane.contains(&line).unwrap());
        assert!(!line.contains(&plane).unwrap());
    }

    #[test]
    fn ambient_mismatch() {
        let f = f2();
        let a = Subspace::full(&f, 2);
        let b = Subspace::full(&f, 3);
        assert_eq!(a.sum(&b), Err(Error::AmbientMismatch(2, 3)));
    }

    #[test]
    fn enumerate_lines_of_f2_squared() {
        let f = f2();
        let lines = enumerate_subspaces(&f, 2, 1, &Limits::default()).unwrap();
        let text: Vec<String> = lines.iter().map(ToString::to_string).collect();
        assert_eq!(text, vec!["0,1", "1,0", "1,1"]);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(enumerate_subspaces(&f3, 2, 1, &Limits::default()).unwrap().len(), 4);
        let full = enumerate_subspaces(&f3, 3, 3, &Limits::default()).unwrap();
        assert_eq!(full, vec![Subspace::full(&f3, 3)]);
    }

    #[test]
    fn enumeration_cap() {
        let f = f2();
        let tight = Limits {
            max_enum: 10,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_subspaces(&f, 4, 2, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn zero_subspace_text() {
        let f = f2();
        let z = Subspace::zero(&f, 3);
        assert_eq!(z.to_string(), "-");
        assert_eq!(Subspace::parse(&f, 3, "-").unwrap(), z);
        let p = Subspace::parse(&f, 3, "1,1,0;0,1,0").unwrap();
        assert_eq!(p.to_string(), "1,0,0;0,1,0");
    }

    #[test]
    fn projection_is_idempotent_with_right_image_and_kernel() {
        let f = Field::new(3, 1).unwrap();
        let v1 = Subspace::span(&f, 2, &[vec![Scalar(1), Scalar(1)]]);
        let v2 = Subspace::coordinate(&f, 2, &[1]);
        let e = projection(&v1, &v2).unwrap();
        assert_eq!(&e * &e, e);
        assert_eq!(e.image(), v1);
        assert_eq!(e.kernel(), v2);
        assert!(projection(&v1, &v1).is_err());
    }

    #[test]
    fn standard_complement_picks_low_indices() {
        let f = f2();
        let v = Subspace::span(&f, 3, &[vec![Scalar(1), Scalar(1), Scalar(0)]]);
        let c = v.standard_complement();
        assert_eq!(c, Subspace::coordinate(&f, 3, &[0, 2]));
    }
}
