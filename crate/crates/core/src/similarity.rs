//! Matrix similarity over an arbitrary finite field.
//!
//! Two square matrices are similar exactly when the Smith normal forms of
//! their characteristic matrices `xI − A` over F[x] agree. The nonconstant
//! diagonal entries are the invariant factors; their coefficient lists
//! serve as the similarity-class key.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// Polynomial over a finite field, low degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    fn trim(mut v: Vec<Scalar>) -> Poly {
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        Poly(v)
    }

    fn zero() -> Poly {
        Poly(Vec::new())
    }

    fn constant(c: Scalar) -> Poly {
        Poly::trim(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let len = self.0.len().max(other.0.len());
        let v = (0..len)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(Scalar::ZERO);
                let b = other.0.get(i).copied().unwrap_or(Scalar::ZERO);
                f.sub(a, b)
            })
            .collect();
        Poly::trim(v)
    }

    fn add(&self, other: &Poly, f: &Field) -> Poly {
        let len = self.0.len().max(other.0.len());
        let v = (0..len)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(Scalar::ZERO);
                let b = other.0.get(i).copied().unwrap_or(Scalar::ZERO);
                f.add(a, b)
            })
            .collect();
        Poly::trim(v)
    }

    fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::trim(v)
    }

    fn div_rem(&self, divisor: &Poly, f: &Field) -> (Poly, Poly) {
        let dd = divisor.degree().expect("nonzero divisor");
        let lead_inv = f.inv(divisor.0[dd]).unwrap();
        let mut rem = self.0.clone();
        let mut quot = vec![Scalar::ZERO; self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = f.mul(rem[top], lead_inv);
            let shift = top - dd;
            quot[shift] = c;
            for (i, &d) in divisor.0.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Poly::trim(quot), Poly::trim(rem))
    }

    fn monic(&self, f: &Field) -> Poly {
        match self.0.last() {
            None => Poly::zero(),
            Some(&lead) => {
                let inv = f.inv(lead).unwrap();
                Poly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
            }
        }
    }
}

/// Smith normal form diagonal of an n×n polynomial matrix, entries monic.
#[allow(clippy::needless_range_loop)]
fn smith_diagonal(mut m: Vec<Vec<Poly>>, f: &Field) -> Vec<Poly> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let pivot = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].degree());
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }

            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (quot, rem) = m[i][k].div_rem(&m[k][k], f);
                for j in k..n {
                    let t = quot.mul(&m[k][j], f);
                    m[i][j] = m[i][j].sub(&t, f);
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (quot, rem) = m[k][j].div_rem(&m[k][k], f);
                for i in k..n {
                    let t = quot.mul(&m[i][k], f);
                    m[i][j] = m[i][j].sub(&t, f);
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // pivot must divide everything left in the trailing block
            let bad = (k + 1..n).find(|&i| {
                (k + 1..n).any(|j| !m[i][j].div_rem(&m[k][k], f).1.is_zero())
            });
            match bad {
                Some(i) => {
                    for j in k..n {
                        m[k][j] = m[k][j].add(&m[i][j], f);
                    }
                }
                None => break,
            }
        }
        diag.push(m[k][k].monic(f));
    }
    diag
}

/// Invariant factors of a square matrix: the nonconstant monic diagonal
/// entries of the Smith form of `xI − A`, each dividing the next.
pub fn invariant_factors(a: &Matrix) -> Result<Vec<Poly>> {
    if !a.is_square() {
        return Err(Error::DimMismatch("similarity of non-square matrices".into()));
    }
    let f = a.field();
    let n = a.rows();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = f.neg(a.get(i, j));
                    if i == j {
                        Poly::trim(vec![c, Scalar::ONE])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    Ok(smith_diagonal(m, f)
        .into_iter()
        .filter(|p| p.degree().is_some_and(|d| d > 0))
        .collect())
}

/// The similarity-class key: invariant factor coefficient lists.
pub fn similarity_key(a: &Matrix) -> Result<Vec<Vec<u8>>> {
    Ok(invariant_factors(a)?
        .into_iter()
        .map(|p| p.0.into_iter().map(|s| s.0).collect())
        .collect())
}

/// Whether `a = g⁻¹ b g` for some invertible `g`.
pub fn similar(a: &Matrix, b: &Matrix) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(invariant_factors(a)? == invariant_factors(b)?)
}
