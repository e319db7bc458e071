//! Exact arithmetic in GF(p^k).
//!
//! An element is stored as its *code*: the base-p little-endian coefficient
//! vector of a polynomial residue modulo the field's modulus. The code order
//! is the total order used for every canonical sorting in the crate.
//!
//! All four operations are table lookups; tables are built once per field
//! and shared through an `Arc`.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{check_cap, Error, Result};
use crate::limits::{Limits, FIELD_HARD_MAX};

/// A field element, identified by its code in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct Scalar(pub u8);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u64,
    k: u32,
    q: usize,
    /// Low coefficients of the monic modulus (degree k), base-p digits; empty when k = 1.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// GF(p^k) with precomputed operation tables. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.k).hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.k)
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Base-p digits of `code`, `len` of them, least significant first.
fn digits(mut code: usize, p: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of `a` modulo a monic `m`, coefficients mod p, low degree first.
fn poly_rem_monic(mut a: Vec<usize>, m: &[usize], p: usize) -> Vec<usize> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - lead * c % p) % p;
            }
        }
    }
    a
}

/// Exhaustive test: no monic polynomial of degree 1..=k/2 divides `m`.
fn is_irreducible(m: &[usize], p: usize) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f = digits(low, p, d);
            f.push(1);
            if poly_rem_monic(m.to_vec(), &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// GF(p^k) under the default caps.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        Field::with_limits(p, k, &Limits::default())
    }

    pub fn with_limits(p: u64, k: u32, limits: &Limits) -> Result<Field> {
        if k == 0 {
            return Err(Error::PreconditionViolated("extension degree must be >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        check_cap("field size", q, limits.max_q.min(FIELD_HARD_MAX) as u128)?;
        let (p, q) = (p as usize, q as usize);
        let k = k as usize;

        let modulus: Vec<usize> = if k == 1 {
            Vec::new()
        } else {
            let found = (0..q).find_map(|low| {
                let mut m = digits(low, p, k);
                m.push(1);
                is_irreducible(&m, p).then_some(m)
            });
            let mut m = found.ok_or_else(|| {
                Error::Internal(format!("no irreducible polynomial of degree {k} over F_{p}"))
            })?;
            m.pop();
            m
        };

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as u8;

                let mut prod = vec![0usize; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = if k == 1 {
                    prod
                } else {
                    let mut m = modulus.clone();
                    m.push(1);
                    poly_rem_monic(prod, &m, p)
                };
                mul[a * q + b] = undigits(&r, p) as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q)
                    .find(|&b| mul[a * q + b] == 1)
                    .ok_or_else(|| Error::Internal(format!("{a} has no inverse")))?
                    as u8;
            }
        }

        Ok(Field(Arc::new(Tables {
            p: p as u64,
            k: k as u32,
            q,
            modulus: modulus.into_iter().map(|c| c as u8).collect(),
            add,
            mul,
            neg,
            inv,
        })))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.0.q
    }

    /// Low coefficients of the monic modulus (empty for prime fields).
    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q()).map(|c| Scalar(c as u8))
    }

    pub fn scalar(&self, code: u64) -> Result<Scalar> {
        if (code as usize) < self.q() && code < 256 {
            Ok(Scalar(code as u8))
        } else {
            Err(Error::Parse(format!("scalar {code} out of range for F_{self}")))
        }
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.0.add[a.code() * self.0.q + b.code()])
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.0.mul[a.code() * self.0.q + b.code()])
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.0.neg[a.code()])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Scalar(self.0.inv[a.code()]))
        }
    }

    pub fn pow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Parse `p` or `p^k`.
impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let (p, k) = match s.split_once('^') {
            Some((p, k)) => (p, k),
            None => (s, "1"),
        };
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field `{s}`")))?;
        let k: u32 = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field `{s}`")))?;
        Field::new(p, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert!(f2.modulus().is_empty());
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.add(Scalar(2), Scalar(2)), Scalar(1));
    }

    #[test]
    fn f4_modulus_and_generator_square() {
        // monic quadratics over F2: x^2, x^2+1, x^2+x are reducible; x^2+x+1 is not
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1]);
        let g = Scalar(2);
        assert_eq!(f4.mul(g, g), Scalar(3));
    }

    #[test]
    fn non_prime_and_cap() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 7), Err(Error::CapExceeded { .. })));
        assert!(matches!(Field::new(67, 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn inverse_of_zero() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(Scalar(0)), Err(Error::DivisionByZero));
        assert_eq!(f.inv(Scalar(2)), Ok(Scalar(3)));
    }

    #[test]
    fn parse_field_text() {
        let f: Field = "2^2".parse().unwrap();
        assert_eq!(f.q(), 4);
        assert_eq!(f.to_string(), "2^2");
        assert_eq!("3".parse::<Field>().unwrap().to_string(), "3");
        assert!("6".parse::<Field>().is_err());
        assert!("x".parse::<Field>().is_err());
    }

    #[test]
    fn f8_and_f9_moduli_are_smallest_irreducible() {
        // x^3 + x + 1 over F2 (low coefficients 1,1,0)
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0]);
        // x^2 + 1 over F3 is irreducible (no roots), and smaller ones all have roots
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0]);
    }
}
