use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{check_cap, Error, Result};
use crate::field::Field;
use crate::limits::Limits;
use crate::matrix::Matrix;

/// A duplicate-free set of n×n matrices kept in canonical order:
/// by rank, then by entry codes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatSet {
    field: Field,
    n: usize,
    elems: Vec<Matrix>,
    ranks: Vec<usize>,
}

impl fmt::Debug for MatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.elems).finish()
    }
}

impl Serialize for MatSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(&self.elems)
    }
}

fn check_shape(field: &Field, n: usize, m: &Matrix) -> Result<()> {
    if m.field() != field {
        return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
    }
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimMismatch(format!(
            "expected {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl MatSet {
    pub fn new(field: &Field, n: usize, elems: impl IntoIterator<Item = Matrix>) -> Result<MatSet> {
        let mut v: Vec<Matrix> = elems.into_iter().collect();
        for m in &v {
            check_shape(field, n, m)?;
        }
        let mut keyed: Vec<(usize, Matrix)> = v.drain(..).map(|m| (m.rank(), m)).collect();
        keyed.sort();
        keyed.dedup();
        let (ranks, elems) = keyed.into_iter().unzip();
        Ok(MatSet {
            field: field.clone(),
            n,
            elems,
            ranks,
        })
    }

    pub fn empty(field: &Field, n: usize) -> MatSet {
        MatSet {
            field: field.clone(),
            n,
            elems: Vec::new(),
            ranks: Vec::new(),
        }
    }

    /// Every matrix of M(n, F), subject to the element cap.
    pub fn full(field: &Field, n: usize, limits: &Limits) -> Result<MatSet> {
        let u = super::Universe::new(field, n, limits)?;
        MatSet::new(field, n, u.elements().iter().cloned())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elems
    }

    /// Ranks of the elements, aligned with [`MatSet::elements`].
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.elems.iter()
    }

    pub fn position(&self, m: &Matrix) -> Option<usize> {
        if m.field() != &self.field || m.rows() != self.n || m.cols() != self.n {
            return None;
        }
        let key = (m.rank(), m);
        let mut lo = 0;
        let mut hi = self.elems.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match (self.ranks[mid], &self.elems[mid]).cmp(&key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.position(m).is_some()
    }

    pub fn is_subset(&self, other: &MatSet) -> bool {
        self.elems.iter().all(|m| other.contains(m))
    }

    pub fn union(&self, other: &MatSet) -> Result<MatSet> {
        MatSet::new(
            &self.field,
            self.n,
            self.elems.iter().chain(other.elems.iter()).cloned(),
        )
    }

    /// First pair `(i, j)` (by canonical ids) whose product leaves the set.
    pub fn closure_witness(&self) -> Option<(usize, usize)> {
        let set: HashSet<&Matrix> = self.elems.iter().collect();
        for (i, a) in self.elems.iter().enumerate() {
            for (j, b) in self.elems.iter().enumerate() {
                if !set.contains(&(a * b)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_closed(&self) -> bool {
        self.closure_witness().is_none()
    }
}

impl<'a> IntoIterator for &'a MatSet {
    type Item = &'a Matrix;
    type IntoIter = std::slice::Iter<'a, Matrix>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// The least multiplicatively closed superset of `seed`.
pub fn closure(seed: &MatSet, limits: &Limits) -> Result<MatSet> {
    let mut list: Vec<Matrix> = seed.elems.clone();
    let mut seen: HashSet<Matrix> = list.iter().cloned().collect();
    let mut i = 0;
    while i < list.len() {
        for j in 0..=i {
            for p in [&list[i] * &list[j], &list[j] * &list[i]] {
                if seen.insert(p.clone()) {
                    list.push(p);
                    check_cap("closure size", list.len() as u128, limits.max_elems as u128)?;
                }
            }
        }
        i += 1;
    }
    MatSet::new(&seed.field, seed.n, list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    #[test]
    fn canonical_order_is_rank_first() {
        let f = f2();
        let s = MatSet::new(
            &f,
            2,
            [
                Matrix::identity(&f, 2),
                Matrix::unit(&f, 2, 1, 1),
                Matrix::zero(&f, 2, 2),
                Matrix::unit(&f, 2, 0, 1),
                Matrix::zero(&f, 2, 2),
            ],
        )
        .unwrap();
        let text: Vec<String> = s.iter().map(|m| m.to_string()).collect();
        assert_eq!(text, ["0,0;0,0", "0,0;0,1", "0,1;0,0", "1,0;0,1"]);
        assert_eq!(s.position(&Matrix::unit(&f, 2, 0, 1)), Some(2));
        assert!(!s.contains(&Matrix::unit(&f, 2, 1, 0)));
    }

    #[test]
    fn closure_of_matrix_units() {
        let f = f2();
        let seed = MatSet::new(&f, 2, [Matrix::unit(&f, 2, 0, 1), Matrix::unit(&f, 2, 1, 0)]).unwrap();
        let c = closure(&seed, &Limits::default()).unwrap();
        let expected = MatSet::new(
            &f,
            2,
            [
                Matrix::unit(&f, 2, 0, 1),
                Matrix::unit(&f, 2, 1, 0),
                Matrix::diag(&f, &[1, 0]),
                Matrix::diag(&f, &[0, 1]),
                Matrix::zero(&f, 2, 2),
            ],
        )
        .unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn closure_of_empty_and_identity() {
        let f = f2();
        let lim = Limits::default();
        assert!(closure(&MatSet::empty(&f, 2), &lim).unwrap().is_empty());
        let id = MatSet::new(&f, 2, [Matrix::identity(&f, 2)]).unwrap();
        assert_eq!(closure(&id, &lim).unwrap(), id);
    }

    #[test]
    fn closure_respects_cap() {
        let f = f2();
        let seed = MatSet::new(&f, 2, [Matrix::unit(&f, 2, 0, 1), Matrix::unit(&f, 2, 1, 0)]).unwrap();
        let lim = Limits {
            max_elems: 3,
            ..Limits::default()
        };
        assert!(matches!(closure(&seed, &lim), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn shape_is_checked() {
        let f = f2();
        let e = MatSet::new(&f, 3, [Matrix::identity(&f, 2)]);
        assert!(matches!(e, Err(Error::DimMismatch(_))));
    }
}
