use fixedbitset::FixedBitSet;

use crate::error::{check_cap, Result};
use crate::field::Field;
use crate::limits::Limits;
use crate::matrix::Matrix;

/// All of M(n, F_q), indexed by [`Matrix::index`] (lexicographic entry order),
/// optionally with a full multiplication table.
#[derive(Debug, Clone)]
pub struct Universe {
    field: Field,
    n: usize,
    elems: Vec<Matrix>,
    table: Option<Vec<u32>>,
}

impl Universe {
    /// Enumerate M(n, F_q); the element count is capped by `max_elems`.
    pub fn new(field: &Field, n: usize, limits: &Limits) -> Result<Universe> {
        check_cap("ambient dimension", n as u128, limits.max_n as u128)?;
        let m = (field.q() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
        check_cap("matrix semigroup size", m, limits.max_elems as u128)?;
        let elems = (0..m as u64).map(|i| Matrix::from_index(field, n, n, i)).collect();
        Ok(Universe {
            field: field.clone(),
            n,
            elems,
            table: None,
        })
    }

    /// As [`Universe::new`], with the multiplication table precomputed; the
    /// element count is capped by `brute_elems`.
    pub fn with_table(field: &Field, n: usize, limits: &Limits) -> Result<Universe> {
        let mut u = Universe::new(field, n, limits)?;
        check_cap("pair-scan size", u.len() as u128, limits.brute_elems as u128)?;
        let table = u
            .elems
            .iter()
            .flat_map(|a| u.elems.iter().map(move |b| (a * b).index() as u32))
            .collect();
        u.table = Some(table);
        Ok(u)
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

    pub fn element(&self, id: u32) -> &Matrix {
        &self.elems[id as usize]
    }

    pub fn id(&self, m: &Matrix) -> u32 {
        m.index() as u32
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// Product of two ids.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => (&self.elems[a as usize] * &self.elems[b as usize]).index() as u32,
        }
    }

    /// Overwrite one entry of the multiplication table. Used to check that
    /// verification drivers notice a corrupted table.
    #[doc(hidden)]
    pub fn corrupt_product(&mut self, a: u32, b: u32, value: u32) {
        let m = self.elems.len();
        if let Some(t) = self.table.as_mut() {
            t[a as usize * m + b as usize] = value;
        }
    }

    pub fn zero_id(&self) -> u32 {
        0
    }

    pub fn identity_id(&self) -> u32 {
        self.id(&Matrix::identity(&self.field, self.n))
    }

    /// Bitset of the ids of the given matrices.
    pub fn mask<'a>(&self, ms: impl IntoIterator<Item = &'a Matrix>) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        for m in ms {
            s.insert(self.id(m) as usize);
        }
        s
    }

    /// The distinct powers x, x², … of an element, in order, up to the first repeat.
    pub fn powers(&self, x: u32) -> Vec<u32> {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut out = Vec::new();
        let mut p = x;
        while !seen.contains(p as usize) {
            seen.insert(p as usize);
            out.push(p);
            p = self.mul(p, x);
        }
        out
    }

    pub fn is_nilpotent(&self, x: u32) -> bool {
        self.powers(x).last() == Some(&self.zero_id())
    }

    /// Closure of a set of ids. `stop` sees every element as it is added and
    /// may abort the computation by returning `true`, in which case `None`
    /// is returned.
    pub fn closure_ids(&self, seed: &[u32], mut stop: impl FnMut(u32) -> bool) -> Option<FixedBitSet> {
        let mut set = FixedBitSet::with_capacity(self.len());
        let mut list = Vec::new();
        for &s in seed {
            if !set.contains(s as usize) {
                if stop(s) {
                    return None;
                }
                set.insert(s as usize);
                list.push(s);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                for p in [self.mul(list[i], list[j]), self.mul(list[j], list[i])] {
                    if !set.contains(p as usize) {
                        if stop(p) {
                            return None;
                        }
                        set.insert(p as usize);
                        list.push(p);
                    }
                }
            }
            i += 1;
        }
        Some(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn table_agrees_with_matrix_products() {
        let f = Field::new(3, 1).unwrap();
        let lim = Limits::default();
        let fast = Universe::with_table(&f, 2, &lim).unwrap();
        let slow = Universe::new(&f, 2, &lim).unwrap();
        for a in (0..81).step_by(7) {
            for b in 0..81 {
                assert_eq!(fast.mul(a, b), slow.mul(a, b));
            }
        }
        assert_eq!(fast.identity_id(), fast.id(&Matrix::identity(&f, 2)));
    }

    #[test]
    fn caps() {
        let f = Field::new(2, 1).unwrap();
        let lim = Limits::default();
        assert!(matches!(Universe::new(&f, 4, &lim), Err(Error::CapExceeded { .. })));
        assert!(matches!(Universe::with_table(&f, 3, &Limits { brute_elems: 100, ..lim }), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn nilpotent_count_in_m2_f2() {
        let f = Field::new(2, 1).unwrap();
        let u = Universe::with_table(&f, 2, &Limits::default()).unwrap();
        assert_eq!((0..16).filter(|&x| u.is_nilpotent(x)).count(), 4);
    }
}
