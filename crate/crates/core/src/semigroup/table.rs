use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::MatSet;

const FULL_ASSOCIATIVITY_CHECK: usize = 512;
const SAMPLED_TRIPLES: usize = 100_000;

/// An interned multiplication table on element ids `0..m`.
///
/// Tables built from a [`MatSet`] use its canonical order for ids; an
/// adjoined identity (realizing S¹) gets the last id and has no matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupTable {
    m: usize,
    table: Vec<u32>,
    elements: Vec<Matrix>,
    zero_id: Option<u32>,
    identity_id: Option<u32>,
    adjoined_identity: bool,
}

/// Intern a closed matrix set; `adjoin_identity` appends a formal identity
/// when the set has none.
pub fn build_table(s: &MatSet, adjoin_identity: bool) -> Result<SemigroupTable> {
    let ids: HashMap<&Matrix, u32> = s.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let m = s.len();
    let mut table = Vec::with_capacity(m * m);
    for (i, a) in s.iter().enumerate() {
        for (j, b) in s.iter().enumerate() {
            match ids.get(&(a * b)) {
                Some(&id) => table.push(id),
                None => return Err(Error::NotClosed { left: i, right: j }),
            }
        }
    }
    let mut t = SemigroupTable::assemble(m, table, s.elements().to_vec())?;
    if adjoin_identity && t.identity_id.is_none() {
        t = t.with_adjoined_identity();
    }
    Ok(t)
}

impl SemigroupTable {
    /// A table given by raw products; checked for range and associativity.
    pub fn from_products(m: usize, table: Vec<u32>) -> Result<SemigroupTable> {
        SemigroupTable::assemble(m, table, Vec::new())
    }

    fn assemble(m: usize, table: Vec<u32>, elements: Vec<Matrix>) -> Result<SemigroupTable> {
        if table.len() != m * m || table.iter().any(|&x| x as usize >= m) {
            return Err(Error::InvariantViolation("malformed multiplication table".into()));
        }
        let mut t = SemigroupTable {
            m,
            table,
            elements,
            zero_id: None,
            identity_id: None,
            adjoined_identity: false,
        };
        if let Some((a, b, c)) = t.associativity_witness() {
            return Err(Error::InvariantViolation(format!(
                "product is not associative on ({a}, {b}, {c})"
            )));
        }
        t.zero_id = (0..m as u32).find(|&z| (0..m as u32).all(|x| t.mul(z, x) == z && t.mul(x, z) == z));
        t.identity_id = (0..m as u32).find(|&e| (0..m as u32).all(|x| t.mul(e, x) == x && t.mul(x, e) == x));
        Ok(t)
    }

    fn with_adjoined_identity(self) -> SemigroupTable {
        let m = self.m + 1;
        let one = self.m as u32;
        let mut table = Vec::with_capacity(m * m);
        for a in 0..m as u32 {
            for b in 0..m as u32 {
                table.push(if a == one {
                    b
                } else if b == one {
                    a
                } else {
                    self.mul(a, b)
                });
            }
        }
        SemigroupTable {
            m,
            table,
            elements: self.elements,
            zero_id: self.zero_id,
            identity_id: Some(one),
            adjoined_identity: true,
        }
    }

    fn associativity_witness(&self) -> Option<(u32, u32, u32)> {
        let m = self.m as u32;
        let check = |a, b, c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if self.m <= FULL_ASSOCIATIVITY_CHECK {
            for a in 0..m {
                for b in 0..m {
                    let ab = self.mul(a, b);
                    for c in 0..m {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            None
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            (0..SAMPLED_TRIPLES)
                .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m)))
                .find(|&(a, b, c)| !check(a, b, c))
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.m + b as usize]
    }

    pub fn products(&self) -> &[u32] {
        &self.table
    }

    pub fn zero(&self) -> Option<u32> {
        self.zero_id
    }

    pub fn identity(&self) -> Option<u32> {
        self.identity_id
    }

    pub fn has_adjoined_identity(&self) -> bool {
        self.adjoined_identity
    }

    /// The matrix behind an id; `None` for an adjoined identity or an abstract table.
    pub fn element(&self, id: u32) -> Option<&Matrix> {
        self.elements.get(id as usize)
    }

    /// Ids of the matrix-backed elements, in canonical order.
    pub fn matrix_elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn all(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.m);
        s.insert_range(..);
        s
    }

    /// `{ xy : x ∈ a, y ∈ b }`.
    pub fn product_set(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.m);
        let bs: Vec<usize> = b.ones().collect();
        for x in a.ones() {
            let row = &self.table[x * self.m..(x + 1) * self.m];
            for &y in &bs {
                out.insert(row[y] as usize);
            }
        }
        out
    }

    /// S¹, S², … up to and including the first power that equals `{0}` or
    /// repeats the previous one, capped at `m + 1` powers.
    pub fn power_sets(&self) -> Vec<FixedBitSet> {
        let all = self.all();
        let mut out = vec![all.clone()];
        if self.is_zero_set(&all) {
            return out;
        }
        while out.len() <= self.m {
            let next = self.product_set(out.last().unwrap(), &all);
            let stop = next == *out.last().unwrap() || self.is_zero_set(&next);
            out.push(next);
            if stop {
                break;
            }
        }
        out
    }

    fn is_zero_set(&self, s: &FixedBitSet) -> bool {
        match self.zero_id {
            Some(z) => s.count_ones(..) == 1 && s.contains(z as usize),
            None => false,
        }
    }

    /// Least k with S^k = {0}; `None` when the semigroup is not nilpotent.
    pub fn nilpotency_degree(&self) -> Option<usize> {
        if self.m == 0 {
            return None;
        }
        let powers = self.power_sets();
        let last = powers.last().unwrap();
        self.is_zero_set(last).then_some(powers.len())
    }

    /// Whether the subset given by `mask` is closed under the product.
    pub fn is_closed_subset(&self, mask: &FixedBitSet) -> bool {
        mask.ones()
            .all(|a| mask.ones().all(|b| mask.contains(self.mul(a as u32, b as u32) as usize)))
    }
}
