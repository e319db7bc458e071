use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::semigroup::MatSet;

use super::context::{NilContext, Preorder};

/// The (u, v) indices of the K_{u,v} sets, in reporting order.
pub const K_INDICES: [(usize, usize); 8] = [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)];

const SUPR1: u8 = 1;
const SUPR2: u8 = 2;
const REACHED: u8 = 4;

/// Invariant data computed on first use.
pub(crate) struct Derived {
    pub tat: Vec<FixedBitSet>,
    pub k: Vec<FixedBitSet>,
    pub supr: Vec<Option<u8>>,
}

fn k_slot(u: usize, v: usize) -> Option<usize> {
    K_INDICES.iter().position(|&x| x == (u, v))
}

impl NilContext {
    pub(crate) fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| self.compute_derived())
    }

    /// Tags reachable by products of indecomposables: for each element, the
    /// union over all its factorizations of the factor tags.
    fn factorization_tags(&self, tag: &[u8]) -> Vec<u8> {
        let m = self.len();
        let indec: Vec<u32> = (0..m as u32).filter(|&a| self.is_indecomposable_id(a)).collect();
        let mut reach = vec![0u8; m];
        let mut work = Vec::new();
        for &a in &indec {
            reach[a as usize] = REACHED | tag[a as usize];
            work.push(a);
        }
        while let Some(x) = work.pop() {
            for &a in &indec {
                let y = self.table.mul(x, a) as usize;
                let new = reach[y] | reach[x as usize] | tag[a as usize] | REACHED;
                if new != reach[y] {
                    reach[y] = new;
                    work.push(y as u32);
                }
            }
        }
        reach
    }

    fn compute_derived(&self) -> Derived {
        let m = self.len();
        let all = self.table.all();
        let tat: Vec<FixedBitSet> = (0..m as u32).map(|a| self.sandwich(Some(&all), a, Some(&all))).collect();
        let tat_nonzero: Vec<bool> = tat.iter().map(|s| self.has_nonzero(s)).collect();
        let depth = |w: Preorder| -> Vec<usize> { (0..m as u32).map(|a| self.depth_by_dimension(w, a)).collect() };
        let (dp, dl) = (depth(Preorder::Prec), depth(Preorder::Ll));
        let base = |u: usize, v: usize, need_tat: bool| {
            let mut s = FixedBitSet::with_capacity(m);
            for a in 0..m {
                if dp[a] == u && dl[a] == v && (!need_tat || tat_nonzero[a]) {
                    s.insert(a);
                }
            }
            s
        };
        let mut k: Vec<FixedBitSet> = K_INDICES
            .iter()
            .map(|&(u, v)| base(u, v, u >= 1 && v >= 1))
            .collect();

        let indec = |a: usize| self.is_indecomposable_id(a as u32);
        let in_any = |slots: &[(usize, usize)], k: &[FixedBitSet], a: usize| {
            slots.iter().any(|&(u, v)| k[k_slot(u, v).unwrap()].contains(a))
        };
        let ones: [(usize, usize); 3] = [(1, 0), (0, 1), (1, 1)];
        let twos: [(usize, usize); 5] = [(2, 0), (0, 2), (2, 1), (1, 2), (2, 2)];

        // super rank 1 for indecomposables, then for decomposables
        let tag1: Vec<u8> = (0..m).map(|a| if indec(a) && in_any(&ones, &k, a) { SUPR1 } else { 0 }).collect();
        let reach1 = self.factorization_tags(&tag1);
        let supr1: Vec<bool> = (0..m)
            .map(|a| a as u32 != self.zero && if indec(a) { tag1[a] != 0 } else { reach1[a] & SUPR1 != 0 })
            .collect();

        // K_{2,2} excludes A when TAT = TBT for some B of super rank 1
        let forbidden: HashSet<&FixedBitSet> = (0..m).filter(|&b| supr1[b]).map(|b| &tat[b]).collect();
        let k22 = k_slot(2, 2).unwrap();
        let keep: Vec<usize> = k[k22].ones().filter(|&a| !forbidden.contains(&tat[a])).collect();
        k[k22].clear();
        for a in keep {
            k[k22].insert(a);
        }

        let tag: Vec<u8> = (0..m)
            .map(|a| {
                if !indec(a) {
                    0
                } else if in_any(&ones, &k, a) {
                    SUPR1
                } else if in_any(&twos, &k, a) {
                    SUPR2
                } else {
                    0
                }
            })
            .collect();
        let reach = self.factorization_tags(&tag);
        let supr = (0..m)
            .map(|a| {
                let bits = if indec(a) { tag[a] } else { reach[a] };
                if a as u32 == self.zero {
                    None
                } else if bits & SUPR1 != 0 {
                    Some(1)
                } else if bits & SUPR2 != 0 {
                    Some(2)
                } else {
                    None
                }
            })
            .collect();
        Derived { tat, k, supr }
    }

    /// TAT = { CAD : C, D ∈ T }.
    pub fn tat(&self, a: &Matrix) -> Result<MatSet> {
        let id = self.id(a)?;
        Ok(self.mask_to_set(&self.derived().tat[id as usize]))
    }

    pub(crate) fn k_mask(&self, u: usize, v: usize) -> Result<&FixedBitSet> {
        let slot = k_slot(u, v).ok_or_else(|| Error::PreconditionViolated(format!("no set K_({u},{v})")))?;
        Ok(&self.derived().k[slot])
    }

    /// K_{u,v}.
    pub fn k_set(&self, u: usize, v: usize) -> Result<MatSet> {
        Ok(self.mask_to_set(self.k_mask(u, v)?))
    }

    pub fn super_rank_id(&self, a: u32) -> Option<u8> {
        self.derived().supr[a as usize]
    }

    /// SupR(A) ∈ {1, 2}, or `None` where it is undefined.
    pub fn super_rank(&self, a: &Matrix) -> Result<Option<u8>> {
        let id = self.id(a)?;
        if id == self.zero {
            return Err(Error::ZeroElement);
        }
        Ok(self.super_rank_id(id))
    }

    /// CAD = CBD for all C, D ∈ T¹ other than C = D = 1.
    pub fn sandwich_equivalent(&self, a: u32, b: u32) -> bool {
        let m = self.len() as u32;
        let t = &self.table;
        let one_side = (0..m).all(|c| t.mul(c, a) == t.mul(c, b) && t.mul(a, c) == t.mul(b, c));
        one_side && (0..m).all(|c| (0..m).all(|d| t.mul(t.mul(c, a), d) == t.mul(t.mul(c, b), d)))
    }

    /// T¹AT¹.
    pub(crate) fn t1at1(&self, a: u32) -> FixedBitSet {
        let m = self.len() as u32;
        let mut s = self.derived().tat[a as usize].clone();
        s.insert(a as usize);
        for c in 0..m {
            s.insert(self.table.mul(c, a) as usize);
            s.insert(self.table.mul(a, c) as usize);
        }
        s
    }

    /// An element B ∈ T of the given usual rank with CAD = CBD for all
    /// C, D ∈ T¹ not both 1, or `None`. Such B differ from A exactly by maps
    /// F^n → V₁ vanishing on V_{r−1}; the candidate with that corner of A
    /// cleared (in an adapted basis) is tried first.
    pub fn sandwich_witness(&self, a: &Matrix, target_rank: usize) -> Result<Option<Matrix>> {
        let id = self.id(a)?;
        if !self.is_indecomposable_id(id) {
            return Err(Error::PreconditionViolated("element is decomposable".into()));
        }
        let mut trivial = FixedBitSet::with_capacity(self.len());
        trivial.insert(id as usize);
        trivial.insert(self.zero as usize);
        if self.t1at1(id) == trivial {
            return Err(Error::PreconditionViolated("T1 A T1 = {A, 0}".into()));
        }
        if !(1..=2).contains(&target_rank) {
            return Err(Error::PreconditionViolated(format!("target rank {target_rank} is not 1 or 2")));
        }
        let f = self.flag.field();
        let n = self.flag.ambient();
        let (d1, dr) = (self.sig[0], self.sig[self.r - 1]);
        let p = self.flag.basis_matrix();
        let pinv = p.inverse()?;
        let mut cleared = &(&pinv * a) * &p;
        for i in 0..d1 {
            for j in n - dr..n {
                cleared.set(i, j, Scalar::ZERO);
            }
        }
        let q = f.q() as u64;
        let count = q.pow((d1 * dr) as u32);
        for code in 0..count {
            let mut local = cleared.clone();
            let mut c = code;
            for i in 0..d1 {
                for j in n - dr..n {
                    local.set(i, j, Scalar((c % q) as u8));
                    c /= q;
                }
            }
            let b = &(&p * &local) * &pinv;
            if b.rank() != target_rank {
                continue;
            }
            let bid = self.id(&b)?;
            if !self.sandwich_equivalent(id, bid) {
                return Err(Error::Internal(format!("corner coset element {b} is not sandwich-equivalent to {a}")));
            }
            return Ok(Some(b));
        }
        Ok(None)
    }
}
