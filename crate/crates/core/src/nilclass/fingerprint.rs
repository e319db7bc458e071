use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::Result;
use crate::matrix::Matrix;

use super::context::NilContext;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSizes {
    #[serde(rename = "K10")]
    pub k10: usize,
    #[serde(rename = "K01")]
    pub k01: usize,
    #[serde(rename = "K11")]
    pub k11: usize,
    #[serde(rename = "K20")]
    pub k20: usize,
    #[serde(rename = "K02")]
    pub k02: usize,
    #[serde(rename = "K21")]
    pub k21: usize,
    #[serde(rename = "K12")]
    pub k12: usize,
    #[serde(rename = "K22")]
    pub k22: usize,
}

/// The covering statistic at middle position s: the least number of
/// super-rank-1 elements of T(s) that detect every element of T̃(s), with
/// one such subset as certificate. `u` is `None` if no cover exists within
/// the search bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UStat {
    pub s: usize,
    pub u: Option<usize>,
    pub candidates: usize,
    pub targets: usize,
    pub certificate: Vec<Matrix>,
}

/// Isomorphism invariants of an r-maximal nilpotent semigroup, all
/// computed by enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub size: usize,
    pub power_sizes: Vec<usize>,
    /// |{ A : TA = 0 }|
    pub right_ann: usize,
    /// |{ A : AT = 0 }|
    pub left_ann: usize,
    pub two_sided_ann: usize,
    pub decomposable_count: usize,
    /// Decomposable elements of the two-sided annihilator.
    pub ann_decomposable: usize,
    pub k_sizes: KSizes,
    pub u_stats: Vec<UStat>,
}

impl Fingerprint {
    /// Equality of every invariant, ignoring certificates.
    pub fn same_invariants(&self, other: &Fingerprint) -> bool {
        let strip = |f: &Fingerprint| {
            (
                f.size,
                f.power_sizes.clone(),
                f.right_ann,
                f.left_ann,
                f.two_sided_ann,
                f.decomposable_count,
                f.ann_decomposable,
                f.k_sizes.clone(),
                f.u_stats.iter().map(|u| (u.s, u.u, u.candidates, u.targets)).collect::<Vec<_>>(),
            )
        };
        strip(self) == strip(other)
    }
}

/// Smallest k ≤ bound such that some k of the `covers` have union `full`;
/// returns the chosen indices.
fn min_cover(covers: &[FixedBitSet], full: &FixedBitSet, bound: usize) -> Option<Vec<usize>> {
    fn search(covers: &[FixedBitSet], full: &FixedBitSet, start: usize, left: usize, acc: &FixedBitSet, chosen: &mut Vec<usize>) -> bool {
        if left == 0 {
            return acc == full;
        }
        for i in start..covers.len() {
            let mut next = acc.clone();
            next.union_with(&covers[i]);
            chosen.push(i);
            if search(covers, full, i + 1, left - 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let empty = FixedBitSet::with_capacity(full.len());
    for k in 1..=bound.min(covers.len()) {
        let mut chosen = Vec::new();
        if search(covers, full, 0, k, &empty, &mut chosen) {
            return Some(chosen);
        }
    }
    None
}

impl NilContext {
    fn u_stat(&self, s: usize) -> UStat {
        let m = self.len();
        let r = self.r;
        let left = self.power(s - 2);
        let right = self.power(r - s);
        let candidates: Vec<u32> = (0..m as u32)
            .filter(|&a| self.super_rank_id(a) == Some(1))
            .filter(|&a| self.has_nonzero(&self.sandwich(left.as_ref(), a, right.as_ref())))
            .collect();
        let reach = self.power(s - 1);
        let pool = right.clone().expect("r - s >= 1");
        let targets: Vec<u32> = pool
            .ones()
            .map(|b| b as u32)
            .filter(|&b| self.has_nonzero(&self.left_times(reach.as_ref(), b)))
            .collect();
        let mut full = FixedBitSet::with_capacity(targets.len());
        full.insert_range(..);
        let mut covers: Vec<FixedBitSet> = Vec::new();
        let mut owners: Vec<u32> = Vec::new();
        for &c in &candidates {
            let mut cov = FixedBitSet::with_capacity(targets.len());
            for (i, &b) in targets.iter().enumerate() {
                if self.table.mul(c, b) != self.zero {
                    cov.insert(i);
                }
            }
            if !covers.contains(&cov) {
                covers.push(cov);
                owners.push(c);
            }
        }
        let bound = self.sig.iter().max().copied().unwrap_or(0) + 1;
        let chosen = min_cover(&covers, &full, bound);
        UStat {
            s,
            u: chosen.as_ref().map(Vec::len),
            candidates: candidates.len(),
            targets: targets.len(),
            certificate: chosen
                .unwrap_or_default()
                .into_iter()
                .map(|i| self.matrix(owners[i]).clone())
                .collect(),
        }
    }

    pub fn fingerprint(&self) -> Result<Fingerprint> {
        let m = self.len();
        let all = self.table.all();
        let mut power_sizes = vec![m];
        let mut p = all.clone();
        for _ in 1..self.r {
            p = self.table.product_set(&p, &all);
            power_sizes.push(p.count_ones(..));
        }
        // TA = 0 ⇔ every C kills A from the left
        let right_ann: Vec<usize> = (0..m).filter(|&a| self.left_killers[a].count_ones(..) == m).collect();
        let left_ann: Vec<usize> = (0..m).filter(|&a| self.right_killers[a].count_ones(..) == m).collect();
        let two: Vec<usize> = right_ann.iter().copied().filter(|a| left_ann.contains(a)).collect();
        let k = |u, v| self.k_mask(u, v).map(|s| s.count_ones(..));
        Ok(Fingerprint {
            size: m,
            power_sizes,
            right_ann: right_ann.len(),
            left_ann: left_ann.len(),
            two_sided_ann: two.len(),
            decomposable_count: self.square.count_ones(..),
            ann_decomposable: two.iter().filter(|&&a| self.square.contains(a)).count(),
            k_sizes: KSizes {
                k10: k(1, 0)?,
                k01: k(0, 1)?,
                k11: k(1, 1)?,
                k20: k(2, 0)?,
                k02: k(0, 2)?,
                k21: k(2, 1)?,
                k12: k(1, 2)?,
                k22: k(2, 2)?,
            },
            u_stats: (2..self.r).map(|s| self.u_stat(s)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::flags::Flag;
    use crate::limits::Limits;

    fn fp(sig: &[usize]) -> Fingerprint {
        let f = Field::new(2, 1).unwrap();
        NilContext::new(&Flag::standard(&f, sig).unwrap(), &Limits::default())
            .unwrap()
            .fingerprint()
            .unwrap()
    }

    #[test]
    fn annihilators_of_112() {
        let x = fp(&[1, 1, 2]);
        assert_eq!(x.size, 32);
        assert_eq!(x.power_sizes, vec![32, 4, 1]);
        assert_eq!(x.right_ann, 8);
        assert_eq!(x.left_ann, 16);
    }

    #[test]
    fn u_statistic_of_complete_flag() {
        let x = fp(&[1, 1, 1, 1]);
        let us: Vec<_> = x.u_stats.iter().map(|u| (u.s, u.u)).collect();
        assert_eq!(us, vec![(2, Some(1)), (3, Some(1))]);
        assert!(x.u_stats.iter().all(|u| u.certificate.len() == 1));
    }

    #[test]
    fn cover_search() {
        let mk = |bits: &[usize]| {
            let mut s = FixedBitSet::with_capacity(3);
            for &b in bits {
                s.insert(b);
            }
            s
        };
        let full = mk(&[0, 1, 2]);
        let covers = vec![mk(&[0]), mk(&[1, 2]), mk(&[0, 1])];
        assert_eq!(min_cover(&covers, &full, 3), Some(vec![0, 1]));
        assert_eq!(min_cover(&covers[..1], &full, 3), None);
    }
}
