use std::collections::BTreeMap;

use crate::error::{check_cap, Result};
use crate::limits::Limits;

use super::SemigroupTable;

/// Whether `f` (indexed by ids of `u`) is a bijection onto `w` preserving
/// every product.
pub fn verify_iso(u: &SemigroupTable, w: &SemigroupTable, f: &[u32]) -> bool {
    let m = u.len();
    if w.len() != m || f.len() != m {
        return false;
    }
    let mut hit = vec![false; m];
    for &x in f {
        if x as usize >= m || std::mem::replace(&mut hit[x as usize], true) {
            return false;
        }
    }
    (0..m as u32).all(|a| (0..m as u32).all(|b| f[u.mul(a, b) as usize] == w.mul(f[a as usize], f[b as usize])))
}

fn base_invariants(t: &SemigroupTable, x: u32) -> Vec<u64> {
    let m = t.len() as u32;
    let distinct = |it: &mut dyn Iterator<Item = u32>| {
        let mut v: Vec<u32> = it.collect();
        v.sort_unstable();
        v.dedup();
        v.len() as u64
    };
    let mut powers = vec![x];
    let mut p = t.mul(x, x);
    while !powers.contains(&p) {
        powers.push(p);
        p = t.mul(p, x);
    }
    let zero = t.zero();
    vec![
        (Some(x) == zero) as u64,
        (Some(x) == t.identity()) as u64,
        (t.mul(x, x) == x) as u64,
        distinct(&mut (0..m).map(|y| t.mul(x, y))),
        distinct(&mut (0..m).map(|y| t.mul(y, x))),
        powers.len() as u64,
        (0..m).filter(|&y| t.mul(x, y) == t.mul(y, x)).count() as u64,
        (0..m).filter(|&y| Some(t.mul(x, y)) == zero).count() as u64,
        (0..m).filter(|&y| Some(t.mul(y, x)) == zero).count() as u64,
    ]
}

/// Joint color refinement of both tables; colors are comparable across them.
fn refined_colors(u: &SemigroupTable, w: &SemigroupTable) -> (Vec<usize>, Vec<usize>) {
    fn recolor(keys: Vec<Vec<u64>>, m: usize) -> (Vec<usize>, Vec<usize>) {
        let palette: BTreeMap<&Vec<u64>, usize> = {
            let mut sorted: Vec<&Vec<u64>> = keys.iter().collect();
            sorted.sort();
            sorted.dedup();
            sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
        };
        let all: Vec<usize> = keys.iter().map(|k| palette[k]).collect();
        (all[..m].to_vec(), all[m..].to_vec())
    }
    let m = u.len();
    let keys = (0..m as u32)
        .map(|x| base_invariants(u, x))
        .chain((0..w.len() as u32).map(|x| base_invariants(w, x)))
        .collect();
    let (mut cu, mut cw) = recolor(keys, m);
    loop {
        let before = cu.iter().chain(&cw).max().map_or(0, |&c| c + 1);
        let key = |t: &SemigroupTable, c: &[usize], x: u32| {
            let mut around: Vec<u64> = (0..t.len() as u32)
                .map(|y| {
                    let (cy, cxy, cyx) = (c[y as usize], c[t.mul(x, y) as usize], c[t.mul(y, x) as usize]);
                    ((cy as u64) << 42) | ((cxy as u64) << 21) | cyx as u64
                })
                .collect();
            around.sort_unstable();
            let mut k = vec![c[x as usize] as u64];
            k.extend(around);
            k
        };
        let keys = (0..m as u32)
            .map(|x| key(u, &cu, x))
            .chain((0..w.len() as u32).map(|x| key(w, &cw, x)))
            .collect();
        (cu, cw) = recolor(keys, m);
        let after = cu.iter().chain(&cw).max().map_or(0, |&c| c + 1);
        if after == before {
            return (cu, cw);
        }
    }
}

struct Search<'a> {
    u: &'a SemigroupTable,
    w: &'a SemigroupTable,
    cu: Vec<usize>,
    cw: Vec<usize>,
    f: Vec<Option<u32>>,
    used: Vec<bool>,
    trail: Vec<u32>,
}

impl Search<'_> {
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            let fx = self.f[x as usize].take().unwrap();
            self.used[fx as usize] = false;
        }
    }

    /// Assign `a ↦ b` and everything it forces through products.
    fn assign(&mut self, a: u32, b: u32) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((x, fx)) = queue.pop() {
            match self.f[x as usize] {
                Some(cur) if cur == fx => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[fx as usize] || self.cu[x as usize] != self.cw[fx as usize] {
                return false;
            }
            self.f[x as usize] = Some(fx);
            self.used[fx as usize] = true;
            self.trail.push(x);
            for i in 0..self.trail.len() {
                let y = self.trail[i];
                let fy = self.f[y as usize].unwrap();
                queue.push((self.u.mul(x, y), self.w.mul(fx, fy)));
                queue.push((self.u.mul(y, x), self.w.mul(fy, fx)));
            }
        }
        true
    }

    fn run(&mut self, order: &[u32]) -> bool {
        let Some(&a) = order.iter().find(|&&x| self.f[x as usize].is_none()) else {
            return true;
        };
        for b in 0..self.w.len() as u32 {
            if self.used[b as usize] || self.cw[b as usize] != self.cu[a as usize] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(a, b) && self.run(order) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// A multiplication-preserving bijection `u → w` (as the image of each id),
/// or `None` when the tables are not isomorphic.
pub fn table_iso(u: &SemigroupTable, w: &SemigroupTable, limits: &Limits) -> Result<Option<Vec<u32>>> {
    if u.len() != w.len() {
        return Ok(None);
    }
    let m = u.len();
    check_cap("isomorphism search size", m as u128, limits.iso_elems as u128)?;
    let (cu, cw) = refined_colors(u, w);
    let mut hu = cu.clone();
    let mut hw = cw.clone();
    hu.sort_unstable();
    hw.sort_unstable();
    if hu != hw {
        return Ok(None);
    }
    let mut class_size = vec![0usize; m.max(1) * 2];
    for &c in &cu {
        class_size[c] += 1;
    }
    let mut order: Vec<u32> = (0..m as u32).collect();
    order.sort_by_key(|&x| (class_size[cu[x as usize]], x));
    let mut s = Search {
        u,
        w,
        cu,
        cw,
        f: vec![None; m],
        used: vec![false; m],
        trail: Vec::new(),
    };
    if !s.run(&order) {
        return Ok(None);
    }
    let f: Vec<u32> = s.f.into_iter().map(Option::unwrap).collect();
    if !verify_iso(u, w, &f) {
        return Err(crate::error::Error::Internal("isomorphism search returned a non-isomorphism".into()));
    }
    Ok(Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_mult(m: usize) -> SemigroupTable {
        SemigroupTable::from_products(m, vec![0; m * m]).unwrap()
    }

    #[test]
    fn zero_multiplication_tables_are_isomorphic() {
        let lim = Limits::default();
        let f = table_iso(&zero_mult(8), &zero_mult(8), &lim).unwrap().unwrap();
        assert_eq!(f[0], 0);
        assert!(table_iso(&zero_mult(3), &zero_mult(4), &lim).unwrap().is_none());
    }

    #[test]
    fn cyclic_groups_and_relabeling() {
        let lim = Limits::default();
        let z4 = SemigroupTable::from_products(4, (0..16).map(|i| ((i / 4 + i % 4) % 4) as u32).collect()).unwrap();
        // Klein four-group
        let v4 = SemigroupTable::from_products(4, (0..16).map(|i| ((i / 4) ^ (i % 4)) as u32).collect()).unwrap();
        assert!(table_iso(&z4, &v4, &lim).unwrap().is_none());
        // Z4 relabeled by 0->0, 1->3, 2->2, 3->1 is still Z4
        let f = table_iso(&z4, &z4, &lim).unwrap().unwrap();
        assert!(verify_iso(&z4, &z4, &f));
    }
}
