use rayon::prelude::*;

use crate::error::{check_cap, Result};
use crate::limits::Limits;

use super::SemigroupTable;

/// All multiplicatively closed subsets of a table, as bitmasks over ids in
/// increasing mask order. The empty set is included only on request.
pub fn enumerate_subsemigroups(t: &SemigroupTable, include_empty: bool, limits: &Limits) -> Result<Vec<u32>> {
    let m = t.len();
    check_cap("subset scan size", m as u128, limits.subset_scan_elems.min(31) as u128)?;
    // prod[a][b] as a one-bit mask
    let prod: Vec<u32> = t.products().iter().map(|&p| 1u32 << p).collect();
    let closed = |mask: u32| {
        let mut rest = mask;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let row = &prod[a * m..(a + 1) * m];
            let mut bs = mask;
            while bs != 0 {
                let b = bs.trailing_zeros() as usize;
                bs &= bs - 1;
                if row[b] & mask == 0 {
                    return false;
                }
            }
        }
        true
    };
    let start = if include_empty { 0 } else { 1 };
    let end: u64 = 1u64 << m;
    Ok((start..end)
        .into_par_iter()
        .map(|x| x as u32)
        .filter(|&mask| closed(mask))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_zero_multiplication() {
        let lim = Limits::default();
        let one = SemigroupTable::from_products(1, vec![0]).unwrap();
        assert_eq!(enumerate_subsemigroups(&one, false, &lim).unwrap(), vec![1]);
        assert_eq!(enumerate_subsemigroups(&one, true, &lim).unwrap(), vec![0, 1]);
        let zm = SemigroupTable::from_products(2, vec![0, 0, 0, 0]).unwrap();
        assert_eq!(enumerate_subsemigroups(&zm, false, &lim).unwrap(), vec![0b01, 0b11]);
    }

    #[test]
    fn cap() {
        let zm = SemigroupTable::from_products(2, vec![0, 0, 0, 0]).unwrap();
        let lim = Limits {
            subset_scan_elems: 1,
            ..Limits::default()
        };
        assert!(enumerate_subsemigroups(&zm, false, &lim).is_err());
    }
}
