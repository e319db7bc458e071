use matsemi::semigroup::{
    build_table, closure, enumerate_subsemigroups, equiv_closure, table_iso, verify_iso, MatSet, SemigroupTable,
};
use matsemi::{Field, Limits, Matrix};
use proptest::prelude::*;

const AMBIENTS: [(u64, usize); 3] = [(2, 2), (3, 2), (2, 3)];

fn seed_set(p: u64, n: usize, idx: &[u64]) -> MatSet {
    let f = Field::new(p, 1).unwrap();
    let total = p.pow((n * n) as u32);
    MatSet::new(&f, n, idx.iter().map(|&i| Matrix::from_index(&f, n, n, i % total))).unwrap()
}

fn permuted(t: &SemigroupTable, perm: &[u32]) -> SemigroupTable {
    let m = t.len();
    let mut inv = vec![0u32; m];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    let mut prod = vec![0u32; m * m];
    for a in 0..m as u32 {
        for b in 0..m as u32 {
            prod[perm[a as usize] as usize * m + perm[b as usize] as usize] = perm[t.mul(a, b) as usize];
        }
    }
    SemigroupTable::from_products(m, prod).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_closure_operator(
        amb in 0usize..3,
        small in proptest::collection::vec(any::<u64>(), 1..3),
        extra in proptest::collection::vec(any::<u64>(), 0..2),
    ) {
        let (p, n) = AMBIENTS[amb];
        let lim = Limits::default();
        let a = seed_set(p, n, &small);
        let mut both = small.clone();
        both.extend(&extra);
        let b = seed_set(p, n, &both);
        let ca = closure(&a, &lim).unwrap();
        let cb = closure(&b, &lim).unwrap();
        prop_assert!(a.is_subset(&ca));
        prop_assert!(ca.is_subset(&cb));
        prop_assert_eq!(&closure(&ca, &lim).unwrap(), &ca);
        prop_assert!(ca.is_closed());
    }

    #[test]
    fn equivalence_closure_ignores_pair_order(
        pairs in proptest::collection::vec((0u32..40, 0u32..40), 0..60)
            .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        let (a, b) = pairs;
        prop_assert_eq!(equiv_closure(40, a), equiv_closure(40, b));
    }

    #[test]
    fn relabelled_tables_are_found_isomorphic(
        idx in proptest::collection::vec(any::<u64>(), 1..3),
        shuffle in any::<u64>(),
    ) {
        let lim = Limits::default();
        let s = closure(&seed_set(2, 2, &idx), &lim).unwrap();
        let t = build_table(&s, false).unwrap();
        let mut perm: Vec<u32> = (0..t.len() as u32).collect();
        // deterministic shuffle from the drawn word
        let mut x = shuffle | 1;
        for i in (1..perm.len()).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            perm.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let w = permuted(&t, &perm);
        let f = table_iso(&t, &w, &lim).unwrap();
        prop_assert!(f.as_ref().is_some_and(|f| verify_iso(&t, &w, f)));
        let g = table_iso(&w, &t, &lim).unwrap();
        prop_assert!(g.as_ref().is_some_and(|g| verify_iso(&w, &t, g)));
    }

    #[test]
    fn isomorphism_search_is_symmetric(
        a in proptest::collection::vec(any::<u64>(), 1..3),
        b in proptest::collection::vec(any::<u64>(), 1..3),
    ) {
        let lim = Limits::default();
        let ta = build_table(&closure(&seed_set(2, 2, &a), &lim).unwrap(), false).unwrap();
        let tb = build_table(&closure(&seed_set(2, 2, &b), &lim).unwrap(), false).unwrap();
        let ab = table_iso(&ta, &tb, &lim).unwrap();
        let ba = table_iso(&tb, &ta, &lim).unwrap();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if let Some(f) = ab {
            prop_assert!(verify_iso(&ta, &tb, &f));
        }
    }
}

#[test]
fn enumerated_subsemigroups_are_closed_and_stable() {
    let lim = Limits::default();
    let f = Field::new(2, 1).unwrap();
    let all = MatSet::full(&f, 2, &lim).unwrap();
    let t = build_table(&all, false).unwrap();
    let first = enumerate_subsemigroups(&t, false, &lim).unwrap();
    assert_eq!(first, enumerate_subsemigroups(&t, false, &lim).unwrap());
    for &mask in &first {
        let s = MatSet::new(&f, 2, (0..16).filter(|i| mask >> i & 1 == 1).map(|i| all.elements()[i].clone())).unwrap();
        assert!(s.is_closed(), "{s:?}");
    }
    let with_empty = enumerate_subsemigroups(&t, true, &lim).unwrap();
    assert_eq!(with_empty.len(), first.len() + 1);
}
