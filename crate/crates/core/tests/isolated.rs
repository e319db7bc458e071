use matsemi::isolated::{
    enumerate_families, enumerate_isolated, ideal, ideal_generated_by_stratum, idempotent_count, idempotents,
    is_completely_isolated, is_isolated, s_ab_make, EnumMode,
};
use matsemi::{Field, Limits, Matrix};

const AMBIENTS: [(u64, usize); 3] = [(2, 2), (3, 2), (2, 3)];

#[test]
fn every_s_ab_is_closed_and_isolated() {
    let lim = Limits::default();
    for (p, n) in AMBIENTS {
        let f = Field::new(p, 1).unwrap();
        let fams = enumerate_families(&f, n, &lim).unwrap();
        for fam in &fams {
            let s = s_ab_make(fam, &lim).unwrap();
            assert!(!s.is_empty());
            assert!(s.is_closed());
            assert!(is_isolated(&s, &lim).unwrap(), "{fam:?}");
            for a in s.iter() {
                for b in s.iter() {
                    let ab = a * b;
                    assert_eq!(ab.kernel(), b.kernel());
                    assert_eq!(ab.image(), a.image());
                }
            }
        }
    }
}

#[test]
fn family_counts() {
    let lim = Limits::default();
    assert_eq!(enumerate_families(&Field::new(2, 1).unwrap(), 2, &lim).unwrap().len(), 12);
    assert_eq!(enumerate_families(&Field::new(3, 1).unwrap(), 2, &lim).unwrap().len(), 50);
}

#[test]
fn completely_isolated_implies_isolated() {
    let lim = Limits::default();
    for p in [2, 3] {
        let e = enumerate_isolated(&Field::new(p, 1).unwrap(), 2, EnumMode::Predicted, &lim).unwrap();
        for r in &e.records {
            assert_eq!(r.completely_isolated, is_completely_isolated(&r.elements, &lim).unwrap());
            assert!(!r.completely_isolated || r.isolated);
        }
    }
}

#[test]
fn idempotent_count_matches_scan() {
    let lim = Limits::default();
    for (p, n) in AMBIENTS {
        let f = Field::new(p, 1).unwrap();
        let scan = (0..p.pow((n * n) as u32))
            .map(|i| Matrix::from_index(&f, n, n, i))
            .filter(|e| &(e * e) == e)
            .count();
        assert_eq!(scan as u128, idempotent_count(n, p as u128));
        let listed = idempotents(&f, n, &lim).unwrap();
        assert_eq!(listed.len(), scan);
        for pair in listed {
            assert_eq!(pair.e.image(), pair.v1);
            assert_eq!(pair.e.kernel(), pair.v2);
        }
    }
}

#[test]
fn strata_generate_their_ideals() {
    let lim = Limits::default();
    for (p, n) in AMBIENTS {
        let f = Field::new(p, 1).unwrap();
        for k in 1..n {
            assert_eq!(ideal_generated_by_stratum(&f, n, k, &lim).unwrap(), ideal(&f, n, k, &lim).unwrap());
        }
    }
}
