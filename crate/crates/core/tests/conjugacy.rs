use matsemi::conjugacy::{conjugacy_chain, core, gl_conjugate, sg_classes, sg_conjugate, ClassMethod};
use matsemi::semigroup::Universe;
use matsemi::{Field, Limits, Matrix};
use proptest::prelude::*;

fn all(f: &Field, n: usize) -> Vec<Matrix> {
    (0..(f.q() as u64).pow((n * n) as u32)).map(|i| Matrix::from_index(f, n, n, i)).collect()
}

#[test]
fn semigroup_conjugacy_is_the_brute_force_equivalence() {
    let lim = Limits::default();
    for (p, n) in [(2, 2), (3, 2), (2, 3)] {
        let f = Field::new(p, 1).unwrap();
        let brute = sg_classes(&f, n, ClassMethod::Brute, &lim).unwrap();
        let els = brute.elements.elements();
        // a sample of rows keeps (3, 2) quick; every column is checked
        let step = if els.len() > 100 { 7 } else { 1 };
        for i in (0..els.len()).step_by(step) {
            assert!(sg_conjugate(&els[i], &els[i]).unwrap());
            for j in 0..els.len() {
                let same = brute.partition.same(i as u32, j as u32);
                assert_eq!(sg_conjugate(&els[i], &els[j]).unwrap(), same, "{} vs {}", els[i], els[j]);
            }
        }
    }
}

#[test]
fn similarity_refines_semigroup_conjugacy() {
    for p in [2, 3] {
        let f = Field::new(p, 1).unwrap();
        let ms = all(&f, 2);
        for a in &ms {
            for b in &ms {
                if gl_conjugate(a, b).unwrap() {
                    assert!(sg_conjugate(a, b).unwrap());
                }
            }
        }
    }
}

#[test]
fn core_is_idempotent_and_conjugate_to_its_source() {
    for (p, n) in [(2, 2), (3, 2), (2, 3)] {
        let f = Field::new(p, 1).unwrap();
        for a in all(&f, n) {
            let c = core(&a).unwrap().core;
            assert_eq!(core(&c).unwrap().core, c);
            assert!(sg_conjugate(&a, &c).unwrap());
        }
    }
}

#[test]
fn every_chain_replays() {
    let f = Field::new(2, 1).unwrap();
    for a in all(&f, 3) {
        let ch = conjugacy_chain(&a).unwrap();
        assert!(ch.is_valid(), "{a}: link {:?}", ch.first_broken_link());
        assert_eq!(ch.steps.first(), Some(&a));
        assert_eq!(ch.steps.last(), Some(&core(&a).unwrap().core));
    }
}

#[test]
fn nilpotents_share_the_class_of_zero() {
    let lim = Limits::default();
    let f = Field::new(2, 1).unwrap();
    let c = sg_classes(&f, 2, ClassMethod::Core, &lim).unwrap();
    let u = Universe::new(&f, 2, &lim).unwrap();
    let zero = c.elements.position(&Matrix::zero(&f, 2, 2)).unwrap() as u32;
    let nil: Vec<u32> = (0..16).filter(|&x| u.is_nilpotent(x)).collect();
    assert_eq!(nil.len(), 4);
    for x in nil {
        let pos = c.elements.position(u.element(x)).unwrap() as u32;
        assert!(c.partition.same(pos, zero));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn core_commutes_with_conjugation(p in prop_oneof![Just(2u64), Just(3)], n in 2usize..=3, a in any::<u64>(), g in any::<u64>()) {
        let f = Field::new(p, 1).unwrap();
        let total = p.pow((n * n) as u32);
        let a = Matrix::from_index(&f, n, n, a % total);
        // walk forward from the drawn index to the next invertible matrix
        let g = (0..total).map(|k| Matrix::from_index(&f, n, n, (g + k) % total)).find(|m| m.is_invertible()).unwrap();
        let lhs = core(&a.conjugate_by(&g).unwrap()).unwrap().core;
        let rhs = core(&a).unwrap().core.conjugate_by(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
