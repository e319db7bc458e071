use matsemi::flags::{enumerate_flags, flag_transporter, nilpotency_degree, phi_enumerate, psi, Flag};
use matsemi::semigroup::{build_table, closure, enumerate_subsemigroups, MatSet, Universe};
use matsemi::{Field, Limits, Matrix, Scalar};
use proptest::prelude::*;

fn long_flags(f: &Field, n: usize) -> Vec<Flag> {
    enumerate_flags(f, n, &Limits::default())
        .unwrap()
        .into_iter()
        .filter(|fl| fl.signature().len() >= 2)
        .collect()
}

#[test]
fn psi_inverts_phi_and_degree_is_length() {
    let lim = Limits::default();
    for (p, n) in [(2, 3), (3, 2)] {
        let f = Field::new(p, 1).unwrap();
        for fl in long_flags(&f, n) {
            let phi = phi_enumerate(&fl, &lim).unwrap();
            assert_eq!(psi(&phi).unwrap(), fl);
            assert_eq!(nilpotency_degree(&phi).unwrap(), fl.signature().len());
        }
    }
}

#[test]
fn closed_sets_are_nilpotent_exactly_when_their_elements_are() {
    let lim = Limits::default();
    let f = Field::new(2, 1).unwrap();
    let all = MatSet::full(&f, 2, &lim).unwrap();
    let u = Universe::new(&f, 2, &lim).unwrap();
    let t = build_table(&all, false).unwrap();
    for mask in enumerate_subsemigroups(&t, false, &lim).unwrap() {
        let s = MatSet::new(&f, 2, (0..16).filter(|i| mask >> i & 1 == 1).map(|i| all.elements()[i].clone())).unwrap();
        let elementwise = s.iter().all(|a| u.is_nilpotent(u.id(a)));
        assert_eq!(nilpotency_degree(&s).is_ok(), elementwise, "{s:?}");
    }
}

#[test]
fn phi_is_a_subalgebra() {
    let lim = Limits::default();
    let f2 = Field::new(2, 1).unwrap();
    let f3 = Field::new(3, 1).unwrap();
    let mut flags = long_flags(&f2, 3);
    flags.extend(long_flags(&f3, 2));
    flags.push(Flag::standard(&f2, &[1, 1, 1, 1]).unwrap());
    for fl in flags {
        let phi = phi_enumerate(&fl, &lim).unwrap();
        let f = fl.field().clone();
        for a in phi.iter() {
            for lambda in f.elements() {
                assert!(phi.contains(&a.scale(lambda)));
            }
            for b in phi.iter() {
                assert!(phi.contains(&a.checked_add(b).unwrap()));
            }
        }
    }
}

#[test]
fn transport_carries_phi_onto_phi() {
    let lim = Limits::default();
    let f = Field::new(2, 1).unwrap();
    let check = |a: &Flag, b: &Flag| {
        let g = flag_transporter(a, b).unwrap();
        let gi = g.inverse().unwrap();
        let pa = phi_enumerate(a, &lim).unwrap();
        let pb = phi_enumerate(b, &lim).unwrap();
        let image = MatSet::new(&f, a.ambient(), pa.iter().map(|m| &(&g * m) * &gi)).unwrap();
        assert_eq!(image, pb, "{a} -> {b}");
    };
    let three = long_flags(&f, 3);
    for a in &three {
        for b in three.iter().filter(|b| b.signature() == a.signature()) {
            check(a, b);
        }
    }
    for sig in [&[1, 1, 2][..], &[2, 2], &[1, 1, 1, 1]] {
        let std = Flag::standard(&f, sig).unwrap();
        for b in long_flags(&f, 4).iter().filter(|b| b.signature() == sig) {
            check(&std, b);
        }
    }
}

/// A random nilpotent seed: strictly upper triangular matrices conjugated
/// by one invertible matrix.
fn nilpotent_seed(p: u64, n: usize, words: &[u64], g: u64) -> MatSet {
    let f = Field::new(p, 1).unwrap();
    let total = p.pow((n * n) as u32);
    let g = (0..total).map(|k| Matrix::from_index(&f, n, n, (g + k) % total)).find(|m| m.is_invertible()).unwrap();
    let gi = g.inverse().unwrap();
    let mats = words.iter().map(|&w| {
        let mut m = Matrix::zero(&f, n, n);
        let mut w = w;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, Scalar((w % p) as u8));
                w /= p;
            }
        }
        &(&gi * &m) * &g
    });
    MatSet::new(&f, n, mats).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn nilpotent_closures_sit_in_phi_of_psi(
        amb in prop_oneof![Just((2u64, 3usize)), Just((2, 4)), Just((3, 3))],
        words in proptest::collection::vec(any::<u64>(), 1..4),
        g in any::<u64>(),
    ) {
        let (p, n) = amb;
        let lim = Limits::default();
        let s = closure(&nilpotent_seed(p, n, &words, g), &lim).unwrap();
        let nd = nilpotency_degree(&s).unwrap();
        prop_assert!(nd <= n);
        if nd >= 2 {
            let phi = phi_enumerate(&psi(&s).unwrap(), &lim).unwrap();
            prop_assert!(s.is_subset(&phi));
        }
    }
}
