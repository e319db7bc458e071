use matsemi::similarity::similar;
use matsemi::subspace::{enumerate_subspaces, Subspace};
use matsemi::{Field, Limits, Matrix, Scalar};
use proptest::prelude::*;

const SMALL_FIELDS: [(u64, u32); 7] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)];

#[test]
fn field_axioms_exhaustive() {
    for (p, k) in SMALL_FIELDS {
        let f = Field::new(p, k).unwrap();
        let els: Vec<Scalar> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, Scalar::ZERO), a);
            assert_eq!(f.mul(a, Scalar::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn frobenius_is_additive() {
    for (p, k) in SMALL_FIELDS {
        let f = Field::new(p, k).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
            }
        }
    }
}

/// Number of d-subspaces of F_q^n by the product formula.
fn gaussian_product(n: u32, d: u32, q: u128) -> u128 {
    let num: u128 = (0..d).map(|i| q.pow(n - i) - 1).product();
    let den: u128 = (0..d).map(|i| q.pow(d - i) - 1).product();
    num / den
}

#[test]
fn subspace_counts_match_product_formula() {
    let lim = Limits::default();
    for (p, k) in [(2, 1), (3, 1), (2, 2)] {
        let f = Field::new(p, k).unwrap();
        for n in 0..=4usize {
            for d in 0..=n {
                let got = enumerate_subspaces(&f, n, d, &lim).unwrap().len() as u128;
                assert_eq!(got, gaussian_product(n as u32, d as u32, f.q() as u128), "q={} n={n} d={d}", f.q());
            }
        }
    }
}

#[test]
fn rank1_factorization_is_a_bijection() {
    for p in [2, 3] {
        let f = Field::new(p, 1).unwrap();
        for (r, c) in [(2, 2), (2, 3)] {
            let total = p.pow((r * c) as u32);
            let mut seen = std::collections::HashSet::new();
            for i in 0..total {
                let m = Matrix::from_index(&f, r, c, i);
                if m.rank() != 1 {
                    assert!(m.rank1_factor().is_err());
                    continue;
                }
                let fac = m.rank1_factor().unwrap();
                assert_eq!(fac.reassemble(&f), m);
                assert!(seen.insert(fac));
            }
        }
    }
}

#[test]
fn similarity_agrees_with_conjugation_search() {
    for p in [2, 3] {
        let f = Field::new(p, 1).unwrap();
        let all: Vec<Matrix> = (0..p.pow(4)).map(|i| Matrix::from_index(&f, 2, 2, i)).collect();
        let gl: Vec<(Matrix, Matrix)> = all
            .iter()
            .filter(|g| g.is_invertible())
            .map(|g| (g.clone(), g.inverse().unwrap()))
            .collect();
        for a in &all {
            let orbit: std::collections::HashSet<Matrix> = gl.iter().map(|(g, gi)| &(gi * a) * g).collect();
            for b in &all {
                assert_eq!(similar(a, b).unwrap(), orbit.contains(b), "{a} vs {b}");
            }
        }
    }
}

fn field_and_matrix(n: usize) -> impl Strategy<Value = (u64, Vec<u64>)> {
    prop_oneof![Just(2u64), Just(3u64), Just(5u64)].prop_flat_map(move |p| {
        let cells = p.pow((n * n) as u32);
        (Just(p), proptest::collection::vec(0..cells, 2))
    })
}

proptest! {
    #[test]
    fn rank_of_product_is_bounded(n in 1usize..=3, seed in field_and_matrix(3)) {
        let (p, idx) = seed;
        let f = Field::new(p, 1).unwrap();
        let cells = p.pow((n * n) as u32);
        let a = Matrix::from_index(&f, n, n, idx[0] % cells);
        let b = Matrix::from_index(&f, n, n, idx[1] % cells);
        prop_assert!((&a * &b).rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn canonical_form_is_idempotent_and_faithful(
        vs in proptest::collection::vec(proptest::collection::vec(0u8..3, 4), 0..4),
        ws in proptest::collection::vec(proptest::collection::vec(0u8..3, 4), 0..4),
    ) {
        let f = Field::new(3, 1).unwrap();
        let conv = |v: &Vec<Vec<u8>>| v.iter().map(|r| r.iter().map(|&x| Scalar(x)).collect()).collect::<Vec<Vec<Scalar>>>();
        let u = Subspace::span(&f, 4, &conv(&vs));
        let w = Subspace::span(&f, 4, &conv(&ws));
        prop_assert_eq!(&u.canonicalize(), &u);
        let mutual = u.contains(&w).unwrap() && w.contains(&u).unwrap();
        prop_assert_eq!(mutual, u.basis() == w.basis());
        prop_assert_eq!(mutual, u == w);
    }
}
