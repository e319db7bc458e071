//! Flags of F^n, the nilpotent semigroups φ(𝓕) they carry, and the way back
//! from a nilpotent semigroup to its flag ψ(S).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{check_cap, Error, Result};
use crate::field::{Field, Scalar};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::semigroup::{build_table, MatSet};
use crate::subspace::{enumerate_subspaces, Subspace};

/// A strict chain 0 = V₀ ⊂ V₁ ⊂ … ⊂ V_k = F^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    chain: Vec<Subspace>,
}

pub type Signature = Vec<usize>;

impl fmt::Display for Flag {
    /// Interior subspaces joined by `|`; the length-1 flag prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let interior = &self.chain[1..self.chain.len() - 1];
        if interior.is_empty() {
            return f.write_str("-");
        }
        for (i, v) in interior.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag({self})")
    }
}

impl Serialize for Flag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Build a flag from a chain, adjoining 0 and F^n when they are missing.
pub fn flag_make(field: &Field, n: usize, subspaces: &[Subspace]) -> Result<Flag> {
    let mut chain = Vec::with_capacity(subspaces.len() + 2);
    for v in subspaces {
        if v.ambient() != n {
            return Err(Error::AmbientMismatch(v.ambient(), n));
        }
        if v.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), v.field().to_string()));
        }
    }
    if subspaces.first().is_none_or(|v| !v.is_zero()) {
        chain.push(Subspace::zero(field, n));
    }
    chain.extend(subspaces.iter().cloned());
    if !chain.last().unwrap().is_full() {
        chain.push(Subspace::full(field, n));
    }
    for w in chain.windows(2) {
        if w[0].dim() >= w[1].dim() || !w[1].contains(&w[0])? {
            return Err(Error::NotAChain(format!("{} is not strictly inside {}", w[0], w[1])));
        }
    }
    Ok(Flag { chain })
}

impl Flag {
    /// Parse the flag text format: interior subspaces joined by `|`.
    pub fn parse(field: &Field, n: usize, s: &str) -> Result<Flag> {
        let parts = s
            .split('|')
            .map(|p| Subspace::parse(field, n, p))
            .collect::<Result<Vec<_>>>()?;
        flag_make(field, n, &parts)
    }

    /// The standard flag of a signature: V_i spanned by the first d₁+…+d_i axes.
    pub fn standard(field: &Field, sig: &[usize]) -> Result<Flag> {
        if sig.is_empty() || sig.contains(&0) {
            return Err(Error::BadSignature {
                sig: sig.to_vec(),
                n: sig.iter().sum(),
            });
        }
        let n = sig.iter().sum();
        let mut acc = 0;
        let mut inner = Vec::new();
        for &d in &sig[..sig.len() - 1] {
            acc += d;
            inner.push(Subspace::coordinate(field, n, &(0..acc).collect::<Vec<_>>()));
        }
        flag_make(field, n, &inner)
    }

    pub fn field(&self) -> &Field {
        self.chain[0].field()
    }

    pub fn ambient(&self) -> usize {
        self.chain[0].ambient()
    }

    /// Number of steps k.
    pub fn len(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// V₀, …, V_k.
    pub fn subspaces(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.chain[i]
    }

    pub fn signature(&self) -> Signature {
        self.chain.windows(2).map(|w| w[1].dim() - w[0].dim()).collect()
    }

    /// Least i with v ∈ V_i.
    pub fn level(&self, v: &[Scalar]) -> usize {
        self.chain.iter().position(|s| s.contains_vector(v)).unwrap()
    }

    /// A basis v₁, …, v_n whose first dim V_i vectors span V_i, completed
    /// greedily stratum by stratum. `seed` vectors, when given, are placed
    /// first inside their stratum.
    pub fn adapted_basis(&self, seed: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        for i in 1..self.chain.len() {
            let mut start = basis.clone();
            start.extend(seed.iter().filter(|v| self.level(v) == i).cloned());
            basis = self.chain[i].basis_extending(&start);
        }
        basis
    }

    /// The adapted basis as the columns of an invertible matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field(), &self.adapted_basis(&[]))
    }
}

pub fn flag_signature(f: &Flag) -> Signature {
    f.signature()
}

fn check_ambient(flag: &Flag, a: &Matrix) -> Result<()> {
    if a.field() != flag.field() {
        return Err(Error::FieldMismatch(flag.field().to_string(), a.field().to_string()));
    }
    if a.rows() != flag.ambient() || a.cols() != flag.ambient() {
        return Err(Error::DimMismatch(format!(
            "{}x{} matrix against a flag of F^{}",
            a.rows(),
            a.cols(),
            flag.ambient()
        )));
    }
    Ok(())
}

/// Whether a(V_i) ⊆ V_{i−1} for every i.
pub fn phi_member(flag: &Flag, a: &Matrix) -> Result<bool> {
    check_ambient(flag, a)?;
    Ok(flag
        .chain
        .windows(2)
        .all(|w| w[1].basis().iter().all(|v| w[0].contains_vector(&a.apply(v)))))
}

/// |φ(𝓕)| = q^(Σ_{i<j} d_i d_j).
pub fn phi_size_exponent(sig: &[usize]) -> usize {
    let mut e = 0;
    for i in 0..sig.len() {
        for j in i + 1..sig.len() {
            e += sig[i] * sig[j];
        }
    }
    e
}

/// Every element of φ(𝓕), in canonical order.
pub fn phi_enumerate(flag: &Flag, limits: &Limits) -> Result<MatSet> {
    let f = flag.field();
    let n = flag.ambient();
    let sig = flag.signature();
    let exp = phi_size_exponent(&sig);
    let size = (f.q() as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    check_cap("flag semigroup size", size, limits.max_elems as u128)?;

    // block of each adapted-basis position
    let block: Vec<usize> = sig.iter().enumerate().flat_map(|(b, &d)| std::iter::repeat_n(b, d)).collect();
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| block[i] < block[j])
        .collect();
    let p = flag.basis_matrix();
    let pinv = p.inverse()?;
    let q = f.q() as u64;
    let mut out = Vec::with_capacity(size as usize);
    for code in 0..size as u64 {
        let mut nmat = Matrix::zero(f, n, n);
        let mut c = code;
        for &(i, j) in &slots {
            nmat.set(i, j, Scalar((c % q) as u8));
            c /= q;
        }
        out.push(&(&p * &nmat) * &pinv);
    }
    MatSet::new(f, n, out)
}

/// Nilpotency degree of a closed set of matrices: the least k with every
/// k-fold product equal to the zero matrix.
pub fn nilpotency_degree(s: &MatSet) -> Result<usize> {
    let t = build_table(s, false)?;
    let zero_is_zero_matrix = t.zero().and_then(|z| t.element(z)).is_some_and(Matrix::is_zero);
    match t.nilpotency_degree() {
        Some(k) if zero_is_zero_matrix => Ok(k),
        _ => Err(Error::NotNilpotent),
    }
}

/// ψ(S): 0 ⊂ ⟨S^{k−1}(F^n)⟩ ⊂ … ⊂ ⟨S(F^n)⟩ ⊂ F^n for a nilpotent
/// subsemigroup of degree k ≥ 2.
pub fn psi(s: &MatSet) -> Result<Flag> {
    let t = build_table(s, false)?;
    let k = nilpotency_degree(s)?;
    if k < 2 {
        return Err(Error::NotNilpotent);
    }
    let f = s.field();
    let n = s.n();
    let powers = t.power_sets();
    let mut chain = Vec::with_capacity(k + 1);
    for i in (1..k).rev() {
        let images: Vec<Vec<Scalar>> = powers[i - 1]
            .ones()
            .flat_map(|id| t.element(id as u32).unwrap().image().basis().to_vec())
            .collect();
        chain.push(Subspace::span(f, n, &images));
    }
    flag_make(f, n, &chain)
}

/// Whether a nilpotent subsemigroup equals φ(ψ(S)).
pub fn is_k_maximal(s: &MatSet, limits: &Limits) -> Result<bool> {
    let flag = psi(s)?;
    Ok(phi_enumerate(&flag, limits)? == *s)
}

/// Whether every subspace of `f2` occurs in `f`.
pub fn consolidation(f: &Flag, f2: &Flag) -> Result<bool> {
    if f.ambient() != f2.ambient() {
        return Err(Error::DimMismatch(format!(
            "flags of F^{} and F^{}",
            f.ambient(),
            f2.ambient()
        )));
    }
    Ok(f2.chain.iter().all(|v| f.chain.contains(v)))
}

/// An element a ∈ φ(𝓕) with a(v) = w, for v ∈ V_i ∖ V_{i−1} and
/// w ∈ V_{i−1} ∖ V_{i−2}, i ≥ 2.
pub fn connecting_map(flag: &Flag, v: &[Scalar], w: &[Scalar]) -> Result<Matrix> {
    let n = flag.ambient();
    if v.len() != n || w.len() != n {
        return Err(Error::DimMismatch("vector length differs from the ambient dimension".into()));
    }
    let i = flag.level(v);
    if i < 2 || flag.level(w) != i - 1 {
        return Err(Error::PreconditionViolated(format!(
            "need v in V_i minus V_(i-1) and w one stratum lower, i >= 2 (v at level {i}, w at level {})",
            flag.level(w)
        )));
    }
    let basis = flag.adapted_basis(&[v.to_vec()]);
    let f = flag.field();
    let p = Matrix::from_columns(f, &basis);
    let pos = basis.iter().position(|b| b == v).unwrap();
    let mut images = vec![vec![Scalar::ZERO; n]; n];
    images[pos] = w.to_vec();
    Ok(&Matrix::from_columns(f, &images) * &p.inverse()?)
}

/// An invertible g with g·V_i = W_i for all i, mapping the adapted basis of
/// `f` onto that of `f2`.
pub fn flag_transporter(f: &Flag, f2: &Flag) -> Result<Matrix> {
    if f.field() != f2.field() {
        return Err(Error::FieldMismatch(f.field().to_string(), f2.field().to_string()));
    }
    let (s1, s2) = (f.signature(), f2.signature());
    if s1 != s2 {
        return Err(Error::SignatureMismatch(s1, s2));
    }
    Ok(&f2.basis_matrix() * &f.basis_matrix().inverse()?)
}

/// Every flag of F^n (all lengths), sorted.
pub fn enumerate_flags(field: &Field, n: usize, limits: &Limits) -> Result<Vec<Flag>> {
    let by_dim: Vec<Vec<Subspace>> = (0..=n)
        .map(|d| enumerate_subspaces(field, n, d, limits))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut chain = vec![Subspace::zero(field, n)];
    extend_flags(&by_dim, &mut chain, &mut out, limits)?;
    out.sort();
    Ok(out)
}

fn extend_flags(by_dim: &[Vec<Subspace>], chain: &mut Vec<Subspace>, out: &mut Vec<Flag>, limits: &Limits) -> Result<()> {
    let top = chain.last().unwrap().clone();
    if top.is_full() {
        out.push(Flag { chain: chain.clone() });
        return check_cap("flag enumeration", out.len() as u128, limits.max_enum as u128);
    }
    for dim_set in &by_dim[top.dim() + 1..] {
        for v in dim_set {
            if v.contains(&top)? {
                chain.push(v.clone());
                extend_flags(by_dim, chain, out, limits)?;
                chain.pop();
            }
        }
    }
    Ok(())
}

/// Every flag of F^n with the given signature, sorted.
pub fn enumerate_flags_with_signature(field: &Field, sig: &[usize], limits: &Limits) -> Result<Vec<Flag>> {
    let n = sig.iter().sum();
    Ok(enumerate_flags(field, n, limits)?
        .into_iter()
        .filter(|fl| fl.signature() == sig)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn axes(f: &Field, n: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(f, n, idx)
    }

    #[test]
    fn making_flags() {
        let f = f2();
        let fl = flag_make(&f, 3, &[axes(&f, 3, &[0]), axes(&f, 3, &[0, 1])]).unwrap();
        assert_eq!(fl.signature(), vec![1, 1, 1]);
        assert!(matches!(
            flag_make(&f, 3, &[axes(&f, 3, &[0]), axes(&f, 3, &[0])]),
            Err(Error::NotAChain(_))
        ));
        let fl = flag_make(&f, 2, &[axes(&f, 2, &[1])]).unwrap();
        assert_eq!(fl.len(), 2);
        assert_eq!(fl.signature(), vec![1, 1]);
    }

    #[test]
    fn flag_text_round_trip() {
        let f = f2();
        let fl = Flag::standard(&f, &[1, 1, 1]).unwrap();
        assert_eq!(fl.to_string(), "1,0,0|1,0,0;0,1,0");
        assert_eq!(Flag::parse(&f, 3, &fl.to_string()).unwrap(), fl);
        let trivial = Flag::standard(&f, &[3]).unwrap();
        assert_eq!(trivial.to_string(), "-");
        assert_eq!(Flag::parse(&f, 3, "-").unwrap(), trivial);
    }

    #[test]
    fn membership() {
        let f = f2();
        let complete = Flag::standard(&f, &[1, 1, 1]).unwrap();
        let upper = Matrix::from_rows(&f, &[&[0, 1, 1], &[0, 0, 1], &[0, 0, 0]]);
        assert!(phi_member(&complete, &upper).unwrap());
        assert!(!phi_member(&complete, &Matrix::identity(&f, 3)).unwrap());
        let line = Flag::standard(&f, &[1, 2]).unwrap();
        assert!(phi_member(&line, &Matrix::unit(&f, 3, 0, 2)).unwrap());
    }

    #[test]
    fn phi_sizes_and_degrees() {
        let f = f2();
        let lim = Limits::default();
        let two = phi_enumerate(&Flag::standard(&f, &[1, 1]).unwrap(), &lim).unwrap();
        assert_eq!(two, MatSet::new(&f, 2, [Matrix::zero(&f, 2, 2), Matrix::unit(&f, 2, 0, 1)]).unwrap());
        let complete = phi_enumerate(&Flag::standard(&f, &[1, 1, 1]).unwrap(), &lim).unwrap();
        assert_eq!(complete.len(), 8);
        assert_eq!(nilpotency_degree(&complete).unwrap(), 3);
        let trivial = phi_enumerate(&Flag::standard(&f, &[3]).unwrap(), &lim).unwrap();
        assert_eq!(trivial.len(), 1);
        assert!(trivial.elements()[0].is_zero());
    }

    #[test]
    fn psi_examples() {
        let f = f2();
        let lim = Limits::default();
        let s = MatSet::new(&f, 2, [Matrix::zero(&f, 2, 2), Matrix::unit(&f, 2, 0, 1)]).unwrap();
        assert_eq!(psi(&s).unwrap(), Flag::standard(&f, &[1, 1]).unwrap());
        let complete = Flag::standard(&f, &[1, 1, 1]).unwrap();
        assert_eq!(psi(&phi_enumerate(&complete, &lim).unwrap()).unwrap(), complete);
        let zero = MatSet::new(&f, 2, [Matrix::zero(&f, 2, 2)]).unwrap();
        assert_eq!(psi(&zero), Err(Error::NotNilpotent));
    }

    #[test]
    fn degrees_and_maximality() {
        let f = f2();
        let lim = Limits::default();
        let id = MatSet::new(&f, 2, [Matrix::identity(&f, 2)]).unwrap();
        assert_eq!(nilpotency_degree(&id), Err(Error::NotNilpotent));
        let s = MatSet::new(&f, 3, [Matrix::zero(&f, 3, 3), Matrix::unit(&f, 3, 0, 2)]).unwrap();
        assert!(!is_k_maximal(&s, &lim).unwrap());
        assert_eq!(phi_enumerate(&psi(&s).unwrap(), &lim).unwrap().len(), 4);
        let zi = MatSet::new(&f, 2, [Matrix::zero(&f, 2, 2), Matrix::identity(&f, 2)]).unwrap();
        assert_eq!(is_k_maximal(&zi, &lim), Err(Error::NotNilpotent));
        let complete = phi_enumerate(&Flag::standard(&f, &[1, 1, 1]).unwrap(), &lim).unwrap();
        assert!(is_k_maximal(&complete, &lim).unwrap());
    }

    #[test]
    fn consolidation_examples() {
        let f = f2();
        let lim = Limits::default();
        let complete = Flag::standard(&f, &[1, 1, 1]).unwrap();
        let line = Flag::standard(&f, &[1, 2]).unwrap();
        assert!(consolidation(&complete, &complete).unwrap());
        assert!(consolidation(&complete, &line).unwrap());
        assert!(phi_enumerate(&line, &lim).unwrap().is_subset(&phi_enumerate(&complete, &lim).unwrap()));
        let a = flag_make(&f, 2, &[axes(&f, 2, &[0])]).unwrap();
        let b = flag_make(&f, 2, &[axes(&f, 2, &[1])]).unwrap();
        assert!(!consolidation(&a, &b).unwrap());
        let (pa, pb) = (phi_enumerate(&a, &lim).unwrap(), phi_enumerate(&b, &lim).unwrap());
        assert!(!pa.is_subset(&pb) && !pb.is_subset(&pa));
    }

    #[test]
    fn connecting_maps() {
        let f = f2();
        let complete = Flag::standard(&f, &[1, 1, 1]).unwrap();
        let e = crate::subspace::standard_basis(3);
        assert_eq!(connecting_map(&complete, &e[2], &e[1]).unwrap(), Matrix::unit(&f, 3, 1, 2));
        assert_eq!(connecting_map(&complete, &e[1], &e[0]).unwrap(), Matrix::unit(&f, 3, 0, 1));
        assert!(matches!(
            connecting_map(&complete, &e[0], &e[0]),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn transporters() {
        let f = f2();
        let a = flag_make(&f, 2, &[axes(&f, 2, &[0])]).unwrap();
        let b = flag_make(&f, 2, &[axes(&f, 2, &[1])]).unwrap();
        assert_eq!(flag_transporter(&a, &a).unwrap(), Matrix::identity(&f, 2));
        assert_eq!(flag_transporter(&a, &b).unwrap(), Matrix::from_rows(&f, &[&[0, 1], &[1, 0]]));
        let s12 = Flag::standard(&f, &[1, 2]).unwrap();
        let s21 = Flag::standard(&f, &[2, 1]).unwrap();
        assert!(matches!(flag_transporter(&s12, &s21), Err(Error::SignatureMismatch(_, _))));
    }

    #[test]
    fn flag_counts() {
        let lim = Limits::default();
        // 1 trivial + 7 lines + 7 planes + 21 complete flags
        assert_eq!(enumerate_flags(&f2(), 3, &lim).unwrap().len(), 36);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(enumerate_flags(&f3, 2, &lim).unwrap().len(), 5);
    }
}
