//! Conjugacy in M(n, F): stability index, the core of a matrix, the
//! similarity and semigroup-conjugacy deciders, explicit primary-conjugacy
//! witnesses, and the chain of primarily conjugate matrices joining a
//! matrix to its core.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::semigroup::{MatSet, Partition, Universe};
use crate::similarity::{similar, similarity_key};
use crate::subspace::{projection, Subspace};

fn check_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn check_square(a: &Matrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::DimMismatch("expected a square matrix".into()))
    }
}

/// Least t ≥ 0 with rank(Aᵗ) = rank(Aᵗ⁺¹).
pub fn stability_index(a: &Matrix) -> Result<usize> {
    check_square(a)?;
    let mut power = Matrix::identity(a.field(), a.rows());
    let mut rank = a.rows();
    for t in 0..=a.rows() {
        let next = &power * a;
        let next_rank = next.rank();
        if next_rank == rank {
            return Ok(t);
        }
        power = next;
        rank = next_rank;
    }
    Err(Error::Internal("rank chain failed to stabilize".into()))
}

/// Fitting-style splitting F^n = Im(Aᵗ) ⊕ ker(Aᵗ) and the core A_s, which
/// agrees with A on the image and kills the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreDecomposition {
    pub t: usize,
    pub image_t: Subspace,
    pub kernel_t: Subspace,
    pub core: Matrix,
}

pub fn core(a: &Matrix) -> Result<CoreDecomposition> {
    let t = stability_index(a)?;
    let at = a.pow(t as u32)?;
    let image_t = at.image();
    let kernel_t = at.kernel();
    let e = projection(&image_t, &kernel_t)?;
    Ok(CoreDecomposition {
        t,
        core: a * &e,
        image_t,
        kernel_t,
    })
}

/// Conjugacy under GL(n, F), i.e. similarity.
pub fn gl_conjugate(a: &Matrix, b: &Matrix) -> Result<bool> {
    similar(a, b)
}

/// Conjugacy in the semigroup M(n, F): the cores are similar.
pub fn sg_conjugate(a: &Matrix, b: &Matrix) -> Result<bool> {
    check_pair(a, b)?;
    similar(&core(a)?.core, &core(b)?.core)
}

/// The lexicographically first pair (X, Y) with A = XY and B = YX, scanning
/// M(n, F) in index order; `None` when no pair exists.
pub fn primary_conjugate_witness(a: &Matrix, b: &Matrix, limits: &Limits) -> Result<Option<(Matrix, Matrix)>> {
    check_pair(a, b)?;
    let u = Universe::with_table(a.field(), a.rows(), limits)?;
    let (ia, ib) = (u.id(a), u.id(b));
    let m = u.len() as u32;
    let found = (0..m)
        .into_par_iter()
        .find_first(|&x| (0..m).any(|y| u.mul(x, y) == ia && u.mul(y, x) == ib))
        .map(|x| {
            let y = (0..m).find(|&y| u.mul(x, y) == ia && u.mul(y, x) == ib).unwrap();
            (u.element(x).clone(), u.element(y).clone())
        });
    Ok(found)
}

/// Matrices B₁ = A, …, B_m = A_s where each consecutive pair is primarily
/// conjugate through the recorded witnesses: u_i v_i = B_i, v_i u_i = B_{i+1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyChain {
    pub steps: Vec<Matrix>,
    pub witnesses: Vec<(Matrix, Matrix)>,
}

impl ConjugacyChain {
    /// Index of the first link that fails to replay, if any.
    pub fn first_broken_link(&self) -> Option<usize> {
        if self.witnesses.len() + 1 != self.steps.len() {
            return Some(self.witnesses.len().min(self.steps.len()));
        }
        self.witnesses.iter().enumerate().position(|(i, (u, v))| {
            (u * v) != self.steps[i] || (v * u) != self.steps[i + 1]
        })
    }

    pub fn is_valid(&self) -> bool {
        self.first_broken_link().is_none()
    }
}

/// B_i = e(V_i, V'_i)·A·e(V_{i−1}, V'_{i−1}) with V_i = Im(Aⁱ), V'_0 = 0,
/// V'_i = ker(Aⁱ) for i ≥ t and the standard complement of V_i below t.
pub fn conjugacy_chain(a: &Matrix) -> Result<ConjugacyChain> {
    let t = stability_index(a)?;
    let f = a.field();
    let n = a.rows();
    let mut idem = vec![Matrix::identity(f, n)];
    let mut power = Matrix::identity(f, n);
    for i in 1..=t + 1 {
        power = &power * a;
        let image = power.image();
        let complement = if i >= t { power.kernel() } else { image.standard_complement() };
        idem.push(projection(&image, &complement)?);
    }
    let steps: Vec<Matrix> = (1..=t + 1).map(|i| &(&idem[i] * a) * &idem[i - 1]).collect();
    let witnesses = (1..=t).map(|i| (idem[i].clone(), steps[i - 1].clone())).collect();
    let chain = ConjugacyChain { steps, witnesses };
    if let Some(i) = chain.first_broken_link() {
        return Err(Error::Internal(format!("conjugacy chain breaks at link {i}")));
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassMethod {
    Core,
    Brute,
}

/// Semigroup-conjugacy classes of M(n, F_q) over the canonical element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgClasses {
    pub elements: MatSet,
    pub partition: Partition,
}

impl SgClasses {
    pub fn classes(&self) -> Vec<Vec<&Matrix>> {
        self.partition
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| &self.elements.elements()[i as usize]).collect())
            .collect()
    }

    /// Class sizes in ascending order.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.partition.classes().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }
}

pub fn sg_classes(field: &Field, n: usize, method: ClassMethod, limits: &Limits) -> Result<SgClasses> {
    match method {
        ClassMethod::Core => {
            let universe = Universe::new(field, n, limits)?;
            let elements = MatSet::new(field, n, universe.elements().iter().cloned())?;
            let keys: Vec<Vec<Vec<u8>>> = elements
                .elements()
                .par_iter()
                .map(|a| similarity_key(&core(a)?.core))
                .collect::<Result<_>>()?;
            let mut partition = Partition::singletons(elements.len());
            let mut first: BTreeMap<&Vec<Vec<u8>>, u32> = BTreeMap::new();
            for (i, k) in keys.iter().enumerate() {
                let r = *first.entry(k).or_insert(i as u32);
                partition.union(r, i as u32);
            }
            Ok(SgClasses { elements, partition })
        }
        ClassMethod::Brute => brute_classes(&Universe::with_table(field, n, limits)?),
    }
}

/// Transitive closure of primary conjugacy, read off the universe's
/// multiplication: XY ~ YX for every pair.
pub fn brute_classes(u: &Universe) -> Result<SgClasses> {
    let elements = MatSet::new(u.field(), u.n(), u.elements().iter().cloned())?;
    let m = elements.len();
    let by_index = (0..m as u32)
        .into_par_iter()
        .fold(
            || Partition::singletons(m),
            |mut p, x| {
                for y in 0..m as u32 {
                    p.union(u.mul(x, y), u.mul(y, x));
                }
                p
            },
        )
        .reduce(
            || Partition::singletons(m),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    let canonical: Vec<u32> = u
        .elements()
        .iter()
        .map(|x| elements.position(x).unwrap() as u32)
        .collect();
    let mut partition = Partition::singletons(m);
    for i in 0..m as u32 {
        partition.union(canonical[i as usize], canonical[by_index.rep(i) as usize]);
    }
    Ok(SgClasses { elements, partition })
}
