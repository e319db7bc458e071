use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flags::{phi_enumerate, Flag, Signature};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::semigroup::{build_table, preorder_depths, MatSet, SemigroupTable};
use crate::subspace::Subspace;

use super::superrank::Derived;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecMethod {
    Products,
    Kernels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LlMethod {
    Products,
    Images,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preorder {
    Prec,
    Ll,
}

/// An r-maximal nilpotent semigroup T = φ(𝓕), r ≥ 2, with its table and
/// the per-element data the invariants are built from.
pub struct NilContext {
    pub(crate) flag: Flag,
    pub(crate) elements: MatSet,
    pub(crate) table: SemigroupTable,
    pub(crate) r: usize,
    pub(crate) sig: Signature,
    pub(crate) zero: u32,
    /// `{ C : AC = 0 }` for each A.
    pub(crate) right_killers: Vec<FixedBitSet>,
    /// `{ C : CA = 0 }` for each A.
    pub(crate) left_killers: Vec<FixedBitSet>,
    /// ker A ∩ V_{r−1}.
    kernel_cut: Vec<Subspace>,
    /// Im A + V₁.
    image_reach: Vec<Subspace>,
    images: Vec<Subspace>,
    /// T² (the decomposable elements).
    pub(crate) square: FixedBitSet,
    pub(crate) derived: OnceLock<Derived>,
}

impl NilContext {
    pub fn new(flag: &Flag, limits: &Limits) -> Result<NilContext> {
        let r = flag.len();
        if r < 2 {
            return Err(Error::PreconditionViolated("nilpotent contexts need flags of length >= 2".into()));
        }
        let elements = phi_enumerate(flag, limits)?;
        let table = build_table(&elements, false)?;
        if table.nilpotency_degree() != Some(r) {
            return Err(Error::InvariantViolation(format!(
                "phi of a length-{r} flag has nilpotency degree {:?}",
                table.nilpotency_degree()
            )));
        }
        let m = table.len();
        let zero = table.zero().ok_or_else(|| Error::Internal("flag semigroup without zero".into()))?;
        let mut right_killers = vec![FixedBitSet::with_capacity(m); m];
        let mut left_killers = vec![FixedBitSet::with_capacity(m); m];
        for a in 0..m as u32 {
            for c in 0..m as u32 {
                if table.mul(a, c) == zero {
                    right_killers[a as usize].insert(c as usize);
                    left_killers[c as usize].insert(a as usize);
                }
            }
        }
        let top = flag.get(r - 1);
        let v1 = flag.get(1);
        let mut kernel_cut = Vec::with_capacity(m);
        let mut image_reach = Vec::with_capacity(m);
        let mut images = Vec::with_capacity(m);
        for a in elements.iter() {
            let im = a.image();
            kernel_cut.push(a.kernel().intersect(top)?);
            image_reach.push(im.sum(v1)?);
            images.push(im);
        }
        let all = table.all();
        let square = table.product_set(&all, &all);
        Ok(NilContext {
            flag: flag.clone(),
            sig: flag.signature(),
            elements,
            table,
            r,
            zero,
            right_killers,
            left_killers,
            kernel_cut,
            image_reach,
            images,
            square,
            derived: OnceLock::new(),
        })
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    pub fn elements(&self) -> &MatSet {
        &self.elements
    }

    pub fn table(&self) -> &SemigroupTable {
        &self.table
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn signature(&self) -> &[usize] {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn zero_id(&self) -> u32 {
        self.zero
    }

    pub fn id(&self, a: &Matrix) -> Result<u32> {
        self.elements.position(a).map(|i| i as u32).ok_or(Error::NotInContext)
    }

    pub fn matrix(&self, id: u32) -> &Matrix {
        &self.elements.elements()[id as usize]
    }

    pub(crate) fn mask_to_set(&self, mask: &FixedBitSet) -> MatSet {
        MatSet::new(
            self.elements.field(),
            self.elements.n(),
            mask.ones().map(|i| self.matrix(i as u32).clone()),
        )
        .expect("subset of a valid set")
    }

    pub fn prec_ids(&self, a: u32, b: u32, method: PrecMethod) -> bool {
        let (a, b) = (a as usize, b as usize);
        match method {
            PrecMethod::Products => self.right_killers[a].is_subset(&self.right_killers[b]),
            PrecMethod::Kernels => self.kernel_cut[b].contains(&self.kernel_cut[a]).unwrap(),
        }
    }

    /// The image criterion is Im(B) ⊆ Im(A) + V₁.
    pub fn ll_ids(&self, a: u32, b: u32, method: LlMethod) -> bool {
        let (a, b) = (a as usize, b as usize);
        match method {
            LlMethod::Products => self.left_killers[a].is_subset(&self.left_killers[b]),
            LlMethod::Images => self.image_reach[a].contains(&self.images[b]).unwrap(),
        }
    }

    /// A ≺ B: AC = 0 implies BC = 0 for all C ∈ T.
    pub fn prec(&self, a: &Matrix, b: &Matrix, method: PrecMethod) -> Result<bool> {
        Ok(self.prec_ids(self.id(a)?, self.id(b)?, method))
    }

    /// A ≪ B: CA = 0 implies CB = 0 for all C ∈ T.
    pub fn ll(&self, a: &Matrix, b: &Matrix, method: LlMethod) -> Result<bool> {
        Ok(self.ll_ids(self.id(a)?, self.id(b)?, method))
    }

    /// Depth of an element by the dimension criteria: codim of ker A ∩ V_{r−1}
    /// in V_{r−1} for ≺, and dim Im A − dim(Im A ∩ V₁) for ≪.
    pub fn depth_by_dimension(&self, which: Preorder, a: u32) -> usize {
        let a = a as usize;
        match which {
            Preorder::Prec => self.flag.get(self.r - 1).dim() - self.kernel_cut[a].dim(),
            Preorder::Ll => self.image_reach[a].dim() - self.flag.get(1).dim(),
        }
    }

    /// Depth of every element in the order-theoretic sense, from the
    /// product definition of the preorder.
    pub fn depth_by_order(&self, which: Preorder) -> Vec<usize> {
        let m = self.len();
        match which {
            Preorder::Prec => preorder_depths(m, |i, j| self.prec_ids(i as u32, j as u32, PrecMethod::Products)),
            Preorder::Ll => preorder_depths(m, |i, j| self.ll_ids(i as u32, j as u32, LlMethod::Products)),
        }
    }

    pub(crate) fn depth_mask(&self, which: Preorder, i: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        for a in 0..self.len() as u32 {
            if self.depth_by_dimension(which, a) == i {
                s.insert(a as usize);
            }
        }
        s
    }

    /// M_i^≺ or M_i^≪ for i ∈ {0, 1, 2}.
    pub fn depth_sets(&self, which: Preorder, i: usize) -> Result<MatSet> {
        if i > 2 {
            return Err(Error::PreconditionViolated(format!("depth {i} is outside 0..=2")));
        }
        Ok(self.mask_to_set(&self.depth_mask(which, i)))
    }

    pub fn is_indecomposable_id(&self, a: u32) -> bool {
        !self.square.contains(a as usize)
    }

    /// A is not a product of two elements of T.
    pub fn is_indecomposable(&self, a: &Matrix) -> Result<bool> {
        Ok(self.is_indecomposable_id(self.id(a)?))
    }

    /// `{ x a : x ∈ left } ` with `None` standing for {1}.
    pub(crate) fn left_times(&self, left: Option<&FixedBitSet>, a: u32) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        match left {
            None => s.insert(a as usize),
            Some(l) => {
                for x in l.ones() {
                    s.insert(self.table.mul(x as u32, a) as usize);
                }
            }
        }
        s
    }

    /// P·{a}·Q as a set of products; `None` for P or Q means {1}.
    pub(crate) fn sandwich(&self, left: Option<&FixedBitSet>, a: u32, right: Option<&FixedBitSet>) -> FixedBitSet {
        let la = self.left_times(left, a);
        match right {
            None => la,
            Some(r) => self.table.product_set(&la, r),
        }
    }

    pub(crate) fn has_nonzero(&self, s: &FixedBitSet) -> bool {
        s.ones().any(|x| x as u32 != self.zero)
    }

    /// T^k as a product set, `None` for k = 0.
    pub(crate) fn power(&self, k: usize) -> Option<FixedBitSet> {
        if k == 0 {
            return None;
        }
        let all = self.table.all();
        let mut p = all.clone();
        for _ in 1..k {
            p = self.table.product_set(&p, &all);
        }
        Some(p)
    }
}
