//! Rank strata, idempotents, and the isolated subsemigroups of M(n, F_q).
//!
//! A subsemigroup S is *isolated* when x^m ∈ S forces x ∈ S, and
//! *completely isolated* when xy ∈ S forces x ∈ S or y ∈ S. Besides M, GL
//! and the ideal I_{n−1} of singular matrices, the isolated ones are the
//! S(𝒜, ℬ): rank n−1 matrices whose image is a hyperplane from 𝒜 and whose
//! kernel is a line from ℬ, no line of ℬ lying in a hyperplane of 𝒜.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::field::Field;
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::semigroup::{build_table, closure, enumerate_subsemigroups, MatSet, Universe};
use crate::subspace::{enumerate_subspaces, gaussian_binomial, projection, Subspace};

/// D_i: the matrices of rank exactly `i`.
pub fn rank_stratum(field: &Field, n: usize, i: usize, limits: &Limits) -> Result<MatSet> {
    let all = MatSet::full(field, n, limits)?;
    MatSet::new(field, n, all.iter().filter(|m| m.rank() == i).cloned())
}

/// I_i: the matrices of rank at most `i`.
pub fn ideal(field: &Field, n: usize, i: usize, limits: &Limits) -> Result<MatSet> {
    let all = MatSet::full(field, n, limits)?;
    MatSet::new(field, n, all.iter().filter(|m| m.rank() <= i).cloned())
}

/// The subsemigroup generated by D_k.
pub fn ideal_generated_by_stratum(field: &Field, n: usize, k: usize, limits: &Limits) -> Result<MatSet> {
    if k == 0 || k >= n {
        return Err(Error::BadK { k, n });
    }
    closure(&rank_stratum(field, n, k, limits)?, limits)
}

/// An idempotent e together with its image V1 and kernel V2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentPair {
    #[serde(rename = "V1")]
    pub v1: Subspace,
    #[serde(rename = "V2")]
    pub v2: Subspace,
    pub e: Matrix,
}

impl IdempotentPair {
    /// e(V1, V2), the projection onto V1 along V2.
    pub fn new(v1: &Subspace, v2: &Subspace) -> Result<IdempotentPair> {
        Ok(IdempotentPair {
            v1: v1.clone(),
            v2: v2.clone(),
            e: projection(v1, v2)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.v1.dim()
    }
}

/// Every idempotent of M(n, F_q), in canonical matrix order.
pub fn idempotents(field: &Field, n: usize, limits: &Limits) -> Result<Vec<IdempotentPair>> {
    let all = MatSet::full(field, n, limits)?;
    Ok(all
        .iter()
        .filter(|e| &(*e * *e) == *e)
        .map(|e| IdempotentPair {
            v1: e.image(),
            v2: e.kernel(),
            e: e.clone(),
        })
        .collect())
}

/// Σ_d [n choose d]_q · q^{d(n−d)}: one idempotent per pair of complementary subspaces.
pub fn idempotent_count(n: usize, q: u128) -> u128 {
    (0..=n)
        .map(|d| gaussian_binomial(n, d, q) * q.pow((d * (n - d)) as u32))
        .sum()
}

/// A nonempty set 𝒜 of hyperplanes and a nonempty set ℬ of lines with no
/// line of ℬ inside a hyperplane of 𝒜. Both lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubspacePairFamily {
    #[serde(rename = "A_family")]
    pub a_family: Vec<Subspace>,
    #[serde(rename = "B_family")]
    pub b_family: Vec<Subspace>,
}

impl SubspacePairFamily {
    pub fn new(a_family: &[Subspace], b_family: &[Subspace]) -> Result<SubspacePairFamily> {
        if a_family.is_empty() || b_family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let n = a_family[0].ambient();
        for h in a_family {
            if h.ambient() != n {
                return Err(Error::AmbientMismatch(n, h.ambient()));
            }
            if h.dim() + 1 != n {
                return Err(Error::PreconditionViolated(format!("{h} is not a hyperplane")));
            }
        }
        for l in b_family {
            if l.ambient() != n {
                return Err(Error::AmbientMismatch(n, l.ambient()));
            }
            if l.dim() != 1 {
                return Err(Error::PreconditionViolated(format!("{l} is not a line")));
            }
            for h in a_family {
                if h.contains(l)? {
                    return Err(Error::ContainmentViolation {
                        line: l.to_string(),
                        hyperplane: h.to_string(),
                    });
                }
            }
        }
        let sorted = |v: &[Subspace]| v.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(SubspacePairFamily {
            a_family: sorted(a_family),
            b_family: sorted(b_family),
        })
    }

    pub fn ambient(&self) -> usize {
        self.a_family[0].ambient()
    }
}

/// S(𝒜, ℬ) as a matrix set; its closure under products is checked.
pub fn s_ab_make(fam: &SubspacePairFamily, limits: &Limits) -> Result<MatSet> {
    let f = fam.a_family[0].field().clone();
    let n = fam.ambient();
    let all = MatSet::full(&f, n, limits)?;
    let s = MatSet::new(
        &f,
        n,
        all.iter()
            .zip(all.ranks())
            .filter(|&(m, &r)| {
                r + 1 == n && fam.a_family.contains(&m.image()) && fam.b_family.contains(&m.kernel())
            })
            .map(|(m, _)| m.clone()),
    )?;
    if let Some((i, j)) = s.closure_witness() {
        return Err(Error::InvariantViolation(format!(
            "S(A,B) is not closed: {} * {}",
            s.elements()[i],
            s.elements()[j]
        )));
    }
    Ok(s)
}

/// Every valid family over F_q^n, in canonical order.
pub fn enumerate_families(field: &Field, n: usize, limits: &Limits) -> Result<Vec<SubspacePairFamily>> {
    if n < 2 {
        return Err(Error::PreconditionViolated("families need n >= 2".into()));
    }
    let hyperplanes = enumerate_subspaces(field, n, n - 1, limits)?;
    let lines = enumerate_subspaces(field, n, 1, limits)?;
    check_cap("hyperplane subsets", 1u128 << hyperplanes.len().min(127), limits.max_enum as u128)?;
    let free: Vec<Vec<usize>> = (1u64..1 << hyperplanes.len())
        .map(|amask| {
            (0..lines.len())
                .filter(|&l| {
                    (0..hyperplanes.len())
                        .filter(|h| amask >> h & 1 == 1)
                        .all(|h| !hyperplanes[h].contains(&lines[l]).unwrap_or(true))
                })
                .collect()
        })
        .collect();
    let total: u128 = free.iter().map(|f| (1u128 << f.len()) - 1).sum();
    check_cap("subspace families", total, limits.max_enum as u128)?;
    let mut out = Vec::with_capacity(total as usize);
    for (i, lines_ok) in free.iter().enumerate() {
        let amask = i as u64 + 1;
        let a: Vec<Subspace> = (0..hyperplanes.len())
            .filter(|h| amask >> h & 1 == 1)
            .map(|h| hyperplanes[h].clone())
            .collect();
        for bmask in 1u64..1 << lines_ok.len() {
            let b: Vec<Subspace> = (0..lines_ok.len())
                .filter(|j| bmask >> j & 1 == 1)
                .map(|j| lines[lines_ok[j]].clone())
                .collect();
            out.push(SubspacePairFamily::new(&a, &b)?);
        }
    }
    out.sort();
    Ok(out)
}

fn ensure_closed(s: &MatSet) -> Result<()> {
    match s.closure_witness() {
        Some((left, right)) => Err(Error::NotClosed { left, right }),
        None => Ok(()),
    }
}

fn isolated_in(u: &Universe, mask: &FixedBitSet) -> bool {
    (0..u.len() as u32)
        .into_par_iter()
        .filter(|&x| !mask.contains(x as usize))
        .all(|x| u.powers(x).iter().all(|&p| !mask.contains(p as usize)))
}

fn completely_isolated_in(u: &Universe, mask: &FixedBitSet) -> bool {
    let m = u.len() as u32;
    (0..m)
        .into_par_iter()
        .filter(|&x| !mask.contains(x as usize))
        .all(|x| (0..m).all(|y| mask.contains(y as usize) || !mask.contains(u.mul(x, y) as usize)))
}

/// Whether the subsemigroup `s` is isolated in M(n, F_q).
pub fn is_isolated(s: &MatSet, limits: &Limits) -> Result<bool> {
    ensure_closed(s)?;
    let u = Universe::new(s.field(), s.n(), limits)?;
    Ok(isolated_in(&u, &u.mask(s.iter())))
}

/// Whether the subsemigroup `s` is completely isolated in M(n, F_q).
pub fn is_completely_isolated(s: &MatSet, limits: &Limits) -> Result<bool> {
    ensure_closed(s)?;
    let u = Universe::with_table(s.field(), s.n(), limits)?;
    Ok(completely_isolated_in(&u, &u.mask(s.iter())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IsolatedKind {
    M,
    GL,
    I,
    SAB,
    #[serde(rename = "other")]
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumMode {
    /// Scan every subset of M(n, F_q).
    Exhaustive,
    /// Check the predicted list only.
    Predicted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolatedRecord {
    pub kind: IsolatedKind,
    #[serde(rename = "A_family")]
    pub a_family: Vec<Subspace>,
    #[serde(rename = "B_family")]
    pub b_family: Vec<Subspace>,
    pub size: usize,
    pub isolated: bool,
    pub completely_isolated: bool,
    pub elements: MatSet,
}

impl IsolatedRecord {
    fn sort_key(&self) -> (IsolatedKind, &[Subspace], &[Subspace], &[Matrix]) {
        (self.kind, &self.a_family, &self.b_family, self.elements.elements())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolatedEnumeration {
    pub mode: EnumMode,
    pub records: Vec<IsolatedRecord>,
    /// Exhaustive mode: whether the scan found exactly the predicted list.
    pub matches_prediction: Option<bool>,
}

impl IsolatedEnumeration {
    pub fn completely_isolated(&self) -> impl Iterator<Item = &IsolatedRecord> {
        self.records.iter().filter(|r| r.completely_isolated)
    }
}

/// Recognise `s` as M, GL, I_{n−1}, some S(𝒜, ℬ), or none of these.
pub fn classify(s: &MatSet, limits: &Limits) -> Result<(IsolatedKind, Option<SubspacePairFamily>)> {
    let n = s.n();
    let q = s.field().q() as u128;
    let total = q.pow((n * n) as u32);
    let gl: u128 = (0..n).map(|i| q.pow(n as u32) - q.pow(i as u32)).product();
    let len = s.len() as u128;
    let ranks = s.ranks();
    if len == total {
        return Ok((IsolatedKind::M, None));
    }
    if len == gl && ranks.iter().all(|&r| r == n) {
        return Ok((IsolatedKind::GL, None));
    }
    if len == total - gl && ranks.iter().all(|&r| r < n) {
        return Ok((IsolatedKind::I, None));
    }
    if n >= 2 && !s.is_empty() && ranks.iter().all(|&r| r + 1 == n) {
        let a: BTreeSet<Subspace> = s.iter().map(Matrix::image).collect();
        let b: BTreeSet<Subspace> = s.iter().map(Matrix::kernel).collect();
        let a: Vec<_> = a.into_iter().collect();
        let b: Vec<_> = b.into_iter().collect();
        if let Ok(fam) = SubspacePairFamily::new(&a, &b) {
            if &s_ab_make(&fam, limits)? == s {
                return Ok((IsolatedKind::SAB, Some(fam)));
            }
        }
    }
    Ok((IsolatedKind::Other, None))
}

fn record(u: &Universe, s: MatSet, limits: &Limits) -> Result<IsolatedRecord> {
    let (kind, fam) = classify(&s, limits)?;
    let mask = u.mask(s.iter());
    let fam = fam.unwrap_or(SubspacePairFamily {
        a_family: Vec::new(),
        b_family: Vec::new(),
    });
    Ok(IsolatedRecord {
        kind,
        a_family: fam.a_family,
        b_family: fam.b_family,
        size: s.len(),
        isolated: isolated_in(u, &mask),
        completely_isolated: completely_isolated_in(u, &mask),
        elements: s,
    })
}

/// M, GL, I_{n−1} and every S(𝒜, ℬ).
pub fn predicted_isolated(field: &Field, n: usize, limits: &Limits) -> Result<Vec<MatSet>> {
    let mut out = vec![
        MatSet::full(field, n, limits)?,
        rank_stratum(field, n, n, limits)?,
        ideal(field, n, n - 1, limits)?,
    ];
    let fams = enumerate_families(field, n, limits)?;
    let sets: Vec<MatSet> = fams.par_iter().map(|f| s_ab_make(f, limits)).collect::<Result<_>>()?;
    out.extend(sets);
    Ok(out)
}

pub fn enumerate_isolated(field: &Field, n: usize, mode: EnumMode, limits: &Limits) -> Result<IsolatedEnumeration> {
    if n < 2 {
        return Err(Error::PreconditionViolated("isolated enumeration needs n >= 2".into()));
    }
    let u = Universe::with_table(field, n, limits)?;
    let predicted = predicted_isolated(field, n, limits)?;
    let (sets, matches_prediction) = match mode {
        EnumMode::Predicted => (predicted, None),
        EnumMode::Exhaustive => {
            let all = MatSet::full(field, n, limits)?;
            let table = build_table(&all, false)?;
            let masks = enumerate_subsemigroups(&table, false, limits)?;
            let found: Vec<MatSet> = masks
                .par_iter()
                .map(|&bits| {
                    MatSet::new(
                        field,
                        n,
                        (0..all.len()).filter(|i| bits >> i & 1 == 1).map(|i| all.elements()[i].clone()),
                    )
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|s| isolated_in(&u, &u.mask(s.iter())))
                .collect();
            let key = |v: &[MatSet]| -> BTreeSet<Vec<Matrix>> { v.iter().map(|s| s.elements().to_vec()).collect() };
            let same = key(&found) == key(&predicted);
            (found, Some(same))
        }
    };
    let mut records = sets
        .into_par_iter()
        .map(|s| record(&u, s, limits))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(IsolatedEnumeration {
        mode,
        records,
        matches_prediction,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealHypothesis {
    ContainsZero,
    IdempotentChain,
    LowRankIdempotent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealCheckEntry {
    pub kind: IsolatedKind,
    pub size: usize,
    pub hypothesis: Option<IdealHypothesis>,
    pub contains_ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealCheckReport {
    pub entries: Vec<IdealCheckEntry>,
    pub passed: bool,
}

/// On every isolated subsemigroup S of M(n, F_q): if S holds 0, or an
/// idempotent of rank at most n−2, or two rank n−1 idempotents where the
/// kernel of one lies in the image of the other, then I_{n−1} ⊆ S.
pub fn low_rank_idempotent_check(field: &Field, n: usize, limits: &Limits) -> Result<IdealCheckReport> {
    let listed = enumerate_isolated(field, n, EnumMode::Exhaustive, limits)?;
    let singular = ideal(field, n, n - 1, limits)?;
    let entries: Vec<IdealCheckEntry> = listed
        .records
        .iter()
        .map(|r| {
            let s = &r.elements;
            let idem: Vec<&Matrix> = s.iter().filter(|e| &(*e * *e) == *e).collect();
            let top: Vec<(Subspace, Subspace)> = idem
                .iter()
                .filter(|e| e.rank() + 1 == n)
                .map(|e| (e.image(), e.kernel()))
                .collect();
            let hypothesis = if s.contains(&Matrix::zero(field, n, n)) {
                Some(IdealHypothesis::ContainsZero)
            } else if idem.iter().any(|e| e.rank() + 2 <= n) {
                Some(IdealHypothesis::LowRankIdempotent)
            } else if top
                .iter()
                .any(|(_, k1)| top.iter().any(|(i2, _)| i2.contains(k1).unwrap_or(false)))
            {
                Some(IdealHypothesis::IdempotentChain)
            } else {
                None
            };
            IdealCheckEntry {
                kind: r.kind,
                size: r.size,
                hypothesis,
                contains_ideal: singular.is_subset(s),
            }
        })
        .collect();
    let passed = entries.iter().all(|e| e.hypothesis.is_none() || e.contains_ideal);
    Ok(IdealCheckReport { entries, passed })
}
