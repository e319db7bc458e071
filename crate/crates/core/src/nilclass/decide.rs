use serde::Serialize;

use crate::error::{Error, Result};
use crate::flags::flag_transporter;
use crate::semigroup::verify_iso;

use super::context::NilContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldClass {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Isomorphic,
    NotIsomorphic,
    Unsupported,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Verdict {
        if b {
            Verdict::Isomorphic
        } else {
            Verdict::NotIsomorphic
        }
    }
}

fn check_signature(n: usize, sig: &[usize]) -> Result<()> {
    if sig.is_empty() || sig.contains(&0) || sig.iter().sum::<usize>() != n {
        return Err(Error::BadSignature { sig: sig.to_vec(), n });
    }
    Ok(())
}

/// Whether φ(𝓕₁) ⊂ M(n1) and φ(𝓕₂) ⊂ M(n2) are isomorphic, from the flag
/// signatures alone.
pub fn iso_decide(field: FieldClass, n1: usize, sig1: &[usize], n2: usize, sig2: &[usize]) -> Result<Verdict> {
    check_signature(n1, sig1)?;
    check_signature(n2, sig2)?;
    if sig1.len() != sig2.len() {
        return Ok(Verdict::NotIsomorphic);
    }
    match sig1.len() {
        1 => Ok(Verdict::Isomorphic),
        // zero multiplication: only the cardinality q^{d1 d2} matters
        2 => Ok(match field {
            FieldClass::Infinite => Verdict::Isomorphic,
            FieldClass::Finite(_) => (sig1[0] * sig1[1] == sig2[0] * sig2[1]).into(),
        }),
        3 => {
            let wide = |s: &[usize]| s[0] > 1 && s[1] == 1 && s[2] > 1;
            Ok(match field {
                FieldClass::Infinite if wide(sig1) && wide(sig2) => Verdict::Isomorphic,
                _ if n1 != n2 => Verdict::Unsupported,
                _ => (sig1 == sig2).into(),
            })
        }
        _ => Ok((sig1 == sig2).into()),
    }
}

/// The isomorphism A ↦ gAg⁻¹ between two contexts with equal signatures in a
/// common ambient, as a map of table ids, checked against both tables.
pub fn iso_construct(ctx1: &NilContext, ctx2: &NilContext) -> Result<Vec<u32>> {
    let (f1, f2) = (ctx1.flag(), ctx2.flag());
    if f1.ambient() != f2.ambient() || f1.signature() != f2.signature() {
        return Err(Error::SignatureMismatch(f1.signature(), f2.signature()));
    }
    let g = flag_transporter(f1, f2)?;
    let gi = g.inverse()?;
    let map = (0..ctx1.len() as u32)
        .map(|a| {
            let b = g.checked_mul(ctx1.matrix(a))?.checked_mul(&gi)?;
            ctx2.id(&b)
        })
        .collect::<Result<Vec<u32>>>()?;
    if !verify_iso(ctx1.table(), ctx2.table(), &map) {
        return Err(Error::InvariantViolation("flag transport does not preserve products".into()));
    }
    Ok(map)
}
