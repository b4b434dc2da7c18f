//! Kloosterman sums `K(a) = Σ_{x ∈ F_q*} χ(x + a x⁻¹)` and their residues
//! modulo 8, 3 and 24.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{inv_mod, FieldContext, FieldElement};

/// Largest degree for a single O(q) evaluation.
pub const DIRECT_CAP: u32 = 24;
/// Largest degree for the O(q²) aggregate over all of F_q*.
pub const SPECTRUM_CAP: u32 = 14;

/// The exact integer value of a Kloosterman sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KloostermanValue(pub i64);

impl KloostermanValue {
    pub fn value(self) -> i64 {
        self.0
    }

    /// Least non-negative residue modulo `n`.
    pub fn residue(self, n: i64) -> i64 {
        self.0.rem_euclid(n)
    }
}

/// Evaluates `K(a)` by walking `x = γ^i` and `a x⁻¹ = a γ^{-i}` together.
pub fn kloosterman_direct(ctx: &FieldContext, a: FieldElement) -> Result<KloostermanValue> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    ctx.check_cap(DIRECT_CAP)?;
    let g = ctx.generator();
    let g_inv = ctx.inv(g)?;
    let mut x = FieldElement::ONE;
    let mut y = a;
    let mut ones = 0u64;
    for _ in 0..ctx.order() {
        ones += ctx.tr(x + y) as u64;
        x = ctx.mul(x, g);
        y = ctx.mul(y, g_inv);
    }
    Ok(KloostermanValue(ctx.order() as i64 - 2 * ones as i64))
}

/// `K(a)` for every `a`, indexed by the element encoding (slot 0 unused, set to 0).
pub fn kloosterman_table(ctx: &FieldContext) -> Result<Vec<i64>> {
    ctx.check_cap(SPECTRUM_CAP)?;
    let mut out: Vec<i64> = (1..ctx.q() as u32)
        .into_par_iter()
        .map(|bits| kloosterman_direct(ctx, FieldElement::raw(bits)).map(|k| k.0))
        .collect::<Result<_>>()?;
    out.insert(0, 0);
    Ok(out)
}

/// Value-multiplicity table of `K` over F_q*.
pub fn spectrum(ctx: &FieldContext) -> Result<BTreeMap<i64, u64>> {
    let values = kloosterman_table(ctx)?;
    let mut out = BTreeMap::new();
    for &k in &values[1..] {
        *out.entry(k).or_insert(0) += 1;
    }
    Ok(out)
}

/// `K(a) mod 8` from the trace of `a`: 3 if `Tr(a) = 1`, 7 otherwise.
pub fn congruence_mod8(ctx: &FieldContext, a: FieldElement) -> Result<u8> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(if ctx.tr(a) == 1 { 3 } else { 7 })
}

/// Outcome of the mod-3 criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mod3Verdict {
    Residue(u8),
    /// `m` odd and `3 ∤ K(a)`: the residue (1 or 2) is not determined here.
    NonzeroUndetermined,
}

/// `K(a) mod 3` from the cube/quartic structure of `a`.
pub fn congruence_mod3(ctx: &FieldContext, a: FieldElement) -> Result<Mod3Verdict> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    if ctx.m() % 2 == 1 {
        // gcd(3, q - 1) = 1: cubing is a bijection.
        let e = inv_mod(3, ctx.order()).expect("3 is invertible mod q-1 for odd m");
        let b = ctx.pow(a, e);
        return Ok(if ctx.tr(b) == 0 {
            Mod3Verdict::Residue(0)
        } else {
            Mod3Verdict::NonzeroUndetermined
        });
    }
    Ok(Mod3Verdict::Residue(classify24(ctx, a)?.mod3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassCase {
    /// `a = b³` with `Tr₂(b) ≠ 0`.
    CubeNonzeroTr2,
    /// `a = c⁴ + c³`.
    QuarticImage,
}

impl ClassCase {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassCase::CubeNonzeroTr2 => "cube_nonzero_tr2",
            ClassCase::QuarticImage => "quartic_image",
        }
    }
}

/// The mod-24 verdict for one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub a: FieldElement,
    pub case: ClassCase,
    /// `b` (case 1) or `c` (case 2).
    pub witness: FieldElement,
    /// `Tr(c)`, case 2 only.
    pub eps: Option<u8>,
    /// `Tr(c³)`, case 2 only.
    pub delta: Option<u8>,
    pub tr_a: u8,
    pub mod8: u8,
    pub mod3: u8,
    pub mod24: u8,
}

/// Residue mod 24 attached to `(Tr(c), Tr(c³))` for `a = c⁴ + c³`.
pub fn quartic_residue(eps: u8, delta: u8) -> u8 {
    match (eps, delta) {
        (0, 0) => 7,
        (0, 1) => 19,
        (1, 0) => 11,
        _ => 23,
    }
}

/// Residue mod 24 for `a = b³`, `Tr₂(b) ≠ 0`, keyed by `Tr(a)`.
pub fn cube_residue(tr_a: u8) -> u8 {
    if tr_a == 0 {
        15
    } else {
        3
    }
}

/// Classifies `K(a) mod 24` for even `m` without evaluating the sum.
pub fn classify24(ctx: &FieldContext, a: FieldElement) -> Result<Classification> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    ctx.require_even()?;
    let tr_a = ctx.tr(a);
    let mod8 = if tr_a == 1 { 3 } else { 7 };
    if let Some(b) = ctx.cube_root_lookup(a)? {
        if !ctx.tr2(b)?.is_zero() {
            return Ok(Classification {
                a,
                case: ClassCase::CubeNonzeroTr2,
                witness: b,
                eps: None,
                delta: None,
                tr_a,
                mod8,
                mod3: 0,
                mod24: cube_residue(tr_a),
            });
        }
    }
    let c = ctx.quartic_preimage_lookup(a)?.ok_or_else(|| {
        Error::InvariantViolation(format!("{a} is neither b³ with Tr₂(b) ≠ 0 nor c⁴ + c³"))
    })?;
    let eps = ctx.tr(c);
    let delta = ctx.tr(ctx.mul(ctx.square(c), c));
    Ok(Classification {
        a,
        case: ClassCase::QuarticImage,
        witness: c,
        eps: Some(eps),
        delta: Some(delta),
        tr_a,
        mod8,
        mod3: if eps == 0 { 1 } else { 2 },
        mod24: quartic_residue(eps, delta),
    })
}

/// `classify24` over every `a ∈ F_q*`, in encoding order.
pub fn classify_all(ctx: &FieldContext) -> Result<Vec<Classification>> {
    ctx.require_even()?;
    // Build the shared tables once before the parallel reads.
    ctx.preimage_tables()?;
    ctx.nonzero().collect::<Vec<_>>().into_par_iter().map(|a| classify24(ctx, a)).collect()
}
