//! Solutions of `x^(2^k) + x^(2^k - 1) = a` over GF(2^m).
//!
//! Writing `s = gcd(k, m)`, the count is 1 when `a` is not a `(2^k - 1)`-th
//! power, and otherwise `2^s` or 0 according to whether `Tr_s(b)` vanishes for
//! a root `b` of `b^(2^k - 1) = a`.

use crate::error::{Error, Result};
use crate::field::{gcd_u64, inv_mod, FieldContext, FieldElement};

pub const MAX_K: u32 = 62;
pub const ENUMERATION_CAP: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolutionCase {
    NotAPower,
    PowerTraceZero,
    PowerTraceNonzero,
}

impl SolutionCase {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionCase::NotAPower => "not_a_power",
            SolutionCase::PowerTraceZero => "power_trace_zero",
            SolutionCase::PowerTraceNonzero => "power_trace_nonzero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionReport {
    pub k: u32,
    pub a: FieldElement,
    pub s: u32,
    pub case: SolutionCase,
    pub count: u64,
    /// A root of `b^(2^k - 1) = a`, when one exists.
    pub root_b: Option<FieldElement>,
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k > MAX_K {
        Err(Error::BadParameter(format!("k = {k} must lie in 1..={MAX_K}")))
    } else {
        Ok(())
    }
}

/// Counts solutions from the power-residue structure of `a`, without scanning.
pub fn count_solutions(ctx: &FieldContext, k: u32, a: FieldElement) -> Result<SolutionReport> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    check_k(k)?;
    let s = gcd_u64(k as u64, ctx.m() as u64) as u32;
    let d = (1u64 << s) - 1;
    let order = ctx.order();
    let Some(r) = ctx.power_residue_root(a, d)? else {
        return Ok(SolutionReport { k, a, s, case: SolutionCase::NotAPower, count: 1, root_b: None });
    };
    // gcd(2^k - 1, q - 1) = 2^s - 1, so t = (2^k - 1)/d is a unit mod n = (q - 1)/d
    // and b = r^(t⁻¹ mod n) satisfies b^(2^k - 1) = a^(t·t⁻¹) = a.
    let e = (1u64 << k) - 1;
    let n = order / d;
    let t = (e / d) % n;
    let u = inv_mod(t, n).expect("(2^k-1)/(2^s-1) is coprime to (q-1)/(2^s-1)");
    let b = ctx.pow(r, u);
    debug_assert_eq!(ctx.pow(b, e), a);
    let (case, count) = if ctx.trace(b, s)?.is_zero() {
        (SolutionCase::PowerTraceZero, 1u64 << s)
    } else {
        (SolutionCase::PowerTraceNonzero, 0)
    };
    Ok(SolutionReport { k, a, s, case, count, root_b: Some(b) })
}

/// `x ↦ x^(2^k) + x^(2^k - 1)`.
pub fn eval_lhs(ctx: &FieldContext, k: u32, x: FieldElement) -> FieldElement {
    if x.is_zero() {
        return x;
    }
    // 2^k ≡ 2^(k mod m) modulo q - 1.
    let kk = k % ctx.m();
    let mut y = x;
    let mut prod = FieldElement::ONE;
    for _ in 0..kk {
        prod = ctx.mul(prod, y);
        y = ctx.square(y);
    }
    y + prod
}

/// The exact solution set, by scanning the whole field.
pub fn enumerate_solutions(ctx: &FieldContext, k: u32, a: FieldElement) -> Result<Vec<FieldElement>> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    check_k(k)?;
    ctx.check_cap(ENUMERATION_CAP)?;
    Ok(ctx.nonzero().filter(|&x| eval_lhs(ctx, k, x) == a).collect())
}

/// Some `c` with `c⁴ + c³ = a`, or `None` when `a = b³` with `Tr₂(b) ≠ 0`.
pub fn quartic_preimage(ctx: &FieldContext, a: FieldElement) -> Result<Option<FieldElement>> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    ctx.require_even()?;
    ctx.quartic_preimage_lookup(a)
}
