//! Exhaustive verification suites, one `(suite, m)` cell at a time.
//!
//! A cell either passes, reports the first counterexample it met, or is skipped
//! because the suite does not apply to that `m` (e.g. even-only statements).

use std::fmt;
use std::str::FromStr;

use crate::charsum::{char_sum, lemma10_closed, SumKind};
use crate::cubic::verify_theorem4;
use crate::distribution::{
    count_grid_closed, count_grid_direct, distribution_brute, distribution_closed, distribution_fast,
    lemma11_counts, sbeta_counts,
};
use crate::equation::{count_solutions, enumerate_solutions};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::kloosterman::{classify_all, congruence_mod3, congruence_mod8, kloosterman_table, Mod3Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Field,
    Lemma10,
    Thm6,
    Thm4,
    Thm9,
    Lemma12,
    Thm13,
    Thm16,
}

impl Suite {
    /// Dependency order: each suite only relies on facts checked before it.
    pub const ALL: [Suite; 8] = [
        Suite::Field,
        Suite::Lemma10,
        Suite::Thm6,
        Suite::Thm4,
        Suite::Thm9,
        Suite::Lemma12,
        Suite::Thm13,
        Suite::Thm16,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Field => "field",
            Suite::Lemma10 => "lemma10",
            Suite::Thm6 => "thm6",
            Suite::Thm4 => "thm4",
            Suite::Thm9 => "thm9",
            Suite::Lemma12 => "lemma12",
            Suite::Thm13 => "thm13",
            Suite::Thm16 => "thm16",
        }
    }

    /// Largest `m` the suite runs without lifted caps.
    pub fn cap(self) -> u32 {
        match self {
            Suite::Field => 16,
            Suite::Lemma10 => 20,
            Suite::Thm6 => 14,
            Suite::Thm4 => 10,
            Suite::Thm9 => 14,
            Suite::Lemma12 => 20,
            Suite::Thm13 | Suite::Thm16 => 14,
        }
    }

    fn even_only(self) -> bool {
        matches!(self, Suite::Lemma10 | Suite::Lemma12 | Suite::Thm13 | Suite::Thm16)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown suite {s:?}")))
    }
}

/// The first violated invariant of a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub invariant: &'static str,
    pub element: Option<FieldElement>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant `{}` violated", self.invariant)?;
        if let Some(e) = self.element {
            write!(f, " at {e}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Counterexample),
    Skipped(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub m: u32,
    /// Number of individual checks performed.
    pub checks: u64,
    pub verdict: Verdict,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self.verdict, Verdict::Fail(_))
    }
}

struct Checker {
    checks: u64,
    failure: Option<Counterexample>,
}

impl Checker {
    fn new() -> Checker {
        Checker { checks: 0, failure: None }
    }

    /// Records a check; keeps only the first failure. Returns `cond`.
    fn check(
        &mut self,
        cond: bool,
        invariant: &'static str,
        element: Option<FieldElement>,
        detail: impl FnOnce() -> String,
    ) -> bool {
        self.checks += 1;
        if !cond && self.failure.is_none() {
            self.failure = Some(Counterexample { invariant, element, detail: detail() });
        }
        cond
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn finish(self, suite: Suite, m: u32) -> SuiteOutcome {
        let verdict = match self.failure {
            Some(c) => Verdict::Fail(c),
            None => Verdict::Pass,
        };
        SuiteOutcome { suite, m, checks: self.checks, verdict }
    }
}

/// Runs one suite on one field. Fails with `FieldTooLarge` when `m` exceeds the
/// suite cap and the context's caps are not lifted.
pub fn run_suite(ctx: &FieldContext, suite: Suite) -> Result<SuiteOutcome> {
    let m = ctx.m();
    if suite.even_only() && m % 2 == 1 {
        return Ok(SuiteOutcome { suite, m, checks: 0, verdict: Verdict::Skipped("odd m") });
    }
    if suite == Suite::Thm4 && m < 3 {
        return Ok(SuiteOutcome { suite, m, checks: 0, verdict: Verdict::Skipped("m < 3") });
    }
    ctx.check_cap(suite.cap())?;
    let mut ck = Checker::new();
    match suite {
        Suite::Field => field_suite(ctx, &mut ck)?,
        Suite::Lemma10 => lemma10_suite(ctx, &mut ck)?,
        Suite::Thm6 => thm6_suite(ctx, &mut ck)?,
        Suite::Thm4 => thm4_suite(ctx, &mut ck)?,
        Suite::Thm9 => thm9_suite(ctx, &mut ck)?,
        Suite::Lemma12 => lemma12_suite(ctx, &mut ck)?,
        Suite::Thm13 => dist_suite(ctx, &mut ck, &[7, 19, 11, 23])?,
        Suite::Thm16 => dist_suite(ctx, &mut ck, &[3, 15])?,
    }
    Ok(ck.finish(suite, m))
}

fn field_suite(ctx: &FieldContext, ck: &mut Checker) -> Result<()> {
    let g = ctx.generator();
    ck.check(ctx.element_order(g)? == ctx.order(), "generator has order q - 1", Some(g), || {
        "generator order is smaller than q - 1".into()
    });
    let mut ones = 0u64;
    for x in ctx.elements() {
        ones += ctx.tr(x) as u64;
        ck.check(ctx.mul(x, g) == ctx.mul(g, x), "mul commutes", Some(x), || "x·γ ≠ γ·x".into());
        ck.check(ctx.square(x) == ctx.mul(x, x), "square = mul(x, x)", Some(x), || "x² ≠ x·x".into());
        ck.check(ctx.tr(ctx.square(x)) == ctx.tr(x), "Tr(x²) = Tr(x)", Some(x), || {
            "trace not Frobenius-invariant".into()
        });
        ck.check(
            ctx.trace(x, 1)?.bits() == ctx.tr(x) as u32,
            "trace mask = Frobenius sum",
            Some(x),
            || "masked trace disagrees with Σ x^(2^j)".into(),
        );
        if !x.is_zero() {
            let xi = ctx.inv(x)?;
            ck.check(ctx.mul(x, xi) == FieldElement::ONE, "x·x⁻¹ = 1", Some(x), || {
                format!("x⁻¹ = {xi}")
            });
        }
        if ck.failed() {
            return Ok(());
        }
    }
    ck.check(ones == ctx.q() / 2, "Tr balanced", None, || format!("{ones} elements of trace 1"));
    Ok(())
}

fn lemma10_suite(ctx: &FieldContext, ck: &mut Checker) -> Result<()> {
    for kind in SumKind::ALL {
        let closed = lemma10_closed(kind, ctx.m())?;
        let brute = char_sum(ctx, &kind.poly())?;
        ck.check(closed == brute, "character-sum closed form", None, || {
            format!("{}: closed {closed}, brute force {brute}", kind.as_str())
        });
    }
    Ok(())
}

fn thm6_suite(ctx: &FieldContext, ck: &mut Checker) -> Result<()> {
    for k in 1..=4u32 {
        let mut total = 0u64;
        for a in ctx.nonzero() {
            let r = count_solutions(ctx, k, a)?;
            let n = enumerate_solutions(ctx, k, a)?.len() as u64;
            total += r.count;
            if !ck.check(r.count == n, "solution count = enumeration", Some(a), || {
                format!("k = {k}: predicted {} ({}), found {n}", r.count, r.case.as_str())
            }) {
                return Ok(());
            }
        }
        ck.check(total == ctx.q() - 2, "Σ_a N(a) = q - 2", None, || format!("k = {k}: Σ = {total}"));
    }
    Ok(())
}

fn thm4_suite(ctx: &FieldContext, ck: &mut Checker) -> Result<()> {
    for c in ctx.nonzero().skip(1) {
        let r = verify_theorem4(ctx, c)?;
        if !ck.check(r.pass, "3·P₃(1,c) = |X| = q + 1 + χ(c)K(c⁴+c³)", Some(c), || {
            format!(
                "3P₃ = {}, |X| = {}, q + 1 + χK = {}, K mod 3 = {} (expected {})",
                r.lhs, r.points, r.rhs, r.mod3_residue, r.expected_mod3
            )
        }) {
            return Ok(());
        }
    }
    Ok(())
}

fn thm9_suite(ctx: &FieldContext, ck: &mut Checker) -> Result<()> {
    let table = kloosterman_table(ctx)?;
    let k_of = |a: FieldElement| table[a.bits() as usize];
    let sum: i64 = table[1..].iter().sum();
    ck.check(sum == 1, "Σ_a K(a) = 1", None, || format!("Σ = {sum}"));
    for a in ctx.nonzero() {
        let k = k_of(a);
        ck.check(k == k_of(ctx.square(a)), "K(a) = K(a²)", Some(a), || {
            format!("K(a) = {k}, K(a²) = {}", k_of(ctx.square(a)))
        });
        ck.check(k.rem_euclid(4) == 3, "K(a) ≡ 3 (mod 4)", Some(a), || format!("K(a) = {k}"));
        ck.check(k * k <= 4 * ctx.q() as i64, "|K(a)| ≤ 2√q", Some(a), || format!("K(a) = {k}"));
        let m8 = congruence_mod8(ctx, a)?;
        ck.check(k.rem_euclid(8) as u8 == m8, "K(a) mod 8 from Tr(a)", Some(a), || {
            format!("K(a) = {k}, predicted {m8} mod 8")
        });
        match congruence_mod3(ctx, a)? {
            Mod3Verdict::Residue(r) => {
                ck.check(k.rem_euclid(3) as u8 == r, "K(a) mod 3 criterion", Some(a), || {
                    format!("K(a) = {k}, predicted {r} mod 3")
                });
            }
            Mod3Verdict::NonzeroUndetermined => {
                ck.check(k.rem_euclid(3) != 0, "K(a) mod 3 criterion", Some(a), || {
                    format!("K(a) = {k} divisible by 3 but Tr(a^(1/3)) = 1")
                });
            }
        }
        if ck.failed() {
            return Ok(());
        }
    }
    if ctx.m() % 2 == 0 {
        for c in classify_all(ctx)? {
            let k = k_of(c.a);
            if !ck.check(k.rem_euclid(24) as u8 == c.mod24, "classify24 = K(a) mod 24", Some(c.a), || {
                format!("K(a) = {k} ≡ {} (mod 24), classified {} ({})", k.rem_euclid(24), c.mod24, c.case.as_str())
            }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn lemma12_suite(ctx: &FieldContext, ck: &mut Checker) -> Result<()> {
    let direct = count_grid_direct(ctx)?;
    let closed = count_grid_closed(ctx.m())?;
    ck.check(direct.c == closed.c, "#C(ε,δ) closed = direct", None, || {
        format!("closed {:?}, direct {:?}", closed.c, direct.c)
    });
    ck.check(direct.n == closed.n, "N(ε,δ) closed = direct", None, || {
        format!("closed {:?}, direct {:?}", closed.n, direct.n)
    });
    ck.check(direct.sbeta_total == closed.sbeta_total, "Σ_β #S_β(ε) closed = direct", None, || {
        format!("closed {:?}, direct {:?}", closed.sbeta_total, direct.sbeta_total)
    });
    let per_beta = sbeta_counts(ctx)?;
    for (eps, row) in per_beta.iter().enumerate() {
        ck.check(row.iter().all(|&v| 3 * v == direct.sbeta_total[eps]), "#S_β(ε) equal across β", None, || {
            format!("ε = {eps}: {row:?}")
        });
    }
    match lemma11_counts(ctx) {
        Ok(_) => {
            ck.check(true, "distinct images = #C - (3/4)N", None, String::new);
        }
        Err(Error::InvariantViolation(msg)) => {
            ck.check(false, "distinct images = #C - (3/4)N", None, || msg);
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn dist_suite(ctx: &FieldContext, ck: &mut Checker, classes: &[u8]) -> Result<()> {
    let closed = distribution_closed(ctx.m())?;
    let fast = distribution_fast(ctx)?;
    let brute = distribution_brute(ctx)?;
    for &k in classes {
        let (c, f, b) = (closed.get(k), fast.get(k), brute.get(k));
        ck.check(c == f && f == b, "N(k) closed = fast = brute", None, || {
            format!("k = {k}: closed {c}, fast {f}, brute {b}")
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_fields() {
        for m in 3..=8 {
            let ctx = FieldContext::with_degree(m).unwrap();
            for suite in Suite::ALL {
                let out = run_suite(&ctx, suite).unwrap();
                assert!(out.passed(), "{suite} m={m}: {:?}", out.verdict);
            }
        }
    }

    #[test]
    fn skips_and_caps() {
        let ctx = FieldContext::with_degree(5).unwrap();
        assert_eq!(run_suite(&ctx, Suite::Thm13).unwrap().verdict, Verdict::Skipped("odd m"));
        let big = FieldContext::with_degree(16).unwrap();
        assert_eq!(run_suite(&big, Suite::Thm9), Err(Error::FieldTooLarge { m: 16, cap: 14 }));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("thm99".parse::<Suite>().is_err());
    }
}
