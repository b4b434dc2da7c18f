//! How often each residue `K(a) mod 24` occurs as `a` runs over `F_q*`, `m` even.
//!
//! Elements of the form `c⁴ + c³` are counted through
//! `C(ε, δ) = {c ∈ F_q* \ {1} : Tr(c) = ε, Tr(c³) = δ}` and the subset `N(ε, δ)`
//! of those `c` with `c⁴ + c³` a cube (each such image has four preimages).
//! Cubes `b³` with `Tr₂(b) ≠ 0` are counted through
//! `S_β(ε) = {b ∈ F_q* : Tr(b³) = ε, Tr₂(b) = β}`, three preimages per image.

use std::collections::BTreeMap;

use crate::charsum::{lemma10_closed, SumKind};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::kloosterman::{classify_all, cube_residue, kloosterman_table, quartic_residue};

pub const GRID_CAP: u32 = 20;
pub const FAST_CAP: u32 = 24;
pub const BRUTE_CAP: u32 = 14;
/// Largest `m` for the closed forms (keeps `q` inside `i64`).
pub const CLOSED_MAX: u32 = 60;

/// The residues `K(a) mod 24` can take for even `m`.
pub const RESIDUES: [u8; 6] = [3, 7, 11, 15, 19, 23];

/// `#C(ε, δ)`, `N(ε, δ)` (indexed `[ε][δ]`) and `Σ_β #S_β(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountGrid {
    pub m: u32,
    pub c: [[u64; 2]; 2],
    pub n: [[u64; 2]; 2],
    pub sbeta_total: [u64; 2],
}

/// Residue class → number of `a ∈ F_q*` with `K(a)` in that class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistTable {
    pub m: u32,
    pub counts: BTreeMap<u8, u64>,
}

impl DistTable {
    fn empty(m: u32) -> DistTable {
        DistTable { m, counts: RESIDUES.iter().map(|&k| (k, 0)).collect() }
    }

    pub fn get(&self, k: u8) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistMode {
    /// Tally of the trace-based classifier.
    Fast,
    /// Closed-form tables keyed by `m mod 24` and `m mod 8`.
    Closed,
    /// Tally of directly evaluated sums.
    Brute,
}

impl std::str::FromStr for DistMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<DistMode> {
        match s {
            "fast" => Ok(DistMode::Fast),
            "closed" => Ok(DistMode::Closed),
            "brute" => Ok(DistMode::Brute),
            _ => Err(Error::BadParameter(format!("unknown mode {s:?}"))),
        }
    }
}

fn check_grid_ctx(ctx: &FieldContext) -> Result<()> {
    ctx.require_even()?;
    ctx.check_cap(GRID_CAP)
}

/// The three nonzero elements of GF(4) inside `F_q`, ordered `1, ζ, ζ²`.
fn f4_units(ctx: &FieldContext) -> [FieldElement; 3] {
    let zeta = ctx.pow(ctx.generator(), ctx.order() / 3);
    [FieldElement::ONE, zeta, ctx.square(zeta)]
}

/// `#S_β(ε)` indexed `[ε][β]` with `β` ordered as `1, ζ, ζ²`, `ζ = γ^{(q-1)/3}`.
pub fn sbeta_counts(ctx: &FieldContext) -> Result<[[u64; 3]; 2]> {
    check_grid_ctx(ctx)?;
    let units = f4_units(ctx);
    let mut out = [[0u64; 3]; 2];
    for b in ctx.nonzero() {
        let t2 = ctx.tr2(b)?;
        if t2.is_zero() {
            continue;
        }
        let beta = units.iter().position(|&u| u == t2).ok_or_else(|| {
            Error::InvariantViolation(format!("Tr₂({b}) = {t2} is not in GF(4)"))
        })?;
        let eps = ctx.tr(ctx.mul(ctx.square(b), b)) as usize;
        out[eps][beta] += 1;
    }
    Ok(out)
}

/// Counts by direct scans of the defining sets.
pub fn count_grid_direct(ctx: &FieldContext) -> Result<CountGrid> {
    check_grid_ctx(ctx)?;
    let mut c = [[0u64; 2]; 2];
    for x in ctx.nonzero().skip(1) {
        let x3 = ctx.mul(ctx.square(x), x);
        c[ctx.tr(x) as usize][ctx.tr(x3) as usize] += 1;
    }

    // N(ε, δ) = #{1 <= i < (q-1)/3 : Tr(γ^{3i}) = ε, Tr(γ^{9i}) = δ}
    let mut n = [[0u64; 2]; 2];
    let g3 = ctx.pow(ctx.generator(), 3);
    let mut x = g3;
    for _ in 1..ctx.order() / 3 {
        let x3 = ctx.mul(ctx.square(x), x);
        n[ctx.tr(x) as usize][ctx.tr(x3) as usize] += 1;
        x = ctx.mul(x, g3);
    }

    let s = sbeta_counts(ctx)?;
    Ok(CountGrid { m: ctx.m(), c, n, sbeta_total: [s[0].iter().sum(), s[1].iter().sum()] })
}

fn exact_div(num: i64, den: i64, what: &'static str, m: u32) -> Result<u64> {
    if num % den != 0 || num < 0 {
        return Err(Error::NonIntegralCount { what, m });
    }
    Ok((num / den) as u64)
}

fn sign(bit: usize) -> i64 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

fn check_closed_m(m: u32) -> Result<()> {
    if m % 2 == 1 {
        return Err(Error::OddDegree { m });
    }
    if !(4..=CLOSED_MAX).contains(&m) {
        return Err(Error::BadParameter(format!("m = {m} outside 4..={CLOSED_MAX}")));
    }
    Ok(())
}

/// Counts from the exponential-sum expressions fed by the closed forms of the
/// four character sums.
pub fn count_grid_closed(m: u32) -> Result<CountGrid> {
    check_closed_m(m)?;
    let q = 1i64 << m;
    let s3 = lemma10_closed(SumKind::X3, m)?;
    let s9 = lemma10_closed(SumKind::X9, m)?;
    let s31 = lemma10_closed(SumKind::X3PlusX, m)?;
    let s93 = lemma10_closed(SumKind::X9PlusX3, m)?;

    let mut c = [[0u64; 2]; 2];
    let mut n = [[0u64; 2]; 2];
    for eps in 0..2 {
        for delta in 0..2 {
            let h = if eps == 0 && delta == 0 { 4 } else { 0 };
            let twelve_n = q + sign(delta) * s9 + sign(eps) * s3 + sign(eps ^ delta) * s93 - 4 * h;
            n[eps][delta] = exact_div(twelve_n, 12, "N(eps, delta)", m)?;
            let four_c = q + sign(delta) * s3 + sign(eps ^ delta) * s31 - 2 * h;
            c[eps][delta] = exact_div(four_c, 4, "#C(eps, delta)", m)?;
        }
    }

    // The S_β sums run over F_q*, one less than the full-field values.
    let (s3_star, s31_star) = (s3 - 1, s31 - 1);
    let mut sbeta_total = [0u64; 2];
    for (eps, slot) in sbeta_total.iter_mut().enumerate() {
        let eight_s = 3 * (q + sign(eps) * s3_star - sign(eps) * s31_star);
        *slot = exact_div(eight_s, 8, "sum of #S_beta(eps)", m)?;
    }
    Ok(CountGrid { m, c, n, sbeta_total })
}

/// Number of distinct `a = c⁴ + c³` with `c ∈ C(ε, δ)`, counted directly and
/// checked against `#C(ε, δ) - (3/4) N(ε, δ)`.
pub fn lemma11_counts(ctx: &FieldContext) -> Result<[[u64; 2]; 2]> {
    let grid = count_grid_direct(ctx)?;
    // 0 = unseen, otherwise 1 + 2ε + δ of the first preimage.
    let mut seen = vec![0u8; ctx.q() as usize];
    let mut distinct = [[0u64; 2]; 2];
    for x in ctx.nonzero().skip(1) {
        let x3 = ctx.mul(ctx.square(x), x);
        let a = ctx.mul(x3, x) + x3;
        let (eps, delta) = (ctx.tr(x) as usize, ctx.tr(x3) as usize);
        let tag = 1 + 2 * eps as u8 + delta as u8;
        let slot = &mut seen[a.bits() as usize];
        if *slot == 0 {
            *slot = tag;
            distinct[eps][delta] += 1;
        } else if *slot != tag {
            return Err(Error::InvariantViolation(format!(
                "preimages of {a} fall in different cells (Tr(c), Tr(c³))"
            )));
        }
    }
    for eps in 0..2 {
        for delta in 0..2 {
            let nn = grid.n[eps][delta];
            if nn % 4 != 0 || grid.c[eps][delta] - 3 * nn / 4 != distinct[eps][delta] {
                return Err(Error::InvariantViolation(format!(
                    "cell ({eps}, {delta}): {} distinct images, #C = {}, N = {nn}",
                    distinct[eps][delta], grid.c[eps][delta]
                )));
            }
        }
    }
    Ok(distinct)
}

/// `coef · 2^{m/2 + shift} + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub coef: i64,
    pub shift: i32,
    pub constant: i64,
}

const fn e(coef: i64, shift: i32, constant: i64) -> TableEntry {
    TableEntry { coef, shift, constant }
}

impl TableEntry {
    pub fn eval(self, m: u32) -> Result<i64> {
        // Scale by 8 so that shifts down to -3 stay integral for m >= 0.
        let p = m as i32 / 2 + self.shift + 3;
        if p < 0 {
            return Err(Error::NonIntegralCount { what: "table entry", m });
        }
        let eight = self.coef * (1i64 << p) + 8 * self.constant;
        if eight % 8 != 0 {
            return Err(Error::NonIntegralCount { what: "table entry", m });
        }
        Ok(eight / 8)
    }
}

/// Row labels of the `m mod 24` table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mod24Row {
    R0,
    R6,
    R12,
    R8,
    R2R10,
    R4,
}

/// Maps an even `m` to its row: a label `±r` covers `r` and `24 - r`.
pub fn mod24_row(m: u32) -> Result<Mod24Row> {
    Ok(match m % 24 {
        0 => Mod24Row::R0,
        6 | 18 => Mod24Row::R6,
        12 => Mod24Row::R12,
        8 | 16 => Mod24Row::R8,
        2 | 22 | 10 | 14 => Mod24Row::R2R10,
        4 | 20 => Mod24Row::R4,
        _ => return Err(Error::OddDegree { m }),
    })
}

/// `N(k) - 3·2^{m-4}` for `k = 7, 19, 11, 23`, by row.
pub fn quartic_table_row(row: Mod24Row) -> [TableEntry; 4] {
    match row {
        Mod24Row::R0 => [e(1, -3, -1), e(1, -3, 0), e(-1, -3, 0), e(-1, -3, 0)],
        Mod24Row::R6 => [e(-1, -2, -1), e(0, 0, 0), e(1, -2, 0), e(0, 0, 0)],
        Mod24Row::R12 => [e(3, -3, -1), e(-1, -3, 0), e(-3, -3, 0), e(1, -3, 0)],
        Mod24Row::R8 => [e(-1, -2, -1), e(1, -1, 0), e(-1, -1, 0), e(1, -2, 0)],
        Mod24Row::R2R10 => [e(1, -3, -1), e(-3, -3, 0), e(5, -3, 0), e(-3, -3, 0)],
        Mod24Row::R4 => [e(0, 0, -1), e(1, -2, 0), e(-3, -2, 0), e(1, -1, 0)],
    }
}

/// `N(3) - 2^{m-3}` and `N(15) - 2^{m-3}`, keyed by `m mod 8`.
pub fn cube_table_row(m: u32) -> Result<[TableEntry; 2]> {
    Ok(match m % 8 {
        0 => [e(0, 0, 0), e(0, 0, 0)],
        2 | 6 => [e(-1, -2, 0), e(1, -2, 0)],
        4 => [e(1, -1, 0), e(-1, -1, 0)],
        _ => return Err(Error::OddDegree { m }),
    })
}

/// The distribution from the closed-form tables.
pub fn distribution_closed(m: u32) -> Result<DistTable> {
    check_closed_m(m)?;
    let base4 = 3i64 << (m - 4);
    let base3 = 1i64 << (m - 3);
    let mut t = DistTable::empty(m);
    let quartic = quartic_table_row(mod24_row(m)?);
    for (k, entry) in [7u8, 19, 11, 23].into_iter().zip(quartic) {
        let v = base4 + entry.eval(m)?;
        t.counts.insert(k, exact_div(v, 1, "N(k)", m)?);
    }
    for (k, entry) in [3u8, 15].into_iter().zip(cube_table_row(m)?) {
        let v = base3 + entry.eval(m)?;
        t.counts.insert(k, exact_div(v, 1, "N(k)", m)?);
    }
    Ok(t)
}

/// Tally of `classify24` over `F_q*`.
pub fn distribution_fast(ctx: &FieldContext) -> Result<DistTable> {
    ctx.require_even()?;
    ctx.check_cap(FAST_CAP)?;
    let mut t = DistTable::empty(ctx.m());
    for c in classify_all(ctx)? {
        *t.counts.entry(c.mod24).or_insert(0) += 1;
    }
    Ok(t)
}

/// Tally of `K(a) mod 24` over `F_q*` with every sum evaluated.
pub fn distribution_brute(ctx: &FieldContext) -> Result<DistTable> {
    ctx.require_even()?;
    ctx.check_cap(BRUTE_CAP)?;
    let mut t = DistTable::empty(ctx.m());
    for &k in &kloosterman_table(ctx)?[1..] {
        *t.counts.entry(k.rem_euclid(24) as u8).or_insert(0) += 1;
    }
    Ok(t)
}

pub fn distribution(ctx: &FieldContext, mode: DistMode) -> Result<DistTable> {
    match mode {
        DistMode::Fast => distribution_fast(ctx),
        DistMode::Brute => distribution_brute(ctx),
        DistMode::Closed => distribution_closed(ctx.m()),
    }
}

/// Assembles the distribution from a count grid: the four quartic classes from
/// `#C - (3/4)N`, the two cube classes from `Σ_β #S_β / 3`.
pub fn distribution_from_grid(grid: &CountGrid) -> Result<DistTable> {
    let mut t = DistTable::empty(grid.m);
    for eps in 0..2 {
        for delta in 0..2 {
            let nn = grid.n[eps][delta];
            if nn % 4 != 0 {
                return Err(Error::NonIntegralCount { what: "(3/4)N(eps, delta)", m: grid.m });
            }
            t.counts.insert(quartic_residue(eps as u8, delta as u8), grid.c[eps][delta] - 3 * nn / 4);
        }
    }
    for eps in 0..2 {
        let s = grid.sbeta_total[eps];
        if s % 3 != 0 {
            return Err(Error::NonIntegralCount { what: "sum of #S_beta(eps) / 3", m: grid.m });
        }
        t.counts.insert(cube_residue(eps as u8), s / 3);
    }
    Ok(t)
}
