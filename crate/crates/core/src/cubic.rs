//! Irreducible cubics `x³ + a₂x² + dx + a₀` and points on `y² + cy + xy = x³`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::kloosterman::kloosterman_direct;

pub const CENSUS_CAP: u32 = 14;

/// Point count on `y² + cy + xy = x³` together with `P₃(1, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveCount {
    pub c: FieldElement,
    /// Projective count, point at infinity included.
    pub points: u64,
    pub p3: u64,
    /// 1 when `c = 1`, else 0.
    pub epsilon: u64,
}

impl CurveCount {
    pub fn new(ctx: &FieldContext, c: FieldElement) -> Result<CurveCount> {
        let points = curve_point_count(ctx, c)?;
        let p3 = count_irreducible_cubics(ctx, FieldElement::ONE, c)?;
        Ok(CurveCount { c, points, p3, epsilon: (c == FieldElement::ONE) as u64 })
    }

    /// `3·P₃(1, c) = |X(F_q)| - ε`.
    pub fn holds(&self) -> bool {
        3 * self.p3 + self.epsilon == self.points
    }
}

fn has_root(ctx: &FieldContext, a2: FieldElement, d: FieldElement, a0: FieldElement) -> bool {
    ctx.elements().any(|x| {
        let v = ctx.mul(ctx.mul(x + a2, x) + d, x) + a0;
        v.is_zero()
    })
}

/// `P₃(a₂, a₀)`: the number of `d` making `x³ + a₂x² + dx + a₀` root-free, hence
/// irreducible.
pub fn count_irreducible_cubics(ctx: &FieldContext, a2: FieldElement, a0: FieldElement) -> Result<u64> {
    if a2.is_zero() || a0.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    ctx.check_cap(CENSUS_CAP)?;
    let ds: Vec<FieldElement> = ctx.elements().collect();
    Ok(ds.into_par_iter().filter(|&d| !has_root(ctx, a2, d, a0)).count() as u64)
}

/// Projective points on `y² + cy + xy = x³` by a double scan of affine pairs,
/// plus the single point at infinity.
pub fn curve_point_count(ctx: &FieldContext, c: FieldElement) -> Result<u64> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    ctx.check_cap(CENSUS_CAP)?;
    let xs: Vec<FieldElement> = ctx.elements().collect();
    let affine: u64 = xs
        .into_par_iter()
        .map(|x| {
            let lin = x + c;
            let cube = ctx.mul(ctx.square(x), x);
            ctx.elements().filter(|&y| ctx.mul(y, y + lin) == cube).count() as u64
        })
        .sum();
    Ok(affine + 1)
}

/// Point count via `y² + (x + c)y = x³`: for `x ≠ c` the fibre has
/// `1 + χ(x³/(x + c)²)` points, and `x = c` contributes one more.
pub fn curve_point_count_by_character(ctx: &FieldContext, c: FieldElement) -> Result<u64> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut total = 0i64;
    for x in ctx.elements() {
        if x == c {
            continue;
        }
        let lin = x + c;
        let v = ctx.div(ctx.mul(ctx.square(x), x), ctx.square(lin))?;
        total += 1 + ctx.chi(v) as i64;
    }
    Ok((total + 2) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem4Report {
    pub c: FieldElement,
    /// `3·P₃(1, c)`.
    pub lhs: u64,
    /// `|X(F_q)|` by direct count.
    pub points: u64,
    /// `q + 1 + χ(c)·K(c⁴ + c³)`.
    pub rhs: i64,
    pub kloosterman: i64,
    pub mod3_residue: u8,
    pub expected_mod3: u8,
    pub pass: bool,
}

/// Residue of `K(c⁴ + c³)` mod 3 predicted from `m` and `Tr(c)`.
pub fn predicted_mod3(ctx: &FieldContext, c: FieldElement) -> u8 {
    if ctx.m() % 2 == 1 {
        0
    } else if ctx.tr(c) == 0 {
        1
    } else {
        2
    }
}

/// Checks `3·P₃(1, c) = |X(F_q)| = q + 1 + χ(c)·K(c⁴ + c³)` and the mod-3
/// residue of `K(c⁴ + c³)`.
pub fn verify_theorem4(ctx: &FieldContext, c: FieldElement) -> Result<Theorem4Report> {
    if c.is_zero() || c == FieldElement::ONE {
        return Err(Error::DegenerateC);
    }
    let lhs = 3 * count_irreducible_cubics(ctx, FieldElement::ONE, c)?;
    let points = curve_point_count(ctx, c)?;
    let c3 = ctx.mul(ctx.square(c), c);
    let a = ctx.mul(c3, c) + c3;
    let k = kloosterman_direct(ctx, a)?.value();
    let rhs = ctx.q() as i64 + 1 + ctx.chi(c) as i64 * k;
    let mod3_residue = k.rem_euclid(3) as u8;
    let expected_mod3 = predicted_mod3(ctx, c);
    let pass = lhs == points && points as i64 == rhs && mod3_residue == expected_mod3;
    Ok(Theorem4Report { c, lhs, points, rhs, kloosterman: k, mod3_residue, expected_mod3, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> FieldContext {
        FieldContext::with_degree(m).unwrap()
    }

    // Marks every reducible monic cubic by multiplying out a linear factor with a
    // monic quadratic; returns the irreducible count with a₂, a₀ both nonzero.
    fn restricted_irreducible_census(ctx: &FieldContext) -> u64 {
        let q = ctx.q() as usize;
        let idx = |a2: FieldElement, a1: FieldElement, a0: FieldElement| {
            (a2.bits() as usize * q + a1.bits() as usize) * q + a0.bits() as usize
        };
        let mut reducible = vec![false; q * q * q];
        for r in ctx.elements() {
            for s in ctx.elements() {
                for t in ctx.elements() {
                    // (x + r)(x² + sx + t)
                    let a2 = r + s;
                    let a1 = ctx.mul(r, s) + t;
                    let a0 = ctx.mul(r, t);
                    reducible[idx(a2, a1, a0)] = true;
                }
            }
        }
        let mut n = 0;
        for a2 in ctx.nonzero() {
            for a1 in ctx.elements() {
                for a0 in ctx.nonzero() {
                    if !reducible[idx(a2, a1, a0)] {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn census_matches_factorization_oracle() {
        for m in [2u32, 3, 4] {
            let ctx = gf(m);
            let mut total = 0;
            for a2 in ctx.nonzero() {
                for a0 in ctx.nonzero() {
                    total += count_irreducible_cubics(&ctx, a2, a0).unwrap();
                }
            }
            assert_eq!(total, restricted_irreducible_census(&ctx), "m = {m}");
        }
    }

    #[test]
    fn all_monic_irreducible_cubics() {
        // With a₂ = 0 included via the oracle's complement, the total is (q³ - q)/3.
        let ctx = gf(4);
        let q = ctx.q();
        let mut with_a2_zero = 0;
        for a1 in ctx.elements() {
            for a0 in ctx.nonzero() {
                if !has_root(&ctx, FieldElement::ZERO, a1, a0) {
                    with_a2_zero += 1;
                }
            }
        }
        assert_eq!(restricted_irreducible_census(&ctx) + with_a2_zero, (q * q * q - q) / 3);
    }

    #[test]
    fn census_matches_points_small_fields() {
        for m in [3u32, 4, 5, 6] {
            let ctx = gf(m);
            for c in ctx.nonzero() {
                let cc = CurveCount::new(&ctx, c).unwrap();
                assert!(cc.points >= 1);
                assert!(cc.holds(), "m={m} c={c}: {cc:?}");
            }
        }
    }

    #[test]
    fn two_counting_paths_agree() {
        for m in [3u32, 4, 6, 7] {
            let ctx = gf(m);
            for c in ctx.nonzero() {
                assert_eq!(
                    curve_point_count(&ctx, c).unwrap(),
                    curve_point_count_by_character(&ctx, c).unwrap()
                );
            }
        }
    }

    #[test]
    fn hasse_bound_on_gf16() {
        let ctx = gf(4);
        for c in ctx.nonzero() {
            let p = curve_point_count(&ctx, c).unwrap() as i64;
            assert!((p - 17).abs() <= 8);
        }
    }

    #[test]
    fn kloosterman_curve_reports() {
        for m in [5u32, 6] {
            let ctx = gf(m);
            for c in ctx.nonzero().skip(1) {
                let r = verify_theorem4(&ctx, c).unwrap();
                assert!(r.pass, "{r:?}");
                if m == 5 {
                    assert_eq!(r.mod3_residue, 0);
                } else if ctx.tr(c) == 0 {
                    assert_eq!(r.mod3_residue, 1);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let ctx = gf(4);
        assert_eq!(verify_theorem4(&ctx, FieldElement::ONE), Err(Error::DegenerateC));
        assert_eq!(verify_theorem4(&ctx, FieldElement::ZERO), Err(Error::DegenerateC));
        assert_eq!(
            count_irreducible_cubics(&ctx, FieldElement::ZERO, FieldElement::ONE),
            Err(Error::ZeroCoefficient)
        );
        assert_eq!(curve_point_count(&gf(15), FieldElement::ONE), Err(Error::FieldTooLarge { m: 15, cap: 14 }));
    }
}
