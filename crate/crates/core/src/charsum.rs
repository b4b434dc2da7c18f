//! Additive character sums `Σ χ(f(x))` for sparse `f`, their closed forms for
//! `x³`, `x⁹`, `x³ + x`, `x⁹ + x³` over even-degree fields, and the L-polynomial
//! of the genus-4 curve `y² + y = x⁹ + x³` over GF(2).
//!
//! Two summation conventions appear: the full-field sum over all of `F_q`
//! ([`char_sum`]) and the sum over `F_q*` ([`char_sum_star`]). Since every
//! exponent is positive, `f(0) = 0` and the two differ by exactly `χ(0) = 1`.

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

pub const CHAR_SUM_CAP: u32 = 24;

/// `Σ cᵢ x^{eᵢ}` with strictly increasing positive exponents and nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    terms: Vec<(u32, FieldElement)>,
}

impl SparsePoly {
    pub fn new(mut terms: Vec<(u32, FieldElement)>) -> Result<SparsePoly> {
        terms.sort_by_key(|t| t.0);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::BadParameter(format!("repeated exponent {}", w[0].0)));
            }
        }
        if terms.iter().any(|&(e, c)| e == 0 || c.is_zero()) {
            return Err(Error::BadParameter("exponents must be positive, coefficients nonzero".into()));
        }
        Ok(SparsePoly { terms })
    }

    /// Sum of monomials with coefficient 1.
    pub fn monomials(exponents: &[u32]) -> Result<SparsePoly> {
        SparsePoly::new(exponents.iter().map(|&e| (e, FieldElement::ONE)).collect())
    }

    pub fn terms(&self) -> &[(u32, FieldElement)] {
        &self.terms
    }

    pub fn eval(&self, ctx: &FieldContext, x: FieldElement) -> FieldElement {
        self.terms
            .iter()
            .fold(FieldElement::ZERO, |acc, &(e, c)| acc + ctx.mul(c, ctx.pow(x, e as u64)))
    }
}

/// `Σ_{x ∈ F_q} χ(f(x))`.
pub fn char_sum(ctx: &FieldContext, f: &SparsePoly) -> Result<i64> {
    ctx.check_cap(CHAR_SUM_CAP)?;
    // Walk x = γ^i; each term cᵢγ^{i·eᵢ} advances by a fixed factor γ^{eᵢ}.
    let g = ctx.generator();
    let steps: Vec<FieldElement> = f.terms.iter().map(|&(e, _)| ctx.pow(g, e as u64)).collect();
    let mut vals: Vec<FieldElement> = f.terms.iter().map(|&(_, c)| c).collect();
    let mut ones = 0u64;
    for _ in 0..ctx.order() {
        let v = vals.iter().fold(FieldElement::ZERO, |acc, &t| acc + t);
        ones += ctx.tr(v) as u64;
        for (t, &s) in vals.iter_mut().zip(&steps) {
            *t = ctx.mul(*t, s);
        }
    }
    // x = 0 contributes χ(0) = 1.
    Ok(1 + ctx.order() as i64 - 2 * ones as i64)
}

/// `Σ_{x ∈ F_q*} χ(f(x))`.
pub fn char_sum_star(ctx: &FieldContext, f: &SparsePoly) -> Result<i64> {
    Ok(char_sum(ctx, f)? - 1)
}

/// Full-field sums `Σ_{x ∈ GF(2^r)} χ(f(x))` for `r = 1..=n`, for `f` with
/// coefficients in GF(2). GF(2) itself is handled directly since contexts start
/// at degree 2.
pub fn curve_power_sums(f: &SparsePoly, n: u32) -> Result<Vec<i64>> {
    if f.terms.iter().any(|&(_, c)| c != FieldElement::ONE) {
        return Err(Error::BadParameter("coefficients must lie in GF(2)".into()));
    }
    let mut out = Vec::with_capacity(n as usize);
    for r in 1..=n {
        if r == 1 {
            // x^e = x on GF(2), so f(1) = (number of terms) mod 2.
            let f1 = f.terms.len() % 2;
            out.push(1 + if f1 == 0 { 1 } else { -1 });
        } else {
            out.push(char_sum(&FieldContext::with_degree(r)?, f)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SumKind {
    X3,
    X9,
    X3PlusX,
    X9PlusX3,
}

impl SumKind {
    pub const ALL: [SumKind; 4] = [SumKind::X3, SumKind::X9, SumKind::X3PlusX, SumKind::X9PlusX3];

    pub fn exponents(self) -> &'static [u32] {
        match self {
            SumKind::X3 => &[3],
            SumKind::X9 => &[9],
            SumKind::X3PlusX => &[1, 3],
            SumKind::X9PlusX3 => &[3, 9],
        }
    }

    pub fn poly(self) -> SparsePoly {
        SparsePoly::monomials(self.exponents()).expect("fixed exponent lists are valid")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SumKind::X3 => "x3",
            SumKind::X9 => "x9",
            SumKind::X3PlusX => "x3_plus_x",
            SumKind::X9PlusX3 => "x9_plus_x3",
        }
    }
}

/// Closed form of the full-field sum for even `m`, with `√q = 2^{m/2}` exact.
pub fn lemma10_closed(kind: SumKind, m: u32) -> Result<i64> {
    if m % 2 == 1 {
        return Err(Error::OddDegree { m });
    }
    if m == 0 || m > 120 {
        return Err(Error::BadParameter(format!("m = {m} outside 2..=120")));
    }
    let h = m / 2;
    let root = 1i64 << h;
    // -(-1)^{m/2}
    let sign = if h % 2 == 0 { -1 } else { 1 };
    Ok(match kind {
        SumKind::X3 => sign * 2 * root,
        SumKind::X9 => {
            if m % 3 == 0 {
                sign * 8 * root
            } else {
                sign * 2 * root
            }
        }
        SumKind::X3PlusX => match m % 8 {
            0 => -2 * root,
            4 => 2 * root,
            _ => 0,
        },
        SumKind::X9PlusX3 => match m % 8 {
            0 => -8 * root,
            4 => 4 * root,
            _ => 2 * root,
        },
    })
}

pub const GENUS: usize = 4;

/// Numerator `a₀ + a₁t + … + a₈t⁸` of the zeta function of a genus-4 curve over GF(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub coeffs: [i64; 2 * GENUS + 1],
}

/// Builds the L-polynomial from the first four point-count deviations
/// `S_r = |X(GF(2^r))| - 2^r - 1` via Newton's identities
/// `i·aᵢ = Σ_{j<i} S_{i-j} a_j`, completing `a₅..a₈` with `a_{8-i} = 2^{4-i} aᵢ`.
pub fn lpoly_build(power_sums: [i64; GENUS]) -> Result<LPolynomial> {
    let mut a = [0i64; 2 * GENUS + 1];
    a[0] = 1;
    for i in 1..=GENUS {
        let rhs: i64 = (0..i).map(|j| power_sums[i - j - 1] * a[j]).sum();
        if rhs % i as i64 != 0 {
            return Err(Error::NonIntegralCoefficient { index: i });
        }
        a[i] = rhs / i as i64;
    }
    for i in 0..GENUS {
        a[2 * GENUS - i] = (1i64 << (GENUS - i)) * a[i];
    }
    Ok(LPolynomial { coeffs: a })
}

impl LPolynomial {
    /// Predicted `S_r`, read off `t·L'(t)/L(t) = Σ_{r ≥ 1} S_r t^r`.
    pub fn power_sum(&self, r: u32) -> Result<i64> {
        Ok(*self.power_sums(r)?.last().expect("r >= 1"))
    }

    /// `S_1..=S_n`.
    pub fn power_sums(&self, n: u32) -> Result<Vec<i64>> {
        if n == 0 || n > 64 {
            return Err(Error::BadParameter(format!("r = {n} outside 1..=64")));
        }
        let a = |i: usize| self.coeffs.get(i).copied().unwrap_or(0) as i128;
        let mut s: Vec<i128> = Vec::with_capacity(n as usize);
        for i in 1..=n as usize {
            let mut v = i as i128 * a(i);
            for j in 1..i {
                v -= s[i - j - 1] * a(j);
            }
            s.push(v);
        }
        s.into_iter()
            .map(|v| i64::try_from(v).map_err(|_| Error::BadParameter("power sum overflow".into())))
            .collect()
    }

    /// `a_{8-i} = 2^{4-i} aᵢ` for `i = 0..=4`, equivalently `(2t²)⁴ L(1/2t) = L(t)`.
    pub fn satisfies_functional_equation(&self) -> bool {
        (0..=GENUS).all(|i| self.coeffs[2 * GENUS - i] == (1i64 << (GENUS - i)) * self.coeffs[i])
    }

    /// Number of points over GF(2^r) predicted by the L-polynomial.
    pub fn point_count(&self, r: u32) -> Result<i64> {
        Ok((1i64 << r) + 1 + self.power_sum(r)?)
    }
}
