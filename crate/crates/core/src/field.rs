//! Arithmetic in GF(2^m), 2 <= m <= 30, in a polynomial basis.
//!
//! Elements are packed into a `u32`: bit `i` is the coefficient of `x^i`.
//! The textual encoding is the hexadecimal value of that integer.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::poly2;

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 30;
/// Largest degree for which O(q)-memory lookup tables are built without `lift_caps`.
pub const TABLE_CAP: u32 = 24;

/// An element of GF(2^m) in polynomial-basis coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps an encoding already known to be below `q`.
    #[inline]
    pub(crate) const fn raw(bits: u32) -> FieldElement {
        FieldElement(bits)
    }

    /// Integer encoding `Σ coords[i]·2^i`.
    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    /// Coefficient of `x^i`.
    pub fn coord(self, i: u32) -> bool {
        i < 32 && (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

pub(crate) struct LogTables {
    pub(crate) exp: Vec<u32>,
    pub(crate) log: Vec<u32>,
}

/// Lazily-built inverse images used by the classifier: for each element, the
/// smallest-encoding preimage under `x ↦ x^4 + x^3` and under `x ↦ x^3`
/// (`u32::MAX` when there is none).
pub(crate) struct PreimageTables {
    pub(crate) quartic: Vec<u32>,
    pub(crate) cube: Vec<u32>,
}

const NO_PREIMAGE: u32 = u32::MAX;

/// An immutable description of GF(2^m).
///
/// Lookup tables are built on first use behind a [`OnceLock`], so a context can
/// be shared by reference across worker threads.
pub struct FieldContext {
    m: u32,
    modulus: u64,
    q: u64,
    generator: FieldElement,
    trace_mask: u32,
    order_primes: Vec<u64>,
    caps_lifted: bool,
    logs: OnceLock<LogTables>,
    preimages: OnceLock<PreimageTables>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("generator", &self.generator)
            .finish()
    }
}

impl Clone for FieldContext {
    fn clone(&self) -> Self {
        FieldContext {
            m: self.m,
            modulus: self.modulus,
            q: self.q,
            generator: self.generator,
            trace_mask: self.trace_mask,
            order_primes: self.order_primes.clone(),
            caps_lifted: self.caps_lifted,
            logs: OnceLock::new(),
            preimages: OnceLock::new(),
        }
    }
}

/// Distinct prime divisors of `n` by trial division.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `n` (n >= 1), if it exists.
pub(crate) fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

/// Smallest-encoding irreducible polynomial of degree `m` over GF(2).
pub fn default_modulus(m: u32) -> Result<u64> {
    check_degree(m)?;
    let lo = 1u64 << m;
    (lo + 1..lo << 1)
        .step_by(2)
        .find(|&f| poly2::is_irreducible(f))
        .ok_or(Error::DegreeOutOfRange { m })
}

fn check_degree(m: u32) -> Result<()> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&m) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange { m })
    }
}

impl FieldContext {
    /// Builds GF(2^m) over `modulus` (or the smallest irreducible polynomial of
    /// degree `m` when omitted). The generator is the smallest-encoding element of
    /// full multiplicative order.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<FieldContext> {
        check_degree(m)?;
        let modulus = match modulus {
            Some(f) => {
                if poly2::degree(f) != Some(m) || f & 1 == 0 || !poly2::is_irreducible(f) {
                    return Err(Error::NotIrreducible { modulus: f, m });
                }
                f
            }
            None => default_modulus(m)?,
        };
        let q = 1u64 << m;
        let mut ctx = FieldContext {
            m,
            modulus,
            q,
            generator: FieldElement::ONE,
            trace_mask: 0,
            order_primes: prime_divisors(q - 1),
            caps_lifted: false,
            logs: OnceLock::new(),
            preimages: OnceLock::new(),
        };
        let mut mask = 0u32;
        for i in 0..m {
            if ctx.trace(FieldElement(1 << i), 1)? == FieldElement::ONE {
                mask |= 1 << i;
            }
        }
        ctx.trace_mask = mask;
        ctx.generator = (2..q as u32)
            .map(FieldElement)
            .find(|&g| ctx.has_full_order(g))
            .expect("a cyclic group always has a generator");
        Ok(ctx)
    }

    /// Shorthand for `FieldContext::new(m, None)`.
    pub fn with_degree(m: u32) -> Result<FieldContext> {
        FieldContext::new(m, None)
    }

    /// Disables the enumeration and table caps of every operation on this context.
    pub fn lift_caps(mut self) -> FieldContext {
        self.caps_lifted = true;
        self
    }

    pub fn caps_lifted(&self) -> bool {
        self.caps_lifted
    }

    pub(crate) fn check_cap(&self, cap: u32) -> Result<()> {
        if self.m > cap && !self.caps_lifted {
            Err(Error::FieldTooLarge { m: self.m, cap })
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        if self.m % 2 == 1 {
            Err(Error::OddDegree { m: self.m })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    /// The modulus as an integer, bit `i` = coefficient of `x^i` (bit `m` set).
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Modulus coefficients, constant term first (length `m + 1`).
    pub fn modulus_coeffs(&self) -> Vec<u8> {
        (0..=self.m).map(|i| ((self.modulus >> i) & 1) as u8).collect()
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement> {
        if bits < self.q {
            Ok(FieldElement(bits as u32))
        } else {
            Err(Error::InvalidElement(format!("{bits:#x} has more than {} bits", self.m)))
        }
    }

    /// Parses the hexadecimal element encoding (an optional `0x` prefix is accepted).
    pub fn parse_hex(&self, s: &str) -> Result<FieldElement> {
        let t = s.trim();
        let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
        let bits = u64::from_str_radix(t, 16).map_err(|_| Error::InvalidElement(s.to_string()))?;
        self.element(bits)
    }

    pub fn from_coords(&self, coords: &[bool]) -> Result<FieldElement> {
        if coords.len() != self.m as usize {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.m,
                coords.len()
            )));
        }
        let bits = coords.iter().enumerate().fold(0u32, |acc, (i, &c)| acc | ((c as u32) << i));
        Ok(FieldElement(bits))
    }

    pub fn coords(&self, x: FieldElement) -> Vec<bool> {
        (0..self.m).map(|i| x.coord(i)).collect()
    }

    /// Every element of the field in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q as u32).map(FieldElement)
    }

    /// Every nonzero element in encoding order.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q as u32).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    fn reduce(&self, mut r: u64) -> FieldElement {
        let m = self.m;
        while r >> m != 0 {
            let top = 63 - r.leading_zeros();
            r ^= self.modulus << (top - m);
        }
        FieldElement(r as u32)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.reduce(poly2::clmul(a.0, b.0))
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        // Squaring over GF(2) spreads the bits: Σ aᵢxⁱ ↦ Σ aᵢx^{2i}.
        let mut r = 0u64;
        let mut b = a.0;
        while b != 0 {
            let i = b.trailing_zeros();
            r |= 1u64 << (2 * i);
            b &= b - 1;
        }
        self.reduce(r)
    }

    /// `a^e`, with `e` reduced modulo `q - 1` for nonzero `a`; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.is_zero() {
            return if e == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let mut e = e % self.order();
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 1))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^(2^k)`.
    pub fn frobenius(&self, x: FieldElement, k: u64) -> FieldElement {
        let mut y = x;
        for _ in 0..k % self.m as u64 {
            y = self.square(y);
        }
        y
    }

    /// Relative trace onto GF(2^s): `Σ_{j < m/s} x^(2^(js))`.
    pub fn trace(&self, x: FieldElement, s: u32) -> Result<FieldElement> {
        if s == 0 || self.m % s != 0 {
            return Err(Error::NonDivisorSubfieldDegree { s, m: self.m });
        }
        let mut acc = x;
        let mut y = x;
        for _ in 1..self.m / s {
            for _ in 0..s {
                y = self.square(y);
            }
            acc += y;
        }
        Ok(acc)
    }

    /// Absolute trace `Tr(x) ∈ {0, 1}`, read off a precomputed linear mask.
    #[inline]
    pub fn tr(&self, x: FieldElement) -> u8 {
        ((x.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// `Tr_2(x)` for even `m`.
    pub fn tr2(&self, x: FieldElement) -> Result<FieldElement> {
        self.trace(x, 2)
    }

    /// The canonical additive character `(-1)^Tr(x)`.
    #[inline]
    pub fn chi(&self, x: FieldElement) -> i32 {
        1 - 2 * self.tr(x) as i32
    }

    fn has_full_order(&self, g: FieldElement) -> bool {
        let n = self.order();
        self.pow(g, n) == FieldElement::ONE
            && self.order_primes.iter().all(|&p| self.pow(g, n / p) != FieldElement::ONE)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut n = self.order();
        for &p in &self.order_primes {
            while n % p == 0 && self.pow(a, n / p) == FieldElement::ONE {
                n /= p;
            }
        }
        Ok(n)
    }

    /// Distinct primes dividing `q - 1`.
    pub fn order_primes(&self) -> &[u64] {
        &self.order_primes
    }

    pub(crate) fn log_tables(&self) -> Result<&LogTables> {
        self.check_cap(TABLE_CAP)?;
        Ok(self.logs.get_or_init(|| {
            let n = self.order() as usize;
            let mut exp = Vec::with_capacity(n);
            let mut log = vec![0u32; self.q as usize];
            let mut x = FieldElement::ONE;
            for i in 0..n {
                exp.push(x.0);
                log[x.0 as usize] = i as u32;
                x = self.mul(x, self.generator);
            }
            LogTables { exp, log }
        }))
    }

    /// Discrete logarithm to the base of the context generator (table-backed).
    pub fn log(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.log_tables()?.log[a.0 as usize] as u64)
    }

    pub(crate) fn preimage_tables(&self) -> Result<&PreimageTables> {
        self.check_cap(TABLE_CAP)?;
        Ok(self.preimages.get_or_init(|| {
            let q = self.q as usize;
            let mut quartic = vec![NO_PREIMAGE; q];
            let mut cube = vec![NO_PREIMAGE; q];
            for x in self.elements() {
                let x2 = self.square(x);
                let x3 = self.mul(x2, x);
                let x4 = self.square(x2);
                let slot = &mut quartic[(x4 + x3).0 as usize];
                if *slot == NO_PREIMAGE {
                    *slot = x.0;
                }
                let slot = &mut cube[x3.0 as usize];
                if *slot == NO_PREIMAGE {
                    *slot = x.0;
                }
            }
            PreimageTables { quartic, cube }
        }))
    }

    /// Smallest-encoding `c` with `c^4 + c^3 = a`, from the lazily-built table.
    pub(crate) fn quartic_preimage_lookup(&self, a: FieldElement) -> Result<Option<FieldElement>> {
        let t = self.preimage_tables()?;
        Ok(match t.quartic[a.0 as usize] {
            NO_PREIMAGE => None,
            c => Some(FieldElement(c)),
        })
    }

    /// Smallest-encoding cube root of `a`, from the lazily-built table.
    pub(crate) fn cube_root_lookup(&self, a: FieldElement) -> Result<Option<FieldElement>> {
        let t = self.preimage_tables()?;
        Ok(match t.cube[a.0 as usize] {
            NO_PREIMAGE => None,
            b => Some(FieldElement(b)),
        })
    }

    /// Some `b` with `b^d = a`, or `None` when `a` is not a `d`-th power.
    ///
    /// Uses a single exponentiation when `gcd(d, (q-1)/d) = 1` and the discrete
    /// log table otherwise.
    pub fn power_residue_root(&self, a: FieldElement, d: u64) -> Result<Option<FieldElement>> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let order = self.order();
        if d == 0 || order % d != 0 {
            return Err(Error::NonDivisorOrder { d, order });
        }
        let n = order / d;
        if self.pow(a, n) != FieldElement::ONE {
            return Ok(None);
        }
        if let Some(e) = inv_mod(d, n) {
            // a lies in the subgroup of order n, where raising to d is a bijection.
            return Ok(Some(self.pow(a, e)));
        }
        let t = self.log_tables()?;
        let l = t.log[a.0 as usize] as u64;
        debug_assert_eq!(l % d, 0);
        Ok(Some(FieldElement(t.exp[(l / d) as usize])))
    }

    /// `true` iff `a = b^d` for some `b` (with `d | q - 1`).
    pub fn is_power(&self, a: FieldElement, d: u64) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let order = self.order();
        if d == 0 || order % d != 0 {
            return Err(Error::NonDivisorOrder { d, order });
        }
        Ok(self.pow(a, order / d) == FieldElement::ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> FieldContext {
        FieldContext::with_degree(m).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf(2).modulus(), 0b111);
        assert_eq!(gf(4).modulus(), 19);
        assert_eq!(gf(3).modulus(), 0b1011);
        assert_eq!(gf(4).modulus_coeffs(), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn smallest_irreducible_by_sieve() {
        // Sieve: mark every product of two polynomials of positive degree.
        for m in 2..=8u32 {
            let top = 1u64 << (m + 1);
            let mut reducible = vec![false; top as usize];
            for a in 2..top {
                for b in 2..top {
                    let p = poly2::clmul(a as u32, b as u32);
                    if p < top {
                        reducible[p as usize] = true;
                    }
                }
            }
            let expected = ((1u64 << m)..top).find(|&f| !reducible[f as usize]).unwrap();
            assert_eq!(default_modulus(m).unwrap(), expected, "m = {m}");
        }
    }

    #[test]
    fn rejects_reducible_and_bad_degrees() {
        assert_eq!(
            FieldContext::new(4, Some(0b10101)).unwrap_err(),
            Error::NotIrreducible { modulus: 0b10101, m: 4 }
        );
        assert!(matches!(FieldContext::new(4, Some(0b1011)), Err(Error::NotIrreducible { .. })));
        assert_eq!(FieldContext::with_degree(1).unwrap_err(), Error::DegreeOutOfRange { m: 1 });
        assert_eq!(FieldContext::with_degree(31).unwrap_err(), Error::DegreeOutOfRange { m: 31 });
        assert!(FieldContext::new(4, Some(0b11001)).is_ok());
    }

    #[test]
    fn gf4_arithmetic() {
        let k = gf(2);
        let x = FieldElement(0b10);
        assert_eq!(k.mul(x, x), FieldElement(0b11));
        assert_eq!(k.inv(x).unwrap(), FieldElement(0b11));
        assert_eq!(k.inv(FieldElement::ZERO), Err(Error::DivisionByZero));
        assert_eq!(k.tr(x), 1);
        assert_eq!(k.trace(x, 1).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn generator_has_full_order() {
        for m in 2..=MAX_DEGREE {
            let k = gf(m);
            let g = k.generator();
            assert_eq!(k.pow(g, k.order()), FieldElement::ONE);
            for &p in k.order_primes() {
                assert_ne!(k.pow(g, k.order() / p), FieldElement::ONE, "m = {m}, p = {p}");
            }
        }
    }

    #[test]
    fn generator_is_smallest_primitive() {
        for m in 2..=10 {
            let k = gf(m);
            let first = k.nonzero().find(|&a| k.element_order(a).unwrap() == k.order()).unwrap();
            assert_eq!(first, k.generator());
        }
    }

    #[test]
    fn trace_values() {
        for m in [4u32, 6, 8] {
            let k = gf(m);
            assert_eq!(k.tr(FieldElement::ONE), 0);
        }
        assert_eq!(gf(5).tr(FieldElement::ONE), 1);
        let k = gf(4);
        assert_eq!(k.trace(FieldElement::ONE, 2).unwrap(), FieldElement::ZERO);
        assert_eq!(
            k.trace(FieldElement::ONE, 3),
            Err(Error::NonDivisorSubfieldDegree { s: 3, m: 4 })
        );
    }

    #[test]
    fn trace_mask_matches_frobenius_sum() {
        for m in 2..=12 {
            let k = gf(m);
            for x in k.elements() {
                let t = k.trace(x, 1).unwrap();
                assert!(t.bits() <= 1);
                assert_eq!(t.bits() as u8, k.tr(x));
            }
        }
    }

    #[test]
    fn trace_balance_and_orthogonality() {
        for m in 2..=12 {
            let k = gf(m);
            let ones = k.elements().filter(|&x| k.tr(x) == 1).count() as u64;
            assert_eq!(ones, k.q() / 2);
            assert_eq!(k.elements().map(|x| k.chi(x)).sum::<i32>(), 0);
        }
    }

    #[test]
    fn subfield_traces_land_in_subfield() {
        let k = gf(12);
        for s in [1u32, 2, 3, 4, 6, 12] {
            for x in k.elements().step_by(37) {
                let t = k.trace(x, s).unwrap();
                assert_eq!(k.frobenius(t, s as u64), t);
            }
        }
    }

    #[test]
    fn power_residue_roots() {
        for m in [4u32, 6, 8, 9, 10, 12] {
            let k = gf(m);
            let n = k.order();
            let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            for &d in &divisors {
                let mut hits = 0u64;
                for a in k.nonzero() {
                    match k.power_residue_root(a, d).unwrap() {
                        Some(b) => {
                            assert_eq!(k.pow(b, d), a, "m={m} d={d} a={a}");
                            hits += 1;
                        }
                        None => assert!(!k.is_power(a, d).unwrap()),
                    }
                }
                assert_eq!(hits, n / d, "m={m} d={d}");
            }
        }
    }

    #[test]
    fn power_residue_root_examples() {
        let k = gf(6);
        let g = k.generator();
        let a = k.pow(g, 3);
        assert_eq!(k.power_residue_root(a, 1).unwrap(), Some(a));
        let r = k.power_residue_root(a, 3).unwrap().unwrap();
        assert_eq!(k.pow(r, 3), a);
        assert_eq!(k.power_residue_root(g, 3).unwrap(), None);
        assert_eq!(k.power_residue_root(FieldElement::ZERO, 3), Err(Error::ZeroInput));
        assert_eq!(
            k.power_residue_root(g, 5),
            Err(Error::NonDivisorOrder { d: 5, order: 63 })
        );
    }

    #[test]
    fn hex_and_coords() {
        let k = gf(6);
        let x = k.parse_hex("0x2b").unwrap();
        assert_eq!(x.bits(), 0x2b);
        assert_eq!(x.to_hex(), "2b");
        assert!(k.parse_hex("40").is_err());
        assert!(k.parse_hex("zz").is_err());
        let c = k.coords(x);
        assert_eq!(c.len(), 6);
        assert_eq!(k.from_coords(&c).unwrap(), x);
        assert_eq!(k.coords(FieldElement::ONE)[0], true);
    }

    #[test]
    fn caps() {
        let k = gf(26);
        assert_eq!(k.log(k.generator()), Err(Error::FieldTooLarge { m: 26, cap: 24 }));
    }

    #[test]
    fn inv_mod_works() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(3, 21), None);
        assert_eq!(inv_mod(5, 1), Some(0));
    }
}
