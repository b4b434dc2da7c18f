//! Dense polynomials over GF(2) packed into machine words, bit `i` holding the
//! coefficient of `x^i`.

/// Carry-less product of two 32-bit polynomials.
#[inline]
pub(crate) fn clmul(a: u32, b: u32) -> u64 {
    let a = a as u64;
    let mut b = b;
    let mut r = 0u64;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

#[inline]
pub(crate) fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// `p mod f` for a nonzero `f`.
#[inline]
pub(crate) fn rem(mut p: u64, f: u64) -> u64 {
    let df = degree(f).expect("modulus must be nonzero");
    while let Some(dp) = degree(p) {
        if dp < df {
            break;
        }
        p ^= f << (dp - df);
    }
    p
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn mulmod(a: u64, b: u64, f: u64) -> u64 {
    rem(clmul(a as u32, b as u32), f)
}

/// Ben-Or style test: `f` of degree `d` is irreducible iff
/// `gcd(f, x^(2^i) - x mod f) = 1` for all `1 <= i <= d/2`.
pub(crate) fn is_irreducible(f: u64) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    if d > 31 {
        // clmul operates on 32-bit halves.
        return false;
    }
    let mut xp = 0b10u64; // x
    for _ in 1..=d / 2 {
        xp = mulmod(xp, xp, f);
        if gcd(f, xp ^ 0b10) != 1 {
            return false;
        }
    }
    true
}
