use kloost::charsum::lpoly_build;
use kloost::equation::{count_solutions, eval_lhs};
use kloost::kloosterman::kloosterman_direct;
use kloost::{FieldContext, FieldElement};
use proptest::prelude::*;

fn field(m: u32) -> FieldContext {
    FieldContext::with_degree(m).unwrap()
}

fn elem(f: &FieldContext, bits: u32) -> FieldElement {
    f.element((bits as u64) & (f.q() - 1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(m in 2u32..=30, a: u32, b: u32, c: u32) {
        let f = field(m);
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
        prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
        prop_assert_eq!(a + a, FieldElement::ZERO);
    }

    #[test]
    fn inverses(m in 2u32..=30, a: u32) {
        let f = field(m);
        let a = elem(&f, a);
        prop_assume!(!a.is_zero());
        let i = f.inv(a).unwrap();
        prop_assert_eq!(f.mul(a, i), FieldElement::ONE);
        prop_assert_eq!(f.pow(a, f.order()), FieldElement::ONE);
        prop_assert_eq!(f.pow(a, f.order() - 1), i);
    }

    #[test]
    fn frobenius_and_trace(m in 2u32..=30, a: u32, b: u32, k in 0u64..64) {
        let f = field(m);
        let (a, b) = (elem(&f, a), elem(&f, b));
        prop_assert_eq!(f.frobenius(a + b, k), f.frobenius(a, k) + f.frobenius(b, k));
        prop_assert_eq!(f.frobenius(a, m as u64), a);
        prop_assert_eq!(f.tr(a + b), f.tr(a) ^ f.tr(b));
        prop_assert_eq!(f.tr(f.square(a)), f.tr(a));
        prop_assert_eq!(f.chi(a + b), f.chi(a) * f.chi(b));
    }

    #[test]
    fn pow_adds_exponents(m in 2u32..=30, a: u32, e1 in 0u64..1 << 40, e2 in 0u64..1 << 40) {
        let f = field(m);
        let a = elem(&f, a);
        prop_assert_eq!(f.mul(f.pow(a, e1), f.pow(a, e2)), f.pow(a, e1 + e2));
    }

    #[test]
    fn lpoly_round_trip(s in prop::array::uniform4(-40i64..=40)) {
        if let Ok(l) = lpoly_build(s) {
            prop_assert_eq!(l.power_sums(4).unwrap(), s.to_vec());
            prop_assert!(l.satisfies_functional_equation());
            prop_assert_eq!(l.coeffs[0], 1);
        }
    }

    #[test]
    fn kloosterman_frobenius_invariant(m in 3u32..=12, a: u32) {
        let f = field(m);
        let a = elem(&f, a);
        prop_assume!(!a.is_zero());
        let k = kloosterman_direct(&f, a).unwrap().value();
        prop_assert_eq!(kloosterman_direct(&f, f.square(a)).unwrap().value(), k);
        prop_assert_eq!(kloosterman_direct(&f, f.frobenius(a, 3)).unwrap().value(), k);
    }

    #[test]
    fn image_points_are_counted(m in 2u32..=30, k in 1u32..=62, x: u32) {
        let f = field(m);
        let x = elem(&f, x);
        let a = eval_lhs(&f, k, x);
        prop_assume!(!a.is_zero());
        let r = count_solutions(&f, k, a).unwrap();
        prop_assert!(r.count == 1 || r.count == 1u64 << r.s, "count {}", r.count);
    }
}
