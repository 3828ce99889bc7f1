use num_complex::Complex64;
use proptest::prelude::*;
use toda_dual_core::dualops::{build_x, build_y, quadratic_algebra_relations};
use toda_dual_core::exactalg::{schwartz_zippel_equal, BigRational, MultiPoly, RatFunc, ShiftExpr};

const N: usize = 2;
const NV: usize = N + 1;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..=2, NV)), 1..4).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(NV), |acc, (c, e)| {
            &acc + &MultiPoly::monomial(NV, q(c), e)
        })
    })
}

/// Denominators as products of shifted linear forms `λ_i − λ_j + a·h + b`,
/// which is the shape that occurs in the dual operators.
fn denominator() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((1i64..=3, 0i64..=2), 0..3).prop_map(|fs| {
        fs.into_iter().fold(MultiPoly::one(NV), |acc, (a, b)| {
            let lin = &(&(&MultiPoly::var(NV, 0) - &MultiPoly::var(NV, 1)) + &MultiPoly::var(NV, 2).scale(&q(a)))
                + &MultiPoly::from_int(NV, b);
            &acc * &lin
        })
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), denominator()).prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero denominator"))
}

fn shift_expr() -> impl Strategy<Value = ShiftExpr> {
    prop::collection::vec((prop::collection::vec(-1i32..=1, N), ratfunc()), 1..3).prop_map(|ts| {
        ts.into_iter()
            .fold(ShiftExpr::zero(N), |acc, (e, c)| &acc + &ShiftExpr::term(e, c))
    })
}

fn point() -> Vec<Complex64> {
    vec![
        Complex64::new(0.37, 0.11),
        Complex64::new(-0.52, 0.3),
        Complex64::new(0.0, 0.71),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_inverts_product(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn rational_function_field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip().unwrap(), RatFunc::one(NV));
        }
    }

    #[test]
    fn rational_arithmetic_matches_evaluation(a in ratfunc(), b in ratfunc()) {
        let p = point();
        let lhs = (&a * &b).eval_complex(&p) + (&a - &b).eval_complex(&p);
        let rhs = a.eval_complex(&p) * b.eval_complex(&p) + a.eval_complex(&p) - b.eval_complex(&p);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn skew_product_is_associative(a in shift_expr(), b in shift_expr(), c in shift_expr()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn pure_shifts_compose_additively(e in prop::collection::vec(-2i32..=2, N), f in prop::collection::vec(-2i32..=2, N)) {
        let sum: Vec<i32> = e.iter().zip(&f).map(|(x, y)| x + y).collect();
        let lhs = ShiftExpr::shift(e).compose(&ShiftExpr::shift(f));
        prop_assert_eq!(lhs, ShiftExpr::shift(sum));
    }

    #[test]
    fn application_respects_composition(a in shift_expr(), b in shift_expr(), f in ratfunc()) {
        prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
    }
}

#[test]
fn three_particle_top_operator_is_a_pure_shift() {
    let x3 = build_x(3, 3, true).unwrap();
    assert_eq!(x3.exact.num_terms(), 1);
    assert_eq!(x3.exact.coeff(&[-1, -1, -1]), Some(&RatFunc::one(4)));
}

#[test]
fn three_particle_commutators() {
    let x1 = build_x(1, 3, false).unwrap().exact;
    let x2 = build_x(2, 3, false).unwrap().exact;
    let y1 = build_y(1, 3, false).unwrap().exact;
    assert!(schwartz_zippel_equal(&x1.commutator(&x2), &ShiftExpr::zero(3), 5, 11).unwrap());
    // [X^(2), Y^(1)] = h·X^(2)X^(1)
    let h = RatFunc::from_poly(MultiPoly::var(4, 3));
    let rhs = x2.compose(&x1).left_mul(&h);
    assert!(schwartz_zippel_equal(&x2.commutator(&y1), &rhs, 5, 12).unwrap());
    // the opposite sign is rejected
    assert!(!schwartz_zippel_equal(&x2.commutator(&y1), &(-&rhs), 5, 13).unwrap());
}

#[test]
fn quadratic_algebra_for_all_indices() {
    for n in 2..=3 {
        for k in 0..=n {
            for l in 0..=n {
                let o = quadratic_algebra_relations(n, k, l, 4, 99).unwrap();
                assert!(o.xx && o.xy && o.yy, "N={n} k={k} l={l}: {o:?}");
            }
        }
    }
}
