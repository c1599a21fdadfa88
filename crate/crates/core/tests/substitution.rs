mod common;

use common::{ctx, id, poly, series};
use pointderiv_core::{
    chain_rule_residual, geometric_inverse, mixed_partial_residual, second_partial, substitute,
    Assignment, DerivativeSpec, Order, Series,
};
use proptest::prelude::*;

fn letter(name: &str) -> Series {
    Series::letter(&ctx(), id(name)).unwrap()
}

/// Images with no degree-zero words, so any series may be substituted.
fn positive_poly(max_len: usize) -> impl Strategy<Value = Series> {
    poly(max_len).prop_map(|g| {
        let terms = g.terms().filter(|(w, _)| w.degree() > 0).map(|(w, c)| (w.clone(), c.clone()));
        Series::from_terms(g.context(), terms, Order::Infinite).unwrap()
    })
}

fn assign(u: &Series, v: &Series) -> Assignment {
    Assignment::new()
        .with(id("x"), u.clone())
        .unwrap()
        .with(id("y"), v.clone())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitution_is_a_homomorphism(f in poly(3), g in poly(3), u in poly(2), v in poly(2)) {
        let a = assign(&u, &v);
        let s = |h: &Series| substitute(h, &a).unwrap();
        prop_assert_eq!(s(&f.add(&g).unwrap()), s(&f).add(&s(&g)).unwrap());
        prop_assert_eq!(s(&f.mul(&g).unwrap()), s(&f).mul(&s(&g)).unwrap());
    }

    #[test]
    fn identity_assignment(f in series(4)) {
        prop_assert_eq!(substitute(&f, &assign(&letter("x"), &letter("y"))).unwrap(), f.clone());
        prop_assert_eq!(substitute(&f, &Assignment::new()).unwrap(), f);
    }

    #[test]
    fn letters_go_to_their_images(u in poly(3), v in poly(3)) {
        let a = assign(&u, &v);
        prop_assert_eq!(substitute(&letter("x"), &a).unwrap(), u);
        prop_assert_eq!(substitute(&letter("y"), &a).unwrap(), v);
        prop_assert_eq!(substitute(&letter("a"), &a).unwrap(), letter("a"));
    }

    /// Substituting into a truncation never contradicts the exact composite.
    #[test]
    fn truncated_substitution_is_sound(f in poly(4), u in positive_poly(2), v in positive_poly(2), n in 0u32..5) {
        let a = assign(&u, &v);
        let exact = substitute(&f, &a).unwrap();
        let approx = substitute(&f.truncate(n), &a).unwrap();
        match approx.valid_order() {
            Order::Finite(k) => prop_assert!(approx.eq_up_to(&exact, k).unwrap()),
            Order::Infinite => prop_assert_eq!(approx, exact),
        }
    }

    #[test]
    fn chain_rule(f in poly(3), u in poly(2), v in poly(2), beta in poly(1)) {
        let r = chain_rule_residual(&f, &u, &v, &beta, id("x"), id("y")).unwrap();
        prop_assert!(r.is_zero(), "residual {}", r);
    }

    #[test]
    fn mixed_partials(f in poly(3), beta in poly(1), gamma in poly(1)) {
        let r = mixed_partial_residual(&f, &beta, &gamma, id("x"), id("y")).unwrap();
        prop_assert!(r.is_zero(), "residual {}", r);
    }

    #[test]
    fn hausdorff_partials_commute(f in poly(4)) {
        let ctx = ctx();
        let dx = DerivativeSpec::hausdorff(&ctx, id("x")).unwrap();
        let dy = DerivativeSpec::hausdorff(&ctx, id("y")).unwrap();
        prop_assert_eq!(second_partial(&f, &dy, &dx).unwrap(), second_partial(&f, &dx, &dy).unwrap());
    }
}

#[test]
fn chain_rule_through_a_geometric_series() {
    let ctx = ctx();
    let u = geometric_inverse(&letter("x"), 5).unwrap().sub(&Series::one(&ctx)).unwrap();
    let f = letter("x").mul(&letter("a")).unwrap().mul(&letter("y")).unwrap().add(&letter("x").pow(2).unwrap()).unwrap();
    let beta = letter("b").add(&letter("x")).unwrap();
    let r = chain_rule_residual(&f, &u, &letter("y"), &beta, id("x"), id("y")).unwrap();
    assert!(r.is_empty(), "residual {r}");
    assert!(r.valid_order() >= Order::Finite(4));
}

#[test]
fn constants_cannot_be_assigned() {
    assert!(Assignment::new().with(id("a"), letter("x")).is_err());
}
