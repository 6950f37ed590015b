//! Randomized laws of the dioid, matrices, symbolic intervals and linear
//! forms.

mod common;

use common::props::*;
use common::{s, BOT, TOP};
use proptest::prelude::*;
use tropical_subst::form::valid_bound;
use tropical_subst::interval::combine;
use tropical_subst::{ConcreteInterval, ExtScalar, LinearForm};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn semiring(a in scalar(), b in scalar(), c in scalar()) {
        semiring_laws(a, b, c)?;
    }

    #[test]
    fn matrices((a, b, c) in chain()) {
        matrix_laws(&a, &b, &c)?;
    }

    #[test]
    fn kleene((a, b, y) in star_candidate().prop_flat_map(|a| {
        let n = a.rows();
        (Just(a), vector_for(n), proptest::collection::vec((-8i64..=8).prop_map(ExtScalar::int), n))
    })) {
        star_laws(&a, &b, &y)?;
    }

    #[test]
    fn intervals((a, b, c) in interval_triple()) {
        interval_laws(a, b, c)?;
    }
}

fn form_over(n: usize) -> impl Strategy<Value = LinearForm> {
    (proptest::collection::vec(scalar(), n), scalar()).prop_map(|(x, h)| LinearForm::new(x, h))
}

fn point(n: usize) -> impl Strategy<Value = Vec<ExtScalar>> {
    proptest::collection::vec(scalar(), n)
}

proptest! {
    #[test]
    fn substitution_is_pointwise_sound(
        (target, var, mut repl, x, h) in (1usize..=4).prop_flat_map(|n| {
            (form_over(n), 0..n, form_over(n), point(n), finite())
        })
    ) {
        repl.set_coeff(var, BOT);
        let mut x = x;
        x[var] = repl.evaluate_at(&x, h);
        let after = target.substitute(var, &repl).unwrap();
        prop_assert_eq!(target.evaluate_at(&x, h), after.evaluate_at(&x, h));
        prop_assert!(after.coeff(var).is_bottom());
    }

    #[test]
    fn valid_bound_preserves_solutions(
        (a, v, j, y) in (1usize..=4).prop_flat_map(|n| {
            (finite(), form_over(n), 0..n, point(n))
        })
    ) {
        let row = v;
        let Some(f) = valid_bound(a, &row, j) else {
            prop_assert!(a <= row.coeff(j));
            return Ok(());
        };
        let h = s(0);
        let lhs = a.otimes(y[j]);
        let rhs = row.evaluate_at(&y, h);
        prop_assert_eq!(lhs >= rhs, y[j] >= f.evaluate_at(&y, h));
        // +∞ is left out for the upper direction: a ⊗ (+∞) ≤ v_j ⊗ (+∞)
        // holds for every finite v_j
        if y[j] != TOP {
            prop_assert_eq!(lhs <= rhs, y[j] <= f.evaluate_at(&y, h));
        }
    }

    #[test]
    fn saturated_row_is_identically_satisfied(
        (plus, minus, j) in (1usize..=4).prop_flat_map(|n| (form_over(n), form_over(n), 0..n))
    ) {
        let a = plus.coeff(j);
        if let Some(f) = valid_bound(a, &minus, j) {
            let l = plus.substitute(j, &f).unwrap();
            let w = minus.substitute(j, &f).unwrap();
            for k in 0..plus.nvars() {
                prop_assert!(l.coeff(k) >= w.coeff(k));
            }
            prop_assert!(l.h_coeff() >= w.h_coeff());
        }
    }
}

#[test]
fn combine_examples() {
    let iv = |lo, hi| ConcreteInterval::new(lo, hi).unwrap();
    assert_eq!(combine(&[iv(s(1), s(2))], &[s(0)]).unwrap(), iv(s(1), s(2)));
    assert_eq!(
        combine(&[iv(s(0), TOP), iv(s(1), TOP)], &[s(0), s(0)]).unwrap(),
        iv(s(1), TOP)
    );
    // max(2 - 4, -1 + 0) = -1 and max(2 - 1, -1 + 3) = 2
    assert_eq!(
        combine(&[iv(s(-4), s(-1)), iv(s(0), s(3))], &[s(2), s(-1)]).unwrap(),
        iv(s(-1), s(2))
    );
    assert!(combine(&[], &[]).is_err());
    assert!(combine(&[iv(s(0), s(1))], &[]).is_err());
}
