//! Strategies and property bodies shared by the proptest suites and the
//! acceptance run.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use tropical_subst::interval::{min_of, Instantiation, IntervalKind};
use tropical_subst::matrix::{converges_to_null, fixpoint_extreme, kleene_star, FixOrder};
use tropical_subst::{Error, ExtScalar, ParamInterval, Sense, TMatrix};

use num_rational::Rational64;

pub fn finite() -> impl Strategy<Value = ExtScalar> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| ExtScalar::ratio(n, d))
}

/// Finite values with both infinities mixed in.
pub fn scalar() -> impl Strategy<Value = ExtScalar> {
    prop_oneof![
        1 => Just(ExtScalar::Bottom),
        1 => Just(ExtScalar::Top),
        6 => finite(),
    ]
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = TMatrix> {
    proptest::collection::vec(scalar(), rows * cols).prop_map(move |d| TMatrix::new(rows, cols, d).unwrap())
}

/// Three conformable matrices `p × q`, `q × r`, `r × s`.
pub fn chain() -> impl Strategy<Value = (TMatrix, TMatrix, TMatrix)> {
    (1usize..=4, 1usize..=4, 1usize..=4, 1usize..=4)
        .prop_flat_map(|(p, q, r, s)| (matrix(p, q), matrix(q, r), matrix(r, s)))
}

/// A square matrix whose entries are `-∞` or negative integers, with the
/// occasional nonnegative entry so the divergent branch is exercised too.
pub fn star_candidate() -> impl Strategy<Value = TMatrix> {
    (1usize..=5).prop_flat_map(|n| {
        let entry = prop_oneof![
            3 => Just(ExtScalar::Bottom),
            4 => (-6i64..=-1).prop_map(ExtScalar::int),
            1 => (0i64..=2).prop_map(ExtScalar::int),
        ];
        proptest::collection::vec(entry, n * n).prop_map(move |d| TMatrix::new(n, n, d).unwrap())
    })
}

pub fn vector_for(n: usize) -> impl Strategy<Value = TMatrix> {
    let entry = prop_oneof![1 => Just(ExtScalar::Bottom), 4 => (-6i64..=6).prop_map(ExtScalar::int)];
    proptest::collection::vec(entry, n).prop_map(TMatrix::column)
}

pub fn semiring_laws(a: ExtScalar, b: ExtScalar, c: ExtScalar) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.oplus(b).oplus(c), a.oplus(b.oplus(c)));
    prop_assert_eq!(a.oplus(b), b.oplus(a));
    prop_assert_eq!(a.oplus(a), a);
    prop_assert_eq!(a.oplus(ExtScalar::Bottom), a);
    prop_assert_eq!(a.otimes(b).otimes(c), a.otimes(b.otimes(c)));
    prop_assert_eq!(a.otimes(b), b.otimes(a));
    prop_assert_eq!(a.otimes(ExtScalar::one()), a);
    prop_assert_eq!(a.otimes(ExtScalar::Bottom), ExtScalar::Bottom);
    prop_assert_eq!(a.otimes(b.oplus(c)), a.otimes(b).oplus(a.otimes(c)));
    prop_assert_eq!(a <= b, a.oplus(b) == b);
    Ok(())
}

pub fn matrix_laws(a: &TMatrix, b: &TMatrix, c: &TMatrix) -> Result<(), TestCaseError> {
    let ab_c = a.mat_mul(b).unwrap().mat_mul(c).unwrap();
    let a_bc = a.mat_mul(&b.mat_mul(c).unwrap()).unwrap();
    prop_assert_eq!(ab_c, a_bc);
    prop_assert_eq!(&a.mat_mul(&TMatrix::identity(a.cols())).unwrap(), a);
    prop_assert_eq!(&TMatrix::identity(a.rows()).mat_mul(a).unwrap(), a);
    let zero = TMatrix::null(b.rows(), 2);
    prop_assert!(a.mat_mul(&zero).unwrap().is_null());
    Ok(())
}

pub fn star_laws(a: &TMatrix, b: &TMatrix, y: &[ExtScalar]) -> Result<(), TestCaseError> {
    let n = a.rows();
    if !converges_to_null(a).unwrap() {
        prop_assert_eq!(kleene_star(a), Err(Error::Divergent));
        return Ok(());
    }
    let star = kleene_star(a).unwrap();
    let unfolded = TMatrix::identity(n).oplus(&a.mat_mul(&star).unwrap()).unwrap();
    prop_assert_eq!(&star, &unfolded);

    let x = fixpoint_extreme(a, b, FixOrder::Leq).unwrap();
    prop_assert_eq!(&x, &fixpoint_extreme(a, b, FixOrder::Geq).unwrap());
    let rhs = a.mat_mul(&x).unwrap().oplus(b).unwrap();
    prop_assert_eq!(&x, &rhs);

    // any sub-solution lies below the fixpoint, any super-solution above
    let yv = TMatrix::column(y.to_vec());
    let ay_b = a.mat_mul(&yv).unwrap().oplus(b).unwrap();
    if yv.leq(&ay_b).unwrap() {
        prop_assert!(yv.leq(&x).unwrap());
    }
    if yv.geq(&ay_b).unwrap() {
        prop_assert!(yv.geq(&x).unwrap());
    }
    Ok(())
}

pub fn interval(mode: Sense) -> impl Strategy<Value = ParamInterval> {
    let coeff = prop_oneof![1 => Just(ExtScalar::Bottom), 8 => (-5i64..=5).prop_map(ExtScalar::int)];
    (prop_oneof![Just(IntervalKind::Lambda), Just(IntervalKind::Mu)], coeff)
        .prop_filter_map("degenerate encoding", move |(k, c)| ParamInterval::new(mode, k, c).ok())
}

pub fn sense() -> impl Strategy<Value = Sense> {
    prop_oneof![Just(Sense::Min), Just(Sense::Max)]
}

pub fn interval_triple() -> impl Strategy<Value = (ParamInterval, ParamInterval, ParamInterval)> {
    sense().prop_flat_map(|m| (interval(m), interval(m), interval(m)))
}

/// Total order, and agreement with the realized intervals at
/// `λ = 0, μ = ±(1 + 2·5)`.
pub fn interval_laws(a: ParamInterval, b: ParamInterval, c: ParamInterval) -> Result<(), TestCaseError> {
    let ab = a.includes(&b).unwrap();
    let ba = b.includes(&a).unwrap();
    prop_assert!(ab || ba, "incomparable {:?} {:?}", a, b);
    if ab && ba {
        prop_assert_eq!(a, b);
    }
    if a.includes(&b).unwrap() && b.includes(&c).unwrap() {
        prop_assert!(a.includes(&c).unwrap());
    }

    let inst = Instantiation::for_bound(a.mode(), Rational64::from_integer(5));
    let (ra, rb) = (a.realize(&inst), b.realize(&inst));
    prop_assert_eq!(ab, ra.contains(&rb));
    prop_assert_eq!(ba, rb.contains(&ra));

    if a.kind() == b.kind() && b.kind() == c.kind() {
        let (tau, argmin) = min_of(&[(0, a), (1, b), (2, c)]).unwrap();
        let meet = ra
            .intersection(&rb)
            .and_then(|r| r.intersection(&c.realize(&inst)))
            .expect("nested intervals intersect");
        prop_assert_eq!(tau.realize(&inst), meet);
        for (k, iv) in [a, b, c].iter().enumerate() {
            prop_assert_eq!(argmin.contains(&k), *iv == tau);
        }
    }
    Ok(())
}

/// Entries uniform over `-5..=5`, `-∞` with probability `bottom_pct / 100`.
pub fn entry(bottom_pct: u32) -> impl Strategy<Value = ExtScalar> {
    let finite = 100 - bottom_pct;
    prop_oneof![
        bottom_pct => Just(ExtScalar::Bottom),
        finite => (-5i64..=5).prop_map(ExtScalar::int),
    ]
}

pub fn problem(max_n: usize, max_m: usize) -> impl Strategy<Value = tropical_subst::Problem> {
    (1..=max_n, 0..=max_m, sense()).prop_flat_map(|(n, m, sense)| {
        let v = |len| proptest::collection::vec(entry(30), len);
        (v(m * n), v(m), v(m * n), v(m), v(n)).prop_map(move |(a, b, c, d, cost)| {
            tropical_subst::Problem::new(
                sense,
                TMatrix::new(m, n, a).unwrap(),
                b,
                TMatrix::new(m, n, c).unwrap(),
                d,
                cost,
                ExtScalar::Bottom,
            )
            .unwrap()
        })
    })
}
