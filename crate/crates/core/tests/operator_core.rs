mod support;

use std::collections::BTreeMap;

use mumford_core::chart::Side;
use mumford_core::grassmann::MonomialSplitting;
use mumford_core::operator::*;
use mumford_core::scalar::{int, Scalar};
use mumford_core::witt::{rho, WittElement};
use num_traits::{One, Zero};
use proptest::prelude::*;
use support::*;

fn e(k: i64) -> SparseVector {
    SparseVector::from([(k, Scalar::one())])
}

fn l(n: i64) -> WittElement {
    WittElement::l(n)
}

#[test]
fn apply_examples() {
    assert!(ShiftPolyOperator::zero().apply(&e(4)).is_empty());
    let shift = ShiftPolyOperator::shift(1, IndexPolynomial::constant(Scalar::one()));
    assert_eq!(shift.apply(&e(0)), e(1));
    assert_eq!(rho(2, &l(-1)).apply(&e(3)), SparseVector::from([(2, int(-3))]));
}

#[test]
fn compose_examples() {
    let mut r = rng(1);
    let f = random_operator(&mut r, 3, 4);
    assert_eq!(ShiftPolyOperator::identity().compose(&f).unwrap(), f);
    let up = ShiftPolyOperator::shift(1, IndexPolynomial::constant(Scalar::one()));
    let down = ShiftPolyOperator::shift(-1, IndexPolynomial::linear(Scalar::zero(), Scalar::one()));
    assert_eq!(
        up.compose(&down).unwrap(),
        ShiftPolyOperator::shift(0, IndexPolynomial::linear(Scalar::zero(), Scalar::one()))
    );
    let (a, b) = (rho(1, &l(1)), rho(1, &l(-1)));
    let diff = a.compose(&b).unwrap().sub(&b.compose(&a).unwrap());
    assert_eq!(diff, ShiftPolyOperator::shift(0, IndexPolynomial::linear(int(-2), int(-2))));
    assert_eq!(diff, rho(1, &l(0)).scale(&int(2)));
}

#[test]
fn commutator_examples() {
    let mut r = rng(2);
    let f = random_operator(&mut r, 2, 3);
    assert!(f.commutator(&f).unwrap().is_zero());
    assert_eq!(rho(1, &l(1)).commutator(&rho(1, &l(-1))).unwrap(), rho(1, &l(0)).scale(&int(2)));
    let c = rho(0, &l(2)).commutator(&rho(0, &l(3))).unwrap();
    assert_eq!(c, rho(0, &l(5)).neg());
    // brute-force matrix check on a window, away from the edges
    let (lo, hi) = (-10, 10);
    let (a, b) = (dense_rho(0, &l(2), lo, hi), dense_rho(0, &l(3), lo, hi));
    let dense = c.render_dense(lo, hi);
    let n = a.len();
    for i in 0..n {
        for j in 3..n - 3 {
            let mut v = Scalar::zero();
            for k in 0..n {
                v += &a[i][k] * &b[k][j] - &b[i][k] * &a[k][j];
            }
            assert_eq!(v, dense[i][j]);
        }
    }
}

#[test]
fn block_examples() {
    let std = MonomialSplitting::standard();
    assert!(rho(1, &l(1)).block(&std, Quadrant::parse("-+").unwrap()).as_finite().unwrap().is_empty());
    let b = rho(1, &l(-2)).off_diagonal_block(&std, Side::Discrete);
    assert_eq!(b.entries(), &BTreeMap::from([((-2, 0), Scalar::one())]));
    for q in ["DD", "DK", "KD", "KK"] {
        let blk = ShiftPolyOperator::zero().block(&std, Quadrant::parse(q).unwrap());
        assert!(blk.apply(&e(-1)).is_empty() && blk.apply(&e(2)).is_empty());
    }
    assert!(Quadrant::parse("x+").is_err());
}

#[test]
fn finite_trace_examples() {
    let empty = FiniteRankBlock::new(BTreeMap::new(), Side::Discrete, Side::Discrete);
    assert_eq!(empty.trace().unwrap(), Scalar::zero());
    let id = FiniteRankBlock::identity_on([-3, -2, -1], Side::Discrete);
    assert_eq!(id.trace().unwrap(), int(3));
    let std = MonomialSplitting::standard();
    let dk = rho(1, &l(-2)).off_diagonal_block(&std, Side::Discrete);
    let kd = rho(1, &l(2)).off_diagonal_block(&std, Side::Compact);
    assert_eq!(finite_trace(&dk, &kd).unwrap(), int(-1));
    assert!(finite_trace(&dk, &dk).is_err());
    assert!(kd.trace().is_err());
}

#[test]
fn guards() {
    let p = IndexPolynomial::from_coeffs((0..=5).map(|_| Scalar::one()).collect());
    let f = ShiftPolyOperator::shift(1, p);
    assert!(matches!(f.compose(&f), Err(mumford_core::Error::DegreeGuard { .. })));
    let wide = ShiftPolyOperator::shift(40, IndexPolynomial::constant(Scalar::one()));
    assert!(matches!(wide.compose(&wide), Err(mumford_core::Error::ShiftGuard { .. })));
    let tight = OperatorLimits { max_degree: 1, max_shift: 64 };
    assert!(rho(1, &l(1)).compose_with(&rho(1, &l(2)), &tight).is_err());
}

fn operator_strategy() -> impl Strategy<Value = ShiftPolyOperator> {
    any::<u64>().prop_map(|seed| random_operator(&mut rng(seed), 3, 5))
}

fn vector_strategy() -> impl Strategy<Value = SparseVector> {
    proptest::collection::btree_map(-8i64..=8, (-5i64..=5).prop_map(int), 0..5)
        .prop_map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutator_is_bilinear(f in operator_strategy(), g in operator_strategy(), h in operator_strategy(), c in -4i64..=4) {
        let c = int(c);
        let lhs = f.scale(&c).add(&g).commutator(&h).unwrap();
        let rhs = f.commutator(&h).unwrap().scale(&c).add(&g.commutator(&h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_identity(f in operator_strategy(), g in operator_strategy(), h in operator_strategy()) {
        let a = f.commutator(&g.commutator(&h).unwrap()).unwrap();
        let b = g.commutator(&h.commutator(&f).unwrap()).unwrap();
        let c = h.commutator(&f.commutator(&g).unwrap()).unwrap();
        prop_assert!(a.add(&b).add(&c).is_zero());
    }

    #[test]
    fn apply_respects_composition(f in operator_strategy(), g in operator_strategy(), v in vector_strategy()) {
        prop_assert_eq!(f.compose(&g).unwrap().apply(&v), f.apply(&g.apply(&v)));
    }

    #[test]
    fn blocks_reassemble(f in operator_strategy(), v in vector_strategy(), which in 0usize..6) {
        let split = &sample_splittings()[which];
        let mut total = SparseVector::new();
        for q in [Quadrant::DD, Quadrant::DK, Quadrant::KD, Quadrant::KK] {
            for (k, x) in f.block(split, q).apply(&v) {
                *total.entry(k).or_insert_with(Scalar::zero) += x;
            }
        }
        total.retain(|_, x| !x.is_zero());
        prop_assert_eq!(total, f.apply(&v));
    }

    #[test]
    fn off_diagonal_entry_bound(f in operator_strategy(), which in 0usize..6) {
        let split = &sample_splittings()[which];
        let moved = (split.shift_in_set().len() + split.shift_out_set().len()) as i64;
        let fr = f.finite_part().len() as i64;
        let bound: i64 = f.shift_terms().keys().map(|m| m.abs() + 2 * moved).sum::<i64>() + fr;
        let std_bound: i64 = f.shift_terms().keys().map(|m| m.abs()).sum::<i64>() + fr;
        for side in [Side::Discrete, Side::Compact] {
            let n = f.off_diagonal_block(split, side).len() as i64;
            prop_assert!(n <= bound);
            if split.is_standard() {
                prop_assert!(n <= std_bound);
            }
        }
    }
}
