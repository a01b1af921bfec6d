mod support;

use std::collections::BTreeMap;

use mumford_core::chart::Matrix;
use mumford_core::flow::*;
use mumford_core::grassmann::{det_fiber_dims, virtual_index, ChartPoint, MonomialSplitting};
use mumford_core::jet::{Jet, JetSpace, Variable};
use mumford_core::operator::ShiftPolyOperator;
use mumford_core::scalar::{frac, int, Scalar};
use mumford_core::witt::{alpha_cochain, rho, WittElement};
use num_traits::{One, Zero};
use support::*;

fn l(n: i64) -> WittElement {
    WittElement::l(n)
}

/// Coefficients of `s^n` of a one-variable jet matrix.
fn by_degree(a: &Matrix<i64, Jet>, n: u32) -> BTreeMap<(i64, i64), Scalar> {
    a.iter()
        .filter_map(|(k, v)| {
            let c = v.coefficient(&[n]);
            (!c.is_zero()).then_some((*k, c))
        })
        .collect()
}

#[test]
fn zero_generator_is_stationary() {
    let mut r = rng(3);
    let p = random_chart_point(&mut r, &MonomialSplitting::standard(), 3);
    let out = flow_jet(&WittElement::zero(), &p, 1, 4).unwrap();
    assert_eq!(out.phi, Jet::one(&out.space));
    for (k, v) in p.entries() {
        assert_eq!(out.a[k], Jet::constant(&out.space, v.clone()));
    }
    assert_eq!(out.a.len(), p.entries().len());
}

#[test]
fn first_order_at_origin() {
    for split in sample_splittings() {
        for x in [l(-2), l(1), l(0).add(&l(3)), l(-1).scale(&frac(2, 3))] {
            let p = ChartPoint::origin(split.clone());
            let out = flow_jet(&x, &p, 1, 1).unwrap();
            let f = rho(1, &x);
            let kd = f.off_diagonal_block(&split, mumford_core::chart::Side::Compact);
            let expected: BTreeMap<_, _> = kd.entries().iter().map(|(k, v)| (*k, -v)).collect();
            assert_eq!(by_degree(&out.a, 1), expected);
            assert!(by_degree(&out.a, 0).is_empty());
            assert_eq!(out.phi.coefficient(&[1]), alpha_cochain(&f, &split));
            assert_eq!(out.phi.constant_term(), Scalar::one());
        }
    }
}

#[test]
fn dense_ode_oracle_order_four() {
    let mut r = rng(21);
    let nonstandard = MonomialSplitting::new([0, 2], [-3]).unwrap();
    let cases: Vec<(WittElement, i64, ChartPoint)> = vec![
        (l(-2), 1, ChartPoint::standard_origin()),
        (l(2), 2, ChartPoint::standard_origin()),
        (l(1).add(&l(-1)), 1, random_chart_point(&mut r, &MonomialSplitting::standard(), 3)),
        (l(-3).scale(&frac(1, 2)), 2, random_chart_point(&mut r, &MonomialSplitting::standard(), 2)),
        (l(0).add(&l(2).scale(&frac(-1, 3))), 0, random_chart_point(&mut r, &MonomialSplitting::standard(), 3)),
        (l(-1), -1, ChartPoint::origin(nonstandard.clone())),
        (l(2).add(&l(-2)), 1, random_chart_point(&mut r, &nonstandard, 3)),
        (l(1), 3, random_chart_point(&mut r, &MonomialSplitting::new([0], [-1]).unwrap(), 2)),
        (l(-2).add(&l(1)), 2, random_chart_point(&mut r, &MonomialSplitting::new([], [-1]).unwrap(), 3)),
        (l(3), 1, random_chart_point(&mut r, &MonomialSplitting::new([1, 3, 5], [-2, -4]).unwrap(), 3)),
    ];
    for (x, j, p) in cases {
        let out = flow_jet(&x, &p, j, 4).unwrap();
        let (dense_a, dense_phi) = dense_flow(j, &x, &p, -24, 24, 4);
        for n in 0..=4u32 {
            assert_eq!(by_degree(&out.a, n), dense_a[n as usize], "A_{n} for {x} j={j} at {p:?}");
            assert_eq!(out.phi.coefficient(&[n]), dense_phi[n as usize], "phi_{n} for {x} j={j}");
        }
    }
}

#[test]
fn reparametrization() {
    let mut r = rng(5);
    for split in sample_splittings() {
        let p = random_chart_point(&mut r, &split, 2);
        let x = random_witt(&mut r, 3, 2);
        let c = frac(-3, 2);
        let scaled = flow_jet(&x.scale(&c), &p, 2, 4).unwrap();
        let plain = flow_jet(&x, &p, 2, 4).unwrap();
        assert_eq!(scaled.phi, plain.phi.rescale_variable(0, &c));
        let rescaled: Matrix<i64, Jet> = plain
            .a
            .iter()
            .map(|(k, v)| (*k, v.rescale_variable(0, &c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        assert_eq!(scaled.a, rescaled);
    }
}

#[test]
fn mumford_jet_single_generator_matches_flow_jet() {
    let base = WeightedPair::default();
    let x = l(-2).add(&l(1).scale(&frac(1, 2)));
    let mj = mumford_jet(&base, &[NamedGenerator::even("s", x.clone())], 3).unwrap();
    let f2 = flow_jet(&x, &base.p2, 2, 3).unwrap();
    let f1 = flow_jet(&x, &base.p1, 1, 3).unwrap();
    assert_eq!(mj.a2, f2.a);
    assert_eq!(mj.a1, f1.a);
    // log φ = w2 log φ₂ + w1 log φ₁: compare through φ = φ₂^{w2} φ₁^{w1}
    let mut expected = Jet::one(&f2.space);
    for _ in 0..base.w2 {
        expected = expected.mul(&f2.phi);
    }
    let inv = power_series_inverse(&f1.phi);
    for _ in 0..(-base.w1) {
        expected = expected.mul(&inv);
    }
    assert_eq!(mj.phi, expected);
}

fn power_series_inverse(j: &Jet) -> Jet {
    // 1/(1 + h) = Σ (-h)^k, h nilpotent to the truncation order
    let one = Jet::one(j.space());
    let h = j.sub(&one);
    let mut term = one.clone();
    let mut acc = one.clone();
    for _ in 0..=j.space().order() {
        term = term.mul(&h.neg());
        acc = acc.add(&term);
    }
    acc
}

#[test]
fn empty_generator_list_is_constant() {
    let base = WeightedPair::default();
    let mj = mumford_jet(&base, &[], 4).unwrap();
    assert_eq!(mj.phi, Jet::one(&mj.space));
    assert!(mj.a1.is_empty() && mj.a2.is_empty());
}

#[test]
fn odd_variable_rejected() {
    let g = NamedGenerator::new("σ", mumford_core::Parity::Odd, l(1));
    assert!(mumford_jet(&WeightedPair::default(), &[g], 2).is_err());
}

#[test]
fn phi_multiplicative_in_weights() {
    let mut r = rng(9);
    let p2 = random_chart_point(&mut r, &MonomialSplitting::standard(), 2);
    let p1 = random_chart_point(&mut r, &MonomialSplitting::new([0], [-1]).unwrap(), 2);
    let gens = vec![NamedGenerator::even("t1", l(2)), NamedGenerator::even("t2", l(-1).add(&l(1)))];
    let both = mumford_jet(&WeightedPair::new(p2.clone(), p1.clone(), 3, -2), &gens, 3).unwrap();
    let left = mumford_jet(&WeightedPair::new(p2.clone(), p1.clone(), 3, 0), &gens, 3).unwrap();
    let right = mumford_jet(&WeightedPair::new(p2, p1, 0, -2), &gens, 3).unwrap();
    assert_eq!(both.phi, left.phi.mul(&right.phi));
}

#[test]
fn curvature_defect_examples() {
    let flat = WeightedPair::standard(1, -13);
    assert_eq!(curvature_defect(&l(2), &l(-2), &flat).unwrap(), Scalar::zero());
    let off = WeightedPair::standard(1, -12);
    assert_eq!(curvature_defect(&l(2), &l(-2), &off).unwrap(), int(1));
    let mut r = rng(4);
    let x = random_witt(&mut r, 3, 3);
    assert_eq!(curvature_defect(&x, &x, &WeightedPair::standard(2, 5)).unwrap(), Scalar::zero());
}

#[test]
fn curvature_defect_independent_of_base_point() {
    let mut r = rng(17);
    for (x, y) in [(l(2), l(-2)), (l(3), l(-3)), (l(1).add(&l(3)), l(-3))] {
        let mut values = Vec::new();
        for split in sample_splittings().into_iter().take(4) {
            let p2 = random_chart_point(&mut r, &split, 3);
            let p1 = random_chart_point(&mut r, &split, 3);
            values.push(curvature_defect(&x, &y, &WeightedPair::new(p2, p1, 1, -4)).unwrap());
        }
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
        let mut graded = Scalar::zero();
        for (j, w, p) in [(2, 1, ChartPoint::standard_origin()), (1, -4, random_chart_point(&mut r, &MonomialSplitting::standard(), 3))] {
            let (f, g) = (rho(j, &x), rho(j, &y));
            graded += int(w) * graded_side_defect(&f, &g, &f.commutator(&g).unwrap(), &p).unwrap();
        }
        assert_eq!(graded, values[0]);
        assert!(!values[0].is_zero());
    }
}

fn bch_side<'a>(
    coefs: &[Jet; 3],
    ops: [&'a ShiftPolyOperator; 3],
    p: &'a ChartPoint,
    w: i64,
    space: &std::sync::Arc<JetSpace>,
) -> FlowSide<'a, ShiftPolyOperator> {
    FlowSide {
        field: coefs.iter().cloned().zip(ops).collect(),
        split: p.splitting(),
        base: constant_matrix(space, p.entries()),
        weight: int(w),
    }
}

#[test]
fn group_law_through_order_two() {
    let mut r = rng(23);
    for split in sample_splittings() {
        let x = random_witt(&mut r, 3, 2);
        let y = random_witt(&mut r, 3, 2);
        let base = WeightedPair::new(
            random_chart_point(&mut r, &split, 2),
            random_chart_point(&mut r, &split, 2),
            1,
            -13,
        );
        let ops = |w: &WittElement| (rho(2, w), rho(1, w));
        let (x2, x1) = ops(&x);
        let (y2, y1) = ops(&y);
        let (b2, b1) = ops(&x.bracket(&y));
        let space = JetSpace::new(vec![Variable::even("s"), Variable::even("u")], 2).unwrap();
        let s = Jet::variable(&space, 0);
        let u = Jet::variable(&space, 1);
        let ordered = ordered_flow(&space, &base, &[(s.clone(), (&x2, &x1)), (u.clone(), (&y2, &y1))]).unwrap();
        let half_su = s.mul(&u).scale(&frac(1, 2));
        let coefs = [s.clone(), u.clone(), half_su];
        let sides = [
            bch_side(&coefs, [&x2, &y2, &b2], &base.p2, base.w2, &space),
            bch_side(&coefs, [&x1, &y1, &b1], &base.p1, base.w1, &space),
        ];
        let bch = time_one_flow(&space, &sides, &Jet::one(&space)).unwrap();
        assert_eq!(ordered.a2, bch.points[0]);
        assert_eq!(ordered.a1, bch.points[1]);
        assert_eq!(ordered.phi, bch.phi);
    }
}

#[test]
fn horizontality_flat_weights() {
    let gens: Vec<_> = [1, -1, 2, -2]
        .into_iter()
        .map(|n| NamedGenerator::even(format!("t{n}"), l(n)))
        .collect();
    let report = horizontality_check(&WeightedPair::default(), &gens).unwrap();
    assert_eq!(report.pairs.len(), 6);
    assert!(report.is_symmetric(), "{report:?}");
    let mut r = rng(31);
    let split = MonomialSplitting::new([0, 2], [-3]).unwrap();
    let off_origin = WeightedPair::new(
        random_chart_point(&mut r, &split, 3),
        random_chart_point(&mut r, &MonomialSplitting::standard(), 3),
        1,
        -13,
    );
    assert!(horizontality_check(&off_origin, &gens).unwrap().is_symmetric());
}

#[test]
fn horizontality_defect_equals_curvature_defect() {
    let mut r = rng(37);
    for (w2, w1) in [(1, 0), (1, -12), (2, 3), (0, 1)] {
        let base = WeightedPair::new(
            random_chart_point(&mut r, &MonomialSplitting::standard(), 2),
            random_chart_point(&mut r, &MonomialSplitting::new([0], [-1]).unwrap(), 2),
            w2,
            w1,
        );
        let gens = vec![
            NamedGenerator::even("a", l(2)),
            NamedGenerator::even("b", l(-2)),
            NamedGenerator::even("c", l(3).add(&l(-1))),
        ];
        for pair in horizontality_check(&base, &gens).unwrap().pairs {
            assert_eq!(pair.defect, pair.curvature_defect, "{pair:?}");
        }
    }
    let report = horizontality_check(
        &WeightedPair::standard(1, 0),
        &[NamedGenerator::even("a", l(2)), NamedGenerator::even("b", l(-2))],
    )
    .unwrap();
    assert_eq!(report.pairs[0].defect, int(13));
    let single = horizontality_check(&WeightedPair::standard(1, 0), &[NamedGenerator::even("a", l(2))]).unwrap();
    assert!(single.pairs.is_empty() && single.is_symmetric());
}

#[test]
fn symmetric_mixed_coefficient_is_average_of_orders() {
    let base = WeightedPair::standard(1, -13);
    let gens = vec![NamedGenerator::even("t1", l(2)), NamedGenerator::even("t2", l(-2))];
    let mj = mumford_jet(&base, &gens, 2).unwrap();
    let swapped = mumford_jet(&base, &[gens[1].clone(), gens[0].clone()], 2).unwrap();
    assert_eq!(mj.phi.coefficient(&[1, 1]), swapped.phi.coefficient(&[1, 1]));
    let pair = &horizontality_check(&base, &gens).unwrap().pairs[0];
    assert_eq!(mj.phi.coefficient(&[1, 1]), (&pair.forward + &pair.backward) * frac(1, 2));
}

#[test]
fn flows_preserve_determinant_index() {
    let mut r = rng(41);
    for split in sample_splittings() {
        let p = random_chart_point(&mut r, &split, 2);
        let out = flow_jet(&random_witt(&mut r, 2, 2), &p, 1, 3).unwrap();
        let t = frac(1, 3);
        let entries: Matrix<i64, Scalar> = out
            .a
            .iter()
            .map(|(k, v)| (*k, v.evaluate(&[t.clone()]).unwrap()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let moved = ChartPoint::new(split.clone(), entries).unwrap();
        let (lo, hi) = moved.support_range();
        let dims = det_fiber_dims(&moved, (lo - 2, hi + 2)).unwrap();
        assert_eq!(dims.index(), virtual_index(&p));
        assert_eq!(virtual_index(&moved), virtual_index(&p));
    }
}
