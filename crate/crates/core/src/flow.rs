//! Truncated jets of flows on chart points and on the fiber coordinate of
//! the weighted determinant line.
//!
//! Everything reduces to one routine, [`time_one_flow`]: the time-1 flow of a
//! field `X = Σ c_i F_i` whose coefficients `c_i` are jets without constant
//! term. Writing `A(τ) = Σ A_n τ^n`, the chart equation `dA/dτ = L_X A`
//! becomes
//!
//! ```text
//! (n+1) A_{n+1} = -X^{KD} δ_{n0} - X^{KK} A_n + A_n X^{DD} + Σ_{p+q=n} A_p X^{DK} A_q
//! ```
//!
//! and the fiber coordinate obeys `dφ/dτ = σ_X(A) φ`. Each τ-step raises
//! the jet degree by at least one, so summing `n ≤ N` gives the exact order-N
//! jet at `τ = 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::{self, ChartOperator, Matrix, Splitting};
use crate::error::{Error, Result};
use crate::grassmann::{
    scalar_part_derivative, tilde_scalar_part, witt_vector_field, ChartPoint, MonomialSplitting,
};
use crate::jet::{Jet, JetSpace, Variable};
use crate::operator::{OperatorLimits, ShiftPolyOperator};
use crate::scalar::{int, Parity, Scalar};
use crate::witt::{rho, WittElement};

pub const DEFAULT_WEIGHTS: (i64, i64) = (1, -13);

/// One Grassmannian factor taking part in a flow.
pub struct FlowSide<'a, O: ChartOperator> {
    pub field: Vec<(Jet, &'a O)>,
    pub split: &'a O::Split,
    pub base: Matrix<O::Index, Jet>,
    pub weight: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult<I: Ord> {
    /// Endpoint of each side, in the order the sides were given.
    pub points: Vec<Matrix<I, Jet>>,
    pub phi: Jet,
}

fn sum_into<I: Ord + Copy>(acc: &mut Matrix<I, Jet>, m: Matrix<I, Jet>) {
    for (k, v) in m {
        chart::accumulate(acc, k, v);
    }
}

fn scale_jets<I: Ord + Copy>(m: Matrix<I, Jet>, q: &Scalar) -> Matrix<I, Jet> {
    chart::prune(m.into_iter().map(|(k, v)| (k, v.scale(q))).collect())
}

/// Time-1 flow of the formal field on every side at once, with `φ(0) = phi0`.
pub fn time_one_flow<O: ChartOperator>(
    space: &Arc<JetSpace>,
    sides: &[FlowSide<'_, O>],
    phi0: &Jet,
) -> Result<FlowResult<O::Index>> {
    for side in sides {
        if side.field.iter().any(|(c, _)| c.valuation() == Some(0)) {
            return Err(Error::Precondition(
                "flow field coefficients must have zero constant term".into(),
            ));
        }
    }
    let order = space.order() as usize;
    let mut rate: Vec<Jet> = vec![Jet::zero(space); order + 1];
    let mut points = Vec::with_capacity(sides.len());
    for side in sides {
        let field = side.field.as_slice();
        let mut series: Vec<Matrix<O::Index, Jet>> = vec![side.base.clone()];
        for n in 0..order {
            let mut next = if n == 0 { chart::field_constant(field, side.split) } else { BTreeMap::new() };
            sum_into(&mut next, chart::field_linear(field, &series[n], side.split));
            for p in 0..=n {
                sum_into(&mut next, chart::field_quadratic(field, &series[p], &series[n - p], side.split));
            }
            series.push(scale_jets(chart::prune(next), &Scalar::new(1.into(), (n as i64 + 1).into())));
        }
        for (n, a_n) in series.iter().enumerate() {
            let mut s = chart::scalar_linear(field, a_n, side.split);
            if n == 0 {
                if let Some(c) = chart::scalar_constant(field, side.split) {
                    s = Some(match s {
                        Some(x) => x.add(&c),
                        None => c,
                    });
                }
            }
            if let Some(s) = s {
                rate[n] = rate[n].add(&s.scale(&side.weight));
            }
        }
        let mut end = BTreeMap::new();
        for a_n in series {
            sum_into(&mut end, a_n);
        }
        points.push(chart::prune(end));
    }
    let mut phi_series = vec![phi0.clone()];
    for n in 0..order {
        let mut next = Jet::zero(space);
        for p in 0..=n {
            next = next.add(&rate[p].mul(&phi_series[n - p]));
        }
        phi_series.push(next.scale(&Scalar::new(1.into(), (n as i64 + 1).into())));
    }
    let phi = phi_series.iter().fold(Jet::zero(space), |acc, t| acc.add(t));
    Ok(FlowResult { points, phi })
}

/// Chart entries promoted to constant jets.
pub fn constant_matrix<I: Ord + Copy>(space: &Arc<JetSpace>, m: &Matrix<I, Scalar>) -> Matrix<I, Jet> {
    chart::prune(m.iter().map(|(k, v)| (*k, Jet::constant(space, v.clone()))).collect())
}

/// `ρ_j(x)` subject to the operator guards.
pub fn represent(j: i64, x: &WittElement) -> Result<ShiftPolyOperator> {
    let op = rho(j, x);
    op.check_limits(&OperatorLimits::default())?;
    Ok(op)
}

fn check_order(order: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::Precondition("jet order must be at least 1".into()));
    }
    Ok(())
}

/// Flow of a single chart point along `ρ_j(x)` in the even variable `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowJet {
    pub space: Arc<JetSpace>,
    pub a: Matrix<i64, Jet>,
    pub phi: Jet,
}

pub fn flow_jet(x: &WittElement, p: &ChartPoint, j: i64, order: u32) -> Result<FlowJet> {
    check_order(order)?;
    let space = JetSpace::new(vec![Variable::even("s")], order)?;
    let op = represent(j, x)?;
    let side = FlowSide {
        field: vec![(Jet::variable(&space, 0), &op)],
        split: p.splitting(),
        base: constant_matrix(&space, p.entries()),
        weight: Scalar::one(),
    };
    let mut out = time_one_flow(&space, &[side], &Jet::one(&space))?;
    Ok(FlowJet { a: out.points.remove(0), phi: out.phi, space })
}

/// Base point on `Gr × Gr` together with the weights of the line `det ⊠ det`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPair<S: Splitting = MonomialSplitting> {
    pub p2: ChartPoint<S>,
    pub p1: ChartPoint<S>,
    pub w2: i64,
    pub w1: i64,
}

impl<S: Splitting> WeightedPair<S> {
    pub fn new(p2: ChartPoint<S>, p1: ChartPoint<S>, w2: i64, w1: i64) -> Self {
        WeightedPair { p2, p1, w2, w1 }
    }
}

impl WeightedPair {
    /// Both factors at the origin of the standard chart.
    pub fn standard(w2: i64, w1: i64) -> Self {
        WeightedPair::new(ChartPoint::standard_origin(), ChartPoint::standard_origin(), w2, w1)
    }
}

impl Default for WeightedPair {
    fn default() -> Self {
        WeightedPair::standard(DEFAULT_WEIGHTS.0, DEFAULT_WEIGHTS.1)
    }
}

/// A generator paired with the flow variable that multiplies it.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedGenerator<G> {
    pub name: String,
    pub parity: Parity,
    pub element: G,
}

impl<G> NamedGenerator<G> {
    pub fn new(name: impl Into<String>, parity: Parity, element: G) -> Self {
        NamedGenerator { name: name.into(), parity, element }
    }

    pub fn even(name: impl Into<String>, element: G) -> Self {
        Self::new(name, Parity::Even, element)
    }
}

/// Jet of `exp(Σ t_i X_i)` applied to the weighted base point.
#[derive(Debug, Clone, PartialEq)]
pub struct MumfordJet<S: Splitting = MonomialSplitting> {
    pub space: Arc<JetSpace>,
    pub phi: Jet,
    pub a2: Matrix<S::Index, Jet>,
    pub a1: Matrix<S::Index, Jet>,
    pub basepoint: WeightedPair<S>,
}

/// Generic two-sided driver; `ops2[i]`, `ops1[i]` are the images of generator `i`.
pub fn weighted_flow<O: ChartOperator>(
    space: &Arc<JetSpace>,
    base: &WeightedPair<O::Split>,
    ops2: &[O],
    ops1: &[O],
) -> Result<MumfordJet<O::Split>> {
    let vars: Vec<Jet> = (0..ops2.len()).map(|i| Jet::variable(space, i)).collect();
    let sides = [
        FlowSide {
            field: vars.iter().cloned().zip(ops2).collect(),
            split: base.p2.splitting(),
            base: constant_matrix(space, base.p2.entries()),
            weight: int(base.w2),
        },
        FlowSide {
            field: vars.iter().cloned().zip(ops1).collect(),
            split: base.p1.splitting(),
            base: constant_matrix(space, base.p1.entries()),
            weight: int(base.w1),
        },
    ];
    let mut out = time_one_flow(space, &sides, &Jet::one(space))?;
    let a1 = out.points.pop().unwrap_or_default();
    let a2 = out.points.pop().unwrap_or_default();
    Ok(MumfordJet { space: Arc::clone(space), phi: out.phi, a2, a1, basepoint: base.clone() })
}

fn jet_space_for<G>(generators: &[NamedGenerator<G>], order: u32) -> Result<Arc<JetSpace>> {
    check_order(order)?;
    JetSpace::new(
        generators
            .iter()
            .map(|g| Variable { name: g.name.clone(), parity: g.parity })
            .collect(),
        order,
    )
}

/// Bosonic Mumford jet: `Gr₂` flows under `ρ₂`, `Gr₁` under `ρ₁`.
pub fn mumford_jet(
    base: &WeightedPair,
    generators: &[NamedGenerator<WittElement>],
    order: u32,
) -> Result<MumfordJet> {
    if let Some(g) = generators.iter().find(|g| g.parity.is_odd()) {
        return Err(Error::ParityMismatch(format!(
            "Witt generators are even; variable `{}` is odd",
            g.name
        )));
    }
    let space = jet_space_for(generators, order)?;
    let ops2 = generators.iter().map(|g| represent(2, &g.element)).collect::<Result<Vec<_>>>()?;
    let ops1 = generators.iter().map(|g| represent(1, &g.element)).collect::<Result<Vec<_>>>()?;
    weighted_flow(&space, base, &ops2, &ops1)
}

/// `∂_{L_F} σ_G - ∂_{L_G} σ_F - σ_{[F, G]}` at `p`.
pub fn side_defect<O>(f: &O, g: &O, fg: &O, p: &ChartPoint<O::Split>) -> Scalar
where
    O: ChartOperator,
{
    let lf = witt_vector_field(f, p);
    let lg = witt_vector_field(g, p);
    scalar_part_derivative(g, p.splitting(), &lf) - scalar_part_derivative(f, p.splitting(), &lg)
        - tilde_scalar_part(fg, p)
}

/// Weighted failure of the lifted scalar parts to respect the bracket.
pub fn curvature_defect(x: &WittElement, y: &WittElement, base: &WeightedPair) -> Result<Scalar> {
    let xy = x.bracket(y);
    let mut total = Scalar::zero();
    for (j, w, p) in [(2, base.w2, &base.p2), (1, base.w1, &base.p1)] {
        let (f, g, fg) = (represent(j, x)?, represent(j, y)?, represent(j, &xy)?);
        total += int(w) * side_defect(&f, &g, &fg, p);
    }
    Ok(total)
}

/// Flows along each step's field for time 1, starting where the previous
/// step ended. A step is a coefficient jet with the images on both sides.
pub fn ordered_flow<O: ChartOperator>(
    space: &Arc<JetSpace>,
    base: &WeightedPair<O::Split>,
    steps: &[(Jet, (&O, &O))],
) -> Result<MumfordJet<O::Split>> {
    let mut a2 = constant_matrix(space, base.p2.entries());
    let mut a1 = constant_matrix(space, base.p1.entries());
    let mut phi = Jet::one(space);
    for (coef, (op2, op1)) in steps {
        let sides = [
            FlowSide { field: vec![(coef.clone(), *op2)], split: base.p2.splitting(), base: a2, weight: int(base.w2) },
            FlowSide { field: vec![(coef.clone(), *op1)], split: base.p1.splitting(), base: a1, weight: int(base.w1) },
        ];
        let mut out = time_one_flow(space, &sides, &phi)?;
        a1 = out.points.pop().unwrap_or_default();
        a2 = out.points.pop().unwrap_or_default();
        phi = out.phi;
    }
    Ok(MumfordJet { space: Arc::clone(space), phi, a2, a1, basepoint: base.clone() })
}

/// Space `{s, u}` of order 2 with the given parities.
pub fn pair_space(parities: (Parity, Parity)) -> Result<Arc<JetSpace>> {
    JetSpace::new(
        vec![
            Variable { name: "s".into(), parity: parities.0 },
            Variable { name: "u".into(), parity: parities.1 },
        ],
        2,
    )
}

/// `∂_{L_X} σ_Y - ∂_{L_Y} σ_X - σ_{[X, Y]}` for `X = aF`, `Y = bG` with flow
/// variables of the operators' parities; the `ab` coefficient. `fg` is the
/// graded commutator of `F` and `G`.
pub fn graded_side_defect<O: ChartOperator>(f: &O, g: &O, fg: &O, p: &ChartPoint<O::Split>) -> Result<Scalar> {
    let space = pair_space((f.parity(), g.parity()))?;
    let a = Jet::variable(&space, 0);
    let b = Jet::variable(&space, 1);
    let split = p.splitting();
    let base = constant_matrix(&space, p.entries());
    let x = [(a.clone(), f)];
    let y = [(b.clone(), g)];
    let xy = [(a.mul(&b), fg)];
    let lx = chart::vector_field(&x, &base, split);
    let ly = chart::vector_field(&y, &base, split);
    let zero = Jet::zero(&space);
    let part = |v: Option<Jet>| v.unwrap_or_else(|| zero.clone());
    let def = part(chart::scalar_linear(&y, &lx, split))
        .sub(&part(chart::scalar_linear(&x, &ly, split)))
        .sub(&part(chart::scalar_part(&xy, &base, split)));
    Ok(mixed_coefficient(&def))
}

/// Mixed-coefficient comparison for one generator pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDefect {
    pub first: String,
    pub second: String,
    /// `su`-coefficient of `φ` flowing first then second.
    pub forward: Scalar,
    /// `su`-coefficient of `φ` flowing second then first (`s` still on `first`).
    pub backward: Scalar,
    /// Weighted scalar part of the bracket at the base point.
    pub bracket_term: Scalar,
    /// `forward - backward - bracket_term`.
    pub defect: Scalar,
    pub curvature_defect: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalityReport {
    pub pairs: Vec<PairDefect>,
}

impl HorizontalityReport {
    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|p| p.defect.is_zero())
    }
}

/// Weighted `σ_F` over both sides at the base point.
pub fn weighted_scalar_part<O: ChartOperator>(base: &WeightedPair<O::Split>, f2: &O, f1: &O) -> Scalar {
    int(base.w2) * tilde_scalar_part(f2, &base.p2) + int(base.w1) * tilde_scalar_part(f1, &base.p1)
}

/// The `su` coefficient, read off an `{s, u}` jet.
pub fn mixed_coefficient(phi: &Jet) -> Scalar {
    phi.coefficient(&[1, 1])
}

/// Ordered-flow comparison for one pair of represented generators: the `su`
/// coefficients of `φ` for `x` (variable `s`) then `y` (variable `u`), for
/// the reverse order, and the weighted scalar part of the graded bracket.
pub fn pair_defect<O: ChartOperator>(
    base: &WeightedPair<O::Split>,
    parities: (Parity, Parity),
    x: (&O, &O),
    y: (&O, &O),
    xy: (&O, &O),
) -> Result<(Scalar, Scalar, Scalar)> {
    let space = pair_space(parities)?;
    let s = Jet::variable(&space, 0);
    let u = Jet::variable(&space, 1);
    let forward = ordered_flow(&space, base, &[(s.clone(), x), (u.clone(), y)])?;
    let backward = ordered_flow(&space, base, &[(u, y), (s, x)])?;
    let bracket_term = weighted_scalar_part(base, xy.0, xy.1);
    Ok((mixed_coefficient(&forward.phi), mixed_coefficient(&backward.phi), bracket_term))
}

/// Compares ordered flows for every generator pair; at a flat weighting the
/// two orders differ exactly by the bracket term.
pub fn horizontality_check(
    base: &WeightedPair,
    generators: &[NamedGenerator<WittElement>],
) -> Result<HorizontalityReport> {
    let mut pairs = Vec::new();
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            let ab = a.element.bracket(&b.element);
            let x = (represent(2, &a.element)?, represent(1, &a.element)?);
            let y = (represent(2, &b.element)?, represent(1, &b.element)?);
            let xy = (represent(2, &ab)?, represent(1, &ab)?);
            let (forward, backward, bracket_term) =
                pair_defect(base, (Parity::Even, Parity::Even), (&x.0, &x.1), (&y.0, &y.1), (&xy.0, &xy.1))?;
            let defect = &forward - &backward - &bracket_term;
            pairs.push(PairDefect {
                first: a.name.clone(),
                second: b.name.clone(),
                forward,
                backward,
                bracket_term,
                defect,
                curvature_defect: curvature_defect(&a.element, &b.element, base)?,
            });
        }
    }
    Ok(HorizontalityReport { pairs })
}
