//! Chart formulas shared by the bosonic and the super Grassmannian.
//!
//! A point of a chart `U_{D,K}` is the graph of a finite-support matrix
//! `A: D -> K`. An operator field `X = Σ c_i F_i` (coefficients `c_i` in a
//! supercommutative ring, operators `F_i` with rational entries) acts by
//!
//! ```text
//! L_X A = -X^{KD} - X^{KK} A + A X^{DD} + A X^{DK} A
//! σ_X(A) = str(X^{DK} A) + α(X)
//! ```
//!
//! where `α(F) = str(P_+ F P_+ - P_K F P_K)`. Products keep the left-to-right
//! order of coefficients so that odd coefficients pick up the right signs.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::{Parity, Scalar};

pub trait BasisIndex: Copy + Ord + Hash + Debug + Send + Sync + 'static {
    fn parity(self) -> Parity;
}

impl BasisIndex for i64 {
    fn parity(self) -> Parity {
        Parity::Even
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Discrete,
    Compact,
}

/// A decomposition `H = D ⊕ K` by basis vectors, commensurable with `H^- ⊕ H^+`.
pub trait Splitting: Clone + Debug + PartialEq {
    type Index: BasisIndex;

    fn is_discrete(&self, i: Self::Index) -> bool;

    /// Basis vectors of `H^+` moved into `D`.
    fn shifted_in(&self) -> Vec<Self::Index>;

    /// Basis vectors of `H^-` moved into `K`.
    fn shifted_out(&self) -> Vec<Self::Index>;

    fn side(&self, i: Self::Index) -> Side {
        if self.is_discrete(i) {
            Side::Discrete
        } else {
            Side::Compact
        }
    }
}

/// Operators on a basis-indexed space with finitely many nonzero entries per
/// row and column and finite-rank off-diagonal blocks against any splitting.
pub trait ChartOperator {
    type Index: BasisIndex;
    type Split: Splitting<Index = Self::Index>;

    fn parity(&self) -> Parity;

    /// Nonzero entries `(row, F_{row,c})` of column `c`.
    fn column(&self, c: Self::Index) -> Vec<(Self::Index, Scalar)>;

    /// Nonzero entries `(col, F_{r,col})` of row `r`.
    fn row(&self, r: Self::Index) -> Vec<(Self::Index, Scalar)>;

    fn entry(&self, r: Self::Index, c: Self::Index) -> Scalar;

    /// The block from the opposite side into `codomain`, keyed `(row, col)`.
    fn off_diagonal(
        &self,
        split: &Self::Split,
        codomain: Side,
    ) -> BTreeMap<(Self::Index, Self::Index), Scalar>;
}

/// Coefficient ring of chart matrices: rationals or jets.
pub trait Coefficient: Clone + Debug {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coefficient for Scalar {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Scalar) -> Self {
        self * q
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

pub type Matrix<I, C> = BTreeMap<(I, I), C>;

/// `(coefficient, operator)` terms of a formal operator field.
pub type Field<'a, O, C> = [(C, &'a O)];

pub fn accumulate<K: Ord, C: Coefficient>(m: &mut BTreeMap<K, C>, key: K, value: C) {
    if value.is_zero() {
        return;
    }
    match m.get_mut(&key) {
        Some(slot) => *slot = slot.add(&value),
        None => {
            m.insert(key, value);
        }
    }
}

pub fn prune<K: Ord, C: Coefficient>(m: BTreeMap<K, C>) -> BTreeMap<K, C> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn add_matrices<I: BasisIndex, C: Coefficient>(a: &Matrix<I, C>, b: &Matrix<I, C>) -> Matrix<I, C> {
    let mut out = a.clone();
    for (k, v) in b {
        accumulate(&mut out, *k, v.clone());
    }
    prune(out)
}

pub fn scale_matrix<I: BasisIndex, C: Coefficient>(a: &Matrix<I, C>, q: &Scalar) -> Matrix<I, C> {
    prune(a.iter().map(|(k, v)| (*k, v.scale(q))).collect())
}

fn add_opt<C: Coefficient>(acc: Option<C>, v: C) -> Option<C> {
    match acc {
        Some(a) => Some(a.add(&v)),
        None => Some(v),
    }
}

/// `α(F) = str(P_+ F P_+ - P_K F P_K)`; finite because `P_+ - P_K` is.
pub fn alpha<O: ChartOperator>(op: &O, split: &O::Split) -> Scalar {
    let mut total = Scalar::zero();
    for i in split.shifted_in() {
        total += op.entry(i, i) * Scalar::from_integer(i.parity().sign().into());
    }
    for i in split.shifted_out() {
        total -= op.entry(i, i) * Scalar::from_integer(i.parity().sign().into());
    }
    total
}

/// `-X^{KD}`.
pub fn field_constant<O, C>(field: &Field<'_, O, C>, split: &O::Split) -> Matrix<O::Index, C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut out = BTreeMap::new();
    for (c, op) in field {
        for (key, v) in op.off_diagonal(split, Side::Compact) {
            accumulate(&mut out, key, c.scale(&-v));
        }
    }
    prune(out)
}

/// `-X^{KK} A + A X^{DD}`.
pub fn field_linear<O, C>(
    field: &Field<'_, O, C>,
    a: &Matrix<O::Index, C>,
    split: &O::Split,
) -> Matrix<O::Index, C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut out = BTreeMap::new();
    for (c, op) in field {
        for (&(b, d), abd) in a {
            for (r, f) in op.column(b) {
                if !split.is_discrete(r) {
                    accumulate(&mut out, (r, d), c.mul(abd).scale(&-f));
                }
            }
        }
        for (&(r, b), arb) in a {
            for (e, f) in op.row(b) {
                if split.is_discrete(e) {
                    accumulate(&mut out, (r, e), arb.mul(c).scale(&f));
                }
            }
        }
    }
    prune(out)
}

/// `A X^{DK} B`.
pub fn field_quadratic<O, C>(
    field: &Field<'_, O, C>,
    a: &Matrix<O::Index, C>,
    b: &Matrix<O::Index, C>,
    split: &O::Split,
) -> Matrix<O::Index, C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut out = BTreeMap::new();
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let mut a_by_col: BTreeMap<O::Index, Vec<(O::Index, &C)>> = BTreeMap::new();
    for (&(r, col), v) in a {
        a_by_col.entry(col).or_default().push((r, v));
    }
    let mut b_by_row: BTreeMap<O::Index, Vec<(O::Index, &C)>> = BTreeMap::new();
    for (&(row, g), v) in b {
        b_by_row.entry(row).or_default().push((g, v));
    }
    for (c, op) in field {
        for ((d, k), f) in op.off_diagonal(split, Side::Discrete) {
            let (Some(left), Some(right)) = (a_by_col.get(&d), b_by_row.get(&k)) else {
                continue;
            };
            for (r, arb) in left {
                let ac = arb.mul(c);
                for (g, beg) in right {
                    accumulate(&mut out, (*r, *g), ac.mul(beg).scale(&f));
                }
            }
        }
    }
    prune(out)
}

/// The tangent vector `L_X A`.
pub fn vector_field<O, C>(
    field: &Field<'_, O, C>,
    a: &Matrix<O::Index, C>,
    split: &O::Split,
) -> Matrix<O::Index, C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut out = field_constant(field, split);
    for part in [field_linear(field, a, split), field_quadratic(field, a, a, split)] {
        for (k, v) in part {
            accumulate(&mut out, k, v);
        }
    }
    prune(out)
}

/// Derivative of `A -> L_X A` at `a` in direction `v`.
pub fn vector_field_derivative<O, C>(
    field: &Field<'_, O, C>,
    a: &Matrix<O::Index, C>,
    v: &Matrix<O::Index, C>,
    split: &O::Split,
) -> Matrix<O::Index, C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut out = field_linear(field, v, split);
    for part in [field_quadratic(field, a, v, split), field_quadratic(field, v, a, split)] {
        for (k, val) in part {
            accumulate(&mut out, k, val);
        }
    }
    prune(out)
}

/// `str(X^{DK} A)`; `None` stands for zero.
pub fn scalar_linear<O, C>(
    field: &Field<'_, O, C>,
    a: &Matrix<O::Index, C>,
    split: &O::Split,
) -> Option<C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut acc = None;
    for (c, op) in field {
        for ((d, k), f) in op.off_diagonal(split, Side::Discrete) {
            if let Some(akd) = a.get(&(k, d)) {
                let sign = Scalar::from_integer(d.parity().sign().into());
                acc = add_opt(acc, c.mul(akd).scale(&(f * sign)));
            }
        }
    }
    acc.filter(|v| !v.is_zero())
}

/// `α(X) = Σ c_i α(F_i)`.
pub fn scalar_constant<O, C>(field: &Field<'_, O, C>, split: &O::Split) -> Option<C>
where
    O: ChartOperator,
    C: Coefficient,
{
    let mut acc = None;
    for (c, op) in field {
        let a = alpha(*op, split);
        if !Zero::is_zero(&a) {
            acc = add_opt(acc, c.scale(&a));
        }
    }
    acc.filter(|v| !v.is_zero())
}

/// The scalar (Atiyah) part `σ_X(A) = str(X^{DK} A) + α(X)`.
pub fn scalar_part<O, C>(
    field: &Field<'_, O, C>,
    a: &Matrix<O::Index, C>,
    split: &O::Split,
) -> Option<C>
where
    O: ChartOperator,
    C: Coefficient,
{
    match (scalar_linear(field, a, split), scalar_constant(field, split)) {
        (Some(x), Some(y)) => Some(x.add(&y)).filter(|v| !v.is_zero()),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Trace pairing of two off-diagonal blocks, `str(X^{DK} Y^{KD})`.
pub fn block_pairing<O: ChartOperator>(x: &O, y: &O, split: &O::Split) -> Scalar {
    let ykd = y.off_diagonal(split, Side::Compact);
    let mut total = Scalar::zero();
    for ((d, k), f) in x.off_diagonal(split, Side::Discrete) {
        if let Some(g) = ykd.get(&(k, d)) {
            total += f * g * Scalar::from_integer(d.parity().sign().into());
        }
    }
    total
}

/// Chart cocycle `η_{D,K}(X, Y) = str(X^{DK} Y^{KD} - (-1)^{|X||Y|} Y^{DK} X^{KD})`.
pub fn chart_cocycle<O: ChartOperator>(x: &O, y: &O, split: &O::Split) -> Scalar {
    let sign = Scalar::from_integer(x.parity().koszul(y.parity()).into());
    block_pairing(x, y, split) - sign * block_pairing(y, x, split)
}
