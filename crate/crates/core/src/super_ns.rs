//! The Neveu–Schwarz superalgebra, its action on super Laurent spaces
//! `H_{j/2}` and the super analogues of the chart flows.
//!
//! `H_{j/2}` has an even basis `e_k` (standing for `z^k`) and an odd basis
//! `f_k` (standing for `ζ z^k`); a basis vector is a [`SuperIndex`]. The
//! action is
//!
//! ```text
//! ρ(L_n) e_k = -(k + j(n+1)/2) e_{k+n}        ρ(L_n) f_k = -(k + (j+1)(n+1)/2) f_{k+n}
//! ρ(G_r) e_k = -(k + j(r+1/2)) f_{k+r-1/2}    ρ(G_r) f_k = e_{k+r+1/2}
//! ```
//!
//! The `G_r` column is fixed by normalizing the odd-to-even weight to 1 and
//! solving the bracket relations for an affine even-to-odd weight; see
//! [`GWeights::determine`]. At `j = 0` it is the action of the superconformal
//! vector fields on functions of `(z | ζ)`.

pub mod fields;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chart::{self, BasisIndex, ChartOperator, Side, Splitting};
use crate::error::{Error, Result};
use crate::flow::{
    graded_side_defect, pair_defect, weighted_flow, HorizontalityReport, MumfordJet, NamedGenerator, PairDefect,
    WeightedPair,
};
use crate::grassmann::{ChartPoint, MonomialSplitting};
use crate::jet::{JetSpace, Variable};
use crate::linalg::{self, Solution};
use crate::operator::{IndexPolynomial, OperatorLimits, ShiftPolyOperator};
use crate::scalar::{frac, int, parse_scalar, Parity, Scalar};

pub const SUPER_DEFAULT_WEIGHTS: (i64, i64) = (1, -5);

/// `(j₂, j₁)` of the two factors `Gr_{3/2} × Gr_{1/2}`.
pub const SUPER_SIDES: (i64, i64) = (3, 1);

/// A number in `½ℤ`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn value(self) -> Scalar {
        frac(self.0, 2)
    }

    /// `r + 1/2` for `r ∈ ℤ + 1/2`.
    pub fn plus_half(self) -> i64 {
        (self.0 + 1).div_euclid(2)
    }

    /// `r - 1/2` for `r ∈ ℤ + 1/2`.
    pub fn minus_half(self) -> i64 {
        (self.0 - 1).div_euclid(2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q = parse_scalar(s)?;
        let twice = q * int(2);
        if !twice.is_integer() {
            return Err(Error::Parse(format!("`{s}` is not a half-integer")));
        }
        let t = crate::scalar::to_i64(&twice).ok_or_else(|| Error::Parse(format!("`{s}` out of range")))?;
        Ok(HalfInt(t))
    }
}

/// `Σ a_n L_n + Σ b_r G_r + c C` with `r ∈ ℤ + 1/2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NSElement {
    l: BTreeMap<i64, Scalar>,
    g: BTreeMap<HalfInt, Scalar>,
    central: Scalar,
}

impl NSElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_parts(
        l: impl IntoIterator<Item = (i64, Scalar)>,
        g: impl IntoIterator<Item = (HalfInt, Scalar)>,
        central: Scalar,
    ) -> Self {
        let mut out = Self { central, ..Self::default() };
        for (n, c) in l {
            *out.l.entry(n).or_insert_with(Scalar::zero) += c;
        }
        for (r, c) in g {
            assert!(!r.is_integer(), "G_r needs r ∈ ℤ + 1/2, got {r}");
            *out.g.entry(r).or_insert_with(Scalar::zero) += c;
        }
        out.l.retain(|_, c| !c.is_zero());
        out.g.retain(|_, c| !c.is_zero());
        out
    }

    pub fn l(n: i64) -> Self {
        Self::from_parts([(n, Scalar::one())], [], Scalar::zero())
    }

    /// `G_r` with `r = twice_r / 2`; `twice_r` must be odd.
    pub fn g(twice_r: i64) -> Self {
        Self::from_parts([], [(HalfInt(twice_r), Scalar::one())], Scalar::zero())
    }

    pub fn c() -> Self {
        Self::from_parts([], [], Scalar::one())
    }

    pub fn l_terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.l
    }

    pub fn g_terms(&self) -> &BTreeMap<HalfInt, Scalar> {
        &self.g
    }

    pub fn central(&self) -> &Scalar {
        &self.central
    }

    pub fn is_zero(&self) -> bool {
        self.l.is_empty() && self.g.is_empty() && self.central.is_zero()
    }

    /// Parity of a homogeneous element; `None` if it mixes `L`/`C` and `G` terms.
    pub fn parity(&self) -> Option<Parity> {
        let even = !self.l.is_empty() || !self.central.is_zero();
        match (even, !self.g.is_empty()) {
            (true, true) => None,
            (_, true) => Some(Parity::Odd),
            _ => Some(Parity::Even),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_parts(
            self.l.iter().chain(&other.l).map(|(n, c)| (*n, c.clone())),
            self.g.iter().chain(&other.g).map(|(r, c)| (*r, c.clone())),
            &self.central + &other.central,
        )
    }

    pub fn scale(&self, q: &Scalar) -> Self {
        Self::from_parts(
            self.l.iter().map(|(n, c)| (*n, c * q)),
            self.g.iter().map(|(r, c)| (*r, c * q)),
            &self.central * q,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn bracket(&self, other: &Self) -> Self {
        ns_bracket(self, other)
    }
}

impl fmt::Display for NSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.l.iter().map(|(n, c)| format!("{c}*L{n}")).collect();
        parts.extend(self.g.iter().map(|(r, c)| format!("{c}*G{r}")));
        if !self.central.is_zero() {
            parts.push(format!("{}*C", self.central));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Super bracket: `[L_m, L_n] = (m-n) L_{m+n} + (m³-m) δ C`,
/// `[L_m, G_r] = (m/2 - r) G_{m+r}`, `[G_r, G_s] = 2 L_{r+s} + (4r² - 1) δ C`.
pub fn ns_bracket(x: &NSElement, y: &NSElement) -> NSElement {
    let mut l = Vec::new();
    let mut g = Vec::new();
    let mut central = Scalar::zero();
    for (m, a) in &x.l {
        for (n, b) in &y.l {
            l.push((m + n, a * b * int(m - n)));
            if m + n == 0 {
                central += a * b * int(m * m * m - m);
            }
        }
        for (r, b) in &y.g {
            g.push((HalfInt(2 * m + r.0), a * b * frac(m - r.0, 2)));
        }
    }
    for (r, a) in &x.g {
        for (n, b) in &y.l {
            g.push((HalfInt(2 * n + r.0), -(a * b * frac(n - r.0, 2))));
        }
        for (s, b) in &y.g {
            l.push(((r.0 + s.0) / 2, a * b * int(2)));
            if r.0 + s.0 == 0 {
                central += a * b * int(r.0 * r.0 - 1);
            }
        }
    }
    NSElement::from_parts(l, g, central)
}

/// Basis vector of `H_{j/2}`: `e_k` (even) or `f_k` (odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SuperIndex {
    pub parity: Parity,
    pub level: i64,
}

impl SuperIndex {
    pub fn even(level: i64) -> Self {
        SuperIndex { parity: Parity::Even, level }
    }

    pub fn odd(level: i64) -> Self {
        SuperIndex { parity: Parity::Odd, level }
    }
}

impl BasisIndex for SuperIndex {
    fn parity(self) -> Parity {
        self.parity
    }
}

impl fmt::Display for SuperIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Parity::Even => write!(f, "e{}", self.level),
            Parity::Odd => write!(f, "f{}", self.level),
        }
    }
}

/// A monomial splitting of each parity component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SuperSplitting {
    pub even: MonomialSplitting,
    pub odd: MonomialSplitting,
}

impl SuperSplitting {
    /// Nonnegative levels of both parities compact.
    pub fn standard() -> Self {
        Self::default()
    }

    pub fn new(even: MonomialSplitting, odd: MonomialSplitting) -> Self {
        SuperSplitting { even, odd }
    }

    pub fn component(&self, p: Parity) -> &MonomialSplitting {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

impl Splitting for SuperSplitting {
    type Index = SuperIndex;

    fn is_discrete(&self, i: SuperIndex) -> bool {
        self.component(i.parity).is_discrete(i.level)
    }

    fn shifted_in(&self) -> Vec<SuperIndex> {
        let even = self.even.shifted_in().into_iter().map(SuperIndex::even);
        even.chain(self.odd.shifted_in().into_iter().map(SuperIndex::odd)).collect()
    }

    fn shifted_out(&self) -> Vec<SuperIndex> {
        let even = self.even.shifted_out().into_iter().map(SuperIndex::even);
        even.chain(self.odd.shifted_out().into_iter().map(SuperIndex::odd)).collect()
    }
}

impl ChartPoint<SuperSplitting> {
    pub fn super_origin() -> Self {
        ChartPoint::origin(SuperSplitting::standard())
    }
}

fn slot(p: Parity) -> usize {
    usize::from(p.is_odd())
}

const PARITIES: [Parity; 2] = [Parity::Even, Parity::Odd];

/// Homogeneous operator on `H_{j/2}`, stored as four parity blocks
/// `blocks[codomain][domain]`, each a shift-polynomial operator on levels.
#[derive(Debug, Clone, Eq, Hash)]
pub struct SuperShiftPolyOperator {
    parity: Parity,
    blocks: [[ShiftPolyOperator; 2]; 2],
}

impl PartialEq for SuperShiftPolyOperator {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks && (self.parity == other.parity || self.is_zero())
    }
}

impl SuperShiftPolyOperator {
    pub fn zero(parity: Parity) -> Self {
        SuperShiftPolyOperator { parity, blocks: Default::default() }
    }

    pub fn even(ee: ShiftPolyOperator, oo: ShiftPolyOperator) -> Self {
        SuperShiftPolyOperator { parity: Parity::Even, blocks: [[ee, ShiftPolyOperator::zero()], [ShiftPolyOperator::zero(), oo]] }
    }

    /// Odd operator from its even-to-odd and odd-to-even blocks.
    pub fn odd(to_odd: ShiftPolyOperator, to_even: ShiftPolyOperator) -> Self {
        SuperShiftPolyOperator { parity: Parity::Odd, blocks: [[ShiftPolyOperator::zero(), to_even], [to_odd, ShiftPolyOperator::zero()]] }
    }

    pub fn block(&self, codomain: Parity, domain: Parity) -> &ShiftPolyOperator {
        &self.blocks[slot(codomain)][slot(domain)]
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(ShiftPolyOperator::is_zero)
    }

    pub fn check_limits(&self, limits: &OperatorLimits) -> Result<()> {
        self.blocks.iter().flatten().try_for_each(|b| b.check_limits(limits))
    }

    fn map_blocks(&self, parity: Parity, f: impl Fn(&ShiftPolyOperator) -> ShiftPolyOperator) -> Self {
        let b = &self.blocks;
        SuperShiftPolyOperator { parity, blocks: [[f(&b[0][0]), f(&b[0][1])], [f(&b[1][0]), f(&b[1][1])]] }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.parity != other.parity {
            return Err(Error::ParityMismatch("cannot add operators of different parity".into()));
        }
        let mut out = self.clone();
        for q in 0..2 {
            for p in 0..2 {
                out.blocks[q][p] = self.blocks[q][p].add(&other.blocks[q][p]);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map_blocks(self.parity, |b| b.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.parity.add(other.parity));
        for q in 0..2 {
            for p in 0..2 {
                let mut acc = ShiftPolyOperator::zero();
                for mid in 0..2 {
                    let (a, b) = (&self.blocks[q][mid], &other.blocks[mid][p]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.compose(b)?);
                    }
                }
                out.blocks[q][p] = acc;
            }
        }
        Ok(out)
    }

    /// `[A, B] = AB - (-1)^{|A||B|} BA`.
    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        ab.add(&ba.scale(&int(-self.parity.koszul(other.parity))))
    }

    pub fn entry(&self, r: SuperIndex, c: SuperIndex) -> Scalar {
        self.block(r.parity, c.parity).entry(r.level, c.level)
    }

    pub fn column(&self, c: SuperIndex) -> Vec<(SuperIndex, Scalar)> {
        PARITIES
            .iter()
            .flat_map(|&q| {
                self.block(q, c.parity)
                    .column(c.level)
                    .into_iter()
                    .map(move |(r, v)| (SuperIndex { parity: q, level: r }, v))
            })
            .collect()
    }

    pub fn row(&self, r: SuperIndex) -> Vec<(SuperIndex, Scalar)> {
        PARITIES
            .iter()
            .flat_map(|&p| {
                self.block(r.parity, p)
                    .row(r.level)
                    .into_iter()
                    .map(move |(c, v)| (SuperIndex { parity: p, level: c }, v))
            })
            .collect()
    }
}

/// Entries of `op` from the `domain` levels to the `codomain` levels that
/// land on `side` of `row_split` while starting on the other side of `col_split`.
fn crossing_entries(
    op: &ShiftPolyOperator,
    row_split: &MonomialSplitting,
    col_split: &MonomialSplitting,
    side: Side,
) -> BTreeMap<(i64, i64), Scalar> {
    let (lo_r, hi_r) = row_split.exceptional_range();
    let (lo_c, hi_c) = col_split.exceptional_range();
    let (lo, hi) = (lo_r.min(lo_c), hi_r.max(hi_c));
    let crosses = |r: i64, c: i64| row_split.side(r) == side && col_split.side(c) != side;
    let mut out = BTreeMap::new();
    for (m, p) in op.shift_terms() {
        for k in (lo - m.abs() - 1)..=(hi + m.abs() + 1) {
            if crosses(k + m, k) {
                chart::accumulate(&mut out, (k + m, k), p.eval(k));
            }
        }
    }
    for (&(r, c), v) in op.finite_part() {
        if crosses(r, c) {
            chart::accumulate(&mut out, (r, c), v.clone());
        }
    }
    chart::prune(out)
}

impl ChartOperator for SuperShiftPolyOperator {
    type Index = SuperIndex;
    type Split = SuperSplitting;

    fn parity(&self) -> Parity {
        self.parity
    }

    fn column(&self, c: SuperIndex) -> Vec<(SuperIndex, Scalar)> {
        SuperShiftPolyOperator::column(self, c)
    }

    fn row(&self, r: SuperIndex) -> Vec<(SuperIndex, Scalar)> {
        SuperShiftPolyOperator::row(self, r)
    }

    fn entry(&self, r: SuperIndex, c: SuperIndex) -> Scalar {
        SuperShiftPolyOperator::entry(self, r, c)
    }

    fn off_diagonal(&self, split: &SuperSplitting, codomain: Side) -> BTreeMap<(SuperIndex, SuperIndex), Scalar> {
        let mut out = BTreeMap::new();
        for q in PARITIES {
            for p in PARITIES {
                let entries = crossing_entries(self.block(q, p), split.component(q), split.component(p), codomain);
                for ((r, c), v) in entries {
                    out.insert((SuperIndex { parity: q, level: r }, SuperIndex { parity: p, level: c }), v);
                }
            }
        }
        out
    }
}

/// Even-to-odd weight `a_r(k) = a0 + a1·k + a2·(r + 1/2)` of `ρ(G_r)`; the
/// odd-to-even weight is normalized to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GWeights {
    pub a0: Scalar,
    pub a1: Scalar,
    pub a2: Scalar,
}

impl GWeights {
    /// `a_r(k) = -(k + j(r + 1/2))`.
    pub fn frozen(j: i64) -> Self {
        GWeights { a0: Scalar::zero(), a1: -Scalar::one(), a2: int(-j) }
    }

    pub fn eval(&self, k: i64, r: HalfInt) -> Scalar {
        &self.a0 + &self.a1 * int(k) + &self.a2 * int(r.plus_half())
    }

    fn row(k: i64, r: HalfInt) -> [Scalar; 3] {
        [Scalar::one(), int(k), int(r.plus_half())]
    }

    /// Solves the bracket relations `[G_r, G_s] = 2L_{r+s}` and
    /// `[L_m, G_r] = (m/2 - r) G_{m+r}`, read on basis vectors, for the weights.
    pub fn determine(j: i64) -> Result<Self> {
        let l_even = |n: i64, k: i64| -(int(k) + frac(j * (n + 1), 2));
        let l_odd = |n: i64, k: i64| -(int(k) + frac((j + 1) * (n + 1), 2));
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs = Vec::new();
        let mut push = |terms: Vec<(Scalar, [Scalar; 3])>, value: Scalar| {
            let mut row = vec![Scalar::zero(); 3];
            for (c, basis) in terms {
                for (slot, b) in row.iter_mut().zip(basis) {
                    *slot += &c * b;
                }
            }
            rows.push(row);
            rhs.push(value);
        };
        let halves: Vec<HalfInt> = [-3, -1, 1, 3].into_iter().map(HalfInt).collect();
        for k in -3..=3 {
            for &r in &halves {
                for &s in &halves {
                    let n = (r.0 + s.0) / 2;
                    // e_k: a_s(k) + a_r(k) = 2 ρ(L_{r+s})_{even}
                    push(vec![(Scalar::one(), Self::row(k, s)), (Scalar::one(), Self::row(k, r))], int(2) * l_even(n, k));
                    // f_k: a_r(k + s + 1/2) + a_s(k + r + 1/2) = 2 ρ(L_{r+s})_{odd}
                    push(
                        vec![
                            (Scalar::one(), Self::row(k + s.plus_half(), r)),
                            (Scalar::one(), Self::row(k + r.plus_half(), s)),
                        ],
                        int(2) * l_odd(n, k),
                    );
                }
                for m in -2..=2 {
                    // e_k: ρ(L_m)ρ(G_r) - ρ(G_r)ρ(L_m) = (m/2 - r) ρ(G_{m+r})
                    let rm = HalfInt(2 * m + r.0);
                    push(
                        vec![
                            (l_odd(m, k + r.minus_half()), Self::row(k, r)),
                            (-l_even(m, k), Self::row(k + m, r)),
                            (-frac(m - r.0, 2), Self::row(k, rm)),
                        ],
                        Scalar::zero(),
                    );
                }
            }
        }
        match linalg::solve(&rows, &rhs) {
            Solution::Unique(x) => {
                let mut it = x.into_iter();
                let (a0, a1, a2) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
                Ok(GWeights { a0, a1, a2 })
            }
            Solution::Underdetermined { free } => {
                Err(Error::Determination(format!("G-action ansatz leaves {free} free parameters at j = {j}")))
            }
            Solution::Inconsistent => Err(Error::Determination(format!("G-action ansatz is inconsistent at j = {j}"))),
        }
    }
}

/// `ρ_{j/2}(x)` on `H_{j/2}`; `x` must be homogeneous. Central terms act by zero.
pub fn rho_super(j: i64, x: &NSElement) -> Result<SuperShiftPolyOperator> {
    let parity = x
        .parity()
        .ok_or_else(|| Error::ParityMismatch(format!("{x} mixes even and odd generators")))?;
    let weights = GWeights::frozen(j);
    let mut ee = ShiftPolyOperator::zero();
    let mut oo = ShiftPolyOperator::zero();
    for (n, c) in &x.l {
        let even = IndexPolynomial::linear(-frac(j * (n + 1), 2), -Scalar::one()).scale(c);
        let odd = IndexPolynomial::linear(-frac((j + 1) * (n + 1), 2), -Scalar::one()).scale(c);
        ee = ee.add(&ShiftPolyOperator::shift(*n, even));
        oo = oo.add(&ShiftPolyOperator::shift(*n, odd));
    }
    let mut to_odd = ShiftPolyOperator::zero();
    let mut to_even = ShiftPolyOperator::zero();
    for (r, c) in &x.g {
        let a = IndexPolynomial::linear(&weights.a0 + &weights.a2 * int(r.plus_half()), weights.a1.clone()).scale(c);
        to_odd = to_odd.add(&ShiftPolyOperator::shift(r.minus_half(), a));
        to_even = to_even.add(&ShiftPolyOperator::shift(r.plus_half(), IndexPolynomial::constant(c.clone())));
    }
    let op = match parity {
        Parity::Even => SuperShiftPolyOperator::even(ee, oo),
        Parity::Odd => SuperShiftPolyOperator::odd(to_odd, to_even),
    };
    op.check_limits(&OperatorLimits::default())?;
    Ok(op)
}

/// `str(F^{-+} G^{+-} - (-1)^{|F||G|} G^{-+} F^{+-})` on the standard super splitting.
pub fn super_japanese_cocycle(f: &SuperShiftPolyOperator, g: &SuperShiftPolyOperator) -> Scalar {
    chart::chart_cocycle(f, g, &SuperSplitting::standard())
}

/// `α_s(F) = str(P_+ F P_+ - P_K F P_K)`.
pub fn super_alpha(f: &SuperShiftPolyOperator, split: &SuperSplitting) -> Scalar {
    chart::alpha(f, split)
}

/// `η_s(ρ_{j/2}(x), ρ_{j/2}(y))`.
pub fn super_pulled_back(j: i64, x: &NSElement, y: &NSElement) -> Result<Scalar> {
    Ok(super_japanese_cocycle(&rho_super(j, x)?, &rho_super(j, y)?))
}

/// `η_s(ρ_{j/2}(L_m), ρ_{j/2}(L_{-m})) / η_s(ρ_{1/2}(L_m), ρ_{1/2}(L_{-m}))`, for `m >= 2`.
pub fn super_charge_ratio(j: i64, m: i64) -> Result<Scalar> {
    if m < 2 {
        return Err(Error::Precondition(format!("super_charge_ratio needs m >= 2 (got {m})")));
    }
    let (x, y) = (NSElement::l(m), NSElement::l(-m));
    Ok(super_pulled_back(j, &x, &y)? / super_pulled_back(1, &x, &y)?)
}

impl WeightedPair<SuperSplitting> {
    /// Both factors at the origin of the standard super chart.
    pub fn super_standard(w2: i64, w1: i64) -> Self {
        WeightedPair::new(ChartPoint::super_origin(), ChartPoint::super_origin(), w2, w1)
    }
}

fn represent_pair(x: &NSElement) -> Result<(SuperShiftPolyOperator, SuperShiftPolyOperator)> {
    Ok((rho_super(SUPER_SIDES.0, x)?, rho_super(SUPER_SIDES.1, x)?))
}

/// Weighted super curvature defect on `Gr_{3/2} × Gr_{1/2}`.
pub fn super_curvature_defect(x: &NSElement, y: &NSElement, base: &WeightedPair<SuperSplitting>) -> Result<Scalar> {
    let xy = ns_bracket(x, y);
    let mut total = Scalar::zero();
    for (j, w, p) in [(SUPER_SIDES.0, base.w2, &base.p2), (SUPER_SIDES.1, base.w1, &base.p1)] {
        let (f, g, fg) = (rho_super(j, x)?, rho_super(j, y)?, rho_super(j, &xy)?);
        total += int(w) * graded_side_defect(&f, &g, &fg, p)?;
    }
    Ok(total)
}

fn check_generator_parities(generators: &[NamedGenerator<NSElement>]) -> Result<()> {
    for g in generators {
        if g.element.parity() != Some(g.parity) {
            return Err(Error::ParityMismatch(format!(
                "variable `{}` is {} but its generator {} is not",
                g.name, g.parity, g.element
            )));
        }
    }
    Ok(())
}

/// Jet of `exp(Σ s_n L_n + Σ σ_r G_r)` on `Gr_{3/2} × Gr_{1/2}`.
pub fn super_mumford_jet(
    base: &WeightedPair<SuperSplitting>,
    generators: &[NamedGenerator<NSElement>],
    order: u32,
) -> Result<MumfordJet<SuperSplitting>> {
    check_generator_parities(generators)?;
    if order == 0 {
        return Err(Error::Precondition("jet order must be at least 1".into()));
    }
    let space = JetSpace::new(
        generators.iter().map(|g| Variable { name: g.name.clone(), parity: g.parity }).collect(),
        order,
    )?;
    let (ops3, ops1): (Vec<_>, Vec<_>) =
        generators.iter().map(|g| represent_pair(&g.element)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    weighted_flow(&space, base, &ops3, &ops1)
}

/// Graded analogue of the bosonic horizontality check.
pub fn super_horizontality_check(
    base: &WeightedPair<SuperSplitting>,
    generators: &[NamedGenerator<NSElement>],
) -> Result<HorizontalityReport> {
    check_generator_parities(generators)?;
    let mut pairs = Vec::new();
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            let ab = ns_bracket(&a.element, &b.element);
            let x = represent_pair(&a.element)?;
            let y = represent_pair(&b.element)?;
            let xy = represent_pair(&ab)?;
            let (forward, backward, bracket_term) =
                pair_defect(base, (a.parity, b.parity), (&x.0, &x.1), (&y.0, &y.1), (&xy.0, &xy.1))?;
            let defect = &forward - &backward - &bracket_term;
            pairs.push(PairDefect {
                first: a.name.clone(),
                second: b.name.clone(),
                forward,
                backward,
                bracket_term,
                defect,
                curvature_defect: super_curvature_defect(&a.element, &b.element, base)?,
            });
        }
    }
    Ok(HorizontalityReport { pairs })
}
