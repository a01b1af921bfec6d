//! Shift-polynomial operators on the Laurent basis `{e_k : k ∈ ℤ}`.
//!
//! An operator is a finite sum of weighted shifts `e_k ↦ p_m(k) e_{k+m}` with
//! polynomial weights, plus a finite-rank correction. The class is closed
//! under composition, contains the images of the Witt algebra, and has
//! finite-rank off-diagonal blocks against every monomial splitting, which is
//! what makes the cocycle traces exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::chart::{ChartOperator, Side, Splitting};
use crate::error::{Error, Result};
use crate::grassmann::MonomialSplitting;
use crate::scalar::{int, Parity, Scalar};

/// Finite-support vector in the Laurent basis.
pub type SparseVector = BTreeMap<i64, Scalar>;

/// Guards against runaway symbolic growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorLimits {
    pub max_degree: usize,
    pub max_shift: i64,
}

impl Default for OperatorLimits {
    fn default() -> Self {
        OperatorLimits { max_degree: 8, max_shift: 64 }
    }
}

/// Polynomial `p(k) = Σ c_i k^i` in the basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexPolynomial {
    coeffs: Vec<Scalar>,
}

impl IndexPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c0 + c1 k`.
    pub fn linear(c0: Scalar, c1: Scalar) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    /// Coefficients in increasing degree; trailing zeros are dropped.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IndexPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, k: i64) -> Scalar {
        self.eval_at(&int(k))
    }

    pub fn eval_at(&self, k: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * k + c)
    }

    /// `k ↦ p(k + m)`.
    pub fn shifted(&self, m: i64) -> Self {
        // Horner in the polynomial ring: acc = acc * (k + m) + c
        let m = int(m);
        let mut acc: Vec<Scalar> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![Scalar::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * &m;
            }
            next[0] += c;
            acc = next;
        }
        Self::from_coeffs(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
                a + b
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
}

impl fmt::Display for IndexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})k"),
                _ => format!("({c})k^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `Σ_m S^m p_m + R` with `S^m p_m: e_k ↦ p_m(k) e_{k+m}` and `R` finite rank.
///
/// Both maps are kept free of zeros, so structural equality is operator equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ShiftPolyOperator {
    shifts: BTreeMap<i64, IndexPolynomial>,
    finite: BTreeMap<(i64, i64), Scalar>,
}

impl ShiftPolyOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::shift(0, IndexPolynomial::constant(Scalar::one()))
    }

    pub fn shift(m: i64, p: IndexPolynomial) -> Self {
        Self::from_parts(BTreeMap::from([(m, p)]), BTreeMap::new())
    }

    /// Finite-rank operator from `(row, col, value)` triples; duplicates add up.
    pub fn finite_rank(entries: impl IntoIterator<Item = (i64, i64, Scalar)>) -> Self {
        let mut finite = BTreeMap::new();
        for (r, c, v) in entries {
            *finite.entry((r, c)).or_insert_with(Scalar::zero) += v;
        }
        Self::from_parts(BTreeMap::new(), finite)
    }

    pub fn from_parts(
        shifts: BTreeMap<i64, IndexPolynomial>,
        finite: BTreeMap<(i64, i64), Scalar>,
    ) -> Self {
        ShiftPolyOperator {
            shifts: shifts.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
            finite: finite.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn shift_terms(&self) -> &BTreeMap<i64, IndexPolynomial> {
        &self.shifts
    }

    pub fn finite_part(&self) -> &BTreeMap<(i64, i64), Scalar> {
        &self.finite
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.is_empty() && self.finite.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.shifts.values().filter_map(IndexPolynomial::degree).max()
    }

    pub fn max_shift(&self) -> i64 {
        self.shifts.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub fn check_limits(&self, limits: &OperatorLimits) -> Result<()> {
        if let Some(d) = self.degree() {
            if d > limits.max_degree {
                return Err(Error::DegreeGuard { degree: d, limit: limits.max_degree });
            }
        }
        let w = self.max_shift();
        if w > limits.max_shift {
            return Err(Error::ShiftGuard { shift: w, limit: limits.max_shift });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut shifts = self.shifts.clone();
        for (m, p) in &other.shifts {
            let entry = shifts.entry(*m).or_default();
            *entry = entry.add(p);
        }
        let mut finite = self.finite.clone();
        for (k, v) in &other.finite {
            *finite.entry(*k).or_insert_with(Scalar::zero) += v;
        }
        Self::from_parts(shifts, finite)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_parts(
            self.shifts.iter().map(|(m, p)| (*m, p.scale(c))).collect(),
            self.finite.iter().map(|(k, v)| (*k, v * c)).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Matrix entry `F_{r,c}`.
    pub fn entry(&self, r: i64, c: i64) -> Scalar {
        let mut v = self
            .shifts
            .get(&(r - c))
            .map(|p| p.eval(c))
            .unwrap_or_else(Scalar::zero);
        if let Some(x) = self.finite.get(&(r, c)) {
            v += x;
        }
        v
    }

    /// Image of the basis vector `e_c`.
    pub fn column(&self, c: i64) -> Vec<(i64, Scalar)> {
        let mut col = SparseVector::new();
        for (m, p) in &self.shifts {
            let v = p.eval(c);
            if !v.is_zero() {
                col.insert(c + m, v);
            }
        }
        for (&(r, cc), v) in &self.finite {
            if cc == c {
                *col.entry(r).or_insert_with(Scalar::zero) += v;
            }
        }
        col.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Nonzero entries of row `r`, as `(col, value)`.
    pub fn row(&self, r: i64) -> Vec<(i64, Scalar)> {
        let mut row = SparseVector::new();
        for (m, p) in &self.shifts {
            let c = r - m;
            let v = p.eval(c);
            if !v.is_zero() {
                row.insert(c, v);
            }
        }
        for (&(_, c), v) in self.finite.range((r, i64::MIN)..=(r, i64::MAX)) {
            *row.entry(c).or_insert_with(Scalar::zero) += v;
        }
        row.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&k, x) in v {
            for (r, f) in self.column(k) {
                *out.entry(r).or_insert_with(Scalar::zero) += f * x;
            }
        }
        out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// `self ∘ other` under the default limits.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.compose_with(other, &OperatorLimits::default())
    }

    pub fn compose_with(&self, other: &Self, limits: &OperatorLimits) -> Result<Self> {
        let mut shifts: BTreeMap<i64, IndexPolynomial> = BTreeMap::new();
        for (m1, p1) in &self.shifts {
            for (m2, p2) in &other.shifts {
                let term = p1.shifted(*m2).mul(p2);
                let entry = shifts.entry(m1 + m2).or_default();
                *entry = entry.add(&term);
            }
        }
        let mut finite: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        let mut put = |r: i64, c: i64, v: Scalar| {
            if !v.is_zero() {
                *finite.entry((r, c)).or_insert_with(Scalar::zero) += v;
            }
        };
        // shifts ∘ finite
        for (&(r, c), v) in &other.finite {
            for (m, p) in &self.shifts {
                put(r + m, c, p.eval(r) * v);
            }
        }
        // finite ∘ shifts
        for (&(r, c), v) in &self.finite {
            for (m, p) in &other.shifts {
                let src = c - m;
                put(r, src, v * p.eval(src));
            }
        }
        // finite ∘ finite
        for (&(r1, c1), v1) in &self.finite {
            for (&(_, c2), v2) in other.finite.range((c1, i64::MIN)..=(c1, i64::MAX)) {
                put(r1, c2, v1 * v2);
            }
        }
        let out = Self::from_parts(shifts, finite);
        out.check_limits(limits)?;
        Ok(out)
    }

    /// `[F, G] = FG - GF`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.commutator_with(other, &OperatorLimits::default())
    }

    pub fn commutator_with(&self, other: &Self, limits: &OperatorLimits) -> Result<Self> {
        let fg = self.compose_with(other, limits)?;
        let gf = other.compose_with(self, limits)?;
        Ok(fg.sub(&gf))
    }

    /// Entries of the block `F^{codomain, domain}` with `codomain != domain`.
    pub fn off_diagonal_block(&self, split: &MonomialSplitting, codomain: Side) -> FiniteRankBlock {
        let domain = opposite(codomain);
        let (lo, hi) = split.exceptional_range();
        let mut entries: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        for (m, p) in &self.shifts {
            let w = m.abs();
            for k in (lo - w)..=(hi + w) {
                if split.side(k) == domain && split.side(k + m) == codomain {
                    let v = p.eval(k);
                    if !v.is_zero() {
                        entries.insert((k + m, k), v);
                    }
                }
            }
        }
        for (&(r, c), v) in &self.finite {
            if split.side(c) == domain && split.side(r) == codomain {
                *entries.entry((r, c)).or_insert_with(Scalar::zero) += v;
            }
        }
        FiniteRankBlock::new(entries, codomain, domain)
    }

    /// The block of `F` in the given quadrant of a splitting.
    pub fn block(&self, split: &MonomialSplitting, quadrant: Quadrant) -> Block {
        let (codomain, domain) = quadrant.sides();
        if codomain == domain {
            Block::Restricted(RestrictedOperator {
                op: self.clone(),
                splitting: split.clone(),
                side: domain,
            })
        } else {
            Block::Finite(self.off_diagonal_block(split, codomain))
        }
    }

    /// Dense row-major rendering of the window `[lo, hi] × [lo, hi]` (test tooling).
    pub fn render_dense(&self, lo: i64, hi: i64) -> Vec<Vec<Scalar>> {
        (lo..=hi)
            .map(|r| (lo..=hi).map(|c| self.entry(r, c)).collect())
            .collect()
    }
}

fn opposite(side: Side) -> Side {
    match side {
        Side::Discrete => Side::Compact,
        Side::Compact => Side::Discrete,
    }
}

impl ChartOperator for ShiftPolyOperator {
    type Index = i64;
    type Split = MonomialSplitting;

    fn parity(&self) -> Parity {
        Parity::Even
    }

    fn column(&self, c: i64) -> Vec<(i64, Scalar)> {
        ShiftPolyOperator::column(self, c)
    }

    fn row(&self, r: i64) -> Vec<(i64, Scalar)> {
        ShiftPolyOperator::row(self, r)
    }

    fn entry(&self, r: i64, c: i64) -> Scalar {
        ShiftPolyOperator::entry(self, r, c)
    }

    fn off_diagonal(&self, split: &MonomialSplitting, codomain: Side) -> BTreeMap<(i64, i64), Scalar> {
        self.off_diagonal_block(split, codomain).entries
    }
}

/// Quadrants `F^{XY}: Y -> X`. The standard-splitting names map as
/// `−− = DD`, `−+ = DK`, `+− = KD`, `++ = KK`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    DD,
    DK,
    KD,
    KK,
}

impl Quadrant {
    /// `(codomain, domain)`.
    pub fn sides(self) -> (Side, Side) {
        match self {
            Quadrant::DD => (Side::Discrete, Side::Discrete),
            Quadrant::DK => (Side::Discrete, Side::Compact),
            Quadrant::KD => (Side::Compact, Side::Discrete),
            Quadrant::KK => (Side::Compact, Side::Compact),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "DD" | "--" | "−−" => Ok(Quadrant::DD),
            "DK" | "-+" | "−+" => Ok(Quadrant::DK),
            "KD" | "+-" | "+−" => Ok(Quadrant::KD),
            "KK" | "++" => Ok(Quadrant::KK),
            other => Err(Error::Parse(format!("unknown quadrant `{other}`"))),
        }
    }
}

/// A finite-rank map between the two sides of a splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRankBlock {
    entries: BTreeMap<(i64, i64), Scalar>,
    codomain: Side,
    domain: Side,
}

impl FiniteRankBlock {
    pub fn new(entries: BTreeMap<(i64, i64), Scalar>, codomain: Side, domain: Side) -> Self {
        FiniteRankBlock {
            entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            codomain,
            domain,
        }
    }

    /// Identity on a finite set of indices lying on one side.
    pub fn identity_on(indices: impl IntoIterator<Item = i64>, side: Side) -> Self {
        Self::new(indices.into_iter().map(|i| ((i, i), Scalar::one())).collect(), side, side)
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), Scalar> {
        &self.entries
    }

    pub fn codomain(&self) -> Side {
        self.codomain
    }

    pub fn domain(&self) -> Side {
        self.domain
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `self ∘ other`; requires `other`'s codomain to be `self`'s domain.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.domain != other.codomain {
            return Err(Error::TagMismatch(format!(
                "cannot compose a map out of {:?} with a map into {:?}",
                self.domain, other.codomain
            )));
        }
        let mut out: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        for (&(r, mid), a) in &self.entries {
            for (&(mid2, c), b) in &other.entries {
                if mid == mid2 {
                    *out.entry((r, c)).or_insert_with(Scalar::zero) += a * b;
                }
            }
        }
        Ok(Self::new(out, self.codomain, other.domain))
    }

    /// Trace of a finite-rank endomorphism of one side.
    pub fn trace(&self) -> Result<Scalar> {
        if self.domain != self.codomain {
            return Err(Error::TagMismatch(format!(
                "trace of a map {:?} -> {:?} is undefined",
                self.domain, self.codomain
            )));
        }
        Ok(self
            .entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|(_, v)| v.clone())
            .sum())
    }
}

/// Trace of the composite `left ∘ right` of two blocks.
pub fn finite_trace(left: &FiniteRankBlock, right: &FiniteRankBlock) -> Result<Scalar> {
    left.compose(right)?.trace()
}

/// A diagonal quadrant: the operator compressed to one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedOperator {
    pub op: ShiftPolyOperator,
    pub splitting: MonomialSplitting,
    pub side: Side,
}

impl RestrictedOperator {
    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let input: SparseVector = v
            .iter()
            .filter(|(k, _)| self.splitting.side(**k) == self.side)
            .map(|(k, x)| (*k, x.clone()))
            .collect();
        self.op
            .apply(&input)
            .into_iter()
            .filter(|(k, _)| self.splitting.side(*k) == self.side)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Finite(FiniteRankBlock),
    Restricted(RestrictedOperator),
}

impl Block {
    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        match self {
            Block::Restricted(r) => r.apply(v),
            Block::Finite(b) => {
                let mut out = SparseVector::new();
                for (&(r, c), f) in &b.entries {
                    if let Some(x) = v.get(&c) {
                        *out.entry(r).or_insert_with(Scalar::zero) += f * x;
                    }
                }
                out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            }
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteRankBlock> {
        match self {
            Block::Finite(b) => Some(b),
            Block::Restricted(_) => None,
        }
    }
}
