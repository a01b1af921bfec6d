//! Monomial splittings, chart points of the Sato Grassmannian and
//! determinant-line bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::chart::{self, ChartOperator, Matrix, Splitting};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// `D = ({k < 0} \ shift_out) ∪ shift_in`, `K` its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MonomialSplitting {
    shift_in: BTreeSet<i64>,
    shift_out: BTreeSet<i64>,
}

impl MonomialSplitting {
    /// `D = H^-`, `K = H^+`.
    pub fn standard() -> Self {
        Self::default()
    }

    pub fn new(
        shift_in: impl IntoIterator<Item = i64>,
        shift_out: impl IntoIterator<Item = i64>,
    ) -> Result<Self> {
        let shift_in: BTreeSet<i64> = shift_in.into_iter().collect();
        let shift_out: BTreeSet<i64> = shift_out.into_iter().collect();
        if let Some(k) = shift_in.iter().find(|k| **k < 0) {
            return Err(Error::InvalidSplitting(format!(
                "index {k} moved into D must be nonnegative"
            )));
        }
        if let Some(k) = shift_out.iter().find(|k| **k >= 0) {
            return Err(Error::InvalidSplitting(format!(
                "index {k} moved into K must be negative"
            )));
        }
        Ok(MonomialSplitting { shift_in, shift_out })
    }

    pub fn shift_in_set(&self) -> &BTreeSet<i64> {
        &self.shift_in
    }

    pub fn shift_out_set(&self) -> &BTreeSet<i64> {
        &self.shift_out
    }

    pub fn is_standard(&self) -> bool {
        self.shift_in.is_empty() && self.shift_out.is_empty()
    }

    /// Smallest interval containing 0 and every moved index; outside it the
    /// splitting agrees with `H^- ⊕ H^+`.
    pub fn exceptional_range(&self) -> (i64, i64) {
        let all = self.shift_in.iter().chain(&self.shift_out).copied();
        let lo = all.clone().min().unwrap_or(0).min(0);
        let hi = all.max().unwrap_or(0).max(0);
        (lo, hi)
    }

    /// `|D ∩ H^+| - |H^- \ D|`.
    pub fn relative_index(&self) -> i64 {
        self.shift_in.len() as i64 - self.shift_out.len() as i64
    }
}

impl Splitting for MonomialSplitting {
    type Index = i64;

    fn is_discrete(&self, k: i64) -> bool {
        if k < 0 {
            !self.shift_out.contains(&k)
        } else {
            self.shift_in.contains(&k)
        }
    }

    fn shifted_in(&self) -> Vec<i64> {
        self.shift_in.iter().copied().collect()
    }

    fn shifted_out(&self) -> Vec<i64> {
        self.shift_out.iter().copied().collect()
    }
}

/// The graph of a finite-support `A: D -> K`, as a point of the chart `U_{D,K}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint<S: Splitting = MonomialSplitting> {
    splitting: S,
    entries: Matrix<S::Index, Scalar>,
}

impl<S: Splitting> ChartPoint<S> {
    /// `entries` are `(row ∈ K, col ∈ D) -> value`.
    pub fn new(splitting: S, entries: Matrix<S::Index, Scalar>) -> Result<Self> {
        for &(r, c) in entries.keys() {
            if splitting.is_discrete(r) {
                return Err(Error::InvalidChartPoint(format!("row {r:?} is not in K")));
            }
            if !splitting.is_discrete(c) {
                return Err(Error::InvalidChartPoint(format!("column {c:?} is not in D")));
            }
        }
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(ChartPoint { splitting, entries })
    }

    /// The base point `A = 0` of the chart.
    pub fn origin(splitting: S) -> Self {
        ChartPoint { splitting, entries: BTreeMap::new() }
    }

    pub fn splitting(&self) -> &S {
        &self.splitting
    }

    pub fn entries(&self) -> &Matrix<S::Index, Scalar> {
        &self.entries
    }
}

impl ChartPoint<MonomialSplitting> {
    pub fn standard_origin() -> Self {
        Self::origin(MonomialSplitting::standard())
    }

    /// Convenience constructor from `(row, col, value)` triples.
    pub fn from_triples(
        splitting: MonomialSplitting,
        triples: impl IntoIterator<Item = (i64, i64, Scalar)>,
    ) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (r, c, v) in triples {
            *entries.entry((r, c)).or_insert_with(Scalar::zero) += v;
        }
        Self::new(splitting, entries)
    }

    /// Smallest interval containing the exceptional range and the matrix support.
    pub fn support_range(&self) -> (i64, i64) {
        let (mut lo, mut hi) = self.splitting.exceptional_range();
        for &(r, c) in self.entries.keys() {
            lo = lo.min(r).min(c);
            hi = hi.max(r).max(c);
        }
        (lo, hi)
    }
}

/// Tangent vector `L_F A` of the operator `F` at `P`.
pub fn witt_vector_field<O: ChartOperator>(f: &O, p: &ChartPoint<O::Split>) -> Matrix<O::Index, Scalar> {
    chart::vector_field(&[(Scalar::one(), f)], &p.entries, &p.splitting)
}

/// Scalar part of the central-extension action, `str(F^{DK} A) + α(F)`.
pub fn tilde_scalar_part<O: ChartOperator>(f: &O, p: &ChartPoint<O::Split>) -> Scalar {
    chart::scalar_part(&[(Scalar::one(), f)], &p.entries, &p.splitting).unwrap_or_else(Scalar::zero)
}

/// `str(F^{DK} V)` for a tangent vector `V`: the derivative of `tilde_scalar_part(F, ·)` along `V`.
pub fn scalar_part_derivative<O: ChartOperator>(
    f: &O,
    split: &O::Split,
    v: &Matrix<O::Index, Scalar>,
) -> Scalar {
    chart::scalar_linear(&[(Scalar::one(), f)], v, split).unwrap_or_else(Scalar::zero)
}

/// Dimensions of the numerator and denominator of the determinant fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetFiberDims {
    /// `dim(D' ∩ H^+)`
    pub dim_intersection: usize,
    /// `dim(H / (D' + H^+))`
    pub dim_quotient: usize,
    pub window: (i64, i64),
}

impl DetFiberDims {
    pub fn index(&self) -> i64 {
        self.dim_intersection as i64 - self.dim_quotient as i64
    }
}

fn fiber_dims_in_window(p: &ChartPoint, lo: i64, hi: i64) -> (usize, usize) {
    // Below `lo` every graph vector is a bare e_d ∈ H^-, so modulo H^+ the
    // problem reduces to the negative indices of the window.
    let discrete: Vec<i64> = (lo..=hi).filter(|&d| p.splitting.is_discrete(d)).collect();
    let negatives: Vec<i64> = (lo..0).collect();
    let rows: Vec<Vec<Scalar>> = negatives
        .iter()
        .map(|&k| {
            discrete
                .iter()
                .map(|&d| {
                    let mut v = p.entries.get(&(k, d)).cloned().unwrap_or_else(Scalar::zero);
                    if k == d {
                        v += Scalar::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let rank = linalg::rank(&rows);
    (discrete.len() - rank, negatives.len() - rank)
}

/// Computes `dim(D' ∩ H^+)` and `dim(H/(D' + H^+))` for the graph `D'` of `A`,
/// then repeats on a doubled window and requires agreement.
pub fn det_fiber_dims(p: &ChartPoint, window: (i64, i64)) -> Result<DetFiberDims> {
    let (lo, hi) = window;
    let (s_lo, s_hi) = p.support_range();
    let (required_lo, required_hi) = (s_lo - 1, s_hi + 1);
    if lo > required_lo || hi < required_hi {
        return Err(Error::WindowTooSmall { lo, hi, required_lo, required_hi });
    }
    let first = fiber_dims_in_window(p, lo, hi);
    let width = hi - lo + 1;
    let second = fiber_dims_in_window(p, lo - width, hi + width);
    if first != second {
        return Err(Error::WindowTooSmall {
            lo,
            hi,
            required_lo: lo - width,
            required_hi: hi + width,
        });
    }
    Ok(DetFiberDims {
        dim_intersection: first.0,
        dim_quotient: first.1,
        window,
    })
}

/// Exponent balance of the determinant fiber; depends only on the splitting.
pub fn virtual_index(p: &ChartPoint) -> i64 {
    p.splitting.relative_index()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn make_splitting_examples() {
        let s = MonomialSplitting::new([], []).unwrap();
        assert!(s.is_standard());
        let s = MonomialSplitting::new([0], [-1]).unwrap();
        assert!(s.is_discrete(0) && !s.is_discrete(-1) && s.is_discrete(-2) && !s.is_discrete(1));
        let s = MonomialSplitting::new([0, 1], []).unwrap();
        assert_eq!(s.relative_index(), 2);
        assert!(MonomialSplitting::new([-1], []).is_err());
        assert!(MonomialSplitting::new([], [0]).is_err());
    }

    #[test]
    fn chart_point_rejects_misplaced_entries() {
        let s = MonomialSplitting::standard();
        assert!(ChartPoint::from_triples(s.clone(), [(0, -1, int(1))]).is_ok());
        assert!(ChartPoint::from_triples(s.clone(), [(-1, -2, int(1))]).is_err());
        assert!(ChartPoint::from_triples(s, [(0, 1, int(1))]).is_err());
    }

    #[test]
    fn det_fiber_examples() {
        let p = ChartPoint::standard_origin();
        let d = det_fiber_dims(&p, (-4, 4)).unwrap();
        assert_eq!((d.dim_intersection, d.dim_quotient), (0, 0));

        let s = MonomialSplitting::new([0], [-1]).unwrap();
        let p = ChartPoint::origin(s.clone());
        let d = det_fiber_dims(&p, (-4, 4)).unwrap();
        assert_eq!((d.dim_intersection, d.dim_quotient), (1, 1));

        let p = ChartPoint::from_triples(s, [(-1, 0, int(1))]).unwrap();
        let d = det_fiber_dims(&p, (-4, 4)).unwrap();
        assert_eq!((d.dim_intersection, d.dim_quotient), (0, 0));
        assert_eq!(virtual_index(&p), 0);
    }

    #[test]
    fn det_fiber_window_guard() {
        let s = MonomialSplitting::new([3], [-5]).unwrap();
        let p = ChartPoint::origin(s);
        match det_fiber_dims(&p, (-2, 2)) {
            Err(Error::WindowTooSmall { required_lo, required_hi, .. }) => {
                assert_eq!((required_lo, required_hi), (-6, 4));
            }
            other => panic!("expected window error, got {other:?}"),
        }
    }

    #[test]
    fn relative_index_two() {
        let s = MonomialSplitting::new([0, 1], []).unwrap();
        let p = ChartPoint::origin(s);
        let d = det_fiber_dims(&p, (-3, 3)).unwrap();
        assert_eq!(d.index(), 2);
        assert_eq!(virtual_index(&p), 2);
    }
}
