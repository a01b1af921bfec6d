//! Superconformal vector fields on the formal super disk `(z | ζ)`, with
//! Laurent-polynomial coefficients, and their super commutator.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::NSElement;
use crate::scalar::{frac, int, Parity, Scalar};

fn clean(m: BTreeMap<i64, Scalar>) -> BTreeMap<i64, Scalar> {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn poly_add(a: &BTreeMap<i64, Scalar>, b: &BTreeMap<i64, Scalar>) -> BTreeMap<i64, Scalar> {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_insert_with(Scalar::zero) += c;
    }
    clean(out)
}

fn poly_mul(a: &BTreeMap<i64, Scalar>, b: &BTreeMap<i64, Scalar>) -> BTreeMap<i64, Scalar> {
    let mut out = BTreeMap::new();
    for (i, x) in a {
        for (k, y) in b {
            *out.entry(i + k).or_insert_with(Scalar::zero) += x * y;
        }
    }
    clean(out)
}

/// `a(z) + ζ b(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuperFunction {
    pub even: BTreeMap<i64, Scalar>,
    pub odd: BTreeMap<i64, Scalar>,
}

impl SuperFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c z^k`.
    pub fn z(k: i64, c: Scalar) -> Self {
        SuperFunction { even: clean(BTreeMap::from([(k, c)])), odd: BTreeMap::new() }
    }

    /// `c ζ z^k`.
    pub fn zeta_z(k: i64, c: Scalar) -> Self {
        SuperFunction { even: BTreeMap::new(), odd: clean(BTreeMap::from([(k, c)])) }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        SuperFunction { even: poly_add(&self.even, &other.even), odd: poly_add(&self.odd, &other.odd) }
    }

    pub fn scale(&self, q: &Scalar) -> Self {
        let s = |m: &BTreeMap<i64, Scalar>| clean(m.iter().map(|(k, c)| (*k, c * q)).collect());
        SuperFunction { even: s(&self.even), odd: s(&self.odd) }
    }

    /// `(a + ζb)(c + ζd) = ac + ζ(bc + ad)`.
    pub fn mul(&self, other: &Self) -> Self {
        SuperFunction {
            even: poly_mul(&self.even, &other.even),
            odd: poly_add(&poly_mul(&self.odd, &other.even), &poly_mul(&self.even, &other.odd)),
        }
    }

    pub fn d_z(&self) -> Self {
        let d = |m: &BTreeMap<i64, Scalar>| clean(m.iter().map(|(k, c)| (k - 1, c * int(*k))).collect());
        SuperFunction { even: d(&self.even), odd: d(&self.odd) }
    }

    /// Left derivative `∂_ζ (a + ζb) = b`.
    pub fn d_zeta(&self) -> Self {
        SuperFunction { even: self.odd.clone(), odd: BTreeMap::new() }
    }
}

/// `f ∂_z + g ∂_ζ` of a definite parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperVectorField {
    pub parity: Parity,
    pub dz: SuperFunction,
    pub dzeta: SuperFunction,
}

impl SuperVectorField {
    pub fn zero(parity: Parity) -> Self {
        SuperVectorField { parity, dz: SuperFunction::zero(), dzeta: SuperFunction::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.dz.is_zero() && self.dzeta.is_zero()
    }

    /// `L_n = -z^{n+1} ∂_z - (n+1)/2 z^n ζ ∂_ζ`.
    pub fn l(n: i64) -> Self {
        SuperVectorField {
            parity: Parity::Even,
            dz: SuperFunction::z(n + 1, -Scalar::one()),
            dzeta: SuperFunction::zeta_z(n, -frac(n + 1, 2)),
        }
    }

    /// The printed field `-1/2 z^{r+1/2} (ζ ∂_z - ∂_ζ)`, `r = twice_r / 2`.
    pub fn g_printed(twice_r: i64) -> Self {
        let e = (twice_r + 1).div_euclid(2);
        SuperVectorField {
            parity: Parity::Odd,
            dz: SuperFunction::zeta_z(e, frac(-1, 2)),
            dzeta: SuperFunction::z(e, frac(1, 2)),
        }
    }

    /// Basis field `G_r`: twice the printed one.
    pub fn g(twice_r: i64) -> Self {
        Self::g_printed(twice_r).scale(&int(2))
    }

    /// Field of the non-central part of `x`; `None` if `x` is not homogeneous.
    pub fn from_ns(x: &NSElement) -> Option<Self> {
        let parity = x.parity()?;
        let mut out = Self::zero(parity);
        for (n, c) in x.l_terms() {
            out = out.add(&Self::l(*n).scale(c));
        }
        for (r, c) in x.g_terms() {
            out = out.add(&Self::g(r.twice()).scale(c));
        }
        Some(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let parity = if self.is_zero() { other.parity } else { self.parity };
        SuperVectorField { parity, dz: self.dz.add(&other.dz), dzeta: self.dzeta.add(&other.dzeta) }
    }

    pub fn scale(&self, q: &Scalar) -> Self {
        SuperVectorField { parity: self.parity, dz: self.dz.scale(q), dzeta: self.dzeta.scale(q) }
    }

    pub fn apply(&self, h: &SuperFunction) -> SuperFunction {
        self.dz.mul(&h.d_z()).add(&self.dzeta.mul(&h.d_zeta()))
    }

    /// `[V, W]^i = V(W^i) - (-1)^{|V||W|} W(V^i)`.
    pub fn supercommutator(&self, other: &Self) -> Self {
        let sign = int(-self.parity.koszul(other.parity));
        SuperVectorField {
            parity: self.parity.add(other.parity),
            dz: self.apply(&other.dz).add(&other.apply(&self.dz).scale(&sign)),
            dzeta: self.apply(&other.dzeta).add(&other.apply(&self.dzeta).scale(&sign)),
        }
    }
}
