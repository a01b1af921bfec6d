//! Witt and Virasoro elements, the intermediate-series representations
//! `ρ_j`, the Japanese cocycle and its chart variants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::chart::{self, Side};
use crate::error::{Error, Result};
use crate::grassmann::MonomialSplitting;
use crate::operator::{finite_trace, IndexPolynomial, ShiftPolyOperator};
use crate::scalar::{frac, int, Scalar};

/// `Σ c_n L_n` with `L_n = -z^{n+1} d/dz`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WittElement {
    coeffs: BTreeMap<i64, Scalar>,
}

impl WittElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `L_n`.
    pub fn l(n: i64) -> Self {
        Self::from_terms([(n, Scalar::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_insert_with(Scalar::zero) += c;
        }
        WittElement {
            coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.coeffs.iter().chain(&other.coeffs).map(|(n, c)| (*n, c.clone())))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(n, x)| (*n, x * c)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// `[L_m, L_n] = (m - n) L_{m+n}`, extended bilinearly.
    pub fn bracket(&self, other: &Self) -> Self {
        Self::from_terms(self.coeffs.iter().flat_map(|(m, a)| {
            other
                .coeffs
                .iter()
                .map(move |(n, b)| (m + n, a * b * int(m - n)))
        }))
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(n, c)| format!("{c}*L{n}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Witt element plus a multiple of the central element `C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VirasoroElement {
    pub witt: WittElement,
    pub central: Scalar,
}

impl VirasoroElement {
    pub fn new(witt: WittElement, central: Scalar) -> Self {
        VirasoroElement { witt, central }
    }

    pub fn l(n: i64) -> Self {
        Self::new(WittElement::l(n), Scalar::zero())
    }

    pub fn c() -> Self {
        Self::new(WittElement::zero(), Scalar::one())
    }

    /// `[L_m, L_n] = (m - n) L_{m+n} + (m^3 - m) δ_{m,-n} C`, `C` central.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut central = Scalar::zero();
        for (m, a) in self.witt.terms() {
            if let Some(b) = other.witt.terms().get(&-m) {
                central += a * b * int(m * m * m - m);
            }
        }
        Self::new(self.witt.bracket(&other.witt), central)
    }
}

/// Element `(F, c)` of the central extension of 𝔤𝔩 by the Japanese cocycle.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GlTildeElement {
    pub op: ShiftPolyOperator,
    pub central: Scalar,
}

impl GlTildeElement {
    pub fn new(op: ShiftPolyOperator, central: Scalar) -> Self {
        GlTildeElement { op, central }
    }

    /// `[F, G]~ = [F, G] + η(F, G) C`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(
            self.op.commutator(&other.op)?,
            japanese_cocycle(&self.op, &other.op),
        ))
    }
}

/// `ρ_j(L_m): e_k ↦ -(k + j(m+1)) e_{k+m}`, the Lie derivative on `j`-differentials.
pub fn rho(j: i64, x: &WittElement) -> ShiftPolyOperator {
    x.terms()
        .iter()
        .map(|(m, c)| {
            let p = IndexPolynomial::linear(-int(j * (m + 1)), -Scalar::one()).scale(c);
            ShiftPolyOperator::shift(*m, p)
        })
        .fold(ShiftPolyOperator::zero(), |acc, t| acc.add(&t))
}

/// `η(F, G) = tr(F^{-+} G^{+-} - G^{-+} F^{+-})`.
pub fn japanese_cocycle(f: &ShiftPolyOperator, g: &ShiftPolyOperator) -> Scalar {
    eta_splitting(f, g, &MonomialSplitting::standard())
}

/// `η_{D,K}(F, G) = tr(F^{DK} G^{KD} - G^{DK} F^{KD})`.
pub fn eta_splitting(f: &ShiftPolyOperator, g: &ShiftPolyOperator, s: &MonomialSplitting) -> Scalar {
    let f_dk = f.off_diagonal_block(s, Side::Discrete);
    let f_kd = f.off_diagonal_block(s, Side::Compact);
    let g_dk = g.off_diagonal_block(s, Side::Discrete);
    let g_kd = g.off_diagonal_block(s, Side::Compact);
    // tags match by construction
    let first = finite_trace(&f_dk, &g_kd).expect("D<-K<-D composite");
    let second = finite_trace(&g_dk, &f_kd).expect("D<-K<-D composite");
    first - second
}

/// `α(F) = tr(P_+ F P_+ - P_K F P_K)`, the cochain with
/// `α([F, G]) = η_{D,K}(F, G) - η(F, G)`.
pub fn alpha_cochain(f: &ShiftPolyOperator, s: &MonomialSplitting) -> Scalar {
    chart::alpha(f, s)
}

/// `c_j = 6j^2 - 6j + 1`.
pub fn expected_charge(j: i64) -> Scalar {
    int(6 * j * j - 6 * j + 1)
}

/// Normalization of `ρ_1^*(η)` against the Virasoro cocycle `(m^3 - m) δ`.
pub fn kappa() -> Scalar {
    frac(1, 6)
}

/// `η(ρ_j(L_m), ρ_j(L_{-m}))`.
pub fn pulled_back_cocycle(j: i64, m: i64) -> Scalar {
    japanese_cocycle(&rho(j, &WittElement::l(m)), &rho(j, &WittElement::l(-m)))
}

/// `η(ρ_j(L_m), ρ_j(L_{-m})) / η(ρ_1(L_m), ρ_1(L_{-m}))`, defined for `m >= 2`.
pub fn central_charge_ratio(j: i64, m: i64) -> Result<Scalar> {
    if m < 2 {
        return Err(Error::Precondition(format!(
            "central_charge_ratio needs m >= 2 (got {m}); ρ_1^*(η) vanishes for m ∈ {{0, 1}}"
        )));
    }
    let base = pulled_back_cocycle(1, m);
    Ok(pulled_back_cocycle(j, m) / base)
}

/// `ρ̃_j(x + cC) = (ρ_j(x), c · c_j · κ)`.
pub fn rho_tilde(j: i64, x: &VirasoroElement) -> GlTildeElement {
    GlTildeElement::new(rho(j, &x.witt), &x.central * expected_charge(j) * kappa())
}
