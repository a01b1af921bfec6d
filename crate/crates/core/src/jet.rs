//! Truncated multivariate power series with exact coefficients over a
//! supercommutative set of variables: even variables commute, odd ones
//! anticommute and square to zero.
//!
//! A monomial stores one exponent per variable; odd variables have exponent
//! at most one and the monomial stands for the product with odd factors in
//! increasing variable order. Products reorder odd factors and pick up the
//! Koszul sign of the permutation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chart::Coefficient;
use crate::error::{Error, Result};
use crate::scalar::{Parity, Scalar};

pub const DEFAULT_ORDER: u32 = 4;
pub const MAX_ORDER: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub parity: Parity,
}

impl Variable {
    pub fn even(name: impl Into<String>) -> Self {
        Variable { name: name.into(), parity: Parity::Even }
    }

    pub fn odd(name: impl Into<String>) -> Self {
        Variable { name: name.into(), parity: Parity::Odd }
    }
}

/// Ordered variables plus the total-degree truncation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JetSpace {
    variables: Vec<Variable>,
    order: u32,
}

impl JetSpace {
    pub fn new(variables: Vec<Variable>, order: u32) -> Result<Arc<Self>> {
        if order > MAX_ORDER {
            return Err(Error::OrderGuard { order, cap: MAX_ORDER });
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::Precondition(format!("duplicate jet variable `{}`", v.name)));
            }
        }
        Ok(Arc::new(JetSpace { variables, order }))
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Exponent vector of a product of distinct variables (by index).
    pub fn monomial(&self, exponents: &[(usize, u32)]) -> Monomial {
        let mut m = vec![0; self.variables.len()];
        for &(i, e) in exponents {
            m[i] += e;
        }
        m
    }
}

pub type Monomial = Vec<u32>;

fn degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.space, &other.space) || self.space == other.space)
            && self.terms == other.terms
    }
}

impl Eq for Jet {}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet({self})")
    }
}

impl Jet {
    pub fn zero(space: &Arc<JetSpace>) -> Self {
        Jet { space: Arc::clone(space), terms: BTreeMap::new() }
    }

    pub fn constant(space: &Arc<JetSpace>, c: Scalar) -> Self {
        let mut j = Self::zero(space);
        if !Zero::is_zero(&c) {
            j.terms.insert(vec![0; space.variables.len()], c);
        }
        j
    }

    pub fn one(space: &Arc<JetSpace>) -> Self {
        Self::constant(space, Scalar::one())
    }

    /// The variable with the given index (zero if the order is 0).
    pub fn variable(space: &Arc<JetSpace>, index: usize) -> Self {
        Self::from_terms(space, [(space.monomial(&[(index, 1)]), Scalar::one())])
    }

    pub fn from_terms(space: &Arc<JetSpace>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut j = Self::zero(space);
        for (m, c) in terms {
            assert_eq!(m.len(), space.variables.len(), "monomial arity");
            let valid = degree(&m) <= space.order
                && m.iter()
                    .zip(&space.variables)
                    .all(|(e, v)| !(v.parity.is_odd() && *e > 1));
            if valid {
                *j.terms.entry(m).or_insert_with(Scalar::zero) += c;
            }
        }
        j.terms.retain(|_, c| !Zero::is_zero(c));
        j
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.space.variables.len()])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree present, `None` for the zero jet.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(degree).min()
    }

    /// Parity of a homogeneous jet; `None` if it mixes parities (zero is even).
    pub fn parity(&self) -> Option<Parity> {
        let mut parities = self.terms.keys().map(|m| self.monomial_parity(m));
        let first = parities.next().unwrap_or(Parity::Even);
        parities.all(|p| p == first).then_some(first)
    }

    fn monomial_parity(&self, m: &Monomial) -> Parity {
        let odd = m
            .iter()
            .zip(&self.space.variables)
            .filter(|(e, v)| v.parity.is_odd() && **e == 1)
            .count();
        Parity::from_bit(odd % 2 == 1)
    }

    fn check_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) || self.space == other.space,
            "jets from different spaces"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_space(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert_with(Scalar::zero) += c;
        }
        terms.retain(|_, c| !Zero::is_zero(c));
        Jet { space: Arc::clone(&self.space), terms }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Scalar) -> Self {
        if Zero::is_zero(q) {
            return Self::zero(&self.space);
        }
        Jet {
            space: Arc::clone(&self.space),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Product of two monomials with its Koszul sign; `None` if it vanishes.
    fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        if degree(a) + degree(b) > self.space.order {
            return None;
        }
        let vars = &self.space.variables;
        let mut swaps = 0usize;
        let mut odd_in_a_after = 0usize;
        // walk variables from the right so that `odd_in_a_after` counts odd
        // factors of `a` with a larger index than the current one
        for i in (0..vars.len()).rev() {
            if vars[i].parity.is_odd() {
                if a[i] == 1 && b[i] == 1 {
                    return None;
                }
                if b[i] == 1 {
                    swaps += odd_in_a_after;
                }
                if a[i] == 1 {
                    odd_in_a_after += 1;
                }
            }
        }
        let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Some((m, swaps % 2 == 1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_space(other);
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negate)) = self.multiply_monomials(ma, mb) {
                    let v = ca * cb;
                    let slot = terms.entry(m).or_insert_with(Scalar::zero);
                    if negate {
                        *slot -= v;
                    } else {
                        *slot += v;
                    }
                }
            }
        }
        terms.retain(|_, c| !Zero::is_zero(c));
        Jet { space: Arc::clone(&self.space), terms }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Jet {
            space: Arc::clone(&self.space),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `x_i ↦ c · x_i`.
    pub fn rescale_variable(&self, index: usize, c: &Scalar) -> Self {
        let terms = self.terms.iter().map(|(m, v)| {
            let mut f = v.clone();
            for _ in 0..m[index] {
                f *= c;
            }
            (m.clone(), f)
        });
        Self::from_terms(&self.space, terms.collect::<Vec<_>>())
    }

    /// Re-expresses the jet in a larger space that starts with the same variables.
    pub fn embed(&self, target: &Arc<JetSpace>) -> Self {
        let n = self.space.variables.len();
        assert!(
            target.variables.len() >= n && target.variables[..n] == self.space.variables[..],
            "target space must extend the source space"
        );
        let terms = self.terms.iter().map(|(m, c)| {
            let mut ext = m.clone();
            ext.resize(target.variables.len(), 0);
            (ext, c.clone())
        });
        Self::from_terms(target, terms.collect::<Vec<_>>())
    }

    /// Evaluates a jet in even variables only at rational values.
    pub fn evaluate(&self, values: &[Scalar]) -> Result<Scalar> {
        if self.space.variables.iter().any(|v| v.parity.is_odd()) {
            return Err(Error::ParityMismatch("cannot evaluate odd variables at numbers".into()));
        }
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.iter().zip(values) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let factors: Vec<String> = m
                .iter()
                .zip(&self.space.variables)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.name.clone() } else { format!("{}^{e}", v.name) })
                .collect();
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Coefficient for Jet {
    fn add(&self, other: &Self) -> Self {
        Jet::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Jet::mul(self, other)
    }
    fn scale(&self, q: &Scalar) -> Self {
        Jet::scale(self, q)
    }
    fn is_zero(&self) -> bool {
        Jet::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn space(vars: Vec<Variable>, order: u32) -> Arc<JetSpace> {
        JetSpace::new(vars, order).unwrap()
    }

    #[test]
    fn odd_variables_anticommute() {
        let sp = space(vec![Variable::odd("a"), Variable::odd("b"), Variable::even("s")], 4);
        let a = Jet::variable(&sp, 0);
        let b = Jet::variable(&sp, 1);
        let s = Jet::variable(&sp, 2);
        assert_eq!(a.mul(&b), b.mul(&a).neg());
        assert!(a.mul(&a).is_zero());
        assert_eq!(a.mul(&s), s.mul(&a));
        assert_eq!(a.mul(&b).parity(), Some(Parity::Even));
        assert_eq!(a.add(&s).parity(), None);
    }

    #[test]
    fn truncation_by_total_degree() {
        let sp = space(vec![Variable::even("s"), Variable::even("u")], 2);
        let s = Jet::variable(&sp, 0);
        let u = Jet::variable(&sp, 1);
        assert!(s.mul(&s).mul(&u).is_zero());
        assert_eq!(s.mul(&u).coefficient(&[1, 1]), int(1));
    }

    #[test]
    fn order_cap() {
        assert!(JetSpace::new(vec![Variable::even("s")], 9).is_err());
        assert!(JetSpace::new(vec![Variable::even("s"), Variable::even("s")], 2).is_err());
    }

    #[test]
    fn three_odd_factors_sign() {
        let sp = space(vec![Variable::odd("a"), Variable::odd("b"), Variable::odd("c")], 3);
        let (a, b, c) = (Jet::variable(&sp, 0), Jet::variable(&sp, 1), Jet::variable(&sp, 2));
        // c·a·b = a·b·c (two transpositions)
        assert_eq!(c.mul(&a).mul(&b), a.mul(&b).mul(&c));
        // b·a·c = -a·b·c
        assert_eq!(b.mul(&a).mul(&c), a.mul(&b).mul(&c).neg());
        assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
    }
}
