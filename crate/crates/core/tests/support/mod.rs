//! Test-only oracles and samplers, independent of the intensional operator code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mumford_core::grassmann::{ChartPoint, MonomialSplitting};
use mumford_core::operator::{IndexPolynomial, ShiftPolyOperator};
use mumford_core::scalar::{frac, int, Scalar};
use mumford_core::witt::WittElement;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    let p = rng.gen_range(-4i64..=4);
    let q = rng.gen_range(1i64..=3);
    frac(p, q)
}

pub fn random_witt<R: Rng>(rng: &mut R, width: i64, terms: usize) -> WittElement {
    WittElement::from_terms((0..terms).map(|_| (rng.gen_range(-width..=width), small_rational(rng))))
}

pub fn random_operator<R: Rng>(rng: &mut R, max_degree: usize, max_shift: i64) -> ShiftPolyOperator {
    let mut op = ShiftPolyOperator::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let m = rng.gen_range(-max_shift..=max_shift);
        let deg = rng.gen_range(0..=max_degree);
        let p = IndexPolynomial::from_coeffs((0..=deg).map(|_| small_rational(rng)).collect());
        op = op.add(&ShiftPolyOperator::shift(m, p));
    }
    let fr: Vec<(i64, i64, Scalar)> = (0..rng.gen_range(0..=2))
        .map(|_| (rng.gen_range(-4..=4), rng.gen_range(-4..=4), small_rational(rng)))
        .collect();
    op.add(&ShiftPolyOperator::finite_rank(fr))
}

pub fn sample_splittings() -> Vec<MonomialSplitting> {
    vec![
        MonomialSplitting::standard(),
        MonomialSplitting::new([0], []).unwrap(),
        MonomialSplitting::new([], [-1]).unwrap(),
        MonomialSplitting::new([0], [-1]).unwrap(),
        MonomialSplitting::new([0, 2], [-3]).unwrap(),
        MonomialSplitting::new([1, 3, 5], [-2, -4]).unwrap(),
    ]
}

pub fn random_chart_point<R: Rng>(rng: &mut R, split: &MonomialSplitting, entries: usize) -> ChartPoint {
    use mumford_core::chart::Splitting;
    let mut m = BTreeMap::new();
    let mut tries = 0;
    while m.len() < entries && tries < 200 {
        tries += 1;
        let r = rng.gen_range(-4..=5);
        let c = rng.gen_range(-5..=4);
        if !split.is_discrete(r) && split.is_discrete(c) {
            let v = small_rational(rng);
            if !v.is_zero() {
                m.insert((r, c), v);
            }
        }
    }
    ChartPoint::new(split.clone(), m).unwrap()
}

/// Dense matrix of `ρ_j(x)` on the window `[lo, hi]`, straight from the Lie-derivative formula.
pub fn dense_rho(j: i64, x: &WittElement, lo: i64, hi: i64) -> Vec<Vec<Scalar>> {
    let n = (hi - lo + 1) as usize;
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for (m, c) in x.terms() {
        for k in lo..=hi {
            let r = k + m;
            if r < lo || r > hi {
                continue;
            }
            // f = -c z^{m+1}, g = z^k: f g' + j f' g = -c (k + j(m+1)) z^{k+m}
            out[(r - lo) as usize][(k - lo) as usize] += -c * int(k + j * (m + 1));
        }
    }
    out
}

/// `tr(F^{-+} G^{+-} - G^{-+} F^{+-})` on dense windows, with discrete side given by a predicate.
pub fn dense_eta(
    f: &[Vec<Scalar>],
    g: &[Vec<Scalar>],
    lo: i64,
    discrete: impl Fn(i64) -> bool,
) -> Scalar {
    let n = f.len();
    let idx = |i: usize| lo + i as i64;
    let mut total = Scalar::zero();
    for d in 0..n {
        if !discrete(idx(d)) {
            continue;
        }
        for k in 0..n {
            if discrete(idx(k)) {
                continue;
            }
            total += &f[d][k] * &g[k][d] - &g[d][k] * &f[k][d];
        }
    }
    total
}

type Dense = Vec<Vec<Scalar>>;

fn dense_zero(n: usize) -> Dense {
    vec![vec![Scalar::zero(); n]; n]
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = dense_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn dense_add(a: &mut Dense, b: &Dense, c: &Scalar) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            if !y.is_zero() {
                *x += y * c;
            }
        }
    }
}

/// Polynomial-in-`s` solution of `dA/ds = L_F A`, `dφ/ds = σ_F(A) φ` on a dense
/// window, by Picard iteration `A ← P + ∫ L_F(A)`, truncated at degree `order`.
/// Returns the `s^n` coefficients of `A` (as a map) and of `φ`.
pub fn dense_flow(
    j: i64,
    x: &WittElement,
    p: &ChartPoint,
    lo: i64,
    hi: i64,
    order: usize,
) -> (Vec<BTreeMap<(i64, i64), Scalar>>, Vec<Scalar>) {
    use mumford_core::chart::Splitting;
    let split = p.splitting();
    let n = (hi - lo + 1) as usize;
    let idx = |i: usize| lo + i as i64;
    let f = dense_rho(j, x, lo, hi);
    let project = |rows_discrete: bool, cols_discrete: bool| -> Dense {
        let mut m = dense_zero(n);
        for r in 0..n {
            for c in 0..n {
                if split.is_discrete(idx(r)) == rows_discrete && split.is_discrete(idx(c)) == cols_discrete {
                    m[r][c] = f[r][c].clone();
                }
            }
        }
        m
    };
    let (f_dd, f_dk, f_kd, f_kk) = (project(true, true), project(true, false), project(false, true), project(false, false));
    let mut alpha = Scalar::zero();
    for i in 0..n {
        if split.is_discrete(idx(i)) && idx(i) >= 0 {
            alpha += &f[i][i];
        }
        if !split.is_discrete(idx(i)) && idx(i) < 0 {
            alpha -= &f[i][i];
        }
    }
    let mut base = dense_zero(n);
    for ((r, c), v) in p.entries() {
        base[(r - lo) as usize][(c - lo) as usize] = v.clone();
    }
    let one = Scalar::from_integer(1.into());
    let minus = -one.clone();
    let mut a: Vec<Dense> = vec![base.clone()];
    for _ in 0..=order {
        // integrand coefficients of L_F(A(s))
        let mut rhs: Vec<Dense> = vec![dense_zero(n); order + 1];
        dense_add(&mut rhs[0], &f_kd, &minus);
        for (d, ad) in a.iter().enumerate() {
            dense_add(&mut rhs[d], &dense_mul(&f_kk, ad), &minus);
            dense_add(&mut rhs[d], &dense_mul(ad, &f_dd), &one);
            let left = dense_mul(ad, &f_dk);
            for (e, ae) in a.iter().enumerate() {
                if d + e <= order {
                    dense_add(&mut rhs[d + e], &dense_mul(&left, ae), &one);
                }
            }
        }
        let mut next = vec![base.clone()];
        for d in 0..order {
            let mut term = dense_zero(n);
            dense_add(&mut term, &rhs[d], &frac(1, d as i64 + 1));
            next.push(term);
        }
        a = next;
    }
    // σ(A(s)) coefficients: tr_D(F^{DK} A) + α
    let mut sigma = vec![Scalar::zero(); order + 1];
    sigma[0] += &alpha;
    for (d, ad) in a.iter().enumerate() {
        let prod = dense_mul(&f_dk, ad);
        for i in 0..n {
            if split.is_discrete(idx(i)) {
                sigma[d] += &prod[i][i];
            }
        }
    }
    let mut phi = vec![Scalar::zero(); order + 1];
    phi[0] = one.clone();
    for _ in 0..=order {
        let mut next = vec![Scalar::zero(); order + 1];
        next[0] = one.clone();
        for d in 0..order {
            let mut c = Scalar::zero();
            for e in 0..=d {
                c += &sigma[e] * &phi[d - e];
            }
            next[d + 1] = c * frac(1, d as i64 + 1);
        }
        phi = next;
    }
    let maps = a
        .iter()
        .map(|m| {
            let mut out = BTreeMap::new();
            for r in 0..n {
                for c in 0..n {
                    if !m[r][c].is_zero() {
                        out.insert((idx(r), idx(c)), m[r][c].clone());
                    }
                }
            }
            out
        })
        .collect();
    (maps, phi)
}

pub mod superspace {
    use super::*;
    use mumford_core::chart::Splitting;
    use mumford_core::super_ns::{NSElement, SuperIndex, SuperSplitting};
    use mumford_core::Parity;

    pub fn sample_super_splittings() -> Vec<SuperSplitting> {
        let m = |i: &[i64], o: &[i64]| MonomialSplitting::new(i.iter().copied(), o.iter().copied()).unwrap();
        vec![
            SuperSplitting::standard(),
            SuperSplitting::new(m(&[0], &[]), m(&[], &[])),
            SuperSplitting::new(m(&[], &[]), m(&[], &[-1])),
            SuperSplitting::new(m(&[0, 2], &[-3]), m(&[1], &[-2])),
            SuperSplitting::new(m(&[], &[-1]), m(&[0], &[])),
        ]
    }

    /// Rational point: only parity-preserving entries (odd entries would have to be nilpotent).
    pub fn random_super_point<R: Rng>(rng: &mut R, split: &SuperSplitting, entries: usize) -> ChartPoint<SuperSplitting> {
        let mut m = BTreeMap::new();
        let mut tries = 0;
        while m.len() < entries && tries < 400 {
            tries += 1;
            let parity = if rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
            let r = SuperIndex { parity, level: rng.gen_range(-4..=5) };
            let c = SuperIndex { parity, level: rng.gen_range(-5..=4) };
            if !split.is_discrete(r) && split.is_discrete(c) {
                let v = small_rational(rng);
                if !v.is_zero() {
                    m.insert((r, c), v);
                }
            }
        }
        ChartPoint::new(split.clone(), m).unwrap()
    }

    pub fn random_ns<R: Rng>(rng: &mut R, parity: Parity, width: i64, terms: usize) -> NSElement {
        let mut x = NSElement::zero();
        for _ in 0..terms {
            let c = small_rational(rng);
            let term = match parity {
                Parity::Even => NSElement::l(rng.gen_range(-width..=width)),
                Parity::Odd => NSElement::g(2 * rng.gen_range(-width..width) + 1),
            };
            x = x.add(&term.scale(&c));
        }
        x
    }
}
