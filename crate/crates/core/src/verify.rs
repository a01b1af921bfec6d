//! Seeded property suites over every module, with a deterministic report.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chart::{self, Matrix, Splitting};
use crate::error::{Error, Result};
use crate::flow::{self, NamedGenerator, WeightedPair};
use crate::grassmann::{
    det_fiber_dims, scalar_part_derivative, tilde_scalar_part, virtual_index, witt_vector_field, ChartPoint,
    MonomialSplitting,
};
use crate::json::scalar;
use crate::operator::ShiftPolyOperator;
use crate::scalar::{frac, int, Parity, Scalar};
use crate::super_ns::fields::SuperVectorField;
use crate::super_ns::{self, ns_bracket, rho_super, GWeights, NSElement, SuperIndex, SuperSplitting};
use crate::witt::{
    alpha_cochain, central_charge_ratio, eta_splitting, expected_charge, japanese_cocycle, pulled_back_cocycle,
    rho, rho_tilde, VirasoroElement, WittElement,
};

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Homomorphism,
    Cocycle,
    Alpha,
    Curvature,
    Flow,
    Super,
    Det,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] =
        [Suite::Homomorphism, Suite::Cocycle, Suite::Alpha, Suite::Curvature, Suite::Flow, Suite::Super, Suite::Det];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Homomorphism => "homomorphism",
            Suite::Cocycle => "cocycle",
            Suite::Alpha => "alpha",
            Suite::Curvature => "curvature",
            Suite::Flow => "flow",
            Suite::Super => "super",
            Suite::Det => "det",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the weights of the bosonic `(1, -13)` and super `(1, -5)` flatness checks.
    pub weights: Option<(i64, i64)>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: DEFAULT_SEED, weights: None }
    }
}

const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub property: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub counterexamples: Vec<Value>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "suite": c.suite.name(),
                "property": c.property,
                "cases": c.cases,
                "failures": c.failures,
                "counterexamples": c.counterexamples,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("suite\tproperty\tcases\tfailures\tstatus\tcounterexample\n");
        for c in &self.checks {
            let example = c.counterexamples.first().map(Value::to_string).unwrap_or_default();
            let status = if c.passed() { "pass" } else { "FAIL" };
            out.push_str(&format!("{}\t{}\t{}\t{}\t{}\t{}\n", c.suite, c.property, c.cases, c.failures, status, example));
        }
        out
    }
}

/// Collects case outcomes of one property.
struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, property: &'static str, cases: impl IntoIterator<Item = Result<Option<Value>>>) {
        let mut check = Check { suite: self.suite, property, cases: 0, failures: 0, counterexamples: Vec::new() };
        for outcome in cases {
            check.cases += 1;
            let failure = match outcome {
                Ok(None) => None,
                Ok(Some(v)) => Some(v),
                Err(e) => Some(json!({ "error": e.to_string() })),
            };
            if let Some(v) = failure {
                check.failures += 1;
                if check.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    check.counterexamples.push(v);
                }
            }
        }
        self.checks.push(check);
    }
}

fn expect(ok: bool, detail: impl FnOnce() -> Value) -> Result<Option<Value>> {
    Ok(if ok { None } else { Some(detail()) })
}

fn small_rational(rng: &mut ChaCha8Rng) -> Scalar {
    frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_witt(rng: &mut ChaCha8Rng, width: i64, terms: usize) -> WittElement {
    WittElement::from_terms((0..terms).map(|_| (rng.gen_range(-width..=width), small_rational(rng))))
}

fn random_parity(rng: &mut ChaCha8Rng) -> Parity {
    Parity::from_bit(rng.gen_bool(0.5))
}

fn random_ns(rng: &mut ChaCha8Rng, parity: Parity, width: i64, terms: usize) -> NSElement {
    (0..terms).fold(NSElement::zero(), |acc, _| {
        let c = small_rational(rng);
        let term = match parity {
            Parity::Even => NSElement::l(rng.gen_range(-width..=width)),
            Parity::Odd => NSElement::g(2 * rng.gen_range(-width..width) + 1),
        };
        acc.add(&term.scale(&c))
    })
}

fn splittings() -> Vec<MonomialSplitting> {
    let m = |i: &[i64], o: &[i64]| {
        MonomialSplitting::new(i.iter().copied(), o.iter().copied()).expect("valid sample splitting")
    };
    vec![
        MonomialSplitting::standard(),
        m(&[0], &[]),
        m(&[], &[-1]),
        m(&[0], &[-1]),
        m(&[0, 2], &[-3]),
        m(&[1, 3, 5], &[-2, -4]),
    ]
}

fn super_splittings() -> Vec<SuperSplitting> {
    let s = splittings();
    vec![
        SuperSplitting::standard(),
        SuperSplitting::new(s[1].clone(), s[0].clone()),
        SuperSplitting::new(s[0].clone(), s[2].clone()),
        SuperSplitting::new(s[4].clone(), s[3].clone()),
        SuperSplitting::new(s[2].clone(), s[1].clone()),
    ]
}

fn random_point(rng: &mut ChaCha8Rng, split: &MonomialSplitting, entries: usize) -> ChartPoint {
    let mut m = Matrix::new();
    for _ in 0..200 {
        if m.len() >= entries {
            break;
        }
        let (r, c) = (rng.gen_range(-4..=5), rng.gen_range(-5..=4));
        let v = small_rational(rng);
        if !split.is_discrete(r) && split.is_discrete(c) && !v.is_zero() {
            m.insert((r, c), v);
        }
    }
    ChartPoint::new(split.clone(), m).expect("entries placed in K x D")
}

fn random_super_point(rng: &mut ChaCha8Rng, split: &SuperSplitting, entries: usize) -> ChartPoint<SuperSplitting> {
    let mut m = Matrix::new();
    for _ in 0..400 {
        if m.len() >= entries {
            break;
        }
        let parity = random_parity(rng);
        let r = SuperIndex { parity, level: rng.gen_range(-4..=5) };
        let c = SuperIndex { parity, level: rng.gen_range(-5..=4) };
        let v = small_rational(rng);
        if !split.is_discrete(r) && split.is_discrete(c) && !v.is_zero() {
            m.insert((r, c), v);
        }
    }
    ChartPoint::new(split.clone(), m).expect("entries placed in K x D")
}

fn random_operator(rng: &mut ChaCha8Rng) -> ShiftPolyOperator {
    let j = rng.gen_range(-2..=3);
    let finite: Vec<(i64, i64, Scalar)> =
        (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(-4..=4), rng.gen_range(-4..=4), small_rational(rng))).collect();
    rho(j, &random_witt(rng, 4, 2)).add(&ShiftPolyOperator::finite_rank(finite))
}

fn suite_rng(seed: u64, suite: Suite) -> ChaCha8Rng {
    let salt = Suite::INDIVIDUAL.iter().position(|s| *s == suite).unwrap_or(0) as u64;
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run(suite: Suite, config: &VerifyConfig) -> VerifyReport {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::INDIVIDUAL.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for s in suites {
        let mut rec = Recorder { suite: s, checks: Vec::new() };
        let mut rng = suite_rng(config.seed, s);
        match s {
            Suite::Homomorphism => homomorphism(&mut rec, &mut rng),
            Suite::Cocycle => cocycle(&mut rec, &mut rng),
            Suite::Alpha => alpha(&mut rec, &mut rng),
            Suite::Curvature => curvature(&mut rec, &mut rng, config.weights.unwrap_or(flow::DEFAULT_WEIGHTS)),
            Suite::Flow => flows(&mut rec, &mut rng),
            Suite::Super => superalgebra(&mut rec, &mut rng, config.weights.unwrap_or(super_ns::SUPER_DEFAULT_WEIGHTS)),
            Suite::Det => det(&mut rec, &mut rng),
            Suite::All => unreachable!("expanded above"),
        }
        checks.extend(rec.checks);
    }
    VerifyReport { seed: config.seed, checks }
}

fn homomorphism(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let cases: Vec<_> = (0..80)
        .map(|_| {
            let j = rng.gen_range(-3..=5);
            let (x, y) = (random_witt(rng, 5, 3), random_witt(rng, 5, 3));
            let lhs = rho(j, &x).commutator(&rho(j, &y))?;
            expect(lhs == rho(j, &x.bracket(&y)), || json!({ "j": j, "x": x.to_string(), "y": y.to_string() }))
        })
        .collect();
    rec.check("rho_bracket", cases);

    let splits = splittings();
    let cases: Vec<_> = (0..60)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let j = rng.gen_range(-2..=3);
            let (f, g) = (rho(j, &random_witt(rng, 3, 2)), rho(j, &random_witt(rng, 3, 2)));
            let p = random_point(rng, split, 3);
            let one = Scalar::one();
            let (lf, lg) = (witt_vector_field(&f, &p), witt_vector_field(&g, &p));
            let dgf = chart::vector_field_derivative(&[(one.clone(), &g)], p.entries(), &lf, split);
            let dfg = chart::vector_field_derivative(&[(one.clone(), &f)], p.entries(), &lg, split);
            let bracket = chart::add_matrices(&dgf, &chart::scale_matrix(&dfg, &-one));
            let fg = f.commutator(&g)?;
            expect(bracket == witt_vector_field(&fg, &p), || json!({ "j": j, "point": crate::json::chart_point(&p) }))
        })
        .collect();
    rec.check("vector_field_bracket", cases);

    let cases: Vec<_> = (0..60)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let j = rng.gen_range(-2..=3);
            let (f, g) = (rho(j, &random_witt(rng, 4, 2)), rho(j, &random_witt(rng, 4, 2)));
            let p = random_point(rng, split, 3);
            let (lf, lg) = (witt_vector_field(&f, &p), witt_vector_field(&g, &p));
            let def = scalar_part_derivative(&g, split, &lf) - scalar_part_derivative(&f, split, &lg)
                - tilde_scalar_part(&f.commutator(&g)?, &p);
            let eta = japanese_cocycle(&f, &g);
            expect(def == eta, || json!({ "defect": scalar(&def), "eta": scalar(&eta) }))
        })
        .collect();
    rec.check("atiyah_identity", cases);

    let cases: Vec<_> = (0..20)
        .map(|_| {
            let j = rng.gen_range(-3..=5);
            let x = VirasoroElement::new(random_witt(rng, 4, 2), small_rational(rng));
            let y = VirasoroElement::new(random_witt(rng, 4, 2), small_rational(rng));
            let lhs = rho_tilde(j, &x).bracket(&rho_tilde(j, &y))?;
            expect(lhs == rho_tilde(j, &x.bracket(&y)), || json!({ "j": j }))
        })
        .collect();
    rec.check("virasoro_lift", cases);
}

fn cocycle(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let mut cases = Vec::new();
    for j in -3..=5 {
        for m in 2..=6 {
            cases.push(central_charge_ratio(j, m).map(|r| {
                (r != expected_charge(j)).then(|| json!({ "j": j, "m": m, "ratio": scalar(&r) }))
            }));
        }
    }
    rec.check("charge_law", cases);

    let v = pulled_back_cocycle(2, 2);
    rec.check("lambda2_is_lambda1_to_13", [expect(v == int(13), || json!({ "value": scalar(&v) }))]);

    let cases: Vec<_> = (0..30)
        .map(|_| {
            let (f, g, h) = (random_operator(rng), random_operator(rng), random_operator(rng));
            let anti = japanese_cocycle(&f, &g) + japanese_cocycle(&g, &f);
            let jacobi = japanese_cocycle(&f.commutator(&g)?, &h)
                + japanese_cocycle(&g.commutator(&h)?, &f)
                + japanese_cocycle(&h.commutator(&f)?, &g);
            expect(anti.is_zero() && jacobi.is_zero(), || json!({ "antisymmetry": scalar(&anti), "jacobi": scalar(&jacobi) }))
        })
        .collect();
    rec.check("cocycle_identity", cases);
}

fn alpha(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let splits = splittings();
    let cases: Vec<_> = (0..120)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let (f, g) = (random_operator(rng), random_operator(rng));
            let lhs = alpha_cochain(&f.commutator(&g)?, split);
            let rhs = eta_splitting(&f, &g, split) - japanese_cocycle(&f, &g);
            expect(lhs == rhs, || json!({ "split_in": split.shift_in_set(), "split_out": split.shift_out_set() }))
        })
        .collect();
    rec.check("coboundary", cases);
}

fn witt_basis() -> Vec<WittElement> {
    (-3..=3).map(WittElement::l).collect()
}

fn curvature(rec: &mut Recorder, rng: &mut ChaCha8Rng, (w2, w1): (i64, i64)) {
    let base = WeightedPair::standard(w2, w1);
    let basis = witt_basis();
    let mut cases = Vec::new();
    for x in &basis {
        for y in &basis {
            cases.push(flow::curvature_defect(x, y, &base).map(|d| {
                (!d.is_zero()).then(|| json!({ "x": x.to_string(), "y": y.to_string(), "defect": scalar(&d), "weights": [w2, w1] }))
            }));
        }
    }
    rec.check("curvature_defect_vanishes", cases);

    let splits = splittings();
    let cases: Vec<_> = (0..12)
        .map(|_| {
            let (x, y) = (random_witt(rng, 3, 2), random_witt(rng, 3, 2));
            let values = (0..3)
                .map(|i| {
                    let p2 = random_point(rng, &splits[i], 3);
                    let p1 = random_point(rng, &splits[i + 3], 3);
                    flow::curvature_defect(&x, &y, &WeightedPair::new(p2, p1, w2, w1))
                })
                .collect::<Result<Vec<_>>>()?;
            expect(values.windows(2).all(|w| w[0] == w[1]), || {
                json!({ "x": x.to_string(), "y": y.to_string(), "values": values.iter().map(scalar).collect::<Vec<_>>() })
            })
        })
        .collect();
    rec.check("base_point_independence", cases);

    let gens: Vec<_> = [1, -1, 2, -2].into_iter().map(|n| NamedGenerator::even(format!("t{n}"), WittElement::l(n))).collect();
    match flow::horizontality_check(&base, &gens) {
        Ok(report) => {
            let pairs = &report.pairs;
            rec.check(
                "mixed_coefficient_symmetry",
                pairs.iter().map(|p| {
                    expect(p.defect.is_zero(), || json!({ "first": p.first, "second": p.second, "defect": scalar(&p.defect) }))
                }),
            );
            rec.check(
                "symmetry_defect_is_curvature",
                pairs.iter().map(|p| expect(p.defect == p.curvature_defect, || json!({ "first": p.first, "second": p.second }))),
            );
        }
        Err(e) => rec.check("mixed_coefficient_symmetry", [Err(e)]),
    }
}

fn flows(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let splits = splittings();
    let cases: Vec<_> = (0..12)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let x = random_witt(rng, 3, 2);
            let j = rng.gen_range(-1..=3);
            let out = flow::flow_jet(&x, &ChartPoint::origin(split.clone()), j, 1)?;
            let f = rho(j, &x);
            let expected: Matrix<i64, Scalar> = f
                .off_diagonal_block(split, chart::Side::Compact)
                .entries()
                .iter()
                .map(|(k, v)| (*k, -v))
                .collect();
            let got: Matrix<i64, Scalar> = out
                .a
                .iter()
                .map(|(k, v)| (*k, v.coefficient(&[1])))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            expect(got == expected && out.phi.coefficient(&[1]) == alpha_cochain(&f, split), || {
                json!({ "x": x.to_string(), "j": j })
            })
        })
        .collect();
    rec.check("first_order_at_origin", cases);

    let cases: Vec<_> = (0..10)
        .map(|i| {
            let p = random_point(rng, &splits[i % splits.len()], 2);
            let x = random_witt(rng, 3, 2);
            let c = small_rational(rng);
            let scaled = flow::flow_jet(&x.scale(&c), &p, 2, 3)?;
            let plain = flow::flow_jet(&x, &p, 2, 3)?;
            let rescaled: Matrix<i64, _> = plain
                .a
                .iter()
                .map(|(k, v)| (*k, v.rescale_variable(0, &c)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            expect(scaled.a == rescaled && scaled.phi == plain.phi.rescale_variable(0, &c), || {
                json!({ "x": x.to_string(), "c": scalar(&c) })
            })
        })
        .collect();
    rec.check("reparametrization", cases);

    let cases: Vec<_> = (0..10)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let (x, y) = (random_witt(rng, 3, 2), random_witt(rng, 3, 2));
            let base = WeightedPair::new(random_point(rng, split, 2), random_point(rng, split, 2), 1, -13);
            bch_case(&base, &x, &y).map(|ok| (!ok).then(|| json!({ "x": x.to_string(), "y": y.to_string() })))
        })
        .collect();
    rec.check("group_law_bch", cases);

    let cases: Vec<_> = (0..8)
        .map(|i| {
            let p2 = random_point(rng, &splits[i % splits.len()], 2);
            let p1 = random_point(rng, &splits[(i + 1) % splits.len()], 2);
            let (w2, w1) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            let gens = vec![
                NamedGenerator::even("t1", random_witt(rng, 3, 2)),
                NamedGenerator::even("t2", random_witt(rng, 3, 2)),
            ];
            let both = flow::mumford_jet(&WeightedPair::new(p2.clone(), p1.clone(), w2, w1), &gens, 3)?;
            let left = flow::mumford_jet(&WeightedPair::new(p2.clone(), p1.clone(), w2, 0), &gens, 3)?;
            let right = flow::mumford_jet(&WeightedPair::new(p2, p1, 0, w1), &gens, 3)?;
            expect(both.phi == left.phi.mul(&right.phi), || json!({ "weights": [w2, w1] }))
        })
        .collect();
    rec.check("phi_weight_multiplicative", cases);
}

/// Ordered flow `x` then `y` against the single flow of `sx + uy + (su/2)[x, y]`.
fn bch_case(base: &WeightedPair, x: &WittElement, y: &WittElement) -> Result<bool> {
    let reps = |w: &WittElement| -> Result<(ShiftPolyOperator, ShiftPolyOperator)> {
        Ok((flow::represent(2, w)?, flow::represent(1, w)?))
    };
    let (x2, x1) = reps(x)?;
    let (y2, y1) = reps(y)?;
    let (b2, b1) = reps(&x.bracket(y))?;
    let space = flow::pair_space((Parity::Even, Parity::Even))?;
    let s = crate::jet::Jet::variable(&space, 0);
    let u = crate::jet::Jet::variable(&space, 1);
    let ordered = flow::ordered_flow(&space, base, &[(s.clone(), (&x2, &x1)), (u.clone(), (&y2, &y1))])?;
    let coefs = [s.clone(), u.clone(), s.mul(&u).scale(&frac(1, 2))];
    let sides = [
        flow::FlowSide {
            field: coefs.iter().cloned().zip([&x2, &y2, &b2]).collect(),
            split: base.p2.splitting(),
            base: flow::constant_matrix(&space, base.p2.entries()),
            weight: int(base.w2),
        },
        flow::FlowSide {
            field: coefs.iter().cloned().zip([&x1, &y1, &b1]).collect(),
            split: base.p1.splitting(),
            base: flow::constant_matrix(&space, base.p1.entries()),
            weight: int(base.w1),
        },
    ];
    let single = flow::time_one_flow(&space, &sides, &crate::jet::Jet::one(&space))?;
    Ok(ordered.a2 == single.points[0] && ordered.a1 == single.points[1] && ordered.phi == single.phi)
}

fn ns_basis() -> Vec<NSElement> {
    let mut out: Vec<NSElement> = (-4..=4).map(NSElement::l).collect();
    out.extend([-7, -5, -3, -1, 1, 3, 5, 7].into_iter().map(NSElement::g));
    out
}

fn without_central(x: &NSElement) -> NSElement {
    NSElement::from_parts(
        x.l_terms().iter().map(|(n, c)| (*n, c.clone())),
        x.g_terms().iter().map(|(r, c)| (*r, c.clone())),
        Scalar::zero(),
    )
}

fn superalgebra(rec: &mut Recorder, rng: &mut ChaCha8Rng, (w2, w1): (i64, i64)) {
    let basis = ns_basis();
    let mut cases = Vec::new();
    for x in &basis {
        for y in &basis {
            let field = |e: &NSElement| SuperVectorField::from_ns(e).expect("basis elements are homogeneous");
            let got = field(x).supercommutator(&field(y));
            let want = field(&without_central(&ns_bracket(x, y)));
            cases.push(expect(got.dz == want.dz && got.dzeta == want.dzeta, || json!({ "x": x.to_string(), "y": y.to_string() })));
        }
    }
    rec.check("ns_structure_constants", cases);

    let mut cases = Vec::new();
    for j in 1..=3 {
        for x in &basis {
            for y in &basis {
                cases.push((|| {
                    let lhs = rho_super(j, x)?.supercommutator(&rho_super(j, y)?)?;
                    let rhs = rho_super(j, &without_central(&ns_bracket(x, y)))?;
                    expect(lhs == rhs, || json!({ "j": j, "x": x.to_string(), "y": y.to_string() }))
                })());
            }
        }
    }
    rec.check("rho_super_homomorphism", cases);

    rec.check(
        "g_action_determination",
        (-2..=5).map(|j| {
            let got = GWeights::determine(j)?;
            expect(got == GWeights::frozen(j), || json!({ "j": j }))
        }),
    );

    let ratio = super_ns::super_charge_ratio(3, 2);
    rec.check(
        "super_charge_ratio_is_5",
        [ratio.map(|r| (r != int(5)).then(|| json!({ "ratio": scalar(&r) })))],
    );

    let splits = super_splittings();
    let cases: Vec<_> = (0..30)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let j = rng.gen_range(1..=3);
            let (pf, pg) = (random_parity(rng), random_parity(rng));
            let f = rho_super(j, &random_ns(rng, pf, 3, 2))?;
            let g = rho_super(j, &random_ns(rng, pg, 3, 2))?;
            let fg = f.supercommutator(&g)?;
            let p = random_super_point(rng, split, 3);
            let def = flow::graded_side_defect(&f, &g, &fg, &p)?;
            let eta = super_ns::super_japanese_cocycle(&f, &g);
            let lhs = super_ns::super_alpha(&fg, split);
            let rhs = chart::chart_cocycle(&f, &g, split) - &eta;
            expect(def == eta && lhs == rhs, || json!({ "defect": scalar(&def), "eta": scalar(&eta) }))
        })
        .collect();
    rec.check("super_atiyah_and_alpha", cases);

    let base = crate::flow::WeightedPair::super_standard(w2, w1);
    let gens = [NSElement::l(2), NSElement::l(-2), NSElement::g(3), NSElement::g(-3), NSElement::l(1), NSElement::g(1)];
    let mut cases = Vec::new();
    for x in &gens {
        for y in &gens {
            cases.push(super_ns::super_curvature_defect(x, y, &base).map(|d| {
                (!d.is_zero()).then(|| json!({ "x": x.to_string(), "y": y.to_string(), "defect": scalar(&d), "weights": [w2, w1] }))
            }));
        }
    }
    rec.check("super_curvature_vanishes", cases);

    let named: Vec<_> = gens[..4]
        .iter()
        .enumerate()
        .map(|(i, g)| NamedGenerator::new(format!("v{i}"), g.parity().unwrap_or(Parity::Even), g.clone()))
        .collect();
    match super_ns::super_horizontality_check(&base, &named) {
        Ok(report) => rec.check(
            "super_mixed_coefficient_symmetry",
            report.pairs.iter().map(|p| {
                expect(p.defect.is_zero() && p.defect == p.curvature_defect, || {
                    json!({ "first": p.first, "second": p.second, "defect": scalar(&p.defect) })
                })
            }),
        ),
        Err(e) => rec.check("super_mixed_coefficient_symmetry", [Err(e)]),
    }
}

fn det(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let splits = splittings();
    let cases: Vec<_> = (0..20)
        .map(|i| {
            let p = random_point(rng, &splits[i % splits.len()], 4);
            let (lo, hi) = p.support_range();
            let small = det_fiber_dims(&p, (lo - 1, hi + 1))?;
            let width = hi - lo + 3;
            let big = det_fiber_dims(&p, (lo - 1 - width, hi + 1 + width))?;
            let stable = (small.dim_intersection, small.dim_quotient) == (big.dim_intersection, big.dim_quotient);
            expect(stable && small.index() == virtual_index(&p), || json!({ "point": crate::json::chart_point(&p) }))
        })
        .collect();
    rec.check("window_doubling", cases);

    let cases: Vec<_> = (0..10)
        .map(|i| {
            let split = &splits[i % splits.len()];
            let p = random_point(rng, split, 2);
            let out = flow::flow_jet(&random_witt(rng, 2, 2), &p, rng.gen_range(0..=2), 3)?;
            let t = frac(1, 3);
            let entries: Matrix<i64, Scalar> = out
                .a
                .iter()
                .map(|(k, v)| v.evaluate(std::slice::from_ref(&t)).map(|x| (*k, x)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            let moved = ChartPoint::new(split.clone(), entries)?;
            let (lo, hi) = moved.support_range();
            let dims = det_fiber_dims(&moved, (lo - 1, hi + 1))?;
            expect(dims.index() == virtual_index(&p) && virtual_index(&moved) == virtual_index(&p), || {
                json!({ "point": crate::json::chart_point(&p) })
            })
        })
        .collect();
    rec.check("index_invariant_under_flows", cases);
}
