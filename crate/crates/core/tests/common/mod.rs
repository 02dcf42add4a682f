//! Property checks shared by the `properties` test target and the acceptance
//! harness. Every property runs under a fixed seed.

#![allow(dead_code)]

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use serde_json::{json, Value};

use lct_core::charp::{
    coefficient_witness, expansion_coefficient, is_prime, lucas_binom, n_modulus, nu_with, survives, CharpError,
    NuOptions,
};
use lct_core::curves::{classify_curve, curve_ideal, lct_table, CurveData, CurveKind};
use lct_core::engine::{check_criterion, monomial_lct, newton_membership, principal_binomial_lct};
use lct_core::linalg::{nullspace, rank, RatMatrix};
use lct_core::lp::{lp_optimal_vertices, lp_solve, LpProblem, LpStatus};
use lct_core::rational::{int, parse_rational, rat};
use lct_core::{build_lp, compute_lct, parse_ideal, BinomialGen, ExponentVector, IdealSpec, MonomialGen, Rational};

pub const SEED: u64 = 0x6c63_7431;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_global_rejects: 65_536,
        ..Config::default()
    }
}

pub struct Property {
    pub name: &'static str,
    pub cases: u32,
    run: fn(&mut TestRunner) -> Result<(), String>,
}

impl Property {
    pub fn run(&self) -> (Result<(), String>, Duration) {
        let start = Instant::now();
        let mut runner = TestRunner::new(config(self.cases));
        ((self.run)(&mut runner), start.elapsed())
    }
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

macro_rules! property {
    ($name:literal, $cases:expr, $strategy:expr, $check:expr) => {
        Property { name: $name, cases: $cases, run: |runner| report(runner.run(&$strategy, $check)) }
    };
}

pub fn suite() -> Vec<Property> {
    vec![
        property!("lp optimum is feasible and attains its value", 300, small_lp(), check_lp_solution),
        property!("lp weak duality on a rational grid", 200, small_lp(), check_lp_grid),
        property!("lp solve is deterministic", 100, small_lp(), check_lp_deterministic),
        property!("bland's rule terminates on degenerate problems", 100, degenerate_lp(), check_degenerate),
        property!("rank plus nullity equals columns", 300, small_matrix(), check_rank_nullity),
        property!("uniqueness criterion agrees with kernel directions", 150, small_spec(), check_criterion_sound),
        property!("lct invariant under variable and generator permutations", 100, permuted_spec(), check_permutation),
        property!("curve classification invariant under permuting the triple", 200, curve_triple(), check_curve_perm),
        property!("non-ci parameters satisfy the ordering invariants", 200, curve_triple(), check_herzog_invariants),
        property!("ideal documents round trip", 200, round_trip_spec(), check_round_trip),
        property!("document validation matches the rules", 400, raw_document(), check_validation),
        property!("monomial lct is the largest t with 1 in tP", 200, monomial_set(), check_monomial_membership),
        property!("monomial lct scales inversely", 200, (monomial_set(), 1u32..=4), check_monomial_scaling),
        property!("principal binomial lct is clamped at 1", 300, binomial_gen(3), check_principal_clamp),
        property!("lucas binomials match exact binomials", 500, lucas_input(), check_lucas),
        property!("survival is downward closed", 60, (small_spec(), small_prime()), check_downward_closed),
        property!(
            "nu(p^2) is at least p nu(p)",
            40,
            (small_spec(), prop::sample::select(vec![2u64, 3])),
            check_nu_monotone
        ),
        property!("nu/q never exceeds the lp value", 60, (small_spec(), small_prime()), check_upper_sound),
        property!("witness coefficient matches the expansion", 60, small_spec(), check_witness_coefficient),
    ]
}

// ---------------------------------------------------------------- strategies

fn r(v: i64) -> Rational {
    int(v)
}

fn matrix(rows: &[Vec<i64>]) -> RatMatrix {
    RatMatrix::from_integer_rows(rows).expect("nonempty rectangular matrix")
}

pub fn small_lp() -> impl Strategy<Value = LpProblem> {
    (1usize..=3, 1usize..=4)
        .prop_flat_map(|(n, m)| (vec(vec(-2i64..=4, n), m), vec(-2i64..=4, n), vec(-1i64..=5, m)))
        .prop_map(|(a, c, b)| {
            LpProblem::new(c.into_iter().map(r).collect(), matrix(&a), b.into_iter().map(r).collect()).unwrap()
        })
}

/// Zero right-hand sides and repeated rows: every vertex is the origin.
pub fn degenerate_lp() -> impl Strategy<Value = LpProblem> {
    (2usize..=4, 1usize..=3)
        .prop_flat_map(|(n, m)| (vec(vec(-2i64..=3, n), m), vec(-1i64..=3, n), 1usize..=3))
        .prop_map(|(a, c, copies)| {
            let rows: Vec<Vec<i64>> = (0..copies).flat_map(|_| a.clone()).collect();
            let zeros = vec![Rational::zero(); rows.len()];
            LpProblem::new(c.into_iter().map(r).collect(), matrix(&rows), zeros).unwrap()
        })
}

pub fn small_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(m, n)| vec(vec((-3i64..=3, 1i64..=2), n), m)).prop_map(|rows| {
        RatMatrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(|(a, b)| rat(a, b)).collect()).collect())
            .unwrap()
    })
}

fn nonzero_exponents(n: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    vec(0u32..=max, n).prop_filter("nonzero exponent", |v| v.iter().any(|&x| x > 0))
}

fn coefficient() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => Just(r(1)),
        1 => (prop_oneof![-3i64..=-1, 1i64..=3], 1i64..=3).prop_map(|(a, b)| rat(a, b)),
    ]
}

pub fn binomial_gen(n: usize) -> impl Strategy<Value = BinomialGen> {
    (nonzero_exponents(n, 3), nonzero_exponents(n, 3), coefficient())
        .prop_filter("distinct terms", |(p, m, _)| p != m)
        .prop_map(|(p, m, c)| BinomialGen::new(p, m, c).unwrap())
}

/// Two or three variables, one to three binomials, at most one monomial.
pub fn small_spec() -> impl Strategy<Value = IdealSpec> {
    (2usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                vec(binomial_gen(n), 1..=3),
                vec(nonzero_exponents(n, 3).prop_map(|e| MonomialGen::new(e).unwrap()), 0..=1),
            )
        })
        .prop_map(|(n, b, m)| IdealSpec::with_default_names(n, None, b, m).unwrap())
}

pub fn permuted_spec() -> impl Strategy<Value = (IdealSpec, Vec<usize>, Vec<usize>, Vec<usize>)> {
    small_spec().prop_flat_map(|spec| {
        let vars: Vec<usize> = (0..spec.num_vars()).collect();
        let bins: Vec<usize> = (0..spec.binomials().len()).collect();
        let mons: Vec<usize> = (0..spec.monomials().len()).collect();
        (Just(spec), Just(vars).prop_shuffle(), Just(bins).prop_shuffle(), Just(mons).prop_shuffle())
    })
}

pub fn curve_triple() -> impl Strategy<Value = [u64; 3]> {
    [3u64..=40, 3u64..=40, 3u64..=40].prop_filter("classifiable", |t| classify_curve(t[0], t[1], t[2]).is_ok())
}

pub fn round_trip_spec() -> impl Strategy<Value = IdealSpec> {
    prop_oneof![small_spec(), curve_triple().prop_map(|t| curve_ideal(&classify_curve(t[0], t[1], t[2]).unwrap())),]
}

#[derive(Debug, Clone)]
pub enum RawGenerator {
    Binomial { plus: Vec<u32>, minus: Vec<u32>, coeff: Option<&'static str> },
    Monomial(Vec<u32>),
}

#[derive(Debug, Clone)]
pub struct RawDocument {
    vars: usize,
    weights: Option<Vec<u64>>,
    generators: Vec<RawGenerator>,
}

impl RawDocument {
    fn to_json(&self) -> Value {
        let names: Vec<String> = (0..self.vars).map(|i| format!("v{i}")).collect();
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| match g {
                RawGenerator::Binomial { plus, minus, coeff: Some(c) } => {
                    json!({"type": "binomial", "plus": plus, "minus": minus, "coeff": c})
                }
                RawGenerator::Binomial { plus, minus, coeff: None } => {
                    json!({"type": "binomial", "plus": plus, "minus": minus})
                }
                RawGenerator::Monomial(e) => json!({"type": "monomial", "exponents": e}),
            })
            .collect();
        let mut doc = json!({"variables": names, "generators": gens});
        if let Some(w) = &self.weights {
            doc["weights"] = json!(w);
        }
        doc
    }

    /// The validity rules, restated independently of the parser.
    fn expected_valid(&self) -> bool {
        let n = self.vars;
        let weights_ok = match &self.weights {
            None => true,
            Some(w) => w.len() == n && w.iter().all(|&x| x > 0),
        };
        let degree = |v: &[u32], w: &[u64]| v.iter().zip(w).map(|(&a, &b)| u64::from(a) * b).sum::<u64>();
        let generator_ok = |g: &RawGenerator| match g {
            RawGenerator::Binomial { plus, minus, coeff } => {
                let coeff_ok = coeff.is_none_or(|c| parse_rational(c).is_ok_and(|v| !v.is_zero()));
                let homogeneous = match &self.weights {
                    Some(w) if weights_ok && plus.len() == n && minus.len() == n => degree(plus, w) == degree(minus, w),
                    _ => true,
                };
                plus.len() == n
                    && minus.len() == n
                    && plus.iter().any(|&x| x > 0)
                    && minus.iter().any(|&x| x > 0)
                    && plus != minus
                    && coeff_ok
                    && homogeneous
            }
            RawGenerator::Monomial(e) => e.len() == n && e.iter().any(|&x| x > 0),
        };
        n > 0 && weights_ok && !self.generators.is_empty() && self.generators.iter().all(generator_ok)
    }
}

pub fn raw_document() -> impl Strategy<Value = RawDocument> {
    let exps = || vec(0u32..=2, 1..=3);
    let generator = prop_oneof![
        (exps(), exps(), prop::option::of(prop::sample::select(vec!["1", "-2", "3/4", "0", "0/5", "1/0", "abc"])))
            .prop_map(|(plus, minus, coeff)| RawGenerator::Binomial { plus, minus, coeff }),
        exps().prop_map(RawGenerator::Monomial),
    ];
    (0usize..=3, prop::option::of(vec(0u64..=3, 1..=3)), vec(generator, 0..=3))
        .prop_map(|(vars, weights, generators)| RawDocument { vars, weights, generators })
}

pub fn monomial_set() -> impl Strategy<Value = Vec<ExponentVector>> {
    (1usize..=3).prop_flat_map(|n| vec(nonzero_exponents(n, 4).prop_map(ExponentVector::new), 1..=3))
}

pub fn lucas_input() -> impl Strategy<Value = (u64, u64, u64)> {
    (0u64..=400, prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17]))
        .prop_flat_map(|(m, p)| (Just(m), 0..=m, Just(p)))
}

pub fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

// ---------------------------------------------------------------- checks

fn check_lp_solution(p: LpProblem) -> Result<(), TestCaseError> {
    let sol = lp_solve(&p);
    let b_nonnegative = p.rhs().iter().all(|b| !b.is_negative());
    match sol.status {
        LpStatus::Optimal => {
            prop_assert!(p.is_feasible(&sol.vertex));
            prop_assert_eq!(p.objective_value(&sol.vertex), sol.value);
        }
        LpStatus::Infeasible => prop_assert!(!b_nonnegative, "origin is feasible but status is infeasible"),
        LpStatus::Unbounded => {}
    }
    Ok(())
}

fn grid_points(n: usize) -> Vec<Vec<Rational>> {
    let steps: Vec<Rational> = [0, 1, 2, 3, 4, 6].iter().map(|&k| rat(k, 2)).collect();
    let mut points = vec![Vec::new()];
    for _ in 0..n {
        points = points
            .into_iter()
            .flat_map(|p| {
                steps.iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s.clone());
                    q
                })
            })
            .collect();
    }
    points
}

fn check_lp_grid(p: LpProblem) -> Result<(), TestCaseError> {
    let sol = lp_solve(&p);
    for x in grid_points(p.num_vars()) {
        if !p.is_feasible(&x) {
            continue;
        }
        prop_assert!(sol.status != LpStatus::Infeasible, "feasible grid point {:?}", x);
        if sol.status == LpStatus::Optimal {
            prop_assert!(p.objective_value(&x) <= sol.value, "grid point {:?} beats the optimum", x);
        }
    }
    Ok(())
}

fn check_lp_deterministic(p: LpProblem) -> Result<(), TestCaseError> {
    prop_assert_eq!(lp_solve(&p), lp_solve(&p));
    Ok(())
}

fn check_degenerate(p: LpProblem) -> Result<(), TestCaseError> {
    let sol = lp_solve(&p);
    // The feasible region is a cone, so the optimum, when it exists, is 0.
    if sol.status == LpStatus::Optimal {
        prop_assert!(sol.value.is_zero());
        prop_assert!(p.is_feasible(&sol.vertex));
    }
    prop_assert!(sol.status != LpStatus::Infeasible);
    Ok(())
}

fn check_rank_nullity(m: RatMatrix) -> Result<(), TestCaseError> {
    let kernel = nullspace(&m);
    prop_assert_eq!(rank(&m) + kernel.len(), m.cols());
    for k in &kernel {
        prop_assert!(m.mul_vec(k).iter().all(Zero::is_zero));
        prop_assert!(k.iter().all(Rational::is_integer));
        prop_assert!(k.iter().find(|v| !v.is_zero()).is_some_and(Rational::is_positive));
    }
    if !kernel.is_empty() {
        let basis = RatMatrix::from_rows(kernel.clone()).unwrap();
        prop_assert_eq!(rank(&basis), kernel.len());
    }
    Ok(())
}

fn add(a: &[Rational], b: &[Rational], sign: i64) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y * r(sign)).collect()
}

fn neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

/// `x + εd >= 0` for small `ε > 0`.
fn feasible_direction(x: &[Rational], d: &[Rational]) -> bool {
    x.iter().zip(d).all(|(xi, di)| !xi.is_zero() || !di.is_negative())
}

fn check_criterion_sound(spec: IdealSpec) -> Result<(), TestCaseError> {
    let p = build_lp(&spec);
    let rb = spec.binomials().len();
    let a = p.constraints();
    let cols: Vec<usize> = (0..2 * rb).collect();
    let kernel: Vec<Vec<Rational>> = nullspace(&a.select_columns(&cols).unwrap())
        .into_iter()
        .map(|mut k| {
            k.resize(a.cols(), Rational::zero());
            k
        })
        .collect();
    let value = lp_solve(&p).value;
    let face = lp_optimal_vertices(&p, 500).unwrap();
    for x in &face.vertices {
        prop_assert!(p.is_feasible(x));
        prop_assert_eq!(&p.objective_value(x), &value);
        let unique = check_criterion(&p, x, rb);
        let mut directions = Vec::new();
        for (i, k) in kernel.iter().enumerate() {
            directions.push(k.clone());
            directions.push(neg(k));
            for l in &kernel[i + 1..] {
                for s in [1, -1] {
                    let d = add(k, l, s);
                    directions.push(neg(&d));
                    directions.push(d);
                }
            }
        }
        let movable = directions.iter().any(|d| feasible_direction(x, d));
        if movable {
            prop_assert!(!unique, "x = {:?} moves along the kernel but passed", x);
        }
        if kernel.len() <= 1 {
            prop_assert_eq!(unique, !movable, "x = {:?}", x);
        }
    }
    let cert = compute_lct(&spec);
    prop_assert_eq!(&cert.value, &value);
    if let Some(w) = &cert.criterion_witness {
        prop_assert!(check_criterion(&p, w, rb));
        prop_assert!(cert.is_exact());
    }
    Ok(())
}

fn check_permutation(
    (spec, vars, bins, mons): (IdealSpec, Vec<usize>, Vec<usize>, Vec<usize>),
) -> Result<(), TestCaseError> {
    let moved = spec.permute_variables(&vars).unwrap().reorder_generators(&bins, &mons);
    let (a, b) = (compute_lct(&spec), compute_lct(&moved));
    prop_assert_eq!(&a.value, &b.value);
    prop_assert_eq!(a.rank, b.rank);
    prop_assert_eq!(a.kernel_dim, b.kernel_dim);
    prop_assert_eq!(a.status, b.status);
    Ok(())
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn check_curve_perm(t: [u64; 3]) -> Result<(), TestCaseError> {
    let base = classify_curve(t[0], t[1], t[2]).unwrap();
    let value = lct_table(&base).1;
    for perm in PERMUTATIONS {
        let c = classify_curve(t[perm[0]], t[perm[1]], t[perm[2]]).unwrap();
        prop_assert_eq!(c.kind(), base.kind());
        prop_assert_eq!(lct_table(&c).1, value.clone());
        let mut sorted = c.weights;
        sorted.sort_unstable();
        let mut expected = t;
        expected.sort_unstable();
        prop_assert_eq!(sorted, expected);
    }
    Ok(())
}

fn check_herzog_invariants(t: [u64; 3]) -> Result<(), TestCaseError> {
    let c = classify_curve(t[0], t[1], t[2]).unwrap();
    let CurveData::Herzog(h) = c.data else {
        prop_assert_eq!(c.kind(), CurveKind::CompleteIntersection);
        return Ok(());
    };
    let (al, be, ga) = (h.alpha(), h.beta(), h.gamma());
    let one = Rational::one();
    prop_assert!((&one - &be) * &ga > (&one - &ga) * &al);
    prop_assert!((&one - &ga) * &al > (&one - &al) * &be);
    let d = h.degrees(&c.weights);
    prop_assert!(d[0] < d[1] && d[1] < d[2], "degrees {:?}", d);
    prop_assert_eq!(h.weights(), c.weights);
    Ok(())
}

fn check_round_trip(spec: IdealSpec) -> Result<(), TestCaseError> {
    let text = spec.to_json();
    let back = parse_ideal(text.as_bytes()).unwrap();
    prop_assert_eq!(&back, &spec);
    prop_assert_eq!(back.to_json(), text);
    Ok(())
}

fn check_validation(doc: RawDocument) -> Result<(), TestCaseError> {
    let parsed = parse_ideal(doc.to_json().to_string().as_bytes());
    prop_assert_eq!(parsed.is_ok(), doc.expected_valid(), "{:?}", parsed.err().map(|e| e.diagnostics()));
    if let Err(e) = parsed {
        prop_assert!(!e.diagnostics().is_empty());
    }
    Ok(())
}

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

fn check_monomial_membership(gens: Vec<ExponentVector>) -> Result<(), TestCaseError> {
    let t = monomial_lct(&gens).unwrap();
    let n = gens[0].len();
    prop_assert!(t.is_positive());
    prop_assert!(newton_membership(&ones(n), &t, &gens).unwrap());
    prop_assert!(newton_membership(&ones(n), &(&t * rat(1, 2)), &gens).unwrap());
    prop_assert!(!newton_membership(&ones(n), &(&t * rat(65, 64)), &gens).unwrap());
    Ok(())
}

fn check_monomial_scaling((gens, d): (Vec<ExponentVector>, u32)) -> Result<(), TestCaseError> {
    let scaled: Vec<ExponentVector> =
        gens.iter().map(|g| ExponentVector::new(g.iter().map(|&x| x * d).collect())).collect();
    prop_assert_eq!(monomial_lct(&scaled).unwrap() * r(i64::from(d)), monomial_lct(&gens).unwrap());
    Ok(())
}

fn check_principal_clamp(g: BinomialGen) -> Result<(), TestCaseError> {
    let v = principal_binomial_lct(&g);
    let raw = monomial_lct(&[g.plus().clone(), g.minus().clone()]).unwrap();
    prop_assert!(v <= Rational::one());
    prop_assert_eq!(v, raw.min(Rational::one()));
    Ok(())
}

fn exact_binomial(m: u64, n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..n {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

fn check_lucas((m, n, p): (u64, u64, u64)) -> Result<(), TestCaseError> {
    let expected = (exact_binomial(m, n) % BigInt::from(p)).to_u64().unwrap();
    prop_assert_eq!(lucas_binom(m, n, p), expected);
    Ok(())
}

const ORACLE_BUDGET: u64 = 2_000_000;

fn skip_budget<T>(r: Result<T, CharpError>) -> Result<Option<T>, TestCaseError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(CharpError::BudgetExceeded { .. } | CharpError::CoefficientDivisible { .. }) => Ok(None),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

fn options() -> NuOptions {
    NuOptions { budget: ORACLE_BUDGET, start: None }
}

fn check_downward_closed((spec, p): (IdealSpec, u64)) -> Result<(), TestCaseError> {
    let Some(report) = skip_budget(nu_with(&spec, p, 1, &options()))? else { return Ok(()) };
    for k in 0..=report.nu + 1 {
        let Some(s) = skip_budget(survives(&spec, k, p, 1, ORACLE_BUDGET))? else { return Ok(()) };
        prop_assert_eq!(s, k <= report.nu, "r = {}", k);
    }
    Ok(())
}

fn check_nu_monotone((spec, p): (IdealSpec, u64)) -> Result<(), TestCaseError> {
    let Some(one) = skip_budget(nu_with(&spec, p, 1, &options()))? else { return Ok(()) };
    let Some(two) = skip_budget(nu_with(&spec, p, 2, &options()))? else { return Ok(()) };
    prop_assert!(two.nu >= p * one.nu, "nu(p) = {}, nu(p^2) = {}", one.nu, two.nu);
    Ok(())
}

fn check_upper_sound((spec, p): (IdealSpec, u64)) -> Result<(), TestCaseError> {
    let cert = compute_lct(&spec);
    let Some(report) = skip_budget(nu_with(&spec, p, 1, &options()))? else { return Ok(()) };
    prop_assert!(report.ratio <= cert.value, "nu/q = {} exceeds {}", report.ratio, cert.value);
    Ok(())
}

fn check_witness_coefficient(spec: IdealSpec) -> Result<(), TestCaseError> {
    let cert = compute_lct(&spec);
    let Ok(modulus) = n_modulus(&cert) else { return Ok(()) };
    let Some(p) = (2..=400u64).find(|&p| is_prime(p) && p % modulus == 1 % modulus) else { return Ok(()) };
    let Some(direct) = skip_budget(coefficient_witness(&spec, &cert, p, 1))? else { return Ok(()) };
    let Some((_, expanded)) = skip_budget(expansion_coefficient(&spec, &cert, p, 1, ORACLE_BUDGET))? else {
        return Ok(());
    };
    prop_assert_eq!(direct, expanded);
    prop_assert!(direct != 0, "p = {}", p);
    Ok(())
}
