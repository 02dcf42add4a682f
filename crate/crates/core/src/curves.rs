//! Space monomial curves `k[t^n1, t^n2, t^n3]`: classification, defining
//! binomials, and the closed-form threshold tables.
//!
//! Complete intersections are normalized to `(n1, n2, n3) = (c·b1, c·a1,
//! a1·b2 + a2·b1)` with ideal `(x^a1 - y^b1, z^c - x^a2 y^b2)`. The others are
//! given by the three Herzog generators
//!
//! ```text
//! f1 = x^(a1+a2) - y^b1 z^c2
//! f2 = y^(b1+b2) - z^c1 x^a2
//! f3 = z^(c1+c2) - x^a1 y^b2
//! ```
//!
//! with variables ordered so that `deg f1 < deg f2 < deg f3`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::engine::{compute_lct, LctCertificate};
use crate::ideal::{BinomialGen, IdealSpec};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("semigroup generator {value} is smaller than 2")]
    TooSmall { value: u64 },
    #[error("generators have common divisor {gcd}")]
    NotCoprime { gcd: u64 },
    #[error("{value} lies in the semigroup of the other two generators ({representation:?}); the semigroup is not minimally 3-generated")]
    NotMinimal { value: u64, representation: Vec<u64> },
    #[error("inconsistent Herzog data for {weights:?}: {reason}")]
    Inconsistent { weights: [u64; 3], reason: String },
    #[error("table value {table} disagrees with LP value {lp}")]
    MethodDisagreement { table: Box<Rational>, lp: Box<Rational> },
}

/// Lexicographically smallest `m_i` with `Σ m_i·gens_i = m`.
pub fn semigroup_member(m: u64, gens: &[u64]) -> Option<Vec<u64>> {
    assert!(!gens.is_empty() && gens.iter().all(|&g| g > 0), "generators must be positive");
    let size = usize::try_from(m).expect("target fits in memory") + 1;
    // reach[k][v]: v is a combination of gens[k..].
    let mut reach = vec![vec![false; size]; gens.len() + 1];
    reach[gens.len()][0] = true;
    for k in (0..gens.len()).rev() {
        let g = gens[k] as usize;
        let (head, tail) = reach.split_at_mut(k + 1);
        let (cur, next) = (&mut head[k], &tail[0]);
        for v in 0..size {
            cur[v] = next[v] || (v >= g && cur[v - g]);
        }
    }
    if !reach[0][size - 1] {
        return None;
    }
    let mut rest = m;
    let mut out = Vec::with_capacity(gens.len());
    for k in 0..gens.len() {
        let mut count = 0;
        while !reach[k + 1][rest as usize] {
            rest -= gens[k];
            count += 1;
        }
        out.push(count);
    }
    Some(out)
}

/// All `(p, q)` with `p·a + q·b = m`, in increasing `q`.
fn two_generator_representations(m: u64, a: u64, b: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..=m / b).filter_map(move |q| {
        let rest = m - q * b;
        rest.is_multiple_of(a).then_some((rest / a, q))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CiParams {
    pub a1: u32,
    pub b1: u32,
    pub c: u32,
    pub a2: u32,
    pub b2: u32,
}

impl CiParams {
    /// `(c·b1, c·a1, a1·b2 + a2·b1)`.
    pub fn weights(&self) -> [u64; 3] {
        let [a1, b1, c, a2, b2] = [self.a1, self.b1, self.c, self.a2, self.b2].map(u64::from);
        [c * b1, c * a1, a1 * b2 + a2 * b1]
    }

    pub fn deg_f(&self) -> u64 {
        u64::from(self.a1) * u64::from(self.b1) * u64::from(self.c)
    }

    pub fn deg_g(&self) -> u64 {
        u64::from(self.c) * self.weights()[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HerzogParams {
    pub a1: u32,
    pub a2: u32,
    pub b1: u32,
    pub b2: u32,
    pub c1: u32,
    pub c2: u32,
}

fn ratio(num: u32, den: u32) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl HerzogParams {
    /// The three weights forced by the exponents.
    pub fn weights(&self) -> [u64; 3] {
        let [a1, a2, b1, b2, c1, c2] = [self.a1, self.a2, self.b1, self.b2, self.c1, self.c2].map(u64::from);
        [(b1 + b2) * (c1 + c2) - b2 * c1, (c1 + c2) * (a1 + a2) - c2 * a1, (a1 + a2) * (b1 + b2) - a2 * b1]
    }

    pub fn alpha(&self) -> Rational {
        ratio(self.a1, self.a1 + self.a2)
    }

    pub fn beta(&self) -> Rational {
        ratio(self.b1, self.b1 + self.b2)
    }

    pub fn gamma(&self) -> Rational {
        ratio(self.c1, self.c1 + self.c2)
    }

    /// `deg f1, deg f2, deg f3` under the given weights.
    pub fn degrees(&self, weights: &[u64; 3]) -> [u64; 3] {
        [
            u64::from(self.a1 + self.a2) * weights[0],
            u64::from(self.b1 + self.b2) * weights[1],
            u64::from(self.c1 + self.c2) * weights[2],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveData {
    CompleteIntersection(CiParams),
    Herzog(HerzogParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    CompleteIntersection,
    NonCompleteIntersection,
}

/// Normal form of a curve. Canonical variable `i` is input variable
/// `permutation[i]`, and `weights[i] = input[permutation[i]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveParams {
    pub data: CurveData,
    pub permutation: [usize; 3],
    pub weights: [u64; 3],
}

impl CurveParams {
    /// Parameters taken as already canonical, with weights derived from them.
    pub fn from_ci(p: CiParams) -> Self {
        Self { data: CurveData::CompleteIntersection(p), permutation: [0, 1, 2], weights: p.weights() }
    }

    pub fn from_herzog(p: HerzogParams) -> Self {
        Self { data: CurveData::Herzog(p), permutation: [0, 1, 2], weights: p.weights() }
    }

    pub fn kind(&self) -> CurveKind {
        match self.data {
            CurveData::CompleteIntersection(_) => CurveKind::CompleteIntersection,
            CurveData::Herzog(_) => CurveKind::NonCompleteIntersection,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Rejects triples outside scope, then detects complete intersections by the
/// pairwise gcd test and falls back to Herzog data.
pub fn classify_curve(n1: u64, n2: u64, n3: u64) -> Result<CurveParams, CurveError> {
    let n = [n1, n2, n3];
    if let Some(&value) = n.iter().find(|&&v| v < 2) {
        return Err(CurveError::TooSmall { value });
    }
    let g = gcd(gcd(n1, n2), n3);
    if g != 1 {
        return Err(CurveError::NotCoprime { gcd: g });
    }
    for k in 0..3 {
        let others = [n[(k + 1) % 3], n[(k + 2) % 3]];
        if let Some(rep) = semigroup_member(n[k], &others) {
            return Err(CurveError::NotMinimal { value: n[k], representation: rep });
        }
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let d = gcd(n[i], n[j]);
        if d == 1 {
            continue;
        }
        let Some((a2, b2)) = two_generator_representations(d * n[k], n[i], n[j]).next() else {
            continue;
        };
        let (x, y, a2, b2) = if a2 >= b2 { (i, j, a2, b2) } else { (j, i, b2, a2) };
        let small = |v: u64| u32::try_from(v).expect("curve parameters fit in u32");
        let params = CiParams { a1: small(n[y] / d), b1: small(n[x] / d), c: small(d), a2: small(a2), b2: small(b2) };
        let permutation = [x, y, k];
        let weights = permutation.map(|v| n[v]);
        debug_assert_eq!(params.weights(), weights);
        return Ok(CurveParams { data: CurveData::CompleteIntersection(params), permutation, weights });
    }
    herzog_params(n1, n2, n3)
}

/// Herzog data for a non-complete-intersection triple.
pub fn herzog_params(n1: u64, n2: u64, n3: u64) -> Result<CurveParams, CurveError> {
    let n = [n1, n2, n3];
    let fail = |reason: String| CurveError::Inconsistent { weights: n, reason };
    // For variable t: minimal multiple h_t and its representation, indexed by
    // the other input variable.
    let mut minimal = [0u64; 3];
    let mut rep = [[0u64; 3]; 3];
    for t in 0..3 {
        let (u, v) = ((t + 1) % 3, (t + 2) % 3);
        let mut h = 1;
        let reps = loop {
            let reps: Vec<_> = two_generator_representations(h * n[t], n[u], n[v]).collect();
            if !reps.is_empty() {
                break reps;
            }
            h += 1;
        };
        if reps.len() != 1 {
            return Err(fail(format!("{h}·{} has {} representations", n[t], reps.len())));
        }
        let (pu, pv) = reps[0];
        if pu == 0 || pv == 0 {
            return Err(fail(format!("{h}·{} = {pu}·{} + {pv}·{} uses one generator", n[t], n[u], n[v])));
        }
        minimal[t] = h;
        rep[t][u] = pu;
        rep[t][v] = pv;
    }
    let small = |v: u64| u32::try_from(v).expect("curve parameters fit in u32");
    let mut found = Vec::new();
    for perm in permutations() {
        let [x, y, z] = perm;
        let p = HerzogParams {
            a1: small(rep[z][x]),
            a2: small(rep[y][x]),
            b1: small(rep[x][y]),
            b2: small(rep[z][y]),
            c1: small(rep[y][z]),
            c2: small(rep[x][z]),
        };
        let sums = [p.a1 + p.a2, p.b1 + p.b2, p.c1 + p.c2].map(u64::from);
        if sums != perm.map(|t| minimal[t]) {
            return Err(fail(format!("minimal multiples {minimal:?} do not match exponent sums {sums:?}")));
        }
        let weights = perm.map(|t| n[t]);
        if p.weights() != weights {
            return Err(fail(format!("relations give {:?}, expected {weights:?}", p.weights())));
        }
        let [d1, d2, d3] = p.degrees(&weights);
        if d1 < d2 && d2 < d3 {
            found.push(CurveParams { data: CurveData::Herzog(p), permutation: perm, weights });
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        _ => Err(fail(format!("{} variable orders give increasing degrees", found.len()))),
    }
}

fn permutations() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Defining binomials over `x, y, z` with the canonical weights.
pub fn curve_ideal(params: &CurveParams) -> IdealSpec {
    let binomials = match params.data {
        CurveData::CompleteIntersection(p) => {
            vec![BinomialGen::unit([p.a1, 0, 0], [0, p.b1, 0]), BinomialGen::unit([0, 0, p.c], [p.a2, p.b2, 0])]
        }
        CurveData::Herzog(p) => vec![
            BinomialGen::unit([p.a1 + p.a2, 0, 0], [0, p.b1, p.c2]),
            BinomialGen::unit([0, p.b1 + p.b2, 0], [p.a2, 0, p.c1]),
            BinomialGen::unit([0, 0, p.c1 + p.c2], [p.a1, p.b2, 0]),
        ],
    };
    let binomials =
        binomials.into_iter().collect::<Result<Vec<_>, _>>().expect("curve binomials have nonzero distinct exponents");
    IdealSpec::with_default_names(3, Some(params.weights.to_vec()), binomials, vec![])
        .expect("curve binomials are homogeneous for their weights")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiRow {
    /// `deg f <= deg g` or `c = 1`.
    LowDegree,
    /// `deg f > deg g`, `a2 = b2 = 1`.
    UnitShift,
    /// `deg f > deg g`, `a2 = 1`, `b2 = 0`.
    PureShift,
    /// `deg f > deg g`, `c, a2 >= 2`.
    General,
}

impl CiRow {
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn condition(self) -> &'static str {
        match self {
            CiRow::LowDegree => "deg f <= deg g or c = 1",
            CiRow::UnitShift => "deg f > deg g, a2 = b2 = 1",
            CiRow::PureShift => "deg f > deg g, a2 = 1, b2 = 0",
            CiRow::General => "deg f > deg g, c >= 2, a2 >= 2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HerzogRow {
    /// `b1 = c2 = 1`.
    UnitExponents,
    /// `b1 <= c2`, `c2 >= 2`.
    SmallB1,
    /// `b1 > c2`, `α <= γ`.
    AlphaBelowGamma,
    /// `b1 > c2`, `α >= γ`, `c1/a2 + c2/b1 <= 1`.
    AlphaAboveGammaTight,
    /// `b1 > c2`, `α >= γ`, `c1/a2 + c2/b1 > 1`.
    AlphaAboveGammaLoose,
}

impl HerzogRow {
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn condition(self) -> &'static str {
        match self {
            HerzogRow::UnitExponents => "b1 = c2 = 1",
            HerzogRow::SmallB1 => "b1 <= c2, c2 >= 2",
            HerzogRow::AlphaBelowGamma => "b1 > c2, alpha <= gamma",
            HerzogRow::AlphaAboveGammaTight => "b1 > c2, alpha >= gamma, c1/a2 + c2/b1 <= 1",
            HerzogRow::AlphaAboveGammaLoose => "b1 > c2, alpha >= gamma, c1/a2 + c2/b1 > 1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum TableRow {
    Ci(CiRow),
    Herzog(HerzogRow),
}

impl TableRow {
    pub fn number(self) -> usize {
        match self {
            TableRow::Ci(r) => r.number(),
            TableRow::Herzog(r) => r.number(),
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            TableRow::Ci(r) => r.condition(),
            TableRow::Herzog(r) => r.condition(),
        }
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} ({})", self.number(), self.condition())
    }
}

fn inv(v: u32) -> Rational {
    ratio(1, v)
}

pub fn ci_row(p: &CiParams) -> CiRow {
    if p.deg_f() <= p.deg_g() || p.c == 1 {
        CiRow::LowDegree
    } else if p.a2 == 1 && p.b2 == 1 {
        CiRow::UnitShift
    } else if p.a2 == 1 && p.b2 == 0 {
        CiRow::PureShift
    } else {
        CiRow::General
    }
}

/// The formula of `row`, whether or not its condition holds.
pub fn ci_row_value(row: CiRow, p: &CiParams) -> Rational {
    let one = Rational::one();
    match row {
        CiRow::LowDegree => inv(p.a1) + inv(p.b1) + inv(p.c),
        CiRow::UnitShift => (inv(p.a1) + inv(p.b1)) * inv(p.c) + one,
        CiRow::PureShift => ratio(1, p.a1 * p.c) + inv(p.b1) + one,
        CiRow::General => inv(p.a2) + (one - ratio(p.b2, p.a2)) * inv(p.b1) + inv(p.c),
    }
}

pub fn lct_table_ci(p: &CiParams) -> (CiRow, Rational) {
    let row = ci_row(p);
    (row, ci_row_value(row, p))
}

pub fn herzog_row(p: &HerzogParams) -> HerzogRow {
    if p.b1 == 1 && p.c2 == 1 {
        HerzogRow::UnitExponents
    } else if p.b1 <= p.c2 {
        HerzogRow::SmallB1
    } else if p.alpha() <= p.gamma() {
        HerzogRow::AlphaBelowGamma
    } else if ratio(p.c1, p.a2) + ratio(p.c2, p.b1) <= Rational::one() {
        HerzogRow::AlphaAboveGammaTight
    } else {
        HerzogRow::AlphaAboveGammaLoose
    }
}

/// The formula of `row` with `n1, n2` taken from `weights`.
pub fn herzog_row_value(row: HerzogRow, p: &HerzogParams, weights: &[u64; 3]) -> Rational {
    let one = Rational::one();
    let a = p.a1 + p.a2;
    let c = p.c1 + p.c2;
    match row {
        HerzogRow::UnitExponents => {
            one + Rational::new(BigInt::from(weights[0]), BigInt::from(weights[1] * u64::from(1 + p.b2)))
        }
        HerzogRow::SmallB1 => inv(a) + (one + ratio(p.b2, p.c2)) * inv(p.b1 + p.b2),
        HerzogRow::AlphaBelowGamma => inv(a) + ratio(p.b1 + p.c1, p.b1 * c),
        HerzogRow::AlphaAboveGammaTight => ratio(p.b1 + p.c1, p.b1 * c) + ratio(p.c2, p.a2 * c),
        HerzogRow::AlphaAboveGammaLoose => inv(a) + inv(p.b1) + ratio(p.a1, a * p.c1) * (one - ratio(p.c2, p.b1)),
    }
}

pub fn lct_table_nonci(p: &HerzogParams, weights: &[u64; 3]) -> (HerzogRow, Rational) {
    let row = herzog_row(p);
    (row, herzog_row_value(row, p, weights))
}

/// Table row and value for either kind.
pub fn lct_table(params: &CurveParams) -> (TableRow, Rational) {
    match &params.data {
        CurveData::CompleteIntersection(p) => {
            let (row, v) = lct_table_ci(p);
            (TableRow::Ci(row), v)
        }
        CurveData::Herzog(p) => {
            let (row, v) = lct_table_nonci(p, &params.weights);
            (TableRow::Herzog(row), v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CurveMethod {
    Table,
    Lp,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveReport {
    pub input: [u64; 3],
    pub params: CurveParams,
    pub ideal: IdealSpec,
    pub table: Option<(TableRow, Rational)>,
    pub certificate: Option<LctCertificate>,
    pub value: Rational,
}

/// Classifies, builds the ideal, and evaluates the requested method(s). With
/// [`CurveMethod::Both`] the two values must agree exactly.
pub fn curve_lct(n1: u64, n2: u64, n3: u64, method: CurveMethod) -> Result<CurveReport, CurveError> {
    let params = classify_curve(n1, n2, n3)?;
    let ideal = curve_ideal(&params);
    let table = matches!(method, CurveMethod::Table | CurveMethod::Both).then(|| lct_table(&params));
    let certificate = matches!(method, CurveMethod::Lp | CurveMethod::Both).then(|| compute_lct(&ideal));
    let value = match (&table, &certificate) {
        (Some((_, t)), Some(c)) => {
            if *t != c.value {
                return Err(CurveError::MethodDisagreement {
                    table: Box::new(t.clone()),
                    lp: Box::new(c.value.clone()),
                });
            }
            t.clone()
        }
        (Some((_, t)), None) => t.clone(),
        (None, Some(c)) => c.value.clone(),
        (None, None) => unreachable!("every method evaluates something"),
    };
    Ok(CurveReport { input: [n1, n2, n3], params, ideal, table, certificate, value })
}
