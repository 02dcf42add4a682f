//! Binomial and monomial ideal inputs: validated data model, JSON I/O and the
//! semigroup grading.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, parse_rational, Rational};

/// Exponent vector of a monomial, one entry per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    /// Applies a variable relabeling: entry `i` of the result is entry
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&i| self.0[i]).collect())
    }
}

impl Deref for ExponentVector {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for ExponentVector {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

/// `Σ v_j · weight_j`.
pub fn h_degree(v: &[u32], weights: &[u64]) -> u64 {
    assert_eq!(v.len(), weights.len(), "exponent/weight length mismatch");
    v.iter().zip(weights).map(|(&e, &w)| u64::from(e) * w).sum()
}

/// A single reason an ideal description is invalid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoVariables,
    DuplicateVariable(String),
    NoGenerators,
    WeightCount { expected: usize, actual: usize },
    NonPositiveWeight { index: usize },
    Length { generator: usize, field: &'static str, expected: usize, actual: usize },
    ZeroExponent { generator: usize, field: &'static str },
    ZeroCoefficient { generator: usize },
    BadCoefficient { generator: usize, message: String },
    PlusEqualsMinus { generator: usize },
    Inhomogeneous { generator: usize, plus_degree: u64, minus_degree: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVariables => write!(f, "no variables declared"),
            Violation::DuplicateVariable(name) => write!(f, "variable {name:?} declared twice"),
            Violation::NoGenerators => write!(f, "no generators"),
            Violation::WeightCount { expected, actual } => {
                write!(f, "expected {expected} weights, got {actual}")
            }
            Violation::NonPositiveWeight { index } => write!(f, "weight {index} must be positive"),
            Violation::Length { generator, field, expected, actual } => {
                write!(f, "generator {generator}: {field} has {actual} entries, expected {expected}")
            }
            Violation::ZeroExponent { generator, field } => {
                write!(f, "generator {generator}: {field} is the zero exponent vector")
            }
            Violation::ZeroCoefficient { generator } => {
                write!(f, "generator {generator}: coefficient is zero")
            }
            Violation::BadCoefficient { generator, message } => {
                write!(f, "generator {generator}: {message}")
            }
            Violation::PlusEqualsMinus { generator } => {
                write!(f, "generator {generator}: plus and minus exponents coincide; declare it as a monomial")
            }
            Violation::Inhomogeneous { generator, plus_degree, minus_degree } => {
                write!(f, "generator {generator}: not homogeneous (degrees {plus_degree} and {minus_degree})")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IdealError {
    #[error("malformed ideal document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid ideal: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

impl IdealError {
    /// One line per problem found.
    pub fn diagnostics(&self) -> Vec<String> {
        match self {
            IdealError::Json(e) => vec![format!("malformed ideal document: {e}")],
            IdealError::Invalid(v) => v.iter().map(ToString::to_string).collect(),
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// `x^plus − coeff · x^minus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinomialGen {
    plus: ExponentVector,
    minus: ExponentVector,
    coeff: Rational,
}

impl BinomialGen {
    pub fn new(
        plus: impl Into<ExponentVector>,
        minus: impl Into<ExponentVector>,
        coeff: Rational,
    ) -> Result<Self, IdealError> {
        let g = Self { plus: plus.into(), minus: minus.into(), coeff };
        let mut violations = Vec::new();
        g.check(0, &mut violations);
        if g.plus.len() != g.minus.len() {
            violations.push(Violation::Length {
                generator: 0,
                field: "minus",
                expected: g.plus.len(),
                actual: g.minus.len(),
            });
        }
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(IdealError::Invalid(violations))
        }
    }

    /// `x^plus − x^minus`.
    pub fn unit(plus: impl Into<ExponentVector>, minus: impl Into<ExponentVector>) -> Result<Self, IdealError> {
        Self::new(plus, minus, Rational::from_integer(1.into()))
    }

    fn check(&self, index: usize, out: &mut Vec<Violation>) {
        if self.plus.is_zero() {
            out.push(Violation::ZeroExponent { generator: index, field: "plus" });
        }
        if self.minus.is_zero() {
            out.push(Violation::ZeroExponent { generator: index, field: "minus" });
        }
        if self.coeff.is_zero() {
            out.push(Violation::ZeroCoefficient { generator: index });
        }
        if self.plus == self.minus {
            out.push(Violation::PlusEqualsMinus { generator: index });
        }
    }

    pub fn plus(&self) -> &ExponentVector {
        &self.plus
    }

    pub fn minus(&self) -> &ExponentVector {
        &self.minus
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        Self { plus: self.plus.permuted(perm), minus: self.minus.permuted(perm), coeff: self.coeff.clone() }
    }
}

/// `x^exponents`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialGen {
    exponents: ExponentVector,
}

impl MonomialGen {
    pub fn new(exponents: impl Into<ExponentVector>) -> Result<Self, IdealError> {
        let exponents = exponents.into();
        if exponents.is_zero() {
            return Err(IdealError::Invalid(vec![Violation::ZeroExponent { generator: 0, field: "exponents" }]));
        }
        Ok(Self { exponents })
    }

    pub fn exponents(&self) -> &ExponentVector {
        &self.exponents
    }
}

/// A validated ideal: at least one generator, consistent lengths, and
/// homogeneous binomials whenever weights are given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealSpec {
    variables: Vec<String>,
    weights: Option<Vec<u64>>,
    binomials: Vec<BinomialGen>,
    monomials: Vec<MonomialGen>,
}

impl IdealSpec {
    pub fn new(
        variables: Vec<String>,
        weights: Option<Vec<u64>>,
        binomials: Vec<BinomialGen>,
        monomials: Vec<MonomialGen>,
    ) -> Result<Self, IdealError> {
        let spec = Self { variables, weights, binomials, monomials };
        let violations = spec.violations();
        if violations.is_empty() {
            Ok(spec)
        } else {
            Err(IdealError::Invalid(violations))
        }
    }

    /// Variables named `x, y, z` (and `w`) for up to four variables, `x1..xn` beyond.
    pub fn with_default_names(
        n: usize,
        weights: Option<Vec<u64>>,
        binomials: Vec<BinomialGen>,
        monomials: Vec<MonomialGen>,
    ) -> Result<Self, IdealError> {
        Self::new(default_names(n), weights, binomials, monomials)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.variables.len();
        if n == 0 {
            out.push(Violation::NoVariables);
        }
        let mut seen = HashSet::new();
        for name in &self.variables {
            if !seen.insert(name.as_str()) {
                out.push(Violation::DuplicateVariable(name.clone()));
            }
        }
        if self.binomials.is_empty() && self.monomials.is_empty() {
            out.push(Violation::NoGenerators);
        }
        let weights_ok = match &self.weights {
            Some(w) => {
                if w.len() != n {
                    out.push(Violation::WeightCount { expected: n, actual: w.len() });
                }
                for (index, &wi) in w.iter().enumerate() {
                    if wi == 0 {
                        out.push(Violation::NonPositiveWeight { index });
                    }
                }
                w.len() == n
            }
            None => false,
        };
        for (i, g) in self.binomials.iter().enumerate() {
            g.check(i, &mut out);
            let mut lengths_ok = true;
            for (field, v) in [("plus", &g.plus), ("minus", &g.minus)] {
                if v.len() != n {
                    lengths_ok = false;
                    out.push(Violation::Length { generator: i, field, expected: n, actual: v.len() });
                }
            }
            if let (true, true, Some(w)) = (weights_ok, lengths_ok, &self.weights) {
                let (dp, dm) = (h_degree(&g.plus, w), h_degree(&g.minus, w));
                if dp != dm {
                    out.push(Violation::Inhomogeneous { generator: i, plus_degree: dp, minus_degree: dm });
                }
            }
        }
        let offset = self.binomials.len();
        for (j, g) in self.monomials.iter().enumerate() {
            if g.exponents.len() != n {
                out.push(Violation::Length {
                    generator: offset + j,
                    field: "exponents",
                    expected: n,
                    actual: g.exponents.len(),
                });
            }
            if g.exponents.is_zero() {
                out.push(Violation::ZeroExponent { generator: offset + j, field: "exponents" });
            }
        }
        out
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn weights(&self) -> Option<&[u64]> {
        self.weights.as_deref()
    }

    pub fn binomials(&self) -> &[BinomialGen] {
        &self.binomials
    }

    pub fn monomials(&self) -> &[MonomialGen] {
        &self.monomials
    }

    pub fn num_generators(&self) -> usize {
        self.binomials.len() + self.monomials.len()
    }

    /// Relabels variables: new variable `i` is old variable `perm[i]`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Self, IdealError> {
        Self::new(
            perm.iter().map(|&i| self.variables[i].clone()).collect(),
            self.weights.as_ref().map(|w| perm.iter().map(|&i| w[i]).collect()),
            self.binomials.iter().map(|g| g.permuted(perm)).collect(),
            self.monomials.iter().map(|g| MonomialGen { exponents: g.exponents.permuted(perm) }).collect(),
        )
    }

    /// Reorders generators within each kind.
    pub fn reorder_generators(&self, binomial_order: &[usize], monomial_order: &[usize]) -> Self {
        Self {
            variables: self.variables.clone(),
            weights: self.weights.clone(),
            binomials: binomial_order.iter().map(|&i| self.binomials[i].clone()).collect(),
            monomials: monomial_order.iter().map(|&i| self.monomials[i].clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("ideal documents always serialize")
    }

    fn to_document(&self) -> IdealDocument {
        let generators = self
            .binomials
            .iter()
            .map(|g| GeneratorDocument::Binomial {
                plus: g.plus.to_vec(),
                minus: g.minus.to_vec(),
                coeff: Some(format_rational(&g.coeff)),
            })
            .chain(self.monomials.iter().map(|g| GeneratorDocument::Monomial { exponents: g.exponents.to_vec() }))
            .collect();
        IdealDocument { variables: self.variables.clone(), weights: self.weights.clone(), generators }
    }
}

fn default_names(n: usize) -> Vec<String> {
    match n {
        1..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        4 => ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect(),
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealDocument {
    variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u64>>,
    generators: Vec<GeneratorDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum GeneratorDocument {
    Binomial {
        plus: Vec<u32>,
        minus: Vec<u32>,
        #[serde(default)]
        coeff: Option<String>,
    },
    Monomial {
        exponents: Vec<u32>,
    },
}

/// Parses and validates an ideal document, reporting every violation found.
pub fn parse_ideal(document: &[u8]) -> Result<IdealSpec, IdealError> {
    let doc: IdealDocument = serde_json::from_slice(document)?;
    let mut violations = Vec::new();
    let mut binomials = Vec::new();
    let mut monomials = Vec::new();
    // Document position of each binomial, then of each monomial.
    let mut binomial_pos = Vec::new();
    let mut monomial_pos = Vec::new();
    for (index, g) in doc.generators.into_iter().enumerate() {
        match g {
            GeneratorDocument::Binomial { plus, minus, coeff } => {
                let coeff = match coeff.as_deref().map(parse_rational) {
                    None => Rational::from_integer(1.into()),
                    Some(Ok(c)) => c,
                    Some(Err(e)) => {
                        violations.push(Violation::BadCoefficient { generator: index, message: e.to_string() });
                        Rational::from_integer(1.into())
                    }
                };
                binomial_pos.push(index);
                binomials.push(BinomialGen { plus: plus.into(), minus: minus.into(), coeff });
            }
            GeneratorDocument::Monomial { exponents } => {
                monomial_pos.push(index);
                monomials.push(MonomialGen { exponents: exponents.into() });
            }
        }
    }
    let spec = IdealSpec { variables: doc.variables, weights: doc.weights, binomials, monomials };
    let remap = |g: usize| match binomial_pos.get(g) {
        Some(&pos) => pos,
        None => monomial_pos[g - binomial_pos.len()],
    };
    violations.extend(spec.violations().into_iter().map(|v| remap_generator(v, &remap)));
    if violations.is_empty() {
        Ok(spec)
    } else {
        Err(IdealError::Invalid(violations))
    }
}

fn remap_generator(v: Violation, remap: &dyn Fn(usize) -> usize) -> Violation {
    match v {
        Violation::Length { generator, field, expected, actual } => {
            Violation::Length { generator: remap(generator), field, expected, actual }
        }
        Violation::ZeroExponent { generator, field } => Violation::ZeroExponent { generator: remap(generator), field },
        Violation::ZeroCoefficient { generator } => Violation::ZeroCoefficient { generator: remap(generator) },
        Violation::PlusEqualsMinus { generator } => Violation::PlusEqualsMinus { generator: remap(generator) },
        Violation::Inhomogeneous { generator, plus_degree, minus_degree } => {
            Violation::Inhomogeneous { generator: remap(generator), plus_degree, minus_degree }
        }
        other => other,
    }
}
