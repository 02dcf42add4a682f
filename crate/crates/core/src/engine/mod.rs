//! The threshold LP for binomial (plus monomial) ideals and its certificate.
//!
//! Variables are ordered `μ_1..μ_r, ν_1..ν_r, λ_1..λ_s`. The first `n` rows
//! bound `Σ(a_i μ_i + b_i ν_i) + Σ c_j λ_j` by 1 componentwise; the next `r`
//! rows bound each `μ_i + ν_i` by 1. The optimum is always an upper bound for
//! the threshold, and it is exact when some optimal solution is the only one
//! with its image under the constraint matrix.

pub mod criterion;
pub mod newton;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::ideal::IdealSpec;
use crate::linalg::{nullspace, rank, RatMatrix};
use crate::lp::{lp_optimal_vertices, lp_solve, LpProblem, LpStatus, DEFAULT_VERTEX_CAP};
use crate::rational::{sum, Rational};

pub use criterion::check_criterion;
pub use newton::{
    monomial_lct, multiplier_monomial_contains, newton_interior, newton_membership, principal_binomial_lct, NewtonError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    /// The optimum equals the threshold.
    Exact,
    /// Only `threshold <= value` is known.
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LctCertificate {
    pub value: Rational,
    /// `(μ, ν, λ)`; the witness when exact, otherwise the simplex vertex.
    pub solution: Vec<Rational>,
    pub status: CertificateStatus,
    pub matrix: RatMatrix,
    pub rank: usize,
    pub kernel_dim: usize,
    pub criterion_witness: Option<Vec<Rational>>,
    pub binomials: usize,
    pub monomials: usize,
    /// Number of optimal vertices examined.
    pub vertices_examined: usize,
    pub notes: Vec<String>,
}

impl LctCertificate {
    pub fn is_exact(&self) -> bool {
        self.status == CertificateStatus::Exact
    }

    /// `(μ_i + ν_i)` for each binomial.
    pub fn binomial_weights(&self) -> Vec<Rational> {
        let r = self.binomials;
        (0..r).map(|i| &self.solution[i] + &self.solution[r + i]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LctOptions {
    pub vertex_cap: usize,
}

impl Default for LctOptions {
    fn default() -> Self {
        Self { vertex_cap: DEFAULT_VERTEX_CAP }
    }
}

fn entry(v: u32) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// The threshold LP: `2r + s` variables, `n + r` rows, all-ones objective and rhs.
pub fn build_lp(spec: &IdealSpec) -> LpProblem {
    let n = spec.num_vars();
    let r = spec.binomials().len();
    let s = spec.monomials().len();
    let cols = 2 * r + s;
    let rows = n + r;
    let mut a = RatMatrix::zeros(rows, cols).expect("validated spec has a variable and a generator");
    for (i, g) in spec.binomials().iter().enumerate() {
        for var in 0..n {
            a.set(var, i, entry(g.plus()[var]));
            a.set(var, r + i, entry(g.minus()[var]));
        }
        a.set(n + i, i, Rational::one());
        a.set(n + i, r + i, Rational::one());
    }
    for (j, m) in spec.monomials().iter().enumerate() {
        for var in 0..n {
            a.set(var, 2 * r + j, entry(m.exponents()[var]));
        }
    }
    LpProblem::new(vec![Rational::one(); cols], a, vec![Rational::one(); rows])
        .expect("threshold LP has consistent dimensions")
}

/// [`compute_lct_with`] under default options.
pub fn compute_lct(spec: &IdealSpec) -> LctCertificate {
    compute_lct_with(spec, &LctOptions::default())
}

/// Solves the threshold LP and searches the optimal vertices, in enumeration
/// order, for one passing the uniqueness test.
pub fn compute_lct_with(spec: &IdealSpec, options: &LctOptions) -> LctCertificate {
    let p = build_lp(spec);
    let r = spec.binomials().len();
    let s = spec.monomials().len();
    let mut notes = Vec::new();

    let mut plus_seen = BTreeSet::new();
    for g in spec.binomials() {
        if !plus_seen.insert(g.plus().to_vec()) {
            notes.push(format!("two binomials share the plus exponent {:?}", g.plus().to_vec()));
            break;
        }
    }

    let base = lp_solve(&p);
    // 0 is feasible and every column has a positive entry in a row with rhs 1.
    assert_eq!(base.status, LpStatus::Optimal, "threshold LP is always bounded and feasible");

    let kernel = criterion::binomial_kernel(p.constraints(), r);
    let optimal = lp_optimal_vertices(&p, options.vertex_cap).expect("threshold LP is optimal");
    if optimal.truncated {
        notes.push(format!("optimal-face enumeration stopped at {} vertices", optimal.vertices.len()));
    }
    let witness = optimal.vertices.iter().position(|v| criterion::criterion_with_kernel(&kernel, v));
    let vertices_examined = witness.map_or(optimal.vertices.len(), |i| i + 1);
    let witness = witness.map(|i| optimal.vertices[i].clone());
    if witness.is_none() {
        notes.push("no optimal vertex passes the uniqueness test; value is an upper bound".into());
    }

    let solution = witness.clone().unwrap_or_else(|| base.vertex.clone());
    let mut value = sum(&solution);
    debug_assert_eq!(value, base.value);
    if r + s == 1 && value > Rational::one() {
        // Unreachable through the LP (pair row or monomial row caps it) but a
        // principal ideal can never exceed 1.
        value = Rational::one();
    }

    let a = p.constraints().clone();
    let rank = rank(&a);
    let kernel_dim = nullspace(&a).len();
    LctCertificate {
        value,
        solution,
        status: if witness.is_some() { CertificateStatus::Exact } else { CertificateStatus::UpperBound },
        matrix: a,
        rank,
        kernel_dim,
        criterion_witness: witness,
        binomials: r,
        monomials: s,
        vertices_examined,
        notes,
    }
}
