//! Uniqueness test for an optimal solution's image under the exponent matrix.
//!
//! For `x` optimal, another optimal `x' = x + k` with `A x' = A x` exists iff
//! some nonzero `k` in the kernel satisfies `x + k >= 0`. The kernel is taken
//! over the binomial columns only: monomial weights `λ` stay fixed, as in the
//! mixed binomial/monomial argument, and the pair rows force `Σ(μ_i+ν_i)` to be
//! unchanged, so such an `x'` is automatically feasible and optimal.
//!
//! The set `{k ∈ K : x + k >= 0}` is convex and contains a neighbourhood of 0
//! in every coordinate where `x_j > 0`, so only the zero coordinates `Z` of `x`
//! matter: the test is whether the cone `{λ : (Dλ)_j >= 0 for j ∈ Z}` is
//! nontrivial, `D` being a kernel basis.

use num_traits::{Signed, Zero};

use crate::linalg::{nullspace_of_rows, rank_of_rows, RatMatrix};
use crate::lp::{lp_solve, LpProblem, LpStatus};
use crate::rational::Rational;

/// Basis of the kernel of the first `2 * binomials` columns of `a`.
pub(crate) fn binomial_kernel(a: &RatMatrix, binomials: usize) -> Vec<Vec<Rational>> {
    if binomials == 0 {
        return Vec::new();
    }
    let cols = 2 * binomials;
    let rows: Vec<Vec<Rational>> = (0..a.rows()).map(|r| a.row(r)[..cols].to_vec()).collect();
    nullspace_of_rows(&rows, cols)
}

/// `true` iff no other optimal solution shares `x`'s image under the
/// constraint matrix. `x` must be feasible and optimal for `p`; the first
/// `2 * binomials` variables are the `(μ, ν)` columns.
pub fn check_criterion(p: &LpProblem, x: &[Rational], binomials: usize) -> bool {
    let kernel = binomial_kernel(p.constraints(), binomials);
    criterion_with_kernel(&kernel, x)
}

pub(crate) fn criterion_with_kernel(kernel: &[Vec<Rational>], x: &[Rational]) -> bool {
    if kernel.is_empty() {
        return true;
    }
    let dim = kernel.len();
    let zero_coords: Vec<usize> = (0..kernel[0].len()).filter(|&j| x[j].is_zero()).collect();
    if zero_coords.is_empty() {
        return false;
    }
    // Row j of D restricted to Z: coefficients of λ in (Dλ)_j.
    let restricted: Vec<Vec<Rational>> =
        zero_coords.iter().map(|&j| kernel.iter().map(|k| k[j].clone()).collect()).collect();
    if rank_of_rows(&restricted, dim) < dim {
        // Some nonzero kernel vector vanishes on Z.
        return false;
    }
    !cone_has_nonzero_ray(&restricted, dim)
}

/// Is there λ with `Mλ >= 0` and `Mλ != 0`? `M` has full column rank here.
///
/// Solved as `max 1ᵀMλ` s.t. `-Mλ <= 0`, `1ᵀMλ <= 1`, with λ split into
/// nonnegative parts.
fn cone_has_nonzero_ray(m: &[Vec<Rational>], dim: usize) -> bool {
    let column_sums: Vec<Rational> =
        (0..dim).map(|c| m.iter().fold(Rational::zero(), |acc, row| acc + &row[c])).collect();
    let split = |row: &[Rational], sign: bool| -> Vec<Rational> {
        row.iter()
            .map(|v| if sign { v.clone() } else { -v.clone() })
            .chain(row.iter().map(|v| if sign { -v.clone() } else { v.clone() }))
            .collect()
    };
    let mut data = Vec::with_capacity((m.len() + 1) * 2 * dim);
    for row in m {
        data.extend(split(row, false));
    }
    data.extend(split(&column_sums, true));
    let rows = m.len() + 1;
    let a = RatMatrix::new(rows, 2 * dim, data).expect("cone LP has consistent dimensions");
    let mut rhs = vec![Rational::zero(); m.len()];
    rhs.push(Rational::from_integer(1.into()));
    let p = LpProblem::new(split(&column_sums, true), a, rhs).expect("cone LP is well formed");
    let s = lp_solve(&p);
    s.status == LpStatus::Optimal && s.value.is_positive()
}
