//! Monomial ideals through their Newton polyhedra.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ideal::{BinomialGen, ExponentVector};
use crate::linalg::RatMatrix;
use crate::lp::{lp_solve, LpProblem, LpStatus};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NewtonError {
    #[error("no monomial generators given")]
    NoGenerators,
    #[error("monomial generator {0} is the zero vector")]
    ZeroGenerator(usize),
    #[error("exponent vectors have inconsistent lengths")]
    LengthMismatch,
    #[error("scaling factor t must be positive")]
    NonPositiveT,
}

fn check(monomials: &[ExponentVector]) -> Result<usize, NewtonError> {
    let first = monomials.first().ok_or(NewtonError::NoGenerators)?;
    let n = first.len();
    for (i, c) in monomials.iter().enumerate() {
        if c.len() != n {
            return Err(NewtonError::LengthMismatch);
        }
        if c.is_zero() {
            return Err(NewtonError::ZeroGenerator(i));
        }
    }
    Ok(n)
}

fn entry(v: u32) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn one() -> Rational {
    Rational::one()
}

/// `max Σλ_j` subject to `Σ λ_j c_j <= 1`, `λ >= 0`.
pub fn monomial_lct(monomials: &[ExponentVector]) -> Result<Rational, NewtonError> {
    let n = check(monomials)?;
    let s = monomials.len();
    let data = (0..n).flat_map(|row| monomials.iter().map(move |c| entry(c[row]))).collect();
    let a = RatMatrix::new(n, s, data).map_err(|_| NewtonError::LengthMismatch)?;
    let p = LpProblem::new(vec![one(); s], a, vec![one(); n]).expect("Newton LP is well formed");
    let sol = lp_solve(&p);
    // Every column is nonzero and 0 is feasible, so the LP is always optimal.
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    Ok(sol.value)
}

/// Threshold of a single binomial via its term ideal, capped at 1.
pub fn principal_binomial_lct(g: &BinomialGen) -> Rational {
    let value = monomial_lct(&[g.plus().clone(), g.minus().clone()])
        .expect("binomial exponents are nonzero and of equal length");
    value.min(one())
}

/// Feasibility system for `v - ε·1 ∈ t·P`: rows `Σλ_j c_j + ε·1 <= v`,
/// `Σλ_j <= t`, `-Σλ_j <= -t`, over variables `(λ, ε)`.
fn shifted_membership_lp(
    v: &[Rational],
    t: &Rational,
    monomials: &[ExponentVector],
    objective: Vec<Rational>,
) -> LpProblem {
    let n = v.len();
    let s = monomials.len();
    let mut data = Vec::with_capacity((n + 2) * (s + 1));
    for row in 0..n {
        data.extend(monomials.iter().map(|c| entry(c[row])));
        data.push(one());
    }
    data.extend(std::iter::repeat_n(one(), s));
    data.push(Rational::zero());
    data.extend(std::iter::repeat_n(-one(), s));
    data.push(Rational::zero());
    let a = RatMatrix::new(n + 2, s + 1, data).expect("membership LP has consistent dimensions");
    let mut rhs = v.to_vec();
    rhs.push(t.clone());
    rhs.push(-t.clone());
    LpProblem::new(objective, a, rhs).expect("membership LP is well formed")
}

fn check_point(v: &[Rational], t: &Rational, monomials: &[ExponentVector]) -> Result<(), NewtonError> {
    let n = check(monomials)?;
    if v.len() != n {
        return Err(NewtonError::LengthMismatch);
    }
    if !t.is_positive() {
        return Err(NewtonError::NonPositiveT);
    }
    Ok(())
}

/// Is `v ∈ t·P` where `P = conv{c_j} + ℝ≥0ⁿ`?
pub fn newton_membership(v: &[Rational], t: &Rational, monomials: &[ExponentVector]) -> Result<bool, NewtonError> {
    check_point(v, t, monomials)?;
    // ε fixed at 0 by giving it no room: v - 0·1 must already be in t·P.
    let s = monomials.len();
    let mut objective = vec![Rational::zero(); s + 1];
    objective[s] = -one();
    let p = shifted_membership_lp(v, t, monomials, objective);
    Ok(lp_solve(&p).status == LpStatus::Optimal)
}

/// Is `v` in the topological interior of `t·P`? Since `P` is closed upward,
/// this holds iff `v - ε·1 ∈ t·P` for some `ε > 0`.
pub fn newton_interior(v: &[Rational], t: &Rational, monomials: &[ExponentVector]) -> Result<bool, NewtonError> {
    check_point(v, t, monomials)?;
    let s = monomials.len();
    let mut objective = vec![Rational::zero(); s + 1];
    objective[s] = one();
    let p = shifted_membership_lp(v, t, monomials, objective);
    let sol = lp_solve(&p);
    Ok(sol.status == LpStatus::Optimal && sol.value.is_positive())
}

/// Is `x^c` in the multiplier ideal of the monomial ideal at exponent `t`?
pub fn multiplier_monomial_contains(
    c: &[u32],
    t: &Rational,
    monomials: &[ExponentVector],
) -> Result<bool, NewtonError> {
    let shifted: Vec<Rational> = c.iter().map(|&e| entry(e) + one()).collect();
    newton_interior(&shifted, t, monomials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn x2_y3() -> Vec<ExponentVector> {
        vec![ev(&[2, 0]), ev(&[0, 3])]
    }

    #[test]
    fn unit_vectors_give_n() {
        for n in 1..=5 {
            let gens: Vec<_> = (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    ev(&v)
                })
                .collect();
            assert_eq!(monomial_lct(&gens).unwrap(), int(n as i64));
        }
    }

    #[test]
    fn two_generator_examples() {
        assert_eq!(monomial_lct(&x2_y3()).unwrap(), rat(5, 6));
        assert_eq!(monomial_lct(&[ev(&[2, 5])]).unwrap(), rat(1, 5));
        assert_eq!(monomial_lct(&[ev(&[4, 1])]).unwrap(), rat(1, 4));
    }

    #[test]
    fn principal_binomial_values() {
        let g = BinomialGen::unit([3, 0], [0, 4]).unwrap();
        assert_eq!(principal_binomial_lct(&g), rat(7, 12));
        let g = BinomialGen::unit([1, 0], [0, 1]).unwrap();
        assert_eq!(principal_binomial_lct(&g), int(1));
        let g = BinomialGen::unit([2, 0], [0, 2]).unwrap();
        assert_eq!(principal_binomial_lct(&g), int(1));
    }

    #[test]
    fn membership_examples() {
        let ones = [int(1), int(1)];
        let c1 = [int(2) * rat(5, 6), int(0)];
        assert!(newton_membership(&c1, &rat(5, 6), &x2_y3()).unwrap());
        assert!(newton_membership(&ones, &rat(5, 6), &x2_y3()).unwrap());
        assert!(!newton_membership(&ones, &int(1), &x2_y3()).unwrap());
    }

    #[test]
    fn interior_examples() {
        let ones = [int(1), int(1)];
        assert!(!newton_interior(&ones, &rat(5, 6), &x2_y3()).unwrap());
        assert!(newton_interior(&ones, &rat(1, 2), &x2_y3()).unwrap());
        assert!(!newton_interior(&[int(0), int(0)], &rat(1, 100), &x2_y3()).unwrap());
    }

    #[test]
    fn multiplier_ideal_examples() {
        assert!(multiplier_monomial_contains(&[0, 0], &rat(4, 5), &x2_y3()).unwrap());
        assert!(!multiplier_monomial_contains(&[0, 0], &rat(5, 6), &x2_y3()).unwrap());
        assert!(multiplier_monomial_contains(&[2, 2], &rat(5, 6), &x2_y3()).unwrap());
    }

    #[test]
    fn precondition_errors() {
        assert_eq!(monomial_lct(&[]), Err(NewtonError::NoGenerators));
        assert_eq!(monomial_lct(&[ev(&[0, 0])]), Err(NewtonError::ZeroGenerator(0)));
        assert_eq!(newton_membership(&[int(1), int(1)], &int(0), &x2_y3()), Err(NewtonError::NonPositiveT));
    }
}
