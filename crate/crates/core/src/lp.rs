//! Exact simplex for `maximize c·x subject to A x <= b, x >= 0`.
//!
//! Dense tableau, Bland's rule for both the entering and the leaving variable,
//! and a phase-1 pass on artificial variables when some `b_i < 0`. The solver
//! never touches floating point.

use std::collections::{HashSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::linalg::RatMatrix;
use crate::rational::Rational;

pub const DEFAULT_VERTEX_CAP: usize = 10_000;

/// Pivots explored per allowed vertex before the face enumeration gives up.
const BASES_PER_VERTEX: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("objective has {objective} entries but the matrix has {cols} columns")]
    ObjectiveLength { objective: usize, cols: usize },
    #[error("right-hand side has {rhs} entries but the matrix has {rows} rows")]
    RhsLength { rhs: usize, rows: usize },
    #[error("problem is not optimal ({0:?}); the optimal face is undefined")]
    NotOptimal(LpStatus),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LpProblem {
    objective: Vec<Rational>,
    constraints: RatMatrix,
    rhs: Vec<Rational>,
}

impl LpProblem {
    pub fn new(objective: Vec<Rational>, constraints: RatMatrix, rhs: Vec<Rational>) -> Result<Self, LpError> {
        if objective.len() != constraints.cols() {
            return Err(LpError::ObjectiveLength { objective: objective.len(), cols: constraints.cols() });
        }
        if rhs.len() != constraints.rows() {
            return Err(LpError::RhsLength { rhs: rhs.len(), rows: constraints.rows() });
        }
        Ok(Self { objective, constraints, rhs })
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &RatMatrix {
        &self.constraints
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn num_vars(&self) -> usize {
        self.constraints.cols()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }

    /// Exact check of `A x <= b` and `x >= 0`.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.mul_vec(x).iter().zip(&self.rhs).all(|(ax, b)| ax <= b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`lp_solve`]. For non-optimal statuses `value` is zero and
/// `vertex`/`basis` are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rational,
    pub vertex: Vec<Rational>,
    /// Basic column indices, sorted. Columns `0..n` are the structural
    /// variables and `n..n+m` the slacks of rows `0..m`.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalVertices {
    /// Distinct optimal vertices in discovery order; the first is the
    /// [`lp_solve`] vertex.
    pub vertices: Vec<Vec<Rational>>,
    pub truncated: bool,
}

#[derive(Clone)]
struct Tableau {
    structural: usize,
    width: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    blocked: Vec<bool>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = col;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, v) in self.rows[r][..self.width].iter().enumerate() {
                if !v.is_zero() {
                    d[j] -= &cost[b] * v;
                }
            }
        }
        d
    }

    fn is_basic(&self) -> Vec<bool> {
        let mut basic = vec![false; self.width];
        for &b in &self.basis {
            basic[b] = true;
        }
        basic
    }

    /// Rows attaining the minimum ratio for entering column `col`.
    fn ratio_rows(&self, col: usize) -> Vec<usize> {
        let mut best: Option<Rational> = None;
        let mut rows = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = self.rhs(r) / &row[col];
            match &best {
                Some(b) if ratio > *b => {}
                Some(b) if ratio == *b => rows.push(r),
                _ => {
                    best = Some(ratio);
                    rows.clear();
                    rows.push(r);
                }
            }
        }
        rows
    }

    fn run(&mut self, cost: &[Rational]) -> Phase {
        loop {
            let d = self.reduced_costs(cost);
            let basic = self.is_basic();
            let entering = (0..self.width).find(|&j| !basic[j] && !self.blocked[j] && d[j].is_positive());
            let Some(col) = entering else {
                return Phase::Optimal;
            };
            let candidates = self.ratio_rows(col);
            let Some(&leave) = candidates.iter().min_by_key(|&&r| self.basis[r]) else {
                return Phase::Unbounded;
            };
            self.pivot(leave, col);
        }
    }

    fn vertex(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                x[b] = self.rhs(r).clone();
            }
        }
        x
    }

    fn basis_key(&self) -> Vec<usize> {
        let mut key = self.basis.clone();
        key.sort_unstable();
        key
    }
}

/// Runs both simplex phases; `None` means infeasible, `Err(())` unbounded.
fn optimal_tableau(p: &LpProblem) -> Result<Option<Tableau>, ()> {
    let m = p.constraints.rows();
    let n = p.constraints.cols();
    let negative: Vec<usize> = (0..m).filter(|&i| p.rhs[i].is_negative()).collect();
    let width = n + m + negative.len();
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_artificial = n + m;
    for i in 0..m {
        let mut row = vec![Rational::zero(); width + 1];
        let flip = p.rhs[i].is_negative();
        for (j, a) in p.constraints.row(i).iter().enumerate() {
            row[j] = if flip { -a.clone() } else { a.clone() };
        }
        row[n + i] = Rational::from_integer(if flip { -1 } else { 1 }.into());
        row[width] = p.rhs[i].abs();
        if flip {
            row[next_artificial] = Rational::from_integer(1.into());
            basis.push(next_artificial);
            next_artificial += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { structural: n, width, rows, basis, blocked: vec![false; width] };

    if !negative.is_empty() {
        let mut phase1 = vec![Rational::zero(); width];
        for c in phase1.iter_mut().skip(n + m) {
            *c = Rational::from_integer((-1).into());
        }
        // Phase 1 is bounded above by zero, so it always reaches Optimal.
        let _ = t.run(&phase1);
        let infeasibility: Rational = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n + m)
            .fold(Rational::zero(), |acc, (r, _)| acc + t.rhs(r));
        if infeasibility.is_positive() {
            return Ok(None);
        }
        for r in 0..m {
            if t.basis[r] < n + m {
                continue;
            }
            // [A | I] has full row rank, so some original column is nonzero here.
            if let Some(col) = (0..n + m).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, col);
            }
        }
        for b in t.blocked.iter_mut().skip(n + m) {
            *b = true;
        }
    }

    match t.run(&padded_cost(p, width)) {
        Phase::Optimal => Ok(Some(t)),
        Phase::Unbounded => Err(()),
    }
}

fn padded_cost(p: &LpProblem, width: usize) -> Vec<Rational> {
    let mut cost = vec![Rational::zero(); width];
    cost[..p.num_vars()].clone_from_slice(&p.objective);
    cost
}

/// Solves the LP exactly. Deterministic: identical inputs give identical
/// vertices and bases.
pub fn lp_solve(p: &LpProblem) -> LpSolution {
    match optimal_tableau(p) {
        Ok(Some(t)) => {
            let vertex = t.vertex();
            LpSolution { status: LpStatus::Optimal, value: p.objective_value(&vertex), vertex, basis: t.basis_key() }
        }
        Ok(None) => non_optimal(LpStatus::Infeasible),
        Err(()) => non_optimal(LpStatus::Unbounded),
    }
}

fn non_optimal(status: LpStatus) -> LpSolution {
    LpSolution { status, value: Rational::zero(), vertex: Vec::new(), basis: Vec::new() }
}

/// Enumerates distinct vertices of the optimal face, breadth-first over
/// optimal bases, stopping after `cap` vertices.
///
/// Columns with a strictly negative reduced cost at the optimum are zero on
/// the whole optimal face, so the search pivots only on zero-reduced-cost
/// columns; such pivots leave every reduced cost unchanged.
pub fn lp_optimal_vertices(p: &LpProblem, cap: usize) -> Result<OptimalVertices, LpError> {
    let start = match optimal_tableau(p) {
        Ok(Some(t)) => t,
        Ok(None) => return Err(LpError::NotOptimal(LpStatus::Infeasible)),
        Err(()) => return Err(LpError::NotOptimal(LpStatus::Unbounded)),
    };
    let cap = cap.max(1);
    let mut start = start;
    let d = start.reduced_costs(&padded_cost(p, start.width));
    for (j, dj) in d.iter().enumerate() {
        if !dj.is_zero() {
            start.blocked[j] = true;
        }
    }

    let basis_cap = cap.saturating_mul(BASES_PER_VERTEX);
    let mut seen_bases: HashSet<Vec<usize>> = HashSet::new();
    let mut seen_vertices: HashSet<Vec<Rational>> = HashSet::new();
    let mut vertices = Vec::new();
    let mut queue = VecDeque::new();
    seen_bases.insert(start.basis_key());
    queue.push_back(start);
    let mut truncated = false;

    while let Some(t) = queue.pop_front() {
        let x = t.vertex();
        if seen_vertices.insert(x.clone()) {
            if vertices.len() == cap {
                truncated = true;
                break;
            }
            vertices.push(x);
        }
        for (col, &basic) in t.is_basic().iter().enumerate() {
            if basic || t.blocked[col] {
                continue;
            }
            for r in t.ratio_rows(col) {
                let mut next = t.clone();
                next.pivot(r, col);
                if seen_bases.insert(next.basis_key()) {
                    queue.push_back(next);
                }
            }
        }
        if seen_bases.len() > basis_cap {
            truncated = !queue.is_empty();
            break;
        }
    }
    Ok(OptimalVertices { vertices, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn problem(c: &[i64], a: &[&[i64]], b: &[i64]) -> LpProblem {
        LpProblem::new(
            c.iter().map(|&v| int(v)).collect(),
            RatMatrix::from_integer_rows(a).unwrap(),
            b.iter().map(|&v| int(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn box_problem() {
        let p = problem(&[1, 1], &[&[1, 0], &[0, 1]], &[1, 1]);
        let s = lp_solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(2));
        assert_eq!(s.vertex, vec![int(1), int(1)]);
        assert_eq!(s.basis, vec![0, 1]);
    }

    #[test]
    fn two_monomial_newton_lp() {
        let p = problem(&[1, 1], &[&[2, 0], &[0, 3]], &[1, 1]);
        assert_eq!(lp_solve(&p).value, rat(5, 6));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        // x1 >= 2 and x1 <= 1
        let p = problem(&[1], &[&[-1], &[1]], &[-2, 1]);
        assert_eq!(lp_solve(&p).status, LpStatus::Infeasible);
        let p = problem(&[1, 1], &[&[1, -1]], &[1]);
        assert_eq!(lp_solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn phase_one_finds_feasible_optimum() {
        // max -x1 - x2 s.t. x1 + x2 >= 1, x1 <= 3
        let p = problem(&[-1, -1], &[&[-1, -1], &[1, 0]], &[-1, 3]);
        let s = lp_solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(-1));
        assert!(p.is_feasible(&s.vertex));
    }

    #[test]
    fn optimal_face_of_box_edge() {
        let p = problem(&[1, 0], &[&[1, 0], &[0, 1]], &[1, 1]);
        let face = lp_optimal_vertices(&p, 10).unwrap();
        assert!(!face.truncated);
        let mut v = face.vertices.clone();
        v.sort();
        assert_eq!(v, vec![vec![int(1), int(0)], vec![int(1), int(1)]]);
        assert_eq!(face.vertices[0], lp_solve(&p).vertex);
    }

    #[test]
    fn cap_truncates() {
        let p = problem(&[1, 0], &[&[1, 0], &[0, 1]], &[1, 1]);
        let face = lp_optimal_vertices(&p, 1).unwrap();
        assert_eq!(face.vertices.len(), 1);
        assert!(face.truncated);
    }

    #[test]
    fn degenerate_zero_objective_terminates() {
        let p = problem(&[0, 0, 0], &[&[1, 1, 1], &[1, 1, 1], &[2, 2, 2], &[1, 0, 0], &[0, 0, 0]], &[1, 1, 2, 1, 0]);
        let s = lp_solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(0));
        let face = lp_optimal_vertices(&p, 100).unwrap();
        assert_eq!(face.vertices.len(), 4);
    }

    #[test]
    fn not_optimal_face_is_an_error() {
        let p = problem(&[1], &[&[-1]], &[1]);
        assert_eq!(lp_optimal_vertices(&p, 10), Err(LpError::NotOptimal(LpStatus::Unbounded)));
    }
}
