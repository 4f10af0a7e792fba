//! Exact rational linear programming.
//!
//! Problems are stated in maximization form over free variables:
//! maximize `c·x` subject to `a·x ≤ b` rows and `a·x = b` rows. Variable bounds
//! are ordinary rows. Every optimal outcome carries a dual certificate that
//! [`LpSolution::verify`] checks with exact arithmetic.

mod simplex;

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_traits::{Signed, Zero};

use crate::error::check_dim;
use crate::linalg::dot;
use crate::Result;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// A single row `coeffs · x (≤ | =) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }
}

/// Maximize `objective · x` subject to `ineqs` (`≤`) and `eqs` (`=`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub ineqs: Vec<Constraint>,
    pub eqs: Vec<Constraint>,
}

impl LpProblem {
    /// An empty feasibility problem (zero objective) over `num_vars` free variables.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.ineqs.push(Constraint::new(coeffs, rhs));
        self
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        let coeffs = coeffs.into_iter().map(|c| -c).collect();
        self.ineqs.push(Constraint::new(coeffs, -rhs));
        self
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.eqs.push(Constraint::new(coeffs, rhs));
        self
    }

    /// Adds the row `-x_j ≤ 0`.
    pub fn add_nonneg(&mut self, j: usize) -> &mut Self {
        let mut row = vec![Rational::zero(); self.num_vars];
        row[j] = Rational::from_integer((-1).into());
        self.add_le(row, Rational::zero())
    }

    fn validate(&self) -> Result<()> {
        check_dim(self.num_vars, self.objective.len())?;
        for row in self.ineqs.iter().chain(&self.eqs) {
            check_dim(self.num_vars, row.coeffs.len())?;
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.validate()?;
        let outcome = simplex::solve(self);
        #[cfg(debug_assertions)]
        if let LpOutcome::Optimal(sol) = &outcome {
            if let Err(msg) = sol.verify(self) {
                panic!("simplex produced an invalid certificate: {msg}");
            }
        }
        Ok(outcome)
    }
}

/// Result of [`LpProblem::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Optimal primal point together with a dual certificate.
///
/// `ineq_duals[i] ≥ 0` multiplies `ineqs[i]`, `eq_duals[i]` multiplies `eqs[i]`;
/// together they reproduce the objective and the optimal value exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
    pub ineq_duals: Vec<Rational>,
    pub eq_duals: Vec<Rational>,
}

impl LpSolution {
    /// Checks primal feasibility, dual feasibility and strong duality exactly.
    pub fn verify(&self, problem: &LpProblem) -> core::result::Result<(), String> {
        let n = problem.num_vars;
        if self.point.len() != n
            || self.ineq_duals.len() != problem.ineqs.len()
            || self.eq_duals.len() != problem.eqs.len()
        {
            return Err("certificate dimensions do not match the problem".into());
        }
        for (i, row) in problem.ineqs.iter().enumerate() {
            if dot(&row.coeffs, &self.point) > row.rhs {
                return Err(format!("inequality row {i} violated"));
            }
            if self.ineq_duals[i].is_negative() {
                return Err(format!("negative multiplier on inequality row {i}"));
            }
        }
        for (i, row) in problem.eqs.iter().enumerate() {
            if dot(&row.coeffs, &self.point) != row.rhs {
                return Err(format!("equality row {i} violated"));
            }
        }
        let mut combo = vec![Rational::zero(); n];
        let rows = problem.ineqs.iter().zip(&self.ineq_duals);
        for (row, y) in rows.chain(problem.eqs.iter().zip(&self.eq_duals)) {
            if y.is_zero() {
                continue;
            }
            for (c, a) in combo.iter_mut().zip(&row.coeffs) {
                if !a.is_zero() {
                    *c += y * a;
                }
            }
        }
        if combo != problem.objective {
            return Err("multipliers do not reproduce the objective".into());
        }
        let primal = dot(&problem.objective, &self.point);
        if primal != self.value {
            return Err("reported value differs from objective at point".into());
        }
        let dual = problem
            .ineqs
            .iter()
            .zip(&self.ineq_duals)
            .chain(problem.eqs.iter().zip(&self.eq_duals))
            .fold(Rational::zero(), |acc, (row, y)| acc + &row.rhs * y);
        if dual != primal {
            return Err("primal and dual objective values differ".into());
        }
        Ok(())
    }
}

/// Feasibility of `{a·x ≤ b} ∩ {a·x = b}`; returns an exactly feasible witness.
pub fn feasible(
    num_vars: usize,
    ineqs: Vec<Constraint>,
    eqs: Vec<Constraint>,
) -> Result<Option<Vec<Rational>>> {
    let problem = LpProblem {
        num_vars,
        objective: vec![Rational::zero(); num_vars],
        ineqs,
        eqs,
    };
    Ok(problem.solve()?.optimal().map(|s| s.point))
}
