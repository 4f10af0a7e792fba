//! Dense two-phase simplex over a fraction-free integer tableau.
//!
//! Every row is scaled to integers once; afterwards the tableau is stored as
//! integers over a single common denominator and pivots use exact integer
//! division (Bareiss), so no gcd is computed inside the main loop. Entering
//! columns follow the largest reduced cost; after a long run of degenerate
//! pivots the rule switches to Bland's, which cannot cycle.
//!
//! Rows of the form `-k·x_j ≤ 0` (k > 0) are absorbed as sign restrictions on
//! `x_j` instead of becoming tableau rows; their multipliers are recovered from
//! the dual equations afterwards. Remaining free variables are split into
//! positive and negative parts.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LpOutcome, LpProblem, LpSolution, Rational};
use crate::linalg::dot;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 32;

#[derive(Clone, Copy)]
enum VarCols {
    NonNeg(usize),
    Free(usize, usize),
}

struct Tableau {
    /// `m` rows of `ncols + 1` integers; the last entry is the right-hand side.
    /// Actual entries are these divided by `den`.
    rows: Vec<Vec<BigInt>>,
    /// `den · scale · (reduced costs..., -value)` for the current objective.
    obj: Vec<BigInt>,
    den: BigInt,
    basis: Vec<usize>,
    blocked: Vec<bool>,
    ncols: usize,
}

enum Run {
    Optimal,
    Unbounded,
}

impl Tableau {
    /// Installs integer costs `cost` (already scaled).
    fn set_objective(&mut self, cost: &[BigInt]) {
        let mut obj: Vec<BigInt> = cost.iter().map(|c| c * &self.den).collect();
        obj.push(BigInt::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row.iter()) {
                if !a.is_zero() {
                    *o -= cb * a;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, e: usize) {
        if self.rows[r][e].is_negative() {
            for v in self.rows[r].iter_mut() {
                *v = -&*v;
            }
        }
        let prow = core::mem::take(&mut self.rows[r]);
        let p = prow[e].clone();
        let support: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        let den = &self.den;
        let update = |row: &mut Vec<BigInt>| {
            let f = row[e].clone();
            if f.is_zero() {
                if !p.is_one() || !den.is_one() {
                    for v in row.iter_mut().filter(|v| !v.is_zero()) {
                        *v = &*v * &p / den;
                    }
                }
                return;
            }
            let mut touched = vec![false; row.len()];
            for &k in &support {
                touched[k] = true;
                row[k] = &row[k] * &p - &f * &prow[k];
            }
            for (k, v) in row.iter_mut().enumerate() {
                if touched[k] {
                    debug_assert!((&*v % den).is_zero());
                    *v = &*v / den;
                } else if !v.is_zero() {
                    *v = &*v * &p / den;
                }
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                update(row);
            }
        }
        update(&mut self.obj);
        self.den = p;
        self.rows[r] = prow;
        self.basis[r] = e;
    }

    fn run(&mut self) -> Run {
        let mut degenerate = 0;
        loop {
            let candidates = (0..self.ncols).filter(|&j| !self.blocked[j] && self.obj[j].is_positive());
            let entering = if degenerate < DEGENERATE_LIMIT {
                candidates.max_by(|&a, &b| self.obj[a].cmp(&self.obj[b]).then(b.cmp(&a)))
            } else {
                candidates.min()
            };
            let Some(e) = entering else {
                return Run::Optimal;
            };
            let rhs = self.ncols;
            let mut leave: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let best = &self.rows[l];
                        // row[rhs] / row[e] vs best[rhs] / best[e], both denominators positive
                        let lhs = &row[rhs] * &best[e];
                        let cur = &best[rhs] * &row[e];
                        lhs < cur || (lhs == cur && self.basis[i] < self.basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            match leave {
                Some(r) => {
                    if self.rows[r][rhs].is_zero() {
                        degenerate += 1;
                    } else if degenerate < DEGENERATE_LIMIT {
                        degenerate = 0;
                    }
                    self.pivot(r, e);
                }
                None => return Run::Unbounded,
            }
        }
    }
}

/// A row `-k·x_j ≤ 0` with `k > 0`.
fn sign_row(coeffs: &[Rational], rhs: &Rational) -> Option<(usize, Rational)> {
    if !rhs.is_zero() {
        return None;
    }
    let mut nz = coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
    let (j, a) = nz.next()?;
    if nz.next().is_some() || !a.is_negative() {
        return None;
    }
    Some((j, -a.clone()))
}

/// Least common multiple of the denominators.
fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(v: &Rational, s: &BigInt) -> BigInt {
    v.numer() * (s / v.denom())
}

pub(super) fn solve(p: &LpProblem) -> LpOutcome {
    let n = p.num_vars;

    // Sign restrictions absorbed into the variable domain: var -> (row, k).
    let mut absorbed: Vec<Option<(usize, Rational)>> = vec![None; n];
    let mut row_absorbed = vec![false; p.ineqs.len()];
    for (i, row) in p.ineqs.iter().enumerate() {
        if let Some((j, k)) = sign_row(&row.coeffs, &row.rhs) {
            if absorbed[j].is_none() {
                absorbed[j] = Some((i, k));
                row_absorbed[i] = true;
            }
        }
    }

    let mut var_cols = Vec::with_capacity(n);
    let mut ncols = 0;
    for slot in &absorbed {
        if slot.is_some() {
            var_cols.push(VarCols::NonNeg(ncols));
            ncols += 1;
        } else {
            var_cols.push(VarCols::Free(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let structural = ncols;

    // (original index, is_ineq)
    let kept: Vec<(usize, bool)> = (0..p.ineqs.len())
        .filter(|&i| !row_absorbed[i])
        .map(|i| (i, true))
        .chain((0..p.eqs.len()).map(|i| (i, false)))
        .collect();
    let m = kept.len();
    let num_slacks = kept.iter().filter(|(_, ineq)| *ineq).count();
    let slack_base = ncols;
    ncols += num_slacks;

    let mut sign = vec![true; m];
    let mut needs_art = vec![false; m];
    let mut slack_of = vec![None; m];
    let mut s = 0;
    for (r, &(i, ineq)) in kept.iter().enumerate() {
        let rhs = if ineq { &p.ineqs[i].rhs } else { &p.eqs[i].rhs };
        sign[r] = !rhs.is_negative();
        if ineq {
            slack_of[r] = Some(slack_base + s);
            s += 1;
        }
        needs_art[r] = !ineq || !sign[r];
    }
    let art_base = ncols;
    let num_art = needs_art.iter().filter(|&&a| a).count();
    ncols += num_art;

    // Row r of the tableau is `row_scale[r]` times the (sign-adjusted) source row;
    // the slack stands for the correspondingly scaled slack.
    let mut rows = Vec::with_capacity(m);
    let mut row_scale = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut init_col = Vec::with_capacity(m);
    let mut a = 0;
    for (r, &(i, ineq)) in kept.iter().enumerate() {
        let src = if ineq { &p.ineqs[i] } else { &p.eqs[i] };
        let mut scale = common_denominator(src.coeffs.iter().chain([&src.rhs]));
        if !sign[r] {
            scale = -scale;
        }
        let mut row = vec![BigInt::zero(); ncols + 1];
        for (j, coef) in src.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let c = scaled(coef, &scale);
            match var_cols[j] {
                VarCols::NonNeg(col) => row[col] = c,
                VarCols::Free(pos, neg) => {
                    row[neg] = -&c;
                    row[pos] = c;
                }
            }
        }
        if let Some(sc) = slack_of[r] {
            row[sc] = if sign[r] { BigInt::one() } else { -BigInt::one() };
        }
        row[ncols] = scaled(&src.rhs, &scale);
        if needs_art[r] {
            let col = art_base + a;
            a += 1;
            row[col] = BigInt::one();
            basis.push(col);
            init_col.push(col);
        } else {
            let sc = slack_of[r].unwrap();
            basis.push(sc);
            init_col.push(sc);
        }
        rows.push(row);
        row_scale.push(scale);
    }

    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        den: BigInt::one(),
        basis,
        blocked: vec![false; ncols],
        ncols,
    };

    if num_art > 0 {
        let mut cost = vec![BigInt::zero(); ncols];
        for c in cost.iter_mut().skip(art_base) {
            *c = -BigInt::one();
        }
        t.set_objective(&cost);
        // Phase one is bounded above by zero.
        let _ = t.run();
        // obj[rhs] = -den · value
        if t.obj[ncols].is_positive() {
            return LpOutcome::Infeasible;
        }
        for r in 0..m {
            if t.basis[r] < art_base {
                continue;
            }
            if let Some(e) = (0..art_base).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, e);
            }
        }
        for b in t.blocked.iter_mut().skip(art_base) {
            *b = true;
        }
    }

    let obj_scale = common_denominator(&p.objective);
    let mut cost = vec![BigInt::zero(); ncols];
    for (j, vc) in var_cols.iter().enumerate() {
        let c = scaled(&p.objective[j], &obj_scale);
        match *vc {
            VarCols::NonNeg(col) => cost[col] = c,
            VarCols::Free(pos, neg) => {
                cost[neg] = -&c;
                cost[pos] = c;
            }
        }
    }
    t.set_objective(&cost);
    if let Run::Unbounded = t.run() {
        return LpOutcome::Unbounded;
    }

    let mut col_val = vec![Rational::zero(); structural];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        if b < structural {
            col_val[b] = Rational::new(row[ncols].clone(), t.den.clone());
        }
    }
    let point: Vec<Rational> = var_cols
        .iter()
        .map(|vc| match *vc {
            VarCols::NonNeg(col) => col_val[col].clone(),
            VarCols::Free(pos, neg) => &col_val[pos] - &col_val[neg],
        })
        .collect();

    // Multiplier of tableau row r is -reduced[init_col[r]]; the source row's
    // multiplier is that times the row scale.
    let obj_den = &t.den * &obj_scale;
    let mut ineq_duals = vec![Rational::zero(); p.ineqs.len()];
    let mut eq_duals = vec![Rational::zero(); p.eqs.len()];
    for (r, &(i, ineq)) in kept.iter().enumerate() {
        let y = Rational::new(-&t.obj[init_col[r]] * &row_scale[r], obj_den.clone());
        if ineq {
            ineq_duals[i] = y;
        } else {
            eq_duals[i] = y;
        }
    }
    for (j, slot) in absorbed.iter().enumerate() {
        let Some((row, k)) = slot else { continue };
        let mut acc = -p.objective[j].clone();
        let ineqs = p.ineqs.iter().zip(&ineq_duals);
        for (c, y) in ineqs.chain(p.eqs.iter().zip(&eq_duals)) {
            if !y.is_zero() && !c.coeffs[j].is_zero() {
                acc += y * &c.coeffs[j];
            }
        }
        ineq_duals[*row] = acc / k;
    }

    LpOutcome::Optimal(LpSolution {
        value: dot(&p.objective, &point),
        point,
        ineq_duals,
        eq_duals,
    })
}
