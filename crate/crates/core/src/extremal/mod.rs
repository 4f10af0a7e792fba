//! The convex extremal function
//! `Φ_{S,U} = sup{φ convex on U : φ ≤ 1, φ|_S ≤ 0}`, evaluated pointwise.
//!
//! Two independent LPs compute it:
//!
//! * the *competitor* form maximizes `ℓ(x)` over affine `ℓ = c·y + d` with
//!   `ℓ ≤ 0` on the vertices of `S`, `ℓ ≤ 1` on the vertices of `U` and
//!   `c_j ≥ 0` for every recession direction `-e_j` of `U`;
//! * the *gauge* form minimizes `t` with `x ∈ (1-t) conv S + t U`.
//!
//! They are LP duals of each other, so exact equality of the two values is a
//! certificate for every evaluation. Points must lie in the interior of `U`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_traits::{One, Signed, Zero};

use crate::error::check_dim;
use crate::linalg::dot;
use crate::polytope::{hull_of_union, unit, Cell, VData};
use crate::random::{shrink_vdata, Sampler};
use crate::ratlp::{LpOutcome, LpProblem};
use crate::{Error, Rational, Result};

/// Affine function `linear · x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCompetitor {
    pub linear: Vec<Rational>,
    pub constant: Rational,
}

impl AffineCompetitor {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.linear, x) + &self.constant
    }
}

/// A pair `S ⊆ U` of closed convex sets given by generators.
#[derive(Clone, Debug)]
pub struct ExtremalProblem {
    s_cells: Vec<Cell>,
    u_cell: Option<Cell>,
    s: VData,
    u: VData,
}

impl ExtremalProblem {
    /// `S` is the hull of the union of `s`; `U` is a single cell.
    pub fn new(s: Vec<Cell>, u: Cell) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::input("S must contain at least one cell"));
        }
        let s_v = hull_of_union(&s)?;
        let mut p = Self::with_cell_domain(s_v, u)?;
        p.s_cells = s;
        Ok(p)
    }

    /// `S` given by generators (possibly lower-dimensional, e.g. a point).
    pub fn with_cell_domain(s: VData, u: Cell) -> Result<Self> {
        check_dim(u.dim(), s.dim())?;
        if s.vertices().is_empty() {
            return Err(Error::input("S must be nonempty"));
        }
        if s.rays().iter().any(|r| !u.ext().contains(r)) {
            return Err(Error::input("extension mask of S must be contained in that of U"));
        }
        for v in s.vertices() {
            if !u.contains(v)? {
                return Err(Error::input("S is not contained in U"));
            }
        }
        Ok(Self {
            s_cells: Vec::new(),
            u: u.vdata(),
            u_cell: Some(u),
            s,
        })
    }

    /// Both sets given by generators; `U` must be full-dimensional.
    pub fn from_vdata(s: VData, u: VData) -> Result<Self> {
        check_dim(u.dim(), s.dim())?;
        if s.vertices().is_empty() || u.vertices().is_empty() {
            return Err(Error::input("S and U must be nonempty"));
        }
        if !u.is_full_dimensional() {
            return Err(Error::input("U is not full-dimensional"));
        }
        if s.rays().iter().any(|r| !u.rays().contains(r)) {
            return Err(Error::input("recession rays of S must be rays of U"));
        }
        for v in s.vertices() {
            if !u.contains(v)? {
                return Err(Error::input("S is not contained in U"));
            }
        }
        Ok(Self {
            s_cells: Vec::new(),
            u_cell: None,
            s,
            u,
        })
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn s_cells(&self) -> &[Cell] {
        &self.s_cells
    }

    pub fn u_cell(&self) -> Option<&Cell> {
        self.u_cell.as_ref()
    }

    pub fn s_vdata(&self) -> &VData {
        &self.s
    }

    pub fn u_vdata(&self) -> &VData {
        &self.u
    }

    /// Whether `x` lies in the interior of `U`.
    pub fn is_interior(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        match &self.u_cell {
            Some(c) => c.contains_interior(x),
            None => self.u.contains_interior(x),
        }
    }

    fn require_interior(&self, x: &[Rational]) -> Result<()> {
        if self.is_interior(x)? {
            Ok(())
        } else {
            Err(Error::domain("evaluation point is not interior to U"))
        }
    }

    /// Competitor form: value and an affine function attaining it.
    pub fn phi_dual(&self, x: &[Rational]) -> Result<(Rational, AffineCompetitor)> {
        self.require_interior(x)?;
        self.competitor_lp(x)
    }

    /// Gauge form: `min { t : x ∈ (1-t) conv S + t U }`.
    pub fn phi_gauge(&self, x: &[Rational]) -> Result<Rational> {
        self.require_interior(x)?;
        self.gauge_lp(x)
    }

    /// Competitor value, checked for exact equality against the gauge value.
    pub fn phi(&self, x: &[Rational]) -> Result<Rational> {
        self.require_interior(x)?;
        self.phi_unchecked(x)
    }

    /// [`Self::phi`] without the interior test; the caller guarantees the domain.
    pub(crate) fn phi_unchecked(&self, x: &[Rational]) -> Result<Rational> {
        let (dual, _) = self.competitor_lp(x)?;
        let gauge = self.gauge_lp(x)?;
        if dual != gauge {
            return Err(Error::invariant(format!(
                "competitor value {dual} differs from gauge value {gauge}"
            )));
        }
        Ok(dual)
    }

    fn competitor_lp(&self, x: &[Rational]) -> Result<(Rational, AffineCompetitor)> {
        let n = self.dim();
        let mut obj = x.to_vec();
        obj.push(Rational::one());
        let mut lp = LpProblem::new(n + 1).maximize(obj);
        for v in self.s.vertices() {
            let mut a = v.clone();
            a.push(Rational::one());
            lp.add_le(a, Rational::zero());
        }
        for w in self.u.vertices() {
            let mut a = w.clone();
            a.push(Rational::one());
            lp.add_le(a, Rational::one());
        }
        for &j in self.u.rays() {
            lp.add_nonneg(j);
        }
        match lp.solve()? {
            LpOutcome::Optimal(mut sol) => {
                let constant = sol.point.pop().unwrap();
                let witness = AffineCompetitor {
                    linear: sol.point,
                    constant,
                };
                Ok((sol.value, witness))
            }
            other => Err(Error::invariant(format!(
                "competitor LP is {:?} at an interior point",
                other.status()
            ))),
        }
    }

    fn gauge_lp(&self, x: &[Rational]) -> Result<Rational> {
        let (sv, uv, rays) = (self.s.vertices(), self.u.vertices(), self.u.rays());
        let (ns, nu) = (sv.len(), uv.len());
        let nv = ns + nu + rays.len();
        let mut obj = vec![Rational::zero(); nv];
        for o in &mut obj[ns..ns + nu] {
            *o = -Rational::one();
        }
        let mut lp = LpProblem::new(nv).maximize(obj);
        for c in 0..self.dim() {
            let mut a = vec![Rational::zero(); nv];
            for (i, v) in sv.iter().enumerate() {
                a[i] = v[c].clone();
            }
            for (i, w) in uv.iter().enumerate() {
                a[ns + i] = w[c].clone();
            }
            if let Some(k) = rays.iter().position(|&r| r == c) {
                a[ns + nu + k] = -Rational::one();
            }
            lp.add_eq(a, x[c].clone());
        }
        let mut sum = vec![Rational::zero(); nv];
        for s in &mut sum[..ns + nu] {
            *s = Rational::one();
        }
        lp.add_eq(sum, Rational::one());
        for j in 0..nv {
            lp.add_nonneg(j);
        }
        match lp.solve()? {
            LpOutcome::Optimal(sol) => Ok(-sol.value),
            other => Err(Error::invariant(format!(
                "gauge LP is {:?} at an interior point",
                other.status()
            ))),
        }
    }

    /// Same `U`, with `S` reduced to the extreme points of its hull.
    pub fn with_reduced_s(&self) -> Result<Self> {
        let mut p = self.clone();
        p.s = self.s.reduced()?;
        Ok(p)
    }

    /// Generators of the closure of `U_μ = {Φ < μ}`: all `(1-μ)v + μw` with `v`
    /// an extreme point of `conv S` and `w` a vertex of `U`; rays of `U`.
    pub fn sublevel_vdata(&self, mu: &Rational) -> Result<VData> {
        if !mu.is_positive() || *mu >= Rational::one() {
            return Err(Error::input("sublevel height must lie strictly between 0 and 1"));
        }
        let keep = Rational::one() - mu;
        let s = self.s.reduced()?;
        let mut pts = Vec::with_capacity(s.vertices().len() * self.u.vertices().len());
        for v in s.vertices() {
            for w in self.u.vertices() {
                pts.push(
                    v.iter()
                        .zip(w)
                        .map(|(a, b)| &keep * a + mu * b)
                        .collect::<Vec<_>>(),
                );
            }
        }
        pts.sort();
        pts.dedup();
        VData::new(self.dim(), pts, self.u.rays().to_vec())
    }

    /// The problem `(S, U_μ)`.
    pub fn sublevel_problem(&self, mu: &Rational) -> Result<Self> {
        let u = self.sublevel_vdata(mu)?.reduced()?;
        Self::from_vdata(self.s.clone(), u)
    }

    /// Largest `r` with `Φ(from + r·dir) ≤ level`, or `None` if the sublevel
    /// set is unbounded in that direction. The resulting point has `Φ = level`
    /// whenever it is interior to `U`.
    pub fn level_crossing(
        &self,
        from: &[Rational],
        dir: &[Rational],
        level: &Rational,
    ) -> Result<Option<Rational>> {
        let gens = self.sublevel_vdata(level)?;
        let (verts, rays) = (gens.vertices(), gens.rays());
        let (m, k) = (verts.len(), rays.len());
        let nv = m + k + 1;
        let mut lp = LpProblem::new(nv).maximize(unit(nv, m + k));
        for c in 0..self.dim() {
            let mut a = vec![Rational::zero(); nv];
            for (i, v) in verts.iter().enumerate() {
                a[i] = v[c].clone();
            }
            if let Some(p) = rays.iter().position(|&r| r == c) {
                a[m + p] = -Rational::one();
            }
            a[m + k] = -dir[c].clone();
            lp.add_eq(a, from[c].clone());
        }
        let mut sum = vec![Rational::zero(); nv];
        for s in &mut sum[..m] {
            *s = Rational::one();
        }
        lp.add_eq(sum, Rational::one());
        for j in 0..m + k {
            lp.add_nonneg(j);
        }
        Ok(match lp.solve()? {
            LpOutcome::Optimal(sol) => Some(sol.value),
            _ => None,
        })
    }

    /// Nested chain `(S_k, U_k)` increasing to `(S, U)`: both sets shrunk toward
    /// the barycenter of `S` by the given factors (each in `(0, 1]`,
    /// increasing, with `inner[k] ≤ outer[k]`).
    pub fn shrunk_chain(&self, inner: &[Rational], outer: &[Rational]) -> Result<Vec<Self>> {
        check_dim(inner.len(), outer.len())?;
        let center = self.s.barycenter();
        inner
            .iter()
            .zip(outer)
            .map(|(h, g)| {
                Self::from_vdata(
                    shrink_vdata(&self.s, &center, h)?,
                    shrink_vdata(&self.u, &center, g)?,
                )
            })
            .collect()
    }
}

/// Outcome of one property over a batch of points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyCheck {
    pub checked: usize,
    /// Points outside the domain of the property; flagged, not failures.
    pub skipped: usize,
    pub counterexample: Option<Counterexample>,
}

impl PropertyCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn fail(&mut self, point: &[Rational], detail: String) {
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                point: point.to_vec(),
                detail,
            });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub point: Vec<Rational>,
    pub detail: String,
}

/// Range, hull invariance, sublevel rescaling and monotone exhaustion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Remark22Report {
    pub range: PropertyCheck,
    pub hull_invariance: PropertyCheck,
    pub rescaling: PropertyCheck,
    pub monotone: PropertyCheck,
}

impl Remark22Report {
    pub fn passed(&self) -> bool {
        self.range.passed()
            && self.hull_invariance.passed()
            && self.rescaling.passed()
            && self.monotone.passed()
    }
}

/// Checks the structural properties of `Φ_{S,U}` on the given samples.
///
/// * range: `0 ≤ Φ < 1` on interior samples and `Φ = 0` on interior vertices of `S`;
/// * hull invariance: raw generators of `S` and the extreme points of `conv S`
///   give the same values;
/// * rescaling: `μ·Φ_{S,U_μ} = Φ_{S,U}` on samples interior to `U_μ`;
/// * monotone: along the nested `chain` (ending inside `(S, U)`) values are
///   non-increasing and bounded below by `Φ_{S,U}`.
pub fn verify_remark22(
    prob: &ExtremalProblem,
    mu: &Rational,
    samples: &[Vec<Rational>],
    chain: &[ExtremalProblem],
) -> Result<Remark22Report> {
    let mut report = Remark22Report::default();
    let reduced = prob.with_reduced_s()?;
    let sub = prob.sublevel_problem(mu)?;
    check_chain(prob, chain)?;

    for v in reduced.s_vdata().vertices() {
        if !prob.is_interior(v)? {
            continue;
        }
        report.range.checked += 1;
        let val = prob.phi_unchecked(v)?;
        if !val.is_zero() {
            report.range.fail(v, format!("Φ = {val} at a point of S"));
        }
    }

    for x in samples {
        if !prob.is_interior(x)? {
            report.range.skipped += 1;
            report.hull_invariance.skipped += 1;
            report.rescaling.skipped += 1;
            report.monotone.skipped += 1;
            continue;
        }
        let val = prob.phi_unchecked(x)?;

        report.range.checked += 1;
        if val.is_negative() || val >= Rational::one() {
            report.range.fail(x, format!("Φ = {val} outside [0, 1)"));
        }

        report.hull_invariance.checked += 1;
        let hull_val = reduced.phi_unchecked(x)?;
        if hull_val != val {
            report
                .hull_invariance
                .fail(x, format!("raw S gives {val}, hull vertices give {hull_val}"));
        }

        if sub.is_interior(x)? {
            report.rescaling.checked += 1;
            let scaled = mu * sub.phi_unchecked(x)?;
            if scaled != val {
                report
                    .rescaling
                    .fail(x, format!("μ·Φ_(S,U_μ) = {scaled} but Φ_(S,U) = {val}"));
            }
        } else {
            report.rescaling.skipped += 1;
        }

        match chain.first() {
            Some(first) if first.is_interior(x)? => {
                report.monotone.checked += 1;
                let mut prev: Option<Rational> = None;
                for (k, p) in chain.iter().enumerate() {
                    let vk = p.phi_unchecked(x)?;
                    if vk < val {
                        report
                            .monotone
                            .fail(x, format!("chain value {vk} at step {k} below limit {val}"));
                    }
                    if let Some(prev) = &prev {
                        if vk > *prev {
                            report
                                .monotone
                                .fail(x, format!("chain value increases at step {k}"));
                        }
                    }
                    prev = Some(vk);
                }
            }
            Some(_) => report.monotone.skipped += 1,
            None => {}
        }
    }
    Ok(report)
}

fn check_chain(limit: &ExtremalProblem, chain: &[ExtremalProblem]) -> Result<()> {
    let subset = |a: &VData, b: &VData| -> Result<bool> {
        if a.rays().iter().any(|r| !b.rays().contains(r)) {
            return Ok(false);
        }
        for v in a.vertices() {
            if !b.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut steps: Vec<&ExtremalProblem> = chain.iter().collect();
    steps.push(limit);
    for pair in steps.windows(2) {
        if !subset(pair[0].s_vdata(), pair[1].s_vdata())?
            || !subset(pair[0].u_vdata(), pair[1].u_vdata())?
        {
            return Err(Error::input("exhaustion chain is not nested"));
        }
    }
    Ok(())
}

/// Seeded run of [`verify_remark22`]: random `μ = k/8`, a 3-step shrinking
/// chain, and samples drawn from the interiors of `U`, `U_μ` and the first
/// chain domain.
pub fn remark22_campaign(
    prob: &ExtremalProblem,
    num_samples: usize,
    seed: u64,
) -> Result<(Rational, Remark22Report)> {
    let mut rng = Sampler::new(seed);
    let mu = Rational::new(rng.int(1, 7).into(), 8.into());
    let sub = prob.sublevel_vdata(&mu)?;
    let frac = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let chain = prob.shrunk_chain(
        &[frac(1, 2), frac(3, 4), frac(7, 8)],
        &[frac(3, 4), frac(7, 8), frac(15, 16)],
    )?;
    let mut samples = Vec::with_capacity(num_samples);
    for i in 0..num_samples {
        let from = match i % 3 {
            0 => prob.u_vdata(),
            1 => &sub,
            _ => chain[0].u_vdata(),
        };
        samples.push(rng.hull_point(from));
    }
    Ok((mu.clone(), verify_remark22(prob, &mu, &samples, &chain)?))
}
