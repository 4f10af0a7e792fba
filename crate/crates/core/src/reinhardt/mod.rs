//! Reinhardt domains through their log-images.
//!
//! A [`ReinhardtDomain`] is a union of cells in log-space (`x_j = log|z_j|`)
//! together with one flag per coordinate telling whether the domain meets the
//! axis `{z_j = 0}`. A recession ray `-e_j` of a cell lets `|z_j|` shrink to
//! zero; the flag decides whether the limit points on the axis belong to the
//! domain. Points are [`LogPoint`]s whose coordinates may be `-∞` (`z_j = 0`).

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::cross::{CrossFactor, CrossSpec, Prop24Report, WClass};
use crate::error::check_dim;
use crate::extremal::{Counterexample, ExtremalProblem};
use crate::polytope::{facets, hull_of_union, Cell, HPolytope, Halfspace, VData};
use crate::random::Sampler;
use crate::ratlp::{feasible, Constraint, LpOutcome, LpProblem};
use crate::{Error, Rational, Result};

/// Default truncation level `M` for log-images: boxes start at `-M`.
pub const DEFAULT_TRUNCATION: i64 = 64;

/// `log|z_j|`, or `-∞` when `z_j = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogCoord {
    NegInf,
    Finite(Rational),
}

impl fmt::Display for LogCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => f.write_str("-inf"),
            Self::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogPoint(pub Vec<LogCoord>);

impl LogPoint {
    pub fn finite(coords: &[Rational]) -> Self {
        Self(coords.iter().cloned().map(LogCoord::Finite).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinates equal to `-∞`.
    pub fn axes(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&j| self.0[j] == LogCoord::NegInf)
            .collect()
    }

    /// All coordinates, if none is `-∞`.
    pub fn to_finite(&self) -> Option<Vec<Rational>> {
        self.0
            .iter()
            .map(|c| match c {
                LogCoord::Finite(v) => Some(v.clone()),
                LogCoord::NegInf => None,
            })
            .collect()
    }
}

/// Union of log-space cells plus axis-contact flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReinhardtDomain {
    n: usize,
    cells: Vec<Cell>,
    axis_meets: Vec<bool>,
}

impl ReinhardtDomain {
    pub fn new(n: usize, cells: Vec<Cell>, axis_meets: Vec<bool>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::input("a domain needs at least one cell"));
        }
        for c in &cells {
            check_dim(n, c.dim())?;
        }
        check_dim(n, axis_meets.len())?;
        for (j, &meets) in axis_meets.iter().enumerate() {
            if meets && !cells.iter().any(|c| c.ext().contains(&j)) {
                return Err(Error::input(format!(
                    "axis {} is flagged as met but no cell recedes along it",
                    j + 1
                )));
            }
        }
        Ok(Self {
            n,
            cells,
            axis_meets,
        })
    }

    /// Polydisc `{|z_j| < r_j}` truncated to `[-M, log r_j]` per coordinate.
    pub fn polydisc(log_radii: &[Rational], truncation: &Rational) -> Result<Self> {
        let n = log_radii.len();
        let lo = vec![-truncation.clone(); n];
        if log_radii.iter().any(|r| *r <= -truncation.clone()) {
            return Err(Error::input("truncation level must lie below every log-radius"));
        }
        let cell = Cell::new(HPolytope::from_box(&lo, log_radii)?, (0..n).collect())?;
        Self::new(n, vec![cell], vec![true; n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn axis_meets(&self) -> &[bool] {
        &self.axis_meets
    }

    /// Generators of the closed hull of the log-image.
    pub fn log_hull(&self) -> Result<VData> {
        hull_of_union(&self.cells)
    }

    /// Membership in the closed cell union; an `-∞` coordinate `j` requires
    /// the flag for `j` and a cell receding along `-e_j` that reaches the
    /// finite coordinates.
    pub fn contains_point(&self, p: &LogPoint) -> Result<bool> {
        check_dim(self.n, p.dim())?;
        let axes = p.axes();
        if axes.iter().any(|&j| !self.axis_meets[j]) {
            return Ok(false);
        }
        if axes.is_empty() {
            let x = p.to_finite().unwrap();
            for c in &self.cells {
                if c.contains(&x)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        for c in &self.cells {
            if axes.iter().all(|j| c.ext().contains(j)) && reaches(c, p, &axes)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Decides whether the cell union is convex.
    ///
    /// A single cell is convex. In dimension at most 2 the answer is exact;
    /// beyond that, random midpoints are tested (see [`Self::is_log_convex_sampled`]).
    pub fn is_log_convex(&self) -> Result<LogConvexity> {
        self.is_log_convex_sampled(256, 0)
    }

    /// As [`Self::is_log_convex`], with the sample budget and seed used in dimension 3 and up.
    pub fn is_log_convex_sampled(&self, samples: usize, seed: u64) -> Result<LogConvexity> {
        if self.cells.len() == 1 {
            return Ok(LogConvexity::True);
        }
        if let Some(w) = self.vertex_midpoint_witness()? {
            return Ok(LogConvexity::False(w));
        }
        if self.n <= 2 {
            return Ok(match self.exact_gap_witness()? {
                Some(w) => LogConvexity::False(w),
                None => LogConvexity::True,
            });
        }
        let mut rng = Sampler::new(seed);
        let gens: Vec<VData> = self.cells.iter().map(Cell::vdata).collect();
        for _ in 0..samples {
            let (i, j) = (rng.index(gens.len()), rng.index(gens.len()));
            let a = rng.hull_point(&gens[i]);
            let b = rng.hull_point(&gens[j]);
            let mid: Vec<Rational> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x + y) / Rational::from_integer(2.into()))
                .collect();
            if !self.union_contains(&mid)? {
                return Ok(LogConvexity::False(mid));
            }
        }
        Ok(LogConvexity::Unfalsified { samples })
    }

    fn union_contains(&self, x: &[Rational]) -> Result<bool> {
        for c in &self.cells {
            if c.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// First midpoint of two cell vertices (in sorted order) outside the union.
    fn vertex_midpoint_witness(&self) -> Result<Option<Vec<Rational>>> {
        let mut verts: Vec<Vec<Rational>> = self
            .cells
            .iter()
            .flat_map(|c| c.vdata().vertices().to_vec())
            .collect();
        verts.sort();
        verts.dedup();
        let two = Rational::from_integer(2.into());
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let mid: Vec<Rational> = verts[i]
                    .iter()
                    .zip(&verts[j])
                    .map(|(a, b)| (a + b) / &two)
                    .collect();
                if !self.union_contains(&mid)? {
                    return Ok(Some(mid));
                }
            }
        }
        Ok(None)
    }

    /// A point of the hull violating one half-space of every cell, if any.
    ///
    /// The difference `hull \ union` is relatively open in the hull, so it is
    /// nonempty exactly when, for some choice of one half-space per cell, the
    /// hull contains a point strictly beyond all chosen half-spaces.
    fn exact_gap_witness(&self) -> Result<Option<Vec<Rational>>> {
        let hull = self.log_hull()?;
        let rows: Vec<Vec<Halfspace>> = self
            .cells
            .iter()
            .map(Cell::halfspaces)
            .collect::<Result<_>>()?;
        let mut chosen = Vec::with_capacity(rows.len());
        gap_search(&hull, &rows, &mut chosen)
    }
}

/// Whether some point with the finite coordinates of `p` and arbitrary values
/// on `axes` lies in `cell`.
fn reaches(cell: &Cell, p: &LogPoint, axes: &[usize]) -> Result<bool> {
    let mut ineqs = Vec::new();
    for h in cell.halfspaces()? {
        let mut rhs = h.offset.clone();
        for (j, c) in p.0.iter().enumerate() {
            if let LogCoord::Finite(v) = c {
                rhs -= &h.normal[j] * v;
            }
        }
        let coeffs = axes.iter().map(|&j| h.normal[j].clone()).collect();
        ineqs.push(Constraint::new(coeffs, rhs));
    }
    Ok(feasible(axes.len(), ineqs, Vec::new())?.is_some())
}

fn gap_search(
    hull: &VData,
    rows: &[Vec<Halfspace>],
    chosen: &mut Vec<Halfspace>,
) -> Result<Option<Vec<Rational>>> {
    let found = strict_violation(hull, chosen)?;
    let Some(point) = found else {
        return Ok(None);
    };
    let k = chosen.len();
    if k == rows.len() {
        return Ok(Some(point));
    }
    for h in &rows[k] {
        chosen.push(h.clone());
        let r = gap_search(hull, rows, chosen)?;
        chosen.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

/// A point `p` of the hull with `a·p ≥ b + ε` for all chosen rows and
/// maximal `ε ∈ (0, 1]`, or `None` when no positive `ε` is possible.
fn strict_violation(hull: &VData, chosen: &[Halfspace]) -> Result<Option<Vec<Rational>>> {
    let n = hull.dim();
    let (verts, rays) = (hull.vertices(), hull.rays());
    let (m, k) = (verts.len(), rays.len());
    // [p (n), λ (m), s (k), ε]
    let nv = n + m + k + 1;
    let eps = nv - 1;
    let mut obj = vec![Rational::zero(); nv];
    obj[eps] = Rational::one();
    let mut lp = LpProblem::new(nv).maximize(obj);
    for c in 0..n {
        let mut a = vec![Rational::zero(); nv];
        a[c] = -Rational::one();
        for (i, v) in verts.iter().enumerate() {
            a[n + i] = v[c].clone();
        }
        if let Some(pos) = rays.iter().position(|&r| r == c) {
            a[n + m + pos] = -Rational::one();
        }
        lp.add_eq(a, Rational::zero());
    }
    let mut sum = vec![Rational::zero(); nv];
    for s in &mut sum[n..n + m] {
        *s = Rational::one();
    }
    lp.add_eq(sum, Rational::one());
    for j in n..n + m + k {
        lp.add_nonneg(j);
    }
    let mut cap = vec![Rational::zero(); nv];
    cap[eps] = Rational::one();
    lp.add_le(cap, Rational::one());
    for h in chosen {
        // b + ε - a·p ≤ 0
        let mut a = vec![Rational::zero(); nv];
        for (c, v) in h.normal.iter().enumerate() {
            a[c] = -v.clone();
        }
        a[eps] = Rational::one();
        lp.add_le(a, -h.offset.clone());
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal(sol) if sol.value.is_positive() => Some(sol.point[..n].to_vec()),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogConvexity {
    True,
    /// A point of the hull of the log-image outside the log-image.
    False(Vec<Rational>),
    /// No counterexample among this many random midpoints.
    Unfalsified { samples: usize },
}

/// Why a domain fails the domain-of-holomorphy test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DohFailure {
    NotLogConvex { witness: Vec<Rational> },
    /// The axis is flagged as met but the log-image does not recede along it.
    AxisFlag { axis: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DohVerdict {
    Holds,
    Fails(DohFailure),
    Inconclusive { samples: usize },
}

impl ReinhardtDomain {
    /// Domain-of-holomorphy test: the log-image is convex, and every axis
    /// the domain meets is met along the whole log-image (`-e_j` is a
    /// recession direction). An axis that is not met may still be
    /// approached; such a domain is the log-convex completion with that axis
    /// removed, which is again a domain of holomorphy.
    pub fn is_doh(&self) -> Result<DohVerdict> {
        match self.is_log_convex()? {
            LogConvexity::False(witness) => {
                return Ok(DohVerdict::Fails(DohFailure::NotLogConvex { witness }))
            }
            LogConvexity::Unfalsified { samples } => return Ok(DohVerdict::Inconclusive { samples }),
            LogConvexity::True => {}
        }
        let hull = self.log_hull()?;
        for (axis, &meets) in self.axis_meets.iter().enumerate() {
            if meets && !hull.rays().contains(&axis) {
                return Ok(DohVerdict::Fails(DohFailure::AxisFlag { axis }));
            }
        }
        Ok(DohVerdict::Holds)
    }

    /// Log-image of the envelope of holomorphy: the convex hull of the
    /// log-image, with the same axis flags.
    pub fn envelope(&self) -> Result<EnvelopeResult> {
        let raw = self.log_hull()?;
        let hrep = if self.n <= 3 {
            let bounded = VData::new(self.n, raw.vertices().to_vec(), vec![])?;
            Some(facets(&bounded.reduced()?)?)
        } else {
            None
        };
        let hull = raw.reduced()?;
        let env = EnvelopeResult {
            hull,
            axis_meets: self.axis_meets.clone(),
            hrep,
        };
        if env.hrep.is_some() && env.to_domain()?.is_doh()? != DohVerdict::Holds {
            return Err(Error::invariant("envelope is not a domain of holomorphy"));
        }
        Ok(env)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeResult {
    /// Extreme points and recession rays of the convex hull of the log-image.
    pub hull: VData,
    pub axis_meets: Vec<bool>,
    /// Facets of the hull of all cell vertices (the truncated envelope; adding
    /// the rays of `hull` gives the whole log-image), in dimension at most 3.
    pub hrep: Option<HPolytope>,
}

impl EnvelopeResult {
    /// The envelope as a single-cell domain.
    pub fn to_domain(&self) -> Result<ReinhardtDomain> {
        let poly = self
            .hrep
            .clone()
            .ok_or_else(|| Error::unsupported("no H-representation above dimension 3"))?;
        let cell = Cell::new(poly, self.hull.rays().to_vec())?;
        ReinhardtDomain::new(self.hull.dim(), vec![cell], self.axis_meets.clone())
    }
}

/// `h*_{A,D} = Φ_{conv log A, conv log D} ∘ log` for a domain of holomorphy `D`.
#[derive(Clone, Debug)]
pub struct RelativeExtremal {
    problem: ExtremalProblem,
}

impl RelativeExtremal {
    pub fn new(a: &ReinhardtDomain, d: &ReinhardtDomain) -> Result<Self> {
        check_dim(d.dim(), a.dim())?;
        match d.is_doh()? {
            DohVerdict::Holds => {}
            DohVerdict::Fails(f) => {
                return Err(Error::input(format!("D is not a domain of holomorphy: {f:?}")))
            }
            DohVerdict::Inconclusive { .. } => {
                return Err(Error::input("D could not be certified as a domain of holomorphy"))
            }
        }
        check_subdomain(a, d)?;
        let problem = ExtremalProblem::from_vdata(a.log_hull()?.reduced()?, d.log_hull()?.reduced()?)?;
        Ok(Self { problem })
    }

    pub fn problem(&self) -> &ExtremalProblem {
        &self.problem
    }

    pub fn eval(&self, p: &LogPoint) -> Result<Rational> {
        check_dim(self.problem.dim(), p.dim())?;
        let x = p
            .to_finite()
            .ok_or_else(|| Error::unsupported("h* is only evaluated off the coordinate axes"))?;
        self.problem.phi(&x)
    }
}

pub fn h_star(a: &ReinhardtDomain, d: &ReinhardtDomain, p: &LogPoint) -> Result<Rational> {
    RelativeExtremal::new(a, d)?.eval(p)
}

/// `A ⊆ D`: every cell vertex of `A` in `D`, rays of `A` among those of
/// `D`, and axis contact of `A` only where `D` has it.
fn check_subdomain(a: &ReinhardtDomain, d: &ReinhardtDomain) -> Result<()> {
    let d_hull = d.log_hull()?;
    for c in a.cells() {
        if c.ext().iter().any(|r| !d_hull.rays().contains(r)) {
            return Err(Error::input("A recedes along an axis where D does not"));
        }
        for v in c.vdata().vertices() {
            if !d.contains_point(&LogPoint::finite(v))? {
                return Err(Error::input("A is not contained in D"));
            }
        }
    }
    if a
        .axis_meets()
        .iter()
        .zip(d.axis_meets())
        .any(|(&am, &dm)| am && !dm)
    {
        return Err(Error::input("A meets an axis that D does not meet"));
    }
    Ok(())
}

/// `X = ⋃_j A_1 × ⋯ × D_j × ⋯ × A_N` for Reinhardt blocks `A_j ⊆ D_j`.
#[derive(Clone, Debug)]
pub struct ReinhardtCross {
    blocks: Vec<(ReinhardtDomain, ReinhardtDomain)>,
    offsets: Vec<usize>,
    hstar: Vec<RelativeExtremal>,
    spec: CrossSpec,
}

impl ReinhardtCross {
    pub fn new(blocks: Vec<(ReinhardtDomain, ReinhardtDomain)>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total = 0;
        let mut hstar = Vec::with_capacity(blocks.len());
        let mut factors = Vec::with_capacity(blocks.len());
        for (a, d) in &blocks {
            offsets.push(total);
            total += d.dim();
            hstar.push(RelativeExtremal::new(a, d)?);
            let u = match d.cells() {
                [one] => one.clone(),
                _ => d.envelope()?.to_domain()?.cells()[0].clone(),
            };
            factors.push(CrossFactor::new(a.cells().to_vec(), u)?);
        }
        let spec = CrossSpec::new(factors)?;
        Ok(Self {
            blocks,
            offsets,
            hstar,
            spec,
        })
    }

    pub fn blocks(&self) -> &[(ReinhardtDomain, ReinhardtDomain)] {
        &self.blocks
    }

    /// The cross of log-images.
    pub fn log_spec(&self) -> &CrossSpec {
        &self.spec
    }

    pub fn total_dim(&self) -> usize {
        self.spec.total_dim()
    }

    fn block(&self, p: &LogPoint, j: usize) -> LogPoint {
        let n = self.blocks[j].1.dim();
        LogPoint(p.0[self.offsets[j]..self.offsets[j] + n].to_vec())
    }

    /// `Σ_j h*_{A_j,D_j}(z_j)`.
    pub fn h_star_sum(&self, p: &LogPoint) -> Result<Rational> {
        check_dim(self.total_dim(), p.dim())?;
        let mut sum = Rational::zero();
        for (j, h) in self.hstar.iter().enumerate() {
            sum += h.eval(&self.block(p, j))?;
        }
        Ok(sum)
    }

    /// Membership in `X`, axis points included.
    pub fn contains_point(&self, p: &LogPoint) -> Result<bool> {
        check_dim(self.total_dim(), p.dim())?;
        let n = self.blocks.len();
        let mut in_a = Vec::with_capacity(n);
        for (j, (a, _)) in self.blocks.iter().enumerate() {
            in_a.push(a.contains_point(&self.block(p, j))?);
        }
        for (j, (_, d)) in self.blocks.iter().enumerate() {
            if (0..n).all(|k| k == j || in_a[k]) && d.contains_point(&self.block(p, j))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// For every axis met by some `D_j`: the point with an axis point of
    /// `D_j` in block `j` and cell barycenters of `A_k` elsewhere.
    pub fn axis_witnesses(&self) -> Result<Vec<AxisCheck>> {
        let mut out = Vec::new();
        for (j, (_, d)) in self.blocks.iter().enumerate() {
            for (axis, &meets) in d.axis_meets().iter().enumerate() {
                if !meets {
                    continue;
                }
                let cell = d
                    .cells()
                    .iter()
                    .find(|c| c.ext().contains(&axis))
                    .expect("flag implies a receding cell");
                let mut a_j = LogPoint::finite(&cell.vdata().barycenter());
                a_j.0[axis] = LogCoord::NegInf;
                let mut coords = Vec::with_capacity(self.total_dim());
                for (k, (a, _)) in self.blocks.iter().enumerate() {
                    if k == j {
                        coords.extend(a_j.0.iter().cloned());
                    } else {
                        let b = a.cells()[0].vdata().barycenter();
                        coords.extend(b.into_iter().map(LogCoord::Finite));
                    }
                }
                let witness = LogPoint(coords);
                let member = self.contains_point(&witness)?;
                out.push(AxisCheck {
                    block: j,
                    axis,
                    witness,
                    member,
                });
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisCheck {
    pub block: usize,
    /// Coordinate within the block.
    pub axis: usize,
    pub witness: LogPoint,
    pub member: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossEnvelopeReport {
    pub hull: Prop24Report,
    /// Samples where `Σ h*` was compared with the log-space classification.
    pub h_star_checked: usize,
    pub axis_checks: Vec<AxisCheck>,
}

impl CrossEnvelopeReport {
    pub fn passed(&self) -> bool {
        self.hull.passed() && self.axis_checks.iter().all(|a| a.member)
    }
}

/// Seeded check of the envelope of a Reinhardt cross: the convex cross
/// theorem on the log-images, agreement of `Σ h*` with the log-space
/// classification (`Σ h* < 1` exactly on the interior of the hull), and
/// axis witnesses.
pub fn cross_envelope_verify(
    x: &ReinhardtCross,
    num_samples: usize,
    seed: u64,
) -> Result<CrossEnvelopeReport> {
    let mut rng = Sampler::new(seed);
    let spec = x.log_spec();
    let pts = spec.sample_points(&mut rng, num_samples)?;
    let mut report = CrossEnvelopeReport::default();
    for p in &pts {
        let Some(t) = report.hull.check_sample(spec, p)? else {
            continue;
        };
        let sum = x.h_star_sum(&LogPoint::finite(p))?;
        report.h_star_checked += 1;
        let mut problems: Vec<String> = Vec::new();
        if sum != t.phi_sum {
            problems.push(format!("Σ h* = {sum} but Σ Φ = {}", t.phi_sum));
        }
        let below = sum < Rational::one();
        if below != (t.w_class == WClass::Inside) {
            problems.push(format!("Σ h* = {sum} but class {:?}", t.w_class));
        }
        let interior = spec.t_hull().contains_interior(p)?;
        if below != interior {
            problems.push(format!("Σ h* = {sum} but hull interior membership is {interior}"));
        }
        for detail in problems {
            report.hull.violations.push(Counterexample {
                point: p.clone(),
                detail,
            });
        }
    }
    report.axis_checks = x.axis_witnesses()?;
    Ok(report)
}
