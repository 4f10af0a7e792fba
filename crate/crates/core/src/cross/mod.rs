//! Crosses `T = ⋃_k T_k` with `T_k = S_1 × ⋯ × U_k × ⋯ × S_N`, the region
//! `W = {Σ_j Φ_{S_j,U_j}(x_j) < 1}` and closed-hull membership in `conv T`.
//!
//! Hull membership is decided twice, by unrelated LPs:
//!
//! 1. the *vertex-union* route: `x` is a convex combination of the vertices of
//!    all `T_k` (products of block vertices) plus recession rays;
//! 2. the *scaled-decomposition* route: `x = Σ_k y^k` with `Σ t_k = 1`,
//!    `t ≥ 0`, and every block of `y^k` in the `t_k`-dilate of its factor set
//!    (H-rows of the bounded part scaled by `t_k`, plus free ray coefficients).
//!
//! The two answers must agree exactly; a disagreement is reported as
//! [`Error::Invariant`].

use alloc::string::ToString;
use alloc::vec::Vec;
use alloc::{format, vec};

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::check_dim;
use crate::extremal::{Counterexample, ExtremalProblem};
use crate::polytope::{facets, Cell, Halfspace, VData};
use crate::random::Sampler;
use crate::ratlp::{feasible, Constraint};
use crate::{Error, Rational, Result};

/// One factor `S_j ⊆ U_j` of a cross.
#[derive(Clone, Debug)]
pub struct CrossFactor {
    extremal: ExtremalProblem,
    /// Extreme points and rays of `conv S`.
    s_hull: VData,
    /// Rows of the bounded part of `conv S` and of `U`.
    s_rows: Vec<Halfspace>,
    u_rows: Vec<Halfspace>,
}

impl CrossFactor {
    /// `S` is the hull of the union of `s`.
    pub fn new(s: Vec<Cell>, u: Cell) -> Result<Self> {
        Self::from_problem(ExtremalProblem::new(s, u)?)
    }

    /// Any extremal problem whose `S` is full-dimensional.
    ///
    /// Bounded parts given by a single cell use its rows directly; otherwise
    /// rows come from facet enumeration, so the dimension is limited to 3.
    pub fn from_problem(extremal: ExtremalProblem) -> Result<Self> {
        let s_v = extremal.s_vdata();
        if !s_v.is_full_dimensional() {
            return Err(Error::input("conv S of a cross factor must be full-dimensional"));
        }
        let s_rows = match extremal.s_cells() {
            [one] => one.poly().rows().to_vec(),
            _ => bounded_rows(s_v)?,
        };
        let u_rows = match extremal.u_cell() {
            Some(c) => c.poly().rows().to_vec(),
            None => bounded_rows(extremal.u_vdata())?,
        };
        let s_hull = s_v.reduced()?;
        Ok(Self {
            extremal,
            s_hull,
            s_rows,
            u_rows,
        })
    }

    pub fn dim(&self) -> usize {
        self.extremal.dim()
    }

    pub fn extremal(&self) -> &ExtremalProblem {
        &self.extremal
    }

    pub fn s_hull(&self) -> &VData {
        &self.s_hull
    }

    fn u_contains(&self, x: &[Rational]) -> Result<bool> {
        match self.extremal.u_cell() {
            Some(c) => c.contains(x),
            None => self.extremal.u_vdata().contains(x),
        }
    }
}

fn bounded_rows(v: &VData) -> Result<Vec<Halfspace>> {
    let pts = VData::new(v.dim(), v.vertices().to_vec(), vec![])?;
    Ok(facets(&pts.reduced()?)?.rows().to_vec())
}

/// Position of a point relative to `W`: `Σ Φ` below, at, or above 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WClass {
    Inside,
    Boundary,
    Outside,
}

impl WClass {
    pub fn of(phi_sum: &Rational) -> Self {
        match phi_sum.cmp(&Rational::one()) {
            core::cmp::Ordering::Less => Self::Inside,
            core::cmp::Ordering::Equal => Self::Boundary,
            core::cmp::Ordering::Greater => Self::Outside,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trichotomy {
    pub phi_sum: Rational,
    pub w_class: WClass,
    /// Membership in the closed hull of `T`.
    pub hull_member: bool,
}

impl Trichotomy {
    /// `Inside ⇒ member`, `Outside ⇒ not member`, `Boundary ⇒ member`.
    pub fn consistent(&self) -> bool {
        match self.w_class {
            WClass::Inside | WClass::Boundary => self.hull_member,
            WClass::Outside => !self.hull_member,
        }
    }
}

/// A cross of `N ≥ 2` factors.
#[derive(Clone, Debug)]
pub struct CrossSpec {
    factors: Vec<CrossFactor>,
    offsets: Vec<usize>,
    total_dim: usize,
    t_hull: VData,
    product: ExtremalProblem,
}

impl CrossSpec {
    pub fn new(factors: Vec<CrossFactor>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::input("a cross needs at least two factors"));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut total_dim = 0;
        for f in &factors {
            offsets.push(total_dim);
            total_dim += f.dim();
        }
        let probs: Vec<ExtremalProblem> = factors
            .iter()
            .map(|f| ExtremalProblem::from_vdata(f.s_hull.clone(), f.extremal.u_vdata().clone()))
            .collect::<Result<_>>()?;
        let t_hull = cross_vdata(&probs)?;
        let s_prod = product_vdata(&probs.iter().map(|p| p.s_vdata()).collect::<Vec<_>>())?;
        let product = ExtremalProblem::from_vdata(s_prod, t_hull.clone())?;
        Ok(Self {
            factors,
            offsets,
            total_dim,
            t_hull,
            product,
        })
    }

    pub fn factors(&self) -> &[CrossFactor] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Generators of the closed hull of `T`.
    pub fn t_hull(&self) -> &VData {
        &self.t_hull
    }

    /// `(S_1 × ⋯ × S_N, W)` with `W̄` given by the generators of the hull of `T`.
    pub fn product_problem(&self) -> &ExtremalProblem {
        &self.product
    }

    fn block<'a>(&self, x: &'a [Rational], j: usize) -> &'a [Rational] {
        &x[self.offsets[j]..self.offsets[j] + self.factors[j].dim()]
    }

    /// Whether `x ∈ T̄`: some block in `U_j`, every other block in `conv S_k`.
    pub fn cross_membership(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.total_dim, x.len())?;
        let mut in_s = Vec::with_capacity(self.factors.len());
        for (j, f) in self.factors.iter().enumerate() {
            in_s.push(f.s_hull.contains(self.block(x, j))?);
        }
        let outside = in_s.iter().filter(|b| !**b).count();
        match outside {
            0 => Ok(true),
            1 => {
                let j = in_s.iter().position(|b| !*b).unwrap();
                self.factors[j].u_contains(self.block(x, j))
            }
            _ => Ok(false),
        }
    }

    /// `Σ_j Φ_{S_j,U_j}(x_j)`.
    pub fn w_value(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.total_dim, x.len())?;
        let mut sum = Rational::zero();
        for (j, f) in self.factors.iter().enumerate() {
            sum += f.extremal.phi(self.block(x, j))?;
        }
        Ok(sum)
    }

    /// Closed-hull membership through the generators of `T`.
    pub fn hull_member_by_vertices(&self, x: &[Rational]) -> Result<bool> {
        self.t_hull.contains(x)
    }

    /// Closed-hull membership through the scaled decomposition
    /// `x ∈ Σ_k t_k T̄_k`.
    pub fn hull_member_by_decomposition(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.total_dim, x.len())?;
        let n = self.factors.len();
        let d = self.total_dim;
        // variables: t_k, then y^k (d each), then one coefficient per ray
        let rays: Vec<usize> = (0..n)
            .flat_map(|j| {
                let f = &self.factors[j];
                let off = self.offsets[j];
                f.extremal.u_vdata().rays().iter().map(move |r| off + r)
            })
            .collect();
        let y0 = n;
        let r0 = n + n * d;
        let nv = r0 + rays.len();
        let mut ineqs = Vec::new();
        for k in 0..n {
            for (j, f) in self.factors.iter().enumerate() {
                let rows = if j == k { &f.u_rows } else { &f.s_rows };
                for h in rows {
                    let mut a = vec![Rational::zero(); nv];
                    for (c, v) in h.normal.iter().enumerate() {
                        a[y0 + k * d + self.offsets[j] + c] = v.clone();
                    }
                    a[k] = -h.offset.clone();
                    ineqs.push(Constraint::new(a, Rational::zero()));
                }
            }
            let mut a = vec![Rational::zero(); nv];
            a[k] = -Rational::one();
            ineqs.push(Constraint::new(a, Rational::zero()));
        }
        for p in 0..rays.len() {
            let mut a = vec![Rational::zero(); nv];
            a[r0 + p] = -Rational::one();
            ineqs.push(Constraint::new(a, Rational::zero()));
        }
        let mut eqs = Vec::with_capacity(d + 1);
        for c in 0..d {
            let mut a = vec![Rational::zero(); nv];
            for k in 0..n {
                a[y0 + k * d + c] = Rational::one();
            }
            for (p, &r) in rays.iter().enumerate() {
                if r == c {
                    a[r0 + p] = -Rational::one();
                }
            }
            eqs.push(Constraint::new(a, x[c].clone()));
        }
        let mut a = vec![Rational::zero(); nv];
        for t in &mut a[..n] {
            *t = Rational::one();
        }
        eqs.push(Constraint::new(a, Rational::one()));
        Ok(feasible(nv, ineqs, eqs)?.is_some())
    }

    /// Exact position of `x` relative to `W` together with closed-hull
    /// membership decided by both routes.
    pub fn conv_cross_classify(&self, x: &[Rational]) -> Result<Trichotomy> {
        let phi_sum = self.w_value(x)?;
        let by_vertices = self.hull_member_by_vertices(x)?;
        let by_decomposition = self.hull_member_by_decomposition(x)?;
        if by_vertices != by_decomposition {
            return Err(Error::invariant(format!(
                "hull routes disagree: vertex union says {by_vertices}, decomposition says {by_decomposition}"
            )));
        }
        Ok(Trichotomy {
            w_class: WClass::of(&phi_sum),
            phi_sum,
            hull_member: by_vertices,
        })
    }

    /// `(Φ_{S_1×⋯×S_N, W}(x), Σ_j Φ_{S_j,U_j}(x_j))` for `x ∈ W`.
    pub fn product_phi_check(&self, x: &[Rational]) -> Result<(Rational, Rational)> {
        let rhs = self.w_value(x)?;
        if rhs >= Rational::one() {
            return Err(Error::domain("point is not interior to W"));
        }
        Ok((self.product.phi(x)?, rhs))
    }

    /// Random points of `Π U_j`, cycling through four sources: a grid point,
    /// a point near the level set `Σ Φ = 1` (total level `k/8`, `4 ≤ k ≤ 12`),
    /// a point of `T`, and a point exactly on the level set.
    pub fn sample_points(&self, rng: &mut Sampler, count: usize) -> Result<Vec<Vec<Rational>>> {
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let x = match i % 4 {
                0 => None,
                1 => {
                    let total = Rational::new(rng.int(4, 12).into(), 8.into());
                    self.level_point(rng, &total)?
                }
                2 => Some(self.cross_point(rng)),
                _ => self.level_point(rng, &Rational::one())?,
            };
            out.push(match x {
                Some(x) => x,
                None => self.grid_point(rng)?,
            });
        }
        Ok(out)
    }

    fn grid_point(&self, rng: &mut Sampler) -> Result<Vec<Rational>> {
        let mut x = Vec::with_capacity(self.total_dim);
        for f in &self.factors {
            x.extend(grid_block(f, rng)?);
        }
        Ok(x)
    }

    fn cross_point(&self, rng: &mut Sampler) -> Vec<Rational> {
        let k = rng.index(self.factors.len());
        let mut x = Vec::with_capacity(self.total_dim);
        for (j, f) in self.factors.iter().enumerate() {
            if j == k {
                x.extend(rng.hull_point(f.extremal.u_vdata()));
            } else {
                x.extend(rng.hull_point(&f.s_hull));
            }
        }
        x
    }

    /// A point with `Σ Φ = total`, split into random positive per-block
    /// levels; each block sits on the boundary of its sublevel set
    /// `(1 - μ) S_j + μ U_j`.
    fn level_point(&self, rng: &mut Sampler, total: &Rational) -> Result<Option<Vec<Rational>>> {
        let levels: Vec<Rational> = rng
            .weights(self.factors.len())
            .into_iter()
            .map(|w| w * total)
            .collect();
        // the level set of Φ_j at 1 is ∂U_j, outside the domain
        if levels.iter().any(|l| *l >= Rational::one()) {
            return Ok(None);
        }
        let mut x = Vec::with_capacity(self.total_dim);
        for (f, level) in self.factors.iter().zip(&levels) {
            match level_block(f, rng, level)? {
                Some(y) => x.extend(y),
                None => return Ok(None),
            }
        }
        Ok(Some(x))
    }
}

/// A point of `U` with `Φ = level`, reached along a random direction from a
/// random point of `S`.
fn level_block(f: &CrossFactor, rng: &mut Sampler, level: &Rational) -> Result<Option<Vec<Rational>>> {
    let from = rng.hull_point(&f.s_hull);
    for _ in 0..8 {
        let dir: Vec<Rational> = (0..f.dim()).map(|_| rng.grid_coord()).collect();
        if dir.iter().all(Zero::is_zero) {
            continue;
        }
        let Some(r) = f.extremal.level_crossing(&from, &dir, level)? else {
            continue;
        };
        let y: Vec<Rational> = from.iter().zip(&dir).map(|(a, b)| a + &r * b).collect();
        if f.extremal.is_interior(&y)? {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// A grid point with denominator 16 inside the bounding box of the vertices
/// of `U`, falling back to a random hull point.
fn grid_block(f: &CrossFactor, rng: &mut Sampler) -> Result<Vec<Rational>> {
    let u = f.extremal.u_vdata();
    let (lo, hi) = u.bounding_box();
    for _ in 0..32 {
        let y: Vec<Rational> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| rng.strictly_between(a, b, 16))
            .collect();
        if f.extremal.is_interior(&y)? {
            return Ok(y);
        }
    }
    Ok(rng.hull_point(u))
}

/// Cartesian product of generator sets.
fn product_vdata(parts: &[&VData]) -> Result<VData> {
    let dim = parts.iter().map(|p| p.dim()).sum();
    let vertices = parts
        .iter()
        .map(|p| p.vertices().iter())
        .multi_cartesian_product()
        .map(|vs| vs.into_iter().flatten().cloned().collect())
        .collect();
    let mut rays = Vec::new();
    let mut off = 0;
    for p in parts {
        rays.extend(p.rays().iter().map(|r| off + r));
        off += p.dim();
    }
    VData::new(dim, vertices, rays)
}

/// Generators of the closed hull of the cross built from the given problems.
pub fn cross_vdata(problems: &[ExtremalProblem]) -> Result<VData> {
    let dim = problems.iter().map(|p| p.dim()).sum();
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for k in 0..problems.len() {
        let parts: Vec<&VData> = problems
            .iter()
            .enumerate()
            .map(|(j, p)| if j == k { p.u_vdata() } else { p.s_vdata() })
            .collect();
        let t_k = product_vdata(&parts)?;
        vertices.extend(t_k.vertices().iter().cloned());
        rays.extend_from_slice(t_k.rays());
    }
    vertices.sort();
    vertices.dedup();
    VData::new(dim, vertices, rays)
}

/// `(Φ_{S_1×⋯×S_N, W}(x), Σ_j Φ_{S_j,U_j}(x_j))` for arbitrary factor
/// problems, including lower-dimensional `S_j`.
pub fn product_phi_check(problems: &[ExtremalProblem], x: &[Rational]) -> Result<(Rational, Rational)> {
    let dim: usize = problems.iter().map(|p| p.dim()).sum();
    check_dim(dim, x.len())?;
    let mut rhs = Rational::zero();
    let mut off = 0;
    for p in problems {
        rhs += p.phi(&x[off..off + p.dim()])?;
        off += p.dim();
    }
    if rhs >= Rational::one() {
        return Err(Error::domain("point is not interior to W"));
    }
    let s = product_vdata(&problems.iter().map(|p| p.s_vdata()).collect::<Vec<_>>())?;
    let w = ExtremalProblem::from_vdata(s, cross_vdata(problems)?)?;
    Ok((w.phi(x)?, rhs))
}

/// Outcome of a convex-cross-theorem campaign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Prop24Report {
    pub samples: usize,
    pub inside: usize,
    pub boundary: usize,
    pub outside: usize,
    /// Samples outside the domain of some factor.
    pub skipped: usize,
    pub violations: Vec<Counterexample>,
}

impl Prop24Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Classifies one point and records any breach of the trichotomy
    /// contract, including a point of the cross outside the hull.
    pub fn check_sample(&mut self, spec: &CrossSpec, x: &[Rational]) -> Result<Option<Trichotomy>> {
        self.samples += 1;
        let t = match spec.conv_cross_classify(x) {
            Ok(t) => t,
            Err(Error::Domain(_)) => {
                self.skipped += 1;
                return Ok(None);
            }
            Err(Error::Invariant(msg)) => {
                self.violate(x, msg);
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        match t.w_class {
            WClass::Inside => self.inside += 1,
            WClass::Boundary => self.boundary += 1,
            WClass::Outside => self.outside += 1,
        }
        if !t.consistent() {
            self.violate(
                x,
                format!(
                    "Σ Φ = {} ({:?}) but hull membership is {}",
                    t.phi_sum, t.w_class, t.hull_member
                ),
            );
        }
        if !t.hull_member && spec.cross_membership(x)? {
            self.violate(x, "point of the cross is not a hull member");
        }
        Ok(Some(t))
    }

    fn violate(&mut self, x: &[Rational], detail: impl ToString) {
        self.violations.push(Counterexample {
            point: x.to_vec(),
            detail: detail.to_string(),
        });
    }
}

/// Seeded check of `conv T = W` on sampled points.
pub fn verify_prop24(spec: &CrossSpec, num_samples: usize, seed: u64) -> Result<Prop24Report> {
    let mut rng = Sampler::new(seed);
    let pts = spec.sample_points(&mut rng, num_samples)?;
    let mut report = Prop24Report::default();
    for x in &pts {
        report.check_sample(spec, x)?;
    }
    Ok(report)
}

/// Random cross with `N` factors of the given block dimensions.
pub fn random_cross(rng: &mut Sampler, dims: &[usize]) -> Result<CrossSpec> {
    let factors = dims
        .iter()
        .map(|&d| {
            let (s, u) = crate::random::random_cells(rng, d)?;
            CrossFactor::new(vec![s], u)
        })
        .collect::<Result<_>>()?;
    CrossSpec::new(factors)
}
