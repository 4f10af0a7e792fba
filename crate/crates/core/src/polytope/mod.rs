//! Polyhedral primitives in log-space.
//!
//! An [`HPolytope`] is a bounded, full-dimensional intersection of closed
//! half-spaces. A [`Cell`] adds an axis-extension mask: it denotes
//! `poly + cone{-e_j : j ∈ ext}`. [`VData`] is the generator form
//! `conv(vertices) + cone{-e_j : j ∈ rays}`. Coordinate indices are 0-based in
//! code and 1-based in file formats.

mod enumerate;

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::check_dim;
use crate::linalg::{dot, primitive, rank};
use crate::ratlp::{LpOutcome, LpProblem};
use crate::{Error, Rational, Result};

pub use enumerate::facets;
pub(crate) use enumerate::supporting_halfspaces;

/// The closed half-space `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        Self { normal, offset }
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - dot(&self.normal, x)
    }

    /// Same half-space with primitive integer coefficients.
    pub(crate) fn canonical(&self) -> Self {
        let mut v = self.normal.clone();
        v.push(self.offset.clone());
        let mut p = primitive(&v);
        let offset = p.pop().unwrap();
        Self { normal: p, offset }
    }
}

/// Bounded, full-dimensional polytope `{x : a·x ≤ b for every row}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<Halfspace>,
    interior: Vec<Rational>,
}

impl HPolytope {
    /// Validates boundedness in every `±e_i` direction and strict feasibility.
    pub fn new(dim: usize, rows: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("polytope dimension must be positive"));
        }
        for r in &rows {
            check_dim(dim, r.normal.len())?;
        }

        // maximize eps subject to a·x + eps ≤ b, eps ≤ 1
        let mut lp = LpProblem::new(dim + 1).maximize(unit(dim + 1, dim));
        for r in &rows {
            let mut a = r.normal.clone();
            a.push(Rational::one());
            lp.add_le(a, r.offset.clone());
        }
        lp.add_le(unit(dim + 1, dim), Rational::one());
        let interior = match lp.solve()? {
            LpOutcome::Optimal(sol) if sol.value.is_positive() => {
                let mut p = sol.point;
                p.pop();
                p
            }
            LpOutcome::Infeasible => return Err(Error::input("polytope is empty")),
            _ => return Err(Error::input("polytope is not full-dimensional")),
        };

        for i in 0..dim {
            for sign in [1, -1] {
                let mut obj = unit(dim, i);
                obj[i] *= Rational::from_integer(sign.into());
                let mut lp = LpProblem::new(dim).maximize(obj);
                for r in &rows {
                    lp.add_le(r.normal.clone(), r.offset.clone());
                }
                if lp.solve()? == LpOutcome::Unbounded {
                    return Err(Error::input("polytope is unbounded"));
                }
            }
        }
        Ok(Self {
            dim,
            rows,
            interior,
        })
    }

    /// The box `Π [lo_i, hi_i]`.
    pub fn from_box(lo: &[Rational], hi: &[Rational]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            rows.push(Halfspace::new(unit(n, i), hi[i].clone()));
            let mut neg = unit(n, i);
            neg[i] = -Rational::one();
            rows.push(Halfspace::new(neg, -lo[i].clone()));
        }
        Self::new(n, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    /// A strictly feasible point found during validation.
    pub fn interior_point(&self) -> &[Rational] {
        &self.interior
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(self.rows.iter().all(|r| !r.slack(x).is_negative()))
    }

    /// `c + f·(P - c)`, i.e. rows `a·y ≤ f·b + (1-f)·a·c`.
    pub fn shrink_toward(&self, center: &[Rational], factor: &Rational) -> Result<Self> {
        check_dim(self.dim, center.len())?;
        let keep = Rational::one() - factor;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                Halfspace::new(
                    r.normal.clone(),
                    factor * &r.offset + &keep * dot(&r.normal, center),
                )
            })
            .collect();
        Self::new(self.dim, rows)
    }

    /// Exact vertex list from all nonsingular `n`-subsets of rows.
    pub fn vertices(&self) -> VData {
        VData {
            dim: self.dim,
            vertices: enumerate::vertices(self),
            rays: Vec::new(),
        }
    }
}

/// `poly + cone{-e_j : j ∈ ext}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    poly: HPolytope,
    ext: Vec<usize>,
}

impl Cell {
    pub fn new(poly: HPolytope, mut ext: Vec<usize>) -> Result<Self> {
        ext.sort_unstable();
        ext.dedup();
        if ext.iter().any(|&j| j >= poly.dim()) {
            return Err(Error::input("extension index out of range"));
        }
        Ok(Self { poly, ext })
    }

    pub fn bounded(poly: HPolytope) -> Self {
        Self {
            poly,
            ext: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly(&self) -> &HPolytope {
        &self.poly
    }

    pub fn ext(&self) -> &[usize] {
        &self.ext
    }

    /// Membership in the closed denoted set: `x = y - Σ s_j e_j`, `y ∈ poly`, `s ≥ 0`.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        if self.ext.is_empty() {
            return self.poly.contains(x);
        }
        // Σ_{j∈E} a_j s_j ≤ b - a·x,  s ≥ 0
        let k = self.ext.len();
        let mut lp = LpProblem::new(k);
        for r in self.poly.rows() {
            let a = self.ext.iter().map(|&j| r.normal[j].clone()).collect();
            lp.add_le(a, r.slack(x));
        }
        for j in 0..k {
            lp.add_nonneg(j);
        }
        Ok(matches!(lp.solve()?, LpOutcome::Optimal(_)))
    }

    /// Membership in the interior of the denoted set.
    pub fn contains_interior(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        if self.ext.is_empty() {
            return Ok(self.poly.rows().iter().all(|r| r.slack(x).is_positive()));
        }
        // maximize eps: Σ_{j∈E} a_j s_j + eps ≤ b - a·x, s ≥ 0, eps ≤ 1
        let k = self.ext.len();
        let mut lp = LpProblem::new(k + 1).maximize(unit(k + 1, k));
        for r in self.poly.rows() {
            let mut a: Vec<Rational> = self.ext.iter().map(|&j| r.normal[j].clone()).collect();
            a.push(Rational::one());
            lp.add_le(a, r.slack(x));
        }
        lp.add_le(unit(k + 1, k), Rational::one());
        for j in 0..k {
            lp.add_nonneg(j);
        }
        Ok(match lp.solve()? {
            LpOutcome::Optimal(sol) => sol.value.is_positive(),
            _ => false,
        })
    }

    pub fn vdata(&self) -> VData {
        let mut v = self.poly.vertices();
        v.rays = self.ext.clone();
        v
    }

    /// Irredundant half-spaces of the denoted set (which is unbounded when `ext` is nonempty).
    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        if self.ext.is_empty() {
            return Ok(self.poly.rows().to_vec());
        }
        let v = self.vdata();
        supporting_halfspaces(self.dim(), &v.vertices, &v.rays)
    }
}

/// `conv(vertices) + cone{-e_j : j ∈ rays}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VData {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
    rays: Vec<usize>,
}

impl VData {
    pub fn new(dim: usize, vertices: Vec<Vec<Rational>>, mut rays: Vec<usize>) -> Result<Self> {
        for v in &vertices {
            check_dim(dim, v.len())?;
        }
        if rays.iter().any(|&j| j >= dim) {
            return Err(Error::input("ray index out of range"));
        }
        rays.sort_unstable();
        rays.dedup();
        Ok(Self {
            dim,
            vertices,
            rays,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    /// Closed hull membership, by feasibility of
    /// `x = Σ λ_i v_i - Σ s_j e_j`, `Σ λ = 1`, `λ, s ≥ 0`.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        if self.vertices.is_empty() {
            return Err(Error::input("hull membership needs at least one vertex"));
        }
        let lp = self.combination_lp(x, None);
        Ok(matches!(lp.solve()?, LpOutcome::Optimal(_)))
    }

    /// Interior membership: `x ± δ e_i` in the hull for some `δ > 0` and every `i`.
    pub fn contains_interior(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        if self.vertices.is_empty() {
            return Err(Error::input("hull membership needs at least one vertex"));
        }
        for i in 0..self.dim {
            for sign in [1i64, -1] {
                let mut d = vec![Rational::zero(); self.dim];
                d[i] = Rational::from_integer(sign.into());
                let lp = self.combination_lp(x, Some(&d));
                match lp.solve()? {
                    LpOutcome::Optimal(sol) if sol.value.is_positive() => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// Combination LP over `[λ..., s..., (δ)]`. With a direction `d`, the
    /// target becomes `x + δ d` and the objective maximizes `δ ≤ 1`.
    fn combination_lp(&self, x: &[Rational], dir: Option<&[Rational]>) -> LpProblem {
        let m = self.vertices.len();
        let k = self.rays.len();
        let nv = m + k + usize::from(dir.is_some());
        let mut lp = LpProblem::new(nv);
        if dir.is_some() {
            lp.objective = unit(nv, m + k);
            lp.add_le(unit(nv, m + k), Rational::one());
        }
        for c in 0..self.dim {
            let mut a = vec![Rational::zero(); nv];
            for (i, v) in self.vertices.iter().enumerate() {
                a[i] = v[c].clone();
            }
            if let Some(pos) = self.rays.iter().position(|&r| r == c) {
                a[m + pos] = -Rational::one();
            }
            if let Some(d) = dir {
                a[m + k] = -d[c].clone();
            }
            lp.add_eq(a, x[c].clone());
        }
        let mut sum = vec![Rational::zero(); nv];
        for s in sum.iter_mut().take(m) {
            *s = Rational::one();
        }
        lp.add_eq(sum, Rational::one());
        for j in 0..m + k {
            lp.add_nonneg(j);
        }
        lp
    }

    /// Drops generators that are not extreme points of the hull.
    pub fn reduced(&self) -> Result<Self> {
        let mut kept: Vec<Vec<Rational>> = self.vertices.clone();
        kept.sort();
        kept.dedup();
        let mut i = 0;
        while i < kept.len() && kept.len() > 1 {
            let candidate = kept.remove(i);
            let rest = VData {
                dim: self.dim,
                vertices: kept.clone(),
                rays: self.rays.clone(),
            };
            if rest.contains(&candidate)? {
                continue;
            }
            kept.insert(i, candidate);
            i += 1;
        }
        Ok(Self {
            dim: self.dim,
            vertices: kept,
            rays: self.rays.clone(),
        })
    }

    /// Average of the vertices.
    pub fn barycenter(&self) -> Vec<Rational> {
        let m = Rational::from_integer(self.vertices.len().into());
        let mut c = vec![Rational::zero(); self.dim];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        c.into_iter().map(|x| x / &m).collect()
    }

    /// Whether the affine hull of the generators is the whole space.
    pub fn is_full_dimensional(&self) -> bool {
        let Some(p0) = self.vertices.first() else {
            return false;
        };
        let mut m: Vec<Vec<Rational>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        for &r in &self.rays {
            let mut e = vec![Rational::zero(); self.dim];
            e[r] = -Rational::one();
            m.push(e);
        }
        rank(&m, self.dim) == self.dim
    }

    /// Per-coordinate minimum and maximum over the vertices.
    pub fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for c in 0..self.dim {
                if v[c] < lo[c] {
                    lo[c] = v[c].clone();
                }
                if v[c] > hi[c] {
                    hi[c] = v[c].clone();
                }
            }
        }
        (lo, hi)
    }
}

/// Generators of the closed hull of a union of cells: all vertices and all masks.
pub fn hull_of_union(cells: &[Cell]) -> Result<VData> {
    let first = cells
        .first()
        .ok_or_else(|| Error::input("hull of an empty union"))?;
    let dim = first.dim();
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for cell in cells {
        check_dim(dim, cell.dim())?;
        let v = cell.vdata();
        vertices.extend(v.vertices);
        rays.extend(v.rays);
    }
    vertices.sort();
    vertices.dedup();
    VData::new(dim, vertices, rays)
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

#[cfg(test)]
mod tests;
