//! Seeded sampling and random instance generation.
//!
//! All randomness goes through [`Sampler`], which wraps PCG-XSH-RR 64/32
//! (`rand_pcg::Pcg32`, 64-bit state) seeded via `seed_from_u64`. The same seed
//! always yields the same instances and samples on every platform.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg32;

use crate::extremal::ExtremalProblem;
use crate::polytope::{facets, Cell, HPolytope, VData};
use crate::{Rational, Result};

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: Pcg32,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Pcg32::seed_from_u64(seed),
        }
    }

    /// Independent stream derived from the next output of this one.
    pub fn fork(&mut self) -> Self {
        Self::new(self.rng.random::<u64>())
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        self.rng.random_ratio(num, den)
    }

    /// `lo + k (hi - lo) / steps` for `k` uniform in `1..steps` (strictly inside).
    pub fn strictly_between(&mut self, lo: &Rational, hi: &Rational, steps: i64) -> Rational {
        let k = self.int(1, steps - 1);
        lo + (hi - lo) * Rational::new(k.into(), steps.into())
    }

    /// Strictly positive rational weights summing to one.
    pub fn weights(&mut self, n: usize) -> Vec<Rational> {
        let raw: Vec<i64> = (0..n).map(|_| self.int(1, 8)).collect();
        let total: i64 = raw.iter().sum();
        raw.into_iter()
            .map(|w| Rational::new(w.into(), total.into()))
            .collect()
    }

    /// Strictly positive combination of all vertices, pushed a random amount
    /// along each ray. Lies in the relative interior of the hull.
    pub fn hull_point(&mut self, v: &VData) -> Vec<Rational> {
        let w = self.weights(v.vertices().len());
        let mut x = vec![Rational::zero(); v.dim()];
        for (wi, p) in w.iter().zip(v.vertices()) {
            for (xc, pc) in x.iter_mut().zip(p) {
                *xc += wi * pc;
            }
        }
        for &r in v.rays() {
            x[r] -= Rational::new(self.int(1, 8).into(), 2.into());
        }
        x
    }

    /// Coordinate from `{-8..8} / {1, 2, 4}`.
    pub fn grid_coord(&mut self) -> Rational {
        let den = [1i64, 2, 4][self.index(3)];
        Rational::new(self.int(-8, 8).into(), den.into())
    }
}

fn random_box(s: &mut Sampler, dim: usize) -> Result<HPolytope> {
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for _ in 0..dim {
        let a = s.grid_coord();
        let mut b = s.grid_coord();
        while b == a {
            b = s.grid_coord();
        }
        if a < b {
            lo.push(a);
            hi.push(b);
        } else {
            lo.push(b);
            hi.push(a);
        }
    }
    HPolytope::from_box(&lo, &hi)
}

fn random_simplex(s: &mut Sampler, dim: usize) -> Result<HPolytope> {
    loop {
        let pts: Vec<Vec<Rational>> = (0..=dim)
            .map(|_| (0..dim).map(|_| s.grid_coord()).collect())
            .collect();
        let v = VData::new(dim, pts, vec![])?;
        if v.is_full_dimensional() {
            return facets(&v);
        }
    }
}

/// Random `U` (box or simplex, occasionally with an extension mask) and
/// `S = c + f (U - c)` for a random interior `c` and `f ∈ [1/8, 1/2]`, with
/// the same mask. `S` lies in the interior of `U` by construction.
pub fn random_cells(s: &mut Sampler, dim: usize) -> Result<(Cell, Cell)> {
    let poly = if (2..=3).contains(&dim) && s.chance(1, 2) {
        random_simplex(s, dim)?
    } else {
        random_box(s, dim)?
    };
    let ext: Vec<usize> = if s.chance(1, 4) {
        (0..dim).filter(|_| s.chance(1, 2)).collect()
    } else {
        Vec::new()
    };
    let center = s.hull_point(&poly.vertices());
    let factor = Rational::new(s.int(2, 8).into(), 16.into());
    let inner = poly.shrink_toward(&center, &factor)?;
    Ok((Cell::new(inner, ext.clone())?, Cell::new(poly, ext)?))
}

pub fn random_extremal_problem(s: &mut Sampler, dim: usize) -> Result<ExtremalProblem> {
    let (inner, outer) = random_cells(s, dim)?;
    ExtremalProblem::new(vec![inner], outer)
}

/// `c + f (v - c)` applied to every vertex; rays unchanged.
pub fn shrink_vdata(v: &VData, center: &[Rational], factor: &Rational) -> Result<VData> {
    let keep = Rational::one() - factor;
    let verts = v
        .vertices()
        .iter()
        .map(|p| {
            p.iter()
                .zip(center)
                .map(|(pc, cc)| factor * pc + &keep * cc)
                .collect()
        })
        .collect();
    VData::new(v.dim(), verts, v.rays().to_vec())
}
