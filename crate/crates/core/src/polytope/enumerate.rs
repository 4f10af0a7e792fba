//! Brute-force vertex and facet enumeration.

use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use super::{HPolytope, Halfspace, VData};
use crate::linalg::{dot, null_vector, solve_square};
use crate::{Error, Rational, Result};

pub(super) fn vertices(poly: &HPolytope) -> Vec<Vec<Rational>> {
    let n = poly.dim();
    let rows = poly.rows();
    let mut out = Vec::new();
    for combo in (0..rows.len()).combinations(n) {
        let m: Vec<Vec<Rational>> = combo.iter().map(|&i| rows[i].normal.clone()).collect();
        let b: Vec<Rational> = combo.iter().map(|&i| rows[i].offset.clone()).collect();
        let Some(x) = solve_square(&m, &b) else {
            continue;
        };
        if rows.iter().all(|r| !r.slack(&x).is_negative()) {
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Irredundant H-representation of `conv(points) + cone{-e_j : j ∈ rays}`.
///
/// Each candidate hyperplane passes through `dim` affinely independent
/// generators (at least one of them a point); it is kept when every generator
/// lies weakly on one side.
pub(crate) fn supporting_halfspaces(
    dim: usize,
    points: &[Vec<Rational>],
    rays: &[usize],
) -> Result<Vec<Halfspace>> {
    let gens = VData::new(dim, points.to_vec(), rays.to_vec())?;
    if !gens.is_full_dimensional() {
        return Err(Error::input("generators are not full-dimensional"));
    }
    let np = points.len();
    let mut out: Vec<Halfspace> = Vec::new();
    for combo in (0..np + rays.len()).combinations(dim) {
        // combinations are increasing, so a point (if any) comes first
        if combo[0] >= np {
            continue;
        }
        let p0 = &points[combo[0]];
        let m: Vec<Vec<Rational>> = combo[1..]
            .iter()
            .map(|&g| {
                if g < np {
                    points[g].iter().zip(p0).map(|(a, b)| a - b).collect()
                } else {
                    let mut e = vec![Rational::zero(); dim];
                    e[rays[g - np]] = -Rational::one();
                    e
                }
            })
            .collect();
        let Some(normal) = null_vector(&m, dim) else {
            continue;
        };
        let offset = dot(&normal, p0);
        let (mut below, mut above) = (false, false);
        for p in points {
            let s = dot(&normal, p) - &offset;
            below |= s.is_negative();
            above |= s.is_positive();
        }
        for &r in rays {
            // normal · (-e_r)
            let s = -normal[r].clone();
            below |= s.is_negative();
            above |= s.is_positive();
        }
        let h = match (below, above) {
            (true, true) => continue,
            (_, false) => Halfspace::new(normal, offset),
            (false, true) => Halfspace::new(
                normal.into_iter().map(|a| -a).collect(),
                -offset,
            ),
        };
        let h = h.canonical();
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out.sort();
    Ok(out)
}

/// Exact irredundant H-representation of a bounded, full-dimensional V-polytope
/// in dimension at most 3.
pub fn facets(vdata: &VData) -> Result<HPolytope> {
    if vdata.dim() > 3 {
        return Err(Error::unsupported("facet enumeration is limited to dimension 3"));
    }
    if !vdata.rays().is_empty() {
        return Err(Error::input("facet enumeration needs bounded generators"));
    }
    if vdata.vertices().is_empty() {
        return Err(Error::input("facet enumeration needs at least one vertex"));
    }
    let rows = supporting_halfspaces(vdata.dim(), vdata.vertices(), &[])?;
    HPolytope::new(vdata.dim(), rows)
}

