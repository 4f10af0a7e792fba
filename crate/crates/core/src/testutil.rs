//! Shared helpers for unit tests.

use alloc::vec::Vec;

use crate::polytope::{Cell, HPolytope};
use crate::Rational;

pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) fn z(n: i64) -> Rational {
    q(n, 1)
}

pub(crate) fn pt(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| q(n, d)).collect()
}

pub(crate) fn ipt(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| z(n)).collect()
}

pub(crate) fn boxed(lo: &[(i64, i64)], hi: &[(i64, i64)]) -> HPolytope {
    HPolytope::from_box(&pt(lo), &pt(hi)).unwrap()
}

pub(crate) fn ibox(lo: &[i64], hi: &[i64]) -> HPolytope {
    HPolytope::from_box(&ipt(lo), &ipt(hi)).unwrap()
}

pub(crate) fn cell(lo: &[i64], hi: &[i64], ext: &[usize]) -> Cell {
    Cell::new(ibox(lo, hi), ext.to_vec()).unwrap()
}
