//! JSON file formats.
//!
//! Rationals are strings `"p/q"` or `"p"` (plain JSON integers are accepted
//! on input). Extension masks and axis indices are 1-based, as in
//! mathematical notation; the library itself is 0-based.

use crosshull::cross::{CrossFactor, CrossSpec};
use crosshull::extremal::ExtremalProblem;
use crosshull::polytope::{Cell, HPolytope, Halfspace, VData};
use crosshull::reinhardt::{LogCoord, LogPoint, ReinhardtCross, ReinhardtDomain};
use crosshull::Rational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}: not a rational number")]
    Rational(String),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Library(#[from] crosshull::Error),
}

type Result<T> = std::result::Result<T, FormatError>;

/// A rational read from JSON, validated during deserialization so errors
/// carry a line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Text(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawNumber::deserialize(d)? {
            RawNumber::Int(v) => Ok(Rat(Rational::from_integer(v.into()))),
            RawNumber::Text(s) => parse_rational(&s).map(Rat).map_err(serde::de::Error::custom),
        }
    }
}

/// A log-coordinate: a rational or `"-inf"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRat(pub LogCoord);

impl<'de> Deserialize<'de> for LogRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawNumber::deserialize(d)? {
            RawNumber::Int(v) => Ok(LogRat(LogCoord::Finite(Rational::from_integer(v.into())))),
            RawNumber::Text(s) if s.trim() == "-inf" => Ok(LogRat(LogCoord::NegInf)),
            RawNumber::Text(s) => parse_rational(&s)
                .map(|r| LogRat(LogCoord::Finite(r)))
                .map_err(serde::de::Error::custom),
        }
    }
}

/// `"p/q"` or `"p"` with `q ≠ 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().ok();
            let d: Option<num_bigint::BigInt> = d.trim().parse().ok();
            match (n, d) {
                (Some(n), Some(d)) if !d.is_zero() => Some(Rational::new(n, d)),
                _ => None,
            }
        }
        None => s.parse().ok().map(Rational::from_integer),
    };
    parsed.ok_or_else(|| FormatError::Rational(s.to_string()))
}

fn vals(v: &[Rat]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn one_based(ext: &[usize], dim: usize) -> Result<Vec<usize>> {
    ext.iter()
        .map(|&j| {
            if j == 0 || j > dim {
                Err(FormatError::Schema(format!("axis index {j} outside 1..={dim}")))
            } else {
                Ok(j - 1)
            }
        })
        .collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowJson {
    pub a: Vec<Rat>,
    pub b: Rat,
}

/// A cell as explicit rows `a·x ≤ b` or as a box `lo ≤ x ≤ hi`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    #[serde(default)]
    pub rows: Option<Vec<RowJson>>,
    #[serde(default)]
    pub lo: Option<Vec<Rat>>,
    #[serde(default)]
    pub hi: Option<Vec<Rat>>,
    #[serde(default)]
    pub ext: Vec<usize>,
}

impl CellJson {
    pub fn parse(&self) -> Result<Cell> {
        let poly = match (&self.rows, &self.lo, &self.hi) {
            (Some(rows), None, None) => {
                let rows = rows
                    .iter()
                    .map(|r| Ok(Halfspace::new(vals(&r.a), r.b.0.clone())))
                    .collect::<Result<Vec<_>>>()?;
                let dim = rows
                    .first()
                    .map(|h| h.normal.len())
                    .ok_or_else(|| FormatError::Schema("cell has no rows".into()))?;
                HPolytope::new(dim, rows)?
            }
            (None, Some(lo), Some(hi)) => HPolytope::from_box(&vals(lo), &vals(hi))?,
            _ => {
                return Err(FormatError::Schema(
                    "a cell needs either \"rows\" or both \"lo\" and \"hi\"".into(),
                ))
            }
        };
        let ext = one_based(&self.ext, poly.dim())?;
        Ok(Cell::new(poly, ext)?)
    }
}

pub fn hpolytope_json(p: &HPolytope) -> Value {
    json!({
        "dim": p.dim(),
        "rows": p.rows().iter().map(|h| json!({"a": vector(&h.normal), "b": rat(&h.offset)})).collect::<Vec<_>>(),
    })
}

pub fn cell_json(c: &Cell) -> Value {
    let mut v = hpolytope_json(c.poly());
    v.as_object_mut().unwrap().remove("dim");
    v["ext"] = json!(c.ext().iter().map(|j| j + 1).collect::<Vec<_>>());
    v
}

pub fn vdata_json(v: &VData) -> Value {
    json!({
        "vertices": v.vertices().iter().map(|p| vector(p)).collect::<Vec<_>>(),
        "rays": v.rays().iter().map(|j| j + 1).collect::<Vec<_>>(),
    })
}

/// `{"S": [Cell…], "U": Cell}`, or `{"S_points": [[…]…], "U": Cell}` for a
/// set `S` given by points (possibly lower-dimensional).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    #[serde(rename = "S", default)]
    pub s: Option<Vec<CellJson>>,
    #[serde(rename = "S_points", default)]
    pub s_points: Option<Vec<Vec<Rat>>>,
    #[serde(rename = "U")]
    pub u: CellJson,
}

impl ProblemJson {
    pub fn parse(&self) -> Result<ExtremalProblem> {
        let u = self.u.parse()?;
        match (&self.s, &self.s_points) {
            (Some(cells), None) => {
                let cells = cells.iter().map(CellJson::parse).collect::<Result<Vec<_>>>()?;
                Ok(ExtremalProblem::new(cells, u)?)
            }
            (None, Some(points)) => {
                let pts = points.iter().map(|p| vals(p)).collect();
                let s = VData::new(u.dim(), pts, vec![])?;
                Ok(ExtremalProblem::with_cell_domain(s, u)?)
            }
            _ => Err(FormatError::Schema("exactly one of \"S\" and \"S_points\" is required".into())),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsJson {
    pub points: Vec<Vec<Rat>>,
}

impl PointsJson {
    pub fn parse(&self) -> Vec<Vec<Rational>> {
        self.points.iter().map(|p| vals(p)).collect()
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossJson {
    pub factors: Vec<ProblemJson>,
}

impl CrossJson {
    pub fn parse(&self) -> Result<CrossSpec> {
        let factors = self
            .factors
            .iter()
            .map(|f| Ok(CrossFactor::from_problem(f.parse()?)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(CrossSpec::new(factors)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolydiscJson {
    pub log_radii: Vec<Rat>,
}

/// `{"n", "cells", "axis_meets"}` or `{"polydisc": {"log_radii": […]}}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainJson {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub cells: Option<Vec<CellJson>>,
    #[serde(default)]
    pub axis_meets: Option<Vec<bool>>,
    #[serde(default)]
    pub polydisc: Option<PolydiscJson>,
}

impl DomainJson {
    pub fn parse(&self, truncation: &Rational) -> Result<ReinhardtDomain> {
        match (&self.n, &self.cells, &self.axis_meets, &self.polydisc) {
            (Some(n), Some(cells), Some(flags), None) => {
                let cells = cells.iter().map(CellJson::parse).collect::<Result<Vec<_>>>()?;
                Ok(ReinhardtDomain::new(*n, cells, flags.clone())?)
            }
            (None, None, None, Some(pd)) => {
                Ok(ReinhardtDomain::polydisc(&vals(&pd.log_radii), truncation)?)
            }
            _ => Err(FormatError::Schema(
                "a domain needs \"n\", \"cells\" and \"axis_meets\", or a \"polydisc\"".into(),
            )),
        }
    }
}

pub fn domain_json(d: &ReinhardtDomain) -> Value {
    json!({
        "n": d.dim(),
        "cells": d.cells().iter().map(cell_json).collect::<Vec<_>>(),
        "axis_meets": d.axis_meets(),
    })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    #[serde(rename = "A")]
    pub a: DomainJson,
    #[serde(rename = "D")]
    pub d: DomainJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReinhardtCrossJson {
    pub blocks: Vec<BlockJson>,
}

impl ReinhardtCrossJson {
    pub fn parse(&self, truncation: &Rational) -> Result<ReinhardtCross> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Ok((b.a.parse(truncation)?, b.d.parse(truncation)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReinhardtCross::new(blocks)?)
    }
}

pub fn log_point_json(p: &LogPoint) -> Value {
    Value::Array(p.0.iter().map(|c| Value::String(c.to_string())).collect())
}

/// Log-space points `{"points": [["-1/2", "-inf"], …]}`, or decimal moduli
/// `{"moduli": [["0.5", "0"], …]}` converted at a stated precision.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogPointsJson {
    #[serde(default)]
    pub points: Option<Vec<Vec<LogRat>>>,
    #[serde(default)]
    pub moduli: Option<Vec<Vec<String>>>,
}
