use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::testutil::*;

/// Andrew's monotone chain on exact rationals; counter-clockwise, no collinear points.
fn hull_2d(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: &Vec<Rational>, a: &Vec<Rational>, b: &Vec<Rational>| {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut lower: Vec<Vec<Rational>> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], x).is_positive() {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<Vec<Rational>> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], x).is_positive() {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn sorted(mut v: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    v.sort();
    v
}

fn hs(normal: &[i64], offset: i64) -> Halfspace {
    Halfspace::new(ipt(normal), z(offset))
}

#[test]
fn box_cell_membership() {
    let c = cell(&[-1, -1], &[1, 1], &[]);
    assert!(c.contains(&ipt(&[0, 0])).unwrap());
    assert!(!c.contains(&ipt(&[2, 0])).unwrap());
    assert!(matches!(c.contains(&ipt(&[0])), Err(Error::Dimension { .. })));
}

#[test]
fn extension_ray_reaches_far_point() {
    let c = cell(&[-1, -1], &[0, 0], &[0]);
    assert!(c.contains(&pt(&[(-5, 1), (-1, 2)])).unwrap());
    assert!(!c.contains(&pt(&[(1, 2), (-1, 2)])).unwrap());
    assert!(!c.contains(&pt(&[(-5, 1), (-2, 1)])).unwrap());
}

#[test]
fn square_triangle_diamond_vertices() {
    let square = ibox(&[-1, -1], &[1, 1]);
    assert_eq!(
        square.vertices().vertices(),
        sorted(vec![ipt(&[1, 1]), ipt(&[1, -1]), ipt(&[-1, 1]), ipt(&[-1, -1])])
    );

    let tri = HPolytope::new(2, vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1)]).unwrap();
    assert_eq!(
        tri.vertices().vertices(),
        sorted(vec![ipt(&[0, 0]), ipt(&[1, 0]), ipt(&[0, 1])])
    );

    let diamond = HPolytope::new(
        2,
        vec![hs(&[1, 1], 1), hs(&[1, -1], 1), hs(&[-1, 1], 1), hs(&[-1, -1], 1)],
    )
    .unwrap();
    assert_eq!(
        diamond.vertices().vertices(),
        sorted(vec![ipt(&[1, 0]), ipt(&[0, 1]), ipt(&[-1, 0]), ipt(&[0, -1])])
    );
}

#[test]
fn construction_rejects_bad_polytopes() {
    let unbounded = HPolytope::new(2, vec![hs(&[1, 0], 1), hs(&[0, 1], 1)]);
    assert!(matches!(unbounded, Err(Error::Input(_))));
    let flat = HPolytope::new(1, vec![hs(&[1], 0), hs(&[-1], 0)]);
    assert!(matches!(flat, Err(Error::Input(_))));
    let empty = HPolytope::new(1, vec![hs(&[1], 0), hs(&[-1], -1)]);
    assert!(matches!(empty, Err(Error::Input(_))));
}

#[test]
fn triangle_hull_membership() {
    let v = VData::new(2, vec![ipt(&[0, 0]), ipt(&[1, 0]), ipt(&[0, 1])], vec![]).unwrap();
    assert!(v.contains(&pt(&[(1, 4), (1, 4)])).unwrap());
    assert!(!v.contains(&pt(&[(3, 4), (3, 4)])).unwrap());
    let ray = VData::new(2, vec![ipt(&[0, 0])], vec![0]).unwrap();
    assert!(ray.contains(&ipt(&[-7, 0])).unwrap());
    assert!(!ray.contains(&ipt(&[7, 0])).unwrap());
    let empty = VData::new(2, vec![], vec![]).unwrap();
    assert!(empty.contains(&ipt(&[0, 0])).is_err());
}

#[test]
fn adjacent_squares_hull_is_rectangle() {
    let cells = [cell(&[0, 0], &[1, 1], &[]), cell(&[1, 0], &[2, 1], &[])];
    let h = hull_of_union(&cells).unwrap();
    let rect = cell(&[0, 0], &[2, 1], &[]);
    for i in -1..=9 {
        for j in -1..=5 {
            let x = pt(&[(i, 4), (j, 4)]);
            assert_eq!(h.contains(&x).unwrap(), rect.contains(&x).unwrap());
        }
    }
}

#[test]
fn l_shape_hull_is_pentagon() {
    let cells = [cell(&[-2, -2], &[0, -1], &[]), cell(&[-2, -2], &[-1, 0], &[])];
    let h = hull_of_union(&cells).unwrap();
    let expect = sorted(vec![
        ipt(&[-2, -2]),
        ipt(&[0, -2]),
        ipt(&[0, -1]),
        ipt(&[-1, 0]),
        ipt(&[-2, 0]),
    ]);
    assert_eq!(sorted(hull_2d(h.vertices())), expect);
    assert_eq!(sorted(h.reduced().unwrap().vertices().to_vec()), expect);

    let f = facets(&h).unwrap();
    assert_eq!(f.rows().len(), 5);
    assert!(f.rows().contains(&hs(&[1, 1], -1)));
}

#[test]
fn single_cell_hull_is_itself() {
    let c = cell(&[0, 0], &[1, 2], &[1]);
    assert_eq!(hull_of_union(core::slice::from_ref(&c)).unwrap(), c.vdata());
}

#[test]
fn triangle_facets() {
    let v = VData::new(2, vec![ipt(&[0, 0]), ipt(&[1, 0]), ipt(&[0, 1])], vec![]).unwrap();
    let f = facets(&v).unwrap();
    let mut rows = f.rows().to_vec();
    rows.sort();
    let mut expect = vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1)];
    expect.sort();
    assert_eq!(rows, expect);
}

#[test]
fn facets_rejects_degenerate_and_high_dimensional() {
    let seg = VData::new(2, vec![ipt(&[0, 0]), ipt(&[1, 1])], vec![]).unwrap();
    assert!(matches!(facets(&seg), Err(Error::Input(_))));
    let four = ibox(&[0, 0, 0, 0], &[1, 1, 1, 1]).vertices();
    assert!(matches!(facets(&four), Err(Error::Unsupported(_))));
    let rays = VData::new(1, vec![ipt(&[0]), ipt(&[1])], vec![0]).unwrap();
    assert!(facets(&rays).is_err());
}

#[test]
fn halfspaces_of_extended_cell() {
    // [-2,0]^2 extended along -e_1 is {x ≤ 0, -2 ≤ y ≤ 0}.
    let c = cell(&[-2, -2], &[0, 0], &[0]);
    let mut rows = c.halfspaces().unwrap();
    rows.sort();
    let mut expect = vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[0, -1], 2)];
    expect.sort();
    assert_eq!(rows, expect);
}

#[test]
fn interior_checks() {
    let c = cell(&[-2, -2], &[0, 0], &[0]);
    assert!(c.contains_interior(&pt(&[(-5, 1), (-1, 2)])).unwrap());
    assert!(!c.contains_interior(&pt(&[(-5, 1), (0, 1)])).unwrap());
    let v = c.vdata();
    assert!(v.contains_interior(&pt(&[(-5, 1), (-1, 2)])).unwrap());
    assert!(!v.contains_interior(&pt(&[(-5, 1), (0, 1)])).unwrap());
    assert!(!v.contains_interior(&pt(&[(1, 1), (-1, 1)])).unwrap());
}

fn small() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Random polytope: a box cut by a few extra half-spaces through points near its center.
fn random_poly() -> impl Strategy<Value = HPolytope> {
    (1usize..=3).prop_flat_map(|n| {
        (
            prop::collection::vec((-4i64..=0, 1i64..=4), n),
            prop::collection::vec((prop::collection::vec(-3i64..=3, n), 1i64..=3), 0..3),
        )
            .prop_map(move |(bounds, cuts)| {
                let lo: Vec<Rational> = bounds.iter().map(|&(l, _)| z(l)).collect();
                let hi: Vec<Rational> = bounds.iter().map(|&(_, h)| z(h)).collect();
                let mut rows = HPolytope::from_box(&lo, &hi).unwrap().rows().to_vec();
                // cuts keep the box center (strictly) feasible
                let center: Vec<Rational> =
                    lo.iter().zip(&hi).map(|(a, b)| (a + b) / z(2)).collect();
                for (a, off) in cuts {
                    let a = ipt(&a);
                    let b = crate::linalg::dot(&a, &center) + z(off);
                    rows.push(Halfspace::new(a, b));
                }
                HPolytope::new(n, rows).unwrap()
            })
    })
}

fn sample_points(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(small(), n), 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn facets_of_vertices_round_trip((p, xs) in random_poly().prop_flat_map(|p| {
        let n = p.dim();
        (Just(p), sample_points(n))
    })) {
        let back = facets(&p.vertices()).unwrap();
        for x in &xs {
            prop_assert_eq!(back.contains(x).unwrap(), p.contains(x).unwrap());
        }
    }

    #[test]
    fn cell_and_vdata_membership_agree((p, ext, xs) in random_poly().prop_flat_map(|p| {
        let n = p.dim();
        (Just(p), prop::collection::vec(0..n, 0..=n), sample_points(n))
    })) {
        let c = Cell::new(p, ext).unwrap();
        let v = c.vdata();
        for x in &xs {
            prop_assert_eq!(c.contains(x).unwrap(), v.contains(x).unwrap());
            prop_assert_eq!(c.contains_interior(x).unwrap(), v.contains_interior(x).unwrap());
        }
    }

    #[test]
    fn hull_of_union_contains_cells((a, b, xs) in (1usize..=2).prop_flat_map(|n| {
        (
            prop::collection::vec((-4i64..=0, 1i64..=4), n),
            prop::collection::vec((-4i64..=0, 1i64..=4), n),
            sample_points(n),
        )
    })) {
        let mk = |bounds: &Vec<(i64, i64)>| {
            let lo: Vec<i64> = bounds.iter().map(|b| b.0).collect();
            let hi: Vec<i64> = bounds.iter().map(|b| b.1).collect();
            cell(&lo, &hi, &[])
        };
        let cells = [mk(&a), mk(&b)];
        let h = hull_of_union(&cells).unwrap();
        for x in &xs {
            if cells.iter().any(|c| c.contains(x).unwrap()) {
                prop_assert!(h.contains(x).unwrap());
            }
        }
    }
}
