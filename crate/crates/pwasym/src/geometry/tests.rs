use num_traits::{Signed, Zero};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{solve_square, Matrix, Point};
use crate::scalar::{int, ratio, zero, Scalar};

use super::*;

pub(crate) fn unit_box(dim: usize) -> Polytope {
    Polytope::from_box(&vec![zero(); dim], &vec![crate::scalar::one(); dim])
}

fn box2(x0: i64, x1: i64, y0: i64, y1: i64) -> Polytope {
    Polytope::from_box(&[int(x0), int(y0)], &[int(x1), int(y1)])
}

/// Test-side 2D volume oracle: order vertices counterclockwise with exact
/// orientation predicates and apply the shoelace formula. Independent of
/// the kernel's section-integration volume.
pub(crate) fn shoelace_area(p: &Polytope) -> Scalar {
    let vs = p.vertices();
    if vs.len() < 3 {
        return zero();
    }
    let n = int(vs.len() as i64);
    let cx: Scalar = vs.iter().map(|v| v[0].clone()).sum::<Scalar>() / &n;
    let cy: Scalar = vs.iter().map(|v| v[1].clone()).sum::<Scalar>() / &n;
    let upper = |v: &Point| v[1] > cy || (v[1] == cy && v[0] > cx);
    let cross = |a: &Point, b: &Point| -> Scalar {
        (&a[0] - &cx) * (&b[1] - &cy) - (&a[1] - &cy) * (&b[0] - &cx)
    };
    let mut ordered: Vec<Point> = vs.to_vec();
    ordered.sort_by(|a, b| {
        use std::cmp::Ordering;
        match (upper(a), upper(b)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                let c = cross(a, b);
                if c.is_positive() {
                    Ordering::Less
                } else if c.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            }
        }
    });
    let mut twice = zero();
    for i in 0..ordered.len() {
        let a = &ordered[i];
        let b = &ordered[(i + 1) % ordered.len()];
        twice += &a[0] * &b[1] - &b[0] * &a[1];
    }
    if twice.is_negative() {
        -twice / int(2)
    } else {
        twice / int(2)
    }
}

/// Random full-dimensional polytope inside [0,10]^2: a few halfspaces with
/// slack around a random center, intersected with the bounding box.
pub(crate) fn random_polytope_2d(rng: &mut ChaCha8Rng) -> Polytope {
    let small = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| -> i64 {
        lo + (rng.next_u64() % ((hi - lo + 1) as u64)) as i64
    };
    let cx = ratio(small(rng, 10, 90), 10);
    let cy = ratio(small(rng, 10, 90), 10);
    let mut hs = vec![
        Halfspace::from_ints(&[1, 0], 10),
        Halfspace::from_ints(&[-1, 0], 0),
        Halfspace::from_ints(&[0, 1], 10),
        Halfspace::from_ints(&[0, -1], 0),
    ];
    let k = small(rng, 3, 6);
    for _ in 0..k {
        let mut a = int(0);
        let mut b = int(0);
        while a.is_zero() && b.is_zero() {
            a = int(small(rng, -9, 9));
            b = int(small(rng, -9, 9));
        }
        let slack = ratio(small(rng, 5, 30), 10);
        let offset = &a * &cx + &b * &cy + slack;
        hs.push(Halfspace::new(vec![a, b], offset));
    }
    Polytope::from_halfspaces(2, hs).expect("bounded by the box")
}

#[test]
fn from_halfspaces_interval() {
    let p = Polytope::from_halfspaces(
        1,
        vec![Halfspace::from_ints(&[1], 1), Halfspace::from_ints(&[-1], 0)],
    )
    .unwrap();
    assert_eq!(p.vertices(), &[vec![int(0)], vec![int(1)]]);
}

#[test]
fn from_halfspaces_contradiction_is_empty() {
    // x <= 0 and x >= 1
    let p = Polytope::from_halfspaces(
        2,
        vec![
            Halfspace::from_ints(&[1, 0], 0),
            Halfspace::from_ints(&[-1, 0], -1),
        ],
    )
    .unwrap();
    assert!(p.is_empty());
    assert_eq!(p.diameter(), zero());
}

#[test]
fn from_halfspaces_removes_redundancy() {
    let mut hs = vec![
        Halfspace::from_ints(&[1, 0], 1),
        Halfspace::from_ints(&[-1, 0], 0),
        Halfspace::from_ints(&[0, 1], 1),
        Halfspace::from_ints(&[0, -1], 0),
        Halfspace::from_ints(&[1, 1], 5),
    ];
    let p = Polytope::from_halfspaces(2, hs.clone()).unwrap();
    assert_eq!(p.halfspaces().len(), 4);
    // oracle: the dropped constraint is slack at every vertex of the rest
    hs.pop();
    let square = Polytope::from_halfspaces(2, hs).unwrap();
    let max_sum = square
        .vertices()
        .iter()
        .map(|v| &v[0] + &v[1])
        .max()
        .unwrap();
    assert!(max_sum <= int(5));
    assert!(p.same_set(&square));
}

#[test]
fn from_halfspaces_rejects_unbounded() {
    let err = Polytope::from_halfspaces(2, vec![Halfspace::from_ints(&[1, 0], 1)]);
    assert_eq!(err.unwrap_err(), Error::UnboundedRegion);
}

#[test]
fn vertex_enumeration_box_and_simplex() {
    let b = unit_box(2);
    assert_eq!(
        b.vertices(),
        &[
            vec![int(0), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
            vec![int(1), int(1)],
        ]
    );
    let t = Polytope::from_halfspaces(
        2,
        vec![
            Halfspace::from_ints(&[-1, 0], 0),
            Halfspace::from_ints(&[0, -1], 0),
            Halfspace::from_ints(&[1, 1], 1),
        ],
    )
    .unwrap();
    assert_eq!(t.vertices().len(), 3);
    assert!(vertex_enumeration(&Polytope::empty(2)).is_err());
}

#[test]
fn vertex_enumeration_matches_pairwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let p = random_polytope_2d(&mut rng);
        // oracle: intersect every pair of constraint boundaries by Cramer's
        // rule and keep the feasible intersection points
        let hs = p.halfspaces();
        let mut expected: Vec<Point> = Vec::new();
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                let a = &hs[i].normal;
                let b = &hs[j].normal;
                let det = &a[0] * &b[1] - &a[1] * &b[0];
                if det.is_zero() {
                    continue;
                }
                let x = (&hs[i].offset * &b[1] - &hs[j].offset * &a[1]) / &det;
                let y = (&a[0] * &hs[j].offset - &b[0] * &hs[i].offset) / &det;
                let pt = vec![x, y];
                if p.contains(&pt) {
                    expected.push(pt);
                }
            }
        }
        expected.sort();
        expected.dedup();
        assert_eq!(p.vertices(), expected.as_slice());
    }
}

#[test]
fn intersect_idempotent_and_disjoint() {
    let b = unit_box(2);
    assert!(b.intersect(&b).same_set(&b));
    let far = box2(2, 3, 2, 3);
    assert!(b.intersect(&far).is_empty());
}

#[test]
fn intersect_overlapping_boxes() {
    let a = box2(0, 2, 0, 2);
    let b = box2(1, 3, 1, 3);
    let c = a.intersect(&b);
    assert!(c.same_set(&box2(1, 2, 1, 2)));
    // membership-sampling oracle on a quarter grid
    for i in 0..=12 {
        for j in 0..=12 {
            let pt = vec![ratio(i, 4), ratio(j, 4)];
            assert_eq!(c.contains(&pt), a.contains(&pt) && b.contains(&pt));
        }
    }
}

#[test]
fn affine_image_identity_scale_shear() {
    let b = unit_box(2);
    let id = b.affine_image(&Matrix::identity(2), &[zero(), zero()]).unwrap();
    assert!(id.same_set(&b));

    let two = Matrix::new(vec![vec![int(2), int(0)], vec![int(0), int(2)]]);
    let scaled = b.affine_image(&two, &[zero(), zero()]).unwrap();
    assert!(scaled.same_set(&box2(0, 2, 0, 2)));

    // shear: (x, y) -> (x + y, y); oracle maps the vertices directly
    let shear = Matrix::new(vec![vec![int(1), int(1)], vec![int(0), int(1)]]);
    let sheared = b.affine_image(&shear, &[zero(), zero()]).unwrap();
    let mut expected: Vec<Point> = b
        .vertices()
        .iter()
        .map(|v| shear.mul_vec(v))
        .collect();
    expected.sort();
    expected.dedup();
    assert_eq!(sheared.vertices(), expected.as_slice());
    assert!(b.affine_image(&Matrix::identity(2), &[zero(), zero()]).is_ok());
    assert!(Polytope::empty(2)
        .affine_image(&Matrix::identity(2), &[zero(), zero()])
        .is_err());
}

#[test]
fn project_box_shadow() {
    let b = unit_box(2);
    let shadow = b.project(&[0]);
    assert!(shadow.same_set(&Polytope::from_box(&[zero()], &[crate::scalar::one()])));
}

#[test]
fn project_coupled_strip() {
    // {(x,u) : 0 <= x <= 1, 2 <= x + u <= 3} projected onto u
    let p = Polytope::from_halfspaces(
        2,
        vec![
            Halfspace::from_ints(&[1, 0], 1),
            Halfspace::from_ints(&[-1, 0], 0),
            Halfspace::from_ints(&[1, 1], 3),
            Halfspace::from_ints(&[-1, -1], -2),
        ],
    )
    .unwrap();
    let v = p.project(&[1]);
    assert!(v.same_set(&Polytope::from_box(&[int(1)], &[int(3)])));
    // interval oracle: u is feasible iff [2-u, 3-u] meets [0, 1]
    for k in -8..=40 {
        let u = ratio(k, 8);
        let feasible = int(2) - &u <= int(1) && int(3) - &u >= int(0);
        assert_eq!(v.contains(&[u]), feasible);
    }
}

#[test]
fn project_simplex_matches_membership_oracle() {
    let simplex = Polytope::from_halfspaces(
        3,
        vec![
            Halfspace::from_ints(&[-1, 0, 0], 0),
            Halfspace::from_ints(&[0, -1, 0], 0),
            Halfspace::from_ints(&[0, 0, -1], 0),
            Halfspace::from_ints(&[1, 1, 1], 1),
        ],
    )
    .unwrap();
    let shadow = simplex.project(&[0, 1]);
    for i in 0..=8 {
        for j in 0..=8 {
            let pt = vec![ratio(i, 8), ratio(j, 8)];
            let inside = ratio(i, 8) + ratio(j, 8) <= int(1);
            assert_eq!(shadow.contains(&pt), inside);
        }
    }
}

#[test]
fn projection_soundness_and_completeness_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let p = random_polytope_2d(&mut rng);
        let shadow = p.project(&[0]);
        for v in p.vertices() {
            // every point of P shadows into the projection
            assert!(shadow.contains(&v[0..1]));
        }
        for v in shadow.vertices() {
            // every shadow point lifts to a feasible point of P
            let mut lifted = p.halfspaces().to_vec();
            lifted.push(Halfspace::new(vec![crate::scalar::one(), zero()], v[0].clone()));
            lifted.push(Halfspace::new(vec![-crate::scalar::one(), zero()], -&v[0]));
            assert!(crate::lp::feasible_point(&lifted, 2).is_some());
        }
    }
}

#[test]
fn set_difference_self_is_empty() {
    let b = unit_box(2);
    assert!(set_difference(&b, &b).is_empty());
}

#[test]
fn set_difference_half_overlap() {
    let a = box2(0, 2, 0, 2);
    let b = box2(1, 3, 0, 2);
    let d = set_difference(&a, &b);
    assert_eq!(d.parts().len(), 1);
    assert!(d.parts()[0].same_set(&box2(0, 1, 0, 2)));
    assert_eq!(d.volume(), int(2));
}

#[test]
fn set_difference_ring() {
    let outer = box2(0, 3, 0, 3);
    let inner = box2(1, 2, 1, 2);
    let d = set_difference(&outer, &inner);
    assert_eq!(d.parts().len(), 4);
    let total: Scalar = d.parts().iter().map(shoelace_area).sum();
    assert_eq!(total, int(8));
    assert_eq!(d.volume(), int(8));
}

#[test]
fn set_difference_partition_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..10 {
        let a = random_polytope_2d(&mut rng);
        let b = random_polytope_2d(&mut rng);
        let d = set_difference(&a, &b);
        let expected = a.volume() - a.intersect(&b).volume();
        let got: Scalar = d.parts().iter().map(Polytope::volume).sum();
        assert_eq!(got, expected);
        // pairwise disjoint interiors
        for (i, p) in d.parts().iter().enumerate() {
            for q in &d.parts()[i + 1..] {
                assert!(!p.intersect(q).has_interior());
            }
        }
    }
}

#[test]
fn diameter_examples() {
    assert_eq!(unit_box(2).diameter(), int(1));
    assert_eq!(Polytope::empty(2).diameter(), zero());
    let union = PolytopeSet::new(2, vec![unit_box(2), box2(2, 3, 0, 1)]);
    assert_eq!(union.diameter(), int(3));
}

#[test]
fn dp_distance_examples() {
    let b = PolytopeSet::from_polytope(unit_box(2));
    assert_eq!(dp_distance(&b, &b).unwrap(), zero());

    let shifted = PolytopeSet::from_polytope(box2(1, 2, 0, 1));
    assert_eq!(dp_distance(&b, &shifted).unwrap(), int(2));
    assert_eq!(dp_distance(&shifted, &b).unwrap(), int(2));

    let point = PolytopeSet::from_polytope(Polytope::singleton(&[ratio(1, 2), ratio(1, 2)]));
    assert_eq!(dp_distance(&point, &PolytopeSet::empty(2)).unwrap(), zero());

    let wrong_dim = PolytopeSet::empty(3);
    assert!(dp_distance(&b, &wrong_dim).is_err());
}

#[test]
fn dp_is_a_pseudo_metric_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let x = PolytopeSet::from_polytope(random_polytope_2d(&mut rng));
        let y = PolytopeSet::from_polytope(random_polytope_2d(&mut rng));
        let z = PolytopeSet::from_polytope(random_polytope_2d(&mut rng));
        assert_eq!(dp_distance(&x, &x).unwrap(), zero());
        let xy = dp_distance(&x, &y).unwrap();
        assert_eq!(xy, dp_distance(&y, &x).unwrap());
        let xz = dp_distance(&x, &z).unwrap();
        let zy = dp_distance(&z, &y).unwrap();
        assert!(xy <= xz + zy);
    }
}

#[test]
fn representation_round_trip() {
    // hull the vertex set back into halfspaces (2D edge walk) and compare
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        let p = random_polytope_2d(&mut rng);
        let vs = p.vertices();
        let n = int(vs.len() as i64);
        let cx: Scalar = vs.iter().map(|v| v[0].clone()).sum::<Scalar>() / &n;
        let cy: Scalar = vs.iter().map(|v| v[1].clone()).sum::<Scalar>() / &n;
        let mut hs = Vec::new();
        for a in vs {
            for b in vs {
                if a == b {
                    continue;
                }
                // edge direction (b - a), outward normal (dy, -dx) oriented
                // away from the centroid
                let mut normal = vec![&b[1] - &a[1], &a[0] - &b[0]];
                let mut offset = &normal[0] * &a[0] + &normal[1] * &a[1];
                let at_center = &normal[0] * &cx + &normal[1] * &cy;
                if at_center > offset {
                    normal = vec![-&normal[0], -&normal[1]];
                    offset = -offset;
                }
                if vs.iter().all(|v| &normal[0] * &v[0] + &normal[1] * &v[1] <= offset) {
                    hs.push(Halfspace::new(normal, offset));
                }
            }
        }
        let rebuilt = Polytope::from_halfspaces(2, hs).unwrap();
        assert!(rebuilt.same_set(&p));
    }
}

#[test]
fn volume_agrees_with_shoelace_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    assert_eq!(unit_box(2).volume(), int(1));
    assert_eq!(unit_box(3).volume(), int(1));
    let t = Polytope::from_halfspaces(
        2,
        vec![
            Halfspace::from_ints(&[-1, 0], 0),
            Halfspace::from_ints(&[0, -1], 0),
            Halfspace::from_ints(&[1, 1], 1),
        ],
    )
    .unwrap();
    assert_eq!(t.volume(), ratio(1, 2));
    // degenerate: a segment has zero area
    let seg = Polytope::from_box(&[int(0), int(1)], &[int(1), int(1)]);
    assert_eq!(seg.volume(), zero());
    for _ in 0..15 {
        let p = random_polytope_2d(&mut rng);
        assert_eq!(p.volume(), shoelace_area(&p));
    }
    // 3D spot check: simplex volume 1/6
    let s3 = Polytope::from_halfspaces(
        3,
        vec![
            Halfspace::from_ints(&[-1, 0, 0], 0),
            Halfspace::from_ints(&[0, -1, 0], 0),
            Halfspace::from_ints(&[0, 0, -1], 0),
            Halfspace::from_ints(&[1, 1, 1], 1),
        ],
    )
    .unwrap();
    assert_eq!(s3.volume(), ratio(1, 6));
}

#[test]
fn union_volume_handles_overlaps() {
    let a = box2(0, 2, 0, 1);
    let b = box2(1, 3, 0, 1);
    assert_eq!(union_volume(&[a.clone(), b.clone()]), int(3));
    assert_eq!(union_volume(&[a.clone(), a.clone()]), int(2));
    let set = PolytopeSet::new(2, vec![a, b]);
    assert_eq!(set.volume(), int(3));
}

#[test]
fn containment_up_to_null() {
    let big = PolytopeSet::from_polytope(box2(0, 3, 0, 3));
    let small = PolytopeSet::new(2, vec![box2(0, 1, 0, 3), box2(1, 3, 0, 3)]);
    assert!(big.contains_set_up_to_null(&small));
    assert!(small.contains_set_up_to_null(&big));
    assert!(big.same_set_up_to_null(&small));
    let poke = PolytopeSet::from_polytope(box2(2, 4, 0, 1));
    assert!(!big.contains_set_up_to_null(&poke));
}

#[test]
fn simplex_optimum_matches_vertex_maximum() {
    // two independent routes: the LP solver against brute-force vertex
    // enumeration, on random objectives
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..10 {
        let p = random_polytope_2d(&mut rng);
        for _ in 0..4 {
            let mut c = vec![zero(), zero()];
            while c.iter().all(num_traits::Zero::is_zero) {
                c = vec![
                    int((rng.next_u64() % 11) as i64 - 5),
                    int((rng.next_u64() % 11) as i64 - 5),
                ];
            }
            let by_vertices = p
                .vertices()
                .iter()
                .map(|v| crate::linalg::dot(&c, v))
                .max()
                .unwrap();
            match crate::lp::maximize(p.halfspaces(), 2, &c) {
                crate::lp::LpOutcome::Optimal { value, point } => {
                    assert_eq!(value, by_vertices);
                    assert!(p.contains(&point));
                }
                other => panic!("expected an optimum, got {other:?}"),
            }
        }
    }
}

#[test]
fn single_coordinate_projection_equals_bbox_interval() {
    // the Fourier-Motzkin shadow onto one axis must be the bounding-box
    // interval computed from the vertex set
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..10 {
        let p = random_polytope_2d(&mut rng);
        let (lo, hi) = p.bbox().unwrap();
        for k in 0..2 {
            let shadow = p.project(&[k]);
            let expected = Polytope::from_box(
                std::slice::from_ref(&lo[k]),
                std::slice::from_ref(&hi[k]),
            );
            assert!(shadow.same_set(&expected));
        }
    }
}

#[test]
fn canonical_halfspaces_are_tight_at_vertices() {
    // after redundancy removal every constraint supports a face
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..10 {
        let p = random_polytope_2d(&mut rng);
        for hs in p.halfspaces() {
            assert!(p
                .vertices()
                .iter()
                .any(|v| crate::linalg::dot(&hs.normal, v) == hs.offset));
        }
        for v in p.vertices() {
            assert!(p.contains(v));
        }
    }
}

#[test]
fn geometry_values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Polytope>();
    assert_send_sync::<PolytopeSet>();
    assert_send_sync::<Halfspace>();
}

#[test]
fn gaussian_solver_is_used_consistently() {
    // keep solve_square honest on a rectangular-free 3x3 instance
    let a = vec![
        vec![int(2), int(1), int(0)],
        vec![int(0), int(1), int(1)],
        vec![int(1), int(0), int(2)],
    ];
    let x = solve_square(&a, &[int(3), int(2), int(3)]).unwrap();
    assert_eq!(x, vec![int(1), int(1), int(1)]);
}
