use super::*;

fn pt(coords: &[i64]) -> LatticePoint {
    LatticePoint(coords.to_vec())
}

fn rq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// hull of {0, (3,1), (1,3)}: the polytope of Figure 1.
fn figure1() -> IntegralPolytope {
    IntegralPolytope::hull(&[pt(&[0, 0]), pt(&[3, 1]), pt(&[1, 3])], 2).unwrap()
}

fn unit_simplex(n: usize) -> IntegralPolytope {
    let mut pts = vec![LatticePoint::origin(n)];
    for i in 0..n {
        let mut c = vec![0; n];
        c[i] = 1;
        pts.push(LatticePoint(c));
    }
    IntegralPolytope::hull(&pts, n).unwrap()
}

fn interval(a: i64, b: i64) -> IntegralPolytope {
    IntegralPolytope::hull(&[pt(&[a]), pt(&[b])], 1).unwrap()
}

#[test]
fn hull_single_point() {
    let p = IntegralPolytope::hull(&[pt(&[0, 0])], 2).unwrap();
    assert_eq!(p.vertices().len(), 1);
    assert_eq!(p.affine_dim(), 0);
    assert!(p.is_degenerate());
}

#[test]
fn hull_absorbs_interior_point() {
    let p = IntegralPolytope::hull(
        &[pt(&[0, 0]), pt(&[1, 1]), pt(&[3, 1]), pt(&[1, 3])],
        2,
    )
    .unwrap();
    let vs: Vec<&[i64]> = p.vertices().iter().map(|v| v.coords()).collect();
    assert_eq!(vs, vec![&[0, 0][..], &[1, 3], &[3, 1]]);
}

#[test]
fn hull_origin_on_boundary_edge() {
    // Deligne-type vertex set for n = 2, d = 4: the origin is interior to
    // the edge from (-1,0,0) to (1,0,0), hence not a vertex.
    let p = IntegralPolytope::hull(
        &[
            pt(&[-1, 0, 0]),
            pt(&[1, 0, 0]),
            pt(&[1, 4, 0]),
            pt(&[1, 0, 4]),
            pt(&[0, 0, 0]),
        ],
        3,
    )
    .unwrap();
    let vs: Vec<&[i64]> = p.vertices().iter().map(|v| v.coords()).collect();
    assert_eq!(
        vs,
        vec![&[-1, 0, 0][..], &[1, 0, 0], &[1, 0, 4], &[1, 4, 0]]
    );
    assert!(p.contains_origin());
    assert_eq!(p.facets().len(), 4); // tetrahedron
}

#[test]
fn facets_not_containing_origin_examples() {
    let fig1 = figure1();
    let away = fig1.facets_not_containing_origin().unwrap();
    assert_eq!(away.len(), 1);
    assert_eq!(away[0].scaled_normal(), vec![rq(1, 4), rq(1, 4)]);
    assert_eq!(away[0].face_denominator().unwrap(), 4);

    let simplex = unit_simplex(2);
    let away = simplex.facets_not_containing_origin().unwrap();
    assert_eq!(away.len(), 1);
    assert_eq!(away[0].scaled_normal(), vec![rq(1, 1), rq(1, 1)]);
    assert_eq!(away[0].face_denominator().unwrap(), 1);
}

#[test]
fn facets_error_when_origin_outside() {
    let p = IntegralPolytope::hull(&[pt(&[1, 1]), pt(&[2, 1]), pt(&[1, 2])], 2).unwrap();
    assert!(!p.contains_origin());
    assert!(matches!(
        p.facets_not_containing_origin(),
        Err(Error::InvalidPolytope(_))
    ));
}

#[test]
fn polytope_denominator_examples() {
    assert_eq!(figure1().polytope_denominator().unwrap(), 4);
    let square = IntegralPolytope::hull(
        &[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])],
        2,
    )
    .unwrap();
    assert_eq!(square.polytope_denominator().unwrap(), 1);
}

#[test]
fn weight_examples() {
    let fig1 = figure1();
    assert_eq!(
        fig1.weight(&pt(&[0, 0])).unwrap(),
        Weight::Finite(Rat::zero())
    );
    assert_eq!(fig1.weight(&pt(&[1, 0])).unwrap(), Weight::Infinite);
    assert_eq!(
        fig1.weight(&pt(&[1, 1])).unwrap(),
        Weight::Finite(rq(1, 2))
    );
    // LP route agrees.
    assert_eq!(fig1.weight_via_lp(&pt(&[1, 0])).unwrap(), Weight::Infinite);
    assert_eq!(
        fig1.weight_via_lp(&pt(&[1, 1])).unwrap(),
        Weight::Finite(rq(1, 2))
    );
}

#[test]
fn weight_on_deligne_cone() {
    // u = r1*(-e0) + r2*(e0 + 4 e1) with r1 = r2 = 1/4 is (0, 1, 0);
    // its weight is 2/4.
    let p = IntegralPolytope::hull(
        &[
            pt(&[-1, 0, 0]),
            pt(&[1, 0, 0]),
            pt(&[1, 4, 0]),
            pt(&[1, 0, 4]),
        ],
        3,
    )
    .unwrap();
    assert_eq!(p.weight(&pt(&[0, 1, 0])).unwrap(), Weight::Finite(rq(1, 2)));
    assert_eq!(
        p.weight_via_lp(&pt(&[0, 1, 0])).unwrap(),
        Weight::Finite(rq(1, 2))
    );
}

#[test]
fn weighted_counts_figure1() {
    let data = figure1().weighted_lattice_counts().unwrap();
    assert_eq!(data.denominator, 4);
    assert_eq!(&data.counts[..5], &[1, 0, 1, 2, 3]);
}

#[test]
fn weighted_counts_interval_and_simplex() {
    let data = interval(0, 1).weighted_lattice_counts().unwrap();
    assert_eq!(data.denominator, 1);
    assert_eq!(data.counts, vec![1, 1]);

    let data = unit_simplex(2).weighted_lattice_counts().unwrap();
    assert_eq!(data.denominator, 1);
    assert_eq!(&data.counts[..2], &[1, 2]);
}

#[test]
fn hodge_numbers_figure1() {
    let data = figure1().hodge_numbers().unwrap();
    assert_eq!(data.hodge, vec![1, 0, 1, 2, 1, 2, 1, 0, 0]);
    assert_eq!(data.hodge.iter().sum::<i64>(), 8);
    assert!(data.negative_hodge.is_empty());
}

#[test]
fn hodge_numbers_intervals() {
    let data = interval(0, 1).hodge_numbers().unwrap();
    assert_eq!(data.hodge, vec![1, 0]);
    let data = interval(0, 2).hodge_numbers().unwrap();
    assert_eq!(data.denominator, 2);
    assert_eq!(data.hodge, vec![1, 1, 0]);
}

#[test]
fn hodge_polygon_figure1_matches_labeled_points() {
    let hp = figure1().hodge_polygon().unwrap();
    let expected = vec![
        (0, rq(0, 1)),
        (1, rq(0, 1)),
        (2, rq(1, 2)),
        (4, rq(2, 1)),
        (5, rq(3, 1)),
        (7, rq(11, 2)),
        (8, rq(7, 1)),
    ];
    assert_eq!(hp.vertices(), &expected[..]);
}

#[test]
fn hodge_polygon_intervals() {
    let hp = interval(0, 1).hodge_polygon().unwrap();
    assert_eq!(hp.vertices(), &[(0, rq(0, 1)), (1, rq(0, 1))]);
    let hp = interval(0, 2).hodge_polygon().unwrap();
    assert_eq!(
        hp.vertices(),
        &[(0, rq(0, 1)), (1, rq(0, 1)), (2, rq(1, 2))]
    );
}

#[test]
fn normalized_volume_examples() {
    assert_eq!(figure1().normalized_volume().unwrap(), 8);
    for n in 1..=3 {
        assert_eq!(unit_simplex(n).normalized_volume().unwrap(), 1);
    }
    // Full Deligne polytope for n = 2, d = 4 (Figure 3 solid): 16 + 16.
    let p = IntegralPolytope::hull(
        &[
            pt(&[-1, 0, 0]),
            pt(&[1, 0, 0]),
            pt(&[1, 4, 0]),
            pt(&[1, 0, 4]),
        ],
        3,
    )
    .unwrap();
    assert_eq!(p.normalized_volume().unwrap(), 32);
}

#[test]
fn lower_hull_examples() {
    let h = lower_hull(&[(0, rq(0, 1)), (1, rq(0, 1))]).unwrap();
    assert_eq!(h.vertices().len(), 2);

    let h = lower_hull(&[(0, rq(0, 1)), (1, rq(0, 1)), (2, rq(1, 2))]).unwrap();
    assert_eq!(h.vertices().len(), 3);

    let h = lower_hull(&[(0, rq(0, 1)), (1, rq(1, 1)), (2, rq(1, 1))]).unwrap();
    assert_eq!(h.vertices(), &[(0, rq(0, 1)), (2, rq(1, 1))]);
}

#[test]
fn lower_hull_rejects_bad_input() {
    assert!(lower_hull(&[]).is_err());
    assert!(lower_hull(&[(0, rq(0, 1)), (0, rq(1, 1))]).is_err());
}

#[test]
fn polygon_compare_examples() {
    let red = figure1().hodge_polygon().unwrap();
    let blue = LowerConvexPolygon::new(vec![(0, rq(0, 1)), (1, rq(0, 1)), (8, rq(7, 1))]).unwrap();

    let same = polygon_compare(&red, &red);
    assert!(same.equal && same.lies_above && same.endpoints_equal);
    assert_eq!(same.first_divergence, None);

    let ab = polygon_compare(&blue, &red);
    assert!(ab.lies_above && !ab.equal && ab.endpoints_equal);
    assert_eq!(ab.first_divergence, Some(2));

    // A dips below B at x = 2.
    let a = LowerConvexPolygon::new(vec![(0, rq(0, 1)), (2, rq(0, 1)), (3, rq(1, 1))]).unwrap();
    let b = LowerConvexPolygon::new(vec![(0, rq(0, 1)), (1, rq(0, 1)), (3, rq(1, 1))]).unwrap();
    let r = polygon_compare(&a, &b);
    assert!(!r.lies_above);
    assert_eq!(r.first_divergence, Some(2));
}

#[test]
fn polygon_serde_roundtrip() {
    let hp = figure1().hodge_polygon().unwrap();
    let json = serde_json::to_string(&hp).unwrap();
    assert!(json.contains("[2,1,2]")); // (2, 1/2) as [x, num, den]
    let back: LowerConvexPolygon = serde_json::from_str(&json).unwrap();
    assert_eq!(back, hp);
}

#[test]
fn polytope_file_roundtrip_with_facets() {
    let p = figure1();
    let file = PolytopeFile::from_polytope(&p);
    let json = serde_json::to_string(&file).unwrap();
    let parsed: PolytopeFile = serde_json::from_str(&json).unwrap();
    let rebuilt = parsed.build().unwrap();
    assert_eq!(rebuilt.vertices(), p.vertices());
    assert_eq!(rebuilt.polytope_denominator().unwrap(), 4);
}

#[test]
fn explicit_facets_four_dimensional_simplex() {
    // 4-dimensional Deligne-type polytope (n = 3, d = 2): a simplex on
    // -e0, e0, e0 + 2 e_i. Facets are supplied, as the file format requires.
    let verts = vec![
        pt(&[-1, 0, 0, 0]),
        pt(&[1, 0, 0, 0]),
        pt(&[1, 2, 0, 0]),
        pt(&[1, 0, 2, 0]),
        pt(&[1, 0, 0, 2]),
    ];
    let facets: Vec<(Vec<Rat>, bool)> = vec![
        (vec![rq(-1, 1), rq(1, 1), rq(1, 1), rq(1, 1)], false), // delta_d
        (vec![rq(1, 1), rq(0, 1), rq(0, 1), rq(0, 1)], false),  // delta_d'
        (vec![rq(0, 1), rq(-1, 1), rq(0, 1), rq(0, 1)], true),
        (vec![rq(0, 1), rq(0, 1), rq(-1, 1), rq(0, 1)], true),
        (vec![rq(0, 1), rq(0, 1), rq(0, 1), rq(-1, 1)], true),
    ];
    let p = IntegralPolytope::with_explicit_facets(&verts, 4, &facets).unwrap();
    assert_eq!(p.polytope_denominator().unwrap(), 1); // d = 2 is even: d/2 = 1
    // Volume recursion through 3-dimensional facet sub-polytopes:
    // |det(2e0, 2e0+2e1, 2e0+2e2, 2e0+2e3)| = 16.
    let vol = p.normalized_volume().unwrap();
    assert_eq!(vol, 16);
}

#[test]
fn hull_dimension_guards() {
    assert!(matches!(
        IntegralPolytope::hull(&[pt(&[0; 5])], 5),
        Err(Error::UnsupportedDimension(5))
    ));
    // Full-dimensional 4-polytopes need explicit facets.
    let mut pts = vec![LatticePoint::origin(4), pt(&[-1, 0, 0, 0])];
    for i in 0..4 {
        let mut c = vec![0; 4];
        c[i] = 1;
        pts.push(LatticePoint(c));
    }
    assert!(matches!(
        IntegralPolytope::hull(&pts, 4),
        Err(Error::UnsupportedDimension(4))
    ));
}

#[test]
fn proper_faces_of_simplex() {
    let p = unit_simplex(2);
    let faces = proper_faces(&p).unwrap();
    // A triangle has 3 edges + 3 vertices.
    assert_eq!(faces.len(), 6);
    let fig1 = figure1();
    let faces = proper_faces(&fig1).unwrap();
    assert_eq!(faces.len(), 6);
}

#[test]
fn lattice_points_of_figure1() {
    let pts = figure1().lattice_points().unwrap();
    assert_eq!(pts.len(), 7);
}
