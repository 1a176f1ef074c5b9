use super::*;
use crate::geometry::polygon_compare;
use crate::lfunction::GroundField;

fn rq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn deligne_polytope_n2_d4() {
    let g = deligne_polytope(2, 4).unwrap();
    let vs: Vec<&[i64]> = g.polytope.vertices().iter().map(|v| v.coords()).collect();
    assert_eq!(
        vs,
        vec![&[-1, 0, 0][..], &[1, 0, 0], &[1, 0, 4], &[1, 4, 0]]
    );
    let delta = &g.polytope.facets()[g.delta_facet];
    let dv: Vec<&[i64]> = delta
        .vertex_indices
        .iter()
        .map(|&i| g.polytope.vertices()[i].coords())
        .collect();
    assert_eq!(dv, vec![&[-1, 0, 0][..], &[1, 0, 4], &[1, 4, 0]]);
    assert_eq!(delta.face_denominator().unwrap(), 2);
    let prime = &g.polytope.facets()[g.delta_prime_facet];
    assert_eq!(prime.face_denominator().unwrap(), 1);
    // Only those two facets avoid the origin.
    assert_eq!(
        g.polytope.facets_not_containing_origin().unwrap().len(),
        2
    );
    assert_eq!(g.cone_delta.normalized_volume().unwrap(), 16);
    assert_eq!(g.cone_delta_prime.normalized_volume().unwrap(), 16);
    assert_eq!(g.polytope.normalized_volume().unwrap(), 32);
}

#[test]
fn deligne_polytope_n1_d2() {
    let g = deligne_polytope(1, 2).unwrap();
    let vs: Vec<&[i64]> = g.polytope.vertices().iter().map(|v| v.coords()).collect();
    assert_eq!(vs, vec![&[-1, 0][..], &[1, 0], &[1, 2]]);
    assert!(g.polytope.contains_origin());
    assert_eq!(g.polytope.polytope_denominator().unwrap(), 1); // d even: d/2
}

#[test]
fn deligne_polytope_n2_d3() {
    let g = deligne_polytope(2, 3).unwrap();
    let delta = &g.polytope.facets()[g.delta_facet];
    assert_eq!(delta.face_denominator().unwrap(), 3);
    assert_eq!(g.polytope.polytope_denominator().unwrap(), 3);
}

#[test]
fn deligne_polytope_n3_builds_in_dimension_4() {
    let g = deligne_polytope(3, 4).unwrap();
    assert_eq!(g.polytope.ambient_dim(), 4);
    assert_eq!(g.polytope.polytope_denominator().unwrap(), 2);
    // 4! V = |det| of the two simplices: 2 * d^3 = 128.
    assert_eq!(g.polytope.normalized_volume().unwrap(), 128);
}

#[test]
fn closed_form_matches_denominator() {
    assert_eq!(d_closed_form(4), 2);
    assert_eq!(d_closed_form(3), 3);
    assert_eq!(d_closed_form(2), 1);
    for d in 2..=10 {
        let g = deligne_polytope(2, d).unwrap();
        assert_eq!(
            g.polytope.polytope_denominator().unwrap(),
            d_closed_form(d),
            "d = {d}"
        );
    }
}

#[test]
fn unit_box_paper_matrix() {
    let set = unit_box_solve(&[vec![-1, 1], vec![0, 4]]).unwrap();
    assert_eq!(set.det, -4);
    let expected: Vec<Vec<Rat>> = (0..4).map(|k| vec![rq(k, 4), rq(k, 4)]).collect();
    assert_eq!(set.solutions, expected);
    let weights = set.weights();
    assert_eq!(weights[1], rq(1, 2)); // w((1/4, 1/4)) = 2/4
}

#[test]
fn unit_box_identity_and_errors() {
    let set = unit_box_solve(&[vec![1, 0], vec![0, 1]]).unwrap();
    assert_eq!(set.solutions, vec![vec![rq(0, 1), rq(0, 1)]]);
    assert!(matches!(
        unit_box_solve(&[vec![1, 2], vec![2, 4]]),
        Err(Error::Precondition(_))
    ));
}

/// Brute-force oracle: every solution has denominator dividing |det M|, so
/// scanning the grid (1/|det|) Z^m in the unit box finds them all.
fn grid_oracle(matrix: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let m = matrix.len();
    let big: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let det = determinant(&big).to_i64().unwrap().unsigned_abs();
    let mut out = Vec::new();
    let mut idx = vec![0u64; m];
    loop {
        let r: Vec<Rat> = idx
            .iter()
            .map(|&j| rq(j as i64, det as i64))
            .collect();
        let integral = (0..m).all(|row| {
            let v: Rat = (0..m)
                .map(|col| Rat::from(BigInt::from(matrix[row][col])) * &r[col])
                .sum();
            v.is_integer()
        });
        if integral {
            out.push(r);
        }
        let mut i = m;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < det {
                break false;
            }
            idx[i] = 0;
        };
        if done {
            break;
        }
    }
    out.sort();
    out
}

#[test]
fn unit_box_matches_grid_oracle() {
    let cases = vec![
        vec![vec![-1, 1], vec![0, 4]],
        vec![vec![2, 1], vec![1, 3]],
        vec![vec![3, 0], vec![0, 3]],
        vec![vec![1, 1, 1], vec![0, 4, 0], vec![0, 0, 4]],
        vec![vec![-1, 1, 1], vec![0, 3, 0], vec![0, 0, 3]],
        vec![vec![2, -1], vec![1, 2]],
    ];
    for m in cases {
        let set = unit_box_solve(&m).unwrap();
        let oracle = grid_oracle(&m);
        assert_eq!(set.solutions, oracle, "matrix {m:?}");
        assert_eq!(set.solutions.len() as i64, set.det.abs());
    }
}

#[test]
fn p_action_examples_d4_p3() {
    let set = unit_box_solve(&[vec![-1, 1], vec![0, 4]]).unwrap();
    let report = p_action_orbits(&set, 3).unwrap();
    assert!(!report.stable);
    // (0,0) fixed with weight 0; (1/2,1/2) fixed with weight 1; the orbit
    // {(1/4,1/4),(3/4,3/4)} carries weights {1/2, 3/2}.
    let unstable: Vec<&OrbitReport> =
        report.orbits.iter().filter(|o| !o.stable).collect();
    assert_eq!(unstable.len(), 1);
    let mut w = unstable[0].weights.clone();
    w.sort_by_key(|r| (r.1, r.0));
    assert_eq!(w, vec![RatPair(1, 2), RatPair(3, 2)]);
    for o in report.orbits.iter().filter(|o| o.stable) {
        assert!(o.members.len() == 1, "stable orbits here are fixed points");
    }
}

#[test]
fn p_action_requires_coprime_p() {
    let set = unit_box_solve(&[vec![-1, 1], vec![0, 4]]).unwrap();
    let err = p_action_orbits(&set, 2).unwrap_err();
    assert!(err.to_string().contains("det M = -4"));
}

#[test]
fn p_action_is_a_permutation() {
    for (m, ps) in [
        (vec![vec![-1, 1], vec![0, 8]], vec![3u64, 5, 7]),
        (vec![vec![1, 1, 1], vec![0, 3, 0], vec![0, 0, 3]], vec![5, 7]),
    ] {
        let set = unit_box_solve(&m).unwrap();
        for p in ps {
            let report = p_action_orbits(&set, p).unwrap();
            let total: usize = report.orbits.iter().map(|o| o.members.len()).sum();
            assert_eq!(total, set.solutions.len());
        }
    }
}

#[test]
fn face_stability_tau_unstable() {
    let g = deligne_polytope(2, 4).unwrap();
    let tau = vec![LatticePoint(vec![-1, 0, 0]), LatticePoint(vec![1, 4, 0])];
    let report = face_stability(&g.polytope, &tau, 3).unwrap();
    assert_eq!(report.matrix, vec![vec![-1, 1], vec![0, 4]]);
    assert_eq!(report.det, -4);
    assert!(!report.stable);
}

#[test]
fn face_stability_delta3_stable_at_7() {
    let g = deligne_polytope(2, 3).unwrap();
    let delta = vec![
        LatticePoint(vec![-1, 0, 0]),
        LatticePoint(vec![1, 3, 0]),
        LatticePoint(vec![1, 0, 3]),
    ];
    let report = face_stability(&g.polytope, &delta, 7).unwrap();
    assert_eq!(report.solutions.len(), 9);
    assert!(report.stable);
    // p = 1 mod the solution denominators: every orbit is a fixed point.
    assert!(report.orbits.iter().all(|o| o.members.len() == 1));
}

#[test]
fn face_stability_rejects_bad_parametrizations() {
    let g = deligne_polytope(2, 4).unwrap();
    // (0, 1, 0) has weight 1/2 and lies on no facet avoiding the origin.
    let bad = vec![LatticePoint(vec![0, 1, 0]), LatticePoint(vec![1, 4, 0])];
    assert!(matches!(
        face_stability(&g.polytope, &bad, 3),
        Err(Error::FaceParametrization(_))
    ));
    // Two vertices with three surviving coordinates: no square projection.
    let skew = vec![LatticePoint(vec![1, 4, 0]), LatticePoint(vec![1, 0, 4])];
    assert!(matches!(
        face_stability(&g.polytope, &skew, 3),
        Err(Error::FaceParametrization(_))
    ));
}

#[test]
fn necessary_condition_examples() {
    let g4 = deligne_polytope(2, 4).unwrap();
    let nc = necessary_condition(3, &g4.polytope).unwrap();
    assert_eq!(nc.denominator, 2);
    assert!(nc.congruent);

    let g3 = deligne_polytope(2, 3).unwrap();
    let nc = necessary_condition(5, &g3.polytope).unwrap();
    assert_eq!(nc.denominator, 3);
    assert!(!nc.congruent);

    let square = IntegralPolytope::hull(
        &[
            LatticePoint(vec![0, 0]),
            LatticePoint(vec![1, 0]),
            LatticePoint(vec![0, 1]),
            LatticePoint(vec![1, 1]),
        ],
        2,
    )
    .unwrap();
    let nc = necessary_condition(7, &square).unwrap();
    assert_eq!(nc.denominator, 1);
    assert!(nc.congruent);
}

#[test]
fn facial_diagnosis_examples() {
    // Delta_4 at p = 3: a simplex facet carries unstable orbits.
    let g = deligne_polytope(2, 4).unwrap();
    let diag = facial_diagnosis(&g.polytope, 3).unwrap();
    assert!(diag.necessary_congruence);
    assert!(diag.verdict.contains("unstable"));
    assert_eq!(diag.facets.len(), 2);
    assert!(diag.facets.iter().all(|f| f.simplex));
    assert!(diag.facets.iter().all(|f| !f.diagonal));

    // Delta_3 at p = 7: everything stable.
    let g = deligne_polytope(2, 3).unwrap();
    let diag = facial_diagnosis(&g.polytope, 7).unwrap();
    assert_eq!(diag.verdict, "all faces stable");

    // The unit interval is stable for any p.
    let interval =
        IntegralPolytope::hull(&[LatticePoint(vec![0]), LatticePoint(vec![1])], 1).unwrap();
    for p in [2u64, 3, 5] {
        let diag = facial_diagnosis(&interval, p).unwrap();
        assert_eq!(diag.verdict, "all faces stable");
    }
}

#[test]
fn counterexample_d4_p3() {
    let report = counterexample_driver(2, 4, 3).unwrap();
    assert_eq!(report.denominator, 2);
    assert!(report.le_hypothesis_holds);
    assert_eq!(report.matrix, vec![vec![-1, 1], vec![0, 4]]);
    assert_eq!(report.det, -4);
    assert_eq!(report.solutions.len(), 4);
    assert_eq!(report.unstable_odd_k_below_half, vec![1]);
    let unstable: Vec<_> = report.orbits.iter().filter(|o| !o.stable).collect();
    assert_eq!(unstable.len(), 1);
    let mut w = unstable[0].weights.clone();
    w.sort_by_key(|r| (r.1, r.0));
    assert_eq!(w, vec![RatPair(1, 2), RatPair(3, 2)]);
    assert_eq!(report.verdict, "not generically ordinary");
    assert_eq!(
        report.boundary_subpolytope,
        vec![vec![0, 0, 0], vec![-1, 0, 0], vec![1, 4, 0], vec![1, 3, 1]]
    );
}

#[test]
fn counterexample_d8_p5() {
    let report = counterexample_driver(2, 8, 5).unwrap();
    assert_eq!(report.denominator, 4);
    assert!(report.le_hypothesis_holds);
    assert_eq!(report.det, -8);
    assert_eq!(report.unstable_odd_k_below_half, vec![1, 3]);
    // {5 * 1/8} = 5/8 = 1/8 + 1/2, as the shifted fractional parts demand.
    assert_eq!(report.verdict, "not generically ordinary");
}

#[test]
fn counterexample_verdict_invariant_mod_d() {
    // p = 7 = 3 (mod 4) gives the same orbit structure as p = 3.
    let a = counterexample_driver(2, 4, 3).unwrap();
    let b = counterexample_driver(2, 4, 7).unwrap();
    assert_eq!(a.unstable_k, b.unstable_k);
    assert_eq!(a.verdict, b.verdict);
}

#[test]
fn counterexample_rejects_bad_parameters() {
    assert!(matches!(counterexample_driver(1, 4, 3), Err(Error::Precondition(_))));
    assert!(matches!(counterexample_driver(2, 6, 3), Err(Error::Precondition(_))));
    let err = counterexample_driver(2, 4, 5).unwrap_err();
    assert!(err.to_string().contains("d/2 + 1"));
}

#[test]
fn sample_family_shapes() {
    // n = 1, d = 2: x0 h(x1) + g + 1/x0 with deg h = 2 and g constant.
    let fs = sample_family(1, 2, 3, 3, 1).unwrap();
    for f in &fs {
        assert_eq!(f.n_vars(), 2);
        assert!(f.coeff(&[-1, 0]) != 0);
        assert!(f.coeff(&[1, 2]) != 0);
        assert!(f.terms().keys().all(|e| e[0] != 0 || e[1] == 0));
    }
    // n = 2, d = 4: deg g <= 1.
    let fs = sample_family(2, 4, 3, 2, 7).unwrap();
    let geometry = deligne_polytope(2, 4).unwrap();
    for f in &fs {
        for e in f.terms().keys() {
            if e[0] == 0 && !(e[1] == 0 && e[2] == 0) {
                assert!(e[1] + e[2] <= 1, "deg g < d/2 violated by {e:?}");
            }
        }
        assert_eq!(
            f.newton_polytope().unwrap().vertices(),
            geometry.polytope.vertices()
        );
    }
    // Determinism in the seed.
    let a = sample_family(2, 4, 3, 2, 42).unwrap();
    let b = sample_family(2, 4, 3, 2, 42).unwrap();
    assert_eq!(a, b);
}

#[test]
fn gnp_sample_ordinary_intervals() {
    let ground = GroundField::new(3, 1).unwrap();
    let settings = SumSettings::new(ground);

    let interval =
        IntegralPolytope::hull(&[LatticePoint(vec![0]), LatticePoint(vec![1])], 1).unwrap();
    let report = gnp_sample(GnpTarget::Polytope(&interval), &settings, 5, 1).unwrap();
    let hp = interval.hodge_polygon().unwrap();
    assert_eq!(report.sampled_upper_bound, hp);

    let interval2 =
        IntegralPolytope::hull(&[LatticePoint(vec![0]), LatticePoint(vec![2])], 1).unwrap();
    let report = gnp_sample(GnpTarget::Polytope(&interval2), &settings, 5, 1).unwrap();
    let hp = interval2.hodge_polygon().unwrap();
    assert_eq!(report.sampled_upper_bound, hp);
    assert_eq!(
        hp.vertices(),
        &[(0, rq(0, 1)), (1, rq(0, 1)), (2, rq(1, 2))]
    );
}

#[test]
fn gnp_sample_stays_above_hodge_polygon() {
    let ground = GroundField::new(5, 1).unwrap();
    let settings = SumSettings::new(ground);
    let interval2 =
        IntegralPolytope::hull(&[LatticePoint(vec![0]), LatticePoint(vec![2])], 1).unwrap();
    let report = gnp_sample(GnpTarget::Polytope(&interval2), &settings, 6, 9).unwrap();
    let hp = interval2.hodge_polygon().unwrap();
    let cmp = polygon_compare(&report.sampled_upper_bound, &hp);
    assert!(cmp.lies_above);
    assert!(cmp.endpoints_equal);
}
