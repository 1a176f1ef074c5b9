//! Deligne polytopes, the unit-box congruence solver, p-stability orbits,
//! facial ordinariness diagnostics, the even-degree counterexample driver,
//! and sampled upper bounds for generic Newton polygons.

use crate::geometry::{lower_hull, IntegralPolytope, LatticePoint, LowerConvexPolygon};
use crate::lfunction::{
    l_polynomial_from_sums, newton_polygon, power_sums_batch, LaurentPolynomial, SumSettings,
};
use crate::linalg::{determinant, smith_normal_form};
use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Bound on |det M| for unit-box enumeration.
const MAX_SOLUTIONS: i64 = 1 << 20;

/// A reduced rational as a `[numerator, denominator]` pair, the JSON shape
/// used throughout the reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RatPair(pub i64, pub i64);

impl RatPair {
    fn from_rat(r: &Rat) -> Self {
        RatPair(
            r.numer().to_i64().expect("report rational fits i64"),
            r.denom().to_i64().expect("report rational fits i64"),
        )
    }
}

/// The polytope family of `x0 h + g + 1/x0`: the full Newton polytope with
/// its two facets away from the origin, and the cones over them.
#[derive(Clone, Debug)]
pub struct DeligneGeometry {
    pub n: usize,
    pub d: u64,
    /// The full polytope (dimension n + 1).
    pub polytope: IntegralPolytope,
    /// Index of the facet spanned by -e0, e0 + d e_i.
    pub delta_facet: usize,
    /// Index of the facet spanned by e0, e0 + d e_i.
    pub delta_prime_facet: usize,
    /// Convex hull of delta_d and the origin.
    pub cone_delta: IntegralPolytope,
    /// Convex hull of delta_d' and the origin.
    pub cone_delta_prime: IntegralPolytope,
}

/// Builds the Deligne geometry for `n` in 1..=3 and `d >= 2`. Facets are
/// supplied analytically (the polytope is a simplex) and cross-checked
/// against computed hulls in low dimension.
pub fn deligne_polytope(n: usize, d: u64) -> Result<DeligneGeometry> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if d < 2 {
        return Err(Error::Domain("the family needs d >= 2".into()));
    }
    let dim = n + 1;
    let di = d as i64;

    let mut e0 = vec![0i64; dim];
    e0[0] = 1;
    let minus_e0: Vec<i64> = e0.iter().map(|&c| -c).collect();
    let spoke = |i: usize| -> Vec<i64> {
        let mut v = e0.clone();
        v[i] = di;
        v
    };

    let mut vertices: Vec<LatticePoint> =
        vec![LatticePoint(minus_e0.clone()), LatticePoint(e0.clone())];
    for i in 1..dim {
        vertices.push(LatticePoint(spoke(i)));
    }

    // Sign-corrected hyperplane of delta_d: -X_1 + (2/d)(X_2 + ...) = 1.
    let delta_normal: Vec<Rat> = std::iter::once(Rat::from(BigInt::from(-1)))
        .chain((1..dim).map(|_| Rat::new(BigInt::from(2), BigInt::from(d))))
        .collect();
    // delta_d': X_1 = 1.
    let delta_prime_normal: Vec<Rat> = std::iter::once(Rat::one())
        .chain((1..dim).map(|_| Rat::zero()))
        .collect();
    let mut facets: Vec<(Vec<Rat>, bool)> = vec![
        (delta_normal.clone(), false),
        (delta_prime_normal.clone(), false),
    ];
    for j in 1..dim {
        let mut a = vec![Rat::zero(); dim];
        a[j] = -Rat::one();
        facets.push((a, true));
    }
    let polytope = IntegralPolytope::with_explicit_facets(&vertices, dim, &facets)?;

    // Cross-check against the computed hull where enumeration is available.
    if dim <= 3 {
        let mut pts = vertices.clone();
        pts.push(LatticePoint::origin(dim));
        let hull = IntegralPolytope::hull(&pts, dim)?;
        if hull.vertices() != polytope.vertices()
            || hull.facets().len() != polytope.facets().len()
        {
            return Err(Error::InternalInconsistency(
                "analytic facet list disagrees with the computed hull".into(),
            ));
        }
    }

    let find_facet = |normal: &[Rat]| -> Result<usize> {
        polytope
            .facets()
            .iter()
            .position(|f| f.scaled_normal() == normal)
            .ok_or_else(|| {
                Error::InternalInconsistency(
                    "expected facet normal missing from the polytope".into(),
                )
            })
    };
    let delta_facet = find_facet(&delta_normal)?;
    let delta_prime_facet = find_facet(&delta_prime_normal)?;

    // Cones to the origin over the two facets (again simplices, with
    // analytically known facet lists so dimension 4 works).
    let cone = |apex_removed: &Vec<i64>,
                far_normal: &[Rat],
                prime: bool|
     -> Result<IntegralPolytope> {
        let mut pts: Vec<LatticePoint> = vec![LatticePoint::origin(dim)];
        pts.extend(
            vertices
                .iter()
                .filter(|v| v.coords() != apex_removed.as_slice())
                .cloned(),
        );
        let mut fs: Vec<(Vec<Rat>, bool)> = vec![(far_normal.to_vec(), false)];
        // Dropping a spoke vertex e0 + d e_j leaves the coordinate plane
        // X_(j+1) = 0.
        for j in 1..dim {
            let mut a = vec![Rat::zero(); dim];
            a[j] = -Rat::one();
            fs.push((a, true));
        }
        // Dropping the remaining axis vertex leaves the plane through the
        // origin and the spokes; the outward sign depends on the cone.
        let mut a: Vec<Rat> = vec![Rat::from(BigInt::from(d))];
        a.extend((1..dim).map(|_| Rat::from(BigInt::from(-1))));
        if prime {
            for x in a.iter_mut() {
                *x = -x.clone();
            }
        }
        fs.push((a, true));
        IntegralPolytope::with_explicit_facets(&pts, dim, &fs)
    };
    let cone_delta = cone(&e0, &delta_normal, false)?;
    let cone_delta_prime = cone(&minus_e0, &delta_prime_normal, true)?;

    Ok(DeligneGeometry {
        n,
        d,
        polytope,
        delta_facet,
        delta_prime_facet,
        cone_delta,
        cone_delta_prime,
    })
}

/// `D(Delta_d)` in closed form: d when d is odd, d/2 when d is even.
pub fn d_closed_form(d: u64) -> u64 {
    if d % 2 == 1 {
        d
    } else {
        d / 2
    }
}

/// Solutions of `M r = 0 (mod 1)` with `r` in the rational unit box.
#[derive(Clone, Debug)]
pub struct UnitBoxSolutionSet {
    /// Row-major copy of M.
    pub matrix: Vec<Vec<i64>>,
    pub det: i64,
    /// All |det M| solutions, sorted lexicographically.
    pub solutions: Vec<Vec<Rat>>,
}

impl UnitBoxSolutionSet {
    pub fn weights(&self) -> Vec<Rat> {
        self.solutions
            .iter()
            .map(|r| r.iter().sum::<Rat>())
            .collect()
    }
}

/// Enumerates the solution set through a Smith normal form `S = U M V`:
/// the solutions are `V y mod 1` with `y_i` ranging over the `s_i`-th
/// fractions.
pub fn unit_box_solve(matrix: &[Vec<i64>]) -> Result<UnitBoxSolutionSet> {
    let m = matrix.len();
    if m == 0 || matrix.iter().any(|row| row.len() != m) {
        return Err(Error::Domain("unit-box solver needs a square matrix".into()));
    }
    let big: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let det_big = determinant(&big);
    if det_big.is_zero() {
        return Err(Error::Precondition("unit-box solver needs det M != 0".into()));
    }
    let det = det_big
        .to_i64()
        .filter(|d| d.abs() <= MAX_SOLUTIONS)
        .ok_or_else(|| {
            Error::Domain(format!(
                "determinant {det_big} exceeds the enumeration bound {MAX_SOLUTIONS}"
            ))
        })?;

    let snf = smith_normal_form(&big);
    let diag: Vec<i64> = snf
        .diag
        .iter()
        .map(|s| s.to_i64().expect("elementary divisor fits i64"))
        .collect();
    let v: Vec<Vec<Rat>> = snf
        .v
        .iter()
        .map(|row| row.iter().map(|x| Rat::from(x.clone())).collect())
        .collect();

    let mut solutions = Vec::with_capacity(det.unsigned_abs() as usize);
    let mut idx = vec![0i64; m];
    loop {
        let y: Vec<Rat> = idx
            .iter()
            .zip(&diag)
            .map(|(&j, &s)| Rat::new(BigInt::from(j), BigInt::from(s)))
            .collect();
        let r: Vec<Rat> = (0..m)
            .map(|row| {
                let val: Rat = (0..m).map(|col| &v[row][col] * &y[col]).sum();
                fract_nonneg(&val)
            })
            .collect();
        solutions.push(r);
        let mut i = m;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < diag[i] {
                break false;
            }
            idx[i] = 0;
        };
        if done {
            break;
        }
    }
    solutions.sort();
    solutions.dedup();
    if solutions.len() as i64 != det.abs() {
        return Err(Error::InternalInconsistency(format!(
            "found {} unit-box solutions, expected |det| = {}",
            solutions.len(),
            det.abs()
        )));
    }
    Ok(UnitBoxSolutionSet {
        matrix: matrix.to_vec(),
        det,
        solutions,
    })
}

/// Fractional part in [0, 1).
fn fract_nonneg(r: &Rat) -> Rat {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    /// Indices into the sorted solution list.
    pub members: Vec<usize>,
    pub weights: Vec<RatPair>,
    pub stable: bool,
}

/// Orbit decomposition of `r -> {p r}` on a unit-box solution set, with
/// the weight `w(r) = sum r_i` tracked along each orbit. A face is stable
/// exactly when every orbit has constant weight.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub p: u64,
    pub matrix: Vec<Vec<i64>>,
    pub det: i64,
    pub solutions: Vec<Vec<RatPair>>,
    pub weights: Vec<RatPair>,
    pub orbits: Vec<OrbitReport>,
    pub stable: bool,
}

pub fn p_action_orbits(set: &UnitBoxSolutionSet, p: u64) -> Result<StabilityReport> {
    if !crate::field::is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let det = set.det;
    if BigInt::from(p).gcd(&BigInt::from(det)) != BigInt::one() {
        return Err(Error::Precondition(format!(
            "p = {p} must be coprime to det M = {det} for the p-action to permute solutions"
        )));
    }
    let index: BTreeMap<&Vec<Rat>, usize> = set
        .solutions
        .iter()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let p_rat = Rat::from(BigInt::from(p));
    let image: Vec<usize> = set
        .solutions
        .iter()
        .map(|r| {
            let mapped: Vec<Rat> = r.iter().map(|x| fract_nonneg(&(x * &p_rat))).collect();
            index.get(&mapped).copied().ok_or_else(|| {
                Error::InternalInconsistency(
                    "p-action left the solution set; gcd precondition violated".into(),
                )
            })
        })
        .collect::<Result<_>>()?;

    let weights = set.weights();
    let mut visited = vec![false; image.len()];
    let mut orbits = Vec::new();
    for start in 0..image.len() {
        if visited[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut cur = start;
        while !visited[cur] {
            visited[cur] = true;
            members.push(cur);
            cur = image[cur];
        }
        let orbit_weights: Vec<Rat> = members.iter().map(|&i| weights[i].clone()).collect();
        let stable = orbit_weights.windows(2).all(|w| w[0] == w[1]);
        orbits.push(OrbitReport {
            members,
            weights: orbit_weights.iter().map(RatPair::from_rat).collect(),
            stable,
        });
    }
    let stable = orbits.iter().all(|o| o.stable);
    Ok(StabilityReport {
        p,
        matrix: set.matrix.clone(),
        det,
        solutions: set
            .solutions
            .iter()
            .map(|r| r.iter().map(RatPair::from_rat).collect())
            .collect(),
        weights: weights.iter().map(RatPair::from_rat).collect(),
        orbits,
        stable,
    })
}

/// Stability of a simplex face: the face vertices (in the given order)
/// become the columns of M after dropping the coordinates that vanish
/// identically on the face.
///
/// All face vertices must lie on a common facet avoiding the origin, which
/// pins their weight to 1 and makes `w(sum r_i v_i) = sum r_i`.
pub fn face_stability(
    polytope: &IntegralPolytope,
    face_vertices: &[LatticePoint],
    p: u64,
) -> Result<StabilityReport> {
    if face_vertices.is_empty() {
        return Err(Error::FaceParametrization("empty face".into()));
    }
    let shared_facet = polytope
        .facets_not_containing_origin()?
        .into_iter()
        .any(|f| {
            let (_, c) = f.primitive();
            face_vertices.iter().all(|v| &f.eval(v) == c)
        });
    if !shared_facet {
        return Err(Error::FaceParametrization(
            "face vertices do not lie on a common facet avoiding the origin \
             (their weights would not all be 1)"
                .into(),
        ));
    }
    let dim = polytope.ambient_dim();
    let keep: Vec<usize> = (0..dim)
        .filter(|&i| face_vertices.iter().any(|v| v.coords()[i] != 0))
        .collect();
    let m = face_vertices.len();
    if keep.len() != m {
        return Err(Error::FaceParametrization(format!(
            "projection of {m} vertices onto {} nonzero coordinates is not square",
            keep.len()
        )));
    }
    // Columns are the projected vertices.
    let matrix: Vec<Vec<i64>> = (0..m)
        .map(|row| {
            face_vertices
                .iter()
                .map(|v| v.coords()[keep[row]])
                .collect()
        })
        .collect();
    let set = unit_box_solve(&matrix).map_err(|e| match e {
        Error::Precondition(_) => {
            Error::FaceParametrization("projected vertex matrix is singular".into())
        }
        other => other,
    })?;
    p_action_orbits(&set, p)
}

/// The congruence `p = 1 (mod D(Delta))`, necessary for ordinariness.
#[derive(Clone, Debug, Serialize)]
pub struct NecessaryCondition {
    pub denominator: u64,
    pub p_mod: u64,
    pub congruent: bool,
}

pub fn necessary_condition(p: u64, polytope: &IntegralPolytope) -> Result<NecessaryCondition> {
    let d = polytope.polytope_denominator()?;
    Ok(NecessaryCondition {
        denominator: d,
        p_mod: p % d,
        congruent: p % d == 1 % d,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetDiagnosis {
    pub vertices: Vec<Vec<i64>>,
    pub face_denominator: u64,
    pub p_mod: u64,
    pub congruent: bool,
    /// The facet has exactly n vertices.
    pub simplex: bool,
    /// The facet's lattice points are exactly its vertices, so every
    /// polynomial supported on it is diagonal and the stability verdict
    /// decides its ordinariness; otherwise the verdict covers only the
    /// diagonal subfamily.
    pub diagonal: bool,
    pub stability: Option<StabilityReport>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacialDiagnosis {
    pub p: u64,
    pub polytope_denominator: u64,
    pub necessary_congruence: bool,
    pub facets: Vec<FacetDiagnosis>,
    pub verdict: String,
}

/// Per-facet ordinariness diagnostics: denominators, congruences, and the
/// p-stability verdict for simplex facets.
pub fn facial_diagnosis(polytope: &IntegralPolytope, p: u64) -> Result<FacialDiagnosis> {
    let nc = necessary_condition(p, polytope)?;
    let n = polytope.ambient_dim();
    let lattice_points = polytope.lattice_points()?;
    let mut facets = Vec::new();
    let mut unstable: Option<usize> = None;
    let mut inconclusive = false;
    for facet in polytope.facets_not_containing_origin()? {
        let verts: Vec<LatticePoint> = facet
            .vertex_indices
            .iter()
            .map(|&i| polytope.vertices()[i].clone())
            .collect();
        let fd = facet.face_denominator()?;
        let (_, c) = facet.primitive();
        let facet_points = lattice_points
            .iter()
            .filter(|pt| &facet.eval(pt) == c)
            .count();
        let simplex = verts.len() == n;
        let diagonal = facet_points == verts.len();
        let mut note = None;
        let stability = if simplex {
            match face_stability(polytope, &verts, p) {
                Ok(report) => Some(report),
                Err(Error::Precondition(msg)) => {
                    note = Some(msg);
                    None
                }
                Err(other) => return Err(other),
            }
        } else {
            None
        };
        match &stability {
            Some(s) if !s.stable => {
                unstable.get_or_insert(facets.len());
            }
            None => inconclusive = true,
            _ => {}
        }
        facets.push(FacetDiagnosis {
            vertices: verts.iter().map(|v| v.coords().to_vec()).collect(),
            face_denominator: fd,
            p_mod: p % fd,
            congruent: p % fd == 1 % fd,
            simplex,
            diagonal,
            stability,
            note,
        });
    }
    let verdict = if let Some(i) = unstable {
        format!("face {i} unstable")
    } else if inconclusive {
        "inconclusive (non-simplex face)".to_string()
    } else {
        "all faces stable".to_string()
    };
    Ok(FacialDiagnosis {
        p,
        polytope_denominator: nc.denominator,
        necessary_congruence: nc.congruent,
        facets,
        verdict,
    })
}

/// The report mirroring the even-degree counterexample: the congruence
/// hypothesis `p = 1 (mod D)` holds, yet the edge from -e0 to e0 + d e1
/// carries unstable p-orbits, so the polytope is not generically ordinary.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub n: usize,
    pub d: u64,
    pub p: u64,
    pub denominator: u64,
    pub le_hypothesis_holds: bool,
    pub tau_vertices: Vec<Vec<i64>>,
    pub matrix: Vec<Vec<i64>>,
    pub det: i64,
    pub solutions: Vec<Vec<RatPair>>,
    pub weights: Vec<RatPair>,
    pub orbits: Vec<OrbitReport>,
    pub unstable_k: Vec<u64>,
    pub unstable_odd_k_below_half: Vec<u64>,
    pub boundary_subpolytope: Vec<Vec<i64>>,
    pub citations: Vec<String>,
    pub verdict: String,
}

pub fn counterexample_driver(n: usize, d: u64, p: u64) -> Result<CounterexampleReport> {
    if n != 2 {
        return Err(Error::Precondition(
            "the counterexample construction is for n = 2".into(),
        ));
    }
    if d % 4 != 0 {
        return Err(Error::Precondition(format!(
            "need 4 | d for the instability argument; d = {d}"
        )));
    }
    if !crate::field::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if p % d != (d / 2 + 1) % d {
        return Err(Error::Precondition(format!(
            "need p = d/2 + 1 (mod d); got p = {p} = {} (mod {d}), want {}",
            p % d,
            d / 2 + 1
        )));
    }

    let geometry = deligne_polytope(n, d)?;
    let denominator = geometry.polytope.polytope_denominator()?;
    if denominator != d_closed_form(d) {
        return Err(Error::InternalInconsistency(format!(
            "computed D = {denominator} disagrees with the closed form {}",
            d_closed_form(d)
        )));
    }
    let le_hypothesis_holds = p % denominator == 1 % denominator;

    let di = d as i64;
    let tau = vec![LatticePoint(vec![-1, 0, 0]), LatticePoint(vec![1, di, 0])];
    let stability = face_stability(&geometry.polytope, &tau, p)?;
    if stability.det != -di {
        return Err(Error::InternalInconsistency(format!(
            "det M = {} but the construction demands -d = {}",
            stability.det, -di
        )));
    }
    // All solutions have the shape (k/d, k/d).
    for r in &stability.solutions {
        if r[0] != r[1] {
            return Err(Error::InternalInconsistency(
                "solution set is not diagonal in the unit box".into(),
            ));
        }
    }
    let k_of = |pair: &RatPair| -> u64 { (pair.0 as u64) * (d / pair.1 as u64) };
    let mut unstable_k: Vec<u64> = stability
        .orbits
        .iter()
        .filter(|o| !o.stable)
        .flat_map(|o| o.members.iter().map(|&i| k_of(&stability.solutions[i][0])))
        .collect();
    unstable_k.sort_unstable();
    let unstable_odd_k_below_half: Vec<u64> = unstable_k
        .iter()
        .copied()
        .filter(|&k| k % 2 == 1 && k < d / 2)
        .collect();

    Ok(CounterexampleReport {
        n,
        d,
        p,
        denominator,
        le_hypothesis_holds,
        tau_vertices: tau.iter().map(|v| v.coords().to_vec()).collect(),
        matrix: stability.matrix.clone(),
        det: stability.det,
        solutions: stability.solutions.clone(),
        weights: stability.weights.clone(),
        orbits: stability.orbits.clone(),
        unstable_k,
        unstable_odd_k_below_half,
        boundary_subpolytope: vec![
            vec![0, 0, 0],
            vec![-1, 0, 0],
            vec![1, di, 0],
            vec![1, di - 1, 1],
        ],
        citations: vec![
            "Wan, 'Newton polygons of zeta functions and L functions', Ann. of Math. 137 \
             (1993), Theorem 5.1 (boundary decomposition); cited as justification, not \
             re-verified"
                .to_string(),
            "Wan, 'Variation of p-adic Newton polygons for L-functions of exponential \
             sums', Asian J. Math. 8 (2004) (collapsing decomposition)"
                .to_string(),
        ],
        verdict: "not generically ordinary".to_string(),
    })
}

/// Random members of the family `x0 h(x) + g(x) + 1/x0` with `deg h = d`,
/// `deg g < d/2` and `h` passing the Deligne check; deterministic in the
/// seed.
pub fn sample_family(
    n: usize,
    d: u64,
    p: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<LaurentPolynomial>> {
    let geometry = deligne_polytope(n, d)?;
    if !crate::field::is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let ground = crate::lfunction::GroundField::new(p, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let di = d as i64;
    let h_support = monomials_up_to(n, di);
    let g_support = monomials_up_to(n, (di - 1) / 2);
    let labels: Vec<u8> = (0..=n as u8).collect();

    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut attempts = 0;
        let h = loop {
            attempts += 1;
            if attempts > 1000 {
                return Err(Error::Generation(
                    "exceeded 1000 attempts to sample a Deligne polynomial".into(),
                ));
            }
            let mut terms: Vec<(Vec<i64>, i64)> = Vec::new();
            for expo in &h_support {
                let is_vertex = expo.iter().sum::<i64>() == di
                    && expo.iter().filter(|&&e| e != 0).count() <= 1;
                let is_constant = expo.iter().all(|&e| e == 0);
                let c = if is_vertex || is_constant {
                    rng.gen_range(1..p) as i64
                } else {
                    rng.gen_range(0..p) as i64
                };
                terms.push((expo.clone(), c));
            }
            let h = LaurentPolynomial::from_terms(p, n, terms)?;
            let check = crate::lfunction::deligne_check(&h, ground, 1, 1 << 16)?;
            if check.deligne {
                break h;
            }
        };
        let mut f_terms: Vec<(Vec<i64>, i64)> = Vec::new();
        for (expo, &c) in h.terms() {
            let mut e = vec![1i64];
            e.extend(expo);
            f_terms.push((e, c as i64));
        }
        for expo in &g_support {
            let c = rng.gen_range(0..p) as i64;
            if c != 0 {
                let mut e = vec![0i64];
                e.extend(expo);
                f_terms.push((e, c));
            }
        }
        let mut inv = vec![0i64; n + 1];
        inv[0] = -1;
        f_terms.push((inv, 1));
        let f = LaurentPolynomial::from_terms_with_labels(p, n + 1, labels.clone(), f_terms)?;
        let delta_f = f.newton_polytope()?;
        if delta_f.vertices() != geometry.polytope.vertices() {
            return Err(Error::InternalInconsistency(
                "sampled member's Newton polytope differs from the family polytope".into(),
            ));
        }
        out.push(f);
    }
    Ok(out)
}

fn monomials_up_to(n: usize, max_total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if cur.iter().sum::<i64>() <= max_total {
            out.push(cur.clone());
        }
        let mut i = n;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] <= max_total {
                break false;
            }
            cur[i] = 0;
        };
        if done {
            break;
        }
    }
    out.sort();
    out
}

/// What to sample the generic Newton polygon over.
pub enum GnpTarget<'a> {
    Polytope(&'a IntegralPolytope),
    Family { n: usize, d: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct GnpSampleReport {
    pub p: u64,
    pub q_degree: u32,
    pub trials: usize,
    pub seed: u64,
    /// Pointwise minimum of the trial polygons, convexified: an UPPER
    /// bound for the generic Newton polygon, not a claim of attaining it.
    pub sampled_upper_bound: LowerConvexPolygon,
    pub per_trial: Vec<LowerConvexPolygon>,
    pub trial_polynomials: Vec<String>,
    pub label: String,
}

/// Seeded sampling of Newton polygons over a polytope (or family) with the
/// pointwise-infimum upper bound for GNP. The per-trial seed is
/// `seed + trial index`, so trials are order-independent.
pub fn gnp_sample(
    target: GnpTarget,
    settings: &SumSettings,
    trials: usize,
    seed: u64,
) -> Result<GnpSampleReport> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let p = settings.ground.p;
    let fs: Vec<LaurentPolynomial> = match &target {
        GnpTarget::Family { n, d } => sample_family(*n, *d, p, trials, seed)?,
        GnpTarget::Polytope(polytope) => {
            let lattice = polytope.lattice_points()?;
            let nonzero_vertices: Vec<&LatticePoint> = polytope
                .vertices()
                .iter()
                .filter(|v| !v.is_origin())
                .collect();
            (0..trials)
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed + t as u64);
                    let mut terms: Vec<(Vec<i64>, i64)> = Vec::new();
                    for pt in &lattice {
                        let is_vertex = nonzero_vertices.iter().any(|v| *v == pt);
                        let c = if is_vertex {
                            rng.gen_range(1..p) as i64
                        } else {
                            rng.gen_range(0..p) as i64
                        };
                        if c != 0 {
                            terms.push((pt.coords().to_vec(), c));
                        }
                    }
                    LaurentPolynomial::from_terms(p, polytope.ambient_dim(), terms)
                })
                .collect::<Result<_>>()?
        }
    };

    let polytope = fs[0].newton_polytope()?;
    let degree = polytope.normalized_volume()? as u32;
    let n_vars = fs[0].n_vars();
    let sums = power_sums_batch(&fs, settings, degree)?;
    let mut per_trial = Vec::with_capacity(trials);
    for s in &sums {
        let l = l_polynomial_from_sums(n_vars, s, degree)?;
        per_trial.push(newton_polygon(&l)?);
    }

    // Pointwise minimum over the integer abscissae, then convexify.
    let x_max = per_trial.iter().map(|np| np.x_max()).max().unwrap();
    let mut min_points: Vec<(i64, Rat)> = Vec::new();
    for x in 0..=x_max {
        let best = per_trial
            .iter()
            .filter_map(|np| np.eval(x))
            .min()
            .expect("some trial covers each abscissa up to the max");
        min_points.push((x, best));
    }
    let sampled_upper_bound = lower_hull(&min_points)?;

    Ok(GnpSampleReport {
        p,
        q_degree: settings.ground.degree,
        trials,
        seed,
        sampled_upper_bound,
        per_trial,
        trial_polynomials: fs.iter().map(|f| f.canonical_string()).collect(),
        label: "sampled upper bound for the generic Newton polygon".to_string(),
    })
}

#[cfg(test)]
mod tests;
