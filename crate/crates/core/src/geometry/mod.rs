//! Exact convex/lattice geometry: hulls, facets, denominators, the weight
//! function, weighted lattice-point counts, Hodge numbers and Hodge
//! polygons.
//!
//! Polytopes live in `Z^n` for `n <= 4`. Facet enumeration is computed
//! exactly for `n <= 3` by exhaustive supporting-hyperplane search; in
//! dimension 4 an explicit facet list must accompany the vertex data.

mod hodge;
pub mod lp;
mod polygon;
mod volume;

pub use hodge::{HodgeData, Weight};
pub use polygon::{lower_hull, polygon_compare, ComparisonReport, LowerConvexPolygon};

use crate::linalg;
use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A point of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    fn big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }
}

/// A co-dimension 1 face, stored as a primitive integer inequality
/// `normal . x <= offset` that is tight on the facet. For a polytope
/// containing the origin the offset is nonnegative, and the facet contains
/// the origin exactly when the offset vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub vertex_indices: Vec<usize>,
    normal: Vec<BigInt>,
    offset: BigInt,
}

impl Facet {
    pub fn contains_origin(&self) -> bool {
        self.offset.is_zero()
    }

    /// Primitive integer data `(a, c)` of the supporting inequality.
    pub fn primitive(&self) -> (&[BigInt], &BigInt) {
        (&self.normal, &self.offset)
    }

    /// The rational covector `e` with `e . x = 1` on the facet when the
    /// facet misses the origin; for origin facets the primitive integer
    /// normal is returned unscaled (its hyperplane is `e . x = 0`).
    pub fn scaled_normal(&self) -> Vec<Rat> {
        if self.offset.is_zero() {
            self.normal.iter().map(|a| Rat::from(a.clone())).collect()
        } else {
            self.normal
                .iter()
                .map(|a| Rat::new(a.clone(), self.offset.clone()))
                .collect()
        }
    }

    /// `normal . u` as an exact integer.
    pub fn eval(&self, u: &LatticePoint) -> BigInt {
        self.normal
            .iter()
            .zip(u.coords())
            .map(|(a, &c)| a * BigInt::from(c))
            .sum()
    }

    /// Least common denominator of the coefficients of the scaled normal.
    pub fn face_denominator(&self) -> Result<u64> {
        if self.offset.is_zero() {
            return Err(Error::Precondition(
                "face denominator is defined only for facets not containing the origin".into(),
            ));
        }
        let mut lcd = BigInt::one();
        for a in &self.normal {
            // denominator of a/c in lowest terms is c / gcd(a, c)
            let den = &self.offset / a.gcd(&self.offset);
            lcd = lcd.lcm(&den);
        }
        u64::try_from(&lcd).map_err(|_| {
            Error::InternalInconsistency("facet denominator exceeds u64".into())
        })
    }
}

/// A convex lattice polytope given by its extreme points, with cached
/// facet data when the polytope is full-dimensional.
#[derive(Clone, Debug)]
pub struct IntegralPolytope {
    ambient_dim: usize,
    affine_dim: usize,
    vertices: Vec<LatticePoint>,
    facets: Vec<Facet>,
    origin_inside: bool,
}

impl IntegralPolytope {
    /// Convex hull of `points` in `Z^n`. Vertices are reduced to the
    /// extreme points; facets are enumerated exactly for full-dimensional
    /// polytopes with `n <= 3`. Four-dimensional polytopes must be built
    /// via [`IntegralPolytope::with_explicit_facets`].
    pub fn hull(points: &[LatticePoint], n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if points.is_empty() {
            return Err(Error::Domain("hull of an empty point set".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::Domain(format!(
                "point {:?} has dimension {} but the ambient dimension is {}",
                p.coords(),
                p.dim(),
                n
            )));
        }
        let mut distinct: Vec<LatticePoint> = points.to_vec();
        distinct.sort();
        distinct.dedup();

        let affine_dim = affine_dimension(&distinct);
        let vertices = extreme_points(&distinct);
        let origin_inside = point_in_convex_hull(&LatticePoint::origin(n), &vertices);

        let facets = if affine_dim == n {
            if n == 4 {
                return Err(Error::UnsupportedDimension(4));
            }
            enumerate_facets(&vertices, n)?
        } else {
            Vec::new()
        };

        let poly = IntegralPolytope {
            ambient_dim: n,
            affine_dim,
            vertices,
            facets,
            origin_inside,
        };
        poly.check_facet_coverage()?;
        Ok(poly)
    }

    /// Builds a polytope from vertices plus a caller-supplied facet list
    /// (scaled normals and origin flags), verifying every claim. This is
    /// the required path for dimension 4 and the polytope-file format.
    pub fn with_explicit_facets(
        points: &[LatticePoint],
        n: usize,
        facets: &[(Vec<Rat>, bool)],
    ) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut distinct: Vec<LatticePoint> = points.to_vec();
        distinct.sort();
        distinct.dedup();
        if distinct.is_empty() {
            return Err(Error::Domain("polytope needs at least one vertex".into()));
        }
        if let Some(p) = distinct.iter().find(|p| p.dim() != n) {
            return Err(Error::Domain(format!(
                "vertex {:?} does not have dimension {}",
                p.coords(),
                n
            )));
        }
        let affine_dim = affine_dimension(&distinct);
        if affine_dim != n {
            return Err(Error::InvalidPolytope(format!(
                "explicit facets supplied but the vertex set spans dimension {affine_dim} < {n}"
            )));
        }
        let vertices = extreme_points(&distinct);
        if vertices.len() != distinct.len() {
            return Err(Error::InvalidPolytope(
                "vertex list contains non-extreme points".into(),
            ));
        }
        let origin_inside = point_in_convex_hull(&LatticePoint::origin(n), &vertices);

        let mut built = Vec::new();
        for (e, contains_origin) in facets {
            if e.len() != n {
                return Err(Error::InvalidPolytope("facet normal has wrong length".into()));
            }
            let lcm = e
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut a: Vec<BigInt> = e.iter().map(|x| (x * Rat::from(lcm.clone())).to_integer()).collect();
            let mut c = if *contains_origin { BigInt::zero() } else { lcm };
            let mut g = c.clone();
            for x in &a {
                g = g.gcd(x);
            }
            if g.is_zero() {
                return Err(Error::InvalidPolytope("zero facet normal".into()));
            }
            for x in a.iter_mut() {
                *x /= &g;
            }
            c /= &g;
            let facet = orient_and_verify(a, c, &vertices, n)?;
            built.push(facet);
        }
        // Dedupe identical facets.
        let mut seen = BTreeSet::new();
        built.retain(|f| seen.insert((f.normal.clone(), f.offset.clone())));

        let poly = IntegralPolytope {
            ambient_dim: n,
            affine_dim,
            vertices,
            facets: built,
            origin_inside,
        };
        poly.check_facet_coverage()?;
        Ok(poly)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// A polytope is degenerate when its affine span is a proper subspace.
    pub fn is_degenerate(&self) -> bool {
        self.affine_dim < self.ambient_dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains_origin(&self) -> bool {
        self.origin_inside
    }

    /// Membership test against the facet description (full-dimensional
    /// polytopes only).
    pub fn contains(&self, u: &LatticePoint) -> Result<bool> {
        self.require_full_dim()?;
        Ok(self
            .facets
            .iter()
            .all(|f| f.eval(u) <= f.offset))
    }

    pub(crate) fn require_full_dim(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::InvalidPolytope(format!(
                "operation requires a full-dimensional polytope (affine dimension {} < {})",
                self.affine_dim, self.ambient_dim
            )));
        }
        if self.facets.is_empty() {
            return Err(Error::InvalidPolytope(
                "facet data missing (dimension-4 polytopes need an explicit facet list)".into(),
            ));
        }
        Ok(())
    }

    /// Facets whose hyperplane misses the origin, each normalized to
    /// `e . x = 1`. Errors when the origin is not in the polytope, since
    /// the weight function and denominators are defined relative to it.
    pub fn facets_not_containing_origin(&self) -> Result<Vec<&Facet>> {
        self.require_full_dim()?;
        if !self.origin_inside {
            return Err(Error::InvalidPolytope(
                "origin is not contained in the polytope".into(),
            ));
        }
        Ok(self
            .facets
            .iter()
            .filter(|f| !f.contains_origin())
            .collect())
    }

    /// `D(Delta)`: least common multiple of the facet denominators over all
    /// facets not containing the origin.
    pub fn polytope_denominator(&self) -> Result<u64> {
        let mut d = 1u64;
        for f in self.facets_not_containing_origin()? {
            d = d.lcm(&f.face_denominator()?);
        }
        Ok(d)
    }

    /// All lattice points of the polytope (full-dimensional only).
    pub fn lattice_points(&self) -> Result<Vec<LatticePoint>> {
        self.require_full_dim()?;
        let n = self.ambient_dim;
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        'outer: loop {
            let p = LatticePoint(cur.clone());
            if self.contains(&p)? {
                out.push(p);
            }
            for i in (0..n).rev() {
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    continue 'outer;
                }
                cur[i] = lo[i];
            }
            break;
        }
        Ok(out)
    }

    pub(crate) fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let n = self.ambient_dim;
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for v in &self.vertices {
            for i in 0..n {
                lo[i] = lo[i].min(v.coords()[i]);
                hi[i] = hi[i].max(v.coords()[i]);
            }
        }
        (lo, hi)
    }

    fn check_facet_coverage(&self) -> Result<()> {
        if self.facets.is_empty() {
            return Ok(());
        }
        let n = self.ambient_dim;
        for (vi, _) in self.vertices.iter().enumerate() {
            let incident = self
                .facets
                .iter()
                .filter(|f| f.vertex_indices.contains(&vi))
                .count();
            if incident < n.min(self.facets.len()) {
                return Err(Error::InvalidPolytope(format!(
                    "vertex {vi} lies on only {incident} facets; facet list is incomplete"
                )));
            }
        }
        Ok(())
    }
}

/// Affine dimension of a point set.
fn affine_dimension(points: &[LatticePoint]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0].big();
    let rows: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| {
            p.big()
                .into_iter()
                .zip(base.iter())
                .map(|(x, b)| x - b)
                .collect()
        })
        .collect();
    linalg::rank(&rows)
}

/// Extreme points of a finite point set, via exact LP membership tests.
fn extreme_points(points: &[LatticePoint]) -> Vec<LatticePoint> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    points
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<&LatticePoint> = points
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !in_hull_of(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect()
}

fn point_in_convex_hull(p: &LatticePoint, points: &[LatticePoint]) -> bool {
    if points.is_empty() {
        return false;
    }
    let refs: Vec<&LatticePoint> = points.iter().collect();
    in_hull_of(p, &refs)
}

/// Exact membership of `p` in the convex hull of `points`.
pub fn in_convex_hull(p: &LatticePoint, points: &[LatticePoint]) -> bool {
    point_in_convex_hull(p, points)
}

fn in_hull_of(p: &LatticePoint, points: &[&LatticePoint]) -> bool {
    let n = p.dim();
    // sum lambda_i q_i = p, sum lambda_i = 1, lambda >= 0
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    for row in 0..n {
        a.push(
            points
                .iter()
                .map(|q| Rat::from(BigInt::from(q.coords()[row])))
                .collect(),
        );
    }
    a.push(vec![Rat::one(); points.len()]);
    let mut b: Vec<Rat> = p
        .coords()
        .iter()
        .map(|&c| Rat::from(BigInt::from(c)))
        .collect();
    b.push(Rat::one());
    lp::feasible(&a, &b)
}

/// Exhaustive supporting-hyperplane enumeration for `n <= 3`.
fn enumerate_facets(vertices: &[LatticePoint], n: usize) -> Result<Vec<Facet>> {
    if n == 1 {
        let lo = vertices.iter().map(|v| v.coords()[0]).min().unwrap();
        let hi = vertices.iter().map(|v| v.coords()[0]).max().unwrap();
        let idx_of = |x: i64| vertices.iter().position(|v| v.coords()[0] == x).unwrap();
        let mut facets = vec![Facet {
            vertex_indices: vec![idx_of(hi)],
            normal: vec![BigInt::one()],
            offset: BigInt::from(hi),
        }];
        if lo != hi {
            facets.push(Facet {
                vertex_indices: vec![idx_of(lo)],
                normal: vec![-BigInt::one()],
                offset: BigInt::from(-lo),
            });
        }
        return Ok(facets);
    }

    let mut seen: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    let mut facets = Vec::new();
    let idxs: Vec<usize> = (0..vertices.len()).collect();
    for subset in combinations(&idxs, n) {
        let base = vertices[subset[0]].big();
        let diffs: Vec<Vec<BigInt>> = subset[1..]
            .iter()
            .map(|&i| {
                vertices[i]
                    .big()
                    .into_iter()
                    .zip(base.iter())
                    .map(|(x, b)| x - b)
                    .collect()
            })
            .collect();
        let Some(mut a) = null_covector(&diffs, n) else {
            continue;
        };
        let mut c: BigInt = a
            .iter()
            .zip(base.iter())
            .map(|(ai, bi)| ai * bi)
            .sum();
        // Orientation: the polytope must lie on one side.
        let mut lower = false;
        let mut upper = false;
        for v in vertices {
            let val: BigInt = a
                .iter()
                .zip(v.coords())
                .map(|(ai, &x)| ai * BigInt::from(x))
                .sum();
            match val.cmp(&c) {
                std::cmp::Ordering::Less => lower = true,
                std::cmp::Ordering::Greater => upper = true,
                std::cmp::Ordering::Equal => {}
            }
            if lower && upper {
                break;
            }
        }
        if lower && upper {
            continue;
        }
        if upper {
            for x in a.iter_mut() {
                *x = -x.clone();
            }
            c = -c;
        }
        let mut g = c.clone();
        for x in &a {
            g = g.gcd(x);
        }
        if !g.is_one() {
            for x in a.iter_mut() {
                *x /= &g;
            }
            c /= &g;
        }
        if !seen.insert((a.clone(), c.clone())) {
            continue;
        }
        let incident: Vec<usize> = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                let val: BigInt = a
                    .iter()
                    .zip(v.coords())
                    .map(|(ai, &x)| ai * BigInt::from(x))
                    .sum();
                val == c
            })
            .map(|(i, _)| i)
            .collect();
        let incident_pts: Vec<LatticePoint> =
            incident.iter().map(|&i| vertices[i].clone()).collect();
        if affine_dimension(&incident_pts) != n - 1 {
            continue;
        }
        facets.push(Facet {
            vertex_indices: incident,
            normal: a,
            offset: c,
        });
    }
    if facets.is_empty() {
        return Err(Error::InternalInconsistency(
            "full-dimensional polytope produced no facets".into(),
        ));
    }
    Ok(facets)
}

fn orient_and_verify(
    mut a: Vec<BigInt>,
    c: BigInt,
    vertices: &[LatticePoint],
    n: usize,
) -> Result<Facet> {
    let mut evals: Vec<BigInt> = vertices
        .iter()
        .map(|v| {
            a.iter()
                .zip(v.coords())
                .map(|(ai, &x)| ai * BigInt::from(x))
                .sum()
        })
        .collect();
    if c.is_zero() && evals.iter().any(|v| v > &c) {
        // Origin facets carry no canonical orientation in the file format;
        // flip to the outward convention if that makes all vertices fit.
        for x in a.iter_mut() {
            *x = -x.clone();
        }
        for v in evals.iter_mut() {
            *v = -v.clone();
        }
    }
    if evals.iter().any(|v| v > &c) {
        return Err(Error::InvalidPolytope(
            "supplied facet inequality is violated by a vertex".into(),
        ));
    }
    let incident: Vec<usize> = evals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == c)
        .map(|(i, _)| i)
        .collect();
    let incident_pts: Vec<LatticePoint> = incident.iter().map(|&i| vertices[i].clone()).collect();
    if incident.is_empty() || affine_dimension(&incident_pts) != n - 1 {
        return Err(Error::InvalidPolytope(
            "supplied facet is not supported by an (n-1)-dimensional vertex set".into(),
        ));
    }
    Ok(Facet {
        vertex_indices: incident,
        normal: a,
        offset: c,
    })
}

/// Null covector of `n-1` difference vectors in dimension `n` (2 or 3),
/// i.e. the generalized cross product. `None` when the diffs are dependent.
fn null_covector(diffs: &[Vec<BigInt>], n: usize) -> Option<Vec<BigInt>> {
    let a: Vec<BigInt> = match n {
        2 => {
            let d = &diffs[0];
            vec![d[1].clone(), -d[0].clone()]
        }
        3 => {
            let (u, v) = (&diffs[0], &diffs[1]);
            vec![
                &u[1] * &v[2] - &u[2] * &v[1],
                &u[2] * &v[0] - &u[0] * &v[2],
                &u[0] * &v[1] - &u[1] * &v[0],
            ]
        }
        _ => unreachable!("facet enumeration is restricted to n <= 3"),
    };
    if a.iter().all(|x| x.is_zero()) {
        None
    } else {
        Some(a)
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Find the rightmost index that can still advance.
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == i as usize + items.len() - k {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// JSON polytope file: `{"dim": n, "vertices": [[..]], "facets": [...]}`.
#[derive(Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetFile>>,
}

#[derive(Serialize, Deserialize)]
pub struct FacetFile {
    /// Rational covector as reduced `[numerator, denominator]` pairs.
    pub normal: Vec<(i64, i64)>,
    pub contains_origin: bool,
}

impl PolytopeFile {
    pub fn build(&self) -> Result<IntegralPolytope> {
        let pts: Vec<LatticePoint> = self.vertices.iter().cloned().map(LatticePoint).collect();
        match &self.facets {
            None => IntegralPolytope::hull(&pts, self.dim),
            Some(facets) => {
                let parsed: Vec<(Vec<Rat>, bool)> = facets
                    .iter()
                    .map(|f| {
                        let normal = f
                            .normal
                            .iter()
                            .map(|&(num, den)| {
                                if den == 0 {
                                    Err(Error::InvalidPolytope(
                                        "facet normal with zero denominator".into(),
                                    ))
                                } else {
                                    Ok(Rat::new(BigInt::from(num), BigInt::from(den)))
                                }
                            })
                            .collect::<Result<Vec<Rat>>>()?;
                        Ok((normal, f.contains_origin))
                    })
                    .collect::<Result<Vec<_>>>()?;
                IntegralPolytope::with_explicit_facets(&pts, self.dim, &parsed)
            }
        }
    }

    pub fn from_polytope(p: &IntegralPolytope) -> Self {
        let facets = if p.facets.is_empty() {
            None
        } else {
            Some(
                p.facets
                    .iter()
                    .map(|f| FacetFile {
                        normal: f
                            .scaled_normal()
                            .iter()
                            .map(|r| {
                                (
                                    i64::try_from(r.numer()).expect("normal numerator fits i64"),
                                    i64::try_from(r.denom()).expect("normal denominator fits i64"),
                                )
                            })
                            .collect(),
                        contains_origin: f.contains_origin(),
                    })
                    .collect(),
            )
        };
        PolytopeFile {
            dim: p.ambient_dim,
            vertices: p.vertices.iter().map(|v| v.coords().to_vec()).collect(),
            facets,
        }
    }
}

/// Groups vertex index sets of all proper faces by dimension-free identity.
/// Used by non-degeneracy witness searches; see [`volume`] for the
/// recursive machinery shared with volume computation.
pub(crate) fn sorted_key(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

pub(crate) type FaceKey = Vec<usize>;

/// All proper faces of a full-dimensional polytope, as sorted vertex index
/// sets (facets, their ridges, and so on down to vertices).
pub fn proper_faces(p: &IntegralPolytope) -> Result<Vec<FaceKey>> {
    p.require_full_dim()?;
    let mut acc: BTreeSet<FaceKey> = BTreeSet::new();
    for (fi, f) in p.facets().iter().enumerate() {
        let key = sorted_key(f.vertex_indices.clone());
        acc.insert(key);
        if p.ambient_dim() >= 2 {
            let (sub, back) = volume::facet_subpolytope(p, fi)?;
            collect_faces(&sub, &back, &mut acc)?;
        }
    }
    Ok(acc.into_iter().collect())
}

fn collect_faces(
    p: &IntegralPolytope,
    back: &BTreeMap<LatticePoint, usize>,
    acc: &mut BTreeSet<FaceKey>,
) -> Result<()> {
    let to_ambient = |idxs: &[usize]| -> FaceKey {
        sorted_key(
            idxs.iter()
                .map(|&i| *back.get(&p.vertices()[i]).expect("face vertex maps back"))
                .collect(),
        )
    };
    if p.ambient_dim() == 1 || p.affine_dim() == 0 {
        for i in 0..p.vertices().len() {
            acc.insert(to_ambient(&[i]));
        }
        return Ok(());
    }
    for (fi, f) in p.facets().iter().enumerate() {
        acc.insert(to_ambient(&f.vertex_indices));
        if p.ambient_dim() >= 2 {
            let (sub, sub_back) = volume::facet_subpolytope(p, fi)?;
            // Compose the back-maps.
            let composed: BTreeMap<LatticePoint, usize> = sub_back
                .iter()
                .map(|(pt, &mid)| {
                    let amb = *back.get(&p.vertices()[mid]).expect("mid vertex maps back");
                    (pt.clone(), amb)
                })
                .collect();
            collect_faces(&sub, &composed, acc)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
