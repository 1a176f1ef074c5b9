//! Lower convex polygons in the plane: Hodge polygons, Newton polygons,
//! lower hulls and exact pointwise comparison.

use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A lower convex polygon: vertices with strictly increasing integer
/// abscissae, strictly increasing slopes, starting at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerConvexPolygon {
    vertices: Vec<(i64, Rat)>,
}

impl LowerConvexPolygon {
    pub fn new(vertices: Vec<(i64, Rat)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Domain("polygon needs at least one vertex".into()));
        }
        if vertices[0].0 != 0 || !vertices[0].1.is_zero() {
            return Err(Error::Domain("polygon must start at (0, 0)".into()));
        }
        let mut last_slope: Option<Rat> = None;
        for w in vertices.windows(2) {
            let dx = w[1].0 - w[0].0;
            if dx <= 0 {
                return Err(Error::Domain("polygon abscissae must strictly increase".into()));
            }
            let slope = (&w[1].1 - &w[0].1) / Rat::from(BigInt::from(dx));
            if let Some(prev) = &last_slope {
                if slope <= *prev {
                    return Err(Error::Domain(
                        "polygon slopes must strictly increase (lower convexity)".into(),
                    ));
                }
            }
            last_slope = Some(slope);
        }
        Ok(LowerConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[(i64, Rat)] {
        &self.vertices
    }

    pub fn x_max(&self) -> i64 {
        self.vertices.last().unwrap().0
    }

    pub fn y_end(&self) -> &Rat {
        &self.vertices.last().unwrap().1
    }

    /// Value of the piecewise-linear function at integer `x` within range.
    pub fn eval(&self, x: i64) -> Option<Rat> {
        if x < 0 || x > self.x_max() {
            return None;
        }
        let pos = self.vertices.partition_point(|&(vx, _)| vx <= x);
        let (x1, y1) = &self.vertices[pos - 1];
        if *x1 == x {
            return Some(y1.clone());
        }
        let (x2, y2) = &self.vertices[pos];
        let t = Rat::new(BigInt::from(x - x1), BigInt::from(x2 - x1));
        Some(y1 + (y2 - y1) * t)
    }

    /// Slopes with multiplicities: `(slope, horizontal length)` pairs.
    pub fn segments(&self) -> Vec<(Rat, i64)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let dx = w[1].0 - w[0].0;
                let slope = (&w[1].1 - &w[0].1) / Rat::from(BigInt::from(dx));
                (slope, dx)
            })
            .collect()
    }
}

/// Andrew monotone-chain lower hull with exact rational comparisons.
/// Points with equal abscissae are rejected; the input must contain the
/// point `(0, 0)` (the polygons in this crate always do).
pub fn lower_hull(points: &[(i64, Rat)]) -> Result<LowerConvexPolygon> {
    if points.is_empty() {
        return Err(Error::Domain("lower hull of an empty point set".into()));
    }
    let mut pts: Vec<(i64, Rat)> = points.to_vec();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    for w in pts.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Domain(format!(
                "duplicate abscissa {} in lower hull input",
                w[0].0
            )));
        }
    }
    let mut hull: Vec<(i64, Rat)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // Keep b only if it is strictly below segment a-p.
            let lhs = (&b.1 - &a.1) * Rat::from(BigInt::from(p.0 - a.0));
            let rhs = (&p.1 - &a.1) * Rat::from(BigInt::from(b.0 - a.0));
            if lhs < rhs {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    LowerConvexPolygon::new(hull)
}

/// Exact comparison of two lower convex polygons as piecewise-linear
/// functions over the integer abscissae of their common range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// `A(x) >= B(x)` at every integer of the common range.
    pub lies_above: bool,
    /// Same endpoints and equal at every integer of the common range.
    pub equal: bool,
    /// Right endpoints agree in both coordinates.
    pub endpoints_equal: bool,
    /// First integer abscissa where the functions differ, if any.
    pub first_divergence: Option<i64>,
}

pub fn polygon_compare(a: &LowerConvexPolygon, b: &LowerConvexPolygon) -> ComparisonReport {
    let common = a.x_max().min(b.x_max());
    let mut lies_above = true;
    let mut first_divergence = None;
    for x in 0..=common {
        let av = a.eval(x).expect("in range");
        let bv = b.eval(x).expect("in range");
        if av != bv && first_divergence.is_none() {
            first_divergence = Some(x);
        }
        if av < bv {
            lies_above = false;
        }
    }
    let endpoints_equal = a.x_max() == b.x_max() && a.y_end() == b.y_end();
    ComparisonReport {
        lies_above,
        equal: endpoints_equal && first_divergence.is_none(),
        endpoints_equal,
        first_divergence,
    }
}

// JSON format: {"vertices": [[x, num, den], ...]} with reduced fractions.
impl Serialize for LowerConvexPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        #[derive(Serialize)]
        struct Repr {
            vertices: Vec<[i64; 3]>,
        }
        let vertices = self
            .vertices
            .iter()
            .map(|(x, y)| {
                let num = y.numer().to_i64().ok_or_else(|| {
                    S::Error::custom("polygon ordinate numerator exceeds i64")
                })?;
                let den = y.denom().to_i64().ok_or_else(|| {
                    S::Error::custom("polygon ordinate denominator exceeds i64")
                })?;
                Ok([*x, num, den])
            })
            .collect::<std::result::Result<Vec<_>, S::Error>>()?;
        Repr { vertices }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LowerConvexPolygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            vertices: Vec<[i64; 3]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let vertices = repr
            .vertices
            .into_iter()
            .map(|[x, num, den]| {
                if den == 0 {
                    return Err(D::Error::custom("zero denominator in polygon vertex"));
                }
                Ok((x, Rat::new(BigInt::from(num), BigInt::from(den))))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        LowerConvexPolygon::new(vertices).map_err(D::Error::custom)
    }
}
