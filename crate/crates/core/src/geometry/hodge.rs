//! The weight function w(u), weighted lattice-point counts W(k), Hodge
//! numbers H(k) and the Hodge polygon.

use super::lp::{self, LpOutcome};
use super::polygon::LowerConvexPolygon;
use super::{IntegralPolytope, LatticePoint};
use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Value of the weight function: the least nonnegative `c` with `u` in
/// `c * Delta`, or infinity when `u` lies outside the cone over `Delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Finite(Rat),
    Infinite,
}

impl Weight {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Weight::Finite(r) => Some(r),
            Weight::Infinite => None,
        }
    }
}

/// Denominator, weighted point counts and Hodge numbers of a polytope.
#[derive(Clone, Debug)]
pub struct HodgeData {
    /// D(Delta).
    pub denominator: u64,
    /// W(k) for 0 <= k <= n*D: lattice points of weight exactly k/D.
    pub counts: Vec<u64>,
    /// H(k) for 0 <= k <= n*D (may be negative for pathological inputs).
    pub hodge: Vec<i64>,
    /// Indices k with H(k) < 0; reported, not fatal.
    pub negative_hodge: Vec<usize>,
}

impl IntegralPolytope {
    fn require_origin(&self) -> Result<()> {
        self.require_full_dim()?;
        if !self.contains_origin() {
            return Err(Error::InvalidPolytope(
                "origin is not contained in the polytope".into(),
            ));
        }
        Ok(())
    }

    /// Weight via the facet formula: membership in the cone is decided by
    /// the origin facets, the value is the maximum of `e . u` over the
    /// facets not containing the origin.
    pub fn weight(&self, u: &LatticePoint) -> Result<Weight> {
        self.require_origin()?;
        if u.dim() != self.ambient_dim() {
            return Err(Error::Domain("point dimension mismatch".into()));
        }
        for f in self.facets() {
            if f.contains_origin() && f.eval(u).is_positive() {
                return Ok(Weight::Infinite);
            }
        }
        let mut best = Rat::zero();
        for f in self.facets() {
            let (_, c) = f.primitive();
            if c.is_zero() {
                continue;
            }
            let val = Rat::new(f.eval(u), c.clone());
            if val > best {
                best = val;
            }
        }
        Ok(Weight::Finite(best))
    }

    /// Weight via exact rational linear programming: minimize the total of
    /// the nonnegative coefficients expressing `u` over the nonzero
    /// vertices. Kept as an independent route and cross-checked against
    /// [`IntegralPolytope::weight`] in tests.
    pub fn weight_via_lp(&self, u: &LatticePoint) -> Result<Weight> {
        self.require_origin()?;
        if u.dim() != self.ambient_dim() {
            return Err(Error::Domain("point dimension mismatch".into()));
        }
        let gens: Vec<&LatticePoint> =
            self.vertices().iter().filter(|v| !v.is_origin()).collect();
        let n = self.ambient_dim();
        let mut a: Vec<Vec<Rat>> = Vec::with_capacity(n);
        for row in 0..n {
            a.push(
                gens.iter()
                    .map(|v| Rat::from(BigInt::from(v.coords()[row])))
                    .collect(),
            );
        }
        let b: Vec<Rat> = u
            .coords()
            .iter()
            .map(|&c| Rat::from(BigInt::from(c)))
            .collect();
        let c = vec![Rat::one(); gens.len()];
        match lp::minimize(&a, &b, &c) {
            LpOutcome::Infeasible => Ok(Weight::Infinite),
            LpOutcome::Optimal { value, .. } => Ok(Weight::Finite(value)),
        }
    }

    /// Enumerates the lattice points of `n * Delta` and buckets them by
    /// `D * w(u)`, checking the integrality of each weight on the way.
    pub fn weighted_lattice_counts(&self) -> Result<HodgeData> {
        self.require_origin()?;
        let n = self.ambient_dim();
        let d = self.polytope_denominator()?;
        let top = n as u64 * d;
        let mut counts = vec![0u64; top as usize + 1];
        let (lo, hi) = self.bounding_box();
        let scale = n as i64;
        let lo: Vec<i64> = lo.iter().map(|&x| x.min(0) * scale).collect();
        let hi: Vec<i64> = hi.iter().map(|&x| x.max(0) * scale).collect();
        let n_rat = Rat::from(BigInt::from(n as i64));
        let d_big = BigInt::from(d);

        let mut cur = lo.clone();
        'outer: loop {
            let p = LatticePoint(cur.clone());
            if let Weight::Finite(w) = self.weight(&p)? {
                if w <= n_rat {
                    let scaled = w * Rat::from(d_big.clone());
                    if !scaled.is_integer() {
                        return Err(Error::InternalInconsistency(format!(
                            "D * w({:?}) = {} is not an integer",
                            p.coords(),
                            scaled
                        )));
                    }
                    let k = scaled
                        .to_integer()
                        .to_u64()
                        .ok_or_else(|| {
                            Error::InternalInconsistency("weight bucket out of range".into())
                        })?;
                    counts[k as usize] += 1;
                }
            }
            for i in (0..cur.len()).rev() {
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    continue 'outer;
                }
                cur[i] = lo[i];
            }
            break;
        }
        Ok(HodgeData {
            denominator: d,
            counts,
            hodge: Vec::new(),
            negative_hodge: Vec::new(),
        })
    }

    /// Fills the Hodge numbers `H(k) = sum_i (-1)^i C(n,i) W(k - iD)` and
    /// checks their total against the normalized volume.
    pub fn hodge_numbers(&self) -> Result<HodgeData> {
        let mut data = self.weighted_lattice_counts()?;
        let n = self.ambient_dim();
        let d = data.denominator as i64;
        let top = data.counts.len() as i64 - 1;
        let mut hodge = Vec::with_capacity(data.counts.len());
        for k in 0..=top {
            let mut h: i64 = 0;
            let mut sign = 1i64;
            let mut binom: i64 = 1;
            for i in 0..=n as i64 {
                let idx = k - i * d;
                if (0..=top).contains(&idx) {
                    h += sign * binom * data.counts[idx as usize] as i64;
                }
                sign = -sign;
                binom = binom * (n as i64 - i) / (i + 1);
            }
            hodge.push(h);
        }
        let total: i64 = hodge.iter().sum();
        let volume = self.normalized_volume()?;
        if total < 0 || total as u64 != volume {
            return Err(Error::InternalInconsistency(format!(
                "sum of Hodge numbers {total} differs from normalized volume {volume}"
            )));
        }
        data.negative_hodge = hodge
            .iter()
            .enumerate()
            .filter(|(_, &h)| h < 0)
            .map(|(k, _)| k)
            .collect();
        data.hodge = hodge;
        Ok(data)
    }

    /// The Hodge polygon: starting at the origin, a segment of slope `k/D`
    /// with horizontal length `H(k)` for each k, zero-length segments
    /// collapsed. Negative Hodge numbers are clamped to zero after being
    /// recorded in the returned data.
    pub fn hodge_polygon(&self) -> Result<LowerConvexPolygon> {
        Ok(self.hodge_polygon_with_data()?.0)
    }

    pub fn hodge_polygon_with_data(&self) -> Result<(LowerConvexPolygon, HodgeData)> {
        let data = self.hodge_numbers()?;
        let d = BigInt::from(data.denominator);
        let mut vertices: Vec<(i64, Rat)> = vec![(0, Rat::zero())];
        let mut x = 0i64;
        let mut y = Rat::zero();
        for (k, &h) in data.hodge.iter().enumerate() {
            let h = h.max(0);
            if h == 0 {
                continue;
            }
            let slope = Rat::new(BigInt::from(k as i64), d.clone());
            x += h;
            y += slope * Rat::from(BigInt::from(h));
            vertices.push((x, y.clone()));
        }
        let polygon = LowerConvexPolygon::new(vertices)?;
        Ok((polygon, data))
    }
}
