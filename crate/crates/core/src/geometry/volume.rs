//! Normalized volumes by recursive facet decomposition.
//!
//! `n! V(P) = sum over facets of (offset relative to a base vertex) times
//! the (n-1)-dimensional normalized volume of the facet in the lattice of
//! its own hyperplane`. The facet lattice is re-coordinatized through a
//! unimodular transform so the recursion bottoms out at interval lengths.

use super::{IntegralPolytope, LatticePoint};
use crate::linalg::HyperplaneLattice;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

impl IntegralPolytope {
    /// `n! V(P)` as an exact nonnegative integer. Degenerate polytopes have
    /// volume zero.
    pub fn normalized_volume(&self) -> Result<u64> {
        if self.is_degenerate() {
            return Ok(0);
        }
        let v = normalized_volume_big(self)?;
        v.to_u64().ok_or_else(|| {
            Error::InternalInconsistency("normalized volume exceeds u64".into())
        })
    }
}

fn normalized_volume_big(p: &IntegralPolytope) -> Result<BigInt> {
    let n = p.ambient_dim();
    if p.affine_dim() < n {
        return Ok(BigInt::zero());
    }
    if n == 1 {
        let lo = p.vertices().iter().map(|v| v.coords()[0]).min().unwrap();
        let hi = p.vertices().iter().map(|v| v.coords()[0]).max().unwrap();
        return Ok(BigInt::from(hi - lo));
    }
    p.require_full_dim()?;
    let base = p.vertices()[0].big();
    let mut total = BigInt::zero();
    for fi in 0..p.facets().len() {
        let f = &p.facets()[fi];
        let (a, c) = f.primitive();
        let shift: BigInt = a
            .iter()
            .zip(base.iter())
            .map(|(ai, bi)| ai * bi)
            .sum();
        let rel = c - shift;
        debug_assert!(!rel.is_negative(), "base vertex violates a facet");
        if rel.is_zero() {
            continue;
        }
        let (sub, _) = facet_subpolytope(p, fi)?;
        total += rel * normalized_volume_big(&sub)?;
    }
    Ok(total)
}

/// Re-coordinatizes a facet as a full-dimensional polytope in `Z^(n-1)`
/// using a basis of the lattice of its hyperplane. Returns the sub-polytope
/// together with a map from sub-polytope vertices back to ambient vertex
/// indices.
pub(super) fn facet_subpolytope(
    p: &IntegralPolytope,
    facet_index: usize,
) -> Result<(IntegralPolytope, BTreeMap<LatticePoint, usize>)> {
    let n = p.ambient_dim();
    let f = &p.facets()[facet_index];
    let (a, _) = f.primitive();
    let lattice = HyperplaneLattice::new(a);
    let base = p.vertices()[f.vertex_indices[0]].big();

    let mut sub_points = Vec::new();
    let mut back = BTreeMap::new();
    for &vi in &f.vertex_indices {
        let x: Vec<BigInt> = p.vertices()[vi]
            .big()
            .into_iter()
            .zip(base.iter())
            .map(|(v, b)| v - b)
            .collect();
        let coords = lattice.coords(&x).ok_or_else(|| {
            Error::InternalInconsistency("facet vertex off its own hyperplane".into())
        })?;
        let small: Vec<i64> = coords
            .iter()
            .map(|c| {
                c.to_i64().ok_or_else(|| {
                    Error::InternalInconsistency("facet coordinate exceeds i64".into())
                })
            })
            .collect::<Result<_>>()?;
        let pt = LatticePoint(small);
        back.insert(pt.clone(), vi);
        sub_points.push(pt);
    }
    let sub = IntegralPolytope::hull(&sub_points, n - 1)?;
    Ok((sub, back))
}
