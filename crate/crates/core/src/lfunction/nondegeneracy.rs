//! Non-degeneracy witness search (the face-Jacobian torus criterion) and
//! the Deligne check on leading forms.
//!
//! A found witness proves degeneracy / a singular leading form; absence of
//! a witness up to the searched field degree is inconclusive, and the
//! reports say so. The binary-form case of the Deligne check is exact.

use super::sums::GroundField;
use super::LaurentPolynomial;
use crate::field::{ExtensionField, FieldElement, PrimeField, TorusStream};
use crate::geometry::{in_convex_hull, proper_faces, LatticePoint};
use crate::{Error, Result};
use serde::Serialize;

/// A degeneracy witness: a torus (or projective) point killing all the
/// relevant partials on a face.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub face_vertices: Vec<Vec<i64>>,
    /// Coordinates as coefficient vectors over F_p.
    pub point: Vec<Vec<u64>>,
    /// The witness lives over F_(q^k) for this k.
    pub field_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegeneracyReport {
    pub witness: Option<Witness>,
    pub searched_k: u32,
    pub faces_searched: usize,
    /// True only when a witness proves degeneracy; absence of a witness is
    /// inconclusive by design.
    pub conclusive: bool,
}

/// Searches every face of the Newton polytope not containing the origin
/// for a common torus zero of the logarithmic partials of the face
/// restriction.
pub fn nondegeneracy_witness_search(
    f: &LaurentPolynomial,
    ground: GroundField,
    k_max: u32,
    budget: u64,
) -> Result<NondegeneracyReport> {
    if f.is_zero() {
        return Err(Error::Domain("witness search on the zero polynomial".into()));
    }
    if f.p() != ground.p {
        return Err(Error::Domain("polynomial and ground field disagree on p".into()));
    }
    let polytope = f.newton_polytope()?;
    let n = f.n_vars();

    // Faces not containing the origin, as lists of vertex coordinates.
    let faces: Vec<Vec<LatticePoint>> = if polytope.affine_dim() == polytope.ambient_dim() {
        let vertex_sets = proper_faces(&polytope)?;
        vertex_sets
            .into_iter()
            .map(|idxs| {
                idxs.iter()
                    .map(|&i| polytope.vertices()[i].clone())
                    .collect::<Vec<_>>()
            })
            .filter(|verts| !in_convex_hull(&LatticePoint::origin(n), verts))
            .collect()
    } else if polytope.affine_dim() <= 1 {
        // Segment (or point): the faces not containing the origin are the
        // nonzero endpoints.
        polytope
            .vertices()
            .iter()
            .filter(|v| !v.is_origin())
            .map(|v| vec![v.clone()])
            .collect()
    } else {
        return Err(Error::Domain(format!(
            "witness search needs a full-dimensional Newton polytope or a segment \
             (affine dimension {} in ambient dimension {})",
            polytope.affine_dim(),
            polytope.ambient_dim()
        )));
    };

    let base = PrimeField::new(ground.p)?;
    for face in &faces {
        let restriction =
            f.restrict_to(|e| in_convex_hull(&LatticePoint(e.to_vec()), face));
        if restriction.is_zero() {
            continue;
        }
        let partials: Vec<LaurentPolynomial> = (0..n)
            .map(|i| restriction.log_partial(i))
            .collect::<Result<_>>()?;
        let face_coords: Vec<Vec<i64>> = face.iter().map(|v| v.coords().to_vec()).collect();

        if partials.iter().all(|d| d.is_zero()) {
            // Every torus point is a common zero.
            let field = ExtensionField::new(base, ground.degree as usize)?;
            return Ok(NondegeneracyReport {
                witness: Some(Witness {
                    face_vertices: face_coords,
                    point: vec![field.one(); n],
                    field_degree: 1,
                }),
                searched_k: k_max,
                faces_searched: faces.len(),
                conclusive: true,
            });
        }

        for k in 1..=k_max {
            let field = ExtensionField::new(base, (ground.degree * k) as usize)?;
            let Ok(stream) = TorusStream::new(&field, n, budget) else {
                // Out of budget for this k; stop deepening on this face.
                break;
            };
            for point in stream {
                let mut all_zero = true;
                for d in &partials {
                    if !field.is_zero(&d.eval(&field, &point)?) {
                        all_zero = false;
                        break;
                    }
                }
                if all_zero {
                    return Ok(NondegeneracyReport {
                        witness: Some(Witness {
                            face_vertices: face_coords,
                            point,
                            field_degree: k,
                        }),
                        searched_k: k_max,
                        faces_searched: faces.len(),
                        conclusive: true,
                    });
                }
            }
        }
    }
    Ok(NondegeneracyReport {
        witness: None,
        searched_k: k_max,
        faces_searched: faces.len(),
        conclusive: false,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeligneReport {
    pub degree: i64,
    /// True when the leading form is (or is presumed) smooth.
    pub deligne: bool,
    /// Exact for one and two variables; for more, true only when a
    /// singular point was found.
    pub conclusive: bool,
    pub singular_witness: Option<Witness>,
    pub searched_k: u32,
}

/// Smoothness of the projective hypersurface cut out by the leading form.
/// Exact (squarefreeness) for binary forms; witness search otherwise.
pub fn deligne_check(
    h: &LaurentPolynomial,
    ground: GroundField,
    k_max: u32,
    budget: u64,
) -> Result<DeligneReport> {
    if h.is_zero() {
        return Err(Error::Domain("Deligne check on the zero polynomial".into()));
    }
    if h.has_negative_exponent() {
        return Err(Error::Domain("Deligne polynomials have nonnegative exponents".into()));
    }
    if h.p() != ground.p {
        return Err(Error::Domain("polynomial and ground field disagree on p".into()));
    }
    let d = h.total_degree().expect("nonzero polynomial has a degree");
    if d < 1 {
        return Err(Error::Domain("Deligne check needs positive degree".into()));
    }
    let p = h.p();
    let n = h.n_vars();
    let leading = h.restrict_to(|e| e.iter().sum::<i64>() == d);

    match n {
        1 => Ok(DeligneReport {
            degree: d,
            deligne: true,
            conclusive: true,
            singular_witness: None,
            searched_k: 0,
        }),
        2 => {
            // Binary form sum a_i x1^i x2^(d-i): squarefree iff the
            // point at infinity has multiplicity <= 1 and the
            // dehomogenization is squarefree.
            let mut univ = vec![0u64; d as usize + 1];
            for (e, &c) in leading.terms() {
                univ[e[0] as usize] = c;
            }
            let deg_u = univ.iter().rposition(|&c| c != 0).unwrap();
            let x2_mult = d as usize - deg_u;
            let squarefree = x2_mult <= 1 && univariate_squarefree(p, &univ[..=deg_u]);
            Ok(DeligneReport {
                degree: d,
                deligne: squarefree,
                conclusive: true,
                singular_witness: None,
                searched_k: 0,
            })
        }
        _ => {
            // Projective singular-point search over F_(q^k), k <= k_max.
            let partials: Vec<LaurentPolynomial> = (0..n)
                .map(|i| leading.partial(i))
                .collect::<Result<_>>()?;
            let base = PrimeField::new(p)?;
            for k in 1..=k_max {
                let field = ExtensionField::new(base, (ground.degree * k) as usize)?;
                let qk = field.size()?;
                // Representatives: leading coordinate 1, earlier ones 0.
                let reps = projective_count(qk, n);
                if reps > budget {
                    break;
                }
                for lead in 0..n {
                    let free = n - 1 - lead;
                    let mut idx = vec![0u64; free];
                    loop {
                        let mut point: Vec<FieldElement> = vec![field.zero(); lead];
                        point.push(field.one());
                        point.extend(idx.iter().map(|&v| field.element_from_packed(v)));
                        let on_form = field.is_zero(&leading.eval(&field, &point)?);
                        if on_form {
                            let singular = partials.iter().try_fold(
                                true,
                                |acc, dp| -> Result<bool> {
                                    Ok(acc && field.is_zero(&dp.eval(&field, &point)?))
                                },
                            )?;
                            if singular {
                                return Ok(DeligneReport {
                                    degree: d,
                                    deligne: false,
                                    conclusive: true,
                                    singular_witness: Some(Witness {
                                        face_vertices: leading
                                            .terms()
                                            .keys()
                                            .cloned()
                                            .collect(),
                                        point,
                                        field_degree: k,
                                    }),
                                    searched_k: k,
                                });
                            }
                        }
                        // Advance the free coordinates.
                        let mut i = free;
                        let done = loop {
                            if i == 0 {
                                break true;
                            }
                            i -= 1;
                            idx[i] += 1;
                            if idx[i] < qk {
                                break false;
                            }
                            idx[i] = 0;
                        };
                        if done {
                            break;
                        }
                    }
                }
            }
            Ok(DeligneReport {
                degree: d,
                deligne: true,
                conclusive: false,
                singular_witness: None,
                searched_k: k_max,
            })
        }
    }
}

fn projective_count(q: u64, n: usize) -> u64 {
    let mut total = 0u64;
    let mut power = 1u64;
    for _ in 0..n {
        total = total.saturating_add(power);
        power = power.saturating_mul(q);
    }
    total
}

/// Squarefreeness over the algebraic closure: gcd with the derivative is
/// constant, and a vanishing derivative (p-th power) fails outright.
fn univariate_squarefree(p: u64, u: &[u64]) -> bool {
    let deg = match u.iter().rposition(|&c| c != 0) {
        Some(d) => d,
        None => return true,
    };
    if deg <= 1 {
        return true;
    }
    let mut du: Vec<u64> = (1..=deg).map(|i| (u[i] * (i as u64 % p)) % p).collect();
    while du.len() > 1 && *du.last().unwrap() == 0 {
        du.pop();
    }
    if du.iter().all(|&c| c == 0) {
        return false;
    }
    let g = crate::field::univariate_gcd(p, &u[..=deg], &du);
    g.len() == 1
}

#[cfg(test)]
mod tests {
    use super::super::sums::DEFAULT_BUDGET;
    use super::*;

    fn ground(p: u64) -> GroundField {
        GroundField::new(p, 1).unwrap()
    }

    #[test]
    fn witness_search_trivial_cases() {
        // f = x: the only non-origin face is the far vertex; the partial is
        // x itself, never zero on the torus.
        let f = LaurentPolynomial::from_terms(3, 1, vec![(vec![1], 1)]).unwrap();
        let r = nondegeneracy_witness_search(&f, ground(3), 3, DEFAULT_BUDGET).unwrap();
        assert!(r.witness.is_none());
        assert!(!r.conclusive);

        // f = x1 x2: degenerate polytope (a segment); partials x1 x2 never
        // vanish on the torus.
        let f = LaurentPolynomial::from_terms(3, 2, vec![(vec![1, 1], 1)]).unwrap();
        let r = nondegeneracy_witness_search(&f, ground(3), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.witness.is_none());
    }

    #[test]
    fn witness_found_for_squared_face() {
        // f = (x1 + x2)^2 over F_3: on the slanted facet the logarithmic
        // partials share the zero x1 = -x2.
        let f = LaurentPolynomial::from_terms(
            3,
            2,
            vec![(vec![2, 0], 1), (vec![1, 1], 2), (vec![0, 2], 1)],
        )
        .unwrap();
        let r = nondegeneracy_witness_search(&f, ground(3), 2, DEFAULT_BUDGET).unwrap();
        let w = r.witness.expect("witness exists at k = 1");
        assert_eq!(w.field_degree, 1);
        assert!(r.conclusive);
    }

    #[test]
    fn deligne_binary_examples() {
        // x1^4 + x2^4 over F_3: 4 distinct roots since gcd(4, 3) = 1.
        let h = LaurentPolynomial::from_terms(3, 2, vec![(vec![4, 0], 1), (vec![0, 4], 1)])
            .unwrap();
        let r = deligne_check(&h, ground(3), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.deligne && r.conclusive);

        // (x1 + x2)^2: repeated factor.
        let h = LaurentPolynomial::from_terms(
            3,
            2,
            vec![(vec![2, 0], 1), (vec![1, 1], 2), (vec![0, 2], 1)],
        )
        .unwrap();
        let r = deligne_check(&h, ground(3), 2, DEFAULT_BUDGET).unwrap();
        assert!(!r.deligne && r.conclusive);

        // x1^3 over F_5 in two variables: a triple root.
        let h = LaurentPolynomial::from_terms(5, 2, vec![(vec![3, 0], 1)]).unwrap();
        let r = deligne_check(&h, ground(5), 2, DEFAULT_BUDGET).unwrap();
        assert!(!r.deligne && r.conclusive);
    }

    #[test]
    fn deligne_binary_p_divides_d_edge() {
        // d = 3 = p: x1^3 + x2^3 = (x1 + x2)^3 over F_3 is not squarefree;
        // the derivative vanishes identically.
        let h = LaurentPolynomial::from_terms(3, 2, vec![(vec![3, 0], 1), (vec![0, 3], 1)])
            .unwrap();
        let r = deligne_check(&h, ground(3), 2, DEFAULT_BUDGET).unwrap();
        assert!(!r.deligne && r.conclusive);
        // x1^3 + x1 x2^2 = x1 (x1^2 + x2^2) over F_3 is squarefree.
        let h = LaurentPolynomial::from_terms(3, 2, vec![(vec![3, 0], 1), (vec![1, 2], 1)])
            .unwrap();
        let r = deligne_check(&h, ground(3), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.deligne && r.conclusive);
    }

    #[test]
    fn deligne_three_variables_witness_search() {
        // Smooth quadric x1^2 + x2^2 + x3^2 over F_3: no singular point,
        // inconclusive pass.
        let h = LaurentPolynomial::from_terms(
            3,
            3,
            vec![(vec![2, 0, 0], 1), (vec![0, 2, 0], 1), (vec![0, 0, 2], 1)],
        )
        .unwrap();
        let r = deligne_check(&h, ground(3), 1, DEFAULT_BUDGET).unwrap();
        assert!(r.deligne && !r.conclusive);

        // (x1 + x2 + x3)^2 is singular along a line; a witness exists.
        let h = LaurentPolynomial::from_terms(
            3,
            3,
            vec![
                (vec![2, 0, 0], 1),
                (vec![0, 2, 0], 1),
                (vec![0, 0, 2], 1),
                (vec![1, 1, 0], 2),
                (vec![1, 0, 1], 2),
                (vec![0, 1, 1], 2),
            ],
        )
        .unwrap();
        let r = deligne_check(&h, ground(3), 1, DEFAULT_BUDGET).unwrap();
        assert!(!r.deligne && r.conclusive);
        assert!(r.singular_witness.is_some());
    }
}
