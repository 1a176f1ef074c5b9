//! Reconstruction of the L-polynomial from power sums and its q-adic
//! Newton polygon.
//!
//! With `u_k = (-1)^(n-1) S_k`, the coefficients of
//! `P(T) = exp(sum u_k T^k / k)` satisfy `m c_m = sum_{j<=m} u_j c_{m-j}`
//! with `c_0 = 1`; the recursion runs in Q(zeta_p) and integrality is
//! checked afterwards.

use super::sums::{budget_precheck, power_sums, GroundField, PowerSums, SumSettings};
use super::LaurentPolynomial;
use crate::cyclotomic::{CyclotomicNumber, QAdicOrder};
use crate::geometry::{lower_hull, LowerConvexPolygon};
use crate::{Error, Rat, Result};
use num_bigint::BigInt;

/// The polynomial `L*(f, T)^((-1)^(n-1))` with cyclotomic coefficients.
#[derive(Clone, Debug)]
pub struct LPolynomial {
    pub ground: GroundField,
    pub canonical_f: String,
    /// +1 when n is odd, -1 when n is even.
    pub sign_exponent: i8,
    /// c_0 = 1, c_1, .., c_N.
    pub coefficients: Vec<CyclotomicNumber>,
    /// Indices of non-integral coefficients (empty for non-degenerate f).
    pub nonintegral: Vec<usize>,
    /// Whether c_(N+1) was computed and found to vanish; `None` when the
    /// overrun check did not fit the budget.
    pub overrun_zero: Option<bool>,
}

impl LPolynomial {
    pub fn degree_bound(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn all_integral(&self) -> bool {
        self.nonintegral.is_empty()
    }
}

/// Runs the coefficient recursion from precomputed power sums.
fn coefficients_from_sums(
    p: u64,
    sign: i8,
    sums: &PowerSums,
    up_to: usize,
) -> Result<Vec<CyclotomicNumber>> {
    let mut coeffs = vec![CyclotomicNumber::one(p)];
    for m in 1..=up_to {
        let mut acc = CyclotomicNumber::zero(p);
        for j in 1..=m {
            let mut u = sums.values[j - 1].clone();
            if sign < 0 {
                u = u.neg();
            }
            acc = acc.add(&u.mul(&coeffs[m - j])?)?;
        }
        let c = acc.scalar_div(&Rat::from(BigInt::from(m as i64)))?;
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Reconstructs the L-polynomial of `f` from brute-force sums `S_1..S_N`
/// where `N = n! V(Delta(f))`. When the budget also covers `S_(N+1)`, the
/// coefficient `c_(N+1)` is computed and checked to vanish.
pub fn l_polynomial(f: &LaurentPolynomial, settings: &SumSettings) -> Result<LPolynomial> {
    if f.is_zero() {
        return Err(Error::Domain("L-function of the zero polynomial".into()));
    }
    let polytope = f.newton_polytope()?;
    let degree = polytope.normalized_volume()?;
    if degree == 0 {
        return Err(Error::Domain(
            "Newton polytope has zero normalized volume; the L-polynomial degree is zero".into(),
        ));
    }
    l_polynomial_with_degree(f, settings, degree as u32)
}

pub fn l_polynomial_with_degree(
    f: &LaurentPolynomial,
    settings: &SumSettings,
    degree: u32,
) -> Result<LPolynomial> {
    let n = f.n_vars();
    let sign: i8 = if n % 2 == 1 { 1 } else { -1 };
    let q = settings.ground.q()?;
    budget_precheck(q, n, degree, settings.budget)?;

    // Overrun check only when S_(N+1) also fits the budget.
    let overrun_fits = budget_precheck(q, n, degree + 1, settings.budget).is_ok();
    let n_max = if overrun_fits { degree + 1 } else { degree };
    let sums = power_sums(f, settings, n_max)?;

    let coeffs = coefficients_from_sums(settings.ground.p, sign, &sums, n_max as usize)?;
    let overrun_zero = overrun_fits.then(|| coeffs[degree as usize + 1].is_zero());
    let mut coefficients = coeffs;
    coefficients.truncate(degree as usize + 1);
    let nonintegral = coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_integral())
        .map(|(i, _)| i)
        .collect();
    Ok(LPolynomial {
        ground: settings.ground,
        canonical_f: sums.canonical_f,
        sign_exponent: sign,
        coefficients,
        nonintegral,
        overrun_zero,
    })
}

/// Builds the L-polynomial from already-computed power sums (no overrun
/// check); used by the sampling paths that batch sums across many
/// polynomials.
pub fn l_polynomial_from_sums(
    n_vars: usize,
    sums: &PowerSums,
    degree: u32,
) -> Result<LPolynomial> {
    if (sums.values.len() as u32) < degree {
        return Err(Error::Domain(format!(
            "need S_1..S_{degree} but only {} sums are available",
            sums.values.len()
        )));
    }
    let sign: i8 = if n_vars % 2 == 1 { 1 } else { -1 };
    let coefficients =
        coefficients_from_sums(sums.ground.p, sign, sums, degree as usize)?;
    let nonintegral = coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_integral())
        .map(|(i, _)| i)
        .collect();
    Ok(LPolynomial {
        ground: sums.ground,
        canonical_f: sums.canonical_f.clone(),
        sign_exponent: sign,
        coefficients,
        nonintegral,
        overrun_zero: None,
    })
}

/// q-adic Newton polygon: the lower hull of `(i, ord_q c_i)`, zero
/// coefficients skipped. Non-integral coefficients are handled exactly by
/// the denominator-clearing path inside `ord_q`.
pub fn newton_polygon(l: &LPolynomial) -> Result<LowerConvexPolygon> {
    let mut points = Vec::new();
    for (i, c) in l.coefficients.iter().enumerate() {
        match c.ord_q(l.ground.degree)? {
            QAdicOrder::Infinite => continue,
            QAdicOrder::Finite(o) => points.push((i as i64, o)),
        }
    }
    lower_hull(&points)
}

#[cfg(test)]
mod tests {
    use super::super::sums::DEFAULT_BUDGET;
    use super::*;
    use crate::Rat;
    use num_bigint::BigInt;

    fn r(n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }
    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn settings(p: u64) -> SumSettings<'static> {
        SumSettings::new(GroundField::new(p, 1).unwrap())
    }

    #[test]
    fn l_of_x_is_one_minus_t() {
        // S_k = -1 for all k, so P(T) = exp(-sum T^k/k) = 1 - T.
        let f = LaurentPolynomial::from_terms(3, 1, vec![(vec![1], 1)]).unwrap();
        let s = settings(3);
        let l = l_polynomial(&f, &s).unwrap();
        assert_eq!(l.degree_bound(), 1);
        assert_eq!(l.sign_exponent, 1);
        assert_eq!(l.coefficients[1], CyclotomicNumber::from_integer(3, -1));
        assert!(l.all_integral());
        assert_eq!(l.overrun_zero, Some(true));
        let np = newton_polygon(&l).unwrap();
        assert_eq!(np.vertices(), &[(0, r(0)), (1, r(0))]);
    }

    #[test]
    fn l_of_x_squared_matches_hasse_davenport() {
        // Oracle: S_k = -(-g)^k - 1 with g = 1 + 2 zeta_3 the quadratic
        // Gauss sum, hence P(T) = (1 - T)(1 + g T).
        let f = LaurentPolynomial::from_terms(3, 1, vec![(vec![2], 1)]).unwrap();
        let s = settings(3);
        let g = CyclotomicNumber::new(3, vec![r(1), r(2)]).unwrap();

        // Brute-force sums match the oracle for k <= 4.
        let sums = super::super::sums::power_sums(&f, &s, 4).unwrap();
        for k in 1..=4u32 {
            let mut oracle = g.neg(); // -g
            oracle = oracle_pow(&oracle, k); // (-g)^k
            let oracle = oracle.neg().sub(&CyclotomicNumber::one(3)).unwrap();
            assert_eq!(sums.s(k), &oracle, "k = {k}");
        }

        let l = l_polynomial(&f, &s).unwrap();
        assert_eq!(l.degree_bound(), 2);
        // c_1 = g - 1, c_2 = -g.
        assert_eq!(
            l.coefficients[1],
            g.sub(&CyclotomicNumber::one(3)).unwrap()
        );
        assert_eq!(l.coefficients[2], g.neg());
        assert!(l.all_integral());
        assert_eq!(l.overrun_zero, Some(true));

        let np = newton_polygon(&l).unwrap();
        assert_eq!(np.vertices(), &[(0, r(0)), (1, r(0)), (2, rq(1, 2))]);
    }

    fn oracle_pow(base: &CyclotomicNumber, k: u32) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::one(base.p());
        for _ in 0..k {
            acc = acc.mul(base).unwrap();
        }
        acc
    }

    #[test]
    fn newton_polygon_lies_above_hodge_polygon() {
        // A small two-variable case where everything is fast: the Newton
        // polygon of a non-degenerate f must lie above HP with the same
        // endpoints.
        let f = LaurentPolynomial::from_terms(
            3,
            2,
            vec![(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)],
        )
        .unwrap();
        let s = settings(3);
        let l = l_polynomial(&f, &s).unwrap();
        let np = newton_polygon(&l).unwrap();
        let hp = f.newton_polytope().unwrap().hodge_polygon().unwrap();
        let cmp = crate::geometry::polygon_compare(&np, &hp);
        assert!(cmp.lies_above, "NP must lie above HP");
        assert!(cmp.endpoints_equal, "endpoints must agree");
    }

    #[test]
    fn budget_overrun_is_reported_not_computed() {
        let f = LaurentPolynomial::from_terms(3, 1, vec![(vec![1], 1)]).unwrap();
        // Budget exactly fits S_1 (2 points) but not S_2 (8 points):
        // degree 1 passes, overrun skipped.
        let s = SumSettings::new(GroundField::new(3, 1).unwrap()).with_budget(2);
        let l = l_polynomial(&f, &s).unwrap();
        assert_eq!(l.overrun_zero, None);
        let _ = DEFAULT_BUDGET;
    }
}
