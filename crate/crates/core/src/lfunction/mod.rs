//! Laurent polynomials over F_p, brute-force exponential sums, L-polynomial
//! reconstruction, q-adic Newton polygons, and the non-degeneracy and
//! Deligne checks.

mod lpoly;
mod nondegeneracy;
mod sums;

pub use lpoly::{l_polynomial, l_polynomial_from_sums, newton_polygon, LPolynomial};
pub use nondegeneracy::{
    deligne_check, nondegeneracy_witness_search, DeligneReport, NondegeneracyReport, Witness,
};
pub use sums::{
    exp_sum_affine, exp_sum_torus, power_sums, power_sums_batch, GroundField, PowerSums,
    SumCache, SumKey, SumSettings, DEFAULT_BUDGET,
};

use crate::field::{ExtensionField, FieldElement};
use crate::geometry::{IntegralPolytope, LatticePoint};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial over F_p: a map from integer exponent vectors
/// (negative entries allowed) to nonzero coefficients, kept in canonical
/// lexicographic term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    p: u64,
    n_vars: usize,
    /// Display labels for the variables (digits, strictly increasing);
    /// `x1..xn` unless the caller says otherwise.
    var_labels: Vec<u8>,
    terms: BTreeMap<Vec<i64>, u64>,
}

impl LaurentPolynomial {
    pub fn from_terms(
        p: u64,
        n_vars: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, i64)>,
    ) -> Result<Self> {
        let labels = (1..=n_vars as u8).collect();
        Self::from_terms_with_labels(p, n_vars, labels, terms)
    }

    pub fn from_terms_with_labels(
        p: u64,
        n_vars: usize,
        var_labels: Vec<u8>,
        terms: impl IntoIterator<Item = (Vec<i64>, i64)>,
    ) -> Result<Self> {
        if !crate::field::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if n_vars == 0 || n_vars > 10 {
            return Err(Error::Domain("polynomials must use 1..=10 variables".into()));
        }
        if var_labels.len() != n_vars
            || var_labels.windows(2).any(|w| w[0] >= w[1])
            || var_labels.iter().any(|&l| l > 9)
        {
            return Err(Error::Domain(
                "variable labels must be strictly increasing digits".into(),
            ));
        }
        let mut map: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        for (expo, coeff) in terms {
            if expo.len() != n_vars {
                return Err(Error::Domain(format!(
                    "exponent vector {expo:?} does not have {n_vars} entries"
                )));
            }
            let c = coeff.rem_euclid(p as i64) as u64;
            let entry = map.entry(expo).or_insert(0);
            *entry = (*entry + c) % p;
        }
        map.retain(|_, &mut c| c != 0);
        Ok(LaurentPolynomial { p, n_vars, var_labels, terms: map })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn var_labels(&self) -> &[u8] {
        &self.var_labels
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, expo: &[i64]) -> u64 {
        self.terms.get(expo).copied().unwrap_or(0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Total degree over nonnegative exponents; callers guard the Laurent
    /// case themselves.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum::<i64>()).max()
    }

    /// Multiplies every coefficient by a nonzero scalar.
    pub fn scale(&self, c: u64) -> Result<Self> {
        if c % self.p == 0 {
            return Err(Error::Domain("scaling by zero".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, &a)| (e.clone(), (a * (c % self.p) % self.p) as i64))
            .collect::<Vec<_>>();
        Self::from_terms_with_labels(self.p, self.n_vars, self.var_labels.clone(), terms)
    }

    /// `x_i d/dx_i`: the logarithmic partial used by the non-degeneracy
    /// criterion (well defined for Laurent monomials).
    pub fn log_partial(&self, i: usize) -> Result<Self> {
        if i >= self.n_vars {
            return Err(Error::Domain("variable index out of range".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, &a)| {
                let factor = e[i].rem_euclid(self.p as i64) as u64;
                (e.clone(), ((a * factor) % self.p) as i64)
            })
            .collect::<Vec<_>>();
        Self::from_terms_with_labels(self.p, self.n_vars, self.var_labels.clone(), terms)
    }

    /// Ordinary partial derivative `d/dx_i`, for genuine polynomials.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.n_vars {
            return Err(Error::Domain("variable index out of range".into()));
        }
        if self.has_negative_exponent() {
            return Err(Error::Domain(
                "partial derivatives require nonnegative exponents".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, &a)| {
                let mut ne = e.clone();
                ne[i] -= 1;
                let factor = (e[i] as u64) % self.p;
                (ne, ((a * factor) % self.p) as i64)
            })
            .collect::<Vec<_>>();
        Self::from_terms_with_labels(self.p, self.n_vars, self.var_labels.clone(), terms)
    }

    /// Restriction to the terms whose exponents belong to `keep`.
    pub fn restrict_to<F: Fn(&[i64]) -> bool>(&self, keep: F) -> Self {
        let terms: BTreeMap<Vec<i64>, u64> = self
            .terms
            .iter()
            .filter(|(e, _)| keep(e))
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        LaurentPolynomial {
            p: self.p,
            n_vars: self.n_vars,
            var_labels: self.var_labels.clone(),
            terms,
        }
    }

    /// Newton polytope: convex hull of the origin and all exponents.
    pub fn newton_polytope(&self) -> Result<IntegralPolytope> {
        if self.is_zero() {
            return Err(Error::Domain(
                "the zero polynomial has no Newton polytope".into(),
            ));
        }
        let mut pts: Vec<LatticePoint> = vec![LatticePoint::origin(self.n_vars)];
        pts.extend(self.terms.keys().map(|e| LatticePoint(e.clone())));
        IntegralPolytope::hull(&pts, self.n_vars)
    }

    /// Evaluation over an extension field; coordinates must be nonzero when
    /// negative exponents occur.
    pub fn eval(&self, field: &ExtensionField, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n_vars {
            return Err(Error::Domain("evaluation point has wrong arity".into()));
        }
        let mut acc = field.zero();
        for (expo, &coeff) in &self.terms {
            let mut term = field.scalar(coeff);
            for (x, &e) in point.iter().zip(expo) {
                if e == 0 {
                    continue;
                }
                let base = if e < 0 {
                    if field.is_zero(x) {
                        return Err(Error::Domain(
                            "negative exponent at a zero coordinate".into(),
                        ));
                    }
                    field.inverse(x)?
                } else {
                    x.clone()
                };
                let pw = field.pow(&base, e.unsigned_abs() as u128);
                term = field.mul(&term, &pw);
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    /// The canonical printed form: terms in lexicographic exponent order,
    /// coefficients reduced. Injective on reduced polynomials with fixed
    /// labels, which is what the sum cache keys on.
    pub fn canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(expo, &coeff)| {
                let mut factors: Vec<String> = Vec::new();
                for (i, &e) in expo.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let label = self.var_labels[i];
                    if e == 1 {
                        factors.push(format!("x{label}"));
                    } else {
                        factors.push(format!("x{label}^{e}"));
                    }
                }
                if factors.is_empty() {
                    coeff.to_string()
                } else if coeff == 1 {
                    factors.join("*")
                } else {
                    format!("{coeff}*{}", factors.join("*"))
                }
            })
            .collect();
        rendered.join(" + ")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_poly() -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            3,
            2,
            vec![(vec![1, 3], 1), (vec![3, 1], 1), (vec![1, 1], 1)],
        )
        .unwrap()
    }

    #[test]
    fn reduction_and_cancellation() {
        let f = LaurentPolynomial::from_terms(3, 1, vec![(vec![1], 1), (vec![1], 2)]).unwrap();
        assert!(f.is_zero());
        let g = LaurentPolynomial::from_terms(3, 1, vec![(vec![1], 4), (vec![2], -1)]).unwrap();
        assert_eq!(g.coeff(&[1]), 1);
        assert_eq!(g.coeff(&[2]), 2);
    }

    #[test]
    fn newton_polytope_examples() {
        let p = fig1_poly().newton_polytope().unwrap();
        let vs: Vec<&[i64]> = p.vertices().iter().map(|v| v.coords()).collect();
        assert_eq!(vs, vec![&[0, 0][..], &[1, 3], &[3, 1]]);

        let x = LaurentPolynomial::from_terms(3, 1, vec![(vec![1], 1)]).unwrap();
        let seg = x.newton_polytope().unwrap();
        assert_eq!(seg.normalized_volume().unwrap(), 1);

        assert!(LaurentPolynomial::from_terms(3, 1, vec![])
            .unwrap()
            .newton_polytope()
            .is_err());
    }

    #[test]
    fn canonical_string_is_sorted_and_stable() {
        assert_eq!(fig1_poly().canonical_string(), "x1*x2 + x1*x2^3 + x1^3*x2");
        let f = LaurentPolynomial::from_terms_with_labels(
            3,
            2,
            vec![0, 1],
            vec![(vec![-1, 0], 1), (vec![1, 2], 2), (vec![0, 0], 1)],
        )
        .unwrap();
        assert_eq!(f.canonical_string(), "x0^-1 + 1 + 2*x0*x1^2");
    }

    #[test]
    fn log_partial_matches_hand_computation() {
        // x1 d/dx1 of x1^2 x2 + x2 = 2 x1^2 x2 over F_5.
        let f =
            LaurentPolynomial::from_terms(5, 2, vec![(vec![2, 1], 1), (vec![0, 1], 1)]).unwrap();
        let d = f.log_partial(0).unwrap();
        assert_eq!(d.coeff(&[2, 1]), 2);
        assert_eq!(d.coeff(&[0, 1]), 0);
    }

    #[test]
    fn eval_handles_negative_exponents() {
        use crate::field::PrimeField;
        let field = ExtensionField::new(PrimeField::new(5).unwrap(), 1).unwrap();
        // f = x^-1 + 2x at x = 2: 1/2 + 4 = 3 + 4 = 2 mod 5.
        let f = LaurentPolynomial::from_terms(5, 1, vec![(vec![-1], 1), (vec![1], 2)]).unwrap();
        let v = f.eval(&field, &[vec![2]]).unwrap();
        assert_eq!(v, vec![2]);
        assert!(f.eval(&field, &[vec![0]]).is_err());
    }
}
