//! Exact arithmetic in Q(zeta_p), the pi-adic valuation at pi = 1 - zeta,
//! and q-adic orders of coefficients.
//!
//! Elements are rational coefficient vectors on the basis 1, zeta, ...,
//! zeta^(p-2); the relation zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
//! keeps everything reduced. The valuation is computed through the integer
//! norm: (p) = (pi)^(p-1) is totally ramified with residue degree one, so
//! v_pi(a) = v_p(N(a)) and N(a) is the resultant of the p-th cyclotomic
//! polynomial with a.

use crate::linalg::resultant;
use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Upper bound on p; keeps the degree of Phi_p arithmetic tractable.
pub const MAX_CYCLOTOMIC_PRIME: u64 = 97;

/// An element of Q(zeta_p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicNumber {
    p: u64,
    /// Length p - 1; coefficient of zeta^i at index i.
    coeffs: Vec<Rat>,
}

/// pi-adic valuation: a nonnegative integer, or infinity for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiValuation {
    Finite(u64),
    Infinite,
}

/// q-adic order, normalized so that ord_q(q) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QAdicOrder {
    Finite(Rat),
    Infinite,
}

impl CyclotomicNumber {
    pub fn new(p: u64, coeffs: Vec<Rat>) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::Domain(format!(
                "cyclotomic coefficient vector must have length {} for p = {p}",
                p - 1
            )));
        }
        Ok(CyclotomicNumber { p, coeffs })
    }

    pub fn zero(p: u64) -> Self {
        CyclotomicNumber { p, coeffs: vec![Rat::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u64) -> Self {
        Self::from_rational(p, Rat::one())
    }

    pub fn from_rational(p: u64, r: Rat) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = r;
        z
    }

    pub fn from_integer(p: u64, n: i64) -> Self {
        Self::from_rational(p, Rat::from(BigInt::from(n)))
    }

    /// zeta_p^e, reduced.
    pub fn zeta_power(p: u64, e: u64) -> Self {
        let e = (e % p) as usize;
        let mut raw = vec![Rat::zero(); p as usize];
        raw[e] = Rat::one();
        Self::reduce_raw(p, raw)
    }

    /// `sum over residues c of counts[c] * zeta^c`; the exponential-sum
    /// constructor.
    pub fn from_residue_counts(p: u64, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let raw: Vec<Rat> = counts
            .iter()
            .map(|&c| Rat::from(BigInt::from(c)))
            .collect();
        Self::reduce_raw(p, raw)
    }

    fn reduce_raw(p: u64, mut raw: Vec<Rat>) -> Self {
        // Fold zeta^m for m >= p-1 down with zeta^(p-1) = -(1 + .. + zeta^(p-2)).
        let deg = (p - 1) as usize;
        for m in (deg..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[m], Rat::zero());
            if c.is_zero() {
                continue;
            }
            for i in 0..deg {
                raw[m - deg + i] -= &c;
            }
        }
        raw.truncate(deg);
        raw.resize(deg, Rat::zero());
        CyclotomicNumber { p, coeffs: raw }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when every coefficient is an integer, i.e. the element lies in
    /// Z[zeta_p].
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn check_same_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Domain(format!(
                "mixed cyclotomic fields: p = {} vs p = {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicNumber { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CyclotomicNumber { p: self.p, coeffs })
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        let deg = (self.p - 1) as usize;
        let mut raw = vec![Rat::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(Self::reduce_raw(self.p, raw))
    }

    pub fn scalar_mul(&self, r: &Rat) -> Self {
        CyclotomicNumber {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Division by a nonzero rational scalar.
    pub fn scalar_div(&self, r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::Domain("division by zero scalar".into()));
        }
        Ok(CyclotomicNumber {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c / r).collect(),
        })
    }

    /// Multiplicative inverse in Q(zeta_p), via the extended Euclidean
    /// algorithm against Phi_p.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let phi: Vec<Rat> = vec![Rat::one(); self.p as usize];
        let (g, u) = poly_ext_gcd(&self.coeffs, &phi);
        // The gcd must be a nonzero constant since Phi_p is irreducible.
        let g0 = g.first().cloned().unwrap_or_else(Rat::zero);
        if g.iter().skip(1).any(|c| !c.is_zero()) || g0.is_zero() {
            return Err(Error::InternalInconsistency(
                "extended gcd against Phi_p did not produce a unit".into(),
            ));
        }
        let mut raw = vec![Rat::zero(); u.len().max((self.p - 1) as usize)];
        for (i, c) in u.iter().enumerate() {
            raw[i] = c / &g0;
        }
        Ok(Self::reduce_raw(self.p, raw))
    }

    /// Galois action `zeta -> zeta^c` for c coprime to p.
    pub fn galois(&self, c: u64) -> Result<Self> {
        if c % self.p == 0 {
            return Err(Error::Domain("galois exponent must be coprime to p".into()));
        }
        let mut raw = vec![Rat::zero(); self.p as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let e = ((i as u64) * c % self.p) as usize;
            raw[e] += a;
        }
        Ok(Self::reduce_raw(self.p, raw))
    }

    /// Field norm down to Q as the resultant of Phi_p with the coefficient
    /// polynomial; exact for integral elements.
    fn integral_norm(&self) -> Result<BigInt> {
        if !self.is_integral() {
            return Err(Error::Domain(
                "pi-adic valuation requires an integral element; clear denominators first".into(),
            ));
        }
        let phi: Vec<BigInt> = vec![BigInt::one(); self.p as usize];
        let a: Vec<BigInt> = self.coeffs.iter().map(|c| c.to_integer()).collect();
        Ok(resultant(&phi, &a))
    }

    /// Valuation at pi = 1 - zeta: `v_p(Norm(a))`, infinity for zero.
    pub fn pi_valuation(&self) -> Result<PiValuation> {
        if self.is_zero() {
            return Ok(PiValuation::Infinite);
        }
        let norm = self.integral_norm()?;
        if norm.is_zero() {
            return Err(Error::InternalInconsistency(
                "nonzero cyclotomic element with zero norm".into(),
            ));
        }
        let p = BigInt::from(self.p);
        let mut v = 0u64;
        let mut n = norm.abs();
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        Ok(PiValuation::Finite(v))
    }

    /// q-adic order for `q = p^q_degree`, normalized so ord_q(q) = 1.
    /// Handles non-integral elements by clearing denominators and
    /// subtracting the order of the denominator.
    pub fn ord_q(&self, q_degree: u32) -> Result<QAdicOrder> {
        if q_degree == 0 {
            return Err(Error::Domain("q_degree must be at least 1".into()));
        }
        if self.is_zero() {
            return Ok(QAdicOrder::Infinite);
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let cleared = self.scalar_mul(&Rat::from(den.clone()));
        let PiValuation::Finite(v) = cleared.pi_valuation()? else {
            return Err(Error::InternalInconsistency("cleared element is zero".into()));
        };
        let p = BigInt::from(self.p);
        let mut vp_den = 0u64;
        let mut d = den.abs();
        while (&d % &p).is_zero() {
            d /= &p;
            vp_den += 1;
        }
        let scale = BigInt::from((self.p - 1) * q_degree as u64);
        let ord = Rat::new(BigInt::from(v), scale)
            - Rat::new(BigInt::from(vp_den), BigInt::from(q_degree as u64));
        Ok(QAdicOrder::Finite(ord))
    }

    /// Archimedean absolute value under the embedding `zeta -> e^(2 pi i j / p)`.
    pub fn complex_abs(&self, j: u64) -> Result<f64> {
        if j == 0 || j >= self.p {
            return Err(Error::Domain(format!(
                "embedding index must lie in 1..{} for p = {}",
                self.p - 1,
                self.p
            )));
        }
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * (i as u64 * j % self.p) as f64 / self.p as f64;
            let v = c.to_f64().ok_or_else(|| {
                Error::Domain("coefficient too large for float approximation".into())
            })?;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        Ok((re * re + im * im).sqrt())
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p > MAX_CYCLOTOMIC_PRIME {
        return Err(Error::Domain(format!(
            "p = {p} exceeds the cyclotomic bound {MAX_CYCLOTOMIC_PRIME}"
        )));
    }
    if !crate::field::is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(())
}

/// Extended Euclid over Q[t]: returns `(gcd, u)` with `u*a = gcd (mod b)`.
fn poly_ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        v
    }
    fn is_zero_poly(v: &[Rat]) -> bool {
        v.iter().all(|c| c.is_zero())
    }

    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut u0 = vec![Rat::one()];
    let mut u1 = vec![Rat::zero()];
    while !is_zero_poly(&r1) {
        // Euclidean division r0 = q * r1 + rem.
        let mut rem = r0.clone();
        let mut quot = vec![Rat::zero(); rem.len().saturating_sub(r1.len()) + 1];
        let lead = r1.last().unwrap().clone();
        while rem.len() >= r1.len() && !is_zero_poly(&rem) {
            let shift = rem.len() - r1.len();
            let c = rem.last().unwrap() / &lead;
            quot[shift] = &quot[shift] + &c;
            for (i, bc) in r1.iter().enumerate() {
                let t = bc * &c;
                rem[shift + i] -= t;
            }
            rem = trim(rem);
        }
        // (r0, u0, r1, u1) <- (r1, u1, rem, u0 - quot * u1)
        let mut u_next = vec![Rat::zero(); (quot.len() + u1.len()).max(u0.len())];
        for (i, c) in u0.iter().enumerate() {
            u_next[i] += c;
        }
        for (i, qc) in quot.iter().enumerate() {
            if qc.is_zero() {
                continue;
            }
            for (j, uc) in u1.iter().enumerate() {
                let t = qc * uc;
                u_next[i + j] -= t;
            }
        }
        r0 = r1;
        r1 = trim(rem);
        u0 = std::mem::replace(&mut u1, trim(u_next));
        if is_zero_poly(&r1) {
            break;
        }
    }
    (r0, u0)
}

// Serialization: {"p": p, "coeffs": [[num, den], ...]} with the integers
// rendered as decimal strings so arbitrarily large exact values round-trip.
#[derive(Serialize, Deserialize)]
struct CycRepr {
    p: u64,
    coeffs: Vec<(String, String)>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycRepr {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| (c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|(n, dd)| {
                let num: BigInt = n.parse().map_err(D::Error::custom)?;
                let den: BigInt = dd.parse().map_err(D::Error::custom)?;
                if den.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(Rat::new(num, den))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        CyclotomicNumber::new(repr.p, coeffs).map_err(D::Error::custom)
    }
}
