//! Arithmetic in F_p and its extensions: deterministic irreducible moduli,
//! Frobenius traces, torus enumeration, and discrete-log tables for the
//! exponential-sum kernels.

use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::ToPrimitive;


/// Largest prime accepted for a coefficient field.
pub const MAX_PRIME: u64 = 1 << 20;

/// Largest field size for which discrete-log tables are built.
pub const TABLE_CAP: u64 = 1 << 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::Domain(format!("prime {p} exceeds the limit {MAX_PRIME}")));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// Elements are coefficient vectors over F_p of length `degree`, reduced
/// modulo the monic irreducible `modulus`.
pub type FieldElement = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    p: u64,
    degree: usize,
    /// Monic irreducible, low-to-high, length `degree + 1`.
    modulus: Vec<u64>,
}

impl ExtensionField {
    /// The extension of degree `m` realized by the deterministically chosen
    /// modulus from [`find_irreducible`].
    pub fn new(base: PrimeField, m: usize) -> Result<Self> {
        let modulus = find_irreducible(base, m)?;
        Ok(ExtensionField { p: base.p(), degree: m, modulus })
    }

    pub fn with_modulus(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let p = base.p();
        let m = modulus.len() - 1;
        if m == 0 || modulus[m] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Domain("modulus must be monic with reduced coefficients".into()));
        }
        if !poly_is_irreducible(p, &modulus) {
            return Err(Error::Domain("modulus is reducible".into()));
        }
        Ok(ExtensionField { p, degree: m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field size `p^degree`, or an error when it does not fit in u64.
    pub fn size(&self) -> Result<u64> {
        let mut q: u64 = 1;
        for _ in 0..self.degree {
            q = q
                .checked_mul(self.p)
                .ok_or_else(|| Error::Domain("field size exceeds u64".into()))?;
        }
        Ok(q)
    }

    pub fn zero(&self) -> FieldElement {
        vec![0; self.degree]
    }

    pub fn one(&self) -> FieldElement {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn is_zero(&self, e: &FieldElement) -> bool {
        e.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.degree;
        if m == 1 {
            return vec![(a[0] * b[0]) % self.p];
        }
        let mut tmp = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                tmp[i + j] = (tmp[i + j] + x * y) % self.p;
            }
        }
        self.reduce(&mut tmp);
        tmp.truncate(m);
        tmp
    }

    fn reduce(&self, tmp: &mut [u64]) {
        let m = self.degree;
        for k in (m..tmp.len()).rev() {
            let c = tmp[k];
            if c == 0 {
                continue;
            }
            tmp[k] = 0;
            for i in 0..m {
                if self.modulus[i] != 0 {
                    let sub = (self.modulus[i] * c) % self.p;
                    tmp[k - m + i] = (tmp[k - m + i] + self.p - sub) % self.p;
                }
            }
        }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let q = self.size()?;
        Ok(self.pow(a, (q - 2) as u128))
    }

    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p as u128)
    }

    /// Trace to the prime field: `Tr(e) = sum of e^(p^i)` for `i < degree`.
    pub fn trace(&self, e: &FieldElement) -> Result<u64> {
        let mut acc = self.zero();
        let mut cur = e.clone();
        for _ in 0..self.degree {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        if acc[1..].iter().any(|&c| c != 0) {
            return Err(Error::InternalInconsistency(
                "trace did not land in the prime field".into(),
            ));
        }
        Ok(acc[0])
    }

    /// Element whose coefficient vector is the base-p digits of `v`
    /// (constant coefficient = least significant digit).
    pub fn element_from_packed(&self, mut v: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        e
    }

    pub fn packed_index(&self, e: &FieldElement) -> u64 {
        let mut v = 0u64;
        for &c in e.iter().rev() {
            v = v * self.p + c;
        }
        v
    }

    /// The nonzero element of lexicographic rank `r` (1-based in the order
    /// of coefficient vectors `(c_0, c_1, ..)`); rank 0 would be zero and
    /// is not part of the torus.
    fn element_from_lex_rank(&self, r: u64) -> FieldElement {
        // Lexicographic order on (c_0, .., c_{m-1}) equals numeric order of
        // the integer with c_0 as the most significant digit.
        let mut e = self.zero();
        let mut v = r;
        for i in (0..self.degree).rev() {
            e[i] = v % self.p;
            v /= self.p;
        }
        e
    }
}

/// Deterministic modulus: the first monic irreducible of degree `m` in the
/// counting order of coefficient vectors (constant coefficient least
/// significant).
pub fn find_irreducible(base: PrimeField, m: usize) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::Domain("extension degree must be positive".into()));
    }
    let p = base.p();
    let count = BigUint::from(p).pow(m as u32);
    let count = count
        .to_u64()
        .filter(|&c| c <= (1 << 40))
        .ok_or_else(|| Error::Domain("degree too large for modulus search".into()))?;
    for j in 0..count {
        let mut f: Vec<u64> = Vec::with_capacity(m + 1);
        let mut v = j;
        for _ in 0..m {
            f.push(v % p);
            v /= p;
        }
        f.push(1);
        if poly_is_irreducible(p, &f) {
            return Ok(f);
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

// -- dense univariate arithmetic over F_p used by the irreducibility test --

fn poly_trim(f: &mut Vec<u64>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = b.len() - 1;
    if db == 0 {
        return vec![0];
    }
    let lead_inv = mod_inverse(p, b[db]);
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        if c != 0 {
            for i in 0..db {
                let sub = (b[i] * c) % p;
                r[dr - db + i] = (r[dr - db + i] + p - sub) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// Gcd of two polynomials over F_p (dense, low-to-high); used by the
/// irreducibility test here and the binary-form squarefreeness test in the
/// L-function module.
pub(crate) fn univariate_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    poly_gcd(p, a, b)
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(p, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let mut tmp = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            tmp[i + j] = (tmp[i + j] + x * y) % p;
        }
    }
    poly_rem(p, &tmp, f)
}

fn mod_inverse(p: u64, a: u64) -> u64 {
    // Fermat; p is prime and a is nonzero mod p.
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A monic `f` of degree `m` is irreducible over F_p exactly when it shares
/// no factor with `x^(p^i) - x` for any `i <= m/2`.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut r = x.clone();
    for _ in 1..=m / 2 {
        // r <- r^p mod f
        let mut acc = vec![1];
        let mut base = r.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(p, &acc, &base, f);
            }
            base = poly_mulmod(p, &base, &base, f);
            e >>= 1;
        }
        r = acc;
        // gcd(f, r - x) must be constant.
        let mut diff = r.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(p, f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Deterministic stream over `((F_q)^*)^n` in lexicographic order of
/// coefficient vectors, with `(start, stride)` partitioning for workers.
#[derive(Debug)]
pub struct TorusStream<'a> {
    field: &'a ExtensionField,
    n: usize,
    q_minus_1: u64,
    next_flat: u64,
    stride: u64,
    total: u64,
}

impl<'a> TorusStream<'a> {
    pub fn new(field: &'a ExtensionField, n: usize, budget: u64) -> Result<Self> {
        Self::strided(field, n, 0, 1, budget)
    }

    pub fn strided(
        field: &'a ExtensionField,
        n: usize,
        start: u64,
        stride: u64,
        budget: u64,
    ) -> Result<Self> {
        assert!(stride >= 1);
        let q = field.size()?;
        let total = BigUint::from(q - 1).pow(n as u32);
        let Some(total64) = total.to_u64().filter(|&t| t <= budget) else {
            return Err(Error::EnumerationBudget {
                required: total.clone(),
                per_sum: total,
                budget,
                largest_feasible_k: None,
            });
        };
        Ok(TorusStream {
            field,
            n,
            q_minus_1: q - 1,
            next_flat: start,
            stride,
            total: total64,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

impl<'a> Iterator for TorusStream<'a> {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_flat >= self.total {
            return None;
        }
        let mut flat = self.next_flat;
        self.next_flat += self.stride;
        // Mixed-radix decomposition, last coordinate fastest.
        let mut ranks = vec![0u64; self.n];
        for i in (0..self.n).rev() {
            ranks[i] = flat % self.q_minus_1;
            flat /= self.q_minus_1;
        }
        Some(
            ranks
                .iter()
                .map(|&r| self.field.element_from_lex_rank(r + 1))
                .collect(),
        )
    }
}

/// Discrete-log, exponential and trace tables for a small field, built on a
/// deterministically chosen multiplicative generator.
pub struct FieldTables {
    pub field: ExtensionField,
    pub q: u64,
    /// `exp[i]` = packed index of `g^i`, length `q - 1`.
    pub exp: Vec<u32>,
    /// `log[packed]` = discrete log; `log[0]` is a sentinel.
    pub log: Vec<u32>,
    /// `trace_of_power[j]` = trace of `g^j` as an element of F_p.
    pub trace_of_power: Vec<u8>,
}

impl FieldTables {
    pub fn build(base: PrimeField, degree: usize) -> Result<Self> {
        let field = ExtensionField::new(base, degree)?;
        let q = field.size()?;
        if q > TABLE_CAP {
            return Err(Error::Domain(format!(
                "field of size {q} exceeds the table cap {TABLE_CAP}"
            )));
        }
        let p = field.p();

        // Basis traces make the element trace a digit dot product.
        let mut basis_traces = Vec::with_capacity(degree);
        for i in 0..degree {
            let mut e = field.zero();
            e[i] = 1;
            basis_traces.push(field.trace(&e)?);
        }
        let trace_packed = |v: u64| -> u8 {
            let mut v = v;
            let mut t = 0u64;
            for bt in &basis_traces {
                t += (v % p) * bt;
                v /= p;
            }
            (t % p) as u8
        };

        let generator = find_generator(&field, q)?;
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut trace_of_power = vec![0u8; (q - 1) as usize];
        let mut acc = field.one();
        for (i, slot) in exp.iter_mut().enumerate() {
            let idx = field.packed_index(&acc);
            *slot = idx as u32;
            log[idx as usize] = i as u32;
            trace_of_power[i] = trace_packed(idx);
            acc = field.mul(&acc, &generator);
        }
        if acc != field.one() {
            return Err(Error::InternalInconsistency(
                "generator order does not divide q - 1".into(),
            ));
        }
        if log.iter().skip(1).any(|&l| l == u32::MAX) {
            return Err(Error::InternalInconsistency(
                "generator does not generate the multiplicative group".into(),
            ));
        }
        Ok(FieldTables { field, q, exp, log, trace_of_power })
    }
}

fn find_generator(field: &ExtensionField, q: u64) -> Result<FieldElement> {
    if q == 2 {
        return Ok(field.one());
    }
    let factors = prime_factors(q - 1);
    for v in 2..q {
        let e = field.element_from_packed(v);
        let is_gen = factors
            .iter()
            .all(|&l| field.pow(&e, ((q - 1) / l) as u128) != field.one());
        if is_gen {
            return Ok(e);
        }
    }
    Err(Error::InternalInconsistency(
        "no multiplicative generator found".into(),
    ))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
