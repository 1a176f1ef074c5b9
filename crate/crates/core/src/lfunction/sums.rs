//! Brute-force exponential sums over tori, with a shared counting kernel.
//!
//! The sum `S_k = sum over x in ((F_{q^k})^*)^n of zeta_p^(Tr f(x))` is
//! assembled from exact residue counts: for each c in F_p we count the
//! torus points with `Tr f(x) = c`. Since the trace is F_p-linear and the
//! coefficients live in F_p, `Tr f(x) = sum_I a_I Tr(x^I)`, so the kernel
//! only ever looks up traces of monomial values through discrete-log
//! tables. Several polynomials on a shared support are counted in one pass
//! by histogramming the vector of monomial traces.

use super::LaurentPolynomial;
use crate::cyclotomic::CyclotomicNumber;
use crate::field::{ExtensionField, FieldTables, PrimeField, TorusStream, TABLE_CAP};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

/// Default per-sum torus evaluation budget.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Largest trace-histogram size (p^support) used by the batch kernel.
const HIST_CAP: u64 = 1 << 22;

/// Flush the u32 histogram well before any bucket can overflow.
const FLUSH_AT: u64 = 1 << 31;

/// The ground field F_q with q = p^degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundField {
    pub p: u64,
    pub degree: u32,
}

impl GroundField {
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        PrimeField::new(p)?;
        if p > crate::cyclotomic::MAX_CYCLOTOMIC_PRIME {
            return Err(Error::Domain(format!(
                "p = {p} exceeds the supported bound {}",
                crate::cyclotomic::MAX_CYCLOTOMIC_PRIME
            )));
        }
        if degree == 0 {
            return Err(Error::Domain("q-degree must be at least 1".into()));
        }
        Ok(GroundField { p, degree })
    }

    pub fn q(&self) -> Result<u64> {
        let mut q = 1u64;
        for _ in 0..self.degree {
            q = q
                .checked_mul(self.p)
                .ok_or_else(|| Error::Domain("q exceeds u64".into()))?;
        }
        Ok(q)
    }
}

/// Cache key for one power sum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SumKey {
    pub canonical_f: String,
    pub p: u64,
    pub q_degree: u32,
    pub k: u32,
}

/// Persistent storage for expensive sums; the CLI provides a file-backed
/// implementation.
pub trait SumCache: Sync {
    fn get(&self, key: &SumKey) -> Option<CyclotomicNumber>;
    fn put(&self, key: &SumKey, value: &CyclotomicNumber);
}

pub struct SumSettings<'a> {
    pub ground: GroundField,
    pub budget: u64,
    pub cache: Option<&'a dyn SumCache>,
}

impl<'a> SumSettings<'a> {
    pub fn new(ground: GroundField) -> Self {
        SumSettings { ground, budget: DEFAULT_BUDGET, cache: None }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_cache(mut self, cache: &'a dyn SumCache) -> Self {
        self.cache = Some(cache);
        self
    }
}

/// The sums S_1..S_N for one polynomial.
#[derive(Clone, Debug)]
pub struct PowerSums {
    pub ground: GroundField,
    pub canonical_f: String,
    pub values: Vec<CyclotomicNumber>,
}

impl PowerSums {
    pub fn s(&self, k: u32) -> &CyclotomicNumber {
        &self.values[(k - 1) as usize]
    }
}

/// Torus evaluations needed by S_k: `(q^k - 1)^n`.
fn sum_size(q: u64, n: usize, k: u32) -> BigUint {
    let qk = BigUint::from(q).pow(k);
    (qk - BigUint::one()).pow(n as u32)
}

/// Refuses jobs whose largest single sum exceeds the per-sum budget, naming
/// the total required count and the largest feasible truncation.
pub(crate) fn budget_precheck(q: u64, n: usize, n_max: u32, budget: u64) -> Result<()> {
    let mut total = BigUint::zero();
    let mut worst = BigUint::zero();
    let mut feasible: Option<u32> = None;
    let mut over = false;
    for k in 1..=n_max {
        let size = sum_size(q, n, k);
        if size <= BigUint::from(budget) {
            feasible = Some(k);
        } else {
            over = true;
        }
        if size > worst {
            worst = size.clone();
        }
        total += size;
    }
    if over {
        return Err(Error::EnumerationBudget {
            required: total,
            per_sum: worst,
            budget,
            largest_feasible_k: feasible,
        });
    }
    Ok(())
}

/// `S_k` for a single polynomial.
pub fn exp_sum_torus(
    f: &LaurentPolynomial,
    ground: GroundField,
    k: u32,
    budget: u64,
) -> Result<CyclotomicNumber> {
    if f.is_zero() {
        return Err(Error::Domain("exponential sum of the zero polynomial".into()));
    }
    if f.p() != ground.p {
        return Err(Error::Domain("polynomial and ground field disagree on p".into()));
    }
    let q = ground.q()?;
    let size = sum_size(q, f.n_vars(), k);
    if size > BigUint::from(budget) {
        return Err(Error::EnumerationBudget {
            required: size.clone(),
            per_sum: size,
            budget,
            largest_feasible_k: largest_feasible(q, f.n_vars(), k, budget),
        });
    }
    let exponents: Vec<Vec<i64>> = f.terms().keys().cloned().collect();
    let coeffs: Vec<Vec<u8>> = vec![f.terms().values().map(|&c| c as u8).collect()];
    let counts = torus_counts_batch(
        &exponents,
        &coeffs,
        PrimeField::new(ground.p)?,
        (ground.degree * k) as usize,
        budget,
    )?;
    Ok(CyclotomicNumber::from_residue_counts(ground.p, &counts[0]))
}

fn largest_feasible(q: u64, n: usize, k_hint: u32, budget: u64) -> Option<u32> {
    let mut best = None;
    for k in 1..=k_hint.max(1) {
        if sum_size(q, n, k) <= BigUint::from(budget) {
            best = Some(k);
        }
    }
    best
}

/// `S_1..S_N` for a single polynomial, with budget precheck and caching.
pub fn power_sums(
    f: &LaurentPolynomial,
    settings: &SumSettings,
    n_max: u32,
) -> Result<PowerSums> {
    Ok(power_sums_batch(std::slice::from_ref(f), settings, n_max)?
        .into_iter()
        .next()
        .expect("one result per input"))
}

/// Power sums for several polynomials over a shared exponent support: one
/// torus pass per k covers every polynomial.
pub fn power_sums_batch(
    fs: &[LaurentPolynomial],
    settings: &SumSettings,
    n_max: u32,
) -> Result<Vec<PowerSums>> {
    if fs.is_empty() {
        return Ok(Vec::new());
    }
    let p = settings.ground.p;
    let n_vars = fs[0].n_vars();
    for f in fs {
        if f.is_zero() {
            return Err(Error::Domain("exponential sum of the zero polynomial".into()));
        }
        if f.p() != p || f.n_vars() != n_vars {
            return Err(Error::Domain(
                "batched polynomials must share p and the variable count".into(),
            ));
        }
    }
    let q = settings.ground.q()?;
    budget_precheck(q, n_vars, n_max, settings.budget)?;

    // Union support in canonical order.
    let mut union: Vec<Vec<i64>> = fs
        .iter()
        .flat_map(|f| f.terms().keys().cloned())
        .collect();
    union.sort();
    union.dedup();
    let coeff_rows: Vec<Vec<u8>> = fs
        .iter()
        .map(|f| union.iter().map(|e| f.coeff(e) as u8).collect())
        .collect();
    let keys: Vec<String> = fs.iter().map(|f| f.canonical_string()).collect();

    let mut values: Vec<Vec<CyclotomicNumber>> = vec![Vec::new(); fs.len()];
    for k in 1..=n_max {
        let cached: Vec<Option<CyclotomicNumber>> = keys
            .iter()
            .map(|cf| {
                settings.cache.and_then(|c| {
                    c.get(&SumKey {
                        canonical_f: cf.clone(),
                        p,
                        q_degree: settings.ground.degree,
                        k,
                    })
                })
            })
            .collect();
        if cached.iter().all(|c| c.is_some()) {
            for (i, c) in cached.into_iter().enumerate() {
                values[i].push(c.unwrap());
            }
            continue;
        }
        let counts = torus_counts_batch(
            &union,
            &coeff_rows,
            PrimeField::new(p)?,
            (settings.ground.degree * k) as usize,
            settings.budget,
        )?;
        for (i, row) in counts.iter().enumerate() {
            let s = CyclotomicNumber::from_residue_counts(p, row);
            if let Some(cache) = settings.cache {
                cache.put(
                    &SumKey {
                        canonical_f: keys[i].clone(),
                        p,
                        q_degree: settings.ground.degree,
                        k,
                    },
                    &s,
                );
            }
            values[i].push(s);
        }
    }
    Ok(values
        .into_iter()
        .zip(keys)
        .map(|(vals, canonical_f)| PowerSums {
            ground: settings.ground,
            canonical_f,
            values: vals,
        })
        .collect())
}

/// Sum over the full affine space `(F_{q^k})^n`; only defined for genuine
/// polynomials (no negative exponents). Used by the Deligne-bound check.
pub fn exp_sum_affine(
    f: &LaurentPolynomial,
    ground: GroundField,
    k: u32,
    budget: u64,
) -> Result<CyclotomicNumber> {
    if f.is_zero() {
        return Err(Error::Domain("exponential sum of the zero polynomial".into()));
    }
    if f.has_negative_exponent() {
        return Err(Error::Domain(
            "affine exponential sums require nonnegative exponents".into(),
        ));
    }
    if f.p() != ground.p {
        return Err(Error::Domain("polynomial and ground field disagree on p".into()));
    }
    let q = ground.q()?;
    let qk = BigUint::from(q).pow(k);
    let size = qk.pow(f.n_vars() as u32);
    let Some(size64) = size.to_u64().filter(|&s| s <= budget) else {
        return Err(Error::EnumerationBudget {
            required: size.clone(),
            per_sum: size,
            budget,
            largest_feasible_k: None,
        });
    };
    let field = ExtensionField::new(PrimeField::new(ground.p)?, (ground.degree * k) as usize)?;
    let qk = field.size()?;
    let n = f.n_vars();
    let mut counts = vec![0u64; ground.p as usize];
    let mut point_idx = vec![0u64; n];
    let mut processed = 0u64;
    loop {
        let point: Vec<_> = point_idx
            .iter()
            .map(|&v| field.element_from_packed(v))
            .collect();
        let value = f.eval(&field, &point)?;
        counts[field.trace(&value)? as usize] += 1;
        processed += 1;
        let mut i = n;
        loop {
            if i == 0 {
                debug_assert_eq!(processed, size64);
                return Ok(CyclotomicNumber::from_residue_counts(ground.p, &counts));
            }
            i -= 1;
            point_idx[i] += 1;
            if point_idx[i] < qk {
                break;
            }
            point_idx[i] = 0;
        }
    }
}

/// Exact residue counts `#\{x in torus : Tr f_j(x) = c\}` for a family of
/// coefficient rows over a shared support.
fn torus_counts_batch(
    exponents: &[Vec<i64>],
    coeff_rows: &[Vec<u8>],
    base: PrimeField,
    ext_degree: usize,
    budget: u64,
) -> Result<Vec<Vec<u64>>> {
    let p = base.p();
    let field = ExtensionField::new(base, ext_degree)?;
    let q = field.size()?;
    if q > TABLE_CAP {
        return torus_counts_slow(exponents, coeff_rows, &field, budget);
    }
    let tables = FieldTables::build(base, ext_degree)?;
    let q1 = q - 1;
    let n = exponents[0].len();
    let len = exponents.len();

    // Exponents reduced modulo the order of the multiplicative group.
    let steps: Vec<Vec<u64>> = exponents
        .iter()
        .map(|e| {
            e.iter()
                .map(|&x| (x.rem_euclid(q1.max(1) as i64)) as u64 % q1.max(1))
                .collect()
        })
        .collect();

    let hist_size = (p as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    let outer_total: u64 = q1.pow((n - 1) as u32);

    let chunks = {
        let workers = rayon::current_num_threads().max(1) as u64 * 4;
        let step = outer_total.div_ceil(workers).max(1);
        let mut ranges = Vec::new();
        let mut s = 0;
        while s < outer_total {
            ranges.push((s, (s + step).min(outer_total)));
            s += step;
        }
        ranges
    };

    let run = |worker: &(dyn Fn((u64, u64)) -> Vec<Vec<u64>> + Sync)| -> Vec<Vec<u64>> {
        chunks
            .par_iter()
            .map(|&r| worker(r))
            .reduce(
                || vec![vec![0u64; p as usize]; coeff_rows.len()],
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(b) {
                        for (xa, xb) in ra.iter_mut().zip(rb) {
                            *xa += xb;
                        }
                    }
                    a
                },
            )
    };

    let trace_table = &tables.trace_of_power;
    let q1u32 = q1 as u32;
    let outer_bases = |flat: u64, js: &mut [u32]| {
        let mut rem = flat;
        let mut coords = vec![0u64; n - 1];
        for i in (0..n - 1).rev() {
            coords[i] = rem % q1;
            rem /= q1;
        }
        for (e, step) in steps.iter().enumerate() {
            let mut j = 0u64;
            for (i, &c) in coords.iter().enumerate() {
                j += step[i] % q1 * c % q1;
            }
            js[e] = (j % q1) as u32;
        }
    };

    if hist_size <= HIST_CAP as u128 {
        let hist_size = hist_size as usize;
        // Powers of p weight each support slot in the histogram key.
        let ppow: Vec<u32> = (0..len)
            .map(|e| (p as u32).pow(e as u32))
            .collect();
        // dot[row][bucket] = coefficient row applied to the bucket digits.
        let dots: Vec<Vec<u8>> = coeff_rows
            .iter()
            .map(|row| {
                (0..hist_size)
                    .map(|v| {
                        let mut v = v as u64;
                        let mut t = 0u64;
                        for &c in row {
                            t += c as u64 * (v % p);
                            v /= p;
                        }
                        (t % p) as u8
                    })
                    .collect()
            })
            .collect();

        // Terms whose last-coordinate step vanishes contribute a
        // row-constant key component; only the others live in the inner
        // loop, dispatched on their count so the loop fully unrolls.
        let varying: Vec<usize> = (0..len).filter(|&e| steps[e][n - 1] != 0).collect();
        let constant: Vec<usize> = (0..len).filter(|&e| steps[e][n - 1] == 0).collect();
        let var_steps: Vec<u32> = varying.iter().map(|&e| steps[e][n - 1] as u32).collect();
        let var_ppow: Vec<u32> = varying.iter().map(|&e| ppow[e]).collect();

        let worker = |(start, end): (u64, u64)| -> Vec<Vec<u64>> {
            let mut counts = vec![vec![0u64; p as usize]; coeff_rows.len()];
            let mut hist = vec![0u32; hist_size];
            let mut js = vec![0u32; len];
            let mut since_flush = 0u64;
            let flush = |hist: &mut [u32], counts: &mut [Vec<u64>]| {
                for (b, h) in hist.iter_mut().enumerate() {
                    if *h != 0 {
                        for (row, dot) in counts.iter_mut().zip(&dots) {
                            row[dot[b] as usize] += *h as u64;
                        }
                        *h = 0;
                    }
                }
            };
            for flat in start..end {
                outer_bases(flat, &mut js);
                let key0: u32 = constant
                    .iter()
                    .map(|&e| trace_table[js[e] as usize] as u32 * ppow[e])
                    .sum();
                let var_js: Vec<u32> = varying.iter().map(|&e| js[e]).collect();
                inner_histogram_pass(
                    trace_table,
                    q1u32,
                    key0,
                    &var_js,
                    &var_steps,
                    &var_ppow,
                    &mut hist,
                );
                since_flush += q1;
                if since_flush >= FLUSH_AT {
                    flush(&mut hist, &mut counts);
                    since_flush = 0;
                }
            }
            flush(&mut hist, &mut counts);
            counts
        };
        return Ok(run(&worker));
    }

    // Direct mode for wide supports: accumulate raw trace dot products and
    // fold modulo p after each inner pass.
    let raw_max = len as u32 * (p as u32 - 1) * (p as u32 - 1);
    let worker = |(start, end): (u64, u64)| -> Vec<Vec<u64>> {
        let mut counts = vec![vec![0u64; p as usize]; coeff_rows.len()];
        let mut js = vec![0u32; len];
        let last_steps: Vec<u32> = steps.iter().map(|s| s[n - 1] as u32).collect();
        let mut raw = vec![0u64; raw_max as usize + 1];
        for flat in start..end {
            for (row, counts_row) in coeff_rows.iter().zip(counts.iter_mut()) {
                outer_bases(flat, &mut js);
                for x in raw.iter_mut() {
                    *x = 0;
                }
                for _ in 0..q1 {
                    let mut t = 0u32;
                    for e in 0..len {
                        t += trace_table[js[e] as usize] as u32 * row[e] as u32;
                        let nj = js[e] + last_steps[e];
                        js[e] = if nj >= q1u32 { nj - q1u32 } else { nj };
                    }
                    raw[t as usize] += 1;
                }
                for (t, &cnt) in raw.iter().enumerate() {
                    if cnt != 0 {
                        counts_row[t % p as usize] += cnt;
                    }
                }
            }
        }
        counts
    };
    Ok(run(&worker))
}

/// One pass of the innermost torus coordinate, accumulating trace-vector
/// histogram keys. Dispatches on the number of varying terms so the term
/// loop unrolls with the indices held in registers.
fn inner_histogram_pass(
    trace: &[u8],
    q1: u32,
    key0: u32,
    js: &[u32],
    steps: &[u32],
    ppow: &[u32],
    hist: &mut [u32],
) {
    macro_rules! dispatch {
        ($($l:literal),*) => {
            match js.len() {
                $($l => {
                    let mut a = [0u32; $l];
                    let mut s = [0u32; $l];
                    let mut w = [0u32; $l];
                    a.copy_from_slice(js);
                    s.copy_from_slice(steps);
                    w.copy_from_slice(ppow);
                    inner_fixed::<$l>(trace, q1, key0, a, s, w, hist);
                    return;
                })*
                _ => {}
            }
        };
    }
    dispatch!(0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12);
    // Wide supports: dynamic term loop.
    let mut js = js.to_vec();
    for _ in 0..q1 {
        let mut key = key0;
        for e in 0..js.len() {
            key += trace[js[e] as usize] as u32 * ppow[e];
            let nj = js[e] + steps[e];
            js[e] = if nj >= q1 { nj - q1 } else { nj };
        }
        hist[key as usize] += 1;
    }
}

fn inner_fixed<const L: usize>(
    trace: &[u8],
    q1: u32,
    key0: u32,
    mut js: [u32; L],
    steps: [u32; L],
    ppow: [u32; L],
    hist: &mut [u32],
) {
    debug_assert_eq!(trace.len(), q1 as usize);
    for _ in 0..q1 {
        let mut key = key0;
        for e in 0..L {
            // SAFETY: js[e] < q1 == trace.len() is maintained by the
            // wrap-around update below (initial values come in reduced).
            let t = unsafe { *trace.get_unchecked(js[e] as usize) };
            key += t as u32 * ppow[e];
            let nj = js[e] + steps[e];
            js[e] = if nj >= q1 { nj - q1 } else { nj };
        }
        // SAFETY: key = key0 + sum of digit * p^pos < p^len == hist.len()
        // because every trace value is < p and the weights are the distinct
        // powers of p assigned to the support slots.
        unsafe {
            *hist.get_unchecked_mut(key as usize) += 1;
        }
    }
}

/// Table-free fallback for fields beyond the table cap: direct field
/// arithmetic over the torus stream.
fn torus_counts_slow(
    exponents: &[Vec<i64>],
    coeff_rows: &[Vec<u8>],
    field: &ExtensionField,
    budget: u64,
) -> Result<Vec<Vec<u64>>> {
    let p = field.p();
    let n = exponents[0].len();
    let mut counts = vec![vec![0u64; p as usize]; coeff_rows.len()];
    let stream = TorusStream::new(field, n, budget)?;
    for point in stream {
        // Monomial traces once per point, reused across rows.
        let mut traces = Vec::with_capacity(exponents.len());
        for expo in exponents {
            let mut m = field.one();
            for (x, &e) in point.iter().zip(expo) {
                if e == 0 {
                    continue;
                }
                let base = if e < 0 { field.inverse(x)? } else { x.clone() };
                m = field.mul(&m, &field.pow(&base, e.unsigned_abs() as u128));
            }
            traces.push(field.trace(&m)?);
        }
        for (row, counts_row) in coeff_rows.iter().zip(counts.iter_mut()) {
            let t: u64 = row
                .iter()
                .zip(&traces)
                .map(|(&c, &tr)| c as u64 * tr)
                .sum();
            counts_row[(t % p) as usize] += 1;
        }
    }
    Ok(counts)
}
