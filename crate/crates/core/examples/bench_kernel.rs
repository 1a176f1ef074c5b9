// Timing probe for the batched sum kernel at gnp-sample scale.
use lnp_core::lfunction::{power_sums_batch, GroundField, LaurentPolynomial, SumSettings};
use std::time::Instant;

fn main() {
    // Ten polynomials on the Figure 1 support over F_5.
    let support: Vec<Vec<i64>> = vec![
        vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2], vec![1, 3], vec![3, 1],
    ];
    let mut fs = Vec::new();
    for t in 0..10u64 {
        let terms: Vec<(Vec<i64>, i64)> = support
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), 1 + ((t + i as u64) % 4) as i64))
            .collect();
        fs.push(LaurentPolynomial::from_terms(5, 2, terms).unwrap());
    }
    let settings = SumSettings::new(GroundField::new(5, 1).unwrap()).with_budget(1 << 40);
    let k = 6u32; // (5^6 - 1)^2 = 2.44e8 points
    let t0 = Instant::now();
    let sums = power_sums_batch(&fs, &settings, k).unwrap();
    let dt = t0.elapsed();
    let total: f64 = (1..=k).map(|kk| (5f64.powi(kk as i32) - 1.0).powi(2)).sum();
    println!("k <= {k}: {dt:?} for {total:.3e} points = {:.2} ns/pt",
             dt.as_secs_f64() / total * 1e9);
    println!("sample S_1 of f0: {:?}", sums[0].values[0].coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
}
