// Quick validation: Figure 1 Newton polygon at p = 3 and kernel timing.
use lnp_core::lfunction::{l_polynomial, newton_polygon, GroundField, LaurentPolynomial, SumSettings};
use std::time::Instant;

fn main() {
    let f = LaurentPolynomial::from_terms(
        3, 2,
        vec![(vec![1, 3], 1), (vec![3, 1], 1), (vec![1, 1], 1)],
    ).unwrap();
    let settings = SumSettings::new(GroundField::new(3, 1).unwrap());
    let t0 = Instant::now();
    let l = l_polynomial(&f, &settings).unwrap();
    println!("l-poly time: {:?}", t0.elapsed());
    println!("all integral: {}", l.all_integral());
    println!("overrun zero: {:?}", l.overrun_zero);
    for (i, c) in l.coefficients.iter().enumerate() {
        let ord = c.ord_q(1).unwrap();
        println!("c_{i}: zero={} ord={:?}", c.is_zero(), ord);
    }
    let np = newton_polygon(&l).unwrap();
    println!("NP vertices: {:?}", np.vertices().iter().map(|(x, y)| (x.clone(), y.to_string())).collect::<Vec<_>>());
}
