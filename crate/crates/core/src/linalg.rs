//! Small exact integer linear algebra: fraction-free determinants, ranks,
//! Smith normal form with transform tracking, lattice bases of integer
//! hyperplanes, and resultants via the Sylvester matrix.
//!
//! Everything here runs on `BigInt` and is sized for desk-scale inputs
//! (matrices of dimension at most a dozen or so, polytope data in R^1..R^4).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Rank of an integer matrix over the rationals.
pub fn rank(m: &[Vec<BigInt>]) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| !a[i][c].is_zero());
        let Some(pivot) = pivot else { continue };
        a.swap(r, pivot);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (pv, iv) = (a[r][c].clone(), a[i][c].clone());
            for j in c..cols {
                a[i][j] = &a[i][j] * &pv - &a[r][j] * &iv;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Smith normal form of a square nonsingular integer matrix.
///
/// Returns `(s, v)` with `S = U * M * V` for some unimodular `U` (not
/// tracked) and the unimodular `V` that is tracked column-op by column-op.
/// The diagonal `s` is positive and satisfies `s[0] | s[1] | ...`.
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let col_swap = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_addmul =
        |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
            for row in a.iter_mut() {
                let t = &row[src] * q;
                row[dst] += t;
            }
            for row in v.iter_mut() {
                let t = &row[src] * q;
                row[dst] += t;
            }
        };
    let col_neg = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, i: usize| {
        for row in a.iter_mut() {
            let t = -row[i].clone();
            row[i] = t;
        }
        for row in v.iter_mut() {
            let t = -row[i].clone();
            row[i] = t;
        }
    };

    for t in 0..n {
        'reduce: loop {
            // Find the entry of smallest nonzero absolute value in the
            // trailing submatrix and move it to the (t, t) position.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.expect("nonsingular matrix has a pivot");
            a.swap(t, bi);
            if bj != t {
                col_swap(&mut a, &mut v, t, bj);
            }
            if a[t][t].is_negative() {
                col_neg(&mut a, &mut v, t);
            }

            // Eliminate along row t (column operations) and column t (row
            // operations, untracked since U is not needed by callers).
            let mut dirty = false;
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = -(&a[t][j] / &a[t][t]);
                    col_addmul(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let q = (&a[i][t] / &a[t][t]).clone();
                    for j in t..n {
                        let s = &a[t][j] * &q;
                        a[i][j] -= s;
                    }
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'reduce;
            }

            // Divisibility fixup: every trailing entry must be divisible by
            // the pivot for a true Smith form.
            for i in t + 1..n {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        // Add row i to row t and restart the reduction.
                        for col in t..n {
                            let s = a[i][col].clone();
                            a[t][col] += s;
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    SmithForm { diag, v }
}

/// A basis of the lattice `{x in Z^n : a . x = 0}` together with the data
/// needed to express hyperplane points in that basis.
pub struct HyperplaneLattice {
    /// `n x (n-1)`: column vectors spanning the kernel lattice.
    pub basis: Vec<Vec<BigInt>>,
    /// Inverse of the unimodular column transform, applied row-wise.
    u_inv: Vec<Vec<BigInt>>,
}

impl HyperplaneLattice {
    /// Builds the kernel lattice of the covector `a` (not all zero).
    pub fn new(a: &[BigInt]) -> Self {
        let n = a.len();
        assert!(n >= 1 && a.iter().any(|x| !x.is_zero()));
        let mut w = a.to_vec();
        // Column ops on the row vector w, mirrored into u (and inversely
        // into u_inv) so that w = a^T * U at all times.
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut u_inv = u.clone();

        loop {
            let nonzero: Vec<usize> = (0..n).filter(|&j| !w[j].is_zero()).collect();
            if nonzero.len() == 1 {
                let j = nonzero[0];
                if j != 0 {
                    w.swap(0, j);
                    for row in u.iter_mut() {
                        row.swap(0, j);
                    }
                    u_inv.swap(0, j);
                }
                break;
            }
            // Reduce the largest |entry| by the smallest nonzero one.
            let &jmin = nonzero
                .iter()
                .min_by(|&&x, &&y| w[x].abs().cmp(&w[y].abs()))
                .unwrap();
            for &j in &nonzero {
                if j == jmin {
                    continue;
                }
                let q = BigInt::from(&w[j] / &w[jmin]);
                if q.is_zero() {
                    continue;
                }
                w[j] = &w[j] - &q * &w[jmin];
                // col_j -= q * col_jmin  on U;  row_jmin += q * row_j on U^{-1}.
                for row in u.iter_mut() {
                    let t = &row[jmin] * &q;
                    row[j] -= t;
                }
                let add: Vec<BigInt> = u_inv[j].iter().map(|x| x * &q).collect();
                for (dst, s) in u_inv[jmin].iter_mut().zip(add) {
                    *dst += s;
                }
            }
        }

        let basis = (1..n)
            .map(|j| (0..n).map(|i| u[i][j].clone()).collect())
            .collect();
        HyperplaneLattice { basis, u_inv }
    }

    /// Coordinates of `x` in the kernel basis, or `None` when `a . x != 0`.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.u_inv.len();
        let y: Vec<BigInt> = (0..n)
            .map(|i| (0..n).map(|j| &self.u_inv[i][j] * &x[j]).sum())
            .collect();
        if !y[0].is_zero() {
            return None;
        }
        Some(y[1..].to_vec())
    }
}

/// Resultant of two integer polynomials (coefficients low-to-high degree),
/// computed as the Bareiss determinant of the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let df = poly_degree(f);
    let dg = poly_degree(g);
    match (df, dg) {
        (None, _) | (_, None) => return BigInt::zero(),
        (Some(0), Some(dg)) => return f[0].pow(dg as u32),
        (Some(df), Some(0)) => return g[0].pow(df as u32),
        _ => {}
    }
    let (df, dg) = (df.unwrap(), dg.unwrap());
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..dg {
        for (i, c) in f.iter().enumerate().take(df + 1) {
            m[row][row + df - i] = c.clone();
        }
    }
    for row in 0..df {
        for (i, c) in g.iter().enumerate().take(dg + 1) {
            m[dg + row][row + dg - i] = c.clone();
        }
    }
    determinant(&m)
}

fn poly_degree(f: &[BigInt]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&mat(&[[2].as_slice()])), bi(2));
        assert_eq!(determinant(&mat(&[&[-1, 1], &[0, 4]])), bi(-4));
        assert_eq!(determinant(&mat(&[&[1, 1, 1], &[0, 4, 0], &[0, 0, 4]])), bi(16));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), bi(0));
        // Needs a row swap to find the first pivot.
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), bi(-1));
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[4, 5, 6]])), 2);
    }

    #[test]
    fn smith_form_diagonalizes() {
        let m = mat(&[&[-1, 1], &[0, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diag, vec![bi(1), bi(4)]);
        // V must be unimodular.
        assert_eq!(determinant(&s.v).abs(), bi(1));
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let s = smith_normal_form(&m);
        let prod: BigInt = s.diag.iter().product();
        assert_eq!(prod, determinant(&m).abs());
        for w in s.diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn hyperplane_lattice_roundtrip() {
        let a = vec![bi(1), bi(1)];
        let h = HyperplaneLattice::new(&a);
        assert_eq!(h.basis.len(), 1);
        let b = &h.basis[0];
        assert!( (&a[0] * &b[0] + &a[1] * &b[1]).is_zero() );
        // (2, -2) = 2b or -2b depending on orientation; coords must invert.
        let x = vec![bi(2), bi(-2)];
        let c = h.coords(&x).unwrap();
        assert_eq!(c.len(), 1);
        let rebuilt: Vec<BigInt> = (0..2).map(|i| &b[i] * &c[0]).collect();
        assert_eq!(rebuilt, x);
        // Off-plane point has no coordinates.
        assert!(h.coords(&[bi(1), bi(0)]).is_none());
    }

    #[test]
    fn hyperplane_lattice_three_dim() {
        let a = vec![bi(-2), bi(1), bi(1)];
        let h = HyperplaneLattice::new(&a);
        assert_eq!(h.basis.len(), 2);
        for b in &h.basis {
            let dot: BigInt = (0..3).map(|i| &a[i] * &b[i]).sum();
            assert!(dot.is_zero());
        }
        // The two basis vectors + a normal-ish vector must span Z^3: check
        // that a lattice point on the plane gets integer coordinates that
        // rebuild it exactly.
        let x = vec![bi(1), bi(3), bi(-1)];
        let c = h.coords(&x).unwrap();
        let rebuilt: Vec<BigInt> = (0..3)
            .map(|i| &h.basis[0][i] * &c[0] + &h.basis[1][i] * &c[1])
            .collect();
        assert_eq!(rebuilt, x);
    }

    #[test]
    fn resultant_matches_known_values() {
        // Res(x^2 + x + 1, 2x + 1) = 4 * ((-1/2)^2 + (-1/2) + 1) = 3.
        let phi3 = vec![bi(1), bi(1), bi(1)];
        let g = vec![bi(1), bi(2)];
        assert_eq!(resultant(&phi3, &g), bi(3));
        // Res(phi_3, t) = phi_3(0) = 1 up to sign convention: lc(t)^2 * ...
        let t = vec![bi(0), bi(1)];
        assert_eq!(resultant(&phi3, &t).abs(), bi(1));
        // Res with a constant.
        assert_eq!(resultant(&phi3, &[bi(5)]), bi(25));
        // Shared root -> 0.
        let f = vec![bi(-1), bi(1)]; // x - 1
        let g = vec![bi(-1), bi(0), bi(1)]; // x^2 - 1
        assert_eq!(resultant(&f, &g), bi(0));
    }
}
