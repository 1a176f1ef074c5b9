//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `min c.x  s.t.  A x = b, x >= 0` for the tiny systems that show
//! up in lattice geometry (convex-combination tests, cone membership, the
//! weight function). Bland's rule guarantees termination; exactness makes
//! degeneracy harmless.

use crate::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Optimal { value: Rat, solution: Vec<Rat> },
}

/// Minimizes `c . x` subject to `A x = b`, `x >= 0`.
///
/// Rows of `a` may be linearly dependent; redundant rows are dropped during
/// phase one. The objective must be bounded below on the feasible set
/// (always the case for the nonnegative-cost programs used in this crate).
pub fn minimize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));

    // Tableau: columns 0..n originals, n..n+m artificials, last column RHS.
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rat> = Vec::with_capacity(n + m + 1);
        let flip = b[i].is_negative();
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let phase1_cost = |j: usize| -> Rat {
        if j >= n {
            Rat::one()
        } else {
            Rat::zero()
        }
    };
    run_simplex(&mut t, &mut basis, n + m, &phase1_cost);
    let phase1_value: Rat = basis
        .iter()
        .enumerate()
        .map(|(i, &bj)| {
            if bj >= n {
                t[i][n + m].clone()
            } else {
                Rat::zero()
            }
        })
        .sum();
    if !phase1_value.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; drop redundant rows.
    let mut keep: Vec<bool> = vec![true; t.len()];
    for i in 0..t.len() {
        if basis[i] < n {
            continue;
        }
        match (0..n).find(|&j| !t[i][j].is_zero()) {
            Some(j) => pivot(&mut t, &mut basis, i, j),
            None => keep[i] = false,
        }
    }
    let mut filtered_t = Vec::new();
    let mut filtered_basis = Vec::new();
    for (i, row) in t.into_iter().enumerate() {
        if keep[i] {
            filtered_t.push(row);
            filtered_basis.push(basis[i]);
        }
    }
    let mut t = filtered_t;
    let mut basis = filtered_basis;

    // Phase 2 over the original columns only.
    let phase2_cost = |j: usize| -> Rat {
        if j < n {
            c[j].clone()
        } else {
            // Artificial columns are never allowed to re-enter.
            Rat::zero()
        }
    };
    run_simplex(&mut t, &mut basis, n, &phase2_cost);

    let mut solution = vec![Rat::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            solution[bj] = t[i][n + m].clone();
        }
    }
    let value: Rat = (0..n).map(|j| &c[j] * &solution[j]).sum();
    LpOutcome::Optimal { value, solution }
}

/// Feasibility of `A x = b, x >= 0`.
pub fn feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    !matches!(minimize(a, b, &vec![Rat::zero(); n]), LpOutcome::Infeasible)
}

fn run_simplex<F: Fn(usize) -> Rat>(
    t: &mut Vec<Vec<Rat>>,
    basis: &mut Vec<usize>,
    enterable: usize,
    cost: &F,
) {
    let m = t.len();
    if m == 0 {
        return;
    }
    let width = t[0].len();
    let rhs = width - 1;
    loop {
        // Reduced costs: r_j = c_j - sum_i c_{B_i} T[i][j]; Bland picks the
        // smallest j with r_j < 0.
        let mut entering = None;
        for j in 0..enterable {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost(j);
            for i in 0..m {
                let cb = cost(basis[i]);
                if !cb.is_zero() {
                    r -= cb * &t[i][j];
                }
            }
            if r.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { return };

        // Ratio test with Bland's tie-break on the leaving basic variable.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &t[i][rhs] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else {
            // Unbounded direction; callers only pose bounded programs, so
            // treat this as a logic error.
            panic!("simplex: unbounded program");
        };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], pi: usize, pj: usize) {
    let width = t[pi].len();
    let pv = t[pi][pj].clone();
    for x in t[pi].iter_mut() {
        *x /= &pv;
    }
    for i in 0..t.len() {
        if i == pi || t[i][pj].is_zero() {
            continue;
        }
        let factor = t[i][pj].clone();
        for j in 0..width {
            let d = &factor * &t[pi][j];
            t[i][j] -= d;
        }
    }
    basis[pi] = pj;
}
