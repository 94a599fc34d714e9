//! A tiny exact-rational phase-1 simplex, just enough to decide feasibility
//! of `A x = b, x >= 0`.  Used for lattice-point membership in Newton
//! polyhedra; systems here have at most a handful of rows.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Decide whether `{x >= 0 : A x = b}` is nonempty, exactly.
///
/// Bland's rule keeps the pivoting cycle-free; everything is exact rational
/// arithmetic, so the answer is a certificate-grade yes/no.
pub fn lp_feasible(rows: &[(Vec<BigRational>, BigRational)]) -> bool {
    let m = rows.len();
    if m == 0 {
        return true;
    }
    let n = rows[0].0.len();
    debug_assert!(rows.iter().all(|(a, _)| a.len() == n));

    // Tableau columns: n structural + m artificial + rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (a, b)) in rows.iter().enumerate() {
        let flip = b.is_negative();
        let mut row: Vec<BigRational> = Vec::with_capacity(width);
        for c in a {
            row.push(if flip { -c.clone() } else { c.clone() });
        }
        for j in 0..m {
            row.push(if j == i {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(if flip { -b.clone() } else { b.clone() });
        t.push(row);
    }

    // Phase-1 objective: minimize the sum of artificials.  Reduced cost row
    // starts as minus the sum of constraint rows over structural columns.
    let mut obj: Vec<BigRational> = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering variable = smallest index with negative reduced cost.
        let enter = match (0..n + m).find(|&j| obj[j].is_negative()) {
            Some(j) => j,
            None => break,
        };
        // Ratio test, ties broken by smallest basis index.
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = match leave {
            Some(i) => i,
            // Unbounded phase-1 cannot happen (objective bounded below by 0),
            // but bail out defensively.
            None => break,
        };

        // Pivot on (leave, enter).
        let pivot = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v /= &pivot;
        }
        for i in 0..m {
            if i != leave && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let delta = &f * &t[leave][j];
                    t[i][j] -= delta;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let delta = &f * &t[leave][j];
                obj[j] -= delta;
            }
        }
        basis[leave] = enter;
    }

    // Feasible iff all artificials can be driven to zero.
    obj[width - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn point_on_segment() {
        // x1 + x2 = 1, x1 - x2 = 0 has the solution (1/2, 1/2).
        let rows = vec![
            (vec![r(1), r(1)], r(1)),
            (vec![r(1), r(-1)], r(0)),
        ];
        assert!(lp_feasible(&rows));
    }

    #[test]
    fn inconsistent_system() {
        // x1 = 1 and x1 = 2 cannot both hold.
        let rows = vec![(vec![r(1)], r(1)), (vec![r(1)], r(2))];
        assert!(!lp_feasible(&rows));
    }

    #[test]
    fn nonnegativity_bites() {
        // x1 - x2 = -1 with x >= 0 is feasible (x2 = 1),
        // but x1 + x2 = -1 is not.
        assert!(lp_feasible(&[(vec![r(1), r(-1)], r(-1))]));
        assert!(!lp_feasible(&[(vec![r(1), r(1)], r(-1))]));
    }
}
