//! Preconditioned conjugate gradient over a matrix-free operator.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct CgOutcome {
    pub iterations: usize,
    pub rel_residual: f64,
}

/// Solve A x = b for symmetric positive definite A given as a closure
/// `apply(x, y)` writing y = A x. `precond_diag`, when given, is the diagonal
/// of A used as a Jacobi preconditioner. Converges when
/// ‖b − A x‖ ≤ tol · ‖b‖.
pub fn solve<F>(
    apply: F,
    precond_diag: Option<&[f64]>,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, CgOutcome)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let bnorm = crate::util::norm2(b);
    if bnorm == 0.0 {
        return Ok((
            vec![0.0; n],
            CgOutcome {
                iterations: 0,
                rel_residual: 0.0,
            },
        ));
    }
    let prec = |r: &[f64], z: &mut [f64]| match precond_diag {
        Some(d) => {
            for i in 0..r.len() {
                z[i] = r[i] / d[i];
            }
        }
        None => z.copy_from_slice(r),
    };

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    prec(&r, &mut z);
    let mut p = z.clone();
    let mut rz = crate::util::dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut iterations = 0;
    let mut rel = 1.0;
    for it in 0..max_iter {
        apply(&p, &mut ap);
        let pap = crate::util::dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::LinearSolve(format!(
                "operator not positive definite in CG (pᵀAp = {:.3e})",
                pap
            )));
        }
        let alpha = rz / pap;
        crate::util::axpy(alpha, &p, &mut x);
        crate::util::axpy(-alpha, &ap, &mut r);
        iterations = it + 1;
        rel = crate::util::norm2(&r) / bnorm;
        if rel <= tol {
            return Ok((
                x,
                CgOutcome {
                    iterations,
                    rel_residual: rel,
                },
            ));
        }
        prec(&r, &mut z);
        let rz_new = crate::util::dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::LinearSolve(format!(
        "CG stalled at rel residual {:.3e} after {} iterations (tol {:.1e})",
        rel, iterations, tol
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::tridiag::Tridiag;
    use approx::assert_relative_eq;

    #[test]
    fn matches_direct_solve() {
        let n = 120;
        let h = 1.0 / (n as f64 + 1.0);
        let t = Tridiag {
            sub: vec![-1.0 / (h * h); n - 1],
            diag: vec![2.0 / (h * h); n],
            sup: vec![-1.0 / (h * h); n - 1],
        };
        let b: Vec<f64> = (0..n).map(|i| (0.05 * i as f64).sin() + 0.5).collect();
        let direct = t.solve(&b).unwrap();
        let diag = t.diag.clone();
        let (x, out) = solve(
            |v, y| t.matvec(v, y),
            Some(&diag),
            &b,
            1e-12,
            10_000,
        )
        .unwrap();
        assert!(out.rel_residual <= 1e-12);
        for i in 0..n {
            assert_relative_eq!(x[i], direct[i], max_relative = 1e-8, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_indefinite_operator() {
        // diag(1, -1) is symmetric but indefinite
        let apply = |v: &[f64], y: &mut [f64]| {
            y[0] = v[0];
            y[1] = -v[1];
        };
        let err = solve(apply, None, &[1.0, 1.0], 1e-10, 50).unwrap_err();
        let msg = format!("{}", err);
        assert!(msg.contains("positive definite"), "got: {}", msg);
    }
}
