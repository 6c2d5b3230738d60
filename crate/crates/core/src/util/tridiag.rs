//! Tridiagonal solves and symmetric tridiagonal eigenpairs.
//!
//! The radial reductions of every operator in this crate are tridiagonal, so
//! these routines carry most of the high-resolution paths: a Thomas solve for
//! well-conditioned systems, Gaussian elimination with partial pivoting for
//! near-resonant Helmholtz shifts (γ close to an eigenvalue), Sturm-sequence
//! bisection for the lowest K eigenvalues, and shifted inverse iteration for
//! the eigenvectors.

use crate::{Error, Result};

/// Tridiagonal matrix with `sub[i] = A[i+1][i]`, `diag[i] = A[i][i]`,
/// `sup[i] = A[i][i+1]`.
#[derive(Clone, Debug)]
pub struct Tridiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiag {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.sup[i] * x[i + 1];
            }
            y[i] = v;
        }
    }

    /// Shifted copy A − s·I.
    pub fn shifted(&self, s: f64) -> Tridiag {
        let mut t = self.clone();
        for d in t.diag.iter_mut() {
            *d -= s;
        }
        t
    }

    /// Thomas algorithm. No pivoting: intended for diagonally dominant or
    /// definite systems.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom == 0.0 {
            return Err(Error::LinearSolve("zero pivot in Thomas solve".into()));
        }
        if n > 1 {
            c[0] = self.sup[0] / denom;
        }
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.sub[i - 1] * c[i - 1];
            if denom == 0.0 {
                return Err(Error::LinearSolve("zero pivot in Thomas solve".into()));
            }
            if i + 1 < n {
                c[i] = self.sup[i] / denom;
            }
            d[i] = (rhs[i] - self.sub[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    /// Gaussian elimination with partial pivoting; pivoting introduces one
    /// extra superdiagonal of fill. Stable for the indefinite shifts that show
    /// up when γ sits between eigenvalues; cost stays O(n).
    pub fn solve_pivoting(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if n == 1 {
            if self.diag[0] == 0.0 {
                return Err(Error::LinearSolve("singular 1x1 system".into()));
            }
            return Ok(vec![rhs[0] / self.diag[0]]);
        }
        let mut a = self.sub.clone(); // a[k]: row k+1, column k
        let mut b = self.diag.clone(); // b[k]: row k,   column k
        let mut c = self.sup.clone(); // c[k]: row k,   column k+1
        let mut f = vec![0.0; n - 2]; // f[k]: row k,   column k+2 (fill)
        let mut x: Vec<f64> = rhs.to_vec();

        for k in 0..n - 1 {
            // invariant: row k = (b[k], c[k], 0) and row k+1 = (a[k], b[k+1], c[k+1])
            if a[k].abs() > b[k].abs() {
                let (rb, rc) = (b[k], c[k]);
                b[k] = a[k];
                c[k] = b[k + 1];
                let row_below_far = if k + 1 < n - 1 { c[k + 1] } else { 0.0 };
                if k < f.len() {
                    f[k] = row_below_far;
                }
                a[k] = rb;
                b[k + 1] = rc;
                if k + 1 < n - 1 {
                    c[k + 1] = 0.0;
                }
                x.swap(k, k + 1);
            }
            if b[k] == 0.0 {
                return Err(Error::LinearSolve("singular tridiagonal matrix".into()));
            }
            let m = a[k] / b[k];
            if m != 0.0 {
                b[k + 1] -= m * c[k];
                if k + 1 < n - 1 {
                    c[k + 1] -= m * f[k];
                }
                x[k + 1] -= m * x[k];
            }
        }
        if b[n - 1] == 0.0 {
            return Err(Error::LinearSolve("singular tridiagonal matrix".into()));
        }
        x[n - 1] /= b[n - 1];
        let i = n - 2;
        x[i] = (x[i] - c[i] * x[i + 1]) / b[i];
        for i in (0..n - 2).rev() {
            x[i] = (x[i] - c[i] * x[i + 1] - f[i] * x[i + 2]) / b[i];
        }
        Ok(x)
    }
}

/// Count of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below `x`, by the Sturm/LDLᵀ inertia recurrence.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e2 = off[i - 1] * off[i - 1];
        let denom = if q == 0.0 { 1e-300 } else { q };
        q = diag[i] - x - e2 / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues of the symmetric tridiagonal (diag, off), each
/// bisected to `tol_rel` relative width inside Gershgorin bounds.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize, tol_rel: f64) -> Vec<f64> {
    let n = diag.len();
    assert!(k <= n, "asked for more eigenvalues than matrix order");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < n - 1 {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (lo, hi);
        // bracket width measured against the eigenvalue itself, so small
        // eigenvalues of stiff operators still come out sharp
        while b - a > tol_rel * a.abs().max(b.abs()).max(1e-300) {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break; // interval at floating-point resolution
            }
            if sturm_count(diag, off, m) > j {
                b = m;
            } else {
                a = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Eigenvector for an eigenvalue by shifted inverse iteration with the
/// pivoting solver. `prev` vectors are deflated out, which keeps members of
/// near-degenerate clusters orthogonal. `scale` sets the shift perturbation.
pub fn inverse_iteration(
    t: &Tridiag,
    lambda: f64,
    prev: &[Vec<f64>],
    scale: f64,
) -> Result<Vec<f64>> {
    let n = t.n();
    let shift = lambda + 1e-11 * scale.max(1.0);
    let shifted = t.shifted(shift);
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = (i as f64 + 1.0) / (n as f64 + 1.0);
            (7.3 * x).sin() + 0.37 * (23.0 * x).cos()
        })
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut w = shifted.solve_pivoting(&v)?;
        for p in prev {
            let c = crate::util::dot(&w, p);
            crate::util::axpy(-c, p, &mut w);
        }
        let nrm = crate::util::norm2(&w);
        if nrm == 0.0 {
            return Err(Error::EigenFailure("inverse iteration collapsed".into()));
        }
        for x in w.iter_mut() {
            *x /= nrm;
        }
        v = w;
    }
    Ok(v)
}

fn normalize(v: &mut [f64]) {
    let n = crate::util::norm2(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn laplace_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
        // -u'' on (0,1), Dirichlet, h = 1/(n+1)
        let h = 1.0 / (n as f64 + 1.0);
        (vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1])
    }

    #[test]
    fn thomas_matches_solution() {
        let n = 50;
        let (diag, off) = laplace_1d(n);
        let t = Tridiag {
            sub: off.clone(),
            diag,
            sup: off,
        };
        // manufactured solution u(x) = x(1-x)/2 gives -u'' = 1
        let rhs = vec![1.0; n];
        let u = t.solve(&rhs).unwrap();
        let h = 1.0 / (n as f64 + 1.0);
        for i in 0..n {
            let x = (i as f64 + 1.0) * h;
            assert_relative_eq!(u[i], 0.5 * x * (1.0 - x), max_relative = 1e-10);
        }
    }

    #[test]
    fn pivoting_agrees_with_thomas_on_spd() {
        let n = 40;
        let (diag, off) = laplace_1d(n);
        let t = Tridiag {
            sub: off.clone(),
            diag,
            sup: off,
        };
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.17).sin()).collect();
        let a = t.solve(&rhs).unwrap();
        let b = t.solve_pivoting(&rhs).unwrap();
        for i in 0..n {
            assert_relative_eq!(a[i], b[i], max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn pivoting_handles_indefinite_shift() {
        let n = 60;
        let (diag, off) = laplace_1d(n);
        let t = Tridiag {
            sub: off.clone(),
            diag,
            sup: off.clone(),
        };
        // shift between the first two eigenvalues: indefinite but regular
        let lam1 = std::f64::consts::PI.powi(2);
        let lam2 = 4.0 * lam1;
        let shifted = t.shifted(0.5 * (lam1 + lam2));
        let rhs: Vec<f64> = (0..n).map(|i| 1.0 + 0.3 * (i as f64 * 0.7).cos()).collect();
        let x = shifted.solve_pivoting(&rhs).unwrap();
        let mut back = vec![0.0; n];
        shifted.matvec(&x, &mut back);
        for i in 0..n {
            assert_relative_eq!(back[i], rhs[i], max_relative = 1e-8, epsilon = 1e-8);
        }
    }

    #[test]
    fn pivoting_handles_tiny_leading_pivot() {
        // forces a swap at the first step
        let t = Tridiag {
            sub: vec![1.0, 1.0, 1.0],
            diag: vec![1e-18, 2.0, 2.0, 2.0],
            sup: vec![1.0, 1.0, 1.0],
        };
        let rhs = vec![1.0, 2.0, 3.0, 4.0];
        let x = t.solve_pivoting(&rhs).unwrap();
        let mut back = vec![0.0; 4];
        t.matvec(&x, &mut back);
        for i in 0..4 {
            assert_relative_eq!(back[i], rhs[i], max_relative = 1e-10, epsilon = 1e-10);
        }
    }

    #[test]
    fn sturm_eigenvalues_match_exact_fd() {
        let n = 200;
        let h = 1.0 / (n as f64 + 1.0);
        let (diag, off) = laplace_1d(n);
        let evs = lowest_eigenvalues(&diag, &off, 5, 1e-13);
        for (k, ev) in evs.iter().enumerate() {
            let kk = (k + 1) as f64;
            // exact FD eigenvalue (4/h²) sin²(kπh/2)
            let exact = 4.0 / (h * h) * ((kk * std::f64::consts::PI * h / 2.0).sin()).powi(2);
            assert_relative_eq!(*ev, exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn inverse_iteration_recovers_sine_mode() {
        let n = 150;
        let (diag, off) = laplace_1d(n);
        let t = Tridiag {
            sub: off.clone(),
            diag: diag.clone(),
            sup: off.clone(),
        };
        let evs = lowest_eigenvalues(&diag, &off, 2, 1e-13);
        let v = inverse_iteration(&t, evs[0], &[], evs[1]).unwrap();
        let h = 1.0 / (n as f64 + 1.0);
        let mut sine: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::PI * (i as f64 + 1.0) * h).sin())
            .collect();
        let nrm = crate::util::norm2(&sine);
        for s in sine.iter_mut() {
            *s /= nrm;
        }
        let c = crate::util::dot(&v, &sine).abs();
        assert!(c > 1.0 - 1e-8, "cosine with exact mode = {}", c);
    }
}
