//! Gauss-Legendre quadrature on panels.
//!
//! All integrands in this crate are smooth after the substitutions done at
//! call sites (square-root substitutions absorb the τ^{-1/2} kernel
//! singularities), so composite Gauss-Legendre with graded panels is enough.

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for k in 0..m {
        let mut z = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            if n == 1 {
                p1 = z;
            }
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[k] = -z;
        x[n - 1 - k] = z;
        let wk = 2.0 / ((1.0 - z * z) * dp * dp);
        w[k] = wk;
        w[n - 1 - k] = wk;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// ∫_a^b f, single n-point panel.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let d = 0.5 * (a + b);
    let mut s = 0.0;
    for i in 0..n {
        s += w[i] * f(c * x[i] + d);
    }
    c * s
}

/// ∫_a^b f over the given panel breakpoints (must start at a, end at b).
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], n_per_panel: usize) -> f64 {
    let (x, w) = gauss_legendre(n_per_panel);
    let mut terms = Vec::with_capacity((breaks.len() - 1) * n_per_panel);
    for p in 0..breaks.len() - 1 {
        let (a, b) = (breaks[p], breaks[p + 1]);
        let c = 0.5 * (b - a);
        let d = 0.5 * (a + b);
        for i in 0..n_per_panel {
            terms.push(c * w[i] * f(c * x[i] + d));
        }
    }
    crate::util::ksum(&terms)
}

/// Panel breakpoints from `a` to `b`: `count` panels with geometrically
/// growing widths, first panel width ~ (b-a)(r-1)/(r^count - 1).
pub fn geometric_breaks(a: f64, b: f64, count: usize, ratio: f64) -> Vec<f64> {
    assert!(count >= 1 && ratio > 0.0);
    let mut breaks = Vec::with_capacity(count + 1);
    if (ratio - 1.0).abs() < 1e-12 {
        for i in 0..=count {
            breaks.push(a + (b - a) * i as f64 / count as f64);
        }
        return breaks;
    }
    let total: f64 = (ratio.powi(count as i32) - 1.0) / (ratio - 1.0);
    let w0 = (b - a) / total;
    let mut t = a;
    breaks.push(a);
    let mut w = w0;
    for _ in 0..count - 1 {
        t += w;
        breaks.push(t);
        w *= ratio;
    }
    breaks.push(b);
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cubic_exact_with_two_points() {
        let v = integrate(&|x| x * x * x + 2.0 * x, 0.0, 1.0, 2);
        assert_relative_eq!(v, 0.25 + 1.0, max_relative = 1e-14);
    }

    #[test]
    fn sine_integral() {
        let v = integrate(&|x| x.sin(), 0.0, std::f64::consts::PI, 20);
        assert_relative_eq!(v, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn composite_exponential() {
        let breaks = geometric_breaks(0.0, 30.0, 12, 1.5);
        let v = integrate_panels(&|x: f64| (-x).exp(), &breaks, 16);
        assert_relative_eq!(v, 1.0 - (-30.0f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn geometric_breaks_cover_interval() {
        let b = geometric_breaks(2.0, 7.0, 9, 1.7);
        assert_eq!(b.len(), 10);
        assert_relative_eq!(b[0], 2.0);
        assert_relative_eq!(b[9], 7.0);
        for i in 0..9 {
            assert!(b[i + 1] > b[i]);
        }
        // widths grow by the ratio
        let w1 = b[2] - b[1];
        let w0 = b[1] - b[0];
        assert_relative_eq!(w1 / w0, 1.7, max_relative = 1e-10);
    }

    #[test]
    fn algebraic_decay_with_graded_panels() {
        // ∫_1^∞ x^{-3} dx = 1/2; truncate at 1e6 with graded panels
        let breaks = geometric_breaks(1.0, 1e6, 40, 1.45);
        let v = integrate_panels(&|x: f64| x.powi(-3), &breaks, 16);
        assert_relative_eq!(v, 0.5, max_relative = 1e-10);
    }
}
