//! Linear least squares for rate and exponent estimation.

/// Result of fitting y ≈ slope·x + intercept.
#[derive(Clone, Copy, Debug)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope under iid residuals.
    pub slope_stderr: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

/// Ordinary least squares line through (x, y). Needs at least 3 points for a
/// finite standard error.
pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len();
    assert!(n == y.len() && n >= 2, "fit_line needs paired samples");
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = (syy - slope * sxy).max(0.0);
    let slope_stderr = if n > 2 {
        (ss_res / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LineFit {
        slope,
        intercept,
        slope_stderr,
        r2,
    }
}

/// Power-law exponent p from samples of f > 0 at abscissae t > 0, by a
/// log-log line fit: f ≈ C t^p.
pub fn fit_power_law(t: &[f64], f: &[f64]) -> LineFit {
    let lx: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = f.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}
