//! Regular part of the Helmholtz Green function, Robin function, and the
//! critical parameter γ*.
//!
//! For γ ∈ (0, λ₁) the Dirichlet Green function of −Δ − γ splits as
//! G_γ = Γ − H_γ with Γ(x) = α₃/|x| and a regular part H_γ. Writing
//! H_γ = θ_γ − h_γ with the radial profile θ_γ(x) = α₃(1 − cos(√γ|x|))/|x|
//! moves the singular behavior into closed form: the remainder h_γ solves the
//! homogeneous Helmholtz problem Δh + γh = 0 with smooth boundary data
//! −α₃ cos(√γ|x−y|)/|x−y|, so second-order grids see nothing singular.
//!
//! The Robin function is the diagonal R_γ(y) = H_γ(y,y) = −h_γ(y,y) (θ_γ
//! vanishes at the origin). It decreases strictly in γ, diverges to −∞ at λ₁,
//! and its unique zero defines γ*(y).
//!
//! Three solver paths feed the same interface: a tridiagonal solve for the
//! center of a radial ball, a Legendre-mode expansion for arbitrary sources in
//! a ball (each mode is a well-conditioned tridiagonal solve, which keeps
//! γ → λ₁ reachable), and conjugate gradients on the 3-D grid otherwise.

use crate::domain::{boundary_distance, Backend, DiscreteDomain, DomainKind, RadialMesh};
use crate::spectral::Spectrum;
use crate::util::tridiag::Tridiag;
use crate::util::{cg, quad};
use crate::{Error, Result, ALPHA3};
use rayon::prelude::*;

/// θ_γ(r) = α₃(1 − cos(√γ r))/r, the singular-part profile. Smooth at r = 0
/// with θ_γ(0) = 0.
pub fn theta_gamma(gamma: f64, r: f64) -> f64 {
    let z = gamma.sqrt() * r;
    if z < 1e-4 {
        // (1 − cos z)/r = γr/2 · (1 − z²/12 + z⁴/360 − …)
        ALPHA3 * gamma * r / 2.0 * (1.0 - z * z / 12.0 + z.powi(4) / 360.0)
    } else {
        ALPHA3 * (1.0 - z.cos()) / r
    }
}

/// Newtonian kernel Γ(r) = α₃/r.
pub fn newtonian(r: f64) -> f64 {
    ALPHA3 / r
}

/// Dirichlet data of the smooth component: h = −α₃ cos(√γ d)/d at boundary
/// distance d from the source.
fn h_boundary_data(gamma: f64, d: f64) -> f64 {
    -ALPHA3 * (gamma.sqrt() * d).cos() / d
}

/// Relative resonance guard for the direct (tridiagonal) solver paths.
const MARGIN_DIRECT: f64 = 1e-6;
/// Guard for the iterative 3-D path, where conditioning of (A − γI) is the
/// binding constraint.
const MARGIN_GRID: f64 = 0.02;

#[derive(Clone, Debug)]
enum HRepr {
    /// h(r) about a source at the center of a radial mesh.
    RadialCentered { f: Vec<f64> },
    /// h(x) = Σ_l f_l(|x|) P_l(cosθ) about the axis through an off-center
    /// source at radius s in a ball.
    BallLegendre {
        modes: Vec<Vec<f64>>,
        axis: [f64; 3],
    },
    /// h on the unknowns of a 3-D grid.
    Grid { f: Vec<f64> },
}

/// Solved regular part H_γ(·, y) for one source point.
#[derive(Clone, Debug)]
pub struct GreenData {
    pub gamma: f64,
    pub source: [f64; 3],
    /// R_γ(y) = H_γ(y,y), read at the source by quadratic interpolation.
    pub robin: f64,
    /// Conditioning notes (γ close to some computed eigenvalue).
    pub warnings: Vec<String>,
    repr: HRepr,
}

impl GreenData {
    /// Smooth component h_γ(x, y).
    pub fn h_at(&self, dom: &DiscreteDomain, x: [f64; 3]) -> Result<f64> {
        match &self.repr {
            HRepr::RadialCentered { f } => {
                let m = dom.radial()?;
                let r = norm3(x);
                if r > m.radius {
                    return Err(Error::OutsideDomain(x));
                }
                Ok(m.interpolate(f, r))
            }
            HRepr::BallLegendre { modes, axis } => {
                let m = dom.radial()?;
                let r = norm3(x);
                if r > m.radius {
                    return Err(Error::OutsideDomain(x));
                }
                if r < 1e-14 {
                    // only the l = 0 mode is nonzero at the center
                    return Ok(m.interpolate(&modes[0], 0.0));
                }
                let c = (x[0] * axis[0] + x[1] * axis[1] + x[2] * axis[2]) / r;
                let c = c.clamp(-1.0, 1.0);
                // Legendre recurrence alongside the mode sum
                let (mut p_prev, mut p) = (1.0, c);
                let mut total = m.interpolate(&modes[0], r);
                for (l, f) in modes.iter().enumerate().skip(1) {
                    if l >= 2 {
                        let lf = l as f64;
                        let p_next = ((2.0 * lf - 1.0) * c * p - (lf - 1.0) * p_prev) / lf;
                        p_prev = p;
                        p = p_next;
                    }
                    total += m.interpolate(f, r) * p;
                }
                Ok(total)
            }
            HRepr::Grid { f } => dom.grid()?.interpolate(f, x),
        }
    }

    /// Regular part H_γ(x, y) = θ_γ(x − y) − h_γ(x, y).
    pub fn regular_part_at(&self, dom: &DiscreteDomain, x: [f64; 3]) -> Result<f64> {
        let d = dist3(x, self.source);
        Ok(theta_gamma(self.gamma, d) - self.h_at(dom, x)?)
    }

    /// Green function G_γ(x, y) = Γ(x − y) − H_γ(x, y); diverges at x = y.
    pub fn green_at(&self, dom: &DiscreteDomain, x: [f64; 3]) -> Result<f64> {
        let d = dist3(x, self.source);
        if d < 1e-14 {
            return Err(Error::Numerical("Green function evaluated on the diagonal".into()));
        }
        Ok(newtonian(d) - self.regular_part_at(dom, x)?)
    }
}

fn norm3(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn dist3(x: [f64; 3], y: [f64; 3]) -> f64 {
    norm3([x[0] - y[0], x[1] - y[1], x[2] - y[2]])
}

fn resonance_guard(sp: &Spectrum, gamma: f64, margin: f64) -> Result<Vec<String>> {
    let lambda1 = sp.lambda1();
    if gamma < 0.0 {
        return Err(Error::GammaRange { gamma, lambda1 });
    }
    if gamma >= lambda1 * (1.0 - margin) {
        return Err(Error::Resonant {
            gamma,
            lambda: lambda1,
            margin,
        });
    }
    let mut warnings = Vec::new();
    for (k, &lam) in sp.lambdas.iter().enumerate().skip(1) {
        if (gamma - lam).abs() < 1e-3 * lambda1 {
            warnings.push(format!(
                "γ = {:.6} within 1e-3·λ₁ of λ_{} = {:.6}; conditioning degrades",
                gamma,
                k + 1,
                lam
            ));
        }
    }
    Ok(warnings)
}

/// Solve for the regular part of G_γ(·, y).
///
/// Requires γ ∈ [0, λ₁ − margin) and dist(y, ∂Ω) ≥ 2h. γ = 0 is admitted and
/// gives the harmonic-extension limit H₀, whose diagonal is the γ → 0 Robin
/// extrapolation.
pub fn regular_part(
    dom: &DiscreteDomain,
    sp: &Spectrum,
    gamma: f64,
    y: [f64; 3],
) -> Result<GreenData> {
    let (margin, h_min) = match &dom.backend {
        Backend::Radial(m) => (MARGIN_DIRECT, m.h),
        Backend::Grid(g) => (MARGIN_GRID, g.h[0].max(g.h[1]).max(g.h[2])),
    };
    let warnings = resonance_guard(sp, gamma, margin)?;
    let d_bnd = boundary_distance(dom, y)?;
    if d_bnd < 2.0 * h_min {
        return Err(Error::Config(format!(
            "source within 2h of the boundary: dist = {:.3e}, h = {:.3e}",
            d_bnd, h_min
        )));
    }
    let (repr, robin) = match &dom.backend {
        Backend::Radial(m) => {
            let s = norm3(y);
            if s < 1e-12 {
                let f = solve_radial_centered(m, gamma)?;
                let robin = -m.interpolate(&f, 0.0);
                (HRepr::RadialCentered { f }, robin)
            } else {
                let axis = [y[0] / s, y[1] / s, y[2] / s];
                let modes = solve_ball_legendre(m, gamma, s)?;
                // all P_l(1) = 1 on the axis through the source
                let robin = -modes.iter().map(|f| m.interpolate(f, s)).sum::<f64>();
                (HRepr::BallLegendre { modes, axis }, robin)
            }
        }
        Backend::Grid(g) => {
            let f = solve_grid(g, sp, gamma, y)?;
            let robin = -g.interpolate(&f, y)?;
            (HRepr::Grid { f }, robin)
        }
    };
    Ok(GreenData {
        gamma,
        source: y,
        robin,
        warnings,
        repr,
    })
}

/// h for a source at the center of a radial ball: (K + γ-shift) tridiagonal
/// solve with the Dirichlet lift at r = R.
fn solve_radial_centered(m: &RadialMesh, gamma: f64) -> Result<Vec<f64>> {
    let n = m.n_unknowns();
    // (K − γ·diag(vol)) f = lift
    let mut t = m.stiff.clone();
    for i in 0..n {
        t.diag[i] -= gamma * m.vol[i];
    }
    let mut rhs = vec![0.0; n];
    let datum = h_boundary_data(gamma, m.radius);
    rhs[n - 1] = m.boundary_flux * datum;
    let mut f = t.solve_pivoting(&rhs)?;
    f.push(datum);
    Ok(f)
}

/// h for an off-center source at radius s in a ball, as Legendre modes about
/// the source axis. Mode l solves the radial problem with the centrifugal
/// term l(l+1)/r², zero value at the center (l ≥ 1), and the projected
/// boundary data as Dirichlet lift.
fn solve_ball_legendre(m: &RadialMesh, gamma: f64, s: f64) -> Result<Vec<Vec<f64>>> {
    let r_out = m.radius;
    let ratio = (s / r_out).min(0.995);
    // coefficient decay |g_l| ~ (s/R)^l sets the truncation
    let l_max = ((-28.0) / ratio.ln()).ceil().max(12.0).min(1400.0) as usize;
    let n_gl = (2 * l_max).max(64);
    let (nodes, weights) = quad::gauss_legendre(n_gl);

    // boundary datum as a function of c = cos(angle to the source axis)
    let datum = |c: f64| {
        let d2 = r_out * r_out + s * s - 2.0 * r_out * s * c;
        h_boundary_data(gamma, d2.max(1e-300).sqrt())
    };
    // g_l = (2l+1)/2 ∫ g(c) P_l(c) dc, all l in one sweep of the recurrence
    let mut g_l = vec![0.0; l_max + 1];
    for (j, &c) in nodes.iter().enumerate() {
        let w = weights[j] * datum(c);
        let (mut p_prev, mut p) = (1.0, c);
        g_l[0] += w;
        if l_max >= 1 {
            g_l[1] += w * c;
        }
        for l in 2..=l_max {
            let lf = l as f64;
            let p_next = ((2.0 * lf - 1.0) * c * p - (lf - 1.0) * p_prev) / lf;
            p_prev = p;
            p = p_next;
            g_l[l] += w * p;
        }
    }
    for (l, g) in g_l.iter_mut().enumerate() {
        *g *= (2.0 * l as f64 + 1.0) / 2.0;
    }

    let n = m.n_unknowns();
    let modes: Result<Vec<Vec<f64>>> = (0..=l_max)
        .into_par_iter()
        .map(|l| -> Result<Vec<f64>> {
            if l == 0 {
                let mut t = m.stiff.clone();
                for i in 0..n {
                    t.diag[i] -= gamma * m.vol[i];
                }
                let mut rhs = vec![0.0; n];
                rhs[n - 1] = m.boundary_flux * g_l[0];
                let mut f = t.solve_pivoting(&rhs)?;
                f.push(g_l[0]);
                return Ok(f);
            }
            // drop the center unknown: f_l(0) = 0 for l ≥ 1
            let nn = n - 1;
            let cent = l as f64 * (l as f64 + 1.0) * 4.0 * crate::domain::PI * m.h;
            let mut diag = Vec::with_capacity(nn);
            let mut sub = Vec::with_capacity(nn - 1);
            for i in 1..n {
                diag.push(m.stiff.diag[i] + cent - gamma * m.vol[i]);
                if i + 1 < n {
                    sub.push(m.stiff.sub[i]);
                }
            }
            let t = Tridiag {
                sub: sub.clone(),
                diag,
                sup: sub,
            };
            let mut rhs = vec![0.0; nn];
            rhs[nn - 1] = m.boundary_flux * g_l[l];
            let sol = t.solve_pivoting(&rhs)?;
            let mut full = Vec::with_capacity(n + 1);
            full.push(0.0);
            full.extend_from_slice(&sol);
            full.push(g_l[l]);
            Ok(full)
        })
        .collect();
    modes
}

/// h on a 3-D grid: Jacobi-preconditioned CG on the positive definite shifted
/// operator A − γI with the boundary data lifted into the right-hand side.
fn solve_grid(
    g: &crate::domain::Grid3,
    sp: &Spectrum,
    gamma: f64,
    y: [f64; 3],
) -> Result<Vec<f64>> {
    let rhs = g.boundary_lift(|bp| h_boundary_data(gamma, dist3(bp, y)));
    let diag: Vec<f64> = g.diagonal().into_iter().map(|d| d - gamma).collect();
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::Resonant {
            gamma,
            lambda: sp.lambda1(),
            margin: MARGIN_GRID,
        });
    }
    let apply = |x: &[f64], out: &mut [f64]| {
        g.apply(x, out);
        for i in 0..out.len() {
            out[i] -= gamma * x[i];
        }
    };
    let (f, _outcome) = cg::solve(apply, Some(&diag), &rhs, 1e-10, 60_000)?;
    Ok(f)
}

/// Robin function R_γ(q) = H_γ(q, q).
pub fn robin(dom: &DiscreteDomain, sp: &Spectrum, gamma: f64, q: [f64; 3]) -> Result<f64> {
    Ok(regular_part(dom, sp, gamma, q)?.robin)
}

/// Near-λ₁ asymptote R_γ(q) ≈ −4πα₃ φ₁(q)²/(λ₁ − γ), the blow-up form of the
/// regular part as γ → λ₁.
pub fn robin_asymptotic(
    dom: &DiscreteDomain,
    sp: &Spectrum,
    gamma: f64,
    q: [f64; 3],
) -> Result<f64> {
    let phi1 = sp.eval_phi(dom, 0, q)?;
    Ok(-4.0 * crate::domain::PI * ALPHA3 * phi1 * phi1 / (sp.lambda1() - gamma))
}

#[derive(Clone, Debug)]
pub struct GammaStar {
    pub value: f64,
    pub bracket: (f64, f64),
    /// R at the bracket ends when the search started.
    pub endpoints: (f64, f64),
}

fn backend_margin(dom: &DiscreteDomain) -> f64 {
    match &dom.backend {
        Backend::Radial(_) => MARGIN_DIRECT,
        Backend::Grid(_) => MARGIN_GRID,
    }
}

/// γ search bracket, strictly inside the resonance guard.
fn backend_bracket(dom: &DiscreteDomain, sp: &Spectrum) -> (f64, f64) {
    let m = 1.5 * backend_margin(dom);
    let lambda1 = sp.lambda1();
    (m * lambda1, (1.0 - m) * lambda1)
}

/// The unique γ ∈ (0, λ₁) with R_γ(q) = 0, by bisection on the strictly
/// decreasing Robin function. The bracket shrinks to tol·λ₁.
pub fn gamma_star(
    dom: &DiscreteDomain,
    sp: &Spectrum,
    q: [f64; 3],
    tol: f64,
) -> Result<GammaStar> {
    let lambda1 = sp.lambda1();
    let (mut lo, mut hi) = backend_bracket(dom, sp);
    let r_lo = robin(dom, sp, lo, q)?;
    let r_hi = robin(dom, sp, hi, q)?;
    if !(r_lo > 0.0 && r_hi < 0.0) {
        return Err(Error::Bracket(format!(
            "R_γ({:?}) does not change sign on [{:.6}, {:.6}]: R(lo) = {:.6}, R(hi) = {:.6}",
            q, lo, hi, r_lo, r_hi
        )));
    }
    while hi - lo > tol * lambda1 {
        let mid = 0.5 * (lo + hi);
        let r_mid = robin(dom, sp, mid, q)?;
        if r_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(GammaStar {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        endpoints: (r_lo, r_hi),
    })
}

/// Sampled Robin-vs-γ curve with the located root.
#[derive(Clone, Debug)]
pub struct RobinCurve {
    pub q: [f64; 3],
    pub gammas: Vec<f64>,
    pub values: Vec<f64>,
    pub gamma_star: f64,
    pub bracket_width: f64,
}

pub fn robin_curve(
    dom: &DiscreteDomain,
    sp: &Spectrum,
    q: [f64; 3],
    n_samples: usize,
    tol: f64,
) -> Result<RobinCurve> {
    let (lo, hi) = backend_bracket(dom, sp);
    let gammas: Vec<f64> = (0..n_samples)
        .map(|i| lo + (hi - lo) * i as f64 / (n_samples as f64 - 1.0))
        .collect();
    let values: Result<Vec<f64>> = gammas
        .par_iter()
        .map(|&g| robin(dom, sp, g, q))
        .collect();
    let values = values?;
    let gs = gamma_star(dom, sp, q, tol)?;
    Ok(RobinCurve {
        q,
        gammas,
        values,
        gamma_star: gs.value,
        bracket_width: gs.bracket.1 - gs.bracket.0,
    })
}

/// The standing smallness condition 3γ*(q) < λ₁ and its margin.
pub fn admissible(dom: &DiscreteDomain, sp: &Spectrum, q: [f64; 3]) -> Result<(bool, f64)> {
    let gs = gamma_star(dom, sp, q, 1e-7)?;
    let margin = sp.lambda1() - 3.0 * gs.value;
    Ok((margin > 0.0, margin))
}

#[derive(Clone, Debug)]
pub struct MapPoint {
    pub q: [f64; 3],
    pub gamma_star: Option<f64>,
    pub admissible: bool,
    pub margin: f64,
    pub error: Option<String>,
}

/// Batch γ* over a set of query points; per-point failures are recorded in
/// the output rather than aborting the sweep.
pub fn gamma_star_map(
    dom: &DiscreteDomain,
    sp: &Spectrum,
    qs: &[[f64; 3]],
    tol: f64,
) -> Vec<MapPoint> {
    qs.par_iter()
        .map(|&q| match gamma_star(dom, sp, q, tol) {
            Ok(gs) => {
                let margin = sp.lambda1() - 3.0 * gs.value;
                MapPoint {
                    q,
                    gamma_star: Some(gs.value),
                    admissible: margin > 0.0,
                    margin,
                    error: None,
                }
            }
            Err(e) => MapPoint {
                q,
                gamma_star: None,
                admissible: false,
                margin: f64::NAN,
                error: Some(format!("{}", e)),
            },
        })
        .collect()
}

/// For a ball: the radius d* of the admissible region, 3γ*(q) = λ₁ at
/// |q| = d*. Bisection in |q| along e₁.
pub fn admissible_radius(dom: &DiscreteDomain, sp: &Spectrum, tol: f64) -> Result<f64> {
    let radius = dom
        .spec
        .radius()
        .ok_or_else(|| Error::InvalidDomain("admissible radius needs a ball".into()))?;
    let h = match &dom.backend {
        Backend::Radial(m) => m.h,
        Backend::Grid(g) => g.h[0],
    };
    let lambda1 = sp.lambda1();
    let margin_at = |s: f64| -> Result<f64> {
        let gs = gamma_star(dom, sp, [s, 0.0, 0.0], 1e-7)?;
        Ok(lambda1 - 3.0 * gs.value)
    };
    let (mut lo, mut hi) = (0.0, radius - 3.0 * h);
    if margin_at(lo)? <= 0.0 {
        return Err(Error::Bracket("center already inadmissible".into()));
    }
    if margin_at(hi)? >= 0.0 {
        return Err(Error::Bracket(
            "admissibility holds up to the resolvable rim; d* beyond reach".into(),
        ));
    }
    while hi - lo > tol * radius {
        let mid = 0.5 * (lo + hi);
        if margin_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// ∇γ*(q) = −∇_x R_γ(q) / ∂_γ R_γ(q) at γ = γ*(q), by centered differences.
pub fn grad_gamma_star(dom: &DiscreteDomain, sp: &Spectrum, q: [f64; 3]) -> Result<[f64; 3]> {
    let gs = gamma_star(dom, sp, q, 1e-8)?;
    let g = gs.value;
    let dg = 1e-4 * sp.lambda1();
    let r_plus = robin(dom, sp, g + dg, q)?;
    let r_minus = robin(dom, sp, g - dg, q)?;
    let dr_dgamma = (r_plus - r_minus) / (2.0 * dg);
    if dr_dgamma.abs() < 1e-10 {
        return Err(Error::Numerical(
            "∂_γ R vanished; the Robin function should be strictly decreasing".into(),
        ));
    }
    let dx = match &dom.backend {
        Backend::Radial(m) => (2.0 * m.h).max(1e-3),
        Backend::Grid(g3) => 2.0 * g3.h[0].max(g3.h[1]).max(g3.h[2]),
    };
    let mut grad = [0.0; 3];
    for a in 0..3 {
        let mut qp = q;
        let mut qm = q;
        qp[a] += dx;
        qm[a] -= dx;
        let rp = robin(dom, sp, g, qp)?;
        let rm = robin(dom, sp, g, qm)?;
        grad[a] = -(rp - rm) / (2.0 * dx) / dr_dgamma;
    }
    Ok(grad)
}

/// Inward-normal derivative of φ₁ at the boundary of a radial ball, by a
/// second-order one-sided difference against the Dirichlet zero.
pub fn phi1_normal_derivative(dom: &DiscreteDomain, sp: &Spectrum) -> Result<f64> {
    let m = dom.radial()?;
    let phi = &sp.phis[0];
    let n = m.n_unknowns();
    // nodes r_{n-1} = R − h and r_{n-2} = R − 2h, with φ(R) = 0
    Ok((-4.0 * phi[n - 1] + phi[n - 2]) / (2.0 * m.h))
}

#[derive(Clone, Debug)]
pub struct BnBounds {
    /// λ₁(Ω*)/4 for the equal-volume ball Ω*.
    pub lower: f64,
    /// (λ₁(Ω*)/4)·min (R₀/α₃)², the α₃-normalized Robin upper bound.
    pub upper_normalized: f64,
    /// (λ₁(Ω*)/4)·min R₀², the same bound with the raw Robin value.
    pub upper_raw: f64,
    /// min_q γ*(q) over the sampled interior points.
    pub druet_min: f64,
    pub volume: f64,
    pub lambda1_equal_ball: f64,
}

/// Bounds on the critical linear shift: λ₁(Ω*)/4 from below, the Robin-value
/// form from above, and the sampled minimum of γ* which the lower bound must
/// not exceed. The upper bound is reported in both Robin normalizations.
pub fn bn_bounds(dom: &DiscreteDomain, sp: &Spectrum, qs: &[[f64; 3]]) -> Result<BnBounds> {
    let volume = match &dom.backend {
        Backend::Radial(m) => 4.0 * crate::domain::PI / 3.0 * m.radius.powi(3),
        Backend::Grid(g) => g.n_unknowns() as f64 * g.cell_volume(),
    };
    let r_star = (3.0 * volume / (4.0 * crate::domain::PI)).powf(1.0 / 3.0);
    let lambda1_equal_ball = crate::domain::PI * crate::domain::PI / (r_star * r_star);
    let lower = lambda1_equal_ball / 4.0;

    let r0_min = qs
        .par_iter()
        .map(|&q| robin(dom, sp, 0.0, q))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let mut druet_min = f64::INFINITY;
    for p in gamma_star_map(dom, sp, qs, 1e-6) {
        if let Some(g) = p.gamma_star {
            druet_min = druet_min.min(g);
        }
    }
    if !druet_min.is_finite() {
        return Err(Error::Bracket("no γ* value in the sample set".into()));
    }
    Ok(BnBounds {
        lower,
        upper_normalized: lower * (r0_min / ALPHA3).powi(2),
        upper_raw: lower * r0_min * r0_min,
        druet_min,
        volume,
        lambda1_equal_ball,
    })
}

/// Closed-form Robin function of the unit ball at the center.
pub fn ball_robin_exact(gamma: f64) -> f64 {
    let z = gamma.sqrt();
    ALPHA3 * z / z.tan()
}

/// Closed-form regular part of the unit ball, center source.
pub fn ball_regular_part_exact(gamma: f64, r: f64) -> f64 {
    let z = gamma.sqrt();
    if r < 1e-9 {
        return ball_robin_exact(gamma);
    }
    ALPHA3 * ((1.0 - (z * r).cos()) / r + (z * r).sin() / (r * z.tan()))
}
