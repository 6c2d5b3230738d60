//! Supported domains and their Dirichlet Laplacians.
//!
//! Two discretization backends cover all four domain kinds:
//!
//! * a radial finite-volume mesh for rotationally symmetric problems, where
//!   the operator is the radial Laplacian u'' + (2/r)u' with the regularity
//!   condition u'(0) = 0 built into the center cell;
//! * a uniform Cartesian grid with a symmetric ghost-value treatment of curved
//!   Dirichlet boundaries, where a cut edge of relative length s replaces the
//!   usual 2/h² diagonal entry by (1 + 1/s)/h² and moves the boundary value to
//!   the right-hand side. Couplings between interior nodes are always -1/h²,
//!   so the assembled operator is exactly symmetric and positive definite.
//!
//! All domains are nondimensional. The ball kinds are centered at the origin;
//! the box occupies (0,lx) x (0,ly) x (0,lz).

use crate::util::tridiag::Tridiag;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub const PI: f64 = std::f64::consts::PI;

/// Smallest admitted cut fraction. Shorter cut edges are clamped: the huge
/// diagonal entry then pins the node to the interpolated boundary value, which
/// is the standard remedy for near-tangent crossings.
const FRAC_MIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deformation {
    /// r(ω) = 1 + t·(3ω₁² − 1)/2, the axisymmetric quadrupole.
    P2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainKind {
    UnitBall,
    Ball { radius: f64 },
    Box { lx: f64, ly: f64, lz: f64 },
    PerturbedBall { deformation: Deformation, amplitude: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full3d,
    Radial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub kind: DomainKind,
    pub mode: Mode,
    /// Nodes per axis (full 3-D) or total radial node count including the
    /// center and boundary nodes.
    pub resolution: usize,
}

impl DomainSpec {
    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            DomainKind::UnitBall => Some(1.0),
            DomainKind::Ball { radius } => Some(radius),
            _ => None,
        }
    }

    /// Content hash used for cache keys and artifact names.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let s = serde_json::to_string(self).expect("spec serializes");
        let h = Sha256::digest(s.as_bytes());
        h.iter().take(6).map(|b| format!("{:02x}", b)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            DomainKind::UnitBall => {}
            DomainKind::Ball { radius } => {
                if !(radius > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "ball radius must be positive, got {}",
                        radius
                    )));
                }
            }
            DomainKind::Box { lx, ly, lz } => {
                if !(lx > 0.0 && ly > 0.0 && lz > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "box edges must be positive, got ({}, {}, {})",
                        lx, ly, lz
                    )));
                }
            }
            DomainKind::PerturbedBall { amplitude, .. } => {
                // x ↦ x(1 + t·q(x/|x|)) has Jacobian I + t·D(x q); for the
                // quadrupole ‖D(x q)‖ ≤ 3 on the closed ball, so |t| < 1/3
                // keeps the map injective.
                let bound = 1.0 / 3.0;
                if !(amplitude.abs() < bound) {
                    return Err(Error::NotInjective { amplitude, bound });
                }
            }
        }
        if matches!(self.mode, Mode::Radial)
            && !matches!(self.kind, DomainKind::UnitBall | DomainKind::Ball { .. })
        {
            return Err(Error::InvalidDomain(
                "radial mode requires a rotationally symmetric domain".into(),
            ));
        }
        if self.resolution < 8 {
            return Err(Error::Resolution(format!(
                "resolution {} < 8 nodes per axis",
                self.resolution
            )));
        }
        Ok(())
    }
}

/// Boundary radius of the perturbed ball in the direction with first
/// component `w1` (the deformation is axisymmetric about e₁).
pub fn perturbed_radius(amplitude: f64, w1: f64) -> f64 {
    1.0 + amplitude * 0.5 * (3.0 * w1 * w1 - 1.0)
}

/// Signed indicator for point membership: negative inside, positive outside.
fn level_set(kind: &DomainKind, x: [f64; 3]) -> f64 {
    match *kind {
        DomainKind::UnitBall => norm3(x) - 1.0,
        DomainKind::Ball { radius } => norm3(x) - radius,
        DomainKind::Box { lx, ly, lz } => {
            let dx = (-x[0]).max(x[0] - lx);
            let dy = (-x[1]).max(x[1] - ly);
            let dz = (-x[2]).max(x[2] - lz);
            dx.max(dy).max(dz)
        }
        DomainKind::PerturbedBall { amplitude, .. } => {
            let r = norm3(x);
            if r < 1e-14 {
                return -(1.0 - amplitude.abs());
            }
            r - perturbed_radius(amplitude, x[0] / r)
        }
    }
}

fn norm3(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Radial finite-volume mesh on [0, R]. Nodes sit at r_i = i·h with
/// h = R/(n_nodes − 1); the boundary node r = R is eliminated, leaving
/// n_nodes − 1 unknowns including the center.
#[derive(Clone, Debug)]
pub struct RadialMesh {
    pub radius: f64,
    pub h: f64,
    /// Unknown radii r_i = i·h, i = 0..n_nodes−1.
    pub r: Vec<f64>,
    /// Exact shell volumes: vol_i = (4π/3)(r_{i+1/2}³ − r_{i−1/2}³), the
    /// center cell being the ball of radius h/2.
    pub vol: Vec<f64>,
    /// Flux form K of −Δ: K u = λ·diag(vol)·u is the generalized eigenproblem.
    pub stiff: Tridiag,
    /// Symmetrized operator vol^{−1/2} K vol^{−1/2}; same eigenvalues, and an
    /// eigenvector v corresponds to the field u = vol^{−1/2} v.
    pub sym: Tridiag,
    /// Coefficient of the boundary value in the last flux row: a Dirichlet
    /// value g contributes +boundary_flux·g to the last right-hand side entry.
    pub boundary_flux: f64,
}

impl RadialMesh {
    pub fn new(radius: f64, n_nodes: usize) -> RadialMesh {
        assert!(n_nodes >= 3, "radial mesh needs at least 3 nodes");
        let n = n_nodes - 1; // unknowns: i = 0..n-1 at r = i h
        let h = radius / (n_nodes as f64 - 1.0);
        let r: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let c = 4.0 * PI / 3.0;
        let mut vol = Vec::with_capacity(n);
        for i in 0..n {
            let rm = if i == 0 { 0.0 } else { (i as f64 - 0.5) * h };
            let rp = (i as f64 + 0.5) * h;
            vol.push(c * (rp.powi(3) - rm.powi(3)));
        }
        // flux coefficients 4π r²_{i+1/2} / h between unknowns i and i+1
        let flux = |i: usize| 4.0 * PI * ((i as f64 + 0.5) * h).powi(2) / h;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        for i in 0..n {
            if i > 0 {
                diag[i] += flux(i - 1);
            }
            diag[i] += flux(i);
            if i + 1 < n {
                off[i] = -flux(i);
            }
        }
        let stiff = Tridiag {
            sub: off.clone(),
            diag: diag.clone(),
            sup: off.clone(),
        };
        let mut sdiag = vec![0.0; n];
        let mut soff = vec![0.0; n - 1];
        for i in 0..n {
            sdiag[i] = diag[i] / vol[i];
            if i + 1 < n {
                soff[i] = off[i] / (vol[i] * vol[i + 1]).sqrt();
            }
        }
        let sym = Tridiag {
            sub: soff.clone(),
            diag: sdiag,
            sup: soff,
        };
        RadialMesh {
            radius,
            h,
            r,
            vol,
            stiff,
            sym,
            boundary_flux: flux(n - 1),
        }
    }

    pub fn n_unknowns(&self) -> usize {
        self.r.len()
    }

    /// y = (−Δ u) on node values, i.e. diag(vol)^{−1} K u with u(R) = 0.
    pub fn apply(&self, u: &[f64], y: &mut [f64]) {
        self.stiff.matvec(u, y);
        for i in 0..y.len() {
            y[i] /= self.vol[i];
        }
    }

    /// ∫ f dV with the exact shell-volume weights.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        let terms: Vec<f64> = f.iter().zip(&self.vol).map(|(a, b)| a * b).collect();
        crate::util::ksum(&terms)
    }

    /// Quadratic interpolation of a node field at radius `rq` ∈ [0, R].
    /// A field of length n carries homogeneous Dirichlet data; length n + 1
    /// supplies the boundary value explicitly in the last slot.
    pub fn interpolate(&self, u: &[f64], rq: f64) -> f64 {
        let n = self.n_unknowns();
        let value_at = |i: usize| -> f64 {
            if i < u.len() {
                u[i]
            } else {
                0.0 // boundary node, Dirichlet
            }
        };
        let j = ((rq / self.h).round() as usize).clamp(1, n - 1);
        let (r0, r1, r2) = (
            (j as f64 - 1.0) * self.h,
            j as f64 * self.h,
            (j as f64 + 1.0) * self.h,
        );
        let (f0, f1, f2) = (value_at(j - 1), value_at(j), value_at(j + 1));
        let l0 = (rq - r1) * (rq - r2) / ((r0 - r1) * (r0 - r2));
        let l1 = (rq - r0) * (rq - r2) / ((r1 - r0) * (r1 - r2));
        let l2 = (rq - r0) * (rq - r1) / ((r2 - r0) * (r2 - r1));
        f0 * l0 + f1 * l1 + f2 * l2
    }
}

/// Uniform Cartesian grid for the full 3-D backend.
#[derive(Clone, Debug)]
pub struct Grid3 {
    pub dims: [usize; 3],
    pub h: [f64; 3],
    /// Coordinates of grid node (0,0,0).
    pub origin: [f64; 3],
    /// Grid-node → unknown index, −1 for exterior nodes.
    pub idx: Vec<i32>,
    /// Coordinates per unknown.
    pub pts: Vec<[f64; 3]>,
    /// Neighbor unknown per direction (−x,+x,−y,+y,−z,+z); −1 when the edge
    /// crosses the boundary.
    pub nbr: Vec<[i32; 6]>,
    /// Cut fraction per direction: 1 for a full interior edge, else the
    /// relative distance to the boundary crossing, clamped to [FRAC_MIN, 1].
    pub frac: Vec<[f32; 6]>,
    pub dist: Vec<f64>,
}

impl Grid3 {
    fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn n_unknowns(&self) -> usize {
        self.pts.len()
    }

    pub fn point(&self, p: usize) -> [f64; 3] {
        self.pts[p]
    }

    pub fn cell_volume(&self) -> f64 {
        self.h[0] * self.h[1] * self.h[2]
    }

    /// y = A u where A is the symmetric Dirichlet Laplacian (−Δ).
    pub fn apply(&self, u: &[f64], y: &mut [f64]) {
        use rayon::prelude::*;
        let inv_h2 = [
            1.0 / (self.h[0] * self.h[0]),
            1.0 / (self.h[1] * self.h[1]),
            1.0 / (self.h[2] * self.h[2]),
        ];
        y.par_iter_mut().enumerate().for_each(|(p, yp)| {
            let mut v = 0.0;
            for d in 0..6 {
                let w = inv_h2[d / 2];
                let s = self.frac[p][d] as f64;
                v += w / s * u[p];
                let q = self.nbr[p][d];
                if q >= 0 {
                    v -= w * u[q as usize];
                }
            }
            *yp = v;
        });
    }

    /// Diagonal of A.
    pub fn diagonal(&self) -> Vec<f64> {
        let inv_h2 = [
            1.0 / (self.h[0] * self.h[0]),
            1.0 / (self.h[1] * self.h[1]),
            1.0 / (self.h[2] * self.h[2]),
        ];
        (0..self.n_unknowns())
            .map(|p| {
                (0..6)
                    .map(|d| inv_h2[d / 2] / self.frac[p][d] as f64)
                    .sum()
            })
            .collect()
    }

    /// Upper bound on the spectrum of A by Gershgorin rows.
    pub fn gershgorin_upper(&self) -> f64 {
        let inv_h2 = [
            1.0 / (self.h[0] * self.h[0]),
            1.0 / (self.h[1] * self.h[1]),
            1.0 / (self.h[2] * self.h[2]),
        ];
        let mut best: f64 = 0.0;
        for p in 0..self.n_unknowns() {
            let mut row = 0.0;
            for d in 0..6 {
                row += inv_h2[d / 2] / self.frac[p][d] as f64;
                if self.nbr[p][d] >= 0 {
                    row += inv_h2[d / 2];
                }
            }
            best = best.max(row);
        }
        best
    }

    /// Right-hand side contribution of inhomogeneous Dirichlet data `g`
    /// evaluated at the boundary crossing of every cut edge.
    pub fn boundary_lift<F: Fn([f64; 3]) -> f64>(&self, g: F) -> Vec<f64> {
        let steps: [[f64; 3]; 6] = [
            [-1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0],
        ];
        let mut rhs = vec![0.0; self.n_unknowns()];
        for p in 0..self.n_unknowns() {
            for d in 0..6 {
                if self.nbr[p][d] < 0 {
                    let s = self.frac[p][d] as f64;
                    let hd = self.h[d / 2];
                    let x = self.pts[p];
                    let bp = [
                        x[0] + s * hd * steps[d][0],
                        x[1] + s * hd * steps[d][1],
                        x[2] + s * hd * steps[d][2],
                    ];
                    rhs[p] += g(bp) / (s * hd * hd);
                }
            }
        }
        rhs
    }

    /// Tensor-quadratic interpolation of an unknown field at an interior
    /// point. Fails when the 3×3×3 stencil touches exterior nodes.
    pub fn interpolate(&self, u: &[f64], x: [f64; 3]) -> Result<f64> {
        let mut centers = [0usize; 3];
        for a in 0..3 {
            let t = (x[a] - self.origin[a]) / self.h[a];
            let c = t.round() as i64;
            if c < 1 || c as usize > self.dims[a] - 2 {
                return Err(Error::Numerical(
                    "interpolation stencil leaves the grid".into(),
                ));
            }
            centers[a] = c as usize;
        }
        let mut wts = [[0.0f64; 3]; 3];
        for a in 0..3 {
            let xc = self.origin[a] + centers[a] as f64 * self.h[a];
            let t = (x[a] - xc) / self.h[a]; // |t| ≤ 1/2
            wts[a] = [0.5 * t * (t - 1.0), 1.0 - t * t, 0.5 * t * (t + 1.0)];
        }
        let mut v = 0.0;
        for (ai, &wa) in wts[0].iter().enumerate() {
            for (bi, &wb) in wts[1].iter().enumerate() {
                for (ci, &wc) in wts[2].iter().enumerate() {
                    let node = self.node_index(
                        centers[0] + ai - 1,
                        centers[1] + bi - 1,
                        centers[2] + ci - 1,
                    );
                    let q = self.idx[node];
                    if q < 0 {
                        return Err(Error::Numerical(
                            "interpolation stencil touches the boundary".into(),
                        ));
                    }
                    v += wa * wb * wc * u[q as usize];
                }
            }
        }
        Ok(v)
    }

    /// ∫ f dV with the uniform cell volume. Fields vanishing on the boundary
    /// keep this second-order accurate despite the ignored cut cells.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        crate::util::ksum(f) * self.cell_volume()
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    Radial(RadialMesh),
    Grid(Grid3),
}

#[derive(Clone, Debug)]
pub struct DiscreteDomain {
    pub spec: DomainSpec,
    pub backend: Backend,
}

impl DiscreteDomain {
    pub fn n_unknowns(&self) -> usize {
        match &self.backend {
            Backend::Radial(m) => m.n_unknowns(),
            Backend::Grid(g) => g.n_unknowns(),
        }
    }

    pub fn radial(&self) -> Result<&RadialMesh> {
        match &self.backend {
            Backend::Radial(m) => Ok(m),
            _ => Err(Error::InvalidDomain("operation needs the radial backend".into())),
        }
    }

    pub fn grid(&self) -> Result<&Grid3> {
        match &self.backend {
            Backend::Grid(g) => Ok(g),
            _ => Err(Error::InvalidDomain("operation needs the 3-D backend".into())),
        }
    }

    /// y = (−Δ u) in the natural node basis.
    pub fn apply_laplacian(&self, u: &[f64], y: &mut [f64]) {
        match &self.backend {
            Backend::Radial(m) => m.apply(u, y),
            Backend::Grid(g) => g.apply(u, y),
        }
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        match &self.backend {
            Backend::Radial(m) => m.integrate(f),
            Backend::Grid(g) => g.integrate(f),
        }
    }

    /// Discrete L² inner product ∫ f g dV.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        let prod: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
        self.integrate(&prod)
    }
}

pub fn build_domain(spec: &DomainSpec) -> Result<DiscreteDomain> {
    spec.validate()?;
    let backend = match spec.mode {
        Mode::Radial => {
            let radius = spec.radius().expect("validated radial kind has a radius");
            Backend::Radial(RadialMesh::new(radius, spec.resolution))
        }
        Mode::Full3d => Backend::Grid(build_grid(spec)?),
    };
    Ok(DiscreteDomain {
        spec: spec.clone(),
        backend,
    })
}

fn build_grid(spec: &DomainSpec) -> Result<Grid3> {
    let n = spec.resolution;
    // bounding box per kind; nodes are strictly interior to it with one
    // spacing of clearance to each face
    let (lo, hi) = match spec.kind {
        DomainKind::UnitBall => ([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0]),
        DomainKind::Ball { radius } => ([-radius; 3], [radius; 3]),
        DomainKind::Box { lx, ly, lz } => ([0.0, 0.0, 0.0], [lx, ly, lz]),
        DomainKind::PerturbedBall { amplitude, .. } => {
            let r = 1.0 + amplitude.abs();
            ([-r; 3], [r; 3])
        }
    };
    let mut h = [0.0; 3];
    let mut origin = [0.0; 3];
    for a in 0..3 {
        h[a] = (hi[a] - lo[a]) / (n as f64 + 1.0);
        origin[a] = lo[a] + h[a];
    }
    let dims = [n, n, n];
    let total = n * n * n;
    let node_pos = |i: usize, j: usize, k: usize| -> [f64; 3] {
        [
            origin[0] + i as f64 * h[0],
            origin[1] + j as f64 * h[1],
            origin[2] + k as f64 * h[2],
        ]
    };

    let mut idx = vec![-1i32; total];
    let mut pts = Vec::new();
    let mut next = 0i32;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = node_pos(i, j, k);
                if level_set(&spec.kind, x) < 0.0 {
                    idx[(i * n + j) * n + k] = next;
                    pts.push(x);
                    next += 1;
                }
            }
        }
    }
    if pts.is_empty() {
        return Err(Error::Resolution("grid resolved no interior nodes".into()));
    }

    let steps: [[i64; 3]; 6] = [
        [-1, 0, 0],
        [1, 0, 0],
        [0, -1, 0],
        [0, 1, 0],
        [0, 0, -1],
        [0, 0, 1],
    ];
    let unknowns = pts.len();
    let mut nbr = vec![[-1i32; 6]; unknowns];
    let mut frac = vec![[1.0f32; 6]; unknowns];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = idx[(i * n + j) * n + k];
                if p < 0 {
                    continue;
                }
                let p = p as usize;
                let x = pts[p];
                for (d, st) in steps.iter().enumerate() {
                    let (ni, nj, nk) = (i as i64 + st[0], j as i64 + st[1], k as i64 + st[2]);
                    let in_range = ni >= 0
                        && nj >= 0
                        && nk >= 0
                        && (ni as usize) < n
                        && (nj as usize) < n
                        && (nk as usize) < n;
                    let q = if in_range {
                        idx[((ni as usize) * n + nj as usize) * n + nk as usize]
                    } else {
                        -1
                    };
                    if q >= 0 {
                        nbr[p][d] = q;
                        frac[p][d] = 1.0;
                    } else {
                        let dir = [st[0] as f64, st[1] as f64, st[2] as f64];
                        let s = edge_crossing(&spec.kind, x, dir, h[d / 2]);
                        frac[p][d] = s.clamp(FRAC_MIN, 1.0) as f32;
                    }
                }
            }
        }
    }

    let dist: Vec<f64> = pts
        .iter()
        .map(|&x| match spec.kind {
            // cheap level-set surrogate for the perturbed ball: accurate to
            // O(amplitude), which is all the stored field is used for
            DomainKind::PerturbedBall { .. } => -level_set(&spec.kind, x),
            _ => exact_boundary_distance(&spec.kind, x),
        })
        .collect();

    Ok(Grid3 {
        dims,
        h,
        origin,
        idx,
        pts,
        nbr,
        frac,
        dist,
    })
}

/// Relative position s ∈ (0,1] of the boundary crossing along the edge from
/// interior node x toward x + h·dir, where the far endpoint is exterior.
fn edge_crossing(kind: &DomainKind, x: [f64; 3], dir: [f64; 3], h: f64) -> f64 {
    match *kind {
        DomainKind::UnitBall | DomainKind::Ball { .. } => {
            let radius = if let DomainKind::Ball { radius } = *kind {
                radius
            } else {
                1.0
            };
            // |x + s h dir|² = R², take the root in (0, 1]
            let a = h * h;
            let b = h * (x[0] * dir[0] + x[1] * dir[1] + x[2] * dir[2]);
            let c = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - radius * radius;
            let disc = (b * b - a * c).max(0.0);
            ((-b + disc.sqrt()) / a).clamp(0.0, 1.0)
        }
        DomainKind::Box { .. } => 1.0,
        DomainKind::PerturbedBall { .. } => {
            let eval = |s: f64| {
                level_set(
                    kind,
                    [x[0] + s * h * dir[0], x[1] + s * h * dir[1], x[2] + s * h * dir[2]],
                )
            };
            let (mut a, mut b) = (0.0, 1.0);
            if eval(1.0) < 0.0 {
                return 1.0; // grazing corner case: treat as a full edge
            }
            for _ in 0..50 {
                let m = 0.5 * (a + b);
                if eval(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        }
    }
}

fn exact_boundary_distance(kind: &DomainKind, x: [f64; 3]) -> f64 {
    match *kind {
        DomainKind::UnitBall => 1.0 - norm3(x),
        DomainKind::Ball { radius } => radius - norm3(x),
        DomainKind::Box { lx, ly, lz } => {
            let dx = x[0].min(lx - x[0]);
            let dy = x[1].min(ly - x[1]);
            let dz = x[2].min(lz - x[2]);
            dx.min(dy).min(dz)
        }
        DomainKind::PerturbedBall { .. } => unreachable!("handled by the numeric path"),
    }
}

/// Distance from `x` to the domain boundary. Exact for balls and boxes,
/// numeric (dense boundary sampling plus golden-section refinement) for the
/// perturbed ball. Errors when `x` lies outside the closure.
pub fn boundary_distance(dom: &DiscreteDomain, x: [f64; 3]) -> Result<f64> {
    let kind = &dom.spec.kind;
    if level_set(kind, x) > 1e-12 {
        return Err(Error::OutsideDomain(x));
    }
    match *kind {
        DomainKind::PerturbedBall { amplitude, .. } => {
            Ok(perturbed_boundary_distance(amplitude, x))
        }
        _ => Ok(exact_boundary_distance(kind, x).max(0.0)),
    }
}

fn perturbed_boundary_distance(t: f64, x: [f64; 3]) -> f64 {
    // axisymmetric about e₁: reduce to the (axial, radial) half-plane
    let a = x[0];
    let b = (x[1] * x[1] + x[2] * x[2]).sqrt();
    let d2 = |psi: f64| {
        let (s, c) = psi.sin_cos();
        let rb = perturbed_radius(t, c);
        let da = a - rb * c;
        let db = b - rb * s;
        da * da + db * db
    };
    let m = 2000;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=m {
        let psi = PI * i as f64 / m as f64;
        let v = d2(psi);
        if v < best.1 {
            best = (i, v);
        }
    }
    let (mut lo, mut hi) = (
        PI * best.0.saturating_sub(1) as f64 / m as f64,
        PI * (best.0 + 1).min(m) as f64 / m as f64,
    );
    // golden-section refinement of the bracket
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    for _ in 0..60 {
        let x1 = lo + phi * (hi - lo);
        let x2 = hi - phi * (hi - lo);
        if d2(x1) < d2(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    d2(0.5 * (lo + hi)).sqrt()
}
