//! Numerical toolkit for the energy-critical heat equation
//!
//!     u_t = Δu + u⁵   in Ω ⊂ ℝ³,   u = 0 on ∂Ω,
//!
//! at the desk scale: finite-difference domains and spectra, Helmholtz Green
//! functions G_γ = Γ − H_γ and their Robin functions, the critical spectral
//! parameter γ*(q), the two-bubble ansatz u₁ = U_{μ,ξ} − μ^{1/2}H_γ and its
//! error, the heat-kernel-driven nonlocal memory kernel I(τ) with its Laplace
//! inversion σ(τ), and a splitting integrator for the full nonlinear flow.
//!
//! Everything is plain f64 on structured grids; no external solver backends.

pub mod ansatz;
pub mod cli;
pub mod domain;
pub mod evolve;
pub mod green;
pub mod nonlocal;
pub mod spectral;
pub mod util;

/// Bubble normalization constant α₃ = 3^{1/4}: U(y) = α₃(1+|y|²)^{−1/2} solves
/// ΔU + U⁵ = 0 on ℝ³.
pub const ALPHA3: f64 = 1.316_074_012_952_492_4; // 3^(1/4)

/// Surface measure of the unit sphere in ℝ³.
pub const OMEGA3: f64 = 4.0 * std::f64::consts::PI;

/// Source strength of Γ(x) = α₃/|x|: −ΔΓ = c₃δ₀ with c₃ = α₃ω₃.
pub const C3: f64 = ALPHA3 * OMEGA3;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("resolution too coarse: {0}")]
    Resolution(String),
    #[error("deformation not injective: amplitude {amplitude} exceeds bound {bound}")]
    NotInjective { amplitude: f64, bound: f64 },
    #[error("point {0:?} lies outside the domain (or too close to the boundary)")]
    OutsideDomain([f64; 3]),
    #[error("eigensolver did not converge: {0}")]
    EigenFailure(String),
    #[error("gamma = {gamma} resonates with eigenvalue {lambda} (margin {margin})")]
    Resonant { gamma: f64, lambda: f64, margin: f64 },
    #[error("gamma = {gamma} outside admissible range (0, lambda1 = {lambda1})")]
    GammaRange { gamma: f64, lambda1: f64 },
    #[error("root bracketing failed: {0}")]
    Bracket(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("source point mismatch: ansatz center {xi:?} vs Green source {green_source:?}")]
    SourceMismatch {
        xi: [f64; 3],
        green_source: [f64; 3],
    },
    #[error("time stepping failed: {0}")]
    TimeStepping(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
