//! Centralized tolerance policy and discretization defaults.

use serde::Serialize;

/// Tolerance for identities checked on analytic (closed-form) handles.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Relative tolerance for optimizer certificates.
pub const CERTIFICATE_REL_TOL: f64 = 1e-6;
/// Radius of the coercivity probe star around the origin.
pub const PROBE_RADIUS: f64 = 1e-3;
/// Number of directions in probe stars (coercivity, domain radius, sublevel windows).
pub const PROBE_DIRECTIONS: usize = 64;
/// Sublevel gap used to size integration windows: `exp(−40) ≈ 4e−18`.
pub const TAIL_GAP: f64 = 40.0;

/// Tolerance for grid-backed quantities: `2·h·L`.
pub fn grid_tol(spacing: f64, lipschitz: f64) -> f64 {
    2.0 * spacing * lipschitz
}

/// Resolution of the dual grids used to recover primal values of handles
/// defined through their conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resolution {
    pub points_1d: usize,
    pub points_2d: usize,
    /// Upper bound on the half-width of the dual box.
    pub max_dual_radius: f64,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { points_1d: 8193, points_2d: 1025, max_dual_radius: 512.0 }
    }
}

impl Resolution {
    pub fn coarse() -> Self {
        Resolution { points_1d: 2049, points_2d: 257, max_dual_radius: 256.0 }
    }

    pub fn points(&self, dim: usize) -> usize {
        if dim == 1 {
            self.points_1d
        } else {
            self.points_2d
        }
    }
}

/// Thread cap from `EPICONV_THREADS`, if set.
pub fn thread_cap() -> Option<usize> {
    std::env::var("EPICONV_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}
