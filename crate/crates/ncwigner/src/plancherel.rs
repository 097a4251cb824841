//! Plancherel data for the orbit family and a numerically checkable
//! per-orbit orthogonality identity: for fixed (ρ, σ, τ) and any gauge,
//!
//!   ∫_{ℝ⁴} |⟨χ| U(0,0,0,q,p) λ⟩|² dq dp = (2π)² ‖χ‖²‖λ‖² / |Δ|,
//!
//! with Δ = ρ²α² − σβγτ. The right side here is the exact constant the
//! integral converges to (verified to ~1e−13 by refining the quadrature);
//! it is gauge-independent and bilinear in ‖χ‖², ‖λ‖².
//!
//! The integral is evaluated after the linear substitution
//! (q, p) ↦ (u(g), L(g)) — the argument shift and linear phase of the
//! representation — whose 4×4 matrix M has det M = Δ. In (u, L) variables
//! the integrand |⟨χ, λ_{u,L}⟩|² is a Gaussian-enveloped bump whose decay
//! scales are known (ā in u, 1/ā in L), so a fixed centered box works for
//! every orbit; the (q,p)-space box would instead stretch with the gauge.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::GroupElement;
use crate::params::OrbitContext;
use crate::quadrature::KahanSum;
use crate::representation::uir_action;
use crate::states::{transported_overlap_sq, HermiteState};
use crate::{NcError, Result};

/// Half-width, in combined-envelope units, of the (u, L) integration box:
/// the integrand is ≲ e^{−w²/2} ≈ 4e−30 of its peak at the boundary.
const BOX_HALF_WIDTH: f64 = 11.5;

/// Two successive resolutions disagreeing by more than this (relative to
/// the closed-form right side) marks the check as under-resolved.
const SELF_CHECK_TOL: f64 = 0.02;

/// Per-orbit Plancherel quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlancherelData {
    /// Density κ(ρ,σ,τ) = |ρ²α² − γβστ|/α² weighting dρ dσ dτ.
    pub kappa: f64,
    /// The Duflo–Moore normalization constant (2π)^{5/2}; independent of
    /// the orbit.
    pub duflo_moore: f64,
    /// s_{ρ,σ,τ} = 1/κ, the reciprocal density on the dual coordinates.
    pub density_s: f64,
}

/// κ, N, s for the context's orbit.
pub fn plancherel_data(ctx: &OrbitContext) -> PlancherelData {
    let alpha2 = ctx.consts.alpha * ctx.consts.alpha;
    let kappa = ctx.delta.abs() / alpha2;
    PlancherelData {
        kappa,
        duflo_moore: (2.0 * std::f64::consts::PI).powf(2.5),
        density_s: 1.0 / kappa,
    }
}

/// Everything the orthogonality check produced, serializable as the
/// check report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    /// Integrated left side at the refined resolution.
    pub lhs: f64,
    /// Closed-form right side (2π)²‖χ‖²‖λ‖²/|Δ|.
    pub rhs: f64,
    /// |lhs − rhs| / rhs (0 when both sides vanish).
    pub rel_dev: f64,
    /// Requested base resolution (nodes per axis; the self-check ran 1.5×).
    pub resolution: usize,
    /// Per-axis half-widths of the (u₁, u₂, L₁, L₂) integration box.
    pub box_half_widths: [f64; 4],
}

/// The 4×4 matrix taking (q₁,q₂,p₁,p₂) to (u₁,u₂,L₁,L₂); det = Δ.
fn orbit_map(ctx: &OrbitContext) -> [[f64; 4]; 4] {
    let mut m = [[0.0f64; 4]; 4];
    for (col, basis) in [
        GroupElement::translation([1.0, 0.0], [0.0, 0.0]),
        GroupElement::translation([0.0, 1.0], [0.0, 0.0]),
        GroupElement::translation([0.0, 0.0], [1.0, 0.0]),
        GroupElement::translation([0.0, 0.0], [0.0, 1.0]),
    ]
    .iter()
    .enumerate()
    {
        let act = uir_action(basis, ctx);
        m[0][col] = act.shift[0];
        m[1][col] = act.shift[1];
        m[2][col] = act.linear_phase[0];
        m[3][col] = act.linear_phase[1];
    }
    m
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    // Laplace expansion via 2×2 complements; exact enough for a 4×4.
    let det3 = |r: [usize; 3], c: [usize; 3]| -> f64 {
        m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
            - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
            + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
    };
    m[0][0] * det3([1, 2, 3], [1, 2, 3]) - m[0][1] * det3([1, 2, 3], [0, 2, 3])
        + m[0][2] * det3([1, 2, 3], [0, 1, 3])
        - m[0][3] * det3([1, 2, 3], [0, 1, 2])
}

/// Left side at one resolution: trapezoid tensor grid over the (u, L) box,
/// divided by |det M| for the substitution back to (q, p).
fn orthogonality_lhs(
    chi: &HermiteState,
    lambda: &HermiteState,
    ctx: &OrbitContext,
    resolution: usize,
) -> Result<(f64, [f64; 4])> {
    if chi.scale != lambda.scale {
        return Err(NcError::InvalidInput(format!(
            "orthogonality check requires equal envelope scales, got {} and {}",
            chi.scale, lambda.scale
        )));
    }
    if resolution < 2 {
        return Err(NcError::InvalidInput(format!(
            "orthogonality check needs at least 2 nodes per axis, got {resolution}"
        )));
    }
    let abar = ((chi.scale * chi.scale + lambda.scale * lambda.scale) / 2.0).sqrt();
    let half = [
        BOX_HALF_WIDTH / abar,
        BOX_HALF_WIDTH / abar,
        BOX_HALF_WIDTH * abar,
        BOX_HALF_WIDTH * abar,
    ];
    let det = det4(&orbit_map(ctx)).abs();
    // The context guarantees Δ ≠ 0, and det M = Δ identically.
    debug_assert!(det > 0.0);

    let axis = |h: f64| -> (Vec<f64>, f64) {
        let step = 2.0 * h / (resolution as f64 - 1.0);
        ((0..resolution).map(|j| -h + step * j as f64).collect(), step)
    };
    let (u1s, h1) = axis(half[0]);
    let (u2s, h2) = axis(half[1]);
    let (l1s, h3) = axis(half[2]);
    let (l2s, h4) = axis(half[3]);
    let edge = |idx: usize| -> f64 {
        if idx == 0 || idx == resolution - 1 {
            0.5
        } else {
            1.0
        }
    };

    let total: KahanSum = u1s
        .par_iter()
        .enumerate()
        .map(|(i1, &u1)| {
            let mut acc = KahanSum::default();
            for (i2, &u2) in u2s.iter().enumerate() {
                let wu = edge(i1) * edge(i2);
                for (i3, &l1) in l1s.iter().enumerate() {
                    for (i4, &l2) in l2s.iter().enumerate() {
                        let w = wu * edge(i3) * edge(i4);
                        let v = transported_overlap_sq(chi, lambda, [u1, u2], [l1, l2]);
                        acc.add(w * v);
                    }
                }
            }
            acc
        })
        .reduce(KahanSum::default, |mut a, b| {
            a.merge(b);
            a
        });
    Ok((total.value() * h1 * h2 * h3 * h4 / det, half))
}

/// Full orthogonality check: integrates the left side at `resolution` and
/// at 1.5× to confirm the box/resolution suffice, then compares with the
/// closed-form right side.
pub fn orthogonality_report(
    chi: &HermiteState,
    lambda: &HermiteState,
    ctx: &OrbitContext,
    resolution: usize,
) -> Result<OrthogonalityReport> {
    let rhs = (2.0 * std::f64::consts::PI).powi(2) * chi.norm_sq() * lambda.norm_sq()
        / ctx.delta.abs();
    if rhs == 0.0 {
        // One of the states is the zero vector: both sides vanish.
        return Ok(OrthogonalityReport {
            lhs: 0.0,
            rhs: 0.0,
            rel_dev: 0.0,
            resolution,
            box_half_widths: [0.0; 4],
        });
    }
    let (lo, _) = orthogonality_lhs(chi, lambda, ctx, resolution)?;
    let refined = resolution + resolution.div_ceil(2);
    let (hi, half) = orthogonality_lhs(chi, lambda, ctx, refined)?;
    let self_dev = (hi - lo).abs() / rhs;
    if self_dev > SELF_CHECK_TOL {
        return Err(NcError::QuadratureUnderResolved {
            what: "orthogonality integral self-check",
            deviation: self_dev,
            tolerance: SELF_CHECK_TOL,
        });
    }
    Ok(OrthogonalityReport {
        lhs: hi,
        rhs,
        rel_dev: (hi - rhs).abs() / rhs,
        resolution,
        box_half_widths: half,
    })
}

/// Relative deviation |lhs − rhs|/rhs of the orthogonality identity.
pub fn orthogonality_check(
    chi: &HermiteState,
    lambda: &HermiteState,
    ctx: &OrbitContext,
    resolution: usize,
) -> Result<f64> {
    Ok(orthogonality_report(chi, lambda, ctx, resolution)?.rel_dev)
}
