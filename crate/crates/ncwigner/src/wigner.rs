//! The noncommutative Wigner transform on the 4-dimensional dual
//! coordinates k* = (k₁*, k₂*, k₃*, k₄*) of a fixed orbit, its
//! gauge-covariant reparametrization through noncommutative phase-space
//! coordinates, the standard (commutative) Wigner transform it collapses to
//! as σ, τ → 0, and grid evaluation by direct quadrature or FFT.
//!
//! Every point value is one absolutely convergent 2D integral
//!
//!   W_{χ,λ}(k*) = C ∫ e^{iα E·r} conj(λ)(r/2 + T) χ(−r/2 + T) d²r,
//!   C = |α| / (2π √|Δ|),
//!
//! with E and T explicit linear functions of k*. The pair (E, T) carries
//! the gauge-invariant content: E = −p_nc and T = −q_nc/ρ, where
//! (q_nc, p_nc) are the noncommutative position/momentum coordinates of
//! k*. Two gauges on the same orbit index the same function differently;
//! matching points through (q_nc, p_nc) makes their transforms agree to
//! roundoff, which [`gauge_covariance_check`] measures.
//!
//! |W| ≤ 4C‖χ‖‖λ‖ everywhere (Cauchy–Schwarz, with equality for matched
//! ground states at the phase-space origin), so every self-check below is
//! relative to that a-priori peak.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::params::{validate_context, OrbitContext, OrbitLabel};
use crate::quadrature::{KahanSum, QuadratureRule};
use crate::states::HermiteState;
use crate::{NcError, Result};

/// Default Gauss–Hermite nodes per axis for internal evaluations
/// (covariance checks, limit scans); resolves every state the degree cap
/// admits to well below the self-check tolerance.
pub const DEFAULT_GH_NODES: usize = 64;

/// Two-resolution self-check tolerance, relative to the peak bound
/// 4C‖χ‖‖λ‖.
const SELF_CHECK_TOL: f64 = 1e-8;

/// Gaussian half-width margin, in combined-envelope units, built into the
/// FFT spatial step: the integrand is ~e^{−w²/2} ≈ 1e−24 of its peak
/// beyond the resolved band.
const FFT_ALIAS_MARGIN: f64 = 10.5;

/// The spatial lattice must span at least this many combined-envelope
/// widths or the Riemann sums truncate visibly.
const FFT_MIN_SPAN: f64 = 12.0;

/// A point of the 4-dimensional dual coordinate space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub k1s: f64,
    pub k2s: f64,
    pub k3s: f64,
    pub k4s: f64,
}

impl PhaseSpacePoint {
    pub fn new(k1s: f64, k2s: f64, k3s: f64, k4s: f64) -> Self {
        PhaseSpacePoint { k1s, k2s, k3s, k4s }
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        PhaseSpacePoint::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.k1s, self.k2s, self.k3s, self.k4s]
    }
}

/// Noncommutative position and momentum coordinates (Q₁, Q₂, P₁, P₂)
/// attached to a dual point: the expectation-value coordinates in which the
/// transform is gauge-covariant.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NCCoordinates {
    pub q_nc: [f64; 2],
    pub p_nc: [f64; 2],
}

impl NCCoordinates {
    pub fn from_array(v: [f64; 4]) -> Self {
        NCCoordinates {
            q_nc: [v[0], v[1]],
            p_nc: [v[2], v[3]],
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q_nc[0], self.q_nc[1], self.p_nc[0], self.p_nc[1]]
    }
}

/// The linear map k* ↦ (q_nc, p_nc). With A₂ = ρ²α² and bg = σβτγ:
///
///   q₁ = ((bg·l(1−m) − A₂)k₁* + mρσαβ·k₄*) / (bg·l − A₂)
///   q₂ = (ρα(bg(l+m−lm) − A₂)k₂* + (1−m)σβ(bg·l − A₂)k₃*) / (ρα(bg − A₂))
///   p₁ = (ρατγ(1−l)k₂* + (A₂ − bg·l)k₃*) / (A₂ − bg)
///   p₂ = (A₂k₄* − ρατγl·k₁*) / (A₂ − bg·l)
///
/// The momenta do not involve m; as σ, τ → 0 the whole map tends to the
/// identity. Denominators are ±Δ and D_l, both guaranteed nonzero by
/// context validation.
pub fn nc_coordinates(k: &PhaseSpacePoint, ctx: &OrbitContext) -> NCCoordinates {
    let a = ctx.consts.alpha;
    let b = ctx.consts.beta;
    let g = ctx.consts.gamma;
    let (k1, k2, k3) = (ctx.orbit.rho, ctx.orbit.sigma, ctx.orbit.tau);
    let (l, m) = (ctx.gauge.l, ctx.gauge.m);
    let a2 = (k1 * a) * (k1 * a);
    let bg = k2 * b * k3 * g;
    let (s1, s2, s3, s4) = (k.k1s, k.k2s, k.k3s, k.k4s);
    let q1 = ((bg * l * (1.0 - m) - a2) * s1 + m * k1 * k2 * a * b * s4) / (bg * l - a2);
    let q2 = (k1 * a * (bg * (l + m - l * m) - a2) * s2 + (1.0 - m) * k2 * b * (bg * l - a2) * s3)
        / (k1 * a * (bg - a2));
    let p1 = (k1 * a * k3 * g * (1.0 - l) * s2 + (a2 - bg * l) * s3) / (a2 - bg);
    let p2 = (a2 * s4 - k1 * a * k3 * g * l * s1) / (a2 - bg * l);
    NCCoordinates {
        q_nc: [q1, q2],
        p_nc: [p1, p2],
    }
}

/// Columns of the 4×4 matrix behind [`nc_coordinates`].
fn nc_matrix(ctx: &OrbitContext) -> [[f64; 4]; 4] {
    let mut m = [[0.0f64; 4]; 4];
    for col in 0..4 {
        let mut unit = [0.0f64; 4];
        unit[col] = 1.0;
        let image = nc_coordinates(&PhaseSpacePoint::from_array(unit), ctx).to_array();
        for row in 0..4 {
            m[row][col] = image[row];
        }
    }
    m
}

/// Gaussian elimination with partial pivoting; fails with
/// [`NcError::SingularMap`] if a pivot falls below 1e−12 of the matrix
/// scale.
fn solve4(mut m: [[f64; 4]; 4], mut b: [f64; 4]) -> Result<[f64; 4]> {
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut det = 1.0f64;
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() < 1e-12 * scale {
            return Err(NcError::SingularMap {
                det: det * m[pivot_row][col],
            });
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            b.swap(pivot_row, col);
            det = -det;
        }
        det *= m[col][col];
        for row in (col + 1)..4 {
            let f = m[row][col] / m[col][col];
            for c in col..4 {
                m[row][c] -= f * m[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for c in (row + 1)..4 {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Inverse of [`nc_coordinates`]: the dual point whose noncommutative
/// coordinates are `nc`.
pub fn nc_coordinates_inverse(nc: &NCCoordinates, ctx: &OrbitContext) -> Result<PhaseSpacePoint> {
    Ok(PhaseSpacePoint::from_array(solve4(
        nc_matrix(ctx),
        nc.to_array(),
    )?))
}

/// Everything the point integral needs: the oscillation vector E, the
/// window center T, the prefactor C, and α itself for the phase.
#[derive(Debug, Clone, Copy)]
struct KernelParams {
    e: [f64; 2],
    t: [f64; 2],
    coeff: f64,
    alpha: f64,
}

/// C = |α| / (2π √|Δ|).
fn kernel_constant(ctx: &OrbitContext) -> f64 {
    ctx.consts.alpha.abs() / (2.0 * std::f64::consts::PI * ctx.delta.abs().sqrt())
}

/// Kernel data through the invariant route E = −p_nc, T = −q_nc/ρ.
fn kernel_from_nc(nc: &NCCoordinates, ctx: &OrbitContext) -> KernelParams {
    let k1 = ctx.orbit.rho;
    KernelParams {
        e: [-nc.p_nc[0], -nc.p_nc[1]],
        t: [-nc.q_nc[0] / k1, -nc.q_nc[1] / k1],
        coeff: kernel_constant(ctx),
        alpha: ctx.consts.alpha,
    }
}

/// Kernel data from the independent closed forms for E(k*) and T(k*); the
/// agreement of this route with [`kernel_from_nc`] at every point is a
/// transcription check on both.
fn kernel_closed_form(k: &PhaseSpacePoint, ctx: &OrbitContext) -> KernelParams {
    let a = ctx.consts.alpha;
    let b = ctx.consts.beta;
    let g = ctx.consts.gamma;
    let (k1, k2, k3) = (ctx.orbit.rho, ctx.orbit.sigma, ctx.orbit.tau);
    let (l, m) = (ctx.gauge.l, ctx.gauge.m);
    let a2 = (k1 * a) * (k1 * a);
    let bg = k2 * b * k3 * g;
    let (s1, s2, s3, s4) = (k.k1s, k.k2s, k.k3s, k.k4s);
    let e1 = (k1 * a * k3 * g * (1.0 - l) * s2 + (a2 - bg * l) * s3) / (bg - a2);
    let e2 = (k1 * a * k3 * g * l * s1 - a2 * s4) / (a2 - bg * l);
    let t1 = ((k3 * g * k2 * b * l * (1.0 - m) - a2) * s1 + m * k1 * k2 * a * b * s4)
        / (k1 * (a2 - bg * l));
    let t2 = (k1 * a * (bg * (l + m - l * m) - a2) * s2 + (1.0 - m) * k2 * b * (bg * l - a2) * s3)
        / (k1 * k1 * a * (a2 - bg));
    KernelParams {
        e: [e1, e2],
        t: [t1, t2],
        coeff: kernel_constant(ctx),
        alpha: a,
    }
}

/// A-priori bound on |W|: 4C‖χ‖‖λ‖.
fn peak_scale(chi: &HermiteState, lambda: &HermiteState, coeff: f64) -> f64 {
    4.0 * coeff * chi.norm_sq().sqrt() * lambda.norm_sq().sqrt()
}

/// One evaluation of the point integral at the rule's resolution. The
/// quadrature frame follows the product envelope: conj(λ)(r/2+T) has
/// precision (a_λ/2)² and center 2(s_λ−T); χ(−r/2+T) has precision
/// (a_χ/2)² and center −2(s_χ−T); the product is a Gaussian of scale
/// ā = √((p_λ+p_χ)/2) around their precision-weighted mean μ.
fn wigner_integral_raw(
    chi: &HermiteState,
    lambda: &HermiteState,
    kp: &KernelParams,
    rule: QuadratureRule,
) -> Complex64 {
    let (xs, ws) = rule.nodes_1d();
    let p_lam = (lambda.scale * 0.5) * (lambda.scale * 0.5);
    let p_chi = (chi.scale * 0.5) * (chi.scale * 0.5);
    let psum = p_lam + p_chi;
    let abar = (0.5 * psum).sqrt();
    let mu = [0, 1].map(|ax| {
        (p_lam * 2.0 * (lambda.center[ax] - kp.t[ax]) - p_chi * 2.0 * (chi.center[ax] - kp.t[ax]))
            / psum
    });
    let gauss = matches!(rule, QuadratureRule::GaussHermite { .. });
    let jac = if gauss { 1.0 / (abar * abar) } else { 1.0 };
    let node = |ax: usize, x: f64| mu[ax] + if gauss { x / abar } else { x };
    let r1: Vec<f64> = xs.iter().map(|&x| node(0, x)).collect();
    let r2: Vec<f64> = xs.iter().map(|&x| node(1, x)).collect();
    let half_plus = |rs: &[f64], ax: usize| -> Vec<f64> {
        rs.iter().map(|&r| 0.5 * r + kp.t[ax]).collect()
    };
    let half_minus = |rs: &[f64], ax: usize| -> Vec<f64> {
        rs.iter().map(|&r| -0.5 * r + kp.t[ax]).collect()
    };
    let lam_grid = lambda.evaluate_grid(&half_plus(&r1, 0), &half_plus(&r2, 1));
    let chi_grid = chi.evaluate_grid(&half_minus(&r1, 0), &half_minus(&r2, 1));
    let phase = |rs: &[f64], ax: usize| -> Vec<Complex64> {
        rs.iter()
            .map(|&r| Complex64::from_polar(1.0, kp.alpha * kp.e[ax] * r))
            .collect()
    };
    let ph1 = phase(&r1, 0);
    let ph2 = phase(&r2, 1);
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for i in 0..r1.len() {
        for j in 0..r2.len() {
            let term =
                ws[i] * ws[j] * lam_grid[i][j].conj() * chi_grid[i][j] * ph1[i] * ph2[j];
            re.add(term.re);
            im.add(term.im);
        }
    }
    Complex64::new(re.value(), im.value()) * (kp.coeff * jac)
}

/// Point integral with a two-resolution self-check against the peak bound;
/// returns the refined value.
fn wigner_checked(
    chi: &HermiteState,
    lambda: &HermiteState,
    kp: &KernelParams,
    rule: QuadratureRule,
) -> Result<Complex64> {
    let lo = wigner_integral_raw(chi, lambda, kp, rule);
    let hi = wigner_integral_raw(chi, lambda, kp, rule.refined());
    let peak = peak_scale(chi, lambda, kp.coeff);
    let dev = (hi - lo).norm();
    if dev > SELF_CHECK_TOL * peak {
        return Err(NcError::QuadratureUnderResolved {
            what: "wigner point integral",
            deviation: dev / peak,
            tolerance: SELF_CHECK_TOL,
        });
    }
    Ok(hi)
}

/// W_{χ,λ}(k*) through the noncommutative-coordinate route.
pub fn wigner_point(
    chi: &HermiteState,
    lambda: &HermiteState,
    k: &PhaseSpacePoint,
    ctx: &OrbitContext,
    rule: QuadratureRule,
) -> Result<Complex64> {
    let nc = nc_coordinates(k, ctx);
    wigner_checked(chi, lambda, &kernel_from_nc(&nc, ctx), rule)
}

/// W_{χ,λ}(k*) through the directly transcribed closed forms for E and T.
/// Mathematically identical to [`wigner_point`]; kept as an independent
/// code path so the two can be compared.
pub fn wigner_point_closed_form(
    chi: &HermiteState,
    lambda: &HermiteState,
    k: &PhaseSpacePoint,
    ctx: &OrbitContext,
    rule: QuadratureRule,
) -> Result<Complex64> {
    wigner_checked(chi, lambda, &kernel_closed_form(k, ctx), rule)
}

/// W indexed directly by noncommutative coordinates, skipping k*.
pub fn wigner_from_nc(
    chi: &HermiteState,
    lambda: &HermiteState,
    nc: &NCCoordinates,
    ctx: &OrbitContext,
    rule: QuadratureRule,
) -> Result<Complex64> {
    wigner_checked(chi, lambda, &kernel_from_nc(nc, ctx), rule)
}

/// The textbook Wigner transform on commutative phase space,
///
///   W_ψ(x, p) = (πħ)⁻² ∫ conj(ψ)(x+y) ψ(x−y) e^{2ip·y/ħ} d²y,
///
/// normalized so that ∫ W dx dp = ‖ψ‖². The σ, τ → 0 limit of the
/// noncommutative transform lands here (after matching coordinates and
/// peak normalization); see [`commutative_limit_scan`].
pub fn standard_wigner(
    psi: &HermiteState,
    x: [f64; 2],
    p: [f64; 2],
    hbar: f64,
    rule: QuadratureRule,
) -> Result<Complex64> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(NcError::InvalidInput(format!(
            "standard Wigner transform needs finite ħ > 0, got {hbar}"
        )));
    }
    let norm = 1.0 / (std::f64::consts::PI * hbar).powi(2);
    let peak = norm * psi.norm_sq();
    let eval = |r: QuadratureRule| -> Complex64 {
        let (xs, ws) = r.nodes_1d();
        let gauss = matches!(r, QuadratureRule::GaussHermite { .. });
        let a = psi.scale;
        let jac = if gauss { 1.0 / (a * a) } else { 1.0 };
        let ys: Vec<f64> = xs
            .iter()
            .map(|&t| if gauss { t / a } else { t })
            .collect();
        let plus = |ax: usize| -> Vec<f64> { ys.iter().map(|&y| x[ax] + y).collect() };
        let minus = |ax: usize| -> Vec<f64> { ys.iter().map(|&y| x[ax] - y).collect() };
        let plus_grid = psi.evaluate_grid(&plus(0), &plus(1));
        let minus_grid = psi.evaluate_grid(&minus(0), &minus(1));
        let phase = |ax: usize| -> Vec<Complex64> {
            ys.iter()
                .map(|&y| Complex64::from_polar(1.0, 2.0 * p[ax] * y / hbar))
                .collect()
        };
        let ph1 = phase(0);
        let ph2 = phase(1);
        let mut re = KahanSum::default();
        let mut im = KahanSum::default();
        for i in 0..ys.len() {
            for j in 0..ys.len() {
                let term =
                    ws[i] * ws[j] * plus_grid[i][j].conj() * minus_grid[i][j] * ph1[i] * ph2[j];
                re.add(term.re);
                im.add(term.im);
            }
        }
        Complex64::new(re.value(), im.value()) * (norm * jac)
    };
    let lo = eval(rule);
    let hi = eval(rule.refined());
    let dev = (hi - lo).norm();
    if dev > SELF_CHECK_TOL * peak {
        return Err(NcError::QuadratureUnderResolved {
            what: "standard Wigner integral",
            deviation: dev / peak,
            tolerance: SELF_CHECK_TOL,
        });
    }
    Ok(hi)
}

/// Gauge covariance: evaluate W under `ctx_a` at k*, translate k* to the
/// gauge of `ctx_b` through the shared noncommutative coordinates, evaluate
/// there, and return the relative deviation
/// |W_a − W_b| / max(|W_a|, 1e−30·peak). Both contexts must carry the same
/// deformation constants and orbit label ([`NcError::ContextMismatch`]).
pub fn gauge_covariance_check(
    chi: &HermiteState,
    lambda: &HermiteState,
    k: &PhaseSpacePoint,
    ctx_a: &OrbitContext,
    ctx_b: &OrbitContext,
) -> Result<f64> {
    if !ctx_a.same_orbit(ctx_b) {
        return Err(NcError::ContextMismatch {
            what: "deformation constants or orbit label",
        });
    }
    let rule = QuadratureRule::gauss_hermite(DEFAULT_GH_NODES)?;
    let nc = nc_coordinates(k, ctx_a);
    let k_b = nc_coordinates_inverse(&nc, ctx_b)?;
    let w_a = wigner_point(chi, lambda, k, ctx_a, rule)?;
    let w_b = wigner_point(chi, lambda, &k_b, ctx_b, rule)?;
    let diff = (w_a - w_b).norm();
    if diff == 0.0 {
        return Ok(0.0);
    }
    let floor = 1e-30 * peak_scale(chi, lambda, kernel_constant(ctx_a));
    Ok(diff / w_a.norm().max(floor))
}

/// One coordinate axis a 2D slice can vary: either dual coordinates kᵢ*
/// or noncommutative coordinates. Mixing the two families in one slice is
/// rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceAxis {
    K1s,
    K2s,
    K3s,
    K4s,
    Q1nc,
    Q2nc,
    P1nc,
    P2nc,
}

impl SliceAxis {
    /// True for the k*-family axes.
    pub fn is_dual(self) -> bool {
        matches!(
            self,
            SliceAxis::K1s | SliceAxis::K2s | SliceAxis::K3s | SliceAxis::K4s
        )
    }

    /// Position of this axis inside its own 4-vector.
    fn family_index(self) -> usize {
        match self {
            SliceAxis::K1s | SliceAxis::Q1nc => 0,
            SliceAxis::K2s | SliceAxis::Q2nc => 1,
            SliceAxis::K3s | SliceAxis::P1nc => 2,
            SliceAxis::K4s | SliceAxis::P2nc => 3,
        }
    }
}

/// A 2D slice through the 4-dimensional domain: two varying axes from one
/// coordinate family, fixed values for the remaining coordinates of that
/// family (entries of `fixed` at the varying indices are ignored), the
/// ranges to sweep, and the per-axis sample count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub x_axis: SliceAxis,
    pub y_axis: SliceAxis,
    pub fixed: [f64; 4],
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub resolution: usize,
}

impl SliceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.x_axis == self.y_axis {
            return Err(NcError::InvalidInput(format!(
                "slice axes must be distinct, got {:?} twice",
                self.x_axis
            )));
        }
        if self.x_axis.is_dual() != self.y_axis.is_dual() {
            return Err(NcError::InvalidInput(format!(
                "slice axes must come from one coordinate family, got {:?} and {:?}",
                self.x_axis, self.y_axis
            )));
        }
        if self.resolution < 2 {
            return Err(NcError::InvalidInput(format!(
                "slice resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        for (name, (lo, hi)) in [("x", self.x_range), ("y", self.y_range)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(NcError::InvalidInput(format!(
                    "{name} range must be finite with max > min, got ({lo}, {hi})"
                )));
            }
        }
        if self.fixed.iter().any(|v| !v.is_finite()) {
            return Err(NcError::InvalidInput(format!(
                "fixed slice coordinates must be finite, got {:?}",
                self.fixed
            )));
        }
        Ok(())
    }
}

/// The spatial/momentum lattice an FFT evaluation actually used. The
/// spatial nodes are r_j = mu_snap + (j − N/2)h; the momentum nodes are
/// p_u = p_offset + (u − N/2)·delta_p on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FftLattice {
    pub h: f64,
    pub mu_snap: [f64; 2],
    pub p_offset: [f64; 2],
    pub delta_p: f64,
}

/// How a grid's values were produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridMethod {
    GaussHermite { nodes_per_axis: usize },
    Fft(FftLattice),
}

/// Everything needed to reproduce a grid: the full context, both states,
/// and the evaluation method with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub context: OrbitContext,
    pub chi: HermiteState,
    pub lambda: HermiteState,
    pub method: GridMethod,
}

/// A computed slice: `values[i][j]` is W at the i-th x-axis node and j-th
/// y-axis node; `extents` records the actual sampled interval per axis
/// (identical to the requested ranges on the quadrature path, the snapped
/// momentum lattice on the FFT path).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: SliceSpec,
    pub extents: [[f64; 2]; 2],
    pub values: Vec<Vec<Complex64>>,
    pub metadata: GridMetadata,
}

impl WignerGrid {
    /// The coordinate values along one extent axis (0 = x, 1 = y), evenly
    /// spaced over the recorded extent.
    pub fn axis_values(&self, axis: usize) -> Vec<f64> {
        let [lo, hi] = self.extents[axis];
        linspace(lo, hi, self.spec.resolution)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n as f64 - 1.0);
    (0..n).map(|j| lo + step * j as f64).collect()
}

/// Evaluate a slice. Axes (P1nc, P2nc) with a power-of-two resolution ≥ 4
/// take the FFT path (one spatial lattice shared by all momenta); every
/// other slice evaluates the point integral per site in parallel. Either
/// way the values match [`wigner_point`] / [`wigner_from_nc`] at the
/// lattice sites.
pub fn wigner_grid(
    chi: &HermiteState,
    lambda: &HermiteState,
    spec: &SliceSpec,
    ctx: &OrbitContext,
    rule: QuadratureRule,
) -> Result<WignerGrid> {
    spec.validate()?;
    if spec.x_axis == SliceAxis::P1nc
        && spec.y_axis == SliceAxis::P2nc
        && spec.resolution >= 4
        && spec.resolution.is_power_of_two()
    {
        fft_grid(chi, lambda, spec, ctx)
    } else {
        quadrature_grid(chi, lambda, spec, ctx, rule)
    }
}

/// Kernel parameters for one slice site.
fn site_kernel(spec: &SliceSpec, xv: f64, yv: f64, ctx: &OrbitContext) -> KernelParams {
    let mut coords = spec.fixed;
    coords[spec.x_axis.family_index()] = xv;
    coords[spec.y_axis.family_index()] = yv;
    if spec.x_axis.is_dual() {
        let nc = nc_coordinates(&PhaseSpacePoint::from_array(coords), ctx);
        kernel_from_nc(&nc, ctx)
    } else {
        kernel_from_nc(&NCCoordinates::from_array(coords), ctx)
    }
}

fn quadrature_grid(
    chi: &HermiteState,
    lambda: &HermiteState,
    spec: &SliceSpec,
    ctx: &OrbitContext,
    rule: QuadratureRule,
) -> Result<WignerGrid> {
    let xs = linspace(spec.x_range.0, spec.x_range.1, spec.resolution);
    let ys = linspace(spec.y_range.0, spec.y_range.1, spec.resolution);
    let refined = rule.refined();
    let values: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&xv| {
            ys.iter()
                .map(|&yv| wigner_integral_raw(chi, lambda, &site_kernel(spec, xv, yv, ctx), refined))
                .collect()
        })
        .collect();
    // One self-check at the largest value: re-evaluate at the base rule and
    // compare against the refined value already stored.
    let peak = peak_scale(chi, lambda, kernel_constant(ctx));
    if peak > 0.0 {
        let (bi, bj, _) = values
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.norm())))
            .max_by(|a, b| a.2.total_cmp(&b.2))
            .unwrap();
        let lo = wigner_integral_raw(chi, lambda, &site_kernel(spec, xs[bi], ys[bj], ctx), rule);
        let dev = (values[bi][bj] - lo).norm();
        if dev > SELF_CHECK_TOL * peak {
            return Err(NcError::QuadratureUnderResolved {
                what: "wigner grid integral",
                deviation: dev / peak,
                tolerance: SELF_CHECK_TOL,
            });
        }
    }
    Ok(WignerGrid {
        spec: *spec,
        extents: [
            [spec.x_range.0, spec.x_range.1],
            [spec.y_range.0, spec.y_range.1],
        ],
        values,
        metadata: GridMetadata {
            context: *ctx,
            chi: chi.clone(),
            lambda: lambda.clone(),
            method: GridMethod::GaussHermite {
                nodes_per_axis: rule.nodes_per_axis(),
            },
        },
    })
}

/// FFT path for a (P₁, P₂) noncommutative-momentum slice at fixed q_nc.
/// On the spatial lattice r_j = μ_snap + (j−N/2)h the phase e^{iαE·r} with
/// E = −p is exactly the DFT kernel once h·Δp = 2π/(|α|N), so one FFT per
/// axis evaluates all N momenta:
///
///   W(p_u) = C h² · e^{−iπN/2}(−1)^{u} e^{−iα(u−N/2)Δp·μ_snap}
///            · DFT[(−1)^{j} F(r_j) e^{−iα p_off·r_j}]_u     (per axis),
///
/// where F(r) = conj(λ)(r/2+T)χ(−r/2+T). The step h is chosen so the
/// Nyquist band covers the requested momenta plus a Gaussian alias margin;
/// the lattice must still span the envelope ([`NcError::QuadratureUnderResolved`]
/// otherwise). By construction the column sums reproduce the marginal
/// identity Δp²·Σ_u W(p_u) = 2π/(|α|√|Δ|)·conj(λ)(T)χ(T) exactly (in
/// exact arithmetic) whenever r = 0 lies on the lattice.
fn fft_grid(
    chi: &HermiteState,
    lambda: &HermiteState,
    spec: &SliceSpec,
    ctx: &OrbitContext,
) -> Result<WignerGrid> {
    let n = spec.resolution;
    let nf = n as f64;
    let half_n = (n / 2) as f64;
    let alpha = ctx.consts.alpha;
    let coeff = kernel_constant(ctx);
    let t = [
        -spec.fixed[0] / ctx.orbit.rho,
        -spec.fixed[1] / ctx.orbit.rho,
    ];
    let p_lam = (lambda.scale * 0.5) * (lambda.scale * 0.5);
    let p_chi = (chi.scale * 0.5) * (chi.scale * 0.5);
    let psum = p_lam + p_chi;
    let abar = (0.5 * psum).sqrt();
    let mu = [0, 1].map(|ax| {
        (p_lam * 2.0 * (lambda.center[ax] - t[ax]) - p_chi * 2.0 * (chi.center[ax] - t[ax])) / psum
    });
    let p_off = [
        0.5 * (spec.x_range.0 + spec.x_range.1),
        0.5 * (spec.y_range.0 + spec.y_range.1),
    ];
    let p_half = (0.5 * (spec.x_range.1 - spec.x_range.0))
        .max(0.5 * (spec.y_range.1 - spec.y_range.0));
    let h = std::f64::consts::PI / (alpha.abs() * p_half + FFT_ALIAS_MARGIN * abar);
    let span = nf * h;
    if span < FFT_MIN_SPAN / abar {
        return Err(NcError::QuadratureUnderResolved {
            what: "fft spatial coverage",
            deviation: (FFT_MIN_SPAN / abar) / span,
            tolerance: 1.0,
        });
    }
    let mu_snap = [h * (mu[0] / h).round(), h * (mu[1] / h).round()];
    let delta_p = 2.0 * std::f64::consts::PI / (alpha.abs() * h * nf);
    let r_axis = |ax: usize| -> Vec<f64> {
        (0..n).map(|j| mu_snap[ax] + (j as f64 - half_n) * h).collect()
    };
    let r1 = r_axis(0);
    let r2 = r_axis(1);
    let lam_grid = lambda.evaluate_grid(
        &r1.iter().map(|&r| 0.5 * r + t[0]).collect::<Vec<_>>(),
        &r2.iter().map(|&r| 0.5 * r + t[1]).collect::<Vec<_>>(),
    );
    let chi_grid = chi.evaluate_grid(
        &r1.iter().map(|&r| -0.5 * r + t[0]).collect::<Vec<_>>(),
        &r2.iter().map(|&r| -0.5 * r + t[1]).collect::<Vec<_>>(),
    );
    let pre_axis = |rs: &[f64], ax: usize| -> Vec<Complex64> {
        rs.iter()
            .enumerate()
            .map(|(j, &r)| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::from_polar(sign, -alpha * p_off[ax] * r)
            })
            .collect()
    };
    let pre1 = pre_axis(&r1, 0);
    let pre2 = pre_axis(&r2, 1);
    let mut data: Vec<Complex64> = Vec::with_capacity(n * n);
    for j1 in 0..n {
        for j2 in 0..n {
            data.push(lam_grid[j1][j2].conj() * chi_grid[j1][j2] * pre1[j1] * pre2[j2]);
        }
    }
    // 2D FFT: all rows in one pass, transpose, all rows again, transpose.
    let fft = FftPlanner::new().plan_fft_forward(n);
    fft.process(&mut data);
    let mut transposed = vec![Complex64::default(); n * n];
    for j1 in 0..n {
        for j2 in 0..n {
            transposed[j2 * n + j1] = data[j1 * n + j2];
        }
    }
    fft.process(&mut transposed);
    for j1 in 0..n {
        for j2 in 0..n {
            data[j1 * n + j2] = transposed[j2 * n + j1];
        }
    }
    let twiddle = Complex64::from_polar(1.0, -std::f64::consts::PI * nf / 2.0);
    let post_axis = |ax: usize| -> Vec<Complex64> {
        (0..n)
            .map(|u| {
                let sign = if u % 2 == 0 { 1.0 } else { -1.0 };
                twiddle
                    * Complex64::from_polar(
                        sign,
                        -alpha * (u as f64 - half_n) * delta_p * mu_snap[ax],
                    )
            })
            .collect()
    };
    let post1 = post_axis(0);
    let post2 = post_axis(1);
    let scale = coeff * h * h;
    let values: Vec<Vec<Complex64>> = (0..n)
        .map(|u1| {
            (0..n)
                .map(|u2| data[u1 * n + u2] * post1[u1] * post2[u2] * scale)
                .collect()
        })
        .collect();
    let extents = [0, 1].map(|ax| {
        [
            p_off[ax] - half_n * delta_p,
            p_off[ax] + (nf - 1.0 - half_n) * delta_p,
        ]
    });
    Ok(WignerGrid {
        spec: *spec,
        extents,
        values,
        metadata: GridMetadata {
            context: *ctx,
            chi: chi.clone(),
            lambda: lambda.clone(),
            method: GridMethod::Fft(FftLattice {
                h,
                mu_snap,
                p_offset: p_off,
                delta_p,
            }),
        },
    })
}

/// Distance between the noncommutative and standard Wigner transforms of
/// |χ⟩⟨χ| as the deformation is switched off: for each ε the orbit labels
/// σ and τ are replaced by ε (ρ, the constants, and the gauge come from
/// `ctx_template`; its own σ, τ are ignored), and both transforms are
/// compared over the fixed 3⁴ lattice {−1, 0, 1}⁴ after matching
/// coordinates (x = −(k₁*,k₂*)/ρ, p = −(k₃*,k₄*)/ρ, ħ = 1/(ρα) — the
/// ε → 0 limit of the coordinate map) and normalizing each side by its
/// value at χ's own phase-space peak (x, p) = (s_χ, ħc_χ). Returns the sup
/// distance per ε, in the order given.
pub fn commutative_limit_scan(
    chi: &HermiteState,
    ctx_template: &OrbitContext,
    epsilons: &[f64],
) -> Result<Vec<f64>> {
    if epsilons.is_empty() {
        return Err(NcError::InvalidInput(
            "commutative limit scan needs at least one ε".into(),
        ));
    }
    let rule = QuadratureRule::gauss_hermite(DEFAULT_GH_NODES)?;
    let k1 = ctx_template.orbit.rho;
    let alpha = ctx_template.consts.alpha;
    let hbar = 1.0 / (k1 * alpha);
    let x_peak = chi.center;
    let p_peak = [hbar * chi.linear_phase[0], hbar * chi.linear_phase[1]];
    let nc_peak = NCCoordinates {
        q_nc: [-k1 * x_peak[0], -k1 * x_peak[1]],
        p_nc: [-k1 * p_peak[0], -k1 * p_peak[1]],
    };
    let w_st_peak = standard_wigner(chi, x_peak, p_peak, hbar, rule)?;
    let st_scale = psi_peak_scale(chi, hbar);
    if w_st_peak.norm() < 1e-9 * st_scale {
        return Err(NcError::InvalidInput(
            "state has no usable calibration peak at (s, ħc); normalize against a different state"
                .into(),
        ));
    }
    let coords = [-1.0, 0.0, 1.0];
    let mut out = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let ctx_e = validate_context(
            ctx_template.consts,
            OrbitLabel {
                rho: k1,
                sigma: eps,
                tau: eps,
            },
            ctx_template.gauge,
        )?;
        let k_peak = nc_coordinates_inverse(&nc_peak, &ctx_e)?;
        let w_nc_peak = wigner_point(chi, chi, &k_peak, &ctx_e, rule)?;
        if w_nc_peak.norm() < 1e-9 * peak_scale(chi, chi, kernel_constant(&ctx_e)) {
            return Err(NcError::InvalidInput(
                "state has no usable calibration peak on the deformed side".into(),
            ));
        }
        let mut sup = 0.0f64;
        for &s1 in &coords {
            for &s2 in &coords {
                for &s3 in &coords {
                    for &s4 in &coords {
                        let k = PhaseSpacePoint::new(s1, s2, s3, s4);
                        let w_nc = wigner_point(chi, chi, &k, &ctx_e, rule)? / w_nc_peak;
                        let w_st = standard_wigner(
                            chi,
                            [-s1 / k1, -s2 / k1],
                            [-s3 / k1, -s4 / k1],
                            hbar,
                            rule,
                        )? / w_st_peak;
                        sup = sup.max((w_nc - w_st).norm());
                    }
                }
            }
        }
        out.push(sup);
    }
    Ok(out)
}

/// Peak bound (πħ)⁻²‖ψ‖² of the standard transform.
fn psi_peak_scale(psi: &HermiteState, hbar: f64) -> f64 {
    psi.norm_sq() / (std::f64::consts::PI * hbar).powi(2)
}
