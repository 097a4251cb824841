//! Validated parameter bundles: deformation constants (α, β, γ), the orbit
//! label (ρ, σ, τ), the gauge pair (l, m), and the derived physical
//! constants ħ = 1/ρα, ϑ = −σβ/ρ²α², B = −τγ/ρα.
//!
//! A valid `OrbitContext` guarantees every denominator used downstream is
//! bounded away from zero: Δ = ρ²α² − σβγτ (the orbit sector condition) and
//! D_l = τγσβ·l − ρ²α² (the per-gauge denominator).

use serde::{Deserialize, Serialize};

use crate::{NcError, Result};

/// Relative threshold below which Δ or D_l counts as numerically zero.
const DEGENERACY_GUARD: f64 = 1e-12;

/// The three central-extension constants. Dimensionally [α] = 1/(p·q),
/// [β] = 1/p², [γ] = 1/q², but all arithmetic here is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationConstants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Coadjoint-orbit label (ρ, σ, τ); in the Wigner-transform sections the
/// same triple is written (k₁, k₂, k₃).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
}

/// Gauge parameters (l, m) selecting one representative of the unitary
/// equivalence class. (1, 0) is the Landau gauge; (l_s, 1/2) the symmetric
/// gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugePair {
    pub l: f64,
    pub m: f64,
}

/// Derived constants: ħ = 1/ρα, position noncommutativity ϑ = −σβ/ρ²α²,
/// effective magnetic field B = −τγ/ρα, and (when the radicand allows)
/// B̄ = (2ħ/ϑ)(√(1 − Bϑ/ħ) − 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub theta_nc: f64,
    pub b_field: f64,
    /// Present only when 1 − Bϑ/ħ ≥ 0.
    pub b_bar: Option<f64>,
}

/// The single validated source of truth consumed by every formula in the
/// crate. Immutable after construction; cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitContext {
    pub consts: DeformationConstants,
    pub orbit: OrbitLabel,
    pub gauge: GaugePair,
    pub phys: PhysicalConstants,
    /// Δ = ρ²α² − σβγτ.
    pub delta: f64,
}

impl OrbitContext {
    /// ρα — the product that plays the role of 1/ħ everywhere.
    pub fn ra(&self) -> f64 {
        self.orbit.rho * self.consts.alpha
    }

    /// σβ.
    pub fn sb(&self) -> f64 {
        self.orbit.sigma * self.consts.beta
    }

    /// τγ.
    pub fn tg(&self) -> f64 {
        self.orbit.tau * self.consts.gamma
    }

    /// Per-gauge denominator D_l = τγσβ·l − ρ²α². Nonzero by validation.
    pub fn d_l(&self) -> f64 {
        self.tg() * self.sb() * self.gauge.l - self.ra() * self.ra()
    }

    /// True when the two contexts describe the same orbit (α,β,γ,ρ,σ,τ all
    /// equal) and differ at most in the gauge pair.
    pub fn same_orbit(&self, other: &OrbitContext) -> bool {
        self.consts == other.consts && self.orbit == other.orbit
    }
}

fn require_nonzero(name: &'static str, value: f64) -> Result<()> {
    if value == 0.0 || !value.is_finite() {
        return Err(NcError::ZeroConstant { name, value });
    }
    Ok(())
}

/// Build a validated context. Checks run in a fixed order so the reported
/// error is deterministic: zero/non-finite constants first, then the orbit
/// sector condition Δ ≠ 0, then the gauge condition D_l ≠ 0. The gauge
/// check is last because the excluded l value ρ²α²/(γβστ) is only defined
/// on a nondegenerate orbit.
pub fn validate_context(
    consts: DeformationConstants,
    orbit: OrbitLabel,
    gauge: GaugePair,
) -> Result<OrbitContext> {
    require_nonzero("alpha", consts.alpha)?;
    require_nonzero("beta", consts.beta)?;
    require_nonzero("gamma", consts.gamma)?;
    require_nonzero("rho", orbit.rho)?;
    require_nonzero("sigma", orbit.sigma)?;
    require_nonzero("tau", orbit.tau)?;
    if !gauge.l.is_finite() || !gauge.m.is_finite() {
        return Err(NcError::InvalidInput(format!(
            "gauge pair must be finite, got l = {}, m = {}",
            gauge.l, gauge.m
        )));
    }

    let ra = orbit.rho * consts.alpha;
    let sb = orbit.sigma * consts.beta;
    let tg = orbit.tau * consts.gamma;
    let ra2 = ra * ra;
    let sbtg = sb * tg;
    let delta = ra2 - sbtg;
    if delta.abs() < DEGENERACY_GUARD * ra2.max(sbtg.abs()) {
        return Err(NcError::DegenerateOrbit { delta });
    }

    let d_l = sbtg * gauge.l - ra2;
    if d_l.abs() < DEGENERACY_GUARD * (sbtg * gauge.l).abs().max(ra2) {
        return Err(NcError::ForbiddenGauge { l: gauge.l });
    }

    let hbar = 1.0 / ra;
    let theta_nc = -sb / ra2;
    let b_field = -tg / ra;
    // 1 − Bϑ/ħ = Δ/ρ²α² algebraically; computed from the constants so the
    // stored value is exactly what b_bar() will see.
    let radicand = 1.0 - b_field * theta_nc / hbar;
    let b_bar = if radicand >= 0.0 {
        Some(2.0 * hbar / theta_nc * (radicand.sqrt() - 1.0))
    } else {
        None
    };

    Ok(OrbitContext {
        consts,
        orbit,
        gauge,
        phys: PhysicalConstants {
            hbar,
            theta_nc,
            b_field,
            b_bar,
        },
        delta,
    })
}

/// The symmetric-gauge value l_s = ρα(ρα − √(ρ²α² − γβστ))/(γβστ), to be
/// paired with m = 1/2. Requires Δ = ρ²α² − γβστ > 0 for a real root.
pub fn symmetric_gauge_l(consts: DeformationConstants, orbit: OrbitLabel) -> Result<f64> {
    require_nonzero("alpha", consts.alpha)?;
    require_nonzero("beta", consts.beta)?;
    require_nonzero("gamma", consts.gamma)?;
    require_nonzero("rho", orbit.rho)?;
    require_nonzero("sigma", orbit.sigma)?;
    require_nonzero("tau", orbit.tau)?;
    let ra = orbit.rho * consts.alpha;
    let sbtg = orbit.sigma * consts.beta * orbit.tau * consts.gamma;
    let delta = ra * ra - sbtg;
    if delta.abs() < DEGENERACY_GUARD * (ra * ra).max(sbtg.abs()) {
        return Err(NcError::DegenerateOrbit { delta });
    }
    if delta < 0.0 {
        return Err(NcError::NegativeDiscriminant { delta });
    }
    Ok(ra * (ra - delta.sqrt()) / sbtg)
}

/// The Landau gauge pair (l, m) = (1, 0).
pub fn landau_gauge() -> GaugePair {
    GaugePair { l: 1.0, m: 0.0 }
}
