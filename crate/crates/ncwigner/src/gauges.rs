//! Gauge geometry: the vector potential hidden inside the momentum
//! operators, its curl, and the deformed field strength B̄.
//!
//! Each momentum operator splits as P̂ᵢ = (pure derivative) − Âᵢ where Âᵢ is
//! a multiple of the complementary-axis position operator:
//!
//!   Â₁ = −τγρα(1−l)/D_l · Q̂₂,    Â₂ = −lτγ/(ρα) · Q̂₁.
//!
//! The curl ∂₁A₂ − ∂₂A₁ of the position parts recovers a magnetic field.
//! In the Landau-type gauge (l, m) = (1, 0) the potential is exactly
//! (0, B·r₁) with B = −τγ/(ρα); in the symmetric gauge (l_s, 1/2) the two
//! components carry equal and opposite coefficients whose curl matches the
//! deformed field B̄ = (2ħ/ϑ)(√(1 − Bϑ/ħ) − 1) in magnitude.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::OrbitContext;
use crate::representation::{build_operator, LinearFirstOrderOperator, OperatorKind};
use crate::{NcError, Result};

/// Curl components must be real to this absolute tolerance.
const CURL_IMAG_TOL: f64 = 1e-12;

/// The two components of the gauge potential, each a first-order operator.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VectorPotential {
    pub a1: LinearFirstOrderOperator,
    pub a2: LinearFirstOrderOperator,
}

/// The vector potential the context's momenta minimally couple to:
/// A = (−τγρα(1−l)/D_l · Q̂₂, −lτγ/(ρα) · Q̂₁).
pub fn vector_potential(ctx: &OrbitContext) -> VectorPotential {
    let (ra, tg) = (ctx.ra(), ctx.tg());
    let l = ctx.gauge.l;
    let dl = ctx.d_l();
    VectorPotential {
        a1: build_operator(OperatorKind::Q2, ctx)
            .scaled(Complex64::new(-tg * ra * (1.0 - l) / dl, 0.0)),
        a2: build_operator(OperatorKind::Q1, ctx).scaled(Complex64::new(-l * tg / ra, 0.0)),
    }
}

/// ∂₁A₂ − ∂₂A₁ read off the position parts of the potential: the r₁
/// coefficient of A₂ minus the r₂ coefficient of A₁. Fails with
/// [`NcError::NonRealCurl`] if those coefficients carry an imaginary part —
/// a magnetic field must be real.
pub fn curl(a: &VectorPotential) -> Result<f64> {
    let value = a.a2.c1 - a.a1.c2;
    if value.im.abs() > CURL_IMAG_TOL {
        return Err(NcError::NonRealCurl { imag: value.im });
    }
    Ok(value.re)
}

/// Deformed field strength B̄ = (2ħ/ϑ)(√(1 − Bϑ/ħ) − 1) from raw physical
/// constants. The radicand must be nonnegative
/// ([`NcError::NegativeRadicand`] otherwise); ϑ = 0 returns the continuous
/// limit −B.
pub fn b_bar_from(hbar: f64, theta: f64, b: f64) -> Result<f64> {
    if hbar == 0.0 || !hbar.is_finite() || !theta.is_finite() || !b.is_finite() {
        return Err(NcError::InvalidInput(format!(
            "effective constants must be finite with ħ ≠ 0, got ħ = {hbar}, ϑ = {theta}, B = {b}"
        )));
    }
    if theta == 0.0 {
        return Ok(-b);
    }
    let radicand = 1.0 - b * theta / hbar;
    if radicand < 0.0 {
        return Err(NcError::NegativeRadicand { radicand });
    }
    Ok(2.0 * hbar / theta * (radicand.sqrt() - 1.0))
}

/// B̄ for the context's orbit. Same value as the optional field stored in
/// the context's physical constants; this form reports *why* it is absent
/// (the negative radicand) instead of returning `None`.
pub fn b_bar(ctx: &OrbitContext) -> Result<f64> {
    b_bar_from(ctx.phys.hbar, ctx.phys.theta_nc, ctx.phys.b_field)
}
