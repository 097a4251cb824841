//! Numerical library for the kinematics of 2D noncommutative quantum
//! mechanics: the 7-parameter nilpotent group G_NC (a triple central
//! extension of the ℝ⁴ phase-space translations), its gauge-parametrized
//! unitary irreducible representations on L²(ℝ²), the associated operator
//! algebra Q̂ᵢ, P̂ᵢ with
//!
//!   [Q̂₁, P̂₁] = [Q̂₂, P̂₂] = i/(ρα),   [Q̂₁, Q̂₂] = −iσβ/ρ²α²,
//!   [P̂₁, P̂₂] = −iτγ/ρ²α²,
//!
//! vector potentials and their curls, a per-orbit Plancherel orthogonality
//! check, and the closed-form noncommutative Wigner transform over the
//! 4-dimensional coadjoint orbit with dual coordinates (k₁*, k₂*, k₃*, k₄*).
//!
//! All wavefunctions live in a phase-modulated, translated Hermite family
//! that is closed under every operation here, so integrals reduce to
//! Gauss–Hermite quadrature (or closed forms) without grid interpolation.

pub mod gauges;
pub mod group;
pub mod params;
pub mod plancherel;
pub mod quadrature;
pub mod representation;
pub mod states;
pub mod wigner;

use thiserror::Error;

/// Everything that can go wrong in this crate, from parameter validation
/// through quadrature self-checks.
#[derive(Debug, Error)]
pub enum NcError {
    /// One of α, β, γ, ρ, σ, τ is zero (or not finite); every formula
    /// divides by products of these.
    #[error("constant `{name}` must be nonzero and finite (got {value})")]
    ZeroConstant { name: &'static str, value: f64 },

    /// Δ = ρ²α² − σβγτ vanished (relative to the scale of its two terms);
    /// the orbit degenerates and all denominators collapse.
    #[error("degenerate orbit: Δ = ρ²α² − σβγτ = {delta:.3e} is zero at working precision")]
    DegenerateOrbit { delta: f64 },

    /// The gauge parameter l sits at the excluded value ρ²α²/(γβστ), where
    /// the per-gauge denominator D_l = τγσβ·l − ρ²α² vanishes.
    #[error("forbidden gauge: l = {l} makes D_l = τγσβ·l − ρ²α² vanish")]
    ForbiddenGauge { l: f64 },

    /// The symmetric-gauge l requires √(ρ²α² − γβστ); negative radicand has
    /// no real gauge value.
    #[error("negative discriminant: ρ²α² − γβστ = {delta:.6e} < 0 has no real square root")]
    NegativeDiscriminant { delta: f64 },

    /// B̄ requires √(1 − Bϑ/ħ) ≥ 0.
    #[error("negative radicand: 1 − Bϑ/ħ = {radicand:.6e} < 0")]
    NegativeRadicand { radicand: f64 },

    /// A coordinate multiplication or derivative would push the Hermite
    /// degree past the hard cap.
    #[error("degree overflow: operation needs degree {needed} > N_max = {max}")]
    DegreeOverflow { needed: usize, max: usize },

    /// A built-in two-resolution self-check disagreed beyond tolerance; the
    /// quadrature result cannot be trusted at the requested resolution.
    #[error("quadrature under-resolved: {what} self-check deviation {deviation:.3e} > {tolerance:.3e}")]
    QuadratureUnderResolved {
        what: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    /// Curl extraction found a non-negligible imaginary part; the potential
    /// components are not of the expected real-multiple form.
    #[error("non-real curl: imaginary part {imag:.3e} exceeds 1e-12")]
    NonRealCurl { imag: f64 },

    /// The two contexts of a covariance check disagree in (α,β,γ,ρ,σ,τ);
    /// their Wigner functions live on different orbits.
    #[error("context mismatch: {what} differ between the two contexts")]
    ContextMismatch { what: &'static str },

    /// The 4×4 dual-coordinate map is numerically singular.
    #[error("singular map: |det| = {det:.3e} below relative threshold")]
    SingularMap { det: f64 },

    /// Malformed state/config data coming in from files.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, NcError>;

pub use params::{
    landau_gauge, symmetric_gauge_l, validate_context, DeformationConstants, GaugePair,
    OrbitContext, OrbitLabel, PhysicalConstants,
};
pub use group::GroupElement;
pub use quadrature::QuadratureRule;
pub use states::{inner_product, inner_product_analytic, inner_product_unchecked, HermiteState, N_MAX};
pub use representation::{
    apply_linear_operator, apply_uir, build_operator, commutator_constant, uir_action,
    LinearFirstOrderOperator, OperatorKind, UirAction,
};
pub use gauges::{b_bar, b_bar_from, curl, vector_potential, VectorPotential};
pub use plancherel::{
    orthogonality_check, orthogonality_report, plancherel_data, OrthogonalityReport,
    PlancherelData,
};
pub use wigner::{
    commutative_limit_scan, gauge_covariance_check, nc_coordinates, nc_coordinates_inverse,
    standard_wigner, wigner_from_nc, wigner_grid, wigner_point, wigner_point_closed_form,
    FftLattice, GridMetadata, GridMethod, NCCoordinates, PhaseSpacePoint, SliceAxis, SliceSpec,
    WignerGrid, DEFAULT_GH_NODES,
};
