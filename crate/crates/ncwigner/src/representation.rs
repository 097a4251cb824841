//! The gauge-parametrized unitary irreducible representation U^{ρ,σ,τ}_{l,m}
//! on L²(ℝ²), its closed-form action on Hermite states, and the associated
//! first-order operator algebra.
//!
//! For g = (θ, φ, ψ, q, p) the action is
//!
//!   (U(g) f)(r) = e^{iΦ(g)} e^{i L(g)·r} f(r + u(g)),
//!
//! an r-independent phase, a linear phase, and an argument translation.
//! All three are explicit rational-coefficient functions of g below. A
//! phase-times-translation map sends the Hermite family to itself:
//!
//!   s ↦ s − u,   c ↦ c + L,   G ↦ G · e^{iΦ} · e^{i c·u},
//!
//! so representation acts are exact (coefficients untouched) — unitarity
//! holds to the last bit in coefficient norm.
//!
//! The composition identity behind the representation property is
//!   Φ(g·g′) = Φ(g) + Φ(g′) + L(g′)·u(g),  L and u additive.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::group::GroupElement;
use crate::params::OrbitContext;
use crate::states::{HermiteState, N_MAX};
use crate::{NcError, Result};

/// The (phase, linear phase, argument shift) triple of one U(g).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UirAction {
    /// e^{iΦ(g)}: every r-independent exponent term collected into one
    /// unit-modulus factor.
    pub scalar_phase: Complex64,
    /// L(g): added to the state's linear-phase vector c.
    pub linear_phase: [f64; 2],
    /// u(g): added to the function argument, f(r) ↦ f(r + u), i.e. the
    /// envelope center moves by −u.
    pub shift: [f64; 2],
}

/// Φ(g), L(g), u(g) with Φ kept as a raw angle (radians).
fn uir_data(g: &GroupElement, ctx: &OrbitContext) -> (f64, [f64; 2], [f64; 2]) {
    let (ra, sb, tg) = (ctx.ra(), ctx.sb(), ctx.tg());
    let (l, m) = (ctx.gauge.l, ctx.gauge.m);
    let dl = ctx.d_l();
    let (q1, q2) = (g.q[0], g.q[1]);
    let (p1, p2) = (g.p[0], g.p[1]);

    let phi = ctx.orbit.rho * g.theta
        + ctx.orbit.sigma * g.phi
        + ctx.orbit.tau * g.psi
        + (ra / 2.0 + ra * tg * sb * m * (1.0 - l) / dl) * p1 * q1
        + (ra / 2.0 - l * tg * sb * (1.0 - m) / ra) * p2 * q2
        + (m - 0.5) * sb * p1 * p2
        + (tg / 2.0 - tg * (1.0 - l) * (tg * sb * l - tg * sb * l * m - ra * ra) / dl) * q1 * q2;

    let lin = [
        ra * p1 + l * tg * q2,
        ra * p2 + ra * ra * tg * (1.0 - l) / dl * q1,
    ];
    let u = [
        -((1.0 - m) * sb / ra) * p2 + ((tg * sb * (l + m - l * m) - ra * ra) / dl) * q1,
        (m * sb / ra) * p1 - ((tg * sb * l * (1.0 - m) - ra * ra) / (ra * ra)) * q2,
    ];
    (phi, lin, u)
}

/// The action data of U(g) in the given orbit/gauge context.
pub fn uir_action(g: &GroupElement, ctx: &OrbitContext) -> UirAction {
    let (phi, linear_phase, shift) = uir_data(g, ctx);
    UirAction {
        scalar_phase: Complex64::from_polar(1.0, phi),
        linear_phase,
        shift,
    }
}

/// U(g) f as a new Hermite state; coefficients and scale are untouched, so
/// the coefficient norm (hence ‖U(g)f‖) is preserved exactly.
pub fn apply_uir(g: &GroupElement, f: &HermiteState, ctx: &OrbitContext) -> HermiteState {
    let (phi, lin, u) = uir_data(g, ctx);
    // e^{ic·r} f(r+u) picks up the constant e^{i c·u} when the phase is
    // re-anchored to the translated center.
    let extra = f.linear_phase[0] * u[0] + f.linear_phase[1] * u[1];
    HermiteState {
        coeffs: f.coeffs.clone(),
        scale: f.scale,
        center: [f.center[0] - u[0], f.center[1] - u[1]],
        linear_phase: [f.linear_phase[0] + lin[0], f.linear_phase[1] + lin[1]],
        global: f.global * Complex64::from_polar(1.0, phi + extra),
    }
}

/// Which representation operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Q1,
    Q2,
    P1,
    P2,
}

/// c₀ + c₁r₁ + c₂r₂ + d₁∂₁ + d₂∂₂ with complex coefficients. Closed under
/// commutators, which are scalars:
/// [L, L′] = (d₁c₁′ − c₁d₁′) + (d₂c₂′ − c₂d₂′).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LinearFirstOrderOperator {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl LinearFirstOrderOperator {
    pub fn identity() -> Self {
        LinearFirstOrderOperator {
            c0: Complex64::new(1.0, 0.0),
            ..Default::default()
        }
    }

    /// The same operator scaled by a complex factor.
    pub fn scaled(&self, z: Complex64) -> Self {
        LinearFirstOrderOperator {
            c0: self.c0 * z,
            c1: self.c1 * z,
            c2: self.c2 * z,
            d1: self.d1 * z,
            d2: self.d2 * z,
        }
    }

    /// Coefficient-wise sum of two operators.
    pub fn plus(&self, other: &Self) -> Self {
        LinearFirstOrderOperator {
            c0: self.c0 + other.c0,
            c1: self.c1 + other.c1,
            c2: self.c2 + other.c2,
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
        }
    }
}

/// The gauge-parametrized position/momentum operators:
///   Q̂₁ = r₁ − i m σβ/(ρ²α²) ∂₂
///   Q̂₂ = r₂ + i (1−m) σβ/(ρ²α²) ∂₁
///   P̂₁ = τγρα(1−l)/D_l · r₂ − (i/ρα)(τγσβ(l+m−lm) − ρ²α²)/D_l · ∂₁
///   P̂₂ = lτγ/(ρα) · r₁ + i(τγσβl(1−m) − ρ²α²)/(ρα)³ · ∂₂
/// with D_l = τγσβ·l − ρ²α².
pub fn build_operator(which: OperatorKind, ctx: &OrbitContext) -> LinearFirstOrderOperator {
    let (ra, sb, tg) = (ctx.ra(), ctx.sb(), ctx.tg());
    let (l, m) = (ctx.gauge.l, ctx.gauge.m);
    let dl = ctx.d_l();
    let ra2 = ra * ra;
    let mut op = LinearFirstOrderOperator::default();
    match which {
        OperatorKind::Q1 => {
            op.c1 = Complex64::new(1.0, 0.0);
            op.d2 = Complex64::new(0.0, -m * sb / ra2);
        }
        OperatorKind::Q2 => {
            op.c2 = Complex64::new(1.0, 0.0);
            op.d1 = Complex64::new(0.0, (1.0 - m) * sb / ra2);
        }
        OperatorKind::P1 => {
            op.c2 = Complex64::new(tg * ra * (1.0 - l) / dl, 0.0);
            op.d1 = Complex64::new(0.0, -(tg * sb * (l + m - l * m) - ra2) / (ra * dl));
        }
        OperatorKind::P2 => {
            op.c1 = Complex64::new(l * tg / ra, 0.0);
            op.d2 = Complex64::new(0.0, (tg * sb * l * (1.0 - m) - ra2) / (ra2 * ra));
        }
    }
    op
}

/// The scalar [A, B]; exact in terms of the stored coefficients.
pub fn commutator_constant(
    a: &LinearFirstOrderOperator,
    b: &LinearFirstOrderOperator,
) -> Complex64 {
    (a.d1 * b.c1 - a.c1 * b.d1) + (a.d2 * b.c2 - a.c2 * b.d2)
}

/// Apply c₀ + c₁r₁ + c₂r₂ + d₁∂₁ + d₂∂₂ exactly within the Hermite family.
///
/// Per axis, with basis e_n(r) = √a·h_n(a(r−s)):
///   r e_n = s e_n + (1/a)(√((n+1)/2) e_{n+1} + √(n/2) e_{n−1}),
///   ∂e_n = a(√(n/2) e_{n−1} − √((n+1)/2) e_{n+1}),
/// and the linear phase contributes ∂(e^{icr}F) = e^{icr}(ic F + ∂F).
/// Multiplication and differentiation each raise the degree by one.
pub fn apply_linear_operator(
    op: &LinearFirstOrderOperator,
    f: &HermiteState,
) -> Result<HermiteState> {
    let zero = Complex64::new(0.0, 0.0);
    let (rows, cols) = f.dims();
    let grow1 = op.c1 != zero || op.d1 != zero;
    let grow2 = op.c2 != zero || op.d2 != zero;
    if grow1 && rows + 1 > N_MAX + 1 {
        return Err(NcError::DegreeOverflow {
            needed: rows,
            max: N_MAX,
        });
    }
    if grow2 && cols + 1 > N_MAX + 1 {
        return Err(NcError::DegreeOverflow {
            needed: cols,
            max: N_MAX,
        });
    }
    let out_rows = rows + usize::from(grow1);
    let out_cols = cols + usize::from(grow2);
    let a = f.scale;
    let i = Complex64::new(0.0, 1.0);
    // All r-independent pieces: the scalar, the centers hit by r₁/r₂, and
    // the phase derivative terms (ic₁, ic₂ from the modulation).
    let scalar = op.c0
        + op.c1 * f.center[0]
        + op.c2 * f.center[1]
        + op.d1 * i * f.linear_phase[0]
        + op.d2 * i * f.linear_phase[1];
    let up1 = op.c1 / a - op.d1 * a;
    let down1 = op.c1 / a + op.d1 * a;
    let up2 = op.c2 / a - op.d2 * a;
    let down2 = op.c2 / a + op.d2 * a;

    let mut out = vec![vec![zero; out_cols]; out_rows];
    for n1 in 0..rows {
        for n2 in 0..cols {
            let z = f.coeffs[n1][n2];
            if z == zero {
                continue;
            }
            out[n1][n2] += scalar * z;
            if grow1 {
                out[n1 + 1][n2] += up1 * ((n1 as f64 + 1.0) / 2.0).sqrt() * z;
                if n1 > 0 {
                    out[n1 - 1][n2] += down1 * (n1 as f64 / 2.0).sqrt() * z;
                }
            }
            if grow2 {
                out[n1][n2 + 1] += up2 * ((n2 as f64 + 1.0) / 2.0).sqrt() * z;
                if n2 > 0 {
                    out[n1][n2 - 1] += down2 * (n2 as f64 / 2.0).sqrt() * z;
                }
            }
        }
    }
    HermiteState::new(out, f.scale, f.center, f.linear_phase, f.global)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{landau_gauge, validate_context, DeformationConstants, GaugePair, OrbitLabel};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ctx_landau() -> OrbitContext {
        validate_context(
            DeformationConstants {
                alpha: 1.0,
                beta: 1.0,
                gamma: 1.0,
            },
            OrbitLabel {
                rho: 2.0,
                sigma: 1.0,
                tau: 1.0,
            },
            landau_gauge(),
        )
        .unwrap()
    }

    fn ctx_strategy() -> impl Strategy<Value = OrbitContext> {
        (
            0.5f64..2.0,
            0.5f64..2.0,
            0.5f64..2.0,
            0.5f64..2.0,
            0.5f64..2.0,
            0.5f64..2.0,
            -2.0f64..2.0,
            -2.0f64..2.0,
            prop::bool::ANY,
            prop::bool::ANY,
        )
            .prop_filter_map("valid context", |(a, b, g, r, s, t, l, m, fb, fg)| {
                let consts = DeformationConstants {
                    alpha: a,
                    beta: if fb { -b } else { b },
                    gamma: if fg { -g } else { g },
                };
                let orbit = OrbitLabel {
                    rho: r,
                    sigma: s,
                    tau: t,
                };
                let ctx = validate_context(consts, orbit, GaugePair { l, m }).ok()?;
                // keep clear of near-degenerate denominators for tight bounds
                (ctx.delta.abs() > 0.1 && ctx.d_l().abs() > 0.1).then_some(ctx)
            })
    }

    fn element_strategy() -> impl Strategy<Value = GroupElement> {
        let c = || -2.0f64..2.0;
        (c(), c(), c(), c(), c(), c(), c()).prop_map(|(th, ph, ps, q1, q2, p1, p2)| GroupElement {
            theta: th,
            phi: ph,
            psi: ps,
            q: [q1, q2],
            p: [p1, p2],
        })
    }

    #[test]
    fn identity_acts_trivially() {
        let ctx = ctx_landau();
        let act = uir_action(&GroupElement::identity(), &ctx);
        assert_eq!(act.scalar_phase, Complex64::new(1.0, 0.0));
        assert_eq!(act.linear_phase, [0.0, 0.0]);
        assert_eq!(act.shift, [0.0, 0.0]);
        let f = HermiteState::basis(1, 2, 1.0, [0.3, -0.1], [0.2, 0.7]).unwrap();
        assert_eq!(apply_uir(&GroupElement::identity(), &f, &ctx), f);
    }

    #[test]
    fn central_character_at_half_pi() {
        // θ = π/2 with ρ = 2: the central character evaluates to −1.
        let ctx = ctx_landau();
        let act = uir_action(
            &GroupElement::central(std::f64::consts::FRAC_PI_2, 0.0, 0.0),
            &ctx,
        );
        assert_abs_diff_eq!(act.scalar_phase.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(act.scalar_phase.im, 0.0, epsilon = 1e-15);
        assert_eq!(act.shift, [0.0, 0.0]);
        assert_eq!(act.linear_phase, [0.0, 0.0]);
    }

    #[test]
    fn landau_momentum_boost_has_pure_linear_phase() {
        // g = (0,0,0,(0,0),(1,0)) in the Landau gauge: no shift, L = (ρα, 0).
        let ctx = ctx_landau();
        let act = uir_action(&GroupElement::translation([0.0, 0.0], [1.0, 0.0]), &ctx);
        assert_eq!(act.shift, [0.0, 0.0]);
        assert_eq!(act.linear_phase, [2.0, 0.0]);
    }

    #[test]
    fn transport_matches_pointwise_formula() {
        // apply_uir must agree with e^{iΦ}e^{iL·r} f(r+u) at random points.
        let f = HermiteState::new(
            vec![
                vec![Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.4)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.9, -0.3)],
            ],
            1.2,
            [0.3, -0.4],
            [0.8, 0.5],
            Complex64::new(0.7, -0.2),
        )
        .unwrap();
        proptest!(ProptestConfig::with_cases(24), |(
            ctx in ctx_strategy(), g in element_strategy(),
            x in -1.5f64..1.5, y in -1.5f64..1.5,
        )| {
            let moved = apply_uir(&g, &f, &ctx);
            let act = uir_action(&g, &ctx);
            let r = [x, y];
            let direct = act.scalar_phase
                * Complex64::from_polar(1.0, act.linear_phase[0] * x + act.linear_phase[1] * y)
                * f.evaluate_one([x + act.shift[0], y + act.shift[1]]);
            prop_assert!((moved.evaluate_one(r) - direct).norm() < 1e-12);
        });
    }

    #[test]
    fn unitarity_is_exact_in_coefficient_norm() {
        let ctx = ctx_landau();
        let f = HermiteState::new(
            vec![
                vec![Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.4)],
                vec![Complex64::new(0.3, 0.0), Complex64::new(0.9, -0.3)],
            ],
            1.0,
            [0.0, 0.0],
            [0.0, 0.0],
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let g = GroupElement {
            theta: 0.4,
            phi: -1.1,
            psi: 0.3,
            q: [1.2, -0.5],
            p: [0.8, 2.0],
        };
        let uf = apply_uir(&g, &f, &ctx);
        assert_abs_diff_eq!(uf.norm_sq(), f.norm_sq(), epsilon = 1e-15 * f.norm_sq());
    }

    #[test]
    fn representation_property_pointwise() {
        let f = HermiteState::new(
            vec![
                vec![Complex64::new(0.5, -0.3)],
                vec![Complex64::new(0.2, 0.8)],
            ],
            1.0,
            [0.1, 0.2],
            [-0.4, 0.6],
            Complex64::new(0.9, 0.3),
        )
        .unwrap();
        proptest!(ProptestConfig::with_cases(20), |(
            ctx in ctx_strategy(),
            g in element_strategy(), gp in element_strategy(),
            x in -1.5f64..1.5, y in -1.5f64..1.5,
        )| {
            let two_step = apply_uir(&g, &apply_uir(&gp, &f, &ctx), &ctx);
            let product = g.multiply(&gp, &ctx.consts);
            let one_step = apply_uir(&product, &f, &ctx);
            let d = (two_step.evaluate_one([x, y]) - one_step.evaluate_one([x, y])).norm();
            prop_assert!(d < 1e-12, "pointwise deviation {d}");
        });
    }

    #[test]
    fn action_composition_law() {
        // Φ(g·g′) = Φ(g) + Φ(g′) + L(g′)·u(g); L and u add.
        proptest!(ProptestConfig::with_cases(40), |(
            ctx in ctx_strategy(),
            g in element_strategy(), gp in element_strategy(),
        )| {
            let a = uir_action(&g, &ctx);
            let b = uir_action(&gp, &ctx);
            let ab = uir_action(&g.multiply(&gp, &ctx.consts), &ctx);
            let cross = b.linear_phase[0] * a.shift[0] + b.linear_phase[1] * a.shift[1];
            let composed = a.scalar_phase * b.scalar_phase * Complex64::from_polar(1.0, cross);
            prop_assert!((composed - ab.scalar_phase).norm() < 1e-12);
            for i in 0..2 {
                prop_assert!((a.linear_phase[i] + b.linear_phase[i] - ab.linear_phase[i]).abs() < 1e-12);
                prop_assert!((a.shift[i] + b.shift[i] - ab.shift[i]).abs() < 1e-12);
            }
        });
    }

    #[test]
    fn landau_operators_match_closed_forms() {
        let ctx = ctx_landau();
        let q1 = build_operator(OperatorKind::Q1, &ctx);
        assert_eq!(q1.c1, Complex64::new(1.0, 0.0));
        assert_eq!(q1.c0, Complex64::new(0.0, 0.0));
        assert_eq!(q1.c2, Complex64::new(0.0, 0.0));
        assert_eq!(q1.d1, Complex64::new(0.0, 0.0));
        assert_eq!(q1.d2, Complex64::new(0.0, 0.0));

        // P̂₂ = (τγ/ρα) r₁ + i(τγσβ − ρ²α²)/(ρα)³ ∂₂ = r₁/2 − (3i/8)∂₂ here.
        let p2 = build_operator(OperatorKind::P2, &ctx);
        assert_abs_diff_eq!(p2.c1.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p2.d2.im, -0.375, epsilon = 1e-15);
        assert_eq!(p2.c2, Complex64::new(0.0, 0.0));

        // P̂₁ in Landau gauge is a pure derivative −(i/ρα)∂₁.
        let p1 = build_operator(OperatorKind::P1, &ctx);
        assert_eq!(p1.c2, Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(p1.d1.im, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_gauge_q1_has_half_derivative_term() {
        let consts = DeformationConstants {
            alpha: 1.0,
            beta: 1.0,
            gamma: 0.75,
        };
        let orbit = OrbitLabel {
            rho: 1.0,
            sigma: 1.0,
            tau: 1.0,
        };
        let ls = crate::params::symmetric_gauge_l(consts, orbit).unwrap();
        let ctx = validate_context(consts, orbit, GaugePair { l: ls, m: 0.5 }).unwrap();
        let q1 = build_operator(OperatorKind::Q1, &ctx);
        // d₂ = −i σβ/(2ρ²α²) = −i/2 for these constants.
        assert_abs_diff_eq!(q1.d2.im, -0.5, epsilon = 1e-15);
        assert_eq!(q1.c1, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn commutator_table_over_random_gauges() {
        proptest!(ProptestConfig::with_cases(40), |(ctx in ctx_strategy())| {
            let q1 = build_operator(OperatorKind::Q1, &ctx);
            let q2 = build_operator(OperatorKind::Q2, &ctx);
            let p1 = build_operator(OperatorKind::P1, &ctx);
            let p2 = build_operator(OperatorKind::P2, &ctx);
            let i = Complex64::new(0.0, 1.0);
            let ra = ctx.ra();
            let checks = [
                (commutator_constant(&q1, &p1), i / ra),
                (commutator_constant(&q2, &p2), i / ra),
                (commutator_constant(&q1, &q2), -i * ctx.sb() / (ra * ra)),
                (commutator_constant(&p1, &p2), -i * ctx.tg() / (ra * ra)),
                (commutator_constant(&q1, &p2), Complex64::new(0.0, 0.0)),
                (commutator_constant(&q2, &p1), Complex64::new(0.0, 0.0)),
            ];
            for (got, want) in checks {
                prop_assert!((got - want).norm() < 1e-12, "got {got}, want {want}");
            }
        });
    }

    #[test]
    fn momentum_rearranges_through_complementary_position() {
        // P̂₁ = τγρα(1−l)/D_l · Q̂₂ − (i/ρα)(τγσβ(1−l)/D_l + 1) ∂₁
        // P̂₂ = lτγ/ρα · Q̂₁ − (i/ρα)(1 − lτγσβ/ρ²α²) ∂₂
        // each momentum is the complementary-axis position operator plus a
        // pure derivative, with gauge-dependent scalar weights.
        proptest!(ProptestConfig::with_cases(40), |(ctx in ctx_strategy())| {
            let (ra, sb, tg) = (ctx.ra(), ctx.sb(), ctx.tg());
            let (l, dl) = (ctx.gauge.l, ctx.d_l());
            let i = Complex64::new(0.0, 1.0);
            let del1 = LinearFirstOrderOperator {
                d1: Complex64::new(1.0, 0.0),
                ..Default::default()
            };
            let del2 = LinearFirstOrderOperator {
                d2: Complex64::new(1.0, 0.0),
                ..Default::default()
            };
            let p1_alt = build_operator(OperatorKind::Q2, &ctx)
                .scaled(Complex64::new(tg * ra * (1.0 - l) / dl, 0.0))
                .plus(&del1.scaled(-i / ra * (tg * sb * (1.0 - l) / dl + 1.0)));
            let p2_alt = build_operator(OperatorKind::Q1, &ctx)
                .scaled(Complex64::new(l * tg / ra, 0.0))
                .plus(&del2.scaled(-i / ra * (1.0 - l * tg * sb / (ra * ra))));
            for (alt, kind) in [(p1_alt, OperatorKind::P1), (p2_alt, OperatorKind::P2)] {
                let direct = build_operator(kind, &ctx);
                for (got, want) in [
                    (alt.c0, direct.c0),
                    (alt.c1, direct.c1),
                    (alt.c2, direct.c2),
                    (alt.d1, direct.d1),
                    (alt.d2, direct.d2),
                ] {
                    prop_assert!(
                        (got - want).norm() <= 1e-13 * (1.0 + want.norm()),
                        "got {got}, want {want}"
                    );
                }
            }
        });
    }

    #[test]
    fn coordinate_ladder_on_ground_state() {
        // r₁ ψ₀₀ = (1/√2) ψ₁₀ for a = 1, s = c = 0.
        let f = HermiteState::ground(1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let op = LinearFirstOrderOperator {
            c1: Complex64::new(1.0, 0.0),
            ..Default::default()
        };
        let rf = apply_linear_operator(&op, &f).unwrap();
        assert_eq!(rf.dims(), (2, 1));
        assert!((rf.coeffs[0][0]).norm() < 1e-16);
        assert_abs_diff_eq!(rf.coeffs[1][0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn derivative_vanishes_at_even_center() {
        let f = HermiteState::ground(1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let op = LinearFirstOrderOperator {
            d1: Complex64::new(1.0, 0.0),
            ..Default::default()
        };
        let df = apply_linear_operator(&op, &f).unwrap();
        assert!(df.evaluate_one([0.0, 0.0]).norm() < 1e-16);
    }

    #[test]
    fn identity_operator_is_identity() {
        let f = HermiteState::basis(2, 1, 1.3, [0.4, -0.2], [0.6, 0.9]).unwrap();
        let idf = apply_linear_operator(&LinearFirstOrderOperator::identity(), &f).unwrap();
        assert_eq!(idf, f);
    }

    #[test]
    fn degree_overflow_on_full_matrix() {
        let f = HermiteState::basis(N_MAX, 0, 1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let op = LinearFirstOrderOperator {
            c1: Complex64::new(1.0, 0.0),
            ..Default::default()
        };
        assert!(matches!(
            apply_linear_operator(&op, &f),
            Err(NcError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn operator_action_matches_finite_differences() {
        // (c₁r₁ + d₂∂₂)-type operators against centered differences of the
        // pointwise evaluation: O(h²) differencing at h = 1e−4.
        let f = HermiteState::new(
            vec![
                vec![Complex64::new(0.5, -0.1), Complex64::new(0.2, 0.3)],
                vec![Complex64::new(-0.4, 0.6), Complex64::new(0.1, 0.1)],
            ],
            1.1,
            [0.2, -0.3],
            [0.7, -0.5],
            Complex64::new(0.8, 0.1),
        )
        .unwrap();
        let op = LinearFirstOrderOperator {
            c0: Complex64::new(0.3, -0.2),
            c1: Complex64::new(1.0, 0.5),
            c2: Complex64::new(-0.7, 0.0),
            d1: Complex64::new(0.0, 0.9),
            d2: Complex64::new(0.4, -0.6),
        };
        let lf = apply_linear_operator(&op, &f).unwrap();
        let h = 1e-4;
        for r in [[0.0, 0.0], [0.7, -0.4], [-1.1, 0.5]] {
            let d1 = (f.evaluate_one([r[0] + h, r[1]]) - f.evaluate_one([r[0] - h, r[1]]))
                / (2.0 * h);
            let d2 = (f.evaluate_one([r[0], r[1] + h]) - f.evaluate_one([r[0], r[1] - h]))
                / (2.0 * h);
            let v = f.evaluate_one(r);
            let expect = op.c0 * v + op.c1 * r[0] * v + op.c2 * r[1] * v + op.d1 * d1 + op.d2 * d2;
            assert!((lf.evaluate_one(r) - expect).norm() < 1e-6);
        }
    }
}
