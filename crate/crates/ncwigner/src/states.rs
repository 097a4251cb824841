//! L²(ℝ²) wavefunctions as phase-modulated, translated Hermite expansions:
//!
//!   f(r) = G · e^{i c·r} · Σ_{n₁,n₂} A[n₁][n₂] e_{n₁}(r₁) e_{n₂}(r₂),
//!   e_n(rᵢ) = √a · h_n(a(rᵢ − sᵢ)),
//!
//! with h_n the orthonormal 1D Hermite functions (Gaussian envelope
//! included). The √a per axis keeps the translated, modulated basis
//! orthonormal in L²(dr), so ‖f‖² = |G|²·Σ|A|² exactly — Parseval without
//! any quadrature. Phase-times-translation maps (the whole representation
//! action) keep the family closed, so nothing here ever touches a grid.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::{hermite_functions, KahanSum, QuadratureRule};
use crate::{NcError, Result};

/// Maximum Hermite degree per axis. Raising degree past this is a
/// `DegreeOverflow`, not silent truncation.
pub const N_MAX: usize = 32;

/// Relative disagreement between the working and refined quadrature above
/// which an inner product is reported as under-resolved.
const SELF_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteState {
    /// A[n₁][n₂]; rectangular, dims ≤ (N_MAX+1)×(N_MAX+1). Maintained by
    /// `new`; keep it rectangular if you mutate directly.
    pub coeffs: Vec<Vec<Complex64>>,
    /// Envelope scale a > 0.
    pub scale: f64,
    /// Translation s of the envelope center.
    pub center: [f64; 2],
    /// Linear phase c in e^{i c·r}.
    pub linear_phase: [f64; 2],
    /// Overall complex amplitude G.
    pub global: Complex64,
}

impl HermiteState {
    pub fn new(
        coeffs: Vec<Vec<Complex64>>,
        scale: f64,
        center: [f64; 2],
        linear_phase: [f64; 2],
        global: Complex64,
    ) -> Result<HermiteState> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(NcError::InvalidInput(format!(
                "state scale must be positive and finite, got {scale}"
            )));
        }
        if coeffs.is_empty() || coeffs[0].is_empty() {
            return Err(NcError::InvalidInput(
                "coefficient matrix must be non-empty".into(),
            ));
        }
        let cols = coeffs[0].len();
        if coeffs.iter().any(|row| row.len() != cols) {
            return Err(NcError::InvalidInput(
                "coefficient matrix must be rectangular".into(),
            ));
        }
        let needed = (coeffs.len() - 1).max(cols - 1);
        if needed > N_MAX {
            return Err(NcError::DegreeOverflow {
                needed,
                max: N_MAX,
            });
        }
        let finite = center.iter().chain(linear_phase.iter()).all(|v| v.is_finite())
            && global.re.is_finite()
            && global.im.is_finite()
            && coeffs
                .iter()
                .flatten()
                .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(NcError::InvalidInput(
                "state parameters must all be finite".into(),
            ));
        }
        Ok(HermiteState {
            coeffs,
            scale,
            center,
            linear_phase,
            global,
        })
    }

    /// The normalized Gaussian ground state ψ₀₀.
    pub fn ground(scale: f64, center: [f64; 2], linear_phase: [f64; 2]) -> Result<HermiteState> {
        HermiteState::basis(0, 0, scale, center, linear_phase)
    }

    /// The basis state with a single unit coefficient at degree (n₁, n₂).
    pub fn basis(
        n1: usize,
        n2: usize,
        scale: f64,
        center: [f64; 2],
        linear_phase: [f64; 2],
    ) -> Result<HermiteState> {
        if n1 > N_MAX || n2 > N_MAX {
            return Err(NcError::DegreeOverflow {
                needed: n1.max(n2),
                max: N_MAX,
            });
        }
        let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); n2 + 1]; n1 + 1];
        coeffs[n1][n2] = Complex64::new(1.0, 0.0);
        HermiteState::new(coeffs, scale, center, linear_phase, Complex64::new(1.0, 0.0))
    }

    /// (rows, cols) of the coefficient matrix = (deg₁+1, deg₂+1).
    pub fn dims(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs[0].len())
    }

    /// ‖f‖² from coefficients alone (exact by basis orthonormality).
    pub fn norm_sq(&self) -> f64 {
        let mut acc = KahanSum::default();
        for row in &self.coeffs {
            for z in row {
                acc.add(z.norm_sqr());
            }
        }
        self.global.norm_sqr() * acc.value()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// f(r) at one point.
    pub fn evaluate_one(&self, r: [f64; 2]) -> Complex64 {
        let a = self.scale;
        let (d1, d2) = self.dims();
        let h1 = hermite_functions(d1 - 1, a * (r[0] - self.center[0]));
        let h2 = hermite_functions(d2 - 1, a * (r[1] - self.center[1]));
        let mut acc = Complex64::new(0.0, 0.0);
        for (row, &h1v) in self.coeffs.iter().zip(h1.iter()) {
            let mut inner = Complex64::new(0.0, 0.0);
            for (z, &h2v) in row.iter().zip(h2.iter()) {
                inner += z * h2v;
            }
            acc += inner * h1v;
        }
        let phase = Complex64::from_polar(
            1.0,
            self.linear_phase[0] * r[0] + self.linear_phase[1] * r[1],
        );
        self.global * a * phase * acc
    }

    /// f(r) at many points; parallel for long lists.
    pub fn evaluate(&self, points: &[[f64; 2]]) -> Vec<Complex64> {
        if points.len() >= 256 {
            points.par_iter().map(|&r| self.evaluate_one(r)).collect()
        } else {
            points.iter().map(|&r| self.evaluate_one(r)).collect()
        }
    }

    /// f on the tensor grid xs × ys, exploiting separability:
    /// out[i][j] = f((xs[i], ys[j])).
    pub fn evaluate_grid(&self, xs: &[f64], ys: &[f64]) -> Vec<Vec<Complex64>> {
        let a = self.scale;
        let (d1, d2) = self.dims();
        // t[i][n₂] = Σ_{n₁} A[n₁][n₂] h_{n₁}(a(x_i − s₁))
        let t: Vec<Vec<Complex64>> = xs
            .iter()
            .map(|&x| {
                let h1 = hermite_functions(d1 - 1, a * (x - self.center[0]));
                let mut row = vec![Complex64::new(0.0, 0.0); d2];
                for (arow, &h1v) in self.coeffs.iter().zip(h1.iter()) {
                    for (dst, z) in row.iter_mut().zip(arow.iter()) {
                        *dst += z * h1v;
                    }
                }
                row
            })
            .collect();
        let h2s: Vec<Vec<f64>> = ys
            .iter()
            .map(|&y| hermite_functions(d2 - 1, a * (y - self.center[1])))
            .collect();
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                ys.iter()
                    .enumerate()
                    .map(|(j, &y)| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (z, &h2v) in t[i].iter().zip(h2s[j].iter()) {
                            acc += z * h2v;
                        }
                        let phase = Complex64::from_polar(
                            1.0,
                            self.linear_phase[0] * x + self.linear_phase[1] * y,
                        );
                        self.global * a * phase * acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// ⟨f, g⟩ = ∫ conj(f)·g dr₁dr₂, conjugate-linear in `f`, by tensor
/// quadrature in the pair's combined Gaussian frame (ā² = (a_f²+a_g²)/2,
/// center at the precision-weighted mean of the two envelope centers).
/// Runs the rule and a 1.5× refinement; disagreement beyond 1e−8 relative
/// to max(|value|, ‖f‖‖g‖) is reported as `QuadratureUnderResolved`.
pub fn inner_product(f: &HermiteState, g: &HermiteState, rule: QuadratureRule) -> Result<Complex64> {
    let lo = inner_product_unchecked(f, g, rule);
    let hi = inner_product_unchecked(f, g, rule.refined());
    let scale = hi.norm().max(f.norm() * g.norm());
    let deviation = (hi - lo).norm();
    if deviation > SELF_CHECK_TOL * scale {
        return Err(NcError::QuadratureUnderResolved {
            what: "inner_product self-check",
            deviation: deviation / scale.max(f64::MIN_POSITIVE),
            tolerance: SELF_CHECK_TOL,
        });
    }
    Ok(hi)
}

/// Single-resolution tensor quadrature for ⟨f, g⟩; no self-check.
pub fn inner_product_unchecked(
    f: &HermiteState,
    g: &HermiteState,
    rule: QuadratureRule,
) -> Complex64 {
    let af2 = f.scale * f.scale;
    let ag2 = g.scale * g.scale;
    let abar = ((af2 + ag2) / 2.0).sqrt();
    let mu = [
        (af2 * f.center[0] + ag2 * g.center[0]) / (af2 + ag2),
        (af2 * f.center[1] + ag2 * g.center[1]) / (af2 + ag2),
    ];
    let (nodes, weights) = rule.nodes_1d();
    // Gauss–Hermite nodes live in the unit frame and are mapped through
    // x = μ + t/ā (Jacobian 1/ā per axis); trapezoid nodes are already in
    // absolute units and only get recentered.
    let (xs, ys, jac): (Vec<f64>, Vec<f64>, f64) = match rule {
        QuadratureRule::GaussHermite { .. } => (
            nodes.iter().map(|&t| mu[0] + t / abar).collect(),
            nodes.iter().map(|&t| mu[1] + t / abar).collect(),
            1.0 / (abar * abar),
        ),
        QuadratureRule::Trapezoid { .. } => (
            nodes.iter().map(|&t| mu[0] + t).collect(),
            nodes.iter().map(|&t| mu[1] + t).collect(),
            1.0,
        ),
    };
    let fv = f.evaluate_grid(&xs, &ys);
    let gv = g.evaluate_grid(&xs, &ys);
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for (i, &wi) in weights.iter().enumerate() {
        for (j, &wj) in weights.iter().enumerate() {
            let term = fv[i][j].conj() * gv[i][j] * (wi * wj);
            re.add(term.re);
            im.add(term.im);
        }
    }
    Complex64::new(re.value(), im.value()) * jac
}

/// Closed-form ⟨f, g⟩ for states sharing one envelope scale, via coherent
/// displacement matrix elements: per axis, with κ = c_g − c_f,
/// δ = a(s_g − s_f), ω = κ/a, ζ = (δ + iω)/√2,
///
///   ⟨e_m[f] e^{i c_f r}, e_n[g] e^{i c_g r}⟩ = e^{iκ·s̄} ⟨m|D(ζ)|n⟩,
///
/// and ⟨m|D(ζ)|n⟩ is a Laguerre polynomial times a Gaussian in |ζ|².
/// Exact up to roundoff; used wherever whole families of translated
/// states must be paired (orthogonality integrals) without quadrature.
pub fn inner_product_analytic(f: &HermiteState, g: &HermiteState) -> Result<Complex64> {
    if f.scale != g.scale {
        return Err(NcError::InvalidInput(format!(
            "analytic inner product requires equal envelope scales, got {} and {}",
            f.scale, g.scale
        )));
    }
    Ok(analytic_overlap(f, g, g.center, g.linear_phase))
}

/// |⟨f, g′⟩|² where g′ is g with its argument shifted by u and an extra
/// linear phase l: g′(r) = (phase)·e^{i l·r} g(r + u), i.e. center s_g − u
/// and phase c_g + l. Global phases drop in the modulus, so this is the
/// building block for orbit integrals of |⟨f, U(g) λ⟩|². Scales must match.
pub(crate) fn transported_overlap_sq(
    f: &HermiteState,
    g: &HermiteState,
    u: [f64; 2],
    l: [f64; 2],
) -> f64 {
    debug_assert_eq!(f.scale, g.scale);
    let center = [g.center[0] - u[0], g.center[1] - u[1]];
    let phase = [g.linear_phase[0] + l[0], g.linear_phase[1] + l[1]];
    analytic_overlap(f, g, center, phase).norm_sqr()
}

/// ⟨f, g′⟩ where g′ is g with center and linear phase overridden; the shared
/// closed form behind [`inner_product_analytic`] and the transported overlap.
fn analytic_overlap(
    f: &HermiteState,
    g: &HermiteState,
    g_center: [f64; 2],
    g_phase: [f64; 2],
) -> Complex64 {
    let a = f.scale;
    let kappa = [
        g_phase[0] - f.linear_phase[0],
        g_phase[1] - f.linear_phase[1],
    ];
    let sbar = [
        0.5 * (f.center[0] + g_center[0]),
        0.5 * (f.center[1] + g_center[1]),
    ];
    let phase = Complex64::from_polar(1.0, kappa[0] * sbar[0] + kappa[1] * sbar[1]);
    let zeta = |axis: usize| {
        let delta = a * (g_center[axis] - f.center[axis]);
        let omega = kappa[axis] / a;
        Complex64::new(delta, omega) / std::f64::consts::SQRT_2
    };
    let z1 = zeta(0);
    let z2 = zeta(1);
    let (fd1, fd2) = f.dims();
    let (gd1, gd2) = g.dims();
    // Tables of ⟨m|D(ζ)|n⟩ per axis, then a contraction over both indices.
    let d1 = displacement_table(fd1, gd1, z1);
    let d2 = displacement_table(fd2, gd2, z2);
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for m1 in 0..fd1 {
        for m2 in 0..fd2 {
            let fc = f.coeffs[m1][m2];
            if fc == Complex64::new(0.0, 0.0) {
                continue;
            }
            for n1 in 0..gd1 {
                for n2 in 0..gd2 {
                    let gc = g.coeffs[n1][n2];
                    if gc == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let term = fc.conj() * gc * d1[m1][n1] * d2[m2][n2];
                    re.add(term.re);
                    im.add(term.im);
                }
            }
        }
    }
    f.global.conj() * g.global * phase * Complex64::new(re.value(), im.value())
}

/// ⟨m|D(ζ)|n⟩ for 0 ≤ m < rows, 0 ≤ n < cols.
fn displacement_table(rows: usize, cols: usize, zeta: Complex64) -> Vec<Vec<Complex64>> {
    (0..rows)
        .map(|m| (0..cols).map(|n| displacement_element(m, n, zeta)).collect())
        .collect()
}

/// Coherent-displacement matrix element
/// ⟨m|D(ζ)|n⟩ = √(n!/m!) ζ^{m−n} e^{−|ζ|²/2} L_n^{(m−n)}(|ζ|²) for m ≥ n,
/// and the conjugate-reflected form (−ζ̄)^{n−m} for m < n.
fn displacement_element(m: usize, n: usize, zeta: Complex64) -> Complex64 {
    let az2 = zeta.norm_sqr();
    let envelope = (-az2 / 2.0).exp();
    if m >= n {
        let mut pref = Complex64::new(1.0, 0.0);
        for k in (n + 1)..=m {
            pref *= zeta / (k as f64).sqrt();
        }
        pref * envelope * laguerre(n, (m - n) as f64, az2)
    } else {
        let mut pref = Complex64::new(1.0, 0.0);
        for k in (m + 1)..=n {
            pref *= -zeta.conj() / (k as f64).sqrt();
        }
        pref * envelope * laguerre(m, (n - m) as f64, az2)
    }
}

/// Generalized Laguerre polynomial L_n^{(k)}(x) by the stable upward
/// recurrence (j+1)L_{j+1} = (2j+1+k−x)L_j − (j+k)L_{j−1}.
fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut l0 = 1.0;
    let mut l1 = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * l1 - (jf + k) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = next;
    }
    l1
}

// ---- serialization ----
// External format: {"a":…, "s":[…,…], "c":[…,…], "global":[re,im],
// "coeffs":[{"n1":…,"n2":…,"v":[re,im]},…]} with zero entries omitted.

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    n1: usize,
    n2: usize,
    v: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    a: f64,
    s: [f64; 2],
    c: [f64; 2],
    global: [f64; 2],
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for HermiteState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for (n1, row) in self.coeffs.iter().enumerate() {
            for (n2, z) in row.iter().enumerate() {
                if *z != Complex64::new(0.0, 0.0) {
                    entries.push(CoeffEntry {
                        n1,
                        n2,
                        v: [z.re, z.im],
                    });
                }
            }
        }
        StateRepr {
            a: self.scale,
            s: self.center,
            c: self.linear_phase,
            global: [self.global.re, self.global.im],
            coeffs: entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermiteState {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        let d1 = repr.coeffs.iter().map(|e| e.n1 + 1).max().unwrap_or(1);
        let d2 = repr.coeffs.iter().map(|e| e.n2 + 1).max().unwrap_or(1);
        if d1 > N_MAX + 1 || d2 > N_MAX + 1 {
            return Err(serde::de::Error::custom(format!(
                "coefficient degree exceeds N_MAX = {N_MAX}"
            )));
        }
        let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); d2]; d1];
        for e in &repr.coeffs {
            coeffs[e.n1][e.n2] = Complex64::new(e.v[0], e.v[1]);
        }
        HermiteState::new(
            coeffs,
            repr.a,
            repr.s,
            repr.c,
            Complex64::new(repr.global[0], repr.global[1]),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(
        seed_coeffs: &[(usize, usize, f64, f64)],
        a: f64,
        s: [f64; 2],
        cv: [f64; 2],
        g: Complex64,
    ) -> HermiteState {
        let d1 = seed_coeffs.iter().map(|e| e.0 + 1).max().unwrap();
        let d2 = seed_coeffs.iter().map(|e| e.1 + 1).max().unwrap();
        let mut m = vec![vec![c(0.0, 0.0); d2]; d1];
        for &(i, j, re, im) in seed_coeffs {
            m[i][j] = c(re, im);
        }
        HermiteState::new(m, a, s, cv, g).unwrap()
    }

    #[test]
    fn ground_state_at_origin_is_inverse_sqrt_pi() {
        let f = HermiteState::ground(1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let v = f.evaluate_one([0.0, 0.0]);
        assert_abs_diff_eq!(v.re, std::f64::consts::PI.powf(-0.5), epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn zero_state_vanishes_everywhere() {
        let f = random_state(&[(2, 1, 0.0, 0.0)], 1.3, [0.5, -0.2], [1.0, 2.0], c(1.0, 0.0));
        for r in [[0.0, 0.0], [1.0, -2.0], [0.3, 0.7]] {
            assert_eq!(f.evaluate_one(r), c(0.0, 0.0));
        }
    }

    #[test]
    fn linear_phase_rotates_value() {
        // c = (1,0) at r = (π,0): e^{iπ} times the real Gaussian value.
        let f = HermiteState::ground(1.0, [0.0, 0.0], [1.0, 0.0]).unwrap();
        let v = f.evaluate_one([std::f64::consts::PI, 0.0]);
        let pi = std::f64::consts::PI;
        let expect = -pi.powf(-0.5) * (-pi * pi / 2.0).exp();
        assert_abs_diff_eq!(v.re, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn quadrature_norm_is_one_for_ground() {
        let f = HermiteState::ground(1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let rule = QuadratureRule::gauss_hermite(64).unwrap();
        let ip = inner_product(&f, &f, rule).unwrap();
        assert_abs_diff_eq!(ip.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn distinct_basis_states_are_orthogonal() {
        let f = HermiteState::basis(0, 0, 1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let g = HermiteState::basis(1, 0, 1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let rule = QuadratureRule::gauss_hermite(64).unwrap();
        let ip = inner_product(&f, &g, rule).unwrap();
        assert!(ip.norm() < 1e-13);
    }

    #[test]
    fn shifted_gaussian_overlap() {
        // ⟨ψ₀₀ at s=(1,0), ψ₀₀ at 0⟩ = e^{−a²|s|²/4} = e^{−1/4}.
        let f = HermiteState::ground(1.0, [1.0, 0.0], [0.0, 0.0]).unwrap();
        let g = HermiteState::ground(1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let rule = QuadratureRule::gauss_hermite(64).unwrap();
        let ip = inner_product(&f, &g, rule).unwrap();
        assert_abs_diff_eq!(ip.re, (-0.25f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-13);
        let exact = inner_product_analytic(&f, &g).unwrap();
        assert_abs_diff_eq!(exact.re, (-0.25f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn trapezoid_rule_matches_gauss_hermite() {
        let f = random_state(
            &[(0, 0, 0.8, 0.1), (2, 1, -0.3, 0.4)],
            1.0,
            [0.2, -0.1],
            [0.9, -1.4],
            c(0.7, 0.3),
        );
        let gh = inner_product(&f, &f, QuadratureRule::gauss_hermite(64).unwrap()).unwrap();
        let tz = inner_product(&f, &f, QuadratureRule::trapezoid(161, 12.0).unwrap()).unwrap();
        assert!((gh - tz).norm() < 1e-10 * f.norm_sq());
    }

    #[test]
    fn parseval_holds_for_random_states() {
        let rule = QuadratureRule::gauss_hermite(64).unwrap();
        proptest!(ProptestConfig::with_cases(12), |(
            a in 0.6f64..1.6,
            s1 in -0.5f64..0.5, s2 in -0.5f64..0.5,
            c1 in -1.5f64..1.5, c2 in -1.5f64..1.5,
            re00 in -1.0f64..1.0, im21 in -1.0f64..1.0,
        )| {
            let f = random_state(
                &[(0, 0, re00, 0.2), (2, 1, 0.4, im21), (1, 3, -0.6, 0.1)],
                a, [s1, s2], [c1, c2], c(0.8, -0.5),
            );
            let n2 = inner_product(&f, &f, rule).unwrap();
            prop_assert!((n2.re - f.norm_sq()).abs() < 1e-10 * f.norm_sq().max(1e-30));
            prop_assert!(n2.im.abs() < 1e-12 * f.norm_sq().max(1e-30));
        });
    }

    #[test]
    fn inner_product_conjugate_symmetry() {
        let rule = QuadratureRule::gauss_hermite(48).unwrap();
        let f = random_state(
            &[(0, 0, 0.5, -0.2), (1, 2, 0.3, 0.9)],
            1.1,
            [0.3, 0.1],
            [0.7, -0.4],
            c(0.9, 0.2),
        );
        let g = random_state(
            &[(0, 1, -0.4, 0.6), (2, 0, 1.1, 0.0)],
            0.9,
            [-0.2, 0.4],
            [-0.3, 1.2],
            c(0.1, -1.0),
        );
        let fg = inner_product(&f, &g, rule).unwrap();
        let gf = inner_product(&g, &f, rule).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-12);
    }

    #[test]
    fn analytic_inner_product_matches_quadrature() {
        let rule = QuadratureRule::gauss_hermite(96).unwrap();
        proptest!(ProptestConfig::with_cases(10), |(
            a in 0.7f64..1.5,
            sf1 in -0.8f64..0.8, sg2 in -0.8f64..0.8,
            cf2 in -1.5f64..1.5, cg1 in -1.5f64..1.5,
        )| {
            let f = random_state(
                &[(0, 0, 0.6, 0.1), (2, 2, -0.5, 0.3)],
                a, [sf1, 0.2], [0.4, cf2], c(0.9, 0.1),
            );
            let g = random_state(
                &[(1, 0, 0.8, -0.7), (3, 1, 0.2, 0.2)],
                a, [-0.1, sg2], [cg1, -0.6], c(-0.3, 0.8),
            );
            let exact = inner_product_analytic(&f, &g).unwrap();
            let quad = inner_product(&f, &g, rule).unwrap();
            prop_assert!((exact - quad).norm() < 1e-10 * (f.norm() * g.norm()).max(1e-30));
        });
    }

    #[test]
    fn analytic_inner_product_requires_equal_scales() {
        let f = HermiteState::ground(1.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        let g = HermiteState::ground(1.5, [0.0, 0.0], [0.0, 0.0]).unwrap();
        assert!(matches!(
            inner_product_analytic(&f, &g),
            Err(NcError::InvalidInput(_))
        ));
    }

    #[test]
    fn degree_overflow_detected() {
        let coeffs = vec![vec![c(1.0, 0.0); 1]; N_MAX + 2];
        let err =
            HermiteState::new(coeffs, 1.0, [0.0, 0.0], [0.0, 0.0], c(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, NcError::DegreeOverflow { needed, max }
            if needed == N_MAX + 1 && max == N_MAX));
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let f = random_state(
            &[(0, 0, 0.6, 0.1), (3, 2, -0.5, 0.3)],
            1.2,
            [0.3, -0.6],
            [1.1, 0.4],
            c(0.2, 0.9),
        );
        let xs = [-1.0, 0.0, 0.8];
        let ys = [-0.5, 1.5];
        let grid = f.evaluate_grid(&xs, &ys);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                assert!((grid[i][j] - f.evaluate_one([x, y])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn json_round_trip_preserves_state() {
        let f = random_state(
            &[(0, 0, 0.5, -0.1), (2, 1, 0.0, 0.7)],
            1.3,
            [0.2, -0.4],
            [0.9, 1.1],
            c(0.6, -0.8),
        );
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"a\":1.3"));
        assert!(json.contains("\"n1\":2"));
        let back: HermiteState = serde_json::from_str(&json).unwrap();
        assert_eq!(back.scale, f.scale);
        assert_eq!(back.center, f.center);
        assert_eq!(back.linear_phase, f.linear_phase);
        assert_eq!(back.global, f.global);
        assert_eq!(back.coeffs[0][0], f.coeffs[0][0]);
        assert_eq!(back.coeffs[2][1], f.coeffs[2][1]);
    }
}
