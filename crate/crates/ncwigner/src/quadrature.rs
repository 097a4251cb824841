//! Quadrature rules for ∫ f(x) dx on the line: Gauss–Hermite nodes with
//! *total-measure* weights (the e^{+x²} factor already folded in, computed
//! stably through the Christoffel function of the orthonormal Hermite
//! functions), and a uniform trapezoid rule for phase-heavy integrands.
//!
//! With orthonormal Hermite functions h_k (Gaussian included), the n-point
//! rule Σ w̃_i f(x_i) with w̃_i = 1/Σ_{k<n} h_k(x_i)² integrates every
//! product h_j·h_k (j,k < n) exactly — which is precisely the class of
//! integrands produced by Hermite-expanded states.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{NcError, Result};

/// A 1D rule; 2D integrals use the tensor square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureRule {
    /// n-node Gauss–Hermite in the standard frame (unit Gaussian scale,
    /// centered at 0); callers shift/scale nodes into their own frame.
    GaussHermite { nodes_per_axis: usize },
    /// Uniform nodes on [−half_width, half_width] with trapezoid weights.
    Trapezoid {
        nodes_per_axis: usize,
        half_width: f64,
    },
}

impl QuadratureRule {
    pub fn gauss_hermite(nodes_per_axis: usize) -> Result<QuadratureRule> {
        if nodes_per_axis < 2 {
            return Err(NcError::InvalidInput(format!(
                "Gauss-Hermite rule needs at least 2 nodes per axis, got {nodes_per_axis}"
            )));
        }
        Ok(QuadratureRule::GaussHermite { nodes_per_axis })
    }

    pub fn trapezoid(nodes_per_axis: usize, half_width: f64) -> Result<QuadratureRule> {
        if nodes_per_axis < 2 {
            return Err(NcError::InvalidInput(format!(
                "trapezoid rule needs at least 2 nodes per axis, got {nodes_per_axis}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(NcError::InvalidInput(format!(
                "trapezoid half_width must be positive and finite, got {half_width}"
            )));
        }
        Ok(QuadratureRule::Trapezoid {
            nodes_per_axis,
            half_width,
        })
    }

    pub fn nodes_per_axis(&self) -> usize {
        match *self {
            QuadratureRule::GaussHermite { nodes_per_axis } => nodes_per_axis,
            QuadratureRule::Trapezoid { nodes_per_axis, .. } => nodes_per_axis,
        }
    }

    /// A rule of the same kind with ~1.5× the nodes, for two-resolution
    /// self-checks.
    pub fn refined(&self) -> QuadratureRule {
        match *self {
            QuadratureRule::GaussHermite { nodes_per_axis } => QuadratureRule::GaussHermite {
                nodes_per_axis: nodes_per_axis + nodes_per_axis.div_ceil(2),
            },
            QuadratureRule::Trapezoid {
                nodes_per_axis,
                half_width,
            } => QuadratureRule::Trapezoid {
                nodes_per_axis: nodes_per_axis + nodes_per_axis.div_ceil(2),
                half_width,
            },
        }
    }

    /// Nodes and weights such that ∫ f(x) dx ≈ Σ wᵢ f(xᵢ) in the rule's
    /// own frame.
    pub fn nodes_1d(&self) -> (Arc<Vec<f64>>, Arc<Vec<f64>>) {
        match *self {
            QuadratureRule::GaussHermite { nodes_per_axis } => gauss_hermite_total(nodes_per_axis),
            QuadratureRule::Trapezoid {
                nodes_per_axis,
                half_width,
            } => {
                let n = nodes_per_axis;
                let h = 2.0 * half_width / (n as f64 - 1.0);
                let nodes: Vec<f64> = (0..n).map(|j| -half_width + h * j as f64).collect();
                let mut weights = vec![h; n];
                weights[0] = 0.5 * h;
                weights[n - 1] = 0.5 * h;
                (Arc::new(nodes), Arc::new(weights))
            }
        }
    }
}

/// Compensated (Kahan–Neumaier) accumulator; keeps long quadrature sums
/// accurate to a few ulps independent of term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: KahanSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Cached Gauss–Hermite nodes/total-measure weights, keyed by node count.
fn gauss_hermite_total(n: usize) -> (Arc<Vec<f64>>, Arc<Vec<f64>>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Arc<Vec<f64>>, Arc<Vec<f64>>)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let (nodes, weights) = compute_gauss_hermite(n);
            (Arc::new(nodes), Arc::new(weights))
        })
        .clone()
}

/// Orthonormal Hermite functions h_0..h_{nmax} at x (Gaussian included):
/// h₀ = π^{−1/4}e^{−x²/2}, h_{k+1} = x√(2/(k+1))·h_k − √(k/(k+1))·h_{k−1}.
pub fn hermite_functions(nmax: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(nmax + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    h.push(h0);
    if nmax >= 1 {
        h.push(std::f64::consts::SQRT_2 * x * h0);
    }
    for k in 1..nmax {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * h[k]
            - (k as f64 / (k as f64 + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Nodes = eigenvalues of the Jacobi matrix (diag 0, off-diag √(k/2)),
/// polished by two Newton steps on h_n; weights from the Christoffel
/// function. Symmetrized so the rule is exactly even under x → −x.
fn compute_gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0f64; n];
    let mut off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    off.push(0.0);
    tridiagonal_eigenvalues(&mut diag, &mut off);
    diag.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Newton polish: h_n'(x) = √(2n)·h_{n−1}(x) − x·h_n(x).
    for x in diag.iter_mut() {
        for _ in 0..2 {
            let h = hermite_functions(n, *x);
            let deriv = (2.0 * n as f64).sqrt() * h[n - 1] - *x * h[n];
            if deriv != 0.0 {
                *x -= h[n] / deriv;
            }
        }
    }

    // Enforce the ± symmetry exactly (pairs i ↔ n−1−i).
    for i in 0..n / 2 {
        let m = 0.5 * (diag[n - 1 - i] - diag[i]);
        diag[i] = -m;
        diag[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        diag[n / 2] = 0.0;
    }

    let mut weights: Vec<f64> = diag
        .iter()
        .map(|&x| {
            let h = hermite_functions(n - 1, x);
            1.0 / h.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    for i in 0..n / 2 {
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (diag, weights)
}

/// Implicit-QL eigenvalues of a symmetric tridiagonal matrix
/// (diagonal `d`, off-diagonal `e[0..n−1]`; both overwritten).
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find the first negligible off-diagonal at or after l.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");

            // Wilkinson shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
