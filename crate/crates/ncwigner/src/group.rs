//! Exact arithmetic of the 7-parameter nilpotent group: elements
//! g = (θ, φ, ψ, q, p) with product
//!
//!   g·g′ = (θ+θ′+(α/2)(q·p′−p·q′), φ+φ′+(β/2)(p∧p′), ψ+ψ′+(γ/2)(q∧q′),
//!          q+q′, p+p′),
//!
//! where a∧b = a₁b₂ − a₂b₁. The three central coordinates live on ℝ (no
//! mod-2π reduction). The (q,p) part adds componentwise: the quotient by
//! the center is ℝ⁴.

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::params::DeformationConstants;

/// One group element. Plain value record, `Copy`, thread-safe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub q: [f64; 2],
    pub p: [f64; 2],
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn wedge(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl GroupElement {
    /// The neutral element (0,0,0,0,0).
    pub fn identity() -> GroupElement {
        GroupElement {
            theta: 0.0,
            phi: 0.0,
            psi: 0.0,
            q: [0.0; 2],
            p: [0.0; 2],
        }
    }

    /// A pure translation (0,0,0,q,p).
    pub fn translation(q: [f64; 2], p: [f64; 2]) -> GroupElement {
        GroupElement {
            theta: 0.0,
            phi: 0.0,
            psi: 0.0,
            q,
            p,
        }
    }

    /// A central element (θ,φ,ψ,0,0); commutes with everything.
    pub fn central(theta: f64, phi: f64, psi: f64) -> GroupElement {
        GroupElement {
            theta,
            phi,
            psi,
            q: [0.0; 2],
            p: [0.0; 2],
        }
    }

    /// Group product; α, β, γ weight the three central cocycles.
    pub fn multiply(&self, other: &GroupElement, consts: &DeformationConstants) -> GroupElement {
        GroupElement {
            theta: self.theta
                + other.theta
                + 0.5 * consts.alpha * (dot(self.q, other.p) - dot(self.p, other.q)),
            phi: self.phi + other.phi + 0.5 * consts.beta * wedge(self.p, other.p),
            psi: self.psi + other.psi + 0.5 * consts.gamma * wedge(self.q, other.q),
            q: [self.q[0] + other.q[0], self.q[1] + other.q[1]],
            p: [self.p[0] + other.p[0], self.p[1] + other.p[1]],
        }
    }

    /// Inverse: negate every coordinate. g·g⁻¹ lands exactly on the
    /// identity even in floating point, because each central correction is
    /// a sum of pairs x·(−y) + y·x that cancel bitwise.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            theta: -self.theta,
            phi: -self.phi,
            psi: -self.psi,
            q: [-self.q[0], -self.q[1]],
            p: [-self.p[0], -self.p[1]],
        }
    }
}

// Serialized as the flat array [θ, φ, ψ, q1, q2, p1, p2].
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(7)?;
        for v in [
            self.theta, self.phi, self.psi, self.q[0], self.q[1], self.p[0], self.p[1],
        ] {
            tup.serialize_element(&v)?;
        }
        tup.end()
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = GroupElement;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an array [theta, phi, psi, q1, q2, p1, p2]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<GroupElement, A::Error> {
                let mut vals = [0.0f64; 7];
                for (i, v) in vals.iter_mut().enumerate() {
                    *v = seq
                        .next_element()?
                        .ok_or_else(|| de::Error::invalid_length(i, &self))?;
                }
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(8, &self));
                }
                Ok(GroupElement {
                    theta: vals[0],
                    phi: vals[1],
                    psi: vals[2],
                    q: [vals[3], vals[4]],
                    p: [vals[5], vals[6]],
                })
            }
        }
        deserializer.deserialize_tuple(7, V)
    }
}
