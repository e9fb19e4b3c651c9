//! The mirror worldline in light-like coordinates.
//!
//! The mirror is at rest for `u <= 0`, follows `v = (1 - e^{-k u}) / k` for
//! `0 <= u <= u0`, and then coasts with the velocity reached at `u0`. The
//! comoving light-like coordinates `ubar`, `vbar` are the ones in which the
//! mirror sits at rest at the origin.

use crate::error::{require_positive, DceError, Result};

/// Largest `k * u0` for which `A = exp(-k * u0)` is still a normal `f64`.
pub const MAX_K_U0: f64 = 708.0;

/// Exponential-then-inertial mirror trajectory.
///
/// All derived quantities are cached at construction; the value is immutable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorTrajectory {
    k: f64,
    u0: f64,
    a: f64,
    sqrt_a: f64,
    v0: f64,
    ubar0: f64,
}

impl MirrorTrajectory {
    /// Builds the trajectory for acceleration scale `k` and acceleration time `u0`.
    pub fn new(k: f64, u0: f64) -> Result<Self> {
        let k = require_positive("k", k)?;
        let u0 = require_positive("u0", u0)?;
        let ku0 = k * u0;
        if ku0 > MAX_K_U0 {
            return Err(DceError::ParameterDomain {
                name: "u0",
                value: u0,
                reason: "k*u0 too large: exp(-k*u0) would underflow",
            });
        }
        let a = (-ku0).exp();
        let sqrt_a = (-0.5 * ku0).exp();
        Ok(Self {
            k,
            u0,
            a,
            sqrt_a,
            v0: -(-ku0).exp_m1() / k,
            ubar0: -2.0 * (-0.5 * ku0).exp_m1() / k,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    /// Final velocity factor `A = exp(-k u0)`.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn sqrt_a(&self) -> f64 {
        self.sqrt_a
    }

    /// `v0 = V(u0) = (1 - A) / k`.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// `ubar(u0) = vbar(v0) = 2 (1 - sqrt(A)) / k`.
    pub fn ubar0(&self) -> f64 {
        self.ubar0
    }

    /// `v = V(u)`.
    pub fn eval_v(&self, u: f64) -> f64 {
        if u <= 0.0 {
            u
        } else if u <= self.u0 {
            -(-self.k * u).exp_m1() / self.k
        } else {
            self.v0 + self.a * (u - self.u0)
        }
    }

    /// `u = U(v)`, the inverse of [`eval_v`](Self::eval_v).
    pub fn eval_u(&self, v: f64) -> f64 {
        if v <= 0.0 {
            v
        } else if v <= self.v0 {
            -(-self.k * v).ln_1p() / self.k
        } else {
            self.u0 + (v - self.v0) / self.a
        }
    }

    /// Comoving `ubar(u)`.
    pub fn eval_ubar(&self, u: f64) -> f64 {
        if u <= 0.0 {
            u
        } else if u <= self.u0 {
            -2.0 * (-0.5 * self.k * u).exp_m1() / self.k
        } else {
            self.ubar0 + self.sqrt_a * (u - self.u0)
        }
    }

    /// Comoving `vbar(v)`; satisfies `vbar(V(u)) = ubar(u)`.
    pub fn eval_vbar(&self, v: f64) -> f64 {
        if v <= 0.0 {
            v
        } else if v <= self.v0 {
            // 1 - sqrt(1 - kv) without cancellation
            let kv = self.k * v;
            2.0 * v / (1.0 + (1.0 - kv).sqrt())
        } else {
            self.ubar0 + (v - self.v0) / self.sqrt_a
        }
    }

    /// `dV/du`; at the joins the shared one-sided value.
    pub fn eval_dv(&self, u: f64) -> f64 {
        if u <= 0.0 {
            1.0
        } else if u <= self.u0 {
            (-self.k * u).exp()
        } else {
            self.a
        }
    }

    /// `d ubar / du`, equal to `sqrt(dV/du)`.
    pub fn eval_dubar(&self, u: f64) -> f64 {
        if u <= 0.0 {
            1.0
        } else if u <= self.u0 {
            (-0.5 * self.k * u).exp()
        } else {
            self.sqrt_a
        }
    }
}
