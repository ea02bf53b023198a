//! State algebra of the two-dimensional Euler equations for an ideal gas:
//! conversions, directional fluxes, the entropy pair `U = -ρS`,
//! `S = log(p ρ^{-γ})`, Davis wave-speed bounds and the HLL fluxes.

use crate::error::{Error, Result};

/// Conserved variables `(ρ, ρv_x, ρv_y, E)`.
pub type ConsState = [f64; 4];

pub const NVARS: usize = 4;
pub const DEFAULT_GAMMA: f64 = 1.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub vx: f64,
    pub vy: f64,
    pub p: f64,
}

impl PrimState {
    pub fn new(rho: f64, vx: f64, vy: f64, p: f64) -> Self {
        PrimState { rho, vx, vy, p }
    }

    pub fn normal_velocity(&self, n: [f64; 2]) -> f64 {
        self.vx * n[0] + self.vy * n[1]
    }
}

/// Ideal gas with a fixed adiabatic exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gas {
    pub gamma: f64,
}

impl Default for Gas {
    fn default() -> Self {
        Gas { gamma: DEFAULT_GAMMA }
    }
}

impl Gas {
    pub fn new(gamma: f64) -> Self {
        Gas { gamma }
    }

    pub fn cons_to_prim(&self, u: &ConsState) -> PrimState {
        let rho = u[0];
        let vx = u[1] / rho;
        let vy = u[2] / rho;
        let p = (self.gamma - 1.0) * (u[3] - 0.5 * rho * (vx * vx + vy * vy));
        PrimState { rho, vx, vy, p }
    }

    pub fn prim_to_cons(&self, q: &PrimState) -> ConsState {
        let e = q.p / (self.gamma - 1.0) + 0.5 * q.rho * (q.vx * q.vx + q.vy * q.vy);
        [q.rho, q.rho * q.vx, q.rho * q.vy, e]
    }

    pub fn is_physical(&self, u: &ConsState) -> bool {
        let q = self.cons_to_prim(u);
        q.rho > 0.0 && q.p > 0.0 && q.rho.is_finite() && q.p.is_finite()
    }

    /// Primitive state, or a positivity error labelled by `context`.
    pub fn checked_prim(&self, u: &ConsState, context: impl FnOnce() -> String) -> Result<PrimState> {
        let q = self.cons_to_prim(u);
        if q.rho > 0.0 && q.p > 0.0 && q.rho.is_finite() && q.p.is_finite() && q.vx.is_finite() && q.vy.is_finite() {
            Ok(q)
        } else {
            Err(Error::NonPhysical {
                context: context(),
                rho: q.rho,
                p: q.p,
            })
        }
    }

    pub fn sound_speed(&self, q: &PrimState) -> f64 {
        (self.gamma * q.p / q.rho).sqrt()
    }

    fn flux_prim(&self, u: &ConsState, q: &PrimState, n: [f64; 2]) -> ConsState {
        let vn = q.normal_velocity(n);
        [
            u[0] * vn,
            u[1] * vn + q.p * n[0],
            u[2] * vn + q.p * n[1],
            (u[3] + q.p) * vn,
        ]
    }

    /// `f(u) n_x + g(u) n_y`.
    pub fn flux(&self, u: &ConsState, n: [f64; 2]) -> ConsState {
        self.flux_prim(u, &self.cons_to_prim(u), n)
    }

    /// Both Cartesian fluxes `(f, g)`.
    pub fn fluxes(&self, u: &ConsState) -> (ConsState, ConsState) {
        let q = self.cons_to_prim(u);
        (self.flux_prim(u, &q, [1.0, 0.0]), self.flux_prim(u, &q, [0.0, 1.0]))
    }

    /// Physical entropy `S = log(p ρ^{-γ})`.
    pub fn physical_entropy(&self, q: &PrimState) -> f64 {
        q.p.ln() - self.gamma * q.rho.ln()
    }

    /// Mathematical entropy `U = -ρS`.
    pub fn entropy(&self, u: &ConsState) -> f64 {
        let q = self.cons_to_prim(u);
        -q.rho * self.physical_entropy(&q)
    }

    /// `(U, F_n)` with `F_n = (v·n) U`.
    pub fn entropy_pair(&self, u: &ConsState, n: [f64; 2]) -> (f64, f64) {
        let q = self.cons_to_prim(u);
        let e = -q.rho * self.physical_entropy(&q);
        (e, q.normal_velocity(n) * e)
    }

    /// Entropy variables `∂U/∂u`.
    pub fn entropy_variables(&self, u: &ConsState) -> ConsState {
        let q = self.cons_to_prim(u);
        let g1 = self.gamma - 1.0;
        let s = self.physical_entropy(&q);
        let beta = q.rho / q.p;
        [
            (self.gamma - s) - 0.5 * g1 * beta * (q.vx * q.vx + q.vy * q.vy),
            g1 * beta * q.vx,
            g1 * beta * q.vy,
            -g1 * beta,
        ]
    }

    /// Davis bounds `a_l = min(v_l·n - c_l, v_r·n - c_r)`,
    /// `a_r = max(v_l·n + c_l, v_r·n + c_r)`.
    pub fn wave_speeds(&self, ul: &ConsState, ur: &ConsState, n: [f64; 2]) -> (f64, f64) {
        let ql = self.cons_to_prim(ul);
        let qr = self.cons_to_prim(ur);
        self.wave_speeds_prim(&ql, &qr, n)
    }

    fn wave_speeds_prim(&self, ql: &PrimState, qr: &PrimState, n: [f64; 2]) -> (f64, f64) {
        let (vl, vr) = (ql.normal_velocity(n), qr.normal_velocity(n));
        let (cl, cr) = (self.sound_speed(ql), self.sound_speed(qr));
        ((vl - cl).min(vr - cr), (vl + cl).max(vr + cr))
    }

    /// HLL flux together with the matching HLL entropy flux.
    pub fn hll(&self, ul: &ConsState, ur: &ConsState, n: [f64; 2]) -> (ConsState, f64) {
        let ql = self.cons_to_prim(ul);
        let qr = self.cons_to_prim(ur);
        let (al, ar) = self.wave_speeds_prim(&ql, &qr, n);
        let fl = self.flux_prim(ul, &ql, n);
        let el = -ql.rho * self.physical_entropy(&ql);
        if al >= 0.0 {
            return (fl, ql.normal_velocity(n) * el);
        }
        let fr = self.flux_prim(ur, &qr, n);
        let er = -qr.rho * self.physical_entropy(&qr);
        if ar <= 0.0 {
            return (fr, qr.normal_velocity(n) * er);
        }
        let inv = 1.0 / (ar - al);
        let mut f = [0.0; NVARS];
        for i in 0..NVARS {
            f[i] = (ar * fl[i] - al * fr[i] + al * ar * (ur[i] - ul[i])) * inv;
        }
        let (gl, gr) = (ql.normal_velocity(n) * el, qr.normal_velocity(n) * er);
        (f, (ar * gl - al * gr + al * ar * (er - el)) * inv)
    }

    pub fn hll_flux(&self, ul: &ConsState, ur: &ConsState, n: [f64; 2]) -> ConsState {
        self.hll(ul, ur, n).0
    }

    pub fn hll_entropy_flux(&self, ul: &ConsState, ur: &ConsState, n: [f64; 2]) -> f64 {
        self.hll(ul, ur, n).1
    }

    /// `u_lr = (a_r u_r - a_l u_l + f_l·n - f_r·n) / (a_r - a_l)` for the given speeds.
    pub fn hll_mean_state_with(&self, ul: &ConsState, ur: &ConsState, n: [f64; 2], al: f64, ar: f64) -> Result<ConsState> {
        if !(ar > al) {
            return Err(Error::DegenerateSpeeds(al));
        }
        let fl = self.flux(ul, n);
        let fr = self.flux(ur, n);
        let inv = 1.0 / (ar - al);
        let mut m = [0.0; NVARS];
        for i in 0..NVARS {
            m[i] = (ar * ur[i] - al * ul[i] + fl[i] - fr[i]) * inv;
        }
        Ok(m)
    }

    pub fn hll_mean_state(&self, ul: &ConsState, ur: &ConsState, n: [f64; 2]) -> Result<ConsState> {
        let (al, ar) = self.wave_speeds(ul, ur, n);
        self.hll_mean_state_with(ul, ur, n, al, ar)
    }

    /// Mirror state: normal velocity reversed, tangential velocity, density and energy kept.
    pub fn reflect(&self, u: &ConsState, n: [f64; 2]) -> ConsState {
        let mn = u[1] * n[0] + u[2] * n[1];
        [u[0], u[1] - 2.0 * mn * n[0], u[2] - 2.0 * mn * n[1], u[3]]
    }

    /// Largest signal speed `|v| + c`.
    pub fn max_signal_speed(&self, u: &ConsState) -> f64 {
        let q = self.cons_to_prim(u);
        (q.vx * q.vx + q.vy * q.vy).sqrt() + self.sound_speed(&q)
    }
}
