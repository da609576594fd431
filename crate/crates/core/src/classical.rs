//! Classical cyclotron motion for `H = (1/2)|p - A(q)|²`, `A(q) = (b/2)(-q2, q1)`.
//!
//! Orbits are integrated with classical fourth-order Runge-Kutta. The runs here
//! span at most tens of periods, where RK4's small per-step error keeps energy
//! and orbit-centre drift far below the conservation thresholds we check.

use crate::error::{Error, Result};
use crate::states::MagneticField;

/// Default step for [`poisson_bracket_fd`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Phase-space point `(q, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalState {
    pub q: [f64; 2],
    pub p: [f64; 2],
    pub field: MagneticField,
}

impl ClassicalState {
    pub fn new(q: [f64; 2], p: [f64; 2], field: MagneticField) -> Self {
        Self { q, p, field }
    }

    /// State with prescribed position and velocity `q̇ = p - A(q)`.
    pub fn from_velocity(q: [f64; 2], v: [f64; 2], field: MagneticField) -> Self {
        let a = vector_potential(q, field);
        Self::new(q, [v[0] + a[0], v[1] + a[1]], field)
    }

    /// Kinetic momentum `p - A(q)`, equal to the velocity.
    pub fn velocity(&self) -> [f64; 2] {
        let a = vector_potential(self.q, self.field);
        [self.p[0] - a[0], self.p[1] - a[1]]
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(self.p.iter()).all(|v| v.is_finite())
    }

    fn as_array(&self) -> [f64; 4] {
        [self.q[0], self.q[1], self.p[0], self.p[1]]
    }

    fn from_array(y: [f64; 4], field: MagneticField) -> Self {
        Self::new([y[0], y[1]], [y[2], y[3]], field)
    }
}

pub fn vector_potential(q: [f64; 2], field: MagneticField) -> [f64; 2] {
    let h = 0.5 * field.strength();
    [-h * q[1], h * q[0]]
}

pub fn classical_energy(s: &ClassicalState) -> f64 {
    let v = s.velocity();
    0.5 * (v[0] * v[0] + v[1] * v[1])
}

/// Orbit centre `(q̃1, p̃1) = ((1/b)(p2 + (b/2)q1), (1/b)(-p1 + (b/2)q2))`.
pub fn orbit_center(s: &ClassicalState) -> [f64; 2] {
    let b = s.field.strength();
    [
        (s.p[1] + 0.5 * b * s.q[0]) / b,
        (-s.p[0] + 0.5 * b * s.q[1]) / b,
    ]
}

/// Cyclotron period `2π/b`.
pub fn cyclotron_period(field: MagneticField) -> f64 {
    2.0 * std::f64::consts::PI / field.strength()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ClassicalState>,
    pub energy: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

// Hamilton's equations
fn rhs(y: [f64; 4], b: f64) -> [f64; 4] {
    let h = 0.5 * b;
    let v1 = y[2] + h * y[1];
    let v2 = y[3] - h * y[0];
    [v1, v2, h * v2, -h * v1]
}

fn rk4_step(y: [f64; 4], dt: f64, b: f64) -> [f64; 4] {
    let add = |a: [f64; 4], k: [f64; 4], s: f64| std::array::from_fn(|i| a[i] + s * k[i]);
    let k1 = rhs(y, b);
    let k2 = rhs(add(y, k1, 0.5 * dt), b);
    let k3 = rhs(add(y, k2, 0.5 * dt), b);
    let k4 = rhs(add(y, k3, dt), b);
    std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates `steps` RK4 steps; the output includes the initial state.
pub fn simulate_orbit(s0: &ClassicalState, dt: f64, steps: usize) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("at least one step is required".into()));
    }
    if !s0.is_finite() {
        return Err(Error::NonFinite("initial state".into()));
    }
    let b = s0.field.strength();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut energy = Vec::with_capacity(steps + 1);
    let mut y = s0.as_array();
    for k in 0..=steps {
        let s = ClassicalState::from_array(y, s0.field);
        if !s.is_finite() {
            return Err(Error::NonFinite(format!("state at step {k}")));
        }
        times.push(k as f64 * dt);
        energy.push(classical_energy(&s));
        states.push(s);
        if k < steps {
            y = rk4_step(y, dt, b);
        }
    }
    Ok(Trajectory { times, states, energy })
}

/// Exact solution: the velocity rotates clockwise at angular frequency `b`
/// about a fixed centre, `q1 = q̄1 - v2/b`, `q2 = q̄2 + v1/b`.
pub fn closed_form_orbit(s0: &ClassicalState, t: f64) -> ClassicalState {
    let b = s0.field.strength();
    let center = orbit_center(s0);
    let v0 = s0.velocity();
    let (sin, cos) = (b * t).sin_cos();
    let v = [v0[0] * cos + v0[1] * sin, -v0[0] * sin + v0[1] * cos];
    let q = [center[0] - v[1] / b, center[1] + v[0] / b];
    ClassicalState::from_velocity(q, v, s0.field)
}

/// Central-difference Poisson bracket `Σ_i ∂f/∂q_i ∂g/∂p_i - ∂f/∂p_i ∂g/∂q_i`.
pub fn poisson_bracket_fd<F, G>(f: F, g: G, s: &ClassicalState, h: f64) -> f64
where
    F: Fn(&ClassicalState) -> f64,
    G: Fn(&ClassicalState) -> f64,
{
    let partial = |func: &dyn Fn(&ClassicalState) -> f64, slot: usize| {
        let mut plus = s.as_array();
        let mut minus = s.as_array();
        plus[slot] += h;
        minus[slot] -= h;
        (func(&ClassicalState::from_array(plus, s.field)) - func(&ClassicalState::from_array(minus, s.field)))
            / (2.0 * h)
    };
    (0..2)
        .map(|i| partial(&f, i) * partial(&g, i + 2) - partial(&f, i + 2) * partial(&g, i))
        .sum()
}
