//! Independent numerical ground truth for the closed-form geodesics.
//!
//! [`integrate`] runs classical RK4 on the reduced first-order system
//! `x′ = xα, y′ = yβ, α′ = ⅔ α×β, β′ = −⅔ α×β` and knows nothing about the
//! classification in [`crate::geodesics`]. [`geodesic_residual`] checks the
//! geodesic equation on an evaluated curve by finite differences.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::GeodesicCurve;
use crate::manifold::{euclidean_connection_relation, g_norm, NKPoint, NKTangent};
use crate::quat::{ImQuaternion, Quaternion, UnitQuaternion};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Projection {
    /// Renormalize `x`, `y` onto S³ and drop the real parts of `α`, `β` after every step.
    #[default]
    Renormalize,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub t_end: f64,
    pub projection: Projection,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        Self {
            step: tol::RK4_STEP,
            t_end,
            projection: Projection::Renormalize,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_projection(mut self, projection: Projection) -> Self {
        self.projection = projection;
        self
    }
}

/// State of the reduced system, left-translated to start at `(1, 1)`.
///
/// `x` and `y` are plain quaternions since without projection they drift
/// off the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorState {
    pub x: Quaternion,
    pub y: Quaternion,
    pub alpha: ImQuaternion,
    pub beta: ImQuaternion,
    pub t: f64,
}

#[derive(Debug, Clone, Copy)]
struct Flow {
    x: Quaternion,
    y: Quaternion,
    alpha: Quaternion,
    beta: Quaternion,
}

impl Add for Flow {
    type Output = Flow;

    fn add(self, o: Flow) -> Flow {
        Flow {
            x: self.x + o.x,
            y: self.y + o.y,
            alpha: self.alpha + o.alpha,
            beta: self.beta + o.beta,
        }
    }
}

impl Mul<f64> for Flow {
    type Output = Flow;

    fn mul(self, s: f64) -> Flow {
        Flow {
            x: self.x * s,
            y: self.y * s,
            alpha: self.alpha * s,
            beta: self.beta * s,
        }
    }
}

impl Flow {
    fn derivative(&self) -> Flow {
        let twist = self.alpha.imag().cross(self.beta.imag()) * (2.0 / 3.0);
        Flow {
            x: self.x * self.alpha,
            y: self.y * self.beta,
            alpha: twist.quat(),
            beta: -twist.quat(),
        }
    }

    fn rk4(self, h: f64) -> Flow {
        let k1 = self.derivative();
        let k2 = (self + k1 * (0.5 * h)).derivative();
        let k3 = (self + k2 * (0.5 * h)).derivative();
        let k4 = (self + k3 * h).derivative();
        self + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }

    fn project(self) -> Flow {
        Flow {
            x: self.x * (1.0 / self.x.norm()),
            y: self.y * (1.0 / self.y.norm()),
            alpha: self.alpha.imag().quat(),
            beta: self.beta.imag().quat(),
        }
    }
}

/// Stepper that can be advanced to arbitrary times.
#[derive(Debug, Clone)]
pub struct Integrator {
    base: NKPoint,
    flow: Flow,
    t: f64,
    step: f64,
    projection: Projection,
}

impl Integrator {
    pub fn new(velocity: &NKTangent, step: f64, projection: Projection) -> Result<Self> {
        if step <= 0.0 || !step.is_finite() {
            return Err(Error::NonPositiveStep(step));
        }
        Ok(Self {
            base: velocity.base,
            flow: Flow {
                x: Quaternion::ONE,
                y: Quaternion::ONE,
                alpha: velocity.alpha().quat(),
                beta: velocity.beta().quat(),
            },
            t: 0.0,
            step,
            projection,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> IntegratorState {
        IntegratorState {
            x: self.flow.x,
            y: self.flow.y,
            alpha: self.flow.alpha.imag(),
            beta: self.flow.beta.imag(),
            t: self.t,
        }
    }

    /// Current point, translated back to the original base.
    pub fn point(&self) -> NKPoint {
        NKPoint::new(
            UnitQuaternion::normalize(self.base.p.quat() * self.flow.x),
            UnitQuaternion::normalize(self.base.q.quat() * self.flow.y),
        )
    }

    /// Current point as raw ℝ⁸ components, without renormalization.
    pub fn raw_point(&self) -> [f64; 8] {
        let x = self.base.p.quat() * self.flow.x;
        let y = self.base.q.quat() * self.flow.y;
        [x.w, x.x, x.y, x.z, y.w, y.x, y.y, y.z]
    }

    pub fn advance(&mut self, h: f64) {
        self.flow = self.flow.rk4(h);
        if self.projection == Projection::Renormalize {
            self.flow = self.flow.project();
        }
        self.t += h;
    }

    /// Advances to `t` in equal steps no longer than the configured step.
    pub fn advance_to(&mut self, t: f64) {
        let span = t - self.t;
        if span <= 0.0 {
            return;
        }
        let n = (span / self.step - 1e-9).ceil().max(1.0) as usize;
        let h = span / n as f64;
        for _ in 0..n {
            self.advance(h);
        }
        self.t = t;
    }
}

/// RK4 trace of the reduced system, one state per step including `t = 0`.
#[derive(Debug, Clone)]
pub struct Trace {
    pub base: NKPoint,
    pub states: Vec<IntegratorState>,
}

impl Trace {
    /// Points of the geodesic, translated back to the original base.
    pub fn points(&self) -> impl Iterator<Item = (f64, NKPoint)> + '_ {
        self.states.iter().map(move |s| {
            (
                s.t,
                NKPoint::new(
                    UnitQuaternion::normalize(self.base.p.quat() * s.x),
                    UnitQuaternion::normalize(self.base.q.quat() * s.y),
                ),
            )
        })
    }
}

/// Integrates on `[0, t_end]` with `ceil(t_end / step)` equal steps.
pub fn integrate(velocity: &NKTangent, config: &IntegratorConfig) -> Result<Trace> {
    let mut stepper = Integrator::new(velocity, config.step, config.projection)?;
    if config.t_end.is_nan() || config.t_end < 0.0 {
        return Err(Error::InvalidInput(format!("t_end = {}", config.t_end)));
    }
    let n = (config.t_end / config.step - 1e-9).ceil().max(0.0) as usize;
    let mut states = Vec::with_capacity(n + 1);
    states.push(stepper.state());
    if n > 0 {
        let h = config.t_end / n as f64;
        for i in 1..=n {
            stepper.advance(h);
            stepper.t = i as f64 * h;
            states.push(stepper.state());
        }
    }
    Ok(Trace {
        base: velocity.base,
        states,
    })
}

/// Integrates from the curve's initial data and returns the largest ℝ⁸
/// distance between oracle and closed form over all steps.
pub fn compare_with_closed_form(curve: &GeodesicCurve, config: &IntegratorConfig) -> Result<f64> {
    let trace = integrate(&curve.eval_velocity(0.0), config)?;
    Ok(trace
        .points()
        .map(|(t, p)| p.distance(&curve.eval(t)))
        .fold(0.0, f64::max))
}

/// `max ‖(α + β) − (α₀ + β₀)‖` over the trace.
pub fn conserved_c1_drift(trace: &[IntegratorState]) -> Result<f64> {
    let first = trace.first().ok_or(Error::EmptyTrace)?;
    let c1 = first.alpha + first.beta;
    Ok(trace
        .iter()
        .map(|s| (s.alpha + s.beta - c1).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonDrift {
    /// `max |‖ε(t)‖ − ‖ε(0)‖|`
    pub norm: f64,
    /// `max |⟨α − β, c₁⟩(t) − ⟨α − β, c₁⟩(0)|`
    pub axial: f64,
}

/// `ε = α − β − (⟨α − β, c₁⟩/‖c₁‖²) c₁` rotates about `c₁`, so its norm and
/// the scalar `⟨α − β, c₁⟩` are conserved. Returns the drift of both.
pub fn epsilon_norm_conservation(trace: &[IntegratorState]) -> Result<EpsilonDrift> {
    let first = trace.first().ok_or(Error::EmptyTrace)?;
    let c1 = first.alpha + first.beta;
    let n2 = c1.norm_sq();
    if n2 == 0.0 {
        return Err(Error::ZeroC1);
    }
    let axial = |s: &IntegratorState| (s.alpha - s.beta).dot(c1);
    let eps = |s: &IntegratorState| (s.alpha - s.beta - c1 * (axial(s) / n2)).norm();
    let (e0, d0) = (eps(first), axial(first));
    Ok(trace.iter().fold(
        EpsilonDrift {
            norm: 0.0,
            axial: 0.0,
        },
        |acc, s| EpsilonDrift {
            norm: acc.norm.max((eps(s) - e0).abs()),
            axial: acc.axial.max((axial(s) - d0).abs()),
        },
    ))
}

/// The moving part `ε(t)` of a trace state.
pub fn epsilon(state: &IntegratorState, c1: ImQuaternion) -> ImQuaternion {
    let d = state.alpha - state.beta;
    d - c1 * (d.dot(c1) / c1.norm_sq())
}

/// `max |g(γ′, γ′)^{1/2} − g(γ′(0), γ′(0))^{1/2}|` along the trace.
pub fn speed_drift(trace: &Trace) -> Result<f64> {
    let speed = |s: &IntegratorState| {
        g_norm(&NKTangent::from_trivialized(NKPoint::IDENTITY, s.alpha, s.beta))
    };
    let first = trace.states.first().ok_or(Error::EmptyTrace)?;
    let s0 = speed(first);
    Ok(trace
        .states
        .iter()
        .map(|s| (speed(s) - s0).abs())
        .fold(0.0, f64::max))
}

/// `g`-norm of `tan(γ″) − JG(γ′, Pγ′)` at `t`, where `γ″` comes from central
/// differences and `tan` drops the components along `(p, q)` and `(−p, q)`.
/// Vanishes exactly on geodesics.
pub fn geodesic_residual(curve: &GeodesicCurve, t: f64, fd_step: f64) -> Result<f64> {
    if fd_step.is_nan() || fd_step <= 0.0 {
        return Err(Error::NonPositiveStep(fd_step));
    }
    let at = curve.eval(t);
    let plus = curve.eval(t + fd_step).to_array();
    let minus = curve.eval(t - fd_step).to_array();
    let mid = at.to_array();
    let h2 = fd_step * fd_step;
    let mut acc = [0.0; 8];
    for i in 0..8 {
        acc[i] = (plus[i] - 2.0 * mid[i] + minus[i]) / h2;
    }
    let ax = Quaternion::new(acc[0], acc[1], acc[2], acc[3]);
    let ay = Quaternion::new(acc[4], acc[5], acc[6], acc[7]);
    let (p, q) = (at.p.quat(), at.q.quat());
    // ½⟨D,(p,q)⟩(p,q) + ½⟨D,(−p,q)⟩(−p,q) = (⟨a_x,p⟩p, ⟨a_y,q⟩q)
    let tangential = NKTangent {
        base: at,
        u: ax - p * ax.dot(p),
        v: ay - q * ay.dot(q),
    };
    let velocity = curve.eval_velocity(t);
    let correction = euclidean_connection_relation(&velocity, &velocity)?;
    Ok(g_norm(&(tangential - correction)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    use ImQuaternion as Im;

    fn at_identity(a: Im, b: Im) -> NKTangent {
        NKTangent::from_trivialized(NKPoint::IDENTITY, a, b)
    }

    #[test]
    fn case1_half_turn() {
        let v = at_identity(Im::I, -Im::I);
        let trace = integrate(&v, &IntegratorConfig::new(PI)).unwrap();
        let (t, end) = trace.points().last().unwrap();
        assert!((t - PI).abs() < 1e-15);
        let expected = NKPoint::new(
            UnitQuaternion::new(-Quaternion::ONE).unwrap(),
            UnitQuaternion::new(-Quaternion::ONE).unwrap(),
        );
        assert!(end.distance(&expected) < 1e-10);
        assert_eq!(conserved_c1_drift(&trace.states).unwrap(), 0.0);
    }

    #[test]
    fn zero_velocity_stays_put() {
        let v = at_identity(Im::ZERO, Im::ZERO);
        let trace = integrate(&v, &IntegratorConfig::new(2.0)).unwrap();
        assert!(trace.points().all(|(_, p)| p.same_as(&NKPoint::IDENTITY)));
    }

    #[test]
    fn rejects_bad_step() {
        let v = at_identity(Im::I, Im::J);
        let cfg = IntegratorConfig::new(1.0).with_step(0.0);
        assert!(matches!(integrate(&v, &cfg), Err(Error::NonPositiveStep(_))));
        assert!(matches!(conserved_c1_drift(&[]), Err(Error::EmptyTrace)));
        assert!(matches!(epsilon_norm_conservation(&[]), Err(Error::EmptyTrace)));
    }

    #[test]
    fn epsilon_requires_nonzero_c1() {
        let v = at_identity(Im::I, -Im::I);
        let trace = integrate(&v, &IntegratorConfig::new(0.1)).unwrap();
        assert!(matches!(epsilon_norm_conservation(&trace.states), Err(Error::ZeroC1)));
    }

    #[test]
    fn case2_has_no_moving_part() {
        let v = at_identity(Im::I * 2.0, Im::I * 0.5);
        let trace = integrate(&v, &IntegratorConfig::new(3.0)).unwrap();
        let c1 = Im::I * 2.5;
        assert!(trace.states.iter().all(|s| epsilon(s, c1).norm() == 0.0));
    }

    #[test]
    fn case3_conservation() {
        let v = at_identity(Im::I + Im::J, -Im::J);
        let trace = integrate(&v, &IntegratorConfig::new(10.0)).unwrap();
        assert!(conserved_c1_drift(&trace.states).unwrap() < 1e-8);
        let d = epsilon_norm_conservation(&trace.states).unwrap();
        assert!(d.norm < 1e-8 && d.axial < 1e-8, "{d:?}");
        assert!(speed_drift(&trace).unwrap() < 1e-8);
    }

    #[test]
    fn advance_to_hits_requested_time() {
        let v = at_identity(Im::I, -Im::I);
        let mut s = Integrator::new(&v, 1e-3, Projection::Renormalize).unwrap();
        s.advance_to(0.5);
        s.advance_to(PI);
        assert_eq!(s.time(), PI);
        assert!((s.point().p.quat().w + 1.0).abs() < 1e-10);
    }

    #[test]
    fn residual_detects_corruption() {
        let v = at_identity(Im::new(0.4, 0.3, 0.0), Im::new(0.1, -0.5, 0.2));
        let curve = GeodesicCurve::new(&v).unwrap();
        assert!(geodesic_residual(&curve, 1.3, 1e-4).unwrap() < 1e-5);
        let mut bad = curve;
        bad.params.first.freq_hi += 1e-2;
        assert!(geodesic_residual(&bad, 1.3, 1e-4).unwrap() > 1e-3);
        assert!(matches!(geodesic_residual(&curve, 0.0, 0.0), Err(Error::NonPositiveStep(_))));
    }
}
