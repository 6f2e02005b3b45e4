//! Closed-form geodesics.
//!
//! Writing a geodesic as `γ = (x, y)` with `γ′ = (xα, yβ)`, the pair
//! `(α, β)` solves `α′ = ⅔ α×β`, `β′ = −⅔ α×β`. The sum `c₁ = α + β` is
//! conserved, the component of `α − β` along `c₁` is conserved, and the
//! orthogonal component rotates about `c₁` at rate `⅔‖c₁‖`. After a rotation
//! `h` that takes `i, j, k` onto the natural frame of `c₁` and that orthogonal
//! component, each factor solves `f′ = f (a i + b cos(ct) j − b sin(ct) k)`
//! with `f(0) = 1`, whose solution is a two-frequency curve on S³.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::{g_norm, NKPoint, NKTangent};
use crate::quat::{rotation_from_frame, ImQuaternion, Quaternion, UnitQuaternion};
use crate::rational::{approximate, fundamental_frequency, Fraction};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeodesicCase {
    /// Zero initial velocity.
    Constant,
    /// `c₁ = 0`: `α = −β` constant.
    Case1,
    /// `c₁ ≠ 0`, `c₂ = 0`: `α`, `β` constant and parallel.
    Case2,
    /// `c₁ ≠ 0`, `c₂ ≠ 0`.
    Case3,
}

impl std::fmt::Display for GeodesicCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GeodesicCase::Constant => "Constant",
            GeodesicCase::Case1 => "Case1",
            GeodesicCase::Case2 => "Case2",
            GeodesicCase::Case3 => "Case3",
        })
    }
}

/// Constants of one factor, i.e. of the curve `f` solving
/// `f′ = f·(a i + b cos(ct) j − b sin(ct) k)`, `f(0) = 1`.
///
/// `λ² − c i λ + (a² + b² − ac) = 0` has roots `i·freq_hi`, `i·freq_lo`, and
/// the solution mixes `e^{i·freq_hi·t}` and `e^{i·freq_lo·t}` with weights
/// `1/(1+φ²)` and `φ²/(1+φ²)`, `φ = mix`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorConstants {
    /// `a`, the coefficient of `i`.
    pub axial: f64,
    /// `b`, the amplitude of the rotating `j, k` part.
    pub transverse: f64,
    /// `c`, the rotation rate of the `j, k` part.
    pub rate: f64,
    /// `A = (c + √((2a − c)² + 4b²))/2`
    pub freq_hi: f64,
    /// `B = (c − √((2a − c)² + 4b²))/2`
    pub freq_lo: f64,
    /// `φ`, the positive-discriminant root of `bφ² − (c − 2a)φ − b = 0`.
    /// Infinite when `b = 0` and `c > 2a`.
    pub mix: f64,
    /// `θ = arctan φ`.
    pub mix_angle: f64,
}

impl FactorConstants {
    pub fn new(axial: f64, transverse: f64, rate: f64) -> Self {
        let (a, b, c) = (axial, transverse, rate);
        let disc = ((2.0 * a - c).powi(2) + 4.0 * b * b).sqrt();
        let lead = c - 2.0 * a;
        let mix = if b == 0.0 {
            if lead <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else if lead >= 0.0 {
            (lead + disc) / (2.0 * b)
        } else {
            // same root, without the cancellation in lead + disc
            2.0 * b / (disc - lead)
        };
        Self {
            axial: a,
            transverse: b,
            rate: c,
            freq_hi: 0.5 * (c + disc),
            freq_lo: 0.5 * (c - disc),
            mix,
            mix_angle: mix.atan(),
        }
    }

    /// `(1/(1+φ²), φ²/(1+φ²), φ/(1+φ²))`
    pub fn weights(&self) -> (f64, f64, f64) {
        let phi = self.mix;
        if phi.is_infinite() {
            return (0.0, 1.0, 0.0);
        }
        let d = 1.0 + phi * phi;
        (1.0 / d, phi * phi / d, phi / d)
    }

    /// `a i + b cos(ct) j − b sin(ct) k`
    pub fn trivialized_velocity(&self, t: f64) -> ImQuaternion {
        let (s, c) = (self.rate * t).sin_cos();
        ImQuaternion::new(self.axial, self.transverse * c, -self.transverse * s)
    }

    /// The curve `f(t)` in the form with `φ`.
    pub fn path(&self, t: f64) -> Quaternion {
        let (hi, lo, cross) = self.weights();
        self.assemble(t, hi, lo, cross)
    }

    /// The same curve with `cos²θ`, `sin²θ`, `sinθ cosθ` in place of the
    /// `φ` weights.
    pub fn path_theta_form(&self, t: f64) -> Quaternion {
        let (s, c) = self.mix_angle.sin_cos();
        self.assemble(t, c * c, s * s, s * c)
    }

    fn assemble(&self, t: f64, hi: f64, lo: f64, cross: f64) -> Quaternion {
        let (sa, ca) = (self.freq_hi * t).sin_cos();
        let (sb, cb) = (self.freq_lo * t).sin_cos();
        Quaternion::new(
            hi * ca + lo * cb,
            hi * sa + lo * sb,
            cross * (sa - sb),
            -cross * (cb - ca),
        )
    }
}

/// Which eigenspace of `P` contains the velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PEigenClass {
    MinusOne,
    PlusOne,
    Neither,
}

impl std::fmt::Display for PEigenClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PEigenClass::MinusOne => "P-eigenvalue -1",
            PEigenClass::PlusOne => "P-eigenvalue +1",
            PEigenClass::Neither => "not a P-eigenvector",
        })
    }
}

/// Classified initial data plus every derived constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicParams {
    pub case: GeodesicCase,
    /// Start point `(p₀, q₀)`; the curve is the left translate of one through `(1, 1)`.
    pub base: NKPoint,
    /// Rotation taking `i, j, k` to the frame of `c₁`, `c₂`, `c₁×c₂`.
    pub h: UnitQuaternion,
    /// `c₁ = α + β` (set to zero in `Case1`).
    pub c1: ImQuaternion,
    /// `c₂`, the part of `α₀ − β₀` orthogonal to `c₁` (set to zero unless `Case3`).
    pub c2: ImQuaternion,
    /// `d₁ = ⟨α − β, c₁⟩ / ‖c₁‖²`
    pub d1: f64,
    /// Constants of the first factor `x`.
    pub first: FactorConstants,
    /// Constants of the second factor `y`.
    pub second: FactorConstants,
}

impl GeodesicParams {
    /// Classifies the geodesic through `start` with initial velocity `velocity`.
    pub fn derive(start: &NKPoint, velocity: &NKTangent) -> Result<Self> {
        if !start.same_as(&velocity.base) {
            return Err(Error::BaseMismatch);
        }
        let alpha = velocity.alpha();
        let beta = velocity.beta();
        let scale = (alpha.norm_sq() + beta.norm_sq()).sqrt();
        let zero = tol::CLASSIFY_ZERO * scale;

        let mut params = Self {
            case: GeodesicCase::Constant,
            base: *start,
            h: UnitQuaternion::IDENTITY,
            c1: ImQuaternion::ZERO,
            c2: ImQuaternion::ZERO,
            d1: 0.0,
            first: FactorConstants::new(0.0, 0.0, 0.0),
            second: FactorConstants::new(0.0, 0.0, 0.0),
        };
        if scale == 0.0 {
            return Ok(params);
        }

        let c1 = alpha + beta;
        let diff = alpha - beta;
        if c1.norm() <= zero {
            let half = diff * 0.5;
            let a = half.norm();
            params.case = GeodesicCase::Case1;
            params.h = align_axis(half * (1.0 / a))?;
            params.first = FactorConstants::new(a, 0.0, 0.0);
            params.second = FactorConstants::new(-a, 0.0, 0.0);
            return Ok(params);
        }

        let n1 = c1.norm();
        let u1 = c1 * (1.0 / n1);
        let d1 = diff.dot(c1) / (n1 * n1);
        let mut c2 = diff - c1 * d1;
        c2 = c2 - u1 * c2.dot(u1);
        params.c1 = c1;
        params.d1 = d1;
        let a = 0.5 * (1.0 + d1) * n1;
        let a_t = 0.5 * (1.0 - d1) * n1;

        if c2.norm() <= zero {
            params.case = GeodesicCase::Case2;
            params.h = align_axis(u1)?;
            params.first = FactorConstants::new(a, 0.0, 0.0);
            params.second = FactorConstants::new(a_t, 0.0, 0.0);
            return Ok(params);
        }

        let n2 = c2.norm();
        let u2 = c2 * (1.0 / n2);
        params.case = GeodesicCase::Case3;
        params.c2 = c2;
        params.h = rotation_from_frame(u1, u2, u1.cross(u2))?;
        let rate = 2.0 / 3.0 * n1;
        params.first = FactorConstants::new(a, 0.5 * n2, rate);
        params.second = FactorConstants::new(a_t, -0.5 * n2, rate);
        Ok(params)
    }

    /// `c₃ = −(c₁/‖c₁‖) × c₂`
    pub fn c3(&self) -> ImQuaternion {
        match self.c1.normalized() {
            Some(u1) => -u1.cross(self.c2),
            None => ImQuaternion::ZERO,
        }
    }

    /// Whether the curve is also a geodesic of the Euclidean product metric.
    pub fn is_euclidean_geodesic(&self) -> bool {
        self.case != GeodesicCase::Case3
    }

    pub fn p_eigenvector_class(&self) -> PEigenClass {
        match self.case {
            GeodesicCase::Case1 => PEigenClass::MinusOne,
            GeodesicCase::Case2 if self.d1.abs() <= tol::CLASSIFY_ZERO => PEigenClass::PlusOne,
            _ => PEigenClass::Neither,
        }
    }

    /// `‖γ′‖² = (1/3 + d₁²)‖c₁‖² + ‖c₂‖²` for `Case2`/`Case3`, `4a²` for `Case1`.
    pub fn speed_squared(&self) -> f64 {
        match self.case {
            GeodesicCase::Constant => 0.0,
            GeodesicCase::Case1 => 4.0 * self.first.axial * self.first.axial,
            _ => (1.0 / 3.0 + self.d1 * self.d1) * self.c1.norm_sq() + self.c2.norm_sq(),
        }
    }

    /// Closedness test. Frequency ratios are accepted as rational when a
    /// continued-fraction convergent with denominator at most
    /// `max_denominator` matches them to relative tolerance [`tol::RATIONAL`].
    pub fn closedness(&self, max_denominator: u64) -> Closedness {
        let rational = |x: f64| approximate(x, max_denominator, tol::RATIONAL);
        match self.case {
            GeodesicCase::Constant => Closedness {
                period: Some(0.0),
                ratios: Vec::new(),
            },
            GeodesicCase::Case1 => {
                let a = self.first.axial;
                Closedness {
                    period: Some(TAU / a.abs()),
                    ratios: vec![RatioCheck::new("a/a~", -1.0, Some(Fraction { num: -1, den: 1 }))],
                }
            }
            GeodesicCase::Case2 => {
                let (a, a_t) = (self.first.axial, self.second.axial);
                let zero = tol::CLASSIFY_ZERO * self.c1.norm();
                if a.abs() <= zero || a_t.abs() <= zero {
                    // one factor stays put; the other sets the period
                    let live = if a.abs() > a_t.abs() { a } else { a_t };
                    return Closedness {
                        period: Some(TAU / live.abs()),
                        ratios: Vec::new(),
                    };
                }
                let ratio = a / a_t;
                let approx = rational(ratio);
                let period = approx.map(|f| TAU * f.den as f64 / a_t.abs());
                Closedness {
                    period,
                    ratios: vec![RatioCheck::new("a/a~", ratio, approx)],
                }
            }
            GeodesicCase::Case3 => {
                let (x, y) = (&self.first, &self.second);
                let r1 = x.freq_lo / x.freq_hi;
                let r2 = y.freq_lo / y.freq_hi;
                let (f1, f2) = (rational(r1), rational(r2));
                let period = match (f1, f2) {
                    (Some(f1), Some(f2)) => {
                        // A + B = c with B/A = p/q gives A/c = q/(p+q), B/c = p/(p+q).
                        let parts = |f: Fraction| {
                            let s = f.num + f.den;
                            [Fraction { num: f.den, den: s }, Fraction { num: f.num, den: s }]
                        };
                        let mut rs = parts(f1).to_vec();
                        rs.extend(parts(f2));
                        fundamental_frequency(x.rate, &rs).map(|w| TAU / w)
                    }
                    _ => None,
                };
                Closedness {
                    period,
                    ratios: vec![
                        RatioCheck::new("B/A", r1, f1),
                        RatioCheck::new("B~/A~", r2, f2),
                    ],
                }
            }
        }
    }
}

/// Initial velocity at `(1, 1)` whose constants are `‖c₁‖ = c1_norm` along
/// `i`, the given `d₁`, and `‖c₂‖ = c2_norm` along `j`.
pub fn canonical_velocity(c1_norm: f64, d1: f64, c2_norm: f64) -> NKTangent {
    let alpha = ImQuaternion::new(0.5 * (1.0 + d1) * c1_norm, 0.5 * c2_norm, 0.0);
    let beta = ImQuaternion::new(0.5 * (1.0 - d1) * c1_norm, -0.5 * c2_norm, 0.0);
    NKTangent::from_trivialized(NKPoint::IDENTITY, alpha, beta)
}

fn align_axis(u1: ImQuaternion) -> Result<UnitQuaternion> {
    let fallback = if u1.dot(ImQuaternion::J).abs() < 0.9 {
        ImQuaternion::J
    } else {
        ImQuaternion::K
    };
    let u2 = (fallback - u1 * fallback.dot(u1))
        .normalized()
        .expect("fallback axis is not parallel to u1");
    rotation_from_frame(u1, u2, u1.cross(u2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCheck {
    pub label: &'static str,
    pub value: f64,
    pub approx: Option<Fraction>,
}

impl RatioCheck {
    fn new(label: &'static str, value: f64, approx: Option<Fraction>) -> Self {
        Self {
            label,
            value,
            approx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Closedness {
    /// Fundamental period when closed; `0` for a constant curve.
    pub period: Option<f64>,
    pub ratios: Vec<RatioCheck>,
}

impl Closedness {
    pub fn is_closed(&self) -> bool {
        self.period.is_some()
    }
}

/// A geodesic ready for evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicCurve {
    pub params: GeodesicParams,
    /// `g`-norm of the velocity.
    pub speed: f64,
}

impl GeodesicCurve {
    /// The geodesic with initial velocity `velocity` at `velocity.base`.
    pub fn new(velocity: &NKTangent) -> Result<Self> {
        Self::from_params(GeodesicParams::derive(&velocity.base, velocity)?)
    }

    pub fn from_params(params: GeodesicParams) -> Result<Self> {
        let mut curve = Self { params, speed: 0.0 };
        curve.speed = g_norm(&curve.eval_velocity(0.0));
        Ok(curve)
    }

    pub fn case(&self) -> GeodesicCase {
        self.params.case
    }

    pub fn start(&self) -> NKPoint {
        self.params.base
    }

    /// `γ(t) = (p₀·h x(t) h⁻¹, q₀·h y(t) h⁻¹)`
    pub fn eval(&self, t: f64) -> NKPoint {
        let p = &self.params;
        let x = p.h.conjugate_quat(p.first.path(t));
        let y = p.h.conjugate_quat(p.second.path(t));
        NKPoint::new(
            UnitQuaternion::normalize(p.base.p.quat() * x),
            UnitQuaternion::normalize(p.base.q.quat() * y),
        )
    }

    /// `γ′(t) = (X(t)·hα(t)h⁻¹, Y(t)·hβ(t)h⁻¹)`
    pub fn eval_velocity(&self, t: f64) -> NKTangent {
        let p = &self.params;
        let alpha = p.h.conjugate(p.first.trivialized_velocity(t));
        let beta = p.h.conjugate(p.second.trivialized_velocity(t));
        NKTangent::from_trivialized(self.eval(t), alpha, beta)
    }

    /// The same geodesic traversed at unit speed.
    pub fn arclength_reparam(&self) -> Result<Self> {
        if self.speed.is_nan() || self.speed <= 0.0 {
            return Err(Error::ZeroSpeedCurve);
        }
        Self::new(&(self.eval_velocity(0.0) * (1.0 / self.speed)))
    }

    pub fn closedness(&self, max_denominator: u64) -> Closedness {
        self.params.closedness(max_denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{almost_product_p, metric_g};
    use std::f64::consts::PI;

    const EPS: f64 = 1e-12;

    fn at_identity(alpha: ImQuaternion, beta: ImQuaternion) -> NKTangent {
        NKTangent::from_trivialized(NKPoint::IDENTITY, alpha, beta)
    }

    fn derive(alpha: ImQuaternion, beta: ImQuaternion) -> GeodesicParams {
        GeodesicParams::derive(&NKPoint::IDENTITY, &at_identity(alpha, beta)).unwrap()
    }

    use ImQuaternion as Im;

    #[test]
    fn case1_example() {
        let p = derive(Im::I, -Im::I);
        assert_eq!(p.case, GeodesicCase::Case1);
        assert!((p.first.axial - 1.0).abs() < EPS);
        assert_eq!(p.h, UnitQuaternion::IDENTITY);
    }

    #[test]
    fn case2_example() {
        let p = derive(Im::I, Im::ZERO);
        assert_eq!(p.case, GeodesicCase::Case2);
        assert!((p.c1 - Im::I).norm() < EPS);
        assert!((p.d1 - 1.0).abs() < EPS);
        assert!((p.first.axial - 1.0).abs() < EPS);
        assert!(p.second.axial.abs() < EPS);
        let curve = GeodesicCurve::from_params(p).unwrap();
        let pt = curve.eval(0.7);
        let expected = Quaternion::new(0.7f64.cos(), 0.7f64.sin(), 0.0, 0.0);
        assert!(pt.p.quat().max_abs_diff(expected) < EPS);
        assert!(pt.q.quat().max_abs_diff(Quaternion::ONE) < EPS);
    }

    #[test]
    fn case3_example() {
        let p = derive(Im::I + Im::J, -Im::J);
        assert_eq!(p.case, GeodesicCase::Case3);
        assert!((p.c1 - Im::I).norm() < EPS);
        assert!((p.d1 - 1.0).abs() < EPS);
        assert!((p.c2 - Im::J * 2.0).norm() < EPS);
        assert!((p.c3() - Im::K * -2.0).norm() < EPS);
        assert_eq!(p.h, UnitQuaternion::IDENTITY);
        assert!((p.first.axial - 1.0).abs() < EPS);
        assert!((p.first.transverse - 1.0).abs() < EPS);
        assert!((p.first.rate - 2.0 / 3.0).abs() < EPS);
        assert!(p.second.axial.abs() < EPS);
        assert!((p.second.transverse + 1.0).abs() < EPS);
    }

    #[test]
    fn zero_velocity_is_constant() {
        let p = derive(Im::ZERO, Im::ZERO);
        assert_eq!(p.case, GeodesicCase::Constant);
        let curve = GeodesicCurve::from_params(p).unwrap();
        assert_eq!(curve.speed, 0.0);
        assert!(curve.eval(3.0).same_as(&NKPoint::IDENTITY));
        assert_eq!(curve.closedness(10).period, Some(0.0));
        assert!(matches!(curve.arclength_reparam(), Err(Error::ZeroSpeedCurve)));
    }

    #[test]
    fn base_mismatch() {
        let other = NKPoint::new(UnitQuaternion::new(Quaternion::I).unwrap(), UnitQuaternion::IDENTITY);
        let v = at_identity(Im::I, Im::J);
        assert!(matches!(GeodesicParams::derive(&other, &v), Err(Error::BaseMismatch)));
    }

    #[test]
    fn case1_closed_form() {
        let curve = GeodesicCurve::new(&at_identity(Im::I, -Im::I)).unwrap();
        for &t in &[0.0, 0.3, 1.0, PI, 5.5] {
            let pt = curve.eval(t);
            let (s, c) = f64::sin_cos(t);
            assert!(pt.p.quat().max_abs_diff(Quaternion::new(c, s, 0.0, 0.0)) < EPS);
            assert!(pt.q.quat().max_abs_diff(Quaternion::new(c, -s, 0.0, 0.0)) < EPS);
            let v = curve.eval_velocity(t);
            assert!((v.alpha() - Im::I).norm() < EPS);
            assert!((v.beta() + Im::I).norm() < EPS);
        }
    }

    #[test]
    fn case3_velocity_at_quarter_turn() {
        let p = derive(Im::I + Im::J, -Im::J);
        // rate·t = π/2
        let t = 3.0 * PI / (4.0 * p.c1.norm());
        let alpha = p.first.trivialized_velocity(t);
        let expected = Im::I * p.first.axial - Im::K * p.first.transverse;
        assert!((alpha - expected).norm() < EPS);
        let alpha = p.first.trivialized_velocity(2.0 * t);
        let expected = Im::I * p.first.axial - Im::J * p.first.transverse;
        assert!((alpha - expected).norm() < EPS);
    }

    #[test]
    fn velocity_round_trip_at_general_base() {
        let base = NKPoint::new(
            UnitQuaternion::normalize(Quaternion::new(0.2, -0.4, 0.5, 0.7)),
            UnitQuaternion::normalize(Quaternion::new(0.9, 0.1, -0.3, 0.2)),
        );
        for (a, b) in [
            (Im::new(0.3, -0.2, 0.9), Im::new(-0.5, 0.4, 0.1)),
            (Im::new(0.3, -0.2, 0.9), Im::new(-0.3, 0.2, -0.9)),
            (Im::new(0.3, -0.2, 0.9), Im::new(0.6, -0.4, 1.8)),
        ] {
            let v = NKTangent::from_trivialized(base, a, b);
            let curve = GeodesicCurve::new(&v).unwrap();
            assert!(curve.eval(0.0).distance(&base) < 1e-14);
            assert!(curve.eval_velocity(0.0).max_abs_diff(&v) < 1e-12, "{:?}", curve.case());
        }
    }

    #[test]
    fn phi_is_root_and_theta_matches() {
        for (a, b, c) in [(1.0, 1.0, 2.0 / 3.0), (0.0, -1.0, 2.0 / 3.0), (3.0, 0.01, 0.2), (-2.0, 0.5, 4.0)] {
            let f = FactorConstants::new(a, b, c);
            let phi = f.mix;
            assert!((b * phi * phi - (c - 2.0 * a) * phi - b).abs() < EPS);
            assert!((f.freq_hi + f.freq_lo - c).abs() < EPS);
            assert!((f.freq_hi * f.freq_lo - (a * c - a * a - b * b)).abs() < EPS);
            let (ct, st) = (f.mix_angle.cos(), f.mix_angle.sin());
            assert!((ct * ct - 1.0 / (1.0 + phi * phi)).abs() < EPS);
            assert!((st * ct - phi / (1.0 + phi * phi)).abs() < EPS);
            for t in [0.0, 0.5, 2.0, 9.0] {
                assert!(f.path(t).max_abs_diff(f.path_theta_form(t)) < EPS);
            }
        }
    }

    #[test]
    fn single_frequency_factors() {
        for a in [2.0, -1.5, 0.0] {
            let f = FactorConstants::new(a, 0.0, 0.0);
            let t = 0.9;
            let q = f.path(t);
            let expected = Quaternion::new((a * t).cos(), (a * t).sin(), 0.0, 0.0);
            assert!(q.max_abs_diff(expected) < EPS, "a = {a}");
            assert!(f.path_theta_form(t).max_abs_diff(expected) < EPS);
        }
    }

    #[test]
    fn predicates() {
        assert!(derive(Im::I, -Im::I).is_euclidean_geodesic());
        assert!(derive(Im::I, Im::ZERO).is_euclidean_geodesic());
        assert!(!derive(Im::I + Im::J, -Im::J).is_euclidean_geodesic());
        assert!(derive(Im::ZERO, Im::ZERO).is_euclidean_geodesic());

        assert_eq!(derive(Im::I, -Im::I).p_eigenvector_class(), PEigenClass::MinusOne);
        let plus = derive(Im::I, Im::I);
        assert!((plus.c1 - Im::I * 2.0).norm() < EPS);
        assert_eq!(plus.p_eigenvector_class(), PEigenClass::PlusOne);
        let neither = derive(Im::I, Im::ZERO);
        assert_eq!(neither.p_eigenvector_class(), PEigenClass::Neither);
        let curve = GeodesicCurve::from_params(neither).unwrap();
        let v = curve.eval_velocity(0.4);
        let pv = almost_product_p(&v);
        assert!((pv - v).euclidean_norm() > 0.1 && (pv + v).euclidean_norm() > 0.1);
    }

    #[test]
    fn closedness_examples() {
        let c = derive(Im::I, -Im::I).closedness(tol::DEFAULT_MAX_DENOMINATOR);
        assert!((c.period.unwrap() - TAU).abs() < 1e-12);

        let c = derive(Im::I * 2.0, Im::I).closedness(tol::DEFAULT_MAX_DENOMINATOR);
        assert!((c.period.unwrap() - TAU).abs() < 1e-12);

        // a = √2, ã = 1: c₁ = (1 + √2) i, d₁ = (√2 − 1)/(√2 + 1)
        let c = derive(Im::I * 2f64.sqrt(), Im::I).closedness(10_000);
        assert!(!c.is_closed());
        assert!(c.ratios[0].approx.is_none());
    }

    #[test]
    fn case2_with_a_stationary_factor() {
        let c = derive(Im::I * 3.0, Im::ZERO).closedness(100);
        assert!((c.period.unwrap() - TAU / 3.0).abs() < 1e-12);
    }

    #[test]
    fn speed_examples() {
        let curve = GeodesicCurve::new(&at_identity(Im::I, -Im::I)).unwrap();
        assert!((curve.speed - 2.0).abs() < EPS);
        let unit = curve.arclength_reparam().unwrap();
        assert!((unit.speed - 1.0).abs() < EPS);
        assert!((unit.params.first.axial - 0.5).abs() < EPS);

        let p = derive(Im::I * 2.0, Im::I);
        assert!((p.c1 - Im::I * 3.0).norm() < EPS);
        assert!((p.d1 - 1.0 / 3.0).abs() < EPS);
        assert!((p.speed_squared() - 4.0).abs() < EPS);
        let curve = GeodesicCurve::from_params(p).unwrap();
        let v = curve.eval_velocity(1.2);
        assert!((metric_g(&v, &v).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn unit_speed_curve_is_fixed_by_reparam() {
        let v = at_identity(Im::new(0.3, 0.1, 0.0), Im::new(0.0, 0.2, -0.4));
        let unit = GeodesicCurve::new(&v).unwrap().arclength_reparam().unwrap();
        let again = unit.arclength_reparam().unwrap();
        for t in [0.0, 1.0, 4.0] {
            assert!(unit.eval(t).distance(&again.eval(t)) < 1e-13);
        }
    }
}
