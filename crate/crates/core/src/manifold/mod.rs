//! The homogeneous nearly Kähler structure on S³×S³.
//!
//! A tangent vector at `(p, q)` is a pair `(U, V)` with `U ⟂ p` and `V ⟂ q`
//! in ℝ⁴. Most formulas are easiest in the left-trivialized form
//! `α = p⁻¹U`, `β = q⁻¹V`, both purely imaginary.

mod frame;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use frame::{
    connection_table, frame_field, levi_civita, lie_bracket_frame, nabla_j_table, Family,
    FrameCombo, FrameIndex,
};

use crate::error::{Error, Result};
use crate::quat::{ImQuaternion, Quaternion, UnitQuaternion};
use crate::tol;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// A point `(p, q)` of S³×S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NKPoint {
    pub p: UnitQuaternion,
    pub q: UnitQuaternion,
}

impl NKPoint {
    /// The point `(1, 1)`.
    pub const IDENTITY: NKPoint = NKPoint {
        p: UnitQuaternion::IDENTITY,
        q: UnitQuaternion::IDENTITY,
    };

    pub fn new(p: UnitQuaternion, q: UnitQuaternion) -> Self {
        Self { p, q }
    }

    /// Builds a point from eight reals `p0..p3, q0..q3`, normalizing each
    /// factor when its norm is within `tolerance` of one.
    pub fn from_components(c: [f64; 8], tolerance: f64) -> Result<Self> {
        let p = Quaternion::new(c[0], c[1], c[2], c[3]);
        let q = Quaternion::new(c[4], c[5], c[6], c[7]);
        Ok(Self {
            p: UnitQuaternion::try_normalize(p, tolerance)?,
            q: UnitQuaternion::try_normalize(q, tolerance)?,
        })
    }

    pub fn to_array(self) -> [f64; 8] {
        let (p, q) = (self.p.quat(), self.q.quat());
        [p.w, p.x, p.y, p.z, q.w, q.x, q.y, q.z]
    }

    /// Euclidean distance in ℝ⁸.
    pub fn distance(&self, other: &NKPoint) -> f64 {
        let (a, b) = (self.to_array(), other.to_array());
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    pub fn same_as(&self, other: &NKPoint) -> bool {
        self.p.quat().max_abs_diff(other.p.quat()) <= tol::BASE_MATCH
            && self.q.quat().max_abs_diff(other.q.quat()) <= tol::BASE_MATCH
    }
}

/// A tangent vector `(U, V)` at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NKTangent {
    pub base: NKPoint,
    pub u: Quaternion,
    pub v: Quaternion,
}

impl NKTangent {
    /// Validates tangency. Defects up to [`tol::TANGENT_PROJECT`] (relative to
    /// the component size) are projected away, larger ones are rejected.
    pub fn new(base: NKPoint, u: Quaternion, v: Quaternion) -> Result<Self> {
        let u = project_tangent(base.p.quat(), u)?;
        let v = project_tangent(base.q.quat(), v)?;
        Ok(Self { base, u, v })
    }

    /// `(pα, qβ)`; always tangent.
    pub fn from_trivialized(base: NKPoint, alpha: ImQuaternion, beta: ImQuaternion) -> Self {
        Self {
            base,
            u: base.p.quat() * alpha.quat(),
            v: base.q.quat() * beta.quat(),
        }
    }

    pub fn zero(base: NKPoint) -> Self {
        Self {
            base,
            u: Quaternion::ZERO,
            v: Quaternion::ZERO,
        }
    }

    /// `p⁻¹U`
    pub fn alpha(&self) -> ImQuaternion {
        (self.base.p.inverse().quat() * self.u).imag()
    }

    /// `q⁻¹V`
    pub fn beta(&self) -> ImQuaternion {
        (self.base.q.inverse().quat() * self.v).imag()
    }

    pub fn to_array(&self) -> [f64; 8] {
        let (u, v) = (self.u, self.v);
        [u.w, u.x, u.y, u.z, v.w, v.x, v.y, v.z]
    }

    pub fn euclidean_norm(&self) -> f64 {
        (self.u.norm_sq() + self.v.norm_sq()).sqrt()
    }

    /// Largest componentwise difference of the ℝ⁸ representations.
    pub fn max_abs_diff(&self, other: &NKTangent) -> f64 {
        self.u
            .max_abs_diff(other.u)
            .max(self.v.max_abs_diff(other.v))
    }

    fn with(&self, u: Quaternion, v: Quaternion) -> Self {
        Self {
            base: self.base,
            u,
            v,
        }
    }
}

fn project_tangent(base: Quaternion, w: Quaternion) -> Result<Quaternion> {
    let defect = w.dot(base);
    if !defect.is_finite() || defect.abs() > tol::TANGENT_PROJECT * w.norm().max(1.0) {
        return Err(Error::NotTangent(defect.abs()));
    }
    Ok(w - base * defect)
}

fn check_base(a: &NKTangent, b: &NKTangent) -> Result<()> {
    if a.base.same_as(&b.base) {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

// Vector-space operations; both operands are expected at the same base point.

impl Add for NKTangent {
    type Output = NKTangent;

    fn add(self, o: NKTangent) -> NKTangent {
        debug_assert!(self.base.same_as(&o.base));
        self.with(self.u + o.u, self.v + o.v)
    }
}

impl Sub for NKTangent {
    type Output = NKTangent;

    fn sub(self, o: NKTangent) -> NKTangent {
        debug_assert!(self.base.same_as(&o.base));
        self.with(self.u - o.u, self.v - o.v)
    }
}

impl Mul<f64> for NKTangent {
    type Output = NKTangent;

    fn mul(self, s: f64) -> NKTangent {
        self.with(self.u * s, self.v * s)
    }
}

impl Neg for NKTangent {
    type Output = NKTangent;

    fn neg(self) -> NKTangent {
        self * -1.0
    }
}

/// Euclidean product metric `⟨U,U′⟩ + ⟨V,V′⟩`.
pub fn metric_euclidean(z: &NKTangent, zp: &NKTangent) -> Result<f64> {
    check_base(z, zp)?;
    Ok(z.u.dot(zp.u) + z.v.dot(zp.v))
}

/// The nearly Kähler metric
/// `g = 4/3 (⟨U,U′⟩ + ⟨V,V′⟩) − 2/3 (⟨p⁻¹U, q⁻¹V′⟩ + ⟨p⁻¹U′, q⁻¹V⟩)`.
pub fn metric_g(z: &NKTangent, zp: &NKTangent) -> Result<f64> {
    check_base(z, zp)?;
    Ok(metric_g_unchecked(z, zp))
}

fn metric_g_unchecked(z: &NKTangent, zp: &NKTangent) -> f64 {
    let direct = z.u.dot(zp.u) + z.v.dot(zp.v);
    let mixed = z.alpha().dot(zp.beta()) + zp.alpha().dot(z.beta());
    4.0 / 3.0 * direct - 2.0 / 3.0 * mixed
}

/// The same metric written as `½(⟨Z,Z′⟩ + ⟨JZ,JZ′⟩)`.
pub fn metric_g_hermitian(z: &NKTangent, zp: &NKTangent) -> Result<f64> {
    let plain = metric_euclidean(z, zp)?;
    let rotated = metric_euclidean(&almost_complex_j(z), &almost_complex_j(zp))?;
    Ok(0.5 * (plain + rotated))
}

/// `g(Z, Z)^{1/2}`.
pub fn g_norm(z: &NKTangent) -> f64 {
    metric_g_unchecked(z, z).max(0.0).sqrt()
}

/// `JZ = (1/√3)(2pq⁻¹V − U, −2qp⁻¹U + V)`.
pub fn almost_complex_j(z: &NKTangent) -> NKTangent {
    let (p, q) = (z.base.p.quat(), z.base.q.quat());
    let pqi = p * q.conj();
    let qpi = q * p.conj();
    let s = 1.0 / SQRT_3;
    z.with(
        (pqi * z.v * 2.0 - z.u) * s,
        (z.v - qpi * z.u * 2.0) * s,
    )
}

/// `PZ = (pq⁻¹V, qp⁻¹U)`.
pub fn almost_product_p(z: &NKTangent) -> NKTangent {
    let (p, q) = (z.base.p.quat(), z.base.q.quat());
    z.with(p * q.conj() * z.v, q * p.conj() * z.u)
}

/// The ordinary product structure `Q(U, V) = (−U, V)`.
pub fn product_q(z: &NKTangent) -> NKTangent {
    z.with(-z.u, z.v)
}

/// `Q` rebuilt from `P` and `J`: `(1/√3)(2PJZ − JZ)`.
pub fn q_from_p(z: &NKTangent) -> NKTangent {
    let jz = almost_complex_j(z);
    (almost_product_p(&jz) * 2.0 - jz) * (1.0 / SQRT_3)
}

/// `P` rebuilt from `Q` and `J`: `½(Z − √3 QJZ)`.
pub fn p_from_q(z: &NKTangent) -> NKTangent {
    (*z - product_q(&almost_complex_j(z)) * SQRT_3) * 0.5
}

/// The tensor `G = ∇J`, evaluated from the left-trivialized components of
/// `X = (pα, qβ)` and `Y = (pγ, qδ)`.
pub fn tensor_g(x: &NKTangent, y: &NKTangent) -> Result<NKTangent> {
    check_base(x, y)?;
    Ok(tensor_g_unchecked(x, y))
}

fn tensor_g_unchecked(x: &NKTangent, y: &NKTangent) -> NKTangent {
    let (a, b) = (x.alpha(), x.beta());
    let (c, d) = (y.alpha(), y.beta());
    let first = b.cross(c) + a.cross(d) + a.cross(c) - b.cross(d) * 2.0;
    let second = a.cross(c) * 2.0 - a.cross(d) - b.cross(c) - b.cross(d);
    let s = 2.0 / (3.0 * SQRT_3);
    NKTangent::from_trivialized(x.base, first * s, second * s)
}

/// `∇ᴱ_X Y − ∇̃_X Y = ½(JG(X, PY) + JG(Y, PX))`, the difference between the
/// Euclidean product connection and the nearly Kähler one.
pub fn euclidean_connection_relation(x: &NKTangent, y: &NKTangent) -> Result<NKTangent> {
    check_base(x, y)?;
    let a = almost_complex_j(&tensor_g_unchecked(x, &almost_product_p(y)));
    let b = almost_complex_j(&tensor_g_unchecked(y, &almost_product_p(x)));
    Ok((a + b) * 0.5)
}

/// The isometry `(p, q) ↦ (a p c⁻¹, b q c⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub a: UnitQuaternion,
    pub b: UnitQuaternion,
    pub c: UnitQuaternion,
}

impl Isometry {
    pub fn new(a: UnitQuaternion, b: UnitQuaternion, c: UnitQuaternion) -> Self {
        Self { a, b, c }
    }

    /// Simultaneous conjugation `(p, q) ↦ (hph⁻¹, hqh⁻¹)`.
    pub fn conjugation(h: UnitQuaternion) -> Self {
        Self::new(h, h, h)
    }

    pub fn apply(&self, pt: &NKPoint) -> NKPoint {
        let ci = self.c.inverse();
        NKPoint::new(self.a * pt.p * ci, self.b * pt.q * ci)
    }

    /// Pushforward `(U, V) ↦ (aUc⁻¹, bVc⁻¹)`.
    pub fn push_forward(&self, z: &NKTangent) -> NKTangent {
        let ci = self.c.inverse().quat();
        NKTangent {
            base: self.apply(&z.base),
            u: self.a.quat() * z.u * ci,
            v: self.b.quat() * z.v * ci,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn at_identity(u: Quaternion, v: Quaternion) -> NKTangent {
        NKTangent::new(NKPoint::IDENTITY, u, v).unwrap()
    }

    fn e1() -> NKTangent {
        frame_field(FrameIndex::E1, &NKPoint::IDENTITY)
    }

    fn f1() -> NKTangent {
        frame_field(FrameIndex::F1, &NKPoint::IDENTITY)
    }

    fn sample_point() -> NKPoint {
        NKPoint::new(
            UnitQuaternion::normalize(Quaternion::new(0.3, -0.5, 0.1, 0.8)),
            UnitQuaternion::normalize(Quaternion::new(-0.2, 0.4, 0.9, -0.1)),
        )
    }

    fn sample_tangent(at: NKPoint, seed: f64) -> NKTangent {
        NKTangent::from_trivialized(
            at,
            ImQuaternion::new(seed.sin(), (2.0 * seed).cos(), 0.3 - seed),
            ImQuaternion::new((3.0 * seed).cos(), seed * 0.5, (seed + 1.0).sin()),
        )
    }

    #[test]
    fn tangency_projection_and_rejection() {
        let p = NKPoint::IDENTITY;
        let z = NKTangent::new(p, Quaternion::new(1e-10, 1.0, 0.0, 0.0), Quaternion::ZERO).unwrap();
        assert_eq!(z.u.w, 0.0);
        assert!(matches!(
            NKTangent::new(p, Quaternion::new(1e-3, 1.0, 0.0, 0.0), Quaternion::ZERO),
            Err(Error::NotTangent(_))
        ));
    }

    #[test]
    fn euclidean_metric_examples() {
        assert_eq!(metric_euclidean(&e1(), &e1()).unwrap(), 1.0);
        assert_eq!(metric_euclidean(&e1(), &f1()).unwrap(), 0.0);
        let at = sample_point();
        let (z, w) = (sample_tangent(at, 0.4), sample_tangent(at, 1.7));
        let oracle: f64 = z.to_array().iter().zip(w.to_array()).map(|(a, b)| a * b).sum();
        assert!((metric_euclidean(&z, &w).unwrap() - oracle).abs() < EPS);
    }

    #[test]
    fn g_examples() {
        assert!((metric_g(&e1(), &e1()).unwrap() - 4.0 / 3.0).abs() < EPS);
        assert!((metric_g(&e1(), &f1()).unwrap() + 2.0 / 3.0).abs() < EPS);
        let at = sample_point();
        let (z, w) = (sample_tangent(at, 0.4), sample_tangent(at, 1.7));
        let a = metric_g(&z, &w).unwrap();
        let b = metric_g_hermitian(&z, &w).unwrap();
        assert!((a - b).abs() < EPS);
    }

    #[test]
    fn base_mismatch_is_reported() {
        let z = sample_tangent(sample_point(), 0.1);
        assert!(matches!(metric_g(&z, &e1()), Err(Error::BaseMismatch)));
        assert!(matches!(tensor_g(&z, &e1()), Err(Error::BaseMismatch)));
    }

    #[test]
    fn j_examples() {
        let s = 1.0 / SQRT_3;
        let je1 = almost_complex_j(&e1());
        assert!(je1.u.max_abs_diff(Quaternion::I * -s) < EPS);
        assert!(je1.v.max_abs_diff(Quaternion::I * (-2.0 * s)) < EPS);

        let jf2 = almost_complex_j(&at_identity(Quaternion::ZERO, Quaternion::J));
        assert!(jf2.u.max_abs_diff(Quaternion::J * (2.0 * s)) < EPS);
        assert!(jf2.v.max_abs_diff(Quaternion::J * s) < EPS);

        let z = sample_tangent(sample_point(), 2.2);
        assert!(almost_complex_j(&almost_complex_j(&z)).max_abs_diff(&-z) < EPS);
    }

    #[test]
    fn p_examples() {
        let z = at_identity(Quaternion::I, Quaternion::K * 2.0);
        let pz = almost_product_p(&z);
        assert_eq!((pz.u, pz.v), (z.v, z.u));

        let at = NKPoint::new(
            UnitQuaternion::new(Quaternion::I).unwrap(),
            UnitQuaternion::new(Quaternion::J).unwrap(),
        );
        let e1 = frame_field(FrameIndex::E1, &at);
        assert_eq!(e1.u, -Quaternion::ONE);
        let pe1 = almost_product_p(&e1);
        assert!(pe1.u.max_abs_diff(Quaternion::ZERO) < EPS);
        assert!(pe1.v.max_abs_diff(-Quaternion::K) < EPS);

        let w = sample_tangent(sample_point(), -0.8);
        assert!(almost_product_p(&almost_product_p(&w)).max_abs_diff(&w) < EPS);
    }

    #[test]
    fn q_examples_and_conversions() {
        assert!(product_q(&e1()).max_abs_diff(&-e1()) < EPS);
        assert!(product_q(&f1()).max_abs_diff(&f1()) < EPS);
        let z = sample_tangent(sample_point(), 0.9);
        assert!(q_from_p(&z).max_abs_diff(&product_q(&z)) < EPS);
        assert!(p_from_q(&z).max_abs_diff(&almost_product_p(&z)) < EPS);
    }

    #[test]
    fn g_tensor_examples() {
        let s = 2.0 / (3.0 * SQRT_3);
        let f2 = frame_field(FrameIndex::F2, &NKPoint::IDENTITY);
        let g = tensor_g(&e1(), &f2).unwrap();
        assert!(g.u.max_abs_diff(Quaternion::K * s) < EPS);
        assert!(g.v.max_abs_diff(Quaternion::K * -s) < EPS);
        let table = nabla_j_table(FrameIndex::E1, FrameIndex::F2).to_tangent(&NKPoint::IDENTITY);
        assert!(g.max_abs_diff(&table) < EPS);

        let e2 = frame_field(FrameIndex::E2, &NKPoint::IDENTITY);
        let g = tensor_g(&e1(), &e2).unwrap();
        let e3 = frame_field(FrameIndex::E3, &NKPoint::IDENTITY);
        let f3 = frame_field(FrameIndex::F3, &NKPoint::IDENTITY);
        assert!(g.max_abs_diff(&((e3 + f3 * 2.0) * -s)) < EPS);

        let x = sample_tangent(sample_point(), 1.3);
        assert!(tensor_g(&x, &x).unwrap().euclidean_norm() < EPS);
    }

    #[test]
    fn connection_correction_along_geodesic_velocity() {
        let (alpha, beta) = (ImQuaternion::new(0.3, -1.0, 0.5), ImQuaternion::new(0.7, 0.2, -0.4));
        let gp = NKTangent::from_trivialized(NKPoint::IDENTITY, alpha, beta);
        let corr = euclidean_connection_relation(&gp, &gp).unwrap();
        let jg = almost_complex_j(&tensor_g(&gp, &almost_product_p(&gp)).unwrap());
        assert!(corr.max_abs_diff(&jg) < EPS);
        let w = alpha.cross(beta) * (2.0 / 3.0);
        assert!(corr.u.max_abs_diff(w.quat()) < EPS);
        assert!(corr.v.max_abs_diff(-w.quat()) < EPS);
    }

    #[test]
    fn connection_correction_is_symmetric() {
        let at = sample_point();
        let (x, y) = (sample_tangent(at, 0.2), sample_tangent(at, -1.1));
        let xy = euclidean_connection_relation(&x, &y).unwrap();
        let yx = euclidean_connection_relation(&y, &x).unwrap();
        assert!(xy.max_abs_diff(&yx) < EPS);
        // For Y = PX the two terms coincide: JG(X, X) vanishes, leaving ½JG(PX, PX) = 0.
        let px = almost_product_p(&x);
        let direct = almost_complex_j(&tensor_g(&x, &almost_product_p(&px)).unwrap()) * 0.5
            + almost_complex_j(&tensor_g(&px, &almost_product_p(&x)).unwrap()) * 0.5;
        assert!(euclidean_connection_relation(&x, &px).unwrap().max_abs_diff(&direct) < EPS);
        assert!(direct.euclidean_norm() < EPS);
    }

    #[test]
    fn isometry_examples() {
        let pt = sample_point();
        let id = Isometry::new(UnitQuaternion::IDENTITY, UnitQuaternion::IDENTITY, UnitQuaternion::IDENTITY);
        assert_eq!(id.apply(&pt), pt);
        let iso = Isometry::new(pt.p, pt.q, UnitQuaternion::IDENTITY);
        assert!(iso.apply(&NKPoint::IDENTITY).same_as(&pt));

        let h = UnitQuaternion::normalize(Quaternion::new(0.4, 0.1, -0.7, 0.2));
        let z = iso_pushed(h);
        assert!(z.u.max_abs_diff(h.conjugate(ImQuaternion::I).quat()) < EPS);
        assert_eq!(z.v, Quaternion::ZERO);
        let g0 = metric_g(&e1(), &e1()).unwrap();
        assert!((metric_g(&z, &z).unwrap() - g0).abs() < EPS);
    }

    fn iso_pushed(h: UnitQuaternion) -> NKTangent {
        Isometry::conjugation(h).push_forward(&e1())
    }
}
