//! Quaternion algebra over ℝ⁴.
//!
//! Three value types: [`Quaternion`] for general elements of ℍ,
//! [`UnitQuaternion`] for points of S³, and [`ImQuaternion`] for the
//! imaginary part Im ℍ ≅ ℝ³. Components are scalar-first, `w + x i + y j + z k`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean inner product on ℝ⁴.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Multiplicative inverse; `None` for the zero quaternion.
    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sq();
        (n2 > 0.0).then(|| self.conj() * (1.0 / n2))
    }

    #[inline]
    pub fn imag(self) -> ImQuaternion {
        ImQuaternion::new(self.x, self.y, self.z)
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self - other)
            .to_array()
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn add(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, b: Quaternion) {
        *self = *self + b;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn sub(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// A quaternion of norm one, i.e. a point of S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "Quaternion", try_from = "Quaternion")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion(Quaternion::ONE);

    /// Accepts `q` if its norm is within [`tol::UNIT`] of one.
    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if (n - 1.0).abs() > tol::UNIT {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(q))
    }

    /// Normalizes `q` if its norm is within `tolerance` of one.
    pub fn try_normalize(q: Quaternion, tolerance: f64) -> Result<Self> {
        let n = q.norm();
        if !n.is_finite() || (n - 1.0).abs() > tolerance {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(q * (1.0 / n)))
    }

    /// Normalizes any nonzero quaternion. Panics on zero or non-finite input.
    pub fn normalize(q: Quaternion) -> Self {
        let n = q.norm();
        assert!(n > 0.0 && n.is_finite(), "cannot normalize {q:?}");
        Self(q * (1.0 / n))
    }

    #[inline]
    pub fn quat(self) -> Quaternion {
        self.0
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Self(self.0.conj())
    }

    /// `h v h⁻¹`: the rotation of Im ℍ induced by `h`.
    #[inline]
    pub fn conjugate(self, v: ImQuaternion) -> ImQuaternion {
        (self.0 * v.quat() * self.0.conj()).imag()
    }

    /// Same as [`UnitQuaternion::conjugate`] but for a full quaternion.
    #[inline]
    pub fn conjugate_quat(self, q: Quaternion) -> Quaternion {
        self.0 * q * self.0.conj()
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    #[inline]
    fn mul(self, b: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * b.0)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Quaternion {
        u.0
    }
}

impl TryFrom<Quaternion> for UnitQuaternion {
    type Error = Error;

    fn try_from(q: Quaternion) -> Result<Self> {
        Self::new(q)
    }
}

/// Purely imaginary quaternion, identified with a vector of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ImQuaternion {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ImQuaternion {
    pub const ZERO: ImQuaternion = ImQuaternion::new(0.0, 0.0, 0.0);
    pub const I: ImQuaternion = ImQuaternion::new(1.0, 0.0, 0.0);
    pub const J: ImQuaternion = ImQuaternion::new(0.0, 1.0, 0.0);
    pub const K: ImQuaternion = ImQuaternion::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn quat(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn dot(self, v: Self) -> f64 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    /// Imaginary part of the product `self · v`.
    #[inline]
    pub fn cross(self, v: Self) -> Self {
        Self::new(
            self.y * v.z - self.z * v.y,
            self.z * v.x - self.x * v.z,
            self.x * v.y - self.y * v.x,
        )
    }

    /// `uv − vu`, which equals `2 u×v`.
    #[inline]
    pub fn commutator(self, v: Self) -> Self {
        (self.quat() * v.quat() - v.quat() * self.quat()).imag()
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction; `None` for zero.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for ImQuaternion {
    type Output = ImQuaternion;

    #[inline]
    fn add(self, v: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(self.x + v.x, self.y + v.y, self.z + v.z)
    }
}

impl Sub for ImQuaternion {
    type Output = ImQuaternion;

    #[inline]
    fn sub(self, v: ImQuaternion) -> ImQuaternion {
        ImQuaternion::new(self.x - v.x, self.y - v.y, self.z - v.z)
    }
}

impl Mul<f64> for ImQuaternion {
    type Output = ImQuaternion;

    #[inline]
    fn mul(self, s: f64) -> ImQuaternion {
        ImQuaternion::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for ImQuaternion {
    type Output = ImQuaternion;

    #[inline]
    fn neg(self) -> ImQuaternion {
        ImQuaternion::new(-self.x, -self.y, -self.z)
    }
}

/// Returns `h` with `h i h⁻¹ = u1`, `h j h⁻¹ = u2`, `h k h⁻¹ = u3`.
///
/// The frame must be orthonormal and right-handed (`u3 = u1 × u2`).
/// Of the two solutions `±h` the one with `w ≥ 0` is returned, ties
/// resolved toward positive `x`, then `y`, then `z`.
pub fn rotation_from_frame(
    u1: ImQuaternion,
    u2: ImQuaternion,
    u3: ImQuaternion,
) -> Result<UnitQuaternion> {
    let cols = [u1, u2, u3];
    let mut gram_dev = 0.0_f64;
    for (a, ua) in cols.iter().enumerate() {
        for (b, ub) in cols.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((ua.dot(*ub) - target).abs());
        }
    }
    if gram_dev.is_nan() || gram_dev > tol::FRAME {
        return Err(Error::NonOrthonormalFrame(gram_dev));
    }
    if u1.cross(u2).dot(u3) < 0.0 {
        return Err(Error::LeftHandedFrame);
    }

    // m[r][c] = r-th component of the c-th column.
    let m = |r: usize, c: usize| cols[c].to_array()[r];
    let trace = m(0, 0) + m(1, 1) + m(2, 2);

    // Shepperd: branch on the largest of (trace, m00, m11, m22).
    let q = if trace > m(0, 0) && trace > m(1, 1) && trace > m(2, 2) {
        let s = 2.0 * (1.0 + trace).sqrt();
        Quaternion::new(
            0.25 * s,
            (m(2, 1) - m(1, 2)) / s,
            (m(0, 2) - m(2, 0)) / s,
            (m(1, 0) - m(0, 1)) / s,
        )
    } else if m(0, 0) >= m(1, 1) && m(0, 0) >= m(2, 2) {
        let s = 2.0 * (1.0 + m(0, 0) - m(1, 1) - m(2, 2)).sqrt();
        Quaternion::new(
            (m(2, 1) - m(1, 2)) / s,
            0.25 * s,
            (m(0, 1) + m(1, 0)) / s,
            (m(0, 2) + m(2, 0)) / s,
        )
    } else if m(1, 1) >= m(2, 2) {
        let s = 2.0 * (1.0 + m(1, 1) - m(0, 0) - m(2, 2)).sqrt();
        Quaternion::new(
            (m(0, 2) - m(2, 0)) / s,
            (m(0, 1) + m(1, 0)) / s,
            0.25 * s,
            (m(1, 2) + m(2, 1)) / s,
        )
    } else {
        let s = 2.0 * (1.0 + m(2, 2) - m(0, 0) - m(1, 1)).sqrt();
        Quaternion::new(
            (m(1, 0) - m(0, 1)) / s,
            (m(0, 2) + m(2, 0)) / s,
            (m(1, 2) + m(2, 1)) / s,
            0.25 * s,
        )
    };

    Ok(UnitQuaternion::normalize(canonical_sign(q)))
}

fn canonical_sign(q: Quaternion) -> Quaternion {
    for c in q.to_array() {
        if c > 0.0 {
            return q;
        }
        if c < 0.0 {
            return -q;
        }
    }
    q
}
