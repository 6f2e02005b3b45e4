//! Seeded random inputs for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geodesics::GeodesicCase;
use crate::manifold::{NKPoint, NKTangent};
use crate::quat::{ImQuaternion, Quaternion, UnitQuaternion};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of S³ (rejection sampling in the unit ball of ℝ⁴).
pub fn unit_quaternion<R: Rng>(rng: &mut R) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = q.norm_sq();
        if n > 1e-4 && n <= 1.0 {
            return UnitQuaternion::normalize(q);
        }
    }
}

/// Imaginary quaternion with components uniform in `[-scale, scale]`.
pub fn im_quaternion<R: Rng>(rng: &mut R, scale: f64) -> ImQuaternion {
    ImQuaternion::new(
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
    )
}

pub fn point<R: Rng>(rng: &mut R) -> NKPoint {
    NKPoint::new(unit_quaternion(rng), unit_quaternion(rng))
}

pub fn tangent_at<R: Rng>(rng: &mut R, at: NKPoint, scale: f64) -> NKTangent {
    NKTangent::from_trivialized(at, im_quaternion(rng, scale), im_quaternion(rng, scale))
}

pub fn tangent<R: Rng>(rng: &mut R, scale: f64) -> NKTangent {
    let at = point(rng);
    tangent_at(rng, at, scale)
}

/// Initial velocity at a random base point whose geodesic falls in `case`.
pub fn velocity_in_case<R: Rng>(rng: &mut R, case: GeodesicCase, scale: f64) -> NKTangent {
    let at = point(rng);
    let dir = loop {
        if let Some(u) = im_quaternion(rng, 1.0).normalized() {
            break u;
        }
    };
    let (alpha, beta) = match case {
        GeodesicCase::Constant => (ImQuaternion::ZERO, ImQuaternion::ZERO),
        GeodesicCase::Case1 => {
            let a = dir * (scale * rng.random_range(0.2..=1.0));
            (a, -a)
        }
        GeodesicCase::Case2 => {
            let s1 = scale * rng.random_range(-1.0..=1.0);
            let mut s2 = scale * rng.random_range(-1.0..=1.0);
            if (s1 + s2).abs() < 0.1 * scale {
                s2 += 0.5 * scale;
            }
            (dir * s1, dir * s2)
        }
        GeodesicCase::Case3 => loop {
            let a = im_quaternion(rng, scale);
            let b = im_quaternion(rng, scale);
            let c1 = a + b;
            let d = a - b;
            let transverse = d - c1 * (d.dot(c1) / c1.norm_sq().max(1e-300));
            if c1.norm() > 0.1 * scale && transverse.norm() > 0.1 * scale {
                break (a, b);
            }
        },
    };
    NKTangent::from_trivialized(at, alpha, beta)
}
