//! Left-invariant frame `Ẽ₁, Ẽ₂, Ẽ₃, F̃₁, F̃₂, F̃₃` and the structure tables
//! written over it.

use std::ops::{Add, Mul, Neg, Sub};

use super::{NKPoint, NKTangent};
use crate::quat::ImQuaternion;

const SQRT_3: f64 = super::SQRT_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    E,
    F,
}

/// One of the six frame fields. `index` is 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameIndex {
    family: Family,
    index: u8,
}

impl FrameIndex {
    pub const E1: FrameIndex = FrameIndex { family: Family::E, index: 1 };
    pub const E2: FrameIndex = FrameIndex { family: Family::E, index: 2 };
    pub const E3: FrameIndex = FrameIndex { family: Family::E, index: 3 };
    pub const F1: FrameIndex = FrameIndex { family: Family::F, index: 1 };
    pub const F2: FrameIndex = FrameIndex { family: Family::F, index: 2 };
    pub const F3: FrameIndex = FrameIndex { family: Family::F, index: 3 };

    pub const ALL: [FrameIndex; 6] = [
        Self::E1,
        Self::E2,
        Self::E3,
        Self::F1,
        Self::F2,
        Self::F3,
    ];

    pub fn new(family: Family, index: u8) -> Option<Self> {
        (1..=3).contains(&index).then_some(Self { family, index })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn index(self) -> u8 {
        self.index
    }

    /// Position in the coefficient array of a [`FrameCombo`].
    pub fn slot(self) -> usize {
        let offset = match self.family {
            Family::E => 0,
            Family::F => 3,
        };
        offset + self.index as usize - 1
    }

    /// Imaginary unit generating this field: `i`, `j`, `−k`.
    pub fn unit(self) -> ImQuaternion {
        match self.index {
            1 => ImQuaternion::I,
            2 => ImQuaternion::J,
            _ => -ImQuaternion::K,
        }
    }

    fn sibling(self, index: u8) -> Self {
        Self {
            family: self.family,
            index,
        }
    }
}

/// Permutation symbol `ε_ijk` on indices 1..=3.
pub fn levi_civita(i: u8, j: u8, k: u8) -> i32 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// A constant-coefficient combination `Σ cₛ Xₛ` over `(E1, E2, E3, F1, F2, F3)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameCombo(pub [f64; 6]);

impl FrameCombo {
    pub const ZERO: FrameCombo = FrameCombo([0.0; 6]);

    pub fn single(idx: FrameIndex, coeff: f64) -> Self {
        let mut c = [0.0; 6];
        c[idx.slot()] = coeff;
        Self(c)
    }

    pub fn coeff(&self, idx: FrameIndex) -> f64 {
        self.0[idx.slot()]
    }

    pub fn to_tangent(&self, at: &NKPoint) -> NKTangent {
        FrameIndex::ALL
            .iter()
            .fold(NKTangent::zero(*at), |acc, &idx| {
                acc + frame_field(idx, at) * self.coeff(idx)
            })
    }

    /// Coordinates of `z` in the frame, which is orthonormal for the
    /// Euclidean product metric.
    pub fn from_tangent(z: &NKTangent) -> Self {
        let mut c = [0.0; 6];
        for idx in FrameIndex::ALL {
            let f = frame_field(idx, &z.base);
            c[idx.slot()] = z.u.dot(f.u) + z.v.dot(f.v);
        }
        Self(c)
    }

    pub fn max_abs_diff(&self, other: &FrameCombo) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Add for FrameCombo {
    type Output = FrameCombo;

    fn add(self, o: FrameCombo) -> FrameCombo {
        let mut c = self.0;
        c.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        FrameCombo(c)
    }
}

impl Sub for FrameCombo {
    type Output = FrameCombo;

    fn sub(self, o: FrameCombo) -> FrameCombo {
        self + -o
    }
}

impl Mul<f64> for FrameCombo {
    type Output = FrameCombo;

    fn mul(self, s: f64) -> FrameCombo {
        FrameCombo(self.0.map(|a| a * s))
    }
}

impl Neg for FrameCombo {
    type Output = FrameCombo;

    fn neg(self) -> FrameCombo {
        self * -1.0
    }
}

/// `Ẽᵢ(p,q) = (p eᵢ, 0)`, `F̃ᵢ(p,q) = (0, q eᵢ)` with `(e₁, e₂, e₃) = (i, j, −k)`.
pub fn frame_field(idx: FrameIndex, at: &NKPoint) -> NKTangent {
    let unit = idx.unit();
    match idx.family {
        Family::E => NKTangent::from_trivialized(*at, unit, ImQuaternion::ZERO),
        Family::F => NKTangent::from_trivialized(*at, ImQuaternion::ZERO, unit),
    }
}

/// Lie bracket of two frame fields.
///
/// Left-invariant fields `p ↦ pu` bracket to `p ↦ p(uv − vu)`, so each factor
/// contributes the commutator of its generators; fields on different factors
/// commute. The commutator is then read back in frame coordinates.
pub fn lie_bracket_frame(a: FrameIndex, b: FrameIndex) -> FrameCombo {
    if a.family != b.family {
        return FrameCombo::ZERO;
    }
    let w = a.unit().commutator(b.unit());
    (1..=3u8).fold(FrameCombo::ZERO, |acc, k| {
        let target = a.sibling(k);
        acc + FrameCombo::single(target, w.dot(target.unit()))
    })
}

/// Levi-Civita connection of `g` on frame fields, `∇̃_a b`.
pub fn connection_table(a: FrameIndex, b: FrameIndex) -> FrameCombo {
    let Some(k) = third_index(a.index, b.index) else {
        return FrameCombo::ZERO;
    };
    let eps = levi_civita(a.index, b.index, k) as f64;
    let ek = FrameCombo::single(FrameIndex::new(Family::E, k).unwrap(), 1.0);
    let fk = FrameCombo::single(FrameIndex::new(Family::F, k).unwrap(), 1.0);
    match (a.family, b.family) {
        (Family::E, Family::E) => ek * -eps,
        (Family::E, Family::F) => (ek - fk) * (eps / 3.0),
        (Family::F, Family::E) => (fk - ek) * (eps / 3.0),
        (Family::F, Family::F) => fk * -eps,
    }
}

/// `(∇̃_a J) b` on frame fields.
///
/// The `(F, F)` block carries a `+` sign: it is the image of the `(E, E)`
/// block under the factor swap `(p, q) ↦ (q, p)`, which anticommutes with
/// `J`, and it is what `∇̃_a(Jb) − J∇̃_a b` gives from [`connection_table`].
pub fn nabla_j_table(a: FrameIndex, b: FrameIndex) -> FrameCombo {
    let Some(k) = third_index(a.index, b.index) else {
        return FrameCombo::ZERO;
    };
    let eps = levi_civita(a.index, b.index, k) as f64;
    let ek = FrameCombo::single(FrameIndex::new(Family::E, k).unwrap(), 1.0);
    let fk = FrameCombo::single(FrameIndex::new(Family::F, k).unwrap(), 1.0);
    let s = 2.0 / (3.0 * SQRT_3) * eps;
    match (a.family, b.family) {
        (Family::E, Family::E) => (ek + fk * 2.0) * -s,
        (Family::E, Family::F) | (Family::F, Family::E) => (ek - fk) * -s,
        (Family::F, Family::F) => (ek * 2.0 + fk) * s,
    }
}

fn third_index(i: u8, j: u8) -> Option<u8> {
    (i != j).then(|| 6 - i - j)
}
