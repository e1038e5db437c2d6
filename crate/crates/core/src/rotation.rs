use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::Vector;

/// An element of O(1) (a sign) or SO(2) (an angle in `[0, 2π)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Rotation {
    Reflection(i8),
    Angle(f64),
}

impl Rotation {
    pub fn identity(n: usize) -> Self {
        if n == 1 {
            Rotation::Reflection(1)
        } else {
            Rotation::Angle(0.0)
        }
    }

    pub fn angle(theta: f64) -> Self {
        Rotation::Angle(theta.rem_euclid(2.0 * PI))
    }

    pub fn dim(&self) -> usize {
        match self {
            Rotation::Reflection(_) => 1,
            Rotation::Angle(_) => 2,
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        match *self {
            Rotation::Reflection(s) => v.scale(s as f64),
            Rotation::Angle(t) => {
                let (s, c) = t.sin_cos();
                Vector::new2(c * v.x() - s * v.y(), s * v.x() + c * v.y())
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Rotation::Reflection(s) => Rotation::Reflection(s),
            Rotation::Angle(t) => Rotation::angle(-t),
        }
    }

    /// `ϑ⁻¹ v`.
    pub fn apply_inverse(&self, v: &Vector) -> Vector {
        match *self {
            Rotation::Reflection(s) => v.scale(s as f64),
            Rotation::Angle(t) => {
                let (s, c) = t.sin_cos();
                Vector::new2(c * v.x() + s * v.y(), -s * v.x() + c * v.y())
            }
        }
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        match (*self, *other) {
            (Rotation::Reflection(a), Rotation::Reflection(b)) => Rotation::Reflection(a * b),
            (Rotation::Angle(a), Rotation::Angle(b)) => Rotation::angle(a + b),
            _ => panic!("composing rotations of different dimensions"),
        }
    }
}

/// A finite set of rotations Θ = {ϑ₁, …, ϑ_m}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationGrid {
    rotations: Vec<Rotation>,
}

impl RotationGrid {
    pub fn new(rotations: Vec<Rotation>) -> Result<Self> {
        let Some(first) = rotations.first() else {
            return Err(Error::Empty("rotation grid".into()));
        };
        let n = first.dim();
        if rotations.iter().any(|r| r.dim() != n) {
            return Err(Error::InvalidArgument("rotations of mixed dimension".into()));
        }
        Ok(RotationGrid { rotations })
    }

    pub fn identity(n: usize) -> Self {
        RotationGrid { rotations: vec![Rotation::identity(n)] }
    }

    /// `m` equally spaced angles `2πk/m` (n = 2), or O(1) = {+1, −1} (n = 1).
    pub fn equally_spaced(n: usize, m: usize) -> Result<Self> {
        match n {
            1 => Ok(Self::reflections()),
            2 if m > 0 => Ok(RotationGrid {
                rotations: (0..m).map(|k| Rotation::Angle(2.0 * PI * k as f64 / m as f64)).collect(),
            }),
            2 => Err(Error::Empty("rotation grid".into())),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn reflections() -> Self {
        RotationGrid { rotations: vec![Rotation::Reflection(1), Rotation::Reflection(-1)] }
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rotations[0].dim()
    }
}
