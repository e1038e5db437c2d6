use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// A point of ℝⁿ for n ∈ {1, 2}. Copyable; unused coordinates are zero.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Vector {
    c: [f64; 2],
    n: u8,
}

impl Vector {
    pub fn new1(x: f64) -> Self {
        Vector { c: [x, 0.0], n: 1 }
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Vector { c: [x, y], n: 2 }
    }

    pub fn zero(n: usize) -> Self {
        Vector { c: [0.0; 2], n: n as u8 }
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        match coords {
            [x] => Ok(Vector::new1(*x)),
            [x, y] => Ok(Vector::new2(*x, *y)),
            _ => Err(Error::UnsupportedDimension(coords.len())),
        }
    }

    /// Unit vector at angle `theta` (n = 2).
    pub fn polar(r: f64, theta: f64) -> Self {
        Vector::new2(r * theta.cos(), r * theta.sin())
    }

    /// `k`-th of `count` equally spaced unit directions; for n = 1 the two signs.
    pub fn direction(n: usize, k: usize, count: usize) -> Self {
        if n == 1 {
            Vector::new1(if k.is_multiple_of(2) { 1.0 } else { -1.0 })
        } else {
            Vector::polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / count as f64)
        }
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.n as usize]
    }

    pub fn x(&self) -> f64 {
        self.c[0]
    }

    pub fn y(&self) -> f64 {
        self.c[1]
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.c[0] * other.c[0] + self.c[1] * other.c[1]
    }

    pub fn norm(&self) -> f64 {
        self.c[0].hypot(self.c[1])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector { c: [self.c[0] * t, self.c[1] * t], n: self.n }
    }

    pub fn angle(&self) -> f64 {
        self.c[1].atan2(self.c[0])
    }

    /// 2-d cross product `self × other`.
    pub fn cross(&self, other: &Vector) -> f64 {
        self.c[0] * other.c[1] - self.c[1] * other.c[0]
    }

    pub fn is_finite(&self) -> bool {
        self.c[0].is_finite() && self.c[1].is_finite()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    pub fn normalized(&self) -> Vector {
        self.scale(1.0 / self.norm())
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, o: Vector) -> Vector {
        Vector { c: [self.c[0] + o.c[0], self.c[1] + o.c[1]], n: self.n.max(o.n) }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, o: Vector) -> Vector {
        Vector { c: [self.c[0] - o.c[0], self.c[1] - o.c[1]], n: self.n.max(o.n) }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, t: f64) -> Vector {
        self.scale(t)
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords()[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}
