use std::ops::{Add, Sub};

/// A point in the floor plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Location2D {
    pub x: f64,
    pub y: f64,
}

impl Location2D {
    pub const ORIGIN: Location2D = Location2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Location2D { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Location2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn scale(self, factor: f64) -> Self {
        Location2D::new(self.x * factor, self.y * factor)
    }

    /// Rotates counter-clockwise by `angle` radians about `pivot`.
    pub fn rotate_about(self, pivot: Location2D, angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        let d = self - pivot;
        pivot + Location2D::new(d.x * cos - d.y * sin, d.x * sin + d.y * cos)
    }
}

impl Add for Location2D {
    type Output = Location2D;

    fn add(self, rhs: Location2D) -> Location2D {
        Location2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Location2D {
    type Output = Location2D;

    fn sub(self, rhs: Location2D) -> Location2D {
        Location2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl From<(f64, f64)> for Location2D {
    fn from((x, y): (f64, f64)) -> Self {
        Location2D::new(x, y)
    }
}
