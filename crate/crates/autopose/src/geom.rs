//! Small 2D geometry primitives shared by every stage.

use serde::{Deserialize, Serialize};

use crate::num::Real;

/// A continuous pixel location, origin at the top-left corner of the frame.
/// Sub-pixel coordinates are meaningful throughout (bilinear sampling).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Real> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Self) -> S {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn offset(self, dx: S, dy: S) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Clamp into `[0, w-1] x [0, h-1]`.
    pub fn clamp_to(self, width: usize, height: usize) -> Self {
        Self::new(
            self.x.max(S::zero()).min(S::of_usize(width - 1)),
            self.y.max(S::zero()).min(S::of_usize(height - 1)),
        )
    }

    pub fn in_bounds(self, width: usize, height: usize) -> bool {
        self.x >= S::zero()
            && self.y >= S::zero()
            && self.x <= S::of_usize(width - 1)
            && self.y <= S::of_usize(height - 1)
    }

    pub fn cast<T: Real>(self) -> Point2<T> {
        Point2::new(T::of(self.x.as_f64()), T::of(self.y.as_f64()))
    }
}

/// Axis-aligned rectangle, `[x0, x1] x [y0, y1]`, bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn contains<S: Real>(&self, p: Point2<S>) -> bool {
        let (x, y) = (p.x.as_f64(), p.y.as_f64());
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_euclidean() {
        let a = Point2::new(0.0f64, 0.0);
        let b = Point2::new(3.0, 4.0);
        assert_eq!(a.distance(b), 5.0);
    }

    #[test]
    fn clamp_stays_inside() {
        let p = Point2::new(-3.0f32, 99.0).clamp_to(64, 48);
        assert_eq!(p, Point2::new(0.0, 47.0));
    }

    #[test]
    fn rect_contains_boundary() {
        let r = Rect::new(10.0, 10.0, 20.0, 20.0);
        assert!(r.contains(Point2::new(10.0f64, 20.0)));
        assert!(!r.contains(Point2::new(9.99f64, 15.0)));
    }
}
