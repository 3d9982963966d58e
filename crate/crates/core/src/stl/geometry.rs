use crate::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;

/// Axis-aligned box with `lo < hi` on every axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    lo: Vec3,
    hi: Vec3,
}

impl Aabb {
    pub fn new(lo: Vec3, hi: Vec3) -> Result<Self> {
        let ok = (0..3).all(|i| lo[i].is_finite() && hi[i].is_finite() && lo[i] < hi[i]);
        if ok {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidBox)
        }
    }

    /// Cube of side `side` centered at `center`.
    pub fn cube(center: Vec3, side: f64) -> Result<Self> {
        let half = Vec3::repeat(side / 2.0);
        Self::new(center - half, center + half)
    }

    pub fn lo(&self) -> Vec3 {
        self.lo
    }

    pub fn hi(&self) -> Vec3 {
        self.hi
    }

    pub fn center(&self) -> Vec3 {
        (self.lo + self.hi) / 2.0
    }

    /// L-infinity signed margin: positive strictly inside, zero on the
    /// boundary, negative outside. Equals the smallest face slack.
    pub fn signed_margin(&self, p: &Vec3) -> f64 {
        self.margin_and_face(p).0
    }

    /// Gradient of [`Aabb::signed_margin`] with respect to `p`: a signed unit
    /// axis vector for the active face. Ties pick the lowest axis, lower face
    /// first.
    pub fn margin_gradient(&self, p: &Vec3) -> Vec3 {
        let (_, axis, sign) = self.margin_and_face(p);
        let mut g = Vec3::zeros();
        g[axis] = sign;
        g
    }

    fn margin_and_face(&self, p: &Vec3) -> (f64, usize, f64) {
        let mut best = (f64::INFINITY, 0, 1.0);
        for axis in 0..3 {
            let below = p[axis] - self.lo[axis];
            if below < best.0 {
                best = (below, axis, 1.0);
            }
            let above = self.hi[axis] - p[axis];
            if above < best.0 {
                best = (above, axis, -1.0);
            }
        }
        best
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        self.signed_margin(p) >= 0.0
    }

    /// True when the closed boxes share at least one point.
    pub fn intersects(&self, other: &Aabb) -> bool {
        (0..3).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }
}
