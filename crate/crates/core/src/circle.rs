//! Angles and arcs on a circle of unit circumference.
//!
//! Every angle is stored reduced mod 1. Arcs are half-open,
//! `[lower, lower + width)` taken mod 1, so membership at a shared
//! boundary point is never ambiguous.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduce a real number into `[0, 1)`.
#[inline]
pub fn reduce(value: f64) -> f64 {
    let r = value - value.floor();
    // `x - floor(x)` rounds up to exactly 1.0 for tiny negative inputs.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A point on the unit-circumference circle.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Builds an angle from any finite real, reducing it mod 1.
    ///
    /// Panics on NaN or infinite input; use [`Angle::try_new`] for
    /// untrusted values.
    pub fn new(value: f64) -> Self {
        Self::try_new(value).expect("angle must be finite")
    }

    pub fn try_new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Angle(reduce(value)))
        } else {
            Err(Error::NonFiniteAngle(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `(k * self) mod 1`.
    pub fn scale(self, k: f64) -> Angle {
        Angle(reduce(self.0 * k))
    }

    /// Distance along the circle, in `[0, 1/2]`.
    pub fn dist(self, other: Angle) -> f64 {
        circ_dist(self, other)
    }

    /// The angle in radians, in `[0, 2π)`.
    pub fn radians(self) -> f64 {
        std::f64::consts::TAU * self.0
    }
}

impl std::ops::Add<f64> for Angle {
    type Output = Angle;
    fn add(self, rhs: f64) -> Angle {
        Angle::new(self.0 + rhs)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    /// `(self - rhs) mod 1`.
    fn sub(self, rhs: Angle) -> Angle {
        Angle(reduce(self.0 - rhs.0))
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl TryFrom<f64> for Angle {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Angle::try_new(v)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Circular distance `min((a - b) mod 1, (b - a) mod 1)`.
pub fn circ_dist(a: Angle, b: Angle) -> f64 {
    let d = reduce(a.0 - b.0);
    d.min(reduce(b.0 - a.0))
}

/// A directed arc `[lower, lower + width)` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    lower: Angle,
    width: f64,
}

impl Arc {
    /// Builds an arc; `lower` may be unreduced (e.g. `2.6` for `0.6`).
    pub fn new(lower: f64, width: f64) -> Result<Self> {
        Self::from_angle(Angle::try_new(lower)?, width)
    }

    pub fn from_angle(lower: Angle, width: f64) -> Result<Self> {
        if !(width > 0.0 && width <= 1.0) {
            return Err(Error::InvalidArcWidth(width));
        }
        Ok(Arc { lower, width })
    }

    #[inline]
    pub fn lower(&self) -> Angle {
        self.lower
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Upper end as an unreduced real, `lower + width`.
    pub fn upper(&self) -> f64 {
        self.lower.0 + self.width
    }

    pub fn midpoint(&self) -> Angle {
        self.lower + self.width / 2.0
    }

    /// True iff `(t - lower) mod 1 < width`.
    pub fn contains(&self, t: Angle) -> bool {
        (t - self.lower).0 < self.width
    }

    /// True iff `self` lies inside `outer` when walking counter-clockwise
    /// from `outer.lower`.
    pub fn is_subset_of(&self, outer: &Arc) -> bool {
        if outer.width >= 1.0 {
            return true;
        }
        (self.lower - outer.lower).0 + self.width <= outer.width
    }

    /// The image of the arc under `θ ↦ 2θ mod 1`.
    pub fn doubled(&self) -> Result<Arc> {
        if self.width > 0.5 {
            return Err(Error::DoublingOverflow(self.width));
        }
        Ok(Arc {
            lower: self.lower.scale(2.0),
            width: 2.0 * self.width,
        })
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lower.0, self.upper())
    }
}

/// `circ_dist` as a free function over raw reals, for callers holding `f64`s.
pub fn circ_dist_raw(a: f64, b: f64) -> f64 {
    circ_dist(Angle::new(a), Angle::new(b))
}

/// Membership `t ∈ A` on the circle.
pub fn arc_contains(arc: &Arc, t: Angle) -> bool {
    arc.contains(t)
}

/// Subset `A ⊂ B` on the circle.
pub fn arc_subset(a: &Arc, b: &Arc) -> bool {
    a.is_subset_of(b)
}

/// Doubling `2A`; fails when `A.width > 1/2`.
pub fn arc_double(a: &Arc) -> Result<Arc> {
    a.doubled()
}
