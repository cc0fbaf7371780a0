use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::interval::{atan2_box, Interval};

/// A point of the ambient space. One-dimensional systems use the real axis
/// and keep the imaginary part at zero.
pub type Point = Complex64;

/// Outer bound for a set of points.
///
/// On the line this is a closed interval. In the plane it is a box in polar
/// coordinates: a radius interval times an angular arc. The arc is stored as
/// an interval of angles whose width is below `2π`; a width of `2π` or more
/// means the full circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Enclosure {
    Line(Interval),
    Polar { radius: Interval, angle: Interval },
}

impl Enclosure {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Enclosure::Line(_) => 1,
            Enclosure::Polar { .. } => 2,
        }
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(self, Enclosure::Polar { angle, .. } if angle.width() >= TAU)
    }

    /// Membership with a signed margin: positive grows the set, negative
    /// shrinks it. For polar boxes the margin is converted to an angle at the
    /// point's radius.
    pub fn contains(&self, p: Point, margin: f64) -> bool {
        match self {
            Enclosure::Line(iv) => iv.contains_with_margin(p.re, margin),
            Enclosure::Polar { radius, angle } => {
                let r = p.norm();
                if !radius.contains_with_margin(r, margin) {
                    return false;
                }
                if angle.width() >= TAU {
                    return true;
                }
                let ang_margin = if r > 0.0 { margin / r } else { f64::INFINITY * margin.signum() };
                let theta = p.im.atan2(p.re);
                // offset of theta past the arc start, in [0, 2π)
                let d = (theta - angle.lo).rem_euclid(TAU);
                let w = angle.width();
                if margin >= 0.0 {
                    d <= w + ang_margin || TAU - d <= ang_margin
                } else {
                    let s = -ang_margin;
                    d >= s && d <= w - s
                }
            }
        }
    }

    /// Axis-aligned Cartesian bounding box `(x, y)`.
    pub fn cartesian_box(&self) -> (Interval, Interval) {
        match self {
            Enclosure::Line(iv) => (*iv, Interval::point(0.0)),
            Enclosure::Polar { radius, angle } => {
                let r = Interval::new(radius.lo.max(0.0), radius.hi.max(0.0));
                (r * angle.cos(), r * angle.sin())
            }
        }
    }

    /// Upper bound on the Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match self {
            Enclosure::Line(iv) => iv.width(),
            Enclosure::Polar { radius, angle } => {
                if angle.width() >= PI {
                    2.0 * radius.hi
                } else {
                    let (x, y) = self.cartesian_box();
                    x.width().hypot(y.width()).min(2.0 * radius.hi)
                }
            }
        }
    }

    /// A point inside the enclosure.
    pub fn midpoint(&self) -> Point {
        match self {
            Enclosure::Line(iv) => Complex64::new(iv.mid(), 0.0),
            Enclosure::Polar { radius, angle } => Complex64::from_polar(radius.mid(), angle.mid()),
        }
    }

    /// How far the interiors overlap. Positive when they share an open
    /// region of that thickness; zero or negative when they are at most
    /// touching or apart.
    pub fn interior_overlap(&self, other: &Enclosure) -> f64 {
        match (self, other) {
            (Enclosure::Line(a), Enclosure::Line(b)) => a.overlap(b),
            (
                Enclosure::Polar { radius: r1, angle: a1 },
                Enclosure::Polar { radius: r2, angle: a2 },
            ) => {
                let radial = r1.overlap(r2);
                if radial <= 0.0 {
                    return radial;
                }
                let arc = arc_overlap(a1, a2);
                let r = r1.lo.max(r2.lo).max(0.0);
                radial.min(arc * r)
            }
            _ => panic!("enclosures of different dimension"),
        }
    }

    /// `true` when `self` is inside `other` grown by `slack`.
    pub fn is_within(&self, other: &Enclosure, slack: f64) -> bool {
        match (self, other) {
            (Enclosure::Line(a), Enclosure::Line(b)) => a.is_subset_of(&b.inflate(slack)),
            (
                Enclosure::Polar { radius: r1, angle: a1 },
                Enclosure::Polar { radius: r2, angle: a2 },
            ) => {
                if !r1.is_subset_of(&r2.inflate(slack)) {
                    return false;
                }
                if a2.width() >= TAU {
                    return true;
                }
                if a1.width() >= TAU {
                    return false;
                }
                let tol = slack / r1.lo.max(1e-300);
                let d = (a1.lo - a2.lo).rem_euclid(TAU);
                let start = if TAU - d <= tol { d - TAU } else { d };
                start >= -tol && start + a1.width() <= a2.width() + tol
            }
            _ => false,
        }
    }
}

/// Length of the intersection of two arcs on the circle (largest piece).
fn arc_overlap(a: &Interval, b: &Interval) -> f64 {
    if a.width() >= TAU {
        return b.width().min(TAU);
    }
    if b.width() >= TAU {
        return a.width();
    }
    let shift = (b.lo - a.lo).rem_euclid(TAU);
    let b0 = Interval::new(a.lo + shift, a.lo + shift + b.width());
    let b1 = Interval::new(b0.lo - TAU, b0.hi - TAU);
    a.overlap(&b0).max(a.overlap(&b1))
}

/// Polar enclosure of the points of a Cartesian box, or `None` when the box
/// contains the origin.
pub(crate) fn polar_of_box(x: Interval, y: Interval) -> Option<(Interval, Interval)> {
    if x.contains(0.0) && y.contains(0.0) {
        return None;
    }
    let rmin = x.mig().hypot(y.mig());
    let rmax = x.mag().hypot(y.mag());
    let radius = Interval::new(
        (rmin * (1.0 - 4.0 * f64::EPSILON)).max(0.0),
        rmax * (1.0 + 4.0 * f64::EPSILON),
    );
    Some((radius, atan2_box(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(rlo: f64, rhi: f64, alo: f64, ahi: f64) -> Enclosure {
        Enclosure::Polar {
            radius: Interval::new(rlo, rhi),
            angle: Interval::new(alo, ahi),
        }
    }

    #[test]
    fn polar_membership_wraps_angles() {
        let e = polar(0.9, 1.1, -0.2, 0.2);
        assert!(e.contains(Complex64::from_polar(1.0, 0.1), 0.0));
        assert!(e.contains(Complex64::from_polar(1.0, TAU - 0.1), 0.0));
        assert!(!e.contains(Complex64::from_polar(1.0, 0.3), 0.0));
        assert!(!e.contains(Complex64::from_polar(1.2, 0.0), 0.0));
        // shrinking excludes the edge, growing includes near misses
        assert!(!e.contains(Complex64::from_polar(1.0, 0.2), -1e-6));
        assert!(e.contains(Complex64::from_polar(1.0, 0.2 + 1e-7), 1e-6));
        assert!(e.contains(Complex64::from_polar(1.0, -0.2 - 1e-7), 1e-6));
    }

    #[test]
    fn touching_intervals_have_no_interior_overlap() {
        let a = Enclosure::Line(Interval::new(0.0, 0.5));
        let b = Enclosure::Line(Interval::new(0.5, 1.0));
        assert!(a.interior_overlap(&b) <= 0.0);
        let c = Enclosure::Line(Interval::new(0.4, 1.0));
        assert!((a.interior_overlap(&c) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn arcs_overlap_across_the_cut() {
        let a = polar(0.9, 1.1, -0.3, 0.3);
        let b = polar(0.9, 1.1, TAU - 0.1, TAU + 0.5);
        assert!(a.interior_overlap(&b) > 0.1);
        let c = polar(0.9, 1.1, 1.0, 2.0);
        assert!(a.interior_overlap(&c) <= 0.0);
    }

    #[test]
    fn subset_of_full_circle() {
        let full = polar(0.8, 1.25, 0.0, TAU);
        assert!(polar(0.9, 1.1, 5.0, 7.0).is_within(&full, 0.0));
        assert!(polar(0.9, 1.1, 0.1, 0.2).is_within(&polar(0.8, 1.2, TAU, TAU + 0.3), 0.0));
    }
}
