use std::f64::consts::TAU;

use num_complex::Complex64;

use super::enclosure::{polar_of_box, Enclosure, Point};
use crate::interval::Interval;

/// Start of the angular range used to pick complex root branches.
///
/// Arguments are taken in `[CUT, CUT + 2π)`, so the seed annulus is slit
/// along the positive real axis. With the cut at angle 0 every branch sector
/// `[2πk/d, 2π(k+1)/d)` has an edge on the slit and none crosses it, which
/// keeps each branch continuous on the slit annulus and the cylinder images
/// shrinking.
pub const BRANCH_CUT: f64 = 0.0;

/// Largest overshoot of an argument arc past the slit that is treated as
/// rounding and clipped rather than splitting the arc.
const SLIT_CLIP: f64 = 1e-9;

/// A smooth injective contraction on the seed set of its system.
#[derive(Clone, Debug, PartialEq)]
pub enum ConformalMap {
    /// `x ↦ slope·x + offset` on the line.
    Affine { slope: f64, offset: f64 },
    /// `x ↦ λx + εx² + εx³ + offset` on the line.
    Cubic {
        lambda: f64,
        epsilon: f64,
        offset: f64,
    },
    /// An inverse branch of a polynomial `γz^d + ε₁z^{d-1} + … + c`.
    InverseBranch(InverseBranch),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseBranch {
    pub degree: u32,
    pub gamma: Complex64,
    pub c: Complex64,
    /// Coefficients of `z^{d-1}, …, z^1`; empty when all are zero.
    pub lower: Vec<Complex64>,
    pub branch: u32,
    /// Bound on `|ε₁z^{d-1} + … + ε_{d-1}z|` over the seed annulus.
    perturbation: f64,
}

impl InverseBranch {
    /// `radius_bound` is the outer radius of the seed annulus; it bounds the
    /// modulus of every branch value and so the size of the lower-order terms.
    pub fn new(
        degree: u32,
        gamma: Complex64,
        c: Complex64,
        lower: Vec<Complex64>,
        branch: u32,
        radius_bound: f64,
    ) -> Self {
        let lower = if lower.iter().all(|e| *e == Complex64::new(0.0, 0.0)) {
            Vec::new()
        } else {
            lower
        };
        let perturbation = lower
            .iter()
            .enumerate()
            .map(|(i, e)| e.norm() * radius_bound.powi((degree as usize - 1 - i) as i32))
            .sum::<f64>()
            * (1.0 + 1e-12);
        InverseBranch {
            degree,
            gamma,
            c,
            lower,
            branch,
            perturbation,
        }
    }

    /// Forward polynomial `R(z)`.
    pub fn forward(&self, z: Complex64) -> Complex64 {
        let d = self.degree as i32;
        let mut v = self.gamma * z.powi(d) + self.c;
        for (i, e) in self.lower.iter().enumerate() {
            v += e * z.powi(d - 1 - i as i32);
        }
        v
    }

    /// `R'(z)`.
    pub fn forward_derivative(&self, z: Complex64) -> Complex64 {
        let d = self.degree as i32;
        let mut v = self.gamma * f64::from(d) * z.powi(d - 1);
        for (i, e) in self.lower.iter().enumerate() {
            let p = d - 1 - i as i32;
            if p >= 1 {
                v += e * f64::from(p) * z.powi(p - 1);
            }
        }
        v
    }

    fn root(&self, u: Complex64) -> Complex64 {
        let d = f64::from(self.degree);
        let theta = BRANCH_CUT + (u.im.atan2(u.re) - BRANCH_CUT).rem_euclid(TAU);
        Complex64::from_polar(
            u.norm().powf(1.0 / d),
            (theta + TAU * f64::from(self.branch)) / d,
        )
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        let mut z = self.root((w - self.c) / self.gamma);
        if self.lower.is_empty() {
            return z;
        }
        for _ in 0..50 {
            let step = (self.forward(z) - w) / self.forward_derivative(z);
            z -= step;
            if step.norm() <= 1e-16 * z.norm() {
                break;
            }
        }
        z
    }

    fn sector(&self) -> Interval {
        let d = f64::from(self.degree);
        let k = f64::from(self.branch);
        widen(Interval::new(
            (BRANCH_CUT + TAU * k) / d,
            (BRANCH_CUT + TAU * (k + 1.0)) / d,
        ))
    }

    fn image(&self, radius: Interval, angle: Interval) -> Enclosure {
        let full = angle.width() >= TAU;
        let shift = self.c.norm() + self.perturbation;

        // w - c - (lower terms), tracked in polar form by bounding the shift
        let by_polar = if shift == 0.0 {
            Some((radius, angle))
        } else if radius.lo > shift {
            let dtheta = (shift / radius.lo).asin() * (1.0 + 1e-12) + 1e-15;
            let r = Interval::new(radius.lo - shift, radius.hi + shift).inflate(0.0);
            let a = if full {
                angle
            } else {
                Interval::new(angle.lo - dtheta, angle.hi + dtheta)
            };
            Some((r, a))
        } else {
            None
        };
        // and through Cartesian boxes of narrow angular pieces, which is
        // tighter and keeps track of which side of the origin each piece is on
        let by_box = if full || shift == 0.0 {
            None
        } else {
            self.shifted_pieces(radius, angle)
        };
        let (r, a) = match (by_polar, by_box) {
            (Some(p), Some(b)) => {
                let lo = p.0.lo.max(b.0.lo);
                let hi = p.0.hi.min(b.0.hi);
                let r = if lo <= hi { Interval::new(lo, hi) } else { p.0 };
                let a = if b.1.width() < p.1.width() { b.1 } else { p.1 };
                (r, a)
            }
            (Some(p), None) => p,
            (None, Some(b)) => b,
            (None, None) => (
                Interval::new(0.0, radius.hi + shift),
                Interval::new(BRANCH_CUT, BRANCH_CUT + TAU),
            ),
        };
        let r = match self.shifted_radius(radius, angle) {
            Some(exact) => {
                let lo = r.lo.max(exact.lo);
                let hi = r.hi.min(exact.hi);
                if lo <= hi {
                    Interval::new(lo, hi)
                } else {
                    exact
                }
            }
            None => r,
        };

        // divide by gamma: scale and rotate
        let gnorm = self.gamma.norm();
        let garg = self.gamma.im.atan2(self.gamma.re);
        let r = Interval::new(r.lo.max(0.0), r.hi) / Interval::point(gnorm);
        let a = if a.width() >= TAU {
            a
        } else {
            widen(a - Interval::point(garg))
        };

        let d = f64::from(self.degree);
        let root_r = r.powf_nonneg(1.0 / d);
        let root_a = match principal_arc(a) {
            Some((start, end)) => {
                let k = TAU * f64::from(self.branch);
                widen(Interval::new((start + k) / d, (end + k) / d))
            }
            // the piece wraps around the slit and splits into both ends of
            // this branch's sector
            None => self.sector(),
        };
        Enclosure::Polar {
            radius: root_r,
            angle: root_a,
        }
    }

    /// Range of `|w - c|` (widened by the lower-order terms) over a polar
    /// box. `|w - c|² = r² + |c|² - 2r|c|cos(θ - arg c)` increases with `r`
    /// once `r > |c|` and decreases with the cosine, so the extremes sit at
    /// the corners of `(r, cos)`.
    fn shifted_radius(&self, radius: Interval, angle: Interval) -> Option<Interval> {
        let cn = self.c.norm();
        if radius.lo <= cn {
            return None;
        }
        let carg = self.c.im.atan2(self.c.re);
        let cos = (angle - Interval::point(carg)).cos();
        let c = Interval::point(cn);
        let sq = |r: f64, k: f64| {
            let r = Interval::point(r);
            r.sqr() + c.sqr() - Interval::point(2.0) * r * c * Interval::point(k)
        };
        let lo = sq(radius.lo, cos.hi).lo.max(0.0);
        let hi = sq(radius.hi, cos.lo).hi;
        let r = Interval::new(lo, hi).sqrt();
        Some(Interval::new((r.lo - self.perturbation).max(0.0), r.hi + self.perturbation))
    }

    /// Polar enclosure of `w - c` (less the lower-order terms) for `w` in a
    /// polar box, as the union over angular pieces of at most `π/16`.
    fn shifted_pieces(&self, radius: Interval, angle: Interval) -> Option<(Interval, Interval)> {
        let pieces = ((angle.width() / (std::f64::consts::PI / 16.0)).ceil() as usize).clamp(1, 32);
        let mut r_lo = f64::INFINITY;
        let mut r_hi = 0.0f64;
        let mut a_lo = f64::INFINITY;
        let mut a_hi = f64::NEG_INFINITY;
        let mut prev: Option<f64> = None;
        for j in 0..pieces {
            let lo = angle.lo + angle.width() * j as f64 / pieces as f64;
            let hi = if j + 1 == pieces {
                angle.hi
            } else {
                angle.lo + angle.width() * (j + 1) as f64 / pieces as f64
            };
            let piece = Enclosure::Polar {
                radius,
                angle: Interval::new(lo, hi),
            };
            let (x, y) = piece.cartesian_box();
            let x = (x - Interval::point(self.c.re)).inflate(self.perturbation);
            let y = (y - Interval::point(self.c.im)).inflate(self.perturbation);
            let (r, mut a) = polar_of_box(x, y)?;
            // unwrap so consecutive pieces form one continuous arc
            let anchor = prev.unwrap_or(a.lo);
            let turns = ((anchor - a.lo) / TAU).round();
            a = Interval::new(a.lo + turns * TAU, a.hi + turns * TAU);
            prev = Some(a.hi);
            r_lo = r_lo.min(r.lo);
            r_hi = r_hi.max(r.hi);
            a_lo = a_lo.min(a.lo);
            a_hi = a_hi.max(a.hi);
        }
        Some((Interval::new(r_lo, r_hi), Interval::new(a_lo, a_hi)))
    }

    /// Modulus range of `R'(z)` for `|z|` in `rho`.
    fn forward_derivative_modulus(&self, rho: Interval) -> Interval {
        let d = self.degree as i32;
        let lead = Interval::point(f64::from(d) * self.gamma.norm()) * rho.powi((d - 1) as u32);
        let mut pert = 0.0;
        for (i, e) in self.lower.iter().enumerate() {
            let p = d - 1 - i as i32;
            if p >= 1 {
                pert += e.norm() * f64::from(p) * rho.hi.powi(p - 1);
            }
        }
        let pert = pert * (1.0 + 1e-12);
        Interval::new((lead.lo - pert).max(0.0), lead.hi + pert)
    }

    fn second_derivative_bound(&self, rho: Interval) -> f64 {
        let d = self.degree as i32;
        let mut v = f64::from(d * (d - 1)) * self.gamma.norm() * rho.hi.powi(d - 2);
        for (i, e) in self.lower.iter().enumerate() {
            let p = d - 1 - i as i32;
            if p >= 2 {
                v += e.norm() * f64::from(p * (p - 1)) * rho.hi.powi(p - 2);
            }
        }
        v * (1.0 + 1e-12)
    }
}

/// Representative `[start, end]` of an argument arc inside
/// `[CUT, CUT + 2π]`, clipping overshoots below [`SLIT_CLIP`]; `None` when
/// the arc genuinely wraps past the slit.
fn principal_arc(a: Interval) -> Option<(f64, f64)> {
    if a.width() >= TAU - SLIT_CLIP {
        return None;
    }
    let top = BRANCH_CUT + TAU;
    let mut start = BRANCH_CUT + (a.lo - BRANCH_CUT).rem_euclid(TAU);
    if start > top - SLIT_CLIP {
        start -= TAU;
    }
    let end = start + a.width();
    if start >= BRANCH_CUT - SLIT_CLIP && end <= top + SLIT_CLIP {
        Some((start.max(BRANCH_CUT), end.min(top)))
    } else {
        None
    }
}

fn widen(iv: Interval) -> Interval {
    let s = 4.0 * f64::EPSILON * (iv.lo.abs().max(iv.hi.abs()) + 1.0);
    Interval::new(iv.lo - s, iv.hi + s)
}

impl ConformalMap {
    pub fn affine(slope: f64, offset: f64) -> Self {
        ConformalMap::Affine { slope, offset }
    }

    pub fn cubic(lambda: f64, epsilon: f64, offset: f64) -> Self {
        ConformalMap::Cubic {
            lambda,
            epsilon,
            offset,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ConformalMap::Affine { .. } | ConformalMap::Cubic { .. } => 1,
            ConformalMap::InverseBranch(_) => 2,
        }
    }

    /// `Some((slope, offset))` when the map is affine, including the cubic
    /// family at `ε = 0`.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        match *self {
            ConformalMap::Affine { slope, offset } => Some((slope, offset)),
            ConformalMap::Cubic {
                lambda,
                epsilon,
                offset,
            } if epsilon == 0.0 => Some((lambda, offset)),
            _ => None,
        }
    }

    /// Sign of the derivative for maps on the line (`+1` or `-1`); `0` for
    /// planar maps.
    pub fn orientation(&self) -> i8 {
        match *self {
            ConformalMap::Affine { slope, .. } => {
                if slope < 0.0 {
                    -1
                } else {
                    1
                }
            }
            ConformalMap::Cubic { .. } => 1,
            ConformalMap::InverseBranch(_) => 0,
        }
    }

    pub fn eval(&self, p: Point) -> Point {
        match self {
            ConformalMap::Affine { slope, offset } => Complex64::new(slope * p.re + offset, 0.0),
            ConformalMap::Cubic {
                lambda,
                epsilon,
                offset,
            } => {
                let x = p.re;
                Complex64::new(lambda * x + epsilon * x * x + epsilon * x * x * x + offset, 0.0)
            }
            ConformalMap::InverseBranch(b) => b.eval(p),
        }
    }

    /// `|φ'(p)|`.
    pub fn derivative_modulus(&self, p: Point) -> f64 {
        match self {
            ConformalMap::Affine { slope, .. } => slope.abs(),
            ConformalMap::Cubic {
                lambda, epsilon, ..
            } => {
                let x = p.re;
                (lambda + 2.0 * epsilon * x + 3.0 * epsilon * x * x).abs()
            }
            ConformalMap::InverseBranch(b) => 1.0 / b.forward_derivative(b.eval(p)).norm(),
        }
    }

    /// Outer enclosure of the image of `e`.
    pub fn image(&self, e: &Enclosure) -> Enclosure {
        match (self, e) {
            (ConformalMap::Affine { slope, offset }, Enclosure::Line(x)) => {
                Enclosure::Line(x.scale(*slope) + Interval::point(*offset))
            }
            (ConformalMap::Cubic { .. }, Enclosure::Line(x)) => {
                // increasing on the seed, so the endpoints bound the image
                let a = self.cubic_at(Interval::point(x.lo));
                let b = self.cubic_at(Interval::point(x.hi));
                Enclosure::Line(a.hull(&b))
            }
            (ConformalMap::InverseBranch(b), Enclosure::Polar { radius, angle }) => {
                b.image(*radius, *angle)
            }
            _ => panic!("map and enclosure dimensions differ"),
        }
    }

    fn cubic_at(&self, x: Interval) -> Interval {
        match *self {
            ConformalMap::Cubic {
                lambda,
                epsilon,
                offset,
            } => {
                let e = Interval::point(epsilon);
                Interval::point(offset) + x * (Interval::point(lambda) + x * (e + x * e))
            }
            _ => unreachable!(),
        }
    }

    /// Range of `|φ'|` over `e`.
    pub fn derivative_range(&self, e: &Enclosure) -> Interval {
        if let Some((slope, _)) = self.as_affine() {
            return Interval::point(slope.abs());
        }
        match (self, e) {
            (ConformalMap::Affine { slope, .. }, _) => Interval::point(slope.abs()),
            (
                ConformalMap::Cubic {
                    lambda, epsilon, ..
                },
                Enclosure::Line(x),
            ) => {
                let eps = Interval::point(*epsilon);
                let d = Interval::point(*lambda)
                    + *x * (eps.scale(2.0) + x.scale(3.0) * eps);
                d.abs()
            }
            (ConformalMap::InverseBranch(b), Enclosure::Polar { .. }) => {
                let rho = match self.image(e) {
                    Enclosure::Polar { radius, .. } => radius,
                    Enclosure::Line(_) => unreachable!(),
                };
                let fd = b.forward_derivative_modulus(rho);
                if fd.lo <= 0.0 {
                    Interval::new(0.0, f64::INFINITY)
                } else {
                    Interval::point(1.0) / fd
                }
            }
            _ => panic!("map and enclosure dimensions differ"),
        }
    }

    /// Upper bound on the Lipschitz constant of `log|φ'|` over `e`.
    pub fn log_derivative_lipschitz(&self, e: &Enclosure) -> f64 {
        match (self, e) {
            (ConformalMap::Affine { .. }, _) => 0.0,
            (
                ConformalMap::Cubic {
                    lambda, epsilon, ..
                },
                Enclosure::Line(x),
            ) => {
                if *epsilon == 0.0 {
                    return 0.0;
                }
                let eps = Interval::point(*epsilon);
                let second = eps.scale(2.0) + x.scale(6.0) * eps;
                let first = Interval::point(*lambda) + *x * (eps.scale(2.0) + x.scale(3.0) * eps);
                second.mag() / first.mig() * (1.0 + 1e-12)
            }
            (ConformalMap::InverseBranch(b), Enclosure::Polar { .. }) => {
                let rho = match self.image(e) {
                    Enclosure::Polar { radius, .. } => radius,
                    Enclosure::Line(_) => unreachable!(),
                };
                let fd = b.forward_derivative_modulus(rho);
                if fd.lo <= 0.0 {
                    return f64::INFINITY;
                }
                // |f''/f'| = |R''(f)| / |R'(f)|^2
                b.second_derivative_bound(rho) / (fd.lo * fd.lo) * (1.0 + 1e-12)
            }
            _ => panic!("map and enclosure dimensions differ"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branch(degree: u32, c: f64, k: u32) -> ConformalMap {
        ConformalMap::InverseBranch(InverseBranch::new(
            degree,
            Complex64::new(1.0, 0.0),
            Complex64::new(c, 0.0),
            vec![],
            k,
            1.25,
        ))
    }

    #[test]
    fn cubic_at_zero_is_offset() {
        let f = ConformalMap::cubic(0.25, 0.0, 0.25);
        assert_eq!(f.eval(Complex64::new(0.0, 0.0)).re, 0.25);
    }

    #[test]
    fn cubic_derivative() {
        let f = ConformalMap::cubic(0.25, 1e-3, 0.0);
        let d = f.derivative_modulus(Complex64::new(0.5, 0.0));
        assert!((d - 0.25175).abs() < 1e-15);
    }

    #[test]
    fn square_root_branch_fixes_one() {
        let f = branch(2, 0.0, 0);
        let z = f.eval(Complex64::new(1.0, 0.0));
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let g = branch(2, 0.0, 1);
        assert!((g.eval(Complex64::new(1.0, 0.0)) + Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn branch_image_contains_point_images() {
        let full = Enclosure::Polar {
            radius: Interval::new(0.8, 1.25),
            angle: Interval::new(BRANCH_CUT, BRANCH_CUT + TAU),
        };
        for k in 0..2 {
            let f = branch(2, 0.05, k);
            let e1 = f.image(&full);
            let e2 = f.image(&e1);
            for i in 0..200 {
                let w = Complex64::from_polar(0.8 + 0.45 * (i as f64 / 199.0), i as f64 * 0.37);
                let z1 = f.eval(w);
                assert!(e1.contains(z1, 0.0), "{w} -> {z1} not in {e1:?}");
                let z2 = f.eval(z1);
                assert!(e2.contains(z2, 0.0));
            }
        }
    }

    #[test]
    fn newton_refinement_inverts_perturbed_polynomial() {
        let b = InverseBranch::new(
            3,
            Complex64::new(1.0, 0.0),
            Complex64::new(0.02, 0.01),
            vec![Complex64::new(0.01, 0.0), Complex64::new(0.0, 0.005)],
            2,
            1.25,
        );
        let w = Complex64::from_polar(1.1, 2.0);
        let z = b.eval(w);
        assert!((b.forward(z) - w).norm() < 1e-13);
    }
}
