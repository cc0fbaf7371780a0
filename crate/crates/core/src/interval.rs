//! Closed real intervals with outward rounding.
//!
//! Basic arithmetic (`+ - * /`) widens each result by one ulp on either side,
//! which is enough to contain the exact result of a round-to-nearest
//! operation. Library transcendentals (`powf`, `ln`, `exp`, `sin`, `cos`,
//! `atan2`) are not correctly rounded, so their results are widened by a few
//! ulps relative to magnitude instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Relative slack applied around transcendental function results.
const TRANSCENDENTAL_SLACK: f64 = 8.0 * f64::EPSILON;

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

#[inline]
fn loose_down(x: f64) -> f64 {
    down(x - x.abs() * TRANSCENDENTAL_SLACK - f64::MIN_POSITIVE)
}

#[inline]
fn loose_up(x: f64) -> f64 {
    up(x + x.abs() * TRANSCENDENTAL_SLACK + f64::MIN_POSITIVE)
}

impl Interval {
    /// Builds `[lo, hi]`. Panics in debug builds if `lo > hi`.
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Smallest interval containing both endpoints, in either order.
    pub fn spanning(a: f64, b: f64) -> Self {
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `true` when `x` lies in the interval grown (positive `margin`) or
    /// shrunk (negative `margin`) by `margin` on each side.
    pub fn contains_with_margin(&self, x: f64, margin: f64) -> bool {
        self.lo - margin <= x && x <= self.hi + margin
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Length of the common part, negative when the intervals are apart.
    pub fn overlap(&self, other: &Interval) -> f64 {
        self.hi.min(other.hi) - self.lo.max(other.lo)
    }

    pub fn inflate(&self, r: f64) -> Interval {
        Interval {
            lo: down(self.lo - r),
            hi: up(self.hi + r),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    /// Magnitude: the largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Mignitude: the smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval::new(down(a.lo * a.lo).max(0.0), up(a.hi * a.hi))
    }

    /// Integer power, exact monotonicity handling for odd and even exponents.
    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::point(1.0),
            1 => *self,
            _ => {
                let mut acc = if n % 2 == 0 { self.abs() } else { *self };
                let base = acc;
                for _ in 1..n {
                    acc = acc * base;
                }
                acc
            }
        }
    }

    /// `x^p` for non-negative `x` and real `p > 0`.
    pub fn powf_nonneg(&self, p: f64) -> Interval {
        debug_assert!(p > 0.0);
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        Interval::new(loose_down(lo.powf(p)).max(0.0), loose_up(hi.powf(p)))
    }

    pub fn sqrt(&self) -> Interval {
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        Interval::new(down(lo.sqrt()).max(0.0), up(hi.sqrt()))
    }

    pub fn ln(&self) -> Interval {
        Interval::new(loose_down(self.lo.ln()), loose_up(self.hi.ln()))
    }

    pub fn exp(&self) -> Interval {
        Interval::new(loose_down(self.lo.exp()).max(0.0), loose_up(self.hi.exp()))
    }

    pub fn cos(&self) -> Interval {
        use std::f64::consts::PI;
        if self.width() >= 2.0 * PI {
            return Interval::new(-1.0, 1.0);
        }
        let (mut lo, mut hi) = {
            let a = self.lo.cos();
            let b = self.hi.cos();
            (a.min(b), a.max(b))
        };
        // extrema at multiples of pi inside the range
        let k0 = (self.lo / PI).ceil() as i64;
        let k1 = (self.hi / PI).floor() as i64;
        for k in k0..=k1 {
            if k.rem_euclid(2) == 0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
        Interval::new(loose_down(lo).max(-1.0), loose_up(hi).min(1.0))
    }

    pub fn sin(&self) -> Interval {
        (*self - Interval::point(std::f64::consts::FRAC_PI_2)).cos()
    }

    pub fn scale(&self, s: f64) -> Interval {
        Interval::point(s) * *self
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo + rhs.lo), up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo - rhs.hi), up(self.hi - rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in p {
            // 0 * inf does not occur: all bounds are finite in this crate
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // products against an exact zero stay tight
        let exact = (self.lo == 0.0 && self.hi == 0.0) || (rhs.lo == 0.0 && rhs.hi == 0.0);
        if exact {
            Interval::new(lo, hi)
        } else {
            Interval::new(down(lo), up(hi))
        }
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Division by an interval that excludes zero.
    fn div(self, rhs: Interval) -> Interval {
        debug_assert!(!rhs.contains(0.0), "division by interval containing 0");
        let p = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

/// `atan2` over a box `xs × ys` that does not contain the origin, as an arc
/// `[a, b]` with `b - a < 2π`. The arc is reported so that it does not cross
/// the negative real axis when the box avoids it; boxes straddling the
/// negative real axis are reported with angles in `(0, 2π)`.
pub fn atan2_box(xs: Interval, ys: Interval) -> Interval {
    use std::f64::consts::PI;
    let corners = [
        (xs.lo, ys.lo),
        (xs.lo, ys.hi),
        (xs.hi, ys.lo),
        (xs.hi, ys.hi),
    ];
    let crosses_negative_axis = xs.lo < 0.0 && ys.lo <= 0.0 && ys.hi >= 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, y) in corners {
        let mut a = y.atan2(x);
        if crosses_negative_axis && a < 0.0 {
            a += 2.0 * PI;
        }
        lo = lo.min(a);
        hi = hi.max(a);
    }
    Interval::new(loose_down(lo), loose_up(hi))
}
