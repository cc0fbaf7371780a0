use super::enclosure::{Enclosure, Point};
use super::word::Symbol;
use super::IfsSystem;
use crate::interval::Interval;

/// An incrementally built composition `φ_{w_1} ∘ … ∘ φ_{w_d}`, extended and
/// shortened at the inner end.
///
/// For affine systems the composed slope and offset are carried as
/// intervals, so every push and image costs O(1). Otherwise images are
/// recomputed from the word.
pub(crate) struct Chain<'a> {
    sys: &'a IfsSystem,
    symbols: Vec<Symbol>,
    affine: Option<Vec<(Interval, Interval)>>,
    orientation: Vec<i8>,
}

impl<'a> Chain<'a> {
    pub(crate) fn new(sys: &'a IfsSystem) -> Self {
        Chain {
            sys,
            symbols: Vec::new(),
            affine: sys
                .affine_maps()
                .map(|_| vec![(Interval::point(1.0), Interval::point(0.0))]),
            orientation: vec![1],
        }
    }

    pub(crate) fn depth(&self) -> usize {
        self.symbols.len()
    }

    pub(crate) fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Appends `s` as the innermost map.
    pub(crate) fn push(&mut self, s: Symbol) {
        let map = &self.sys.maps()[s as usize];
        if let Some(stack) = self.affine.as_mut() {
            let (a, b) = *stack.last().unwrap();
            let (slope, offset) = map.as_affine().unwrap();
            stack.push((a.scale(slope), a.scale(offset) + b));
        }
        let o = *self.orientation.last().unwrap();
        self.orientation.push(o * map.orientation());
        self.symbols.push(s);
    }

    pub(crate) fn pop(&mut self) {
        self.symbols.pop();
        self.orientation.pop();
        if let Some(stack) = self.affine.as_mut() {
            stack.pop();
        }
    }

    /// Sign of the composed derivative on the line, `0` in the plane.
    pub(crate) fn orientation(&self) -> i8 {
        *self.orientation.last().unwrap()
    }

    /// Enclosure of `φ_w(e)`.
    pub(crate) fn image(&self, e: &Enclosure) -> Enclosure {
        match (&self.affine, e) {
            (Some(stack), Enclosure::Line(x)) => {
                let (a, b) = *stack.last().unwrap();
                let lo = a * Interval::point(x.lo);
                let hi = a * Interval::point(x.hi);
                Enclosure::Line(lo.hull(&hi) + b)
            }
            _ => self.sys.image_unchecked(&self.symbols, e),
        }
    }

    /// Enclosure of `φ_w(V)`.
    pub(crate) fn seed_image(&self) -> Enclosure {
        self.image(&self.sys.seed().enclosure())
    }

    /// Floating-point `φ_w(p)`.
    pub(crate) fn apply_point(&self, p: Point) -> Point {
        self.sys.apply_word_unchecked(&self.symbols, p)
    }
}
