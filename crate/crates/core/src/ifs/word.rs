use std::fmt;

/// Index of a map in the system alphabet.
pub type Symbol = u32;

/// A finite word `(i_1, …, i_n)` over the alphabet of an IFS.
///
/// As a composition it reads left to right as outermost to innermost:
/// `φ_{i_1 … i_n} = φ_{i_1} ∘ … ∘ φ_{i_n}`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `len` copies of `symbol`.
    pub fn repeat(symbol: Symbol, len: usize) -> Self {
        Word(vec![symbol; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Symbol> + '_ {
        self.0.iter().copied()
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    /// Enumerates all words of length `len` over `m` symbols in lexicographic order.
    pub fn all(m: usize, len: usize) -> impl Iterator<Item = Word> {
        let total = (m as u128).pow(len as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = (idx % m as u128) as Symbol;
                idx /= m as u128;
            }
            Word(v)
        })
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}
