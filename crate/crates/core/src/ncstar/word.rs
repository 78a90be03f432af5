use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;

/// Index of a generator inside a [`GenAlphabet`](super::GenAlphabet).
pub type Sym = u16;

/// A monomial of the free algebra: a finite sequence of generator symbols.
///
/// Words are ordered degree-lexicographically on the raw symbol indices:
/// shorter words are smaller, words of equal length compare letter by letter.
/// The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub(crate) Vec<Sym>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn from_syms(syms: impl Into<Vec<Sym>>) -> Self {
        Word(syms.into())
    }

    pub fn letter(s: Sym) -> Self {
        Word(vec![s])
    }

    pub fn syms(&self) -> &[Sym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `left · self · right`
    pub fn wrap(left: &[Sym], mid: &[Sym], right: &[Sym]) -> Word {
        let mut v = Vec::with_capacity(left.len() + mid.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(mid);
        v.extend_from_slice(right);
        Word(v)
    }

    /// Position of the first occurrence of `pat` as a factor.
    pub fn find_factor(&self, pat: &[Sym]) -> Option<usize> {
        if pat.is_empty() {
            return Some(0);
        }
        if pat.len() > self.0.len() {
            return None;
        }
        self.0.windows(pat.len()).position(|w| w == pat)
    }

    pub fn map(&self, f: impl Fn(Sym) -> Sym) -> Word {
        Word(self.0.iter().map(|&s| f(s)).collect())
    }
}

impl Borrow<[Sym]> for Word {
    fn borrow(&self) -> &[Sym] {
        &self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex_puts_degree_first() {
        let a = Word::from_syms(vec![5]);
        let b = Word::from_syms(vec![0, 0]);
        assert!(a < b);
        assert!(Word::unit() < a);
        assert!(Word::from_syms(vec![0, 1]) < Word::from_syms(vec![1, 0]));
    }

    #[test]
    fn factor_search() {
        let w = Word::from_syms(vec![1, 2, 3, 2, 3]);
        assert_eq!(w.find_factor(&[2, 3]), Some(1));
        assert_eq!(w.find_factor(&[3, 1]), None);
        assert_eq!(w.find_factor(&[1, 2, 3, 2, 3, 4]), None);
    }
}
