use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde_json::{Map, Value};

use super::alphabet::GenAlphabet;
use super::word::{Sym, Word};
use super::{EngineError, Q};

/// Element of the free *-algebra over the rationals.
///
/// Terms are kept in a map from words to nonzero coefficients, sorted by the
/// degree-lexicographic word order, so the leading term is the last entry.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    pub(crate) terms: BTreeMap<Word, Q>,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(Word::unit(), c)
    }

    pub fn var(s: Sym) -> Self {
        Self::monomial(Word::letter(s), Q::one())
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, Q::one())
    }

    pub fn monomial(w: Word, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Q)> {
        self.terms.last_key_value()
    }

    pub fn degree(&self) -> usize {
        self.leading().map(|(w, _)| w.len()).unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · left · other · right`
    pub fn add_shifted(&mut self, c: &Q, left: &[Sym], other: &NCPoly, right: &[Sym]) {
        if c.is_zero() {
            return;
        }
        for (w, oc) in &other.terms {
            self.add_term(Word::wrap(left, &w.0, right), c * oc);
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &NCPoly) {
        self.add_shifted(c, &[], other, &[]);
    }

    pub fn scale(&self, c: &Q) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> NCPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => {
                let inv = c.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Reverse every word and star every letter. Coefficients are rational, so
    /// conjugation is the identity.
    pub fn star(&self, alpha: &GenAlphabet) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (alpha.star_word(w), c.clone()))
                .collect(),
        }
    }

    /// Relabel every letter; the word order is recomputed.
    pub fn map_syms(&self, f: impl Fn(Sym) -> Sym) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.map(&f), c.clone())))
    }

    /// Algebra homomorphism sending each generator to the given polynomial.
    pub fn substitute(&self, f: &dyn Fn(Sym) -> NCPoly) -> NCPoly {
        let mut images: BTreeMap<Sym, NCPoly> = BTreeMap::new();
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(c.clone());
            for &s in &w.0 {
                let img = images.entry(s).or_insert_with(|| f(s));
                acc = &acc * &*img;
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&Q::one(), &acc);
        }
        out
    }

    pub fn max_symbol(&self) -> Option<Sym> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max()
    }

    pub fn display(&self, alpha: &GenAlphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                let _ = write!(s, "{}", abs);
            } else {
                if !abs.is_one() {
                    let _ = write!(s, "{}*", abs);
                }
                s.push_str(&alpha.format_word(w).replace(' ', "*"));
            }
        }
        s
    }

    /// `{"u11 u22": "1/2", "": "-1"}`
    pub fn to_json(&self, alpha: &GenAlphabet) -> Value {
        let mut m = Map::new();
        for (w, c) in &self.terms {
            let key = if w.is_empty() {
                String::new()
            } else {
                alpha.format_word(w)
            };
            m.insert(key, Value::String(c.to_string()));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value, alpha: &GenAlphabet) -> Result<NCPoly, EngineError> {
        let obj = v
            .as_object()
            .ok_or_else(|| EngineError::Parse("polynomial must be a JSON object".into()))?;
        let mut p = NCPoly::zero();
        for (k, c) in obj {
            let w = alpha.parse_word_key(k)?;
            let cs = c.as_str().ok_or_else(|| {
                EngineError::Parse(format!("coefficient of '{k}' must be a string"))
            })?;
            p.add_term(w, parse_rational(cs)?);
        }
        Ok(p)
    }
}

pub fn parse_rational(s: &str) -> Result<Q, EngineError> {
    s.trim()
        .parse::<Q>()
        .map_err(|_| EngineError::Parse(format!("bad rational '{s}'")))
}

impl std::fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, c.to_string())))
            .finish()
    }
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(&Q::one(), rhs);
        out
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(&-Q::one(), rhs);
        out
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-Q::one())
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(mut self, rhs: NCPoly) -> NCPoly {
        self.add_scaled(&Q::one(), &rhs);
        self
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(mut self, rhs: NCPoly) -> NCPoly {
        self.add_scaled(&-Q::one(), &rhs);
        self
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        &self * &rhs
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> (GenAlphabet, NCPoly, NCPoly) {
        let mut a = GenAlphabet::new();
        let x = a.add_self_adjoint("x").unwrap();
        let (s, _) = a.add_pair("s", "s*").unwrap();
        (a, NCPoly::var(x), NCPoly::var(s))
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let (_, x, s) = ab();
        let p = &(&x * &s) - &(&x * &s);
        assert!(p.is_zero());
        let c = &(&x * &s) - &(&s * &x);
        assert_eq!(c.len(), 2);
        assert_eq!(c.degree(), 2);
    }

    #[test]
    fn star_of_product_reverses() {
        let (a, x, s) = ab();
        let p = &(&x * &s) + &NCPoly::constant(qr(3, 2));
        let st = p.star(&a);
        let sstar = NCPoly::var(a.sym("s*").unwrap());
        assert_eq!(st, &(&sstar * &x) + &NCPoly::constant(qr(3, 2)));
        assert_eq!(st.star(&a), p);
    }

    #[test]
    fn json_round_trip() {
        let (a, x, s) = ab();
        let p = &(&(&x * &s).scale(&qr(-7, 3)) + &NCPoly::one()) + &s;
        let v = p.to_json(&a);
        assert_eq!(v["x s"], "-7/3");
        assert_eq!(v[""], "1");
        assert_eq!(NCPoly::from_json(&v, &a).unwrap(), p);
    }

    #[test]
    fn substitution_is_multiplicative() {
        let (_, x, s) = ab();
        let p = &x * &s;
        let img = p.substitute(&|sym| {
            if sym == 0 {
                &NCPoly::one() - &NCPoly::var(0)
            } else {
                NCPoly::var(sym)
            }
        });
        assert_eq!(img, &s - &(&x * &s));
    }

    #[test]
    fn display_is_readable() {
        let (a, x, s) = ab();
        let p = &(&x * &s) - &NCPoly::constant(q(2));
        assert_eq!(p.display(&a), "x*s - 2");
    }
}
