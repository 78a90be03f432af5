use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::word::{Sym, Word};
use super::EngineError;

/// Generator symbols of a free *-algebra together with the involution on them.
///
/// Each symbol is either self-adjoint (`star[s] == s`) or paired with a
/// distinct adjoint symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenAlphabet {
    names: Vec<String>,
    star: Vec<Sym>,
    index: HashMap<String, Sym>,
}

/// Serialized generator entry: `{"name": "s1", "adjoint": "s1*"}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorTag {
    pub name: String,
    pub adjoint: String,
}

impl GenAlphabet {
    pub fn new() -> Self {
        GenAlphabet {
            names: Vec::new(),
            star: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn push_name(&mut self, name: &str) -> Result<Sym, EngineError> {
        if self.index.contains_key(name) {
            return Err(EngineError::DuplicateGenerator(name.to_string()));
        }
        if self.names.len() >= Sym::MAX as usize {
            return Err(EngineError::AlphabetTooLarge);
        }
        let s = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), s);
        Ok(s)
    }

    pub fn add_self_adjoint(&mut self, name: &str) -> Result<Sym, EngineError> {
        let s = self.push_name(name)?;
        self.star.push(s);
        Ok(s)
    }

    /// Adds `name` and its formal adjoint `adjoint`, returning both symbols.
    pub fn add_pair(&mut self, name: &str, adjoint: &str) -> Result<(Sym, Sym), EngineError> {
        if name == adjoint {
            return Err(EngineError::DuplicateGenerator(name.to_string()));
        }
        let a = self.push_name(name)?;
        self.star.push(a + 1);
        let b = self.push_name(adjoint)?;
        self.star.push(a);
        Ok((a, b))
    }

    pub fn from_tags(tags: &[GeneratorTag]) -> Result<Self, EngineError> {
        let mut alpha = GenAlphabet::new();
        let mut i = 0;
        while i < tags.len() {
            let t = &tags[i];
            if t.name == t.adjoint {
                alpha.add_self_adjoint(&t.name)?;
                i += 1;
            } else {
                match tags.get(i + 1) {
                    Some(n) if n.name == t.adjoint && n.adjoint == t.name => {
                        alpha.add_pair(&t.name, &t.adjoint)?;
                        i += 2;
                    }
                    _ => return Err(EngineError::BadInvolution(t.name.clone())),
                }
            }
        }
        Ok(alpha)
    }

    pub fn tags(&self) -> Vec<GeneratorTag> {
        (0..self.len())
            .map(|s| GeneratorTag {
                name: self.names[s].clone(),
                adjoint: self.names[self.star[s] as usize].clone(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn star_of(&self, s: Sym) -> Sym {
        self.star[s as usize]
    }

    pub fn is_self_adjoint(&self, s: Sym) -> bool {
        self.star[s as usize] == s
    }

    /// Reverse the word and star each letter.
    pub fn star_word(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&s| self.star[s as usize]).collect())
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|&s| self.names[s as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Word as a list of symbol names.
    pub fn word_names(&self, w: &Word) -> Vec<String> {
        w.0.iter()
            .map(|&s| self.names[s as usize].clone())
            .collect()
    }

    pub fn parse_word_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Word, EngineError> {
        names
            .iter()
            .map(|n| {
                self.sym(n.as_ref())
                    .ok_or_else(|| EngineError::UnknownGenerator(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parses the space-separated key form used in polynomial maps; the empty
    /// string is the unit word.
    pub fn parse_word_key(&self, key: &str) -> Result<Word, EngineError> {
        let parts: Vec<&str> = key.split_whitespace().collect();
        self.parse_word_names(&parts)
    }
}

impl Default for GenAlphabet {
    fn default() -> Self {
        Self::new()
    }
}
