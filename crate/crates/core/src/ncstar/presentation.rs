use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::alphabet::{GenAlphabet, GeneratorTag};
use super::poly::NCPoly;
use super::EngineError;

/// A relation of a presentation: a polynomial that is zero in the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub poly: NCPoly,
}

/// A presented *-algebra: generators with involution plus relations.
///
/// Construction drops zero relations and duplicates (up to a nonzero scalar)
/// and appends `r*` for every relation whose adjoint is not already present,
/// so the relation list is always star-closed.
#[derive(Debug, Clone)]
pub struct Presentation {
    name: String,
    alphabet: Arc<GenAlphabet>,
    relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        alphabet: Arc<GenAlphabet>,
        raw: impl IntoIterator<Item = (String, NCPoly)>,
    ) -> Result<Self, EngineError> {
        let mut seen: HashSet<NCPoly> = HashSet::new();
        let mut relations = Vec::new();
        for (label, poly) in raw {
            if let Some(m) = poly.max_symbol() {
                if m as usize >= alphabet.len() {
                    return Err(EngineError::UnknownSymbol(m));
                }
            }
            if poly.is_zero() {
                continue;
            }
            if seen.insert(poly.monic()) {
                relations.push(Relation { label, poly });
            }
        }
        let base = relations.len();
        for i in 0..base {
            let st = relations[i].poly.star(&alphabet);
            if seen.insert(st.monic()) {
                let label = format!("{}*", relations[i].label);
                relations.push(Relation { label, poly: st });
            }
        }
        Ok(Presentation {
            name: name.into(),
            alphabet,
            relations,
        })
    }

    /// Same generators, extra relations appended (and star-closed).
    pub fn extended(
        &self,
        name: impl Into<String>,
        extra: impl IntoIterator<Item = (String, NCPoly)>,
    ) -> Result<Self, EngineError> {
        let raw: Vec<(String, NCPoly)> = self
            .relations
            .iter()
            .map(|r| (r.label.clone(), r.poly.clone()))
            .chain(extra)
            .collect();
        Presentation::new(name, self.alphabet.clone(), raw)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Arc<GenAlphabet> {
        &self.alphabet
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, i: usize) -> Option<&NCPoly> {
        self.relations.get(i).map(|r| &r.poly)
    }

    pub fn max_degree(&self) -> usize {
        self.relations
            .iter()
            .map(|r| r.poly.degree())
            .max()
            .unwrap_or(0)
    }

    /// Generator by name as a polynomial.
    pub fn gen(&self, name: &str) -> Result<NCPoly, EngineError> {
        self.alphabet
            .sym(name)
            .map(NCPoly::var)
            .ok_or_else(|| EngineError::UnknownGenerator(name.to_string()))
    }

    /// Every relation's adjoint is, up to a scalar, also a relation.
    pub fn is_star_closed(&self) -> bool {
        let set: HashSet<NCPoly> = self.relations.iter().map(|r| r.poly.monic()).collect();
        self.relations
            .iter()
            .all(|r| set.contains(&r.poly.star(&self.alphabet).monic()))
    }

    pub fn dump(&self) -> PresentationDump {
        PresentationDump {
            name: self.name.clone(),
            generators: self.alphabet.tags(),
            relations: self
                .relations
                .iter()
                .map(|r| RelationDump {
                    label: r.label.clone(),
                    poly: r.poly.to_json(&self.alphabet),
                })
                .collect(),
        }
    }

    pub fn from_dump(d: &PresentationDump) -> Result<Self, EngineError> {
        let alpha = Arc::new(GenAlphabet::from_tags(&d.generators)?);
        let raw = d
            .relations
            .iter()
            .map(|r| Ok((r.label.clone(), NCPoly::from_json(&r.poly, &alpha)?)))
            .collect::<Result<Vec<_>, EngineError>>()?;
        Presentation::new(d.name.clone(), alpha, raw)
    }
}

/// JSON dump: generator list with involution tags, then relations in order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationDump {
    pub name: String,
    pub generators: Vec<GeneratorTag>,
    pub relations: Vec<RelationDump>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDump {
    pub label: String,
    pub poly: Value,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncstar::poly::q;

    #[test]
    fn star_closure_appends_adjoints() {
        let mut a = GenAlphabet::new();
        let p = a.add_self_adjoint("p").unwrap();
        let (s, _) = a.add_pair("s", "s*").unwrap();
        let a = Arc::new(a);
        let r = &(&NCPoly::var(p) * &NCPoly::var(s)) - &NCPoly::var(s);
        let pres = Presentation::new("t", a.clone(), vec![("r".to_string(), r)]).unwrap();
        assert_eq!(pres.relations().len(), 2);
        assert_eq!(pres.relations()[1].label, "r*");
        assert!(pres.is_star_closed());
    }

    #[test]
    fn duplicates_and_zero_dropped() {
        let mut a = GenAlphabet::new();
        let p = a.add_self_adjoint("p").unwrap();
        let a = Arc::new(a);
        let r = &(&NCPoly::var(p) * &NCPoly::var(p)) - &NCPoly::var(p);
        let pres = Presentation::new(
            "t",
            a,
            vec![
                ("a".to_string(), r.clone()),
                ("b".to_string(), r.scale(&q(-2))),
                ("c".to_string(), NCPoly::zero()),
            ],
        )
        .unwrap();
        assert_eq!(pres.relations().len(), 1);
    }

    #[test]
    fn dump_round_trip() {
        let mut a = GenAlphabet::new();
        let p = a.add_self_adjoint("p").unwrap();
        let (s, st) = a.add_pair("s", "s*").unwrap();
        let a = Arc::new(a);
        let r = &(&NCPoly::var(st) * &NCPoly::var(s)) - &NCPoly::var(p);
        let pres = Presentation::new("t", a, vec![("ck".to_string(), r)]).unwrap();
        let d = pres.dump();
        let json = serde_json::to_string(&d).unwrap();
        let back: PresentationDump = serde_json::from_str(&json).unwrap();
        let pres2 = Presentation::from_dump(&back).unwrap();
        assert_eq!(pres2.relations(), pres.relations());
        assert_eq!(pres2.alphabet(), pres.alphabet());
    }
}
