//! JSON file format for automata.
//!
//! ```json
//! {"alphabet": ["a","b"], "states": ["p","q"], "initial": ["p"], "final": ["q"],
//!  "transitions": [{"from":"p","letter":"a","to":"q","weight":"<1,2>"}]}
//! ```
//!
//! Muller automata replace `final` by `"muller": [["p","q"], ...]`, and
//! multiset payloads are written `{"multiset": [["<1,2>", 3], ...]}`.

use super::{Alphabet, Automaton, MultisetAutomaton, Transition};
use crate::error::{Error, Result};
use crate::multiset::FiniteMultiset;
use crate::num::parse_literal;
use crate::structures::WeightDomain;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Display;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutomatonFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final", default, skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub muller: Option<Vec<Vec<String>>>,
    pub transitions: Vec<TransitionFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionFile {
    pub from: String,
    pub letter: String,
    pub to: String,
    pub weight: WeightFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightFile {
    Literal(String),
    Multiset { multiset: Vec<(String, u64)> },
}

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|q| format!("q{q}")).collect()
}

fn skeleton<W: Clone, F: Fn(&W) -> WeightFile>(a: &Automaton<W>, weight: F) -> AutomatonFile {
    let names = state_names(a.num_states());
    AutomatonFile {
        structure: None,
        alphabet: a.alphabet().names().to_vec(),
        states: names.clone(),
        initial: a.initial().iter().map(|&q| names[q].clone()).collect(),
        finals: Some(a.finals().into_iter().map(|q| names[q].clone()).collect()),
        muller: None,
        transitions: a
            .transitions()
            .iter()
            .map(|t| TransitionFile {
                from: names[t.from].clone(),
                letter: a.alphabet().name(t.letter).to_string(),
                to: names[t.to].clone(),
                weight: weight(&t.weight),
            })
            .collect(),
    }
}

/// File form of an automaton with element payloads.
pub fn to_file<W: Clone + Display>(a: &Automaton<W>) -> AutomatonFile {
    skeleton(a, |w| WeightFile::Literal(w.to_string()))
}

/// File form of an automaton with multiset payloads.
pub fn multiset_to_file<M: Ord + Clone + Display>(a: &MultisetAutomaton<M>) -> AutomatonFile {
    skeleton(a, |r| WeightFile::Multiset {
        multiset: r
            .iter()
            .map(|(m, c)| (m.to_string(), u64::try_from(c).unwrap_or(u64::MAX)))
            .collect(),
    })
}

/// The parts of an automaton file with payloads still unparsed.
pub struct RawAutomaton {
    pub alphabet: Alphabet,
    pub num_states: usize,
    pub initial: Vec<usize>,
    pub finals: Vec<usize>,
    pub muller: Option<Vec<BTreeSet<usize>>>,
    pub transitions: Vec<(usize, usize, usize, WeightFile)>,
}

pub fn read_raw(file: &AutomatonFile) -> Result<RawAutomaton> {
    let alphabet = Alphabet::new(file.alphabet.clone())?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, s) in file.states.iter().enumerate() {
        if index.insert(s.as_str(), i).is_some() {
            return Err(Error::InvalidAutomaton(format!("state `{s}` declared twice")));
        }
    }
    let state = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| Error::InvalidAutomaton(format!("undeclared state `{s}`")))
    };
    let states_of = |xs: &[String]| xs.iter().map(|s| state(s)).collect::<Result<Vec<usize>>>();
    let initial = states_of(&file.initial)?;
    let finals = match &file.finals {
        Some(f) => states_of(f)?,
        None => Vec::new(),
    };
    let muller = match &file.muller {
        Some(sets) => Some(
            sets.iter()
                .map(|s| states_of(s).map(|v| v.into_iter().collect::<BTreeSet<usize>>()))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let mut transitions = Vec::new();
    for t in &file.transitions {
        let letter = alphabet
            .index_of(&t.letter)
            .ok_or_else(|| Error::UnknownLetter(t.letter.clone()))?;
        transitions.push((state(&t.from)?, letter, state(&t.to)?, t.weight.clone()));
    }
    Ok(RawAutomaton {
        alphabet,
        num_states: file.states.len(),
        initial,
        finals,
        muller,
        transitions,
    })
}

fn parse_weight<D: WeightDomain>(text: &str, d: &D) -> Result<D::Elem> {
    let comps = parse_literal(text).ok_or_else(|| Error::Structure(format!("malformed weight literal `{text}`")))?;
    d.parse_elem(&comps)
}

impl RawAutomaton {
    pub fn with_elements<D: WeightDomain>(&self, d: &D) -> Result<Automaton<D::Elem>> {
        let mut transitions = Vec::new();
        for (from, letter, to, w) in &self.transitions {
            let weight = match w {
                WeightFile::Literal(s) => parse_weight(s, d)?,
                WeightFile::Multiset { .. } => {
                    return Err(Error::InvalidAutomaton(
                        "expected element payloads, found a multiset".into(),
                    ))
                }
            };
            transitions.push(Transition { from: *from, letter: *letter, to: *to, weight });
        }
        Automaton::new(
            self.alphabet.clone(),
            self.num_states,
            self.initial.clone(),
            self.finals.clone(),
            transitions,
        )
    }

    pub fn with_multisets<D: WeightDomain>(&self, d: &D) -> Result<MultisetAutomaton<D::Elem>> {
        let mut transitions = Vec::new();
        for (from, letter, to, w) in &self.transitions {
            let weight = match w {
                WeightFile::Literal(s) => FiniteMultiset::singleton(parse_weight(s, d)?),
                WeightFile::Multiset { multiset } => {
                    let mut r = FiniteMultiset::empty();
                    for (s, c) in multiset {
                        r.insert(parse_weight(s, d)?, (*c).into());
                    }
                    r
                }
            };
            transitions.push(Transition { from: *from, letter: *letter, to: *to, weight });
        }
        Automaton::new(
            self.alphabet.clone(),
            self.num_states,
            self.initial.clone(),
            self.finals.clone(),
            transitions,
        )
    }
}

pub fn parse_file(text: &str) -> Result<AutomatonFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn render(file: &AutomatonFile) -> String {
    serde_json::to_string_pretty(file).expect("automaton files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{RatioStructure, Weight};

    #[test]
    fn round_trip() {
        let text = r#"{"alphabet":["a","b"],"states":["p","q"],"initial":["p"],"final":["q"],
            "transitions":[{"from":"p","letter":"a","to":"q","weight":"<1,2>"},
                           {"from":"q","letter":"b","to":"q","weight":"<0,1/2>"}]}"#;
        let a = read_raw(&parse_file(text).unwrap()).unwrap().with_elements(&RatioStructure).unwrap();
        assert_eq!(a.transitions()[0].weight, Weight::from_ints(&[1, 2]));
        let again = read_raw(&parse_file(&render(&to_file(&a))).unwrap())
            .unwrap()
            .with_elements(&RatioStructure)
            .unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn multiset_payloads() {
        let text = r#"{"alphabet":["a"],"states":["p"],"initial":["p"],"final":["p"],
            "transitions":[{"from":"p","letter":"a","to":"p","weight":{"multiset":[["<1,0>",2]]}}]}"#;
        let raw = read_raw(&parse_file(text).unwrap()).unwrap();
        assert!(raw.with_elements(&RatioStructure).is_err());
        let m = raw.with_multisets(&RatioStructure).unwrap();
        assert_eq!(m.transitions()[0].weight.total_count(), 2u32.into());
        assert!(render(&multiset_to_file(&m)).contains("\"multiset\""));
    }

    #[test]
    fn rejects_bad_references() {
        let text = r#"{"alphabet":["a"],"states":["p"],"initial":["r"],"final":[],"transitions":[]}"#;
        assert!(read_raw(&parse_file(text).unwrap()).is_err());
        let text = r#"{"alphabet":["a"],"states":["p"],"initial":["p"],"final":[],
            "transitions":[{"from":"p","letter":"z","to":"p","weight":"<0,0>"}]}"#;
        assert!(read_raw(&parse_file(text).unwrap()).is_err());
    }
}
