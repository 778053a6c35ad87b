use super::Var;
use crate::automata::Alphabet;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Largest scope the extended alphabet supports.
pub const MAX_SCOPE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarValue {
    Pos(usize),
    Set(BTreeSet<usize>),
}

impl fmt::Display for VarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarValue::Pos(i) => write!(f, "{i}"),
            VarValue::Set(s) => {
                let items: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
        }
    }
}

/// A word over the base alphabet together with an assignment of its
/// scope variables. The scope is the key set of `values`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssignedWord {
    pub word: Vec<usize>,
    pub values: BTreeMap<Var, VarValue>,
}

impl AssignedWord {
    pub fn new(word: Vec<usize>) -> Self {
        AssignedWord { word, values: BTreeMap::new() }
    }

    pub fn with(mut self, v: Var, value: VarValue) -> Self {
        self.values.insert(v, value);
        self
    }

    pub fn scope(&self) -> BTreeSet<Var> {
        self.values.keys().cloned().collect()
    }

    /// Checks value kinds and bounds against the word length.
    pub fn check(&self) -> Result<()> {
        if self.word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let n = self.word.len();
        for (v, val) in &self.values {
            let ok = match val {
                VarValue::Pos(i) => !v.is_second_order() && *i < n,
                VarValue::Set(s) => v.is_second_order() && s.iter().all(|&i| i < n),
            };
            if !ok {
                return Err(Error::Scope(format!("bad value {val} for {v} on a word of length {n}")));
            }
        }
        Ok(())
    }

    /// Parses `x=0, X={1,2}`.
    pub fn parse_assignment(text: &str) -> Result<BTreeMap<Var, VarValue>> {
        let mut out = BTreeMap::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let (name, after) = rest
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("expected `var=value` in `{rest}`")))?;
            let var = Var::new(name.trim().trim_start_matches(',').trim());
            let after = after.trim_start();
            let (value, tail) = if let Some(body) = after.strip_prefix('{') {
                let (inside, tail) = body
                    .split_once('}')
                    .ok_or_else(|| Error::Usage("unterminated `{` in assignment".into()))?;
                let set = inside
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| Error::Usage(format!("bad position `{s}`"))))
                    .collect::<Result<BTreeSet<usize>>>()?;
                (VarValue::Set(set), tail)
            } else {
                let end = after.find(',').unwrap_or(after.len());
                let s = after[..end].trim();
                let i = s.parse::<usize>().map_err(|_| Error::Usage(format!("bad position `{s}`")))?;
                (VarValue::Pos(i), &after[end..])
            };
            out.insert(var, value);
            rest = tail.trim_start().trim_start_matches(',').trim_start();
        }
        Ok(out)
    }
}

/// The extended alphabet `Σ_V`: letter `(a, bits)` has index
/// `a << |V| | bits`, bit `j` being the row of the `j`-th scope variable in
/// name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtAlphabet {
    base: Alphabet,
    scope: Vec<Var>,
    alphabet: Alphabet,
}

impl ExtAlphabet {
    pub fn new<I: IntoIterator<Item = Var>>(base: Alphabet, scope: I) -> Result<Self> {
        let scope: Vec<Var> = scope.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if scope.len() > MAX_SCOPE {
            return Err(Error::Resource(format!(
                "{} variables in scope, at most {MAX_SCOPE} supported",
                scope.len()
            )));
        }
        let k = scope.len();
        let mut names = Vec::with_capacity(base.len() << k);
        for a in 0..base.len() {
            for bits in 0..1usize << k {
                if k == 0 {
                    names.push(base.name(a).to_string());
                } else {
                    let row: String = (0..k).map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }).collect();
                    names.push(format!("{}[{row}]", base.name(a)));
                }
            }
        }
        let alphabet = Alphabet::new(names)?;
        Ok(ExtAlphabet { base, scope, alphabet })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    /// The letters of `Σ_V` as an ordinary alphabet.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, v: &Var) -> Option<usize> {
        self.scope.binary_search(v).ok()
    }

    pub fn letter(&self, sym: usize, bits: usize) -> usize {
        sym << self.scope.len() | bits
    }

    pub fn symbol(&self, letter: usize) -> usize {
        letter >> self.scope.len()
    }

    pub fn bits(&self, letter: usize) -> usize {
        letter & ((1 << self.scope.len()) - 1)
    }

    pub fn row(&self, letter: usize, j: usize) -> bool {
        letter >> j & 1 == 1
    }

    /// Maps a letter of `self` to `sub` by dropping the rows of variables
    /// missing from `sub`.
    ///
    /// # Panics
    /// Panics unless `sub` has the same base and a smaller scope.
    pub fn restrict(&self, sub: &ExtAlphabet) -> impl Fn(usize) -> usize {
        assert!(self.base.same_as(&sub.base), "restrict needs a common base alphabet");
        let map: Vec<usize> = sub
            .scope
            .iter()
            .map(|v| self.position(v).expect("restrict needs a sub-scope"))
            .collect();
        let k = self.scope.len();
        let kk = sub.scope.len();
        move |letter| {
            let sym = letter >> k;
            let mut bits = 0;
            for (j, &src) in map.iter().enumerate() {
                bits |= (letter >> src & 1) << j;
            }
            sym << kk | bits
        }
    }

    /// Whether every first-order row has exactly one 1.
    pub fn is_valid(&self, word: &[usize]) -> bool {
        self.scope.iter().enumerate().filter(|(_, v)| !v.is_second_order()).all(|(j, _)| {
            word.iter().filter(|&&l| self.row(l, j)).count() == 1
        })
    }

    pub fn encode(&self, aw: &AssignedWord) -> Result<Vec<usize>> {
        aw.check()?;
        let mut word: Vec<usize> = aw.word.iter().map(|&a| self.letter(a, 0)).collect();
        for (j, v) in self.scope.iter().enumerate() {
            match aw.values.get(v) {
                Some(VarValue::Pos(i)) => word[*i] |= 1 << j,
                Some(VarValue::Set(s)) => {
                    for &i in s {
                        word[i] |= 1 << j;
                    }
                }
                None => return Err(Error::Scope(format!("no value for {v}"))),
            }
        }
        if aw.values.keys().any(|v| self.position(v).is_none()) {
            return Err(Error::Scope("assignment mentions a variable outside the scope".into()));
        }
        Ok(word)
    }

    /// `None` for invalid encodings.
    pub fn decode(&self, word: &[usize]) -> Option<AssignedWord> {
        if !self.is_valid(word) {
            return None;
        }
        let mut aw = AssignedWord::new(word.iter().map(|&l| self.symbol(l)).collect());
        for (j, v) in self.scope.iter().enumerate() {
            let rows = word.iter().enumerate().filter(|(_, &l)| self.row(l, j)).map(|(i, _)| i);
            let value = if v.is_second_order() {
                VarValue::Set(rows.collect())
            } else {
                VarValue::Pos(rows.into_iter().next()?)
            };
            aw.values.insert(v.clone(), value);
        }
        Some(aw)
    }

    /// Every assignment of the scope on words of length `n`, in encoding
    /// order.
    pub fn assignments(&self, base_word: &[usize]) -> Vec<Vec<usize>> {
        let n = base_word.len();
        let mut out = vec![base_word.iter().map(|&a| self.letter(a, 0)).collect::<Vec<usize>>()];
        for (j, v) in self.scope.iter().enumerate() {
            let mut next = Vec::new();
            for w in &out {
                if v.is_second_order() {
                    for mask in 0..1u64 << n {
                        let mut w2 = w.clone();
                        for (i, l) in w2.iter_mut().enumerate() {
                            if mask >> i & 1 == 1 {
                                *l |= 1 << j;
                            }
                        }
                        next.push(w2);
                    }
                } else {
                    for i in 0..n {
                        let mut w2 = w.clone();
                        w2[i] |= 1 << j;
                        next.push(w2);
                    }
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext(vars: &[&str]) -> ExtAlphabet {
        ExtAlphabet::new(Alphabet::new(["a", "b"]).unwrap(), vars.iter().map(|v| Var::new(*v))).unwrap()
    }

    #[test]
    fn letter_layout() {
        let e = ext(&["y", "X", "x"]);
        assert_eq!(e.scope(), &[Var::new("X"), Var::new("x"), Var::new("y")]);
        assert_eq!(e.len(), 16);
        let l = e.letter(1, 0b101);
        assert_eq!(e.symbol(l), 1);
        assert_eq!(e.alphabet().name(l), "b[101]");
    }

    #[test]
    fn two_ones_in_a_first_order_row_is_invalid() {
        let e = ext(&["x"]);
        assert!(!e.is_valid(&[e.letter(0, 1), e.letter(1, 1)]));
        assert!(!e.is_valid(&[e.letter(0, 0)]));
        assert!(e.is_valid(&[e.letter(0, 1), e.letter(1, 0)]));
    }

    #[test]
    fn set_variables_only_is_always_valid() {
        let e = ext(&["X", "Y"]);
        for w in e.assignments(&[0, 1, 1]) {
            assert!(e.is_valid(&w));
        }
        assert_eq!(e.assignments(&[0, 1, 1]).len(), 64);
    }

    #[test]
    fn restrict_drops_rows() {
        let big = ext(&["X", "x", "y"]);
        let small = ext(&["y"]);
        let h = big.restrict(&small);
        assert_eq!(h(big.letter(1, 0b100)), small.letter(1, 1));
        assert_eq!(h(big.letter(0, 0b011)), small.letter(0, 0));
    }

    #[test]
    fn parse_assignment_text() {
        let m = AssignedWord::parse_assignment("x=0, X={1,2}, Y={}").unwrap();
        assert_eq!(m[&Var::new("x")], VarValue::Pos(0));
        assert_eq!(m[&Var::new("X")], VarValue::Set([1, 2].into()));
        assert_eq!(m[&Var::new("Y")], VarValue::Set(BTreeSet::new()));
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(word in prop::collection::vec(0usize..2, 1..7), seed in any::<u64>()) {
            let e = ext(&["x", "y", "X"]);
            let n = word.len();
            let set: BTreeSet<usize> = (0..n).filter(|i| seed >> i & 1 == 1).collect();
            let aw = AssignedWord::new(word)
                .with(Var::new("x"), VarValue::Pos((seed >> 10) as usize % n))
                .with(Var::new("y"), VarValue::Pos((seed >> 20) as usize % n))
                .with(Var::new("X"), VarValue::Set(set));
            let enc = e.encode(&aw).unwrap();
            prop_assert!(e.is_valid(&enc));
            prop_assert_eq!(e.decode(&enc), Some(aw));
        }

        #[test]
        fn decode_encode_round_trip(word in prop::collection::vec(0usize..16, 1..6)) {
            let e = ext(&["x", "X"]);
            match e.decode(&word) {
                Some(aw) => prop_assert_eq!(e.encode(&aw).unwrap(), word),
                None => prop_assert!(!e.is_valid(&word)),
            }
        }
    }
}
