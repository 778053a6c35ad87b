//! Text syntax for formulas.
//!
//! ```text
//! forall x. (P_a(x) -> (<-1,0> | <1,0>)) & (P_b(x) -> (<0,-1> | <0,1>))
//! ```
//!
//! Operators, loosest first: quantifiers (`exists x.`, `forall X.`, body
//! extends as far right as possible), `->` (right associative), `|`, `&`,
//! `!`. Unicode spellings `∃ ∀ ¬ ∧ ∨ → ≤ ∈` are accepted too.

use super::{Formula, Var};
use crate::error::{Error, Result};
use crate::num::parse_literal;
use crate::structures::WeightDomain;

/// Letters allowed in `P_a(x)` atoms and ASCII aliases for them.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    /// `None` accepts any letter name.
    pub letters: Option<Vec<String>>,
    /// `(alias, letter)` pairs.
    pub aliases: Vec<(String, String)>,
}

impl Signature {
    pub fn new(letters: Vec<String>) -> Self {
        Signature { letters: Some(letters), aliases: Vec::new() }
    }

    pub fn with_alias(mut self, alias: impl Into<String>, letter: impl Into<String>) -> Self {
        self.aliases.push((alias.into(), letter.into()));
        self
    }

    fn resolve(&self, name: &str) -> Option<String> {
        let name = self
            .aliases
            .iter()
            .find(|(a, _)| a == name)
            .map_or(name, |(_, l)| l.as_str());
        match &self.letters {
            Some(ls) if !ls.iter().any(|l| l == name) => None,
            _ => Some(name.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Letter(String),
    Literal(String),
    Exists,
    Forall,
    In,
    Not,
    And,
    Or,
    Arrow,
    Leq,
    LParen,
    RParen,
    Dot,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn perr<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, column, message: message.into() })
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for k in 0..n {
            if chars[*i + k] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i += n;
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let (tok, len) = if rest == "<=" {
            (Tok::Leq, 2)
        } else if rest == "->" {
            (Tok::Arrow, 2)
        } else if rest == "P_" {
            let mut j = i + 2;
            while j < chars.len() && chars[j] != '(' && !chars[j].is_whitespace() {
                j += 1;
            }
            if j == i + 2 || j >= chars.len() || chars[j] != '(' {
                return perr(l0, c0, "expected `P_<letter>(`");
            }
            (Tok::Letter(chars[i + 2..j].iter().collect()), j - i)
        } else {
            match c {
                '<' => {
                    let close = chars[i..].iter().position(|&d| d == '>' || d == '\n');
                    match close {
                        Some(k) if chars[i + k] == '>' => {
                            (Tok::Literal(chars[i..=i + k].iter().collect()), k + 1)
                        }
                        _ => return perr(l0, c0, "unterminated weight literal"),
                    }
                }
                '≤' => (Tok::Leq, 1),
                '→' => (Tok::Arrow, 1),
                '!' | '¬' => (Tok::Not, 1),
                '&' | '∧' => (Tok::And, 1),
                '|' | '∨' => (Tok::Or, 1),
                '∃' => (Tok::Exists, 1),
                '∀' => (Tok::Forall, 1),
                '∈' => (Tok::In, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '.' => (Tok::Dot, 1),
                c if c.is_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = match word.as_str() {
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        "in" => Tok::In,
                        _ => Tok::Ident(word),
                    };
                    (tok, j - i)
                }
                other => return perr(l0, c0, format!("unexpected character `{other}`")),
            }
        };
        advance(&mut i, &mut line, &mut col, len);
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser<'a, D: WeightDomain> {
    toks: Vec<Spanned>,
    pos: usize,
    domain: &'a D,
    sig: &'a Signature,
}

type F<D> = Formula<<D as WeightDomain>::Elem>;

impl<'a, D: WeightDomain> Parser<'a, D> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned> {
        let t = self.bump();
        if t.tok == tok {
            Ok(t)
        } else {
            perr(t.line, t.column, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn boolean(&self, f: F<D>, at: &Spanned, role: &str) -> Result<F<D>> {
        f.to_boolean().ok_or_else(|| Error::Parse {
            line: at.line,
            column: at.column,
            message: format!("{role} must be a boolean formula"),
        })
    }

    fn formula(&mut self) -> Result<F<D>> {
        self.implication()
    }

    fn quantified(&mut self) -> Result<F<D>> {
        let q = self.bump();
        let v = self.variable()?;
        self.expect(Tok::Dot, "`.` after the quantified variable")?;
        let body_at = self.peek().clone();
        let body = self.formula()?;
        if q.tok == Tok::Exists {
            Ok(Formula::exists(v, body))
        } else if v.is_second_order() {
            let body = self.boolean(body, &body_at, "the body of a set quantifier `forall X.`")?;
            Ok(Formula::forall(v, body))
        } else {
            Ok(Formula::forall(v, body))
        }
    }

    fn implication(&mut self) -> Result<F<D>> {
        let at = self.peek().clone();
        let lhs = self.disjunction()?;
        if self.peek().tok != Tok::Arrow {
            return Ok(lhs);
        }
        self.bump();
        let lhs = self.boolean(lhs, &at, "the left side of `->`")?;
        let rhs = self.implication()?;
        Ok(Formula::implies(lhs, rhs))
    }

    fn disjunction(&mut self) -> Result<F<D>> {
        let mut f = self.conjunction()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<F<D>> {
        let mut f = self.unary()?;
        while self.peek().tok == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<F<D>> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Not => {
                self.bump();
                let at = self.peek().clone();
                let inner = self.unary()?;
                let inner = self.boolean(inner, &at, "the operand of `!`")?;
                Ok(Formula::not(inner))
            }
            Tok::Exists | Tok::Forall => self.quantified(),
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<F<D>> {
        let t = self.bump();
        match t.tok {
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Literal(text) => {
                let comps = parse_literal(&text).ok_or_else(|| Error::Parse {
                    line: t.line,
                    column: t.column,
                    message: format!("malformed weight literal `{text}`"),
                })?;
                let m = self.domain.parse_elem(&comps).map_err(|e| Error::Parse {
                    line: t.line,
                    column: t.column,
                    message: e.to_string(),
                })?;
                Ok(Formula::constant(m))
            }
            Tok::Letter(name) => {
                let letter = self.sig.resolve(&name).ok_or(Error::UnknownLetter(name))?;
                self.expect(Tok::LParen, "`(`")?;
                let x = self.variable()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::label(letter, x))
            }
            Tok::Ident(name) => {
                let x = Var(name);
                let op = self.bump();
                let y = self.variable()?;
                match op.tok {
                    Tok::Leq => Ok(Formula::leq(x, y)),
                    Tok::In => Ok(Formula::member(x, y)),
                    other => perr(op.line, op.column, format!("expected `<=` or `in`, found {}", describe(&other))),
                }
            }
            other => perr(t.line, t.column, format!("expected a formula, found {}", describe(&other))),
        }
    }

    fn variable(&mut self) -> Result<Var> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(name) => Ok(Var(name)),
            other => perr(t.line, t.column, format!("expected a variable, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Letter(s) => format!("`P_{s}`"),
        Tok::Literal(s) => format!("`{s}`"),
        Tok::Exists => "`exists`".into(),
        Tok::Forall => "`forall`".into(),
        Tok::In => "`in`".into(),
        Tok::Not => "`!`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Leq => "`<=`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses with letters and aliases restricted by `sig`.
pub fn parse_with<D: WeightDomain>(text: &str, domain: &D, sig: &Signature) -> Result<Formula<D::Elem>> {
    let mut p = Parser { toks: lex(text)?, pos: 0, domain, sig };
    let f = p.formula()?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return perr(t.line, t.column, format!("unexpected {} after the formula", describe(&t.tok)));
    }
    f.check_well_formed()?;
    Ok(f)
}

/// Parses accepting any letter name.
pub fn parse<D: WeightDomain>(text: &str, domain: &D) -> Result<Formula<D::Elem>> {
    parse_with(text, domain, &Signature::default())
}
