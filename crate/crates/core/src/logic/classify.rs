use super::{Formula, Kind};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Boolean,
    AlmostBoolean,
    Weighted,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Boolean => "boolean",
            Class::AlmostBoolean => "almost-boolean",
            Class::Weighted => "weighted",
        })
    }
}

/// A node in preorder together with its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeTag {
    pub depth: usize,
    pub class: Class,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: Class,
    pub tags: Vec<NodeTag>,
    /// Every `∀x ψ` has an almost boolean `ψ`.
    pub forall_restricted: bool,
    /// Every `φ1 ∧ φ2` has both sides almost boolean or one side boolean.
    pub and_restricted: bool,
    /// Human-readable reasons for failed flags.
    pub violations: Vec<String>,
}

impl Classification {
    pub fn is_restricted(&self) -> bool {
        self.forall_restricted && self.and_restricted
    }
}

fn class_of<M>(f: &Formula<M>) -> Class {
    if f.is_boolean() {
        Class::Boolean
    } else if f.is_almost_boolean() {
        Class::AlmostBoolean
    } else {
        Class::Weighted
    }
}

pub fn classify<M: fmt::Display>(f: &Formula<M>) -> Classification {
    let mut c = Classification {
        class: class_of(f),
        tags: Vec::new(),
        forall_restricted: true,
        and_restricted: true,
        violations: Vec::new(),
    };
    walk(f, 0, &mut c);
    c
}

fn walk<M: fmt::Display>(f: &Formula<M>, depth: usize, c: &mut Classification) {
    c.tags.push(NodeTag { depth, class: class_of(f), text: f.to_string() });
    match f.kind() {
        Kind::Forall(v, body) if !v.is_second_order() && !body.is_almost_boolean() => {
            c.forall_restricted = false;
            c.violations.push(format!("body of `forall {v}` is not almost boolean: {body}"));
        }
        Kind::And(a, b) => {
            let ok = (a.is_almost_boolean() && b.is_almost_boolean()) || a.is_boolean() || b.is_boolean();
            if !ok {
                c.and_restricted = false;
                c.violations.push(format!("conjunction of two weighted formulas: {f}"));
            }
        }
        _ => {}
    }
    for ch in f.children() {
        walk(ch, depth + 1, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::structures::{DisplacementStructure, RatioStructure};

    #[test]
    fn displacement_sentence_is_restricted() {
        let f = parse(
            "forall x. (P_l(x) -> (<-1,0> | <1,0>)) & (P_u(x) -> (<0,-1> | <0,1>))",
            &DisplacementStructure::new(2),
        )
        .unwrap();
        let c = classify(&f);
        assert!(c.is_restricted());
        assert_eq!(c.class, Class::Weighted);
        assert_eq!(c.tags[1].class, Class::AlmostBoolean);
    }

    #[test]
    fn existential_constant_under_forall() {
        let f = parse("forall x. exists y. P_a(y) & <1,1>", &RatioStructure).unwrap();
        let c = classify(&f);
        assert!(!c.forall_restricted);
        assert!(c.and_restricted);
        assert!(!c.is_restricted());
    }

    #[test]
    fn constants_conjoined() {
        let f = parse("<1,1> & <2,1>", &RatioStructure).unwrap();
        let c = classify(&f);
        assert_eq!(c.class, Class::AlmostBoolean);
        assert!(c.is_restricted());
    }

    #[test]
    fn weighted_conjunction_rejected() {
        let f = parse("(exists x. <1,1>) & (exists y. <1,1>)", &RatioStructure).unwrap();
        assert!(!classify(&f).and_restricted);
        let g = parse("(exists x. <1,1>) & P_a(z)", &RatioStructure).unwrap();
        assert!(classify(&g).and_restricted);
    }
}
