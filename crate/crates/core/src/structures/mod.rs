//! Valuation structures: weight domains with a sequence valuation `Val`, an
//! evaluator `Φ` on multisets, and (for pv-structures) a product with unit.
//!
//! Five instances ship with the crate:
//!
//! | name | domain | `Φ` |
//! |------|--------|-----|
//! | [`RatioStructure`] | reward/cost pairs | maximal ratio |
//! | [`TwoCostStructure`] | primary/secondary costs | cheapest primary under a bound |
//! | [`DisplacementStructure`] | vectors in ℚⁿ | mean Euclidean norm |
//! | [`OmegaRatioStructure`] | extended reward, cost | supremum ratio on infinite runs |
//! | [`EnergyStructure`] | bounded integer vectors | nonnegative energy level |

mod displacement;
mod energy;
mod omega_ratio;
mod ratio;
mod twocost;

pub use displacement::DisplacementStructure;
pub use energy::{energy_prod, EnergyStructure, IntVector};
pub use omega_ratio::{OmegaRatioStructure, RatioPair};
pub use ratio::RatioStructure;
pub use twocost::TwoCostStructure;

use crate::error::{Error, Result};
use crate::multiset::FiniteMultiset;
use crate::num::{format_literal, format_real, parse_rational, ExtRational, Rational};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

/// A weight domain together with its literal syntax.
pub trait WeightDomain {
    type Elem: Clone + Ord + Hash + fmt::Debug + fmt::Display;

    fn name(&self) -> String;

    /// Types the components of a literal `<c1, ..., ck>`.
    fn parse_elem(&self, components: &[ExtRational]) -> Result<Self::Elem>;
}

/// `(M, Val, Φ)` on finite sequences.
pub trait ValuationStructure: WeightDomain {
    type Value: Clone + PartialEq + fmt::Debug + fmt::Display;

    /// Val on a nonempty sequence.
    fn val(&self, seq: &[Self::Elem]) -> Self::Elem;

    fn phi(&self, r: &FiniteMultiset<Self::Elem>) -> Self::Value;

    /// True when `Val(m1..mn) = Val(Val(m1..m(n-1)), mn)` for every sequence,
    /// which allows behaviors to be accumulated left to right.
    fn is_incremental(&self) -> bool {
        false
    }
}

/// A valuation structure with a product `⋄` and a unit.
pub trait PvStructure: ValuationStructure {
    fn unit(&self) -> Self::Elem;
    fn prod(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// A weight domain for infinite sequences, presented as `prefix · period^ω`.
pub trait OmegaStructure: WeightDomain {
    type Value: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn unit(&self) -> Self::Elem;
    fn prod(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn val_omega(&self, prefix: &[Self::Elem], period: &[Self::Elem]) -> Result<Self::Elem>;

    /// `Φ` on a multiset with the given support (both shipped evaluators
    /// ignore multiplicities).
    fn phi_support(&self, support: &[Self::Elem]) -> Self::Value;
}

/// A vector of exact rationals, printed as `<a,b,...>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zeros(n: usize) -> Self {
        Weight(vec![Rational::from_integer(0.into()); n])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Weight(xs.iter().map(|&x| crate::num::int(x)).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sum(seq: &[Weight], arity: usize) -> Weight {
        let mut acc = Weight::zeros(arity);
        for w in seq {
            for (a, b) in acc.0.iter_mut().zip(&w.0) {
                *a += b;
            }
        }
        acc
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_literal(&self.0))
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let comps = crate::num::parse_literal(s)
            .ok_or_else(|| Error::Structure(format!("malformed weight literal `{s}`")))?;
        finite_components(&comps).map(Weight)
    }
}

pub(crate) fn finite_components(components: &[ExtRational]) -> Result<Vec<Rational>> {
    components
        .iter()
        .map(|c| {
            c.finite()
                .cloned()
                .ok_or_else(|| Error::Structure(format!("component {c} must be finite")))
        })
        .collect()
}

pub(crate) fn expect_arity(name: &str, components: &[ExtRational], n: usize) -> Result<()> {
    if components.len() != n {
        Err(Error::Structure(format!(
            "{name} weights have {n} components, literal has {}",
            components.len()
        )))
    } else {
        Ok(())
    }
}

/// A real value printed with 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

/// Which axiom a sample violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Law {
    SingletonValuation,
    UnitPadding { padding: usize },
    LeftUnit,
    RightUnit,
    OmegaUnitTail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub sample: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {}: {}", self.law, self.sample, self.detail)
    }
}

/// Checks `Val(m) = m`, `Val(m,1,...,1) = m` for paddings up to `max_pad`,
/// and `m ⋄ 1 = 1 ⋄ m = m` on every sample.
pub fn validate_structure<S: PvStructure>(
    s: &S,
    samples: &[S::Elem],
    max_pad: usize,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let unit = s.unit();
    for m in samples {
        let single = s.val(std::slice::from_ref(m));
        if &single != m {
            out.push(Violation {
                law: Law::SingletonValuation,
                sample: m.to_string(),
                detail: format!("Val(m) = {single}"),
            });
        }
        for padding in 1..=max_pad {
            let mut seq = vec![m.clone()];
            seq.extend(std::iter::repeat_n(unit.clone(), padding));
            let v = s.val(&seq);
            if &v != m {
                out.push(Violation {
                    law: Law::UnitPadding { padding },
                    sample: m.to_string(),
                    detail: format!("Val(m,1,...) = {v}"),
                });
            }
        }
        let r = s.prod(m, &unit);
        if &r != m {
            out.push(Violation {
                law: Law::RightUnit,
                sample: m.to_string(),
                detail: format!("m * 1 = {r}"),
            });
        }
        let l = s.prod(&unit, m);
        if &l != m {
            out.push(Violation {
                law: Law::LeftUnit,
                sample: m.to_string(),
                detail: format!("1 * m = {l}"),
            });
        }
    }
    out
}

/// Checks `Val^ω(m 1^ω) = m` and the unit laws of `⋄` on every sample.
pub fn validate_omega_structure<S: OmegaStructure>(s: &S, samples: &[S::Elem]) -> Vec<Violation> {
    let mut out = Vec::new();
    let unit = s.unit();
    for m in samples {
        match s.val_omega(std::slice::from_ref(m), std::slice::from_ref(&unit)) {
            Ok(v) if &v == m => {}
            Ok(v) => out.push(Violation {
                law: Law::OmegaUnitTail,
                sample: m.to_string(),
                detail: format!("Val(m 1^w) = {v}"),
            }),
            Err(e) => out.push(Violation {
                law: Law::OmegaUnitTail,
                sample: m.to_string(),
                detail: e.to_string(),
            }),
        }
        if &s.prod(m, &unit) != m {
            out.push(Violation {
                law: Law::RightUnit,
                sample: m.to_string(),
                detail: format!("m * 1 = {}", s.prod(m, &unit)),
            });
        }
        if &s.prod(&unit, m) != m {
            out.push(Violation {
                law: Law::LeftUnit,
                sample: m.to_string(),
                detail: format!("1 * m = {}", s.prod(&unit, m)),
            });
        }
    }
    out
}

/// A structure selected by name, as written on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureSpec {
    Ratio,
    TwoCost(Rational),
    Disp(usize),
    OmegaRatio,
    Energy(Vec<i64>),
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureSpec::Ratio => write!(f, "ratio"),
            StructureSpec::TwoCost(p) => write!(f, "twocost({p})"),
            StructureSpec::Disp(n) => write!(f, "disp({n})"),
            StructureSpec::OmegaRatio => write!(f, "omega-ratio"),
            StructureSpec::Energy(e) => {
                let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                write!(f, "energy({})", parts.join(","))
            }
        }
    }
}

impl FromStr for StructureSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match t.split_once('(') {
            Some((n, rest)) => {
                let args = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Usage(format!("unbalanced parentheses in `{text}`")))?;
                (n.to_string(), Some(args.to_string()))
            }
            None => (t.clone(), None),
        };
        let bad = || Error::Usage(format!("bad structure `{text}`"));
        match (name.as_str(), args) {
            ("ratio", None) => Ok(StructureSpec::Ratio),
            ("omega-ratio", None) => Ok(StructureSpec::OmegaRatio),
            ("twocost", Some(a)) => parse_rational(&a).map(StructureSpec::TwoCost).ok_or_else(bad),
            ("disp", Some(a)) => match a.parse::<usize>() {
                Ok(n) if n > 0 => Ok(StructureSpec::Disp(n)),
                _ => Err(bad()),
            },
            ("energy", Some(a)) => {
                let e: Vec<i64> = a
                    .split(',')
                    .map(|x| x.parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                if e.is_empty() || e.iter().any(|&x| x <= 0) {
                    return Err(bad());
                }
                Ok(StructureSpec::Energy(e))
            }
            _ => Err(bad()),
        }
    }
}
