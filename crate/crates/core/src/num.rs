//! Exact rationals, extended rationals, and weight-literal syntax.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A rational number extended with both infinities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    /// Sum with `+inf + -inf = -inf`.
    pub fn add(&self, other: &ExtRational) -> ExtRational {
        use ExtRational::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::NegInf => f64::NEG_INFINITY,
            ExtRational::PosInf => f64::INFINITY,
            ExtRational::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(q: Rational) -> Self {
        ExtRational::Finite(q)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => write!(f, "-inf"),
            ExtRational::PosInf => write!(f, "inf"),
            ExtRational::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// Parses `p`, `p/q`, a decimal such as `-0.25`, or `inf` / `-inf`.
pub fn parse_ext_rational(text: &str) -> Option<ExtRational> {
    let t = text.trim();
    match t {
        "inf" | "+inf" | "∞" | "+∞" => return Some(ExtRational::PosInf),
        "-inf" | "-∞" | "−∞" => return Some(ExtRational::NegInf),
        _ => {}
    }
    parse_rational(t).map(ExtRational::Finite)
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim().replace('−', "-");
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let mantissa: BigInt = format!("{digits}{frac}").parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let q = Rational::new(mantissa, scale);
        return Some(if negative { -q } else { q });
    }
    let n: BigInt = t.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Splits `<a, b, ...>` into its components.
pub fn parse_literal(text: &str) -> Option<Vec<ExtRational>> {
    let t = text.trim();
    let inner = t.strip_prefix('<')?.strip_suffix('>')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(parse_ext_rational).collect()
}

pub fn format_literal<'a, I, T>(components: I) -> String
where
    I: IntoIterator<Item = &'a T>,
    T: fmt::Display + 'a,
{
    let parts: Vec<String> = components.into_iter().map(|c| c.to_string()).collect();
    format!("<{}>", parts.join(","))
}

/// Decimal rendering with 12 significant digits and trailing zeros removed.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// `a / b` with the conventions `x/0 = +inf`.
pub fn ratio_value(x: &Rational, y: &Rational) -> ExtRational {
    if y.is_zero() {
        ExtRational::PosInf
    } else {
        ExtRational::Finite(x / y)
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn cmp_zero(q: &Rational) -> Ordering {
    if q.is_negative() {
        Ordering::Less
    } else if q.is_zero() {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}
