use super::{expect_arity, OmegaStructure, WeightDomain};
use crate::error::{Error, Result};
use crate::num::{format_literal, is_integer, ExtRational};
use num_traits::ToPrimitive;
use std::collections::HashSet;
use std::fmt;

/// An integer vector, printed as `<a,b,...>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_literal(&self.0))
    }
}

/// Clamped componentwise sum `max(min(u1 + u2, emax), -emax)`.
pub fn energy_prod(u1: &IntVector, u2: &IntVector, emax: &[i64]) -> Result<IntVector> {
    for u in [u1, u2] {
        check_range(u, emax)?;
    }
    Ok(clamp_sum(u1, u2, emax))
}

fn clamp_sum(u1: &IntVector, u2: &IntVector, emax: &[i64]) -> IntVector {
    IntVector(
        u1.0.iter()
            .zip(&u2.0)
            .zip(emax)
            .map(|((a, b), e)| (a + b).min(*e).max(-e))
            .collect(),
    )
}

fn check_range(u: &IntVector, emax: &[i64]) -> Result<()> {
    if u.0.len() != emax.len() || u.0.iter().zip(emax).any(|(x, e)| x.abs() > *e) {
        return Err(Error::Structure(format!(
            "{u} outside the energy range {}",
            format_literal(emax)
        )));
    }
    Ok(())
}

/// Bounded energy levels; `Val^ω` is the componentwise infimum of the running
/// clamped sums starting from zero, and `Φ` asks for a nonnegative element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyStructure {
    pub emax: Vec<i64>,
}

impl EnergyStructure {
    pub fn new(emax: Vec<i64>) -> Result<Self> {
        if emax.is_empty() || emax.iter().any(|&e| e <= 0) {
            return Err(Error::Structure("energy bounds must be positive".into()));
        }
        Ok(EnergyStructure { emax })
    }

    pub fn dim(&self) -> usize {
        self.emax.len()
    }

    /// |M| = Π (2·emax_i + 1).
    pub fn domain_size(&self) -> u128 {
        self.emax.iter().map(|&e| (2 * e + 1) as u128).product()
    }

    /// Every element of the domain, in canonical order.
    pub fn domain(&self) -> Vec<IntVector> {
        let mut out = vec![IntVector(Vec::new())];
        for &e in &self.emax {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (-e..=e).map(move |x| {
                        let mut w = v.0.clone();
                        w.push(x);
                        IntVector(w)
                    })
                })
                .collect();
        }
        out
    }

    pub fn step(&self, v: &IntVector, m: &IntVector) -> IntVector {
        clamp_sum(v, m, &self.emax)
    }

    pub fn check(&self, m: &IntVector) -> Result<()> {
        check_range(m, &self.emax)
    }
}

impl WeightDomain for EnergyStructure {
    type Elem = IntVector;

    fn name(&self) -> String {
        let parts: Vec<String> = self.emax.iter().map(|x| x.to_string()).collect();
        format!("energy({})", parts.join(","))
    }

    fn parse_elem(&self, components: &[ExtRational]) -> Result<IntVector> {
        expect_arity("energy", components, self.dim())?;
        let mut out = Vec::with_capacity(components.len());
        for c in components {
            let q = c
                .finite()
                .filter(|q| is_integer(q))
                .ok_or_else(|| Error::Structure(format!("energy component {c} is not an integer")))?;
            out.push(
                q.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Structure(format!("energy component {c} too large")))?,
            );
        }
        let v = IntVector(out);
        self.check(&v)?;
        Ok(v)
    }
}

impl OmegaStructure for EnergyStructure {
    type Value = bool;

    fn unit(&self) -> IntVector {
        IntVector(vec![0; self.dim()])
    }

    fn prod(&self, a: &IntVector, b: &IntVector) -> IntVector {
        clamp_sum(a, b, &self.emax)
    }

    fn val_omega(&self, prefix: &[IntVector], period: &[IntVector]) -> Result<IntVector> {
        if period.is_empty() {
            return Err(Error::Structure("period must be nonempty".into()));
        }
        for m in prefix.iter().chain(period) {
            self.check(m)?;
        }
        let mut v = self.unit();
        let mut inf = v.clone();
        let lower = |v: &IntVector, inf: &mut IntVector| {
            for (a, b) in inf.0.iter_mut().zip(&v.0) {
                *a = (*a).min(*b);
            }
        };
        for m in prefix {
            v = self.step(&v, m);
            lower(&v, &mut inf);
        }
        let mut seen = HashSet::new();
        while seen.insert(v.clone()) {
            for m in period {
                v = self.step(&v, m);
                lower(&v, &mut inf);
            }
        }
        Ok(inf)
    }

    fn phi_support(&self, support: &[IntVector]) -> bool {
        support.iter().any(IntVector::is_nonnegative)
    }
}
