use crate::error::{Error, Result};
use crate::logic::{Formula, Var, VarSet};

/// Truth values for a subset of the 26 variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: u32,
    defined: u32,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every variable in `domain` is defined; bit `i` of `bits` gives the
    /// value of the `i`-th member of `domain` in alphabetical order.
    pub fn from_row(domain: VarSet, bits: u64) -> Self {
        let mut a = Assignment::new();
        for (i, v) in domain.iter().enumerate() {
            a.set(v, bits >> i & 1 == 1);
        }
        a
    }

    pub fn from_pairs(pairs: &[(char, bool)]) -> Self {
        let mut a = Assignment::new();
        for &(c, value) in pairs {
            a.set(Var::from_char(c).expect("lowercase variable"), value);
        }
        a
    }

    pub fn set(&mut self, v: Var, value: bool) {
        let bit = 1 << v.index();
        self.defined |= bit;
        if value {
            self.values |= bit;
        } else {
            self.values &= !bit;
        }
    }

    pub fn get(&self, v: Var) -> Result<bool> {
        let bit = 1 << v.index();
        if self.defined & bit == 0 {
            return Err(Error::UndefinedVariable(v));
        }
        Ok(self.values & bit != 0)
    }

    pub fn domain(&self) -> VarSet {
        VarSet::from_bits(self.defined)
    }
}

/// Classical truth value of `f` under `w`; implication is material.
pub fn evaluate(f: &Formula, w: &Assignment) -> Result<bool> {
    Ok(match f {
        Formula::Var(v) => w.get(*v)?,
        Formula::Not(c) => !evaluate(c, w)?,
        Formula::And(l, r) => evaluate(l, w)? & evaluate(r, w)?,
        Formula::Or(l, r) => evaluate(l, w)? | evaluate(r, w)?,
        Formula::Implies(l, r) => !evaluate(l, w)? | evaluate(r, w)?,
    })
}
