use std::fmt;

use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::semantics::{classify, entails, Classification};

/// A labelled entailment pair `(A, B, A ⊨ B)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premise: Formula,
    pub conclusion: Formula,
    pub label: bool,
}

impl Sequent {
    /// Labels the pair by deciding entailment.
    pub fn decide(premise: Formula, conclusion: Formula) -> Sequent {
        let label = entails(&premise, &conclusion);
        Sequent {
            premise,
            conclusion,
            label,
        }
    }

    /// Builds a sequent after checking `label` against the decider.
    pub fn new(premise: Formula, conclusion: Formula, label: bool) -> Result<Sequent> {
        let s = Sequent::decide(premise, conclusion);
        if s.label != label {
            return Err(Error::LabelMismatch {
                stored: label,
                computed: s.label,
                sequent: s.to_string(),
            });
        }
        Ok(s)
    }

    /// Builds a sequent without consulting the decider.
    pub fn trusted(premise: Formula, conclusion: Formula, label: bool) -> Sequent {
        Sequent {
            premise,
            conclusion,
            label,
        }
    }

    pub fn verify(&self) -> Result<()> {
        let computed = entails(&self.premise, &self.conclusion);
        if computed != self.label {
            return Err(Error::LabelMismatch {
                stored: self.label,
                computed,
                sequent: self.to_string(),
            });
        }
        Ok(())
    }
}

/// TSV form: `premise \t conclusion \t label`.
impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}",
            self.premise,
            self.conclusion,
            u8::from(self.label)
        )
    }
}

/// Formulas with `A₁ ⊨ B₁`, `A₂ ⊨ B₂`, `A₁ ⊭ B₂`, `A₂ ⊭ B₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadTuple {
    pub a1: Formula,
    pub b1: Formula,
    pub a2: Formula,
    pub b2: Formula,
}

impl QuadTuple {
    /// Checks every defining condition, including the consequences that both
    /// premises are satisfiable and neither conclusion is a tautology.
    pub fn is_valid(&self) -> bool {
        entails(&self.a1, &self.b1)
            && entails(&self.a2, &self.b2)
            && !entails(&self.a1, &self.b2)
            && !entails(&self.a2, &self.b1)
            && classify(&self.a1) != Classification::Contradiction
            && classify(&self.a2) != Classification::Contradiction
            && classify(&self.b1) != Classification::Tautology
            && classify(&self.b2) != Classification::Tautology
    }

    /// The four induced sequents: two positives then two negatives.
    pub fn to_sequents(&self) -> [Sequent; 4] {
        [
            Sequent::trusted(self.a1.clone(), self.b1.clone(), true),
            Sequent::trusted(self.a2.clone(), self.b2.clone(), true),
            Sequent::trusted(self.a1.clone(), self.b2.clone(), false),
            Sequent::trusted(self.a2.clone(), self.b1.clone(), false),
        ]
    }
}

pub fn quad_to_sequents(q: &QuadTuple) -> [Sequent; 4] {
    q.to_sequents()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    // a2 needs the brackets around the implication: without them & binds
    // tighter and a2 no longer entails r.
    fn long_quad() -> QuadTuple {
        QuadTuple {
            a1: f("p|p"),
            b1: f("(r>c)>((r>v)|p)"),
            a2: f("(((g|p)|s)>(g>g))&r"),
            b2: f("r&(r>r)"),
        }
    }

    #[test]
    fn unbracketed_long_premise_fails() {
        assert!(!entails(&f("((g|p)|s)>(g>g)&r"), &f("r&(r>r)")));
    }

    #[test]
    fn long_quad_is_valid() {
        let q = long_quad();
        assert!(q.is_valid());
        let seqs = quad_to_sequents(&q);
        assert_eq!(seqs.clone().map(|s| s.label), [true, true, false, false]);
        for s in &seqs {
            s.verify().unwrap();
        }
        assert_eq!(seqs[2].premise, q.a1);
        assert_eq!(seqs[2].conclusion, q.b2);
        assert_eq!(seqs[3].premise, q.a2);
        assert_eq!(seqs[3].conclusion, q.b1);
    }

    #[test]
    fn each_formula_once_per_class() {
        let seqs = quad_to_sequents(&long_quad());
        let (pos, neg): (Vec<_>, Vec<_>) = seqs.iter().partition(|s| s.label);
        assert_eq!((pos.len(), neg.len()), (2, 2));
        let mut pos_prem: Vec<_> = pos.iter().map(|s| s.premise.print()).collect();
        let mut neg_prem: Vec<_> = neg.iter().map(|s| s.premise.print()).collect();
        pos_prem.sort();
        neg_prem.sort();
        assert_eq!(pos_prem, neg_prem);
        let mut pos_conc: Vec<_> = pos.iter().map(|s| s.conclusion.print()).collect();
        let mut neg_conc: Vec<_> = neg.iter().map(|s| s.conclusion.print()).collect();
        pos_conc.sort();
        neg_conc.sort();
        assert_eq!(pos_conc, neg_conc);
    }

    #[test]
    fn label_checked_on_construction() {
        assert!(Sequent::new(f("p&q"), f("q"), true).is_ok());
        assert!(matches!(
            Sequent::new(f("q|r"), f("r"), true),
            Err(Error::LabelMismatch {
                computed: false,
                ..
            })
        ));
        assert_eq!(Sequent::decide(f("p"), f("p|q")).to_string(), "p\t(p|q)\t1");
    }
}
