use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::logic::Formula;
use crate::semantics::cnf::to_cnf;
use crate::semantics::dpll::solve;
use crate::semantics::truth::{slot_layout, Program};

pub fn satisfiable(f: &Formula) -> bool {
    solve(&to_cnf(f)).is_sat()
}

/// `A ⊨ B` iff `A ∧ ¬B` is unsatisfiable.
pub fn entails(premise: &Formula, conclusion: &Formula) -> bool {
    let query = Formula::and(premise.clone(), Formula::not(conclusion.clone()));
    !satisfiable(&query)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Contradiction,
    Contingent,
    Tautology,
}

pub fn classify(f: &Formula) -> Classification {
    if !satisfiable(f) {
        Classification::Contradiction
    } else if !satisfiable(&Formula::not(f.clone())) {
        Classification::Tautology
    } else {
        Classification::Contingent
    }
}

/// Draws `samples` uniform assignments over `vars(A) ∪ vars(B)` and reports
/// whether any of them makes `A` true and `B` false.
pub fn mc_countermodel<R: Rng + ?Sized>(
    premise: &Formula,
    conclusion: &Formula,
    samples: usize,
    rng: &mut R,
) -> bool {
    assert!(samples >= 1, "at least one sample is required");
    let domain = premise.vars().union(conclusion.vars());
    let slots = slot_layout(domain);
    let pa = Program::compile(premise, &slots);
    let pb = Program::compile(conclusion, &slots);
    let mut inputs = vec![0u64; domain.len()];
    let mut stack = Vec::new();
    let mut remaining = samples;
    while remaining > 0 {
        // each bit column is one independent uniform assignment
        for word in inputs.iter_mut() {
            *word = rng.random();
        }
        let mask = if remaining >= 64 {
            u64::MAX
        } else {
            (1u64 << remaining) - 1
        };
        let a = pa.eval(&inputs, &mut stack);
        let b = pb.eval(&inputs, &mut stack);
        if a & !b & mask != 0 {
            return true;
        }
        remaining = remaining.saturating_sub(64);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn entailment_examples() {
        assert!(entails(&f("p&q"), &f("q")));
        assert!(!entails(&f("q|r"), &f("r")));
        assert!(entails(&f("p|p"), &f("(r>c)>((r>v)|p)")));
        assert!(!entails(&f("p|p"), &f("r&(r>r)")));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&f("p&~p")), Classification::Contradiction);
        assert_eq!(classify(&f("p|~p")), Classification::Tautology);
        assert_eq!(classify(&f("p")), Classification::Contingent);
    }

    #[test]
    fn monte_carlo_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(mc_countermodel(&f("p"), &f("~p"), 64, &mut rng));
        for _ in 0..50 {
            assert!(!mc_countermodel(&f("p&q"), &f("q"), 256, &mut rng));
            assert!(!mc_countermodel(&f("p"), &f("p|q"), 7, &mut rng));
        }
    }

    #[test]
    fn monte_carlo_partial_word_respects_count() {
        // countermodel rows: a=1,b=0 (one of four); a single sample finds it
        // with probability 1/4, so many one-sample trials must show both outcomes
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let hits = (0..4000)
            .filter(|_| mc_countermodel(&f("a"), &f("b"), 1, &mut rng))
            .count();
        assert!((850..1150).contains(&hits), "hits = {hits}");
    }
}
