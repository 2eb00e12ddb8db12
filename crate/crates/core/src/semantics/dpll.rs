//! DPLL with unit propagation, pure-literal elimination and most-frequent
//! variable branching.

use crate::semantics::assignment::{evaluate, Assignment};
use crate::semantics::cnf::{ClauseSet, Lit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
    assignment: Assignment,
}

impl Model {
    /// Value of a solver variable (1-based).
    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize]
    }

    /// The model restricted to the original propositional variables.
    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Model),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

struct Dpll<'a> {
    clauses: &'a [Vec<Lit>],
    values: Vec<i8>,
    trail: Vec<u32>,
    pos_count: Vec<u32>,
    neg_count: Vec<u32>,
}

impl<'a> Dpll<'a> {
    fn lit_value(&self, lit: Lit) -> i8 {
        let v = self.values[lit.unsigned_abs() as usize];
        if lit > 0 {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, lit: Lit) {
        let var = lit.unsigned_abs();
        self.values[var as usize] = if lit > 0 { 1 } else { -1 };
        self.trail.push(var);
    }

    fn backtrack(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.values[var as usize] = 0;
        }
    }

    /// Runs unit propagation and pure-literal elimination to a fixpoint.
    /// Returns false on conflict. Leaves occurrence counts of unassigned
    /// literals in unsatisfied clauses in `pos_count`/`neg_count`.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.clauses.len() {
                let mut unassigned = 0;
                let mut last = 0;
                let mut satisfied = false;
                for &lit in &self.clauses[i] {
                    match self.lit_value(lit) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            unassigned += 1;
                            last = lit;
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match unassigned {
                    0 => return false,
                    1 => {
                        self.assign(last);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if changed {
                continue;
            }

            self.pos_count.fill(0);
            self.neg_count.fill(0);
            for clause in self.clauses {
                if clause.iter().any(|&l| self.lit_value(l) == 1) {
                    continue;
                }
                for &lit in clause {
                    if self.lit_value(lit) == 0 {
                        let var = lit.unsigned_abs() as usize;
                        if lit > 0 {
                            self.pos_count[var] += 1;
                        } else {
                            self.neg_count[var] += 1;
                        }
                    }
                }
            }
            for var in 1..self.values.len() {
                let (p, n) = (self.pos_count[var], self.neg_count[var]);
                if p > 0 && n == 0 {
                    self.assign(var as Lit);
                    changed = true;
                } else if n > 0 && p == 0 {
                    self.assign(-(var as Lit));
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn branch_literal(&self) -> Option<Lit> {
        let mut best: Option<(u32, Lit)> = None;
        for var in 1..self.values.len() {
            let (p, n) = (self.pos_count[var], self.neg_count[var]);
            let total = p + n;
            if total == 0 {
                continue;
            }
            if best.is_none_or(|(score, _)| total > score) {
                let lit = if p >= n { var as Lit } else { -(var as Lit) };
                best = Some((total, lit));
            }
        }
        best.map(|(_, lit)| lit)
    }

    fn search(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let Some(lit) = self.branch_literal() else {
            return true;
        };
        let mark = self.trail.len();
        for choice in [lit, -lit] {
            self.assign(choice);
            if self.search() {
                return true;
            }
            self.backtrack(mark);
        }
        false
    }
}

/// Decides satisfiability of `cs`. Returned models are checked against every
/// clause and, when present, the source formula.
pub fn solve(cs: &ClauseSet) -> SatResult {
    let n = cs.num_vars() as usize + 1;
    let mut dpll = Dpll {
        clauses: &cs.clauses,
        values: vec![0; n],
        trail: Vec::with_capacity(n),
        pos_count: vec![0; n],
        neg_count: vec![0; n],
    };
    if !dpll.search() {
        return SatResult::Unsat;
    }
    let values: Vec<bool> = dpll.values.iter().map(|&v| v == 1).collect();
    let holds = |lit: Lit| values[lit.unsigned_abs() as usize] == (lit > 0);
    assert!(
        cs.clauses.iter().all(|c| c.iter().any(|&l| holds(l))),
        "solver produced a model violating a clause"
    );
    let mut assignment = Assignment::new();
    for (v, ix) in cs.original_vars() {
        assignment.set(v, values[ix as usize]);
    }
    if let Some(src) = cs.source() {
        assert!(
            evaluate(src, &assignment).expect("model covers source variables"),
            "solver model does not satisfy {src}"
        );
    }
    SatResult::Sat(Model { values, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::semantics::cnf::to_cnf;

    #[test]
    fn raw_clause_examples() {
        assert_eq!(
            solve(&ClauseSet::from_clauses(vec![vec![1], vec![-1]])),
            SatResult::Unsat
        );
        match solve(&ClauseSet::from_clauses(vec![vec![1, 2], vec![-1]])) {
            SatResult::Sat(m) => {
                assert!(m.value(2));
                assert!(!m.value(1));
            }
            SatResult::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn empty_clause_is_unsat() {
        assert_eq!(
            solve(&ClauseSet::from_clauses(vec![vec![1], vec![]])),
            SatResult::Unsat
        );
        assert!(solve(&ClauseSet::from_clauses(vec![])).is_sat());
    }

    #[test]
    fn contradiction_unsat() {
        assert_eq!(solve(&to_cnf(&parse("p&~p").unwrap())), SatResult::Unsat);
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p_{i,j}: pigeon i in hole j; index = 2*i + j + 1
        let x = |i: i32, j: i32| 2 * i + j + 1;
        let mut clauses = Vec::new();
        for i in 0..3 {
            clauses.push(vec![x(i, 0), x(i, 1)]);
        }
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-x(a, j), -x(b, j)]);
                }
            }
        }
        assert_eq!(solve(&ClauseSet::from_clauses(clauses)), SatResult::Unsat);
    }

    #[test]
    fn model_satisfies_source() {
        let f = parse("(a>b)&(b>c)&a&~(c&d)").unwrap();
        match solve(&to_cnf(&f)) {
            SatResult::Sat(m) => {
                assert!(evaluate(&f, m.assignment()).unwrap());
                assert!(!m
                    .assignment()
                    .get(crate::logic::Var::from_char('d').unwrap())
                    .unwrap());
            }
            SatResult::Unsat => panic!("expected SAT"),
        }
    }
}
