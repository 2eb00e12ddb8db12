//! Tseitin encoding into a clause database.

use std::fmt::Write as _;

use crate::logic::{Formula, Var, ALPHABET};

/// Signed DIMACS-style literal: `+i` is variable `i` true, `-i` false.
pub type Lit = i32;

#[derive(Clone, Debug)]
pub struct ClauseSet {
    pub clauses: Vec<Vec<Lit>>,
    num_vars: u32,
    /// Solver index of each original variable (0 when absent).
    var_index: [u32; ALPHABET],
    source: Option<Formula>,
}

impl ClauseSet {
    /// An empty database with no variables allocated.
    pub fn new() -> Self {
        ClauseSet {
            clauses: Vec::new(),
            num_vars: 0,
            var_index: [0; ALPHABET],
            source: None,
        }
    }

    /// Builds a database from raw clauses; variable count is inferred.
    pub fn from_clauses(clauses: Vec<Vec<Lit>>) -> Self {
        let num_vars = clauses
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs())
            .max()
            .unwrap_or(0);
        ClauseSet {
            clauses,
            num_vars,
            ..ClauseSet::new()
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn source(&self) -> Option<&Formula> {
        self.source.as_ref()
    }

    /// Solver index for an original variable, if it occurs.
    pub fn index_of(&self, v: Var) -> Option<u32> {
        let ix = self.var_index[v.index()];
        (ix != 0).then_some(ix)
    }

    /// Original variables with their solver indices.
    pub fn original_vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        Var::all().filter_map(|v| self.index_of(v).map(|ix| (v, ix)))
    }

    fn fresh(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    fn encode(&mut self, f: &Formula) -> Lit {
        match f {
            Formula::Var(v) => {
                if self.var_index[v.index()] == 0 {
                    self.var_index[v.index()] = self.fresh();
                }
                self.var_index[v.index()] as Lit
            }
            // negation flips the literal; no auxiliary needed
            Formula::Not(c) => -self.encode(c),
            Formula::And(l, r) => {
                let (x, y) = (self.encode(l), self.encode(r));
                let g = self.fresh() as Lit;
                self.clauses.push(vec![-g, x]);
                self.clauses.push(vec![-g, y]);
                self.clauses.push(vec![g, -x, -y]);
                g
            }
            Formula::Or(l, r) => {
                let (x, y) = (self.encode(l), self.encode(r));
                let g = self.fresh() as Lit;
                self.clauses.push(vec![-g, x, y]);
                self.clauses.push(vec![g, -x]);
                self.clauses.push(vec![g, -y]);
                g
            }
            Formula::Implies(l, r) => {
                let (x, y) = (self.encode(l), self.encode(r));
                let g = self.fresh() as Lit;
                self.clauses.push(vec![-g, -x, y]);
                self.clauses.push(vec![g, x]);
                self.clauses.push(vec![g, -y]);
                g
            }
        }
    }

    /// Standard DIMACS CNF text with comment lines naming original variables.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (v, ix) in self.original_vars() {
            let _ = writeln!(out, "c {v} {ix}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

impl Default for ClauseSet {
    fn default() -> Self {
        Self::new()
    }
}

/// Equisatisfiable CNF: one auxiliary per binary connective, root asserted.
pub fn to_cnf(f: &Formula) -> ClauseSet {
    let mut cs = ClauseSet::new();
    let root = cs.encode(f);
    cs.clauses.push(vec![root]);
    cs.source = Some(f.clone());
    cs
}
