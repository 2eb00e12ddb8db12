//! Renaming-invariant canonical forms.
//!
//! Variables are replaced by the index of their first occurrence in a
//! left-to-right pre-order walk, so two inputs compare equal exactly when one
//! is an injective renaming of the other.

use crate::logic::{Formula, Op, ALPHABET};

const SEPARATOR: u8 = 4;
const VAR_BASE: u8 = 8;

/// Pre-order token sequence with de-Bruijn-style variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn tokens(&self) -> &[u8] {
        &self.0
    }
}

struct Indexer {
    table: [u8; ALPHABET],
    next: u8,
    out: Vec<u8>,
}

impl Indexer {
    fn new() -> Self {
        Indexer {
            table: [u8::MAX; ALPHABET],
            next: 0,
            out: Vec::new(),
        }
    }

    fn push(&mut self, f: &Formula) {
        match f {
            Formula::Var(v) => {
                let slot = &mut self.table[v.index()];
                if *slot == u8::MAX {
                    *slot = self.next;
                    self.next += 1;
                }
                self.out.push(VAR_BASE + *slot);
            }
            Formula::Not(c) => {
                self.out.push(Op::Not as u8);
                self.push(c);
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                self.out.push(f.op().unwrap() as u8);
                self.push(l);
                self.push(r);
            }
        }
    }
}

pub fn canonicalize(f: &Formula) -> CanonicalForm {
    let mut ix = Indexer::new();
    ix.push(f);
    CanonicalForm(ix.out)
}

/// Joint form of a premise/conclusion pair sharing one index table.
pub fn canonicalize_sequent(premise: &Formula, conclusion: &Formula) -> CanonicalForm {
    let mut ix = Indexer::new();
    ix.push(premise);
    ix.out.push(SEPARATOR);
    ix.push(conclusion);
    CanonicalForm(ix.out)
}
