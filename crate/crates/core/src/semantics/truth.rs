//! Bit-parallel truth-table evaluation: 64 assignments per machine word.

use crate::error::{Error, Result};
use crate::logic::{Formula, VarSet, ALPHABET};

/// Upper bound on variables for exhaustive enumeration.
pub const ENUMERATION_LIMIT: usize = 20;

/// Row patterns for the six lowest variables within one 64-row word.
const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, Copy, Debug)]
enum Instr {
    Load(u8),
    Not,
    And,
    Or,
    Implies,
}

/// A formula compiled to postfix form over a fixed slot layout.
#[derive(Clone, Debug)]
pub struct Program {
    code: Vec<Instr>,
    max_stack: usize,
}

impl Program {
    /// `slots[v]` gives the input slot of variable `v`.
    pub fn compile(f: &Formula, slots: &[u8; ALPHABET]) -> Program {
        let mut code = Vec::with_capacity(f.len());
        let mut depth = 0;
        let mut max_stack = 0;
        emit(f, slots, &mut code, &mut depth, &mut max_stack);
        Program { code, max_stack }
    }

    pub fn eval(&self, inputs: &[u64], stack: &mut Vec<u64>) -> u64 {
        stack.clear();
        stack.reserve(self.max_stack);
        for instr in &self.code {
            match *instr {
                Instr::Load(slot) => stack.push(inputs[slot as usize]),
                Instr::Not => {
                    let x = stack.last_mut().unwrap();
                    *x = !*x;
                }
                op => {
                    let r = stack.pop().unwrap();
                    let l = stack.last_mut().unwrap();
                    *l = match op {
                        Instr::And => *l & r,
                        Instr::Or => *l | r,
                        _ => !*l | r,
                    };
                }
            }
        }
        stack[0]
    }
}

fn emit(
    f: &Formula,
    slots: &[u8; ALPHABET],
    code: &mut Vec<Instr>,
    depth: &mut usize,
    max: &mut usize,
) {
    match f {
        Formula::Var(v) => {
            code.push(Instr::Load(slots[v.index()]));
            *depth += 1;
            *max = (*max).max(*depth);
        }
        Formula::Not(c) => {
            emit(c, slots, code, depth, max);
            code.push(Instr::Not);
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            emit(l, slots, code, depth, max);
            emit(r, slots, code, depth, max);
            code.push(match f {
                Formula::And(..) => Instr::And,
                Formula::Or(..) => Instr::Or,
                _ => Instr::Implies,
            });
            *depth -= 1;
        }
    }
}

/// Slot layout assigning consecutive slots to `domain` in alphabetical order.
pub fn slot_layout(domain: VarSet) -> [u8; ALPHABET] {
    let mut slots = [0u8; ALPHABET];
    for (i, v) in domain.iter().enumerate() {
        slots[v.index()] = i as u8;
    }
    slots
}

/// Visits every word of the truth table over `domain`; the callback receives
/// the input words and a mask of the valid rows in that word.
pub(crate) fn for_each_word(domain: VarSet, mut visit: impl FnMut(&[u64], u64) -> bool) {
    let n = domain.len();
    let mut inputs = vec![0u64; n];
    for (slot, input) in inputs.iter_mut().enumerate().take(n.min(6)) {
        *input = LOW_PATTERNS[slot];
    }
    let words = if n <= 6 { 1u64 } else { 1u64 << (n - 6) };
    let mask = if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    };
    for w in 0..words {
        for (slot, input) in inputs.iter_mut().enumerate().take(n).skip(6) {
            *input = if w >> (slot - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if !visit(&inputs, mask) {
            return;
        }
    }
}

fn check_limit(domain: VarSet) -> Result<()> {
    if domain.len() > ENUMERATION_LIMIT {
        return Err(Error::TooManyVariables {
            count: domain.len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Number of assignments over exactly `vars(f)` that satisfy `f`.
pub fn count_sat(f: &Formula) -> Result<u64> {
    let domain = f.vars();
    check_limit(domain)?;
    let prog = Program::compile(f, &slot_layout(domain));
    let mut stack = Vec::new();
    let mut count = 0u64;
    for_each_word(domain, |inputs, mask| {
        count += (prog.eval(inputs, &mut stack) & mask).count_ones() as u64;
        true
    });
    Ok(count)
}

/// Exhaustive entailment: every row over `vars(A) ∪ vars(B)` must satisfy
/// `sat(A) ≤ sat(B)`.
pub fn entails_bruteforce(premise: &Formula, conclusion: &Formula) -> Result<bool> {
    let domain = premise.vars().union(conclusion.vars());
    check_limit(domain)?;
    let slots = slot_layout(domain);
    let pa = Program::compile(premise, &slots);
    let pb = Program::compile(conclusion, &slots);
    let mut stack = Vec::new();
    let mut holds = true;
    for_each_word(domain, |inputs, mask| {
        let a = pa.eval(inputs, &mut stack);
        let b = pb.eval(inputs, &mut stack);
        holds = a & !b & mask == 0;
        holds
    });
    Ok(holds)
}
