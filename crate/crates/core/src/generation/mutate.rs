//! Local edits that turn an entailed conclusion into a non-entailed one.

use rand::Rng;

use crate::error::{Error, Result};
use crate::logic::{Formula, Op, Var};
use crate::semantics::entails;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edit {
    /// Replace one binary connective by a different binary connective.
    FlipBinary,
    /// Wrap a subtree in a negation, or strip an existing one.
    ToggleNegation,
    /// Swap the antecedent and consequent of one implication.
    SwapImplication,
    /// Replace one variable occurrence by another pool variable.
    RenameVariable,
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub formula: Formula,
    /// Number of edit rounds applied.
    pub edits: usize,
}

fn preorder<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    out.push(f);
    match f {
        Formula::Var(_) => {}
        Formula::Not(c) => preorder(c, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            preorder(l, out);
            preorder(r, out);
        }
    }
}

/// Rebuilds `f` with the node at pre-order position `target` replaced.
fn rewrite_at(
    f: &Formula,
    target: usize,
    next: &mut usize,
    edit: &mut dyn FnMut(&Formula) -> Formula,
) -> Formula {
    let here = *next;
    *next += 1;
    if here == target {
        return edit(f);
    }
    match f {
        Formula::Var(_) => f.clone(),
        Formula::Not(c) => Formula::not(rewrite_at(c, target, next, edit)),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            let l = rewrite_at(l, target, next, edit);
            let r = rewrite_at(r, target, next, edit);
            Formula::binary(f.op().unwrap(), l, r)
        }
    }
}

/// Applies `edit` at a random applicable node; `None` if no node qualifies.
pub fn apply_edit<R: Rng + ?Sized>(
    f: &Formula,
    edit: Edit,
    pool: &[Var],
    rng: &mut R,
) -> Option<Formula> {
    let mut nodes = Vec::new();
    preorder(f, &mut nodes);
    let eligible: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| match edit {
            Edit::FlipBinary => n.op().is_some_and(|op| op != Op::Not),
            Edit::ToggleNegation => true,
            Edit::SwapImplication => n.op() == Some(Op::Implies),
            Edit::RenameVariable => matches!(n, Formula::Var(_)) && pool.len() > 1,
        })
        .map(|(i, _)| i)
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let target = eligible[rng.random_range(0..eligible.len())];
    let mut rewrite = |node: &Formula| -> Formula {
        match (edit, node) {
            (Edit::FlipBinary, Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r)) => {
                let current = node.op().unwrap();
                let others: Vec<Op> = Op::BINARY.into_iter().filter(|&o| o != current).collect();
                Formula::binary(
                    others[rng.random_range(0..others.len())],
                    (**l).clone(),
                    (**r).clone(),
                )
            }
            (Edit::ToggleNegation, Formula::Not(c)) => (**c).clone(),
            (Edit::ToggleNegation, _) => Formula::not(node.clone()),
            (Edit::SwapImplication, Formula::Implies(l, r)) => {
                Formula::implies((**r).clone(), (**l).clone())
            }
            (Edit::RenameVariable, Formula::Var(v)) => {
                let others: Vec<Var> = pool.iter().copied().filter(|w| w != v).collect();
                Formula::Var(others[rng.random_range(0..others.len())])
            }
            _ => unreachable!("edit applied to ineligible node"),
        }
    };
    Some(rewrite_at(f, target, &mut 0, &mut rewrite))
}

const EDITS: [Edit; 4] = [
    Edit::FlipBinary,
    Edit::ToggleNegation,
    Edit::SwapImplication,
    Edit::RenameVariable,
];

/// Edits `conclusion` one random local change at a time until the premise no
/// longer entails it. Edits accumulate across rounds.
pub fn mutate_to_nonentailed<R: Rng + ?Sized>(
    premise: &Formula,
    conclusion: &Formula,
    pool: &[Var],
    max_rounds: usize,
    rng: &mut R,
) -> Result<Mutation> {
    let mut current = conclusion.clone();
    for round in 1..=max_rounds {
        loop {
            let edit = EDITS[rng.random_range(0..EDITS.len())];
            if let Some(next) = apply_edit(&current, edit, pool, rng) {
                current = next;
                break;
            }
        }
        if !entails(premise, &current) {
            return Ok(Mutation {
                formula: current,
                edits: round,
            });
        }
    }
    Err(Error::BudgetExhausted {
        what: "mutating a conclusion",
        budget: max_rounds,
    })
}
