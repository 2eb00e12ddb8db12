#![allow(dead_code)]

use std::collections::HashMap;

use entail::logic::{Formula, Var};
use proptest::prelude::*;

/// Random formulas over the first `vars` letters with up to `depth` levels.
pub fn formula(vars: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = (0..vars).prop_map(|i| Formula::Var(Var::new(i).unwrap()));
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::implies(l, r)),
        ]
    })
}

/// Walks both trees together and builds a variable map, failing on a shape
/// mismatch or when the map stops being an injective function.
pub fn injective_renaming(f: &Formula, g: &Formula) -> Option<HashMap<Var, Var>> {
    fn walk(
        f: &Formula,
        g: &Formula,
        fwd: &mut HashMap<Var, Var>,
        back: &mut HashMap<Var, Var>,
    ) -> bool {
        match (f, g) {
            (Formula::Var(a), Formula::Var(b)) => {
                *fwd.entry(*a).or_insert(*b) == *b && *back.entry(*b).or_insert(*a) == *a
            }
            (Formula::Not(x), Formula::Not(y)) => walk(x, y, fwd, back),
            (Formula::And(a, b), Formula::And(c, d))
            | (Formula::Or(a, b), Formula::Or(c, d))
            | (Formula::Implies(a, b), Formula::Implies(c, d)) => {
                walk(a, c, fwd, back) && walk(b, d, fwd, back)
            }
            _ => false,
        }
    }
    let (mut fwd, mut back) = (HashMap::new(), HashMap::new());
    walk(f, g, &mut fwd, &mut back).then_some(fwd)
}
