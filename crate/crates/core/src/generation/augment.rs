use rand::Rng;

use crate::generation::Sequent;
use crate::logic::{apply_permutation, VarPermutation};

/// Renames the variables of both sides with one random permutation of a–z.
pub fn augment<R: Rng + ?Sized>(s: &Sequent, rng: &mut R) -> Sequent {
    augment_with(s, &VarPermutation::random(rng))
}

pub fn augment_with(s: &Sequent, perm: &VarPermutation) -> Sequent {
    Sequent::trusted(
        apply_permutation(&s.premise, perm),
        apply_permutation(&s.conclusion, perm),
        s.label,
    )
}
