use rand::seq::SliceRandom;
use rand::Rng;

use crate::generation::QuadTuple;
use crate::logic::Formula;
use crate::semantics::entails;

/// An entailing pair `(A, B)`.
pub type Pair = (Formula, Formula);

/// Whether two entailing pairs fail to entail across: `A₁ ⊭ B₂` and `A₂ ⊭ B₁`.
pub fn cross_compatible(first: &Pair, second: &Pair) -> bool {
    !entails(&first.0, &second.1) && !entails(&second.0, &first.1)
}

/// Index of the first of at most `window` candidates compatible with `pair`.
pub fn find_partner(candidates: &[Pair], pair: &Pair, window: usize) -> Option<usize> {
    candidates
        .iter()
        .take(window)
        .position(|c| cross_compatible(c, pair))
}

#[derive(Clone, Debug, Default)]
pub struct MatchOutcome {
    pub quads: Vec<QuadTuple>,
    /// Pairs left without a partner, available for recycling.
    pub unmatched: Vec<Pair>,
}

/// Greedy randomized matching: after shuffling, each unmatched pair scans the
/// next `window` unmatched pairs for a cross-compatible partner. Every input
/// pair is used at most once.
pub fn match_quads<R: Rng + ?Sized>(
    mut pool: Vec<Pair>,
    window: usize,
    rng: &mut R,
) -> MatchOutcome {
    pool.shuffle(rng);
    let n = pool.len();
    let mut used = vec![false; n];
    let mut partner = vec![usize::MAX; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let mut scanned = 0;
        for j in i + 1..n {
            if scanned == window {
                break;
            }
            if used[j] {
                continue;
            }
            scanned += 1;
            if cross_compatible(&pool[i], &pool[j]) {
                used[i] = true;
                used[j] = true;
                partner[i] = j;
                break;
            }
        }
    }
    let mut slots: Vec<Option<Pair>> = pool.into_iter().map(Some).collect();
    let mut out = MatchOutcome::default();
    for i in 0..n {
        if partner[i] != usize::MAX {
            let (a1, b1) = slots[i].take().unwrap();
            let (a2, b2) = slots[partner[i]].take().unwrap();
            out.quads.push(QuadTuple { a1, b1, a2, b2 });
        }
    }
    out.unmatched = slots.into_iter().flatten().collect();
    out
}
