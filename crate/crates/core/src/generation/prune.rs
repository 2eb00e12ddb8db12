use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::generation::{Dataset, Sequent};
use crate::logic::{canonicalize, canonicalize_sequent, CanonicalForm};

/// What counts as leaked from the training split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneMode {
    /// A target sequent whose premise and conclusion are jointly a renaming
    /// of some training sequent.
    #[default]
    Sequent,
    /// A target sequent containing any formula that is a renaming of some
    /// training formula.
    Formula,
}

impl fmt::Display for PruneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneMode::Sequent => "sequent",
            PruneMode::Formula => "formula",
        })
    }
}

impl FromStr for PruneMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "sequent" => Ok(PruneMode::Sequent),
            "formula" => Ok(PruneMode::Formula),
            _ => Err(Error::UnknownStrategy {
                kind: "prune mode",
                name: s.to_string(),
                available: "formula, sequent".into(),
            }),
        }
    }
}

/// Canonical forms of a training split, indexed for membership tests.
pub struct CanonicalIndex {
    mode: PruneMode,
    forms: HashSet<CanonicalForm>,
}

impl CanonicalIndex {
    pub fn build(train: &[Sequent], mode: PruneMode) -> Self {
        let mut forms = HashSet::new();
        for s in train {
            match mode {
                PruneMode::Sequent => {
                    forms.insert(canonicalize_sequent(&s.premise, &s.conclusion));
                }
                PruneMode::Formula => {
                    forms.insert(canonicalize(&s.premise));
                    forms.insert(canonicalize(&s.conclusion));
                }
            }
        }
        CanonicalIndex { mode, forms }
    }

    pub fn contains(&self, s: &Sequent) -> bool {
        match self.mode {
            PruneMode::Sequent => self
                .forms
                .contains(&canonicalize_sequent(&s.premise, &s.conclusion)),
            PruneMode::Formula => {
                self.forms.contains(&canonicalize(&s.premise))
                    || self.forms.contains(&canonicalize(&s.conclusion))
            }
        }
    }
}

/// Drops target sequents that are α-equivalent to training material. Returns
/// the pruned dataset; its provenance gains a note with the drop count.
pub fn prune_alpha_equivalent(target: &Dataset, train: &Dataset, mode: PruneMode) -> Dataset {
    let index = CanonicalIndex::build(&train.sequents, mode);
    let sequents: Vec<Sequent> = target
        .sequents
        .iter()
        .filter(|s| !index.contains(s))
        .cloned()
        .collect();
    let dropped = target.len() - sequents.len();
    let mut provenance = target.provenance.clone();
    if let Some(p) = provenance.as_mut() {
        p.notes
            .push(format!("pruned {dropped} sequents ({mode} mode)"));
    }
    Dataset {
        sequents,
        provenance,
    }
}
