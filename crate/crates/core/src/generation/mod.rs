//! Dataset generation: formula sampling, balanced 4-tuples, mutation,
//! split construction, leakage pruning, and renaming augmentation.

mod augment;
mod dataset;
pub mod mutate;
mod prune;
pub mod quad;
pub mod sampler;
mod sequent;
mod spec;
pub mod split;

pub use augment::{augment, augment_with};
pub use dataset::{sidecar_path, Dataset, Provenance};
pub use mutate::mutate_to_nonentailed;
pub use prune::{prune_alpha_equivalent, CanonicalIndex, PruneMode};
pub use quad::match_quads;
pub use sampler::{sample_entailing_pair, sample_formula, sample_non_entailing_pair, sample_pool};
pub use sequent::{quad_to_sequents, QuadTuple, Sequent};
pub use spec::{GenLimits, IntRange, SplitSpec};
pub use split::{
    build_split, build_split_with, BuildOptions, GenStats, Mechanism, MechanismRegistry,
};
