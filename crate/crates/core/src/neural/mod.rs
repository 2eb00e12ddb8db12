//! Neural entailment models with hand-written gradients.

mod adam;
pub mod bow;
mod checkpoint;
pub mod gradcheck;
mod model;
pub mod ops;
mod params;
pub mod pwnet;
mod train;
pub mod treenet;
mod worlds;

pub use adam::{Adam, AdamConfig};
pub use bow::BowModel;
pub use checkpoint::{Checkpoint, CHECKPOINT_VERSION};
pub use model::{EntailmentModel, ModelConfig, ModelFactory, ModelRegistry, Sides};
pub use params::{ParamId, ParamSet, TensorRecord};
pub use pwnet::PwNet;
pub use train::{accuracy, train, write_trace_csv, TracePoint, TrainConfig, TrainReport};
pub use treenet::{
    treenet_cell, treenet_cell_backward, CellCache, CellGrads, CellWeights, TreeNet,
};
pub use worlds::{sample_worlds, WorldSet};
