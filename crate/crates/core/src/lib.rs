//! Volumetric thermometry from sparse rotating slices: geometry, per-slice
//! temperature conversion, population-map-driven volume reconstruction,
//! synthetic phantoms, evaluation metrics, and on-disk formats.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form also rejects NaN, which must never pass a parameter check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod eval;
pub mod geom;
pub mod image;
pub mod io;
pub mod popmap;
pub mod prfs;
pub mod reconstruct;
pub mod sim;
pub mod volume;

pub use error::{Error, Result};
pub use eval::{BenchOp, BenchReport, ConfusionCounts, LatencyStats, MachineInfo, SummaryStat};
pub use geom::{CylCoord, VolumeGeometry};
pub use image::{AcquisitionParams, PhaseImage, SliceShape};
pub use io::{read_phase_image, read_volume, write_phase_image, write_volume};
pub use popmap::{MapOptions, OrientationSet, PopulationMap, RadialSampling, SinkMode};
pub use prfs::{ReferenceSet, SliceThermometry};
pub use reconstruct::{CoagulationMask, OrientationAge, ReconstructionEngine};
pub use sim::{PhantomSpec, Schedule, TubeSpec};
pub use volume::{MaskVolume, ScalarVolume, VolumeKind};
