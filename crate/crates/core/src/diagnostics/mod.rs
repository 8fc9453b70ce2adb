//! Analysis quantities for solver output: relative entropy, perturbation
//! norms, distances to wave patterns, bound tracking, Lagrangian cells and
//! decay-rate fits.

mod bounds;
mod decay;
mod entropy;
mod lagrangian;
mod norms;
mod summary;

use thiserror::Error;

use crate::waves::WaveError;

pub use bounds::{BoundsReport, FieldExtrema, XiFactors};
pub use decay::{decay_fit, geometric_times, srw_derivative_norm, DecayFit, LpNorm};
pub use entropy::{energy_integral, phi_entropy, relative_entropy_density};
pub use lagrangian::{
    cell_entropy_averages, lagrangian_boundary, lagrangian_coordinate, lagrangian_nodes, CellReport,
};
pub use norms::{perturbation_norms, sup_distance, tail_sentinel, ComponentNorms, PerturbationField};
pub use summary::{RunMonitor, RunSummary, SnapshotRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("Phi needs z > 0, got {0}")]
    NonPositive(f64),
    #[error("decay fit needs at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("norm at t = {t} is not positive: {value}")]
    NonPositiveNorm { t: f64, value: f64 },
    #[error("time {t} outside the stored range [0, {t_max}]")]
    TimeOutOfRange { t: f64, t_max: f64 },
    #[error("cell {index} spans {width} in x, below two grid spacings")]
    DegenerateCell { index: i64, width: f64 },
    #[error("array length {got} does not match the grid ({expected} nodes)")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Wave(#[from] WaveError),
}
