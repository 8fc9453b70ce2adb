//! Compressible Navier-Stokes outflow problem on the half-line: asymptotic
//! wave patterns, a finite-difference solver and stability diagnostics.

pub mod burgers;
pub mod diagnostics;
pub mod gas;
pub mod interp;
pub mod io;
pub mod ode;
pub mod solver;
pub mod waves;

pub use gas::{BoundaryData, EndStates, FluidState, GasModel, ValidationError};
