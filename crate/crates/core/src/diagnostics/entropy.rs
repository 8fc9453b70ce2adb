//! Relative entropy `Phi(z) = z - ln z - 1` and the energy density built from it.

use super::DiagnosticsError;
use crate::gas::{FluidState, GasModel};
use crate::solver::{Grid, SimField};
use crate::waves::WavePattern;

#[inline]
fn phi(z: f64) -> f64 {
    // z - 1 - ln z without cancellation near z = 1
    let e = z - 1.0;
    e - e.ln_1p()
}

pub fn phi_entropy(z: f64) -> Result<f64, DiagnosticsError> {
    if !(z > 0.0) {
        return Err(DiagnosticsError::NonPositive(z));
    }
    Ok(phi(z))
}

/// `R theta_ref Phi(rho_ref / rho) + (u - u_ref)^2 / 2 + c_v theta_ref Phi(theta / theta_ref)`.
pub fn relative_entropy_density(gas: &GasModel, s: &FluidState, reference: &FluidState) -> f64 {
    let psi = s.u() - reference.u();
    gas.r() * reference.theta() * phi(reference.rho() / s.rho())
        + 0.5 * psi * psi
        + gas.cv() * reference.theta() * phi(s.theta() / reference.theta())
}

/// Trapezoid integral of `rho E` over `[0, L]` against the pattern at `field.t`.
pub fn energy_integral(
    gas: &GasModel,
    grid: &Grid,
    field: &SimField,
    target: &WavePattern,
) -> Result<f64, DiagnosticsError> {
    let n = field.len();
    if n != grid.cells() + 1 {
        return Err(DiagnosticsError::LengthMismatch {
            got: n,
            expected: grid.cells() + 1,
        });
    }
    let mut sum = 0.0;
    for i in 0..n {
        let reference = target.eval(field.t, grid.x(i))?;
        let s = field.state(i);
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sum += w * s.rho() * relative_entropy_density(gas, &s, &reference);
    }
    Ok(sum * grid.h())
}
