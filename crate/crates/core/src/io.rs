//! Plain-text tabular format shared by profiles and snapshots.
//!
//! ```text
//! # key = value          (metadata, any number of lines)
//! x,rho,u,theta          (header row)
//! 0.0000000000000000e0,1.0000000000000000e0,...
//! ```
//!
//! Floats are written with 17 significant digits so they round-trip exactly.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::solver::{Grid, SimField};
use crate::waves::{StationaryWave, WaveError, WavePattern};

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Wave(#[from] WaveError),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&format_float(*v));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self, TableError> {
        let mut t = Table::default();
        let mut have_header = false;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest.split_once('=').ok_or_else(|| TableError::Parse {
                    line: lineno,
                    msg: "metadata line without '='".into(),
                })?;
                t.meta.push((k.trim().to_string(), v.trim().to_string()));
            } else if line.trim().is_empty() {
                continue;
            } else if !have_header {
                t.columns = line.split(',').map(|c| c.trim().to_string()).collect();
                have_header = true;
            } else {
                let row: Vec<f64> = line
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| TableError::Parse {
                        line: lineno,
                        msg: e.to_string(),
                    })?;
                if row.len() != t.columns.len() {
                    return Err(TableError::Parse {
                        line: lineno,
                        msg: format!("expected {} values, found {}", t.columns.len(), row.len()),
                    });
                }
                t.rows.push(row);
            }
        }
        Ok(t)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pattern sampled on the grid at time `t`: columns `x, rho, u, theta`.
pub fn pattern_table(pattern: &WavePattern, grid: &Grid, t: f64) -> Result<Table, TableError> {
    let mut table = Table::new(&["x", "rho", "u", "theta"]).with_meta("t", format_float(t));
    for x in grid.nodes() {
        let s = pattern.eval(t, x)?;
        table.rows.push(vec![x, s.rho(), s.u(), s.theta()]);
    }
    Ok(table)
}

/// Sampled stationary profile on its own integration grid.
pub fn stationary_table(wave: &StationaryWave) -> Table {
    let (xs, us, thetas) = wave.samples();
    let rhos = wave.density_samples();
    let end = wave.endstate();
    let mut table = Table::new(&["x", "rho", "u", "theta"])
        .with_meta("mass_flux", format_float(wave.mass_flux()))
        .with_meta("regime", format!("{:?}", wave.regime()).to_lowercase())
        .with_meta("rho_m", format_float(end.rho()))
        .with_meta("u_m", format_float(end.u()))
        .with_meta("theta_m", format_float(end.theta()))
        .with_meta("strength", format_float(wave.strength()))
        .with_meta("terminal_distance", format_float(wave.terminal_distance()));
    if let Some(d) = wave.decay() {
        if let Some(c) = d.rate() {
            table = table.with_meta("decay_rate", format_float(c));
        }
        table = table.with_meta("decay_r_squared", format_float(d.r_squared));
    }
    for i in 0..xs.len() {
        table.rows.push(vec![xs[i], rhos[i], us[i], thetas[i]]);
    }
    table
}

/// Solver snapshot with the target pattern alongside.
pub fn snapshot_table(field: &SimField, grid: &Grid, target: &WavePattern) -> Result<Table, TableError> {
    let mut table = Table::new(&["x", "rho", "u", "theta", "target_rho", "target_u", "target_theta"])
        .with_meta("t", format_float(field.t))
        .with_meta("h", format_float(grid.h()));
    for (i, x) in grid.nodes().into_iter().enumerate() {
        let s = target.eval(field.t, x)?;
        table
            .rows
            .push(vec![x, field.rho[i], field.u[i], field.theta[i], s.rho(), s.u(), s.theta()]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{FluidState, GasModel};

    #[test]
    fn round_trip_is_bit_exact() {
        let mut t = Table::new(&["x", "y"]).with_meta("hash", "abc").with_meta("t", 1.5);
        let vals = [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE, 0.0];
        for (i, v) in vals.iter().enumerate() {
            t.rows.push(vec![i as f64, *v]);
        }
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = Table::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.meta("hash"), Some("abc"));
        for (a, b) in back.column("y").unwrap().iter().zip(vals) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn constant_pattern_has_constant_columns() {
        let gas = GasModel::default();
        let p = WavePattern::Constant {
            gas,
            state: FluidState::new(1.0, -0.5, 2.0).unwrap(),
        };
        let grid = Grid::new(10.0, 20).unwrap();
        let t = pattern_table(&p, &grid, 3.0).unwrap();
        assert_eq!(t.rows.len(), 21);
        assert!(t.column("theta").unwrap().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn malformed_rows_rejected() {
        let text = "x,y\n1.0,2.0\n3.0\n";
        assert!(matches!(Table::read_from(text.as_bytes()), Err(TableError::Parse { line: 3, .. })));
        let text = "x,y\n1.0,abc\n";
        assert!(Table::read_from(text.as_bytes()).is_err());
    }
}
