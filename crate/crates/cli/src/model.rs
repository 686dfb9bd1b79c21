//! Models the CLI can evaluate, and the custom-model file format.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use thermowork::protocol::ProtocolRun;
use thermowork::qmath::{expectation, tensor, Operator};
use thermowork::rabi::{auto_converge, RabiConfig};
use thermowork::{ProtocolInput, Temperature};

use crate::format::Row;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ModelKind {
    Rabi,
    TwoQubit,
    Custom,
}

/// Custom bipartite model. Matrices are nested arrays of `[re, im]` pairs.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomModelFile {
    pub d_a: usize,
    pub d_b: usize,
    pub h_a: Vec<Vec<[f64; 2]>>,
    pub h_b: Vec<Vec<[f64; 2]>>,
    pub h_i: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub temperature: f64,
}

fn matrix(name: &str, rows: &[Vec<[f64; 2]>], dim: usize) -> Result<Operator, CliError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Usage(format!("{name} must be {dim}x{dim}")));
    }
    let entries: Vec<Complex64> = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    let op =
        Operator::from_rows(dim, &entries).map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
    op.ensure_hermitian()
        .map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
    Ok(op)
}

impl CustomModelFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid model file: {e}")))
    }

    /// Validated protocol input; `temperature` overrides the file's value.
    pub fn to_input(&self, temperature: Option<Temperature>) -> Result<ProtocolInput, CliError> {
        let h_a = matrix("h_a", &self.h_a, self.d_a)?;
        let h_b = matrix("h_b", &self.h_b, self.d_b)?;
        let h_i = matrix("h_i", &self.h_i, self.d_a * self.d_b)?;
        let t = match temperature {
            Some(t) => t,
            None => {
                Temperature::new(self.temperature).map_err(|e| CliError::Usage(e.to_string()))?
            }
        };
        ProtocolInput::new(h_a, h_b, h_i, t).map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// `H_A = H_B = σ_z/2`, `H_I = g σ_x ⊗ σ_x`.
pub fn two_qubit_input(g: f64, t: Temperature) -> ProtocolInput {
    let h = Operator::pauli_z().scale(0.5);
    let hi = tensor(&Operator::pauli_x(), &Operator::pauli_x()).scale(g);
    ProtocolInput::new(h.clone(), h, hi, t).expect("well-formed two-qubit model")
}

/// Converged Rabi row.
pub fn rabi_row(config: &RabiConfig) -> Result<Row, CliError> {
    let p = auto_converge(config).map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(Row {
        g_over_omega: config.g_over_omega,
        work: Some(p.work),
        work_local_only: Some(p.work_local_only),
        bound: Some(p.bound),
        efficiency: p.efficiency,
        ground_energy: Some(p.ground_energy),
        sz_mean: Some(p.sz_mean),
        n_mean: Some(p.n_mean),
        hi_mean: Some(p.hi_mean),
        mi_term: Some(p.mi_term),
        converged_cutoff: Some(p.converged_cutoff),
    })
}

/// Protocol row for a generic input. `sz_mean` is reported only when A is a
/// qubit; `n_mean` and `converged_cutoff` are Rabi-only.
pub fn protocol_row(parameter: f64, input: &ProtocolInput) -> Result<Row, CliError> {
    let run = ProtocolRun::evaluate(input).map_err(|e| CliError::Numerical(e.to_string()))?;
    let r = run.report;
    let sz_mean = if input.space().d_a() == 2 {
        Some(
            expectation(&Operator::pauli_z(), &run.reduced_a)
                .map_err(|e| CliError::Numerical(e.to_string()))?,
        )
    } else {
        None
    };
    Ok(Row {
        g_over_omega: parameter,
        work: Some(r.work),
        work_local_only: Some(r.work_local_only),
        bound: Some(r.bound),
        efficiency: r.efficiency,
        ground_energy: Some(run.global.ground_energy()),
        sz_mean,
        n_mean: None,
        hi_mean: Some(r.hi_t3),
        mi_term: Some(r.mi_term),
        converged_cutoff: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRODUCT: &str = r#"{
        "d_a": 2, "d_b": 2,
        "h_a": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
        "h_b": [[[1, 0], [0, 0.5]], [[0, -0.5], [-1, 0]]],
        "h_i": [[[0,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[0,0]],
                [[0,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[0,0]]],
        "temperature": 1.0
    }"#;

    #[test]
    fn custom_file_without_interaction() {
        let input = CustomModelFile::parse(PRODUCT)
            .unwrap()
            .to_input(None)
            .unwrap();
        assert_eq!(input.temperature(), Temperature::new(1.0).unwrap());
        let row = protocol_row(1.0, &input).unwrap();
        assert_eq!(row.bound, Some(0.0));
        assert_eq!(row.efficiency, None);
    }

    #[test]
    fn custom_file_validation() {
        let bad = PRODUCT.replace("[[0, -0.5], [-1, 0]]", "[[0, 0.5], [-1, 0]]");
        let err = CustomModelFile::parse(&bad)
            .unwrap()
            .to_input(None)
            .unwrap_err();
        assert!(err.to_string().contains("h_b"), "{err}");

        let wrong_dim = PRODUCT.replace("\"d_b\": 2", "\"d_b\": 3");
        assert!(CustomModelFile::parse(&wrong_dim)
            .unwrap()
            .to_input(None)
            .is_err());
        assert!(CustomModelFile::parse("{\"d_a\": 2}").is_err());
    }

    #[test]
    fn two_qubit_row_reports_qubit_polarization() {
        let row = protocol_row(0.5, &two_qubit_input(0.5, Temperature::new(1.0).unwrap())).unwrap();
        assert!(row.sz_mean.unwrap() < 0.0);
        assert!(row.work.unwrap() <= row.bound.unwrap());
        assert_eq!(row.n_mean, None);
    }
}
