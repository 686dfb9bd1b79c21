//! Subcommand implementations. Each returns the text destined for standard
//! output so the binary stays a thin shell.

use std::path::Path;

use thermowork::protocol::{run_audit, AuditConfig};
use thermowork::rabi::RabiConfig;
use thermowork::{BipartiteSpace, Execution, ProtocolInput, Temperature};

use crate::format::{round_sig, to_csv, to_json_array, to_json_object, Row};
use crate::model::{protocol_row, rabi_row, two_qubit_input, CustomModelFile, ModelKind};
use crate::{AuditArgs, CliError, ModelArgs, OutputFormat, PointArgs, SweepArgs};

/// Largest number of sweep points accepted.
pub const MAX_SWEEP_POINTS: f64 = 1e5;

/// A resolved model, ready to evaluate at any coupling.
pub enum Evaluator {
    Rabi(RabiConfig),
    Protocol {
        kind: ModelKind,
        base: ProtocolInput,
    },
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

impl Evaluator {
    pub fn from_args(args: &ModelArgs) -> Result<Self, CliError> {
        let temperature = args
            .temperature
            .map(Temperature::new)
            .transpose()
            .map_err(usage)?;
        if args.file.is_some() && args.model != ModelKind::Custom {
            return Err(usage("--file is only valid with --model custom"));
        }
        match args.model {
            ModelKind::Rabi => {
                let cfg = RabiConfig::new(0.0, args.cutoff)
                    .map_err(usage)?
                    .with_temperature(temperature.unwrap_or_default())
                    .with_tolerance(args.tol);
                cfg.validate().map_err(usage)?;
                Ok(Evaluator::Rabi(cfg))
            }
            ModelKind::TwoQubit => Ok(Evaluator::Protocol {
                kind: ModelKind::TwoQubit,
                base: two_qubit_input(1.0, temperature.unwrap_or_default()),
            }),
            ModelKind::Custom => {
                let path = args
                    .file
                    .as_deref()
                    .ok_or_else(|| usage("--model custom requires --file"))?;
                let base = CustomModelFile::load(path)?.to_input(temperature)?;
                Ok(Evaluator::Protocol {
                    kind: ModelKind::Custom,
                    base,
                })
            }
        }
    }

    pub fn row(&self, g: f64) -> Result<Row, CliError> {
        if !(g.is_finite() && g >= 0.0) {
            return Err(usage(format!(
                "coupling must be finite and non-negative, got {g}"
            )));
        }
        match self {
            Evaluator::Rabi(cfg) => rabi_row(&cfg.with_coupling(g)),
            Evaluator::Protocol { base, .. } => protocol_row(g, &base.with_coupling_scale(g)),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Evaluator::Rabi(_) => ModelKind::Rabi,
            Evaluator::Protocol { kind, .. } => *kind,
        }
    }
}

/// Inclusive grid `start, start + step, …, stop`, each value rounded to 12
/// significant digits so that decimal inputs land on decimal values.
pub fn sweep_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(usage("sweep bounds must be finite"));
    }
    if start >= stop {
        return Err(usage(format!(
            "--g-start ({start}) must be below --g-stop ({stop})"
        )));
    }
    if step <= 0.0 {
        return Err(usage(format!("--g-step must be positive, got {step}")));
    }
    let span = (stop - start) / step;
    if span > MAX_SWEEP_POINTS {
        return Err(usage(format!(
            "sweep has {span:.0} steps, limit is {MAX_SWEEP_POINTS}"
        )));
    }
    let n = (span + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|k| round_sig(start + k as f64 * step))
        .collect())
}

pub struct SweepResult {
    pub rows: Vec<Row>,
    /// `(parameter, message)` for every point that failed.
    pub failures: Vec<(f64, String)>,
    pub output: String,
}

pub fn sweep(args: &SweepArgs, exec: Execution) -> Result<SweepResult, CliError> {
    let grid = sweep_grid(args.g_start, args.g_stop, args.g_step)?;
    let evaluator = Evaluator::from_args(&args.model)?;
    let evaluated = exec.map(&grid, |&g| evaluator.row(g));

    let mut rows = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for (&g, r) in grid.iter().zip(evaluated) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                failures.push((g, e.to_string()));
                rows.push(Row::failed(g));
            }
        }
    }
    let output = match args.format {
        OutputFormat::Csv => to_csv(&rows),
        OutputFormat::Json => to_json_array(&rows),
    };
    Ok(SweepResult {
        rows,
        failures,
        output,
    })
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn point(args: &PointArgs) -> Result<String, CliError> {
    let evaluator = Evaluator::from_args(&args.model)?;
    let g = round_sig(args.g);
    Ok(to_json_object(&evaluator.row(g)?))
}

pub struct AuditResult {
    pub clean: bool,
    pub summary: String,
}

pub fn audit(args: &AuditArgs, exec: Execution) -> Result<AuditResult, CliError> {
    let space = BipartiteSpace::new(args.dims.0, args.dims.1).map_err(usage)?;
    let t = Temperature::new(args.temperature).map_err(usage)?;
    let cfg = AuditConfig::new(args.count as usize, space, t, args.seed);
    let s = run_audit(&cfg, exec);
    let header = format!(
        "dims: {}x{}\ntemperature: {}\nseed: {}\n",
        args.dims.0, args.dims.1, args.temperature, args.seed
    );
    Ok(AuditResult {
        clean: s.is_clean(),
        summary: header + &s.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_grid_has_two_hundred_points() {
        let g = sweep_grid(0.01, 2.0, 0.01).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!(g[49], 0.5);
        assert_eq!(*g.last().unwrap(), 2.0);
    }

    #[test]
    fn grid_validation() {
        assert!(sweep_grid(1.0, 1.0, 0.1).is_err());
        assert!(sweep_grid(0.0, 1.0, 0.0).is_err());
        assert!(sweep_grid(0.0, 1.0, -0.1).is_err());
        assert!(sweep_grid(0.0, 1.0, 1e-6).is_err());
        assert_eq!(sweep_grid(0.0, 0.01, 0.01).unwrap(), vec![0.0, 0.01]);
    }
}
