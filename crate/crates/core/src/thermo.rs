//! Thermal states and free-energy bookkeeping.
//!
//! Free energy is `F(ρ, H) = Tr(Hρ) − T S(ρ)` with the von Neumann entropy
//! in nats. `ΔF(ρ, H) = F(ρ, H) − F(ρ_th, H)` is the excess over the Gibbs
//! state at the same temperature and is non-negative.

use crate::qmath::{
    eig_hermitian, expectation, partial_trace, BipartiteSpace, Operator, Subsystem,
};
use crate::{Error, Result};

/// Temperatures `k_B T / ħω` below this are treated as exactly zero.
pub const ZERO_TEMPERATURE_CUTOFF: f64 = 1e-8;

/// Eigenvalues in `[-CLIP_TOL, 0)` are clipped to zero; anything lower is an error.
pub const CLIP_TOL: f64 = 1e-12;

/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;

/// Slack for the non-negativity of `ΔF` and of the mutual information.
pub const NONNEG_TOL: f64 = 1e-10;

/// Relative gap below which eigenvalues count as one ground level at `T = 0`.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Bath temperature in units of `ħω / k_B`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Temperature {
    #[default]
    Zero,
    Positive(f64),
}

impl Temperature {
    pub fn zero() -> Self {
        Temperature::Zero
    }

    /// Values below [`ZERO_TEMPERATURE_CUTOFF`] map to [`Temperature::Zero`].
    pub fn new(kt: f64) -> Result<Self> {
        if !kt.is_finite() || kt < 0.0 {
            return Err(Error::InvalidTemperature(kt));
        }
        if kt < ZERO_TEMPERATURE_CUTOFF {
            Ok(Temperature::Zero)
        } else {
            Ok(Temperature::Positive(kt))
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Temperature::Zero => 0.0,
            Temperature::Positive(kt) => kt,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Temperature::Zero)
    }
}

/// A Gibbs state together with the Hamiltonian and temperature behind it.
#[derive(Clone, Debug)]
pub struct ThermalEnsemble {
    hamiltonian: Operator,
    temperature: Temperature,
    state: Operator,
    spectrum: Vec<f64>,
    populations: Vec<f64>,
    free_energy: f64,
}

impl ThermalEnsemble {
    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    pub fn state(&self) -> &Operator {
        &self.state
    }

    pub fn into_state(self) -> Operator {
        self.state
    }

    /// Hamiltonian eigenvalues, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Occupation of each eigenvalue in [`Self::spectrum`].
    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectrum[0]
    }

    /// Number of levels sharing the ground energy within [`DEGENERACY_TOL`].
    pub fn ground_degeneracy(&self) -> usize {
        ground_degeneracy(&self.spectrum)
    }

    /// `F(ρ_th, H)`: `−T ln Z`, or the ground energy at `T = 0`.
    pub fn free_energy(&self) -> f64 {
        self.free_energy
    }

    /// `ΔF(ρ, H)` measured against this ensemble.
    pub fn delta_f(&self, rho: &Operator) -> Result<f64> {
        let f = free_energy(rho, &self.hamiltonian, self.temperature)?;
        let d = f - self.free_energy;
        if d < -NONNEG_TOL {
            return Err(Error::GibbsViolation { deficit: -d });
        }
        Ok(d.max(0.0))
    }
}

fn ground_degeneracy(spectrum: &[f64]) -> usize {
    let e0 = spectrum[0];
    let tol = DEGENERACY_TOL * e0.abs().max(1.0);
    spectrum.iter().take_while(|&&e| e - e0 <= tol).count()
}

/// Gibbs state `e^{−H/T}/Z`; at `T = 0`, the uniform mixture over the
/// ground eigenspace.
pub fn gibbs_state(h: &Operator, t: Temperature) -> Result<ThermalEnsemble> {
    let eig = eig_hermitian(h)?;
    let spectrum = eig.eigenvalues().to_vec();
    let e0 = spectrum[0];

    let (populations, free_energy) = match t {
        Temperature::Zero => {
            let g = ground_degeneracy(&spectrum);
            let p: Vec<f64> = (0..spectrum.len())
                .map(|k| if k < g { 1.0 / g as f64 } else { 0.0 })
                .collect();
            (p, e0)
        }
        Temperature::Positive(kt) => {
            // Shift by the ground energy so the largest weight is exactly 1.
            let w: Vec<f64> = spectrum.iter().map(|&e| (-(e - e0) / kt).exp()).collect();
            let z: f64 = w.iter().sum();
            (w.iter().map(|x| x / z).collect(), e0 - kt * z.ln())
        }
    };

    let state = eig.weighted_sum(&populations);
    Ok(ThermalEnsemble {
        hamiltonian: h.clone(),
        temperature: t,
        state,
        spectrum,
        populations,
        free_energy,
    })
}

/// `−Σ p ln p` with `0 ln 0 = 0`, over an already validated spectrum.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    let s: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    s.max(0.0)
}

/// Eigenvalues of a density matrix, validated and clipped.
pub fn state_spectrum(rho: &Operator) -> Result<Vec<f64>> {
    rho.ensure_hermitian()?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidState {
            reason: format!("trace {tr} differs from 1"),
        });
    }
    let eig = eig_hermitian(rho)?;
    eig.eigenvalues()
        .iter()
        .map(|&l| {
            if l < -CLIP_TOL {
                Err(Error::InvalidState {
                    reason: format!("negative eigenvalue {l:e}"),
                })
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// Von Neumann entropy `−Tr(ρ ln ρ)` in nats.
pub fn von_neumann_entropy(rho: &Operator) -> Result<f64> {
    Ok(shannon_entropy(&state_spectrum(rho)?))
}

/// `F(ρ, H) = Tr(Hρ) − T S(ρ)`. At `T = 0` the entropy is not evaluated.
pub fn free_energy(rho: &Operator, h: &Operator, t: Temperature) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    h.ensure_hermitian()?;
    let energy = expectation(h, rho)?;
    match t {
        Temperature::Zero => Ok(energy),
        Temperature::Positive(kt) => Ok(energy - kt * von_neumann_entropy(rho)?),
    }
}

/// `ΔF(ρ, H)`, building the reference Gibbs state internally.
pub fn delta_f(rho: &Operator, h: &Operator, t: Temperature) -> Result<f64> {
    gibbs_state(h, t)?.delta_f(rho)
}

/// `S(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)` in nats.
pub fn mutual_information(rho_s: &Operator, space: BipartiteSpace) -> Result<f64> {
    let rho_a = partial_trace(rho_s, space, Subsystem::A)?;
    let rho_b = partial_trace(rho_s, space, Subsystem::B)?;
    let mi =
        von_neumann_entropy(&rho_a)? + von_neumann_entropy(&rho_b)? - von_neumann_entropy(rho_s)?;
    if mi < -NONNEG_TOL {
        return Err(Error::NegativeMutualInformation { value: mi });
    }
    Ok(mi.max(0.0))
}
