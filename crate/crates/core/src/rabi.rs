//! The resonant quantum Rabi model on a truncated Fock space.
//!
//! `H = (1/2) σ_z + a†a + g σ_x (a† + a)` in units of `ħω`. The two-level
//! system is subsystem A with basis ordering (excited, ground), so
//! `(1 + ⟨σ_z⟩)/2` is the excited population. The oscillator is subsystem B,
//! truncated to Fock levels `0..N`.
//!
//! At `T = 0` the protocol starts from `|g, 0⟩` and ends in the interacting
//! ground state, which gives
//! `W = (1 + ⟨σ_z⟩)/2 + ⟨n⟩ = E₀ + 1/2 − g⟨σ_x(a† + a)⟩` and
//! `η = −W / (g⟨σ_x(a† + a)⟩)`.

use crate::par::Execution;
use crate::protocol::{ProtocolInput, ProtocolRun, EFFICIENCY_EPS};
use crate::qmath::{eig_hermitian, expectation, tensor, BipartiteSpace, Operator};
use crate::thermo::{gibbs_state, Temperature, DEGENERACY_TOL};
use crate::{Error, Result};

/// Largest Fock cutoff [`auto_converge`] will try.
pub const CUTOFF_CEILING: usize = 1024;

pub const DEFAULT_CUTOFF: usize = 16;

pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiConfig {
    pub g_over_omega: f64,
    /// Oscillator levels `0..fock_cutoff`.
    pub fock_cutoff: usize,
    pub temperature: Temperature,
    /// Convergence threshold on work and efficiency, units of `ħω`.
    pub convergence_tol: f64,
}

impl RabiConfig {
    /// Zero temperature, default tolerance.
    pub fn new(g_over_omega: f64, fock_cutoff: usize) -> Result<Self> {
        let cfg = Self {
            g_over_omega,
            fock_cutoff,
            temperature: Temperature::Zero,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_temperature(self, temperature: Temperature) -> Self {
        Self {
            temperature,
            ..self
        }
    }

    pub fn with_tolerance(self, convergence_tol: f64) -> Self {
        Self {
            convergence_tol,
            ..self
        }
    }

    pub fn with_coupling(self, g_over_omega: f64) -> Self {
        Self {
            g_over_omega,
            ..self
        }
    }

    pub fn with_cutoff(self, fock_cutoff: usize) -> Self {
        Self {
            fock_cutoff,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_over_omega.is_finite() && self.g_over_omega >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "coupling g/omega must be finite and non-negative, got {}",
                self.g_over_omega
            )));
        }
        if self.fock_cutoff < 2 {
            return Err(Error::InvalidConfig(format!(
                "Fock cutoff must be at least 2, got {}",
                self.fock_cutoff
            )));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "convergence tolerance must be positive, got {}",
                self.convergence_tol
            )));
        }
        Ok(())
    }
}

/// The pieces of the Rabi Hamiltonian, split for the protocol.
#[derive(Clone, Debug)]
pub struct RabiHamiltonian {
    /// `σ_z / 2` on the qubit.
    pub h_a: Operator,
    /// `a†a` on the oscillator.
    pub h_b: Operator,
    /// `g σ_x ⊗ (a† + a)`.
    pub h_i: Operator,
    pub space: BipartiteSpace,
}

impl RabiHamiltonian {
    pub fn total(&self) -> Operator {
        let a = tensor(&self.h_a, &Operator::identity(self.space.d_b()));
        let b = tensor(&Operator::identity(2), &self.h_b);
        a.add(&b)
            .and_then(|h| h.add(&self.h_i))
            .expect("consistent dimensions")
    }

    pub fn protocol_input(&self, temperature: Temperature) -> Result<ProtocolInput> {
        ProtocolInput::new(
            self.h_a.clone(),
            self.h_b.clone(),
            self.h_i.clone(),
            temperature,
        )
    }
}

/// Position quadrature `a† + a` on `levels` Fock states.
pub fn quadrature(levels: usize) -> Operator {
    let a = Operator::annihilation(levels);
    a.add(&a.adjoint()).expect("same dimension")
}

pub fn build_rabi_hamiltonian(config: &RabiConfig) -> Result<RabiHamiltonian> {
    config.validate()?;
    let n = config.fock_cutoff;
    let space = BipartiteSpace::new(2, n)?;
    let h_i = tensor(&Operator::pauli_x(), &quadrature(n)).scale(config.g_over_omega);
    Ok(RabiHamiltonian {
        h_a: Operator::pauli_z().scale(0.5),
        h_b: Operator::number(n),
        h_i,
        space,
    })
}

/// Observables of the `t₃` state and the resulting work and efficiency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiPoint {
    pub config: RabiConfig,
    /// Lowest eigenvalue of the full Hamiltonian, `ħν₀` in units of `ħω`.
    pub ground_energy: f64,
    pub sz_mean: f64,
    pub n_mean: f64,
    /// `g⟨σ_x(a† + a)⟩_{t₃}`.
    pub hi_mean: f64,
    pub work: f64,
    pub work_local_only: f64,
    pub bound: f64,
    pub mi_term: f64,
    pub efficiency: Option<f64>,
    /// Population of the highest retained Fock level.
    pub top_level_population: f64,
    pub converged_cutoff: usize,
}

/// Evaluates one point at the configured cutoff.
///
/// Fails with [`Error::CutoffNotConverged`] when the highest Fock level holds
/// more than `convergence_tol` of the population.
pub fn evaluate_point(config: &RabiConfig) -> Result<RabiPoint> {
    let p = evaluate_unchecked(config)?;
    if p.top_level_population > config.convergence_tol {
        return Err(Error::CutoffNotConverged {
            cutoff: config.fock_cutoff,
            tail: p.top_level_population,
        });
    }
    Ok(p)
}

fn evaluate_unchecked(config: &RabiConfig) -> Result<RabiPoint> {
    let model = build_rabi_hamiltonian(config)?;
    match config.temperature {
        Temperature::Zero => ground_state_point(config, &model),
        Temperature::Positive(_) => thermal_point(config, &model),
    }
}

fn ground_state_point(config: &RabiConfig, model: &RabiHamiltonian) -> Result<RabiPoint> {
    let n = config.fock_cutoff;
    let space = model.space;
    let eig = eig_hermitian(&model.total())?;
    let energies = eig.eigenvalues();
    let e0 = energies[0];
    let tol = DEGENERACY_TOL * e0.abs().max(1.0);
    let degeneracy = energies.iter().take_while(|&&e| e - e0 <= tol).count();

    let sz_op = tensor(&Operator::pauli_z(), &Operator::identity(n));
    let n_op = tensor(&Operator::identity(2), &Operator::number(n));

    // Uniform average over the ground eigenspace, the T = 0 Gibbs state.
    let (mut sz, mut nm, mut hi, mut tail) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..degeneracy {
        let psi = eig.eigenvector(k);
        sz += sz_op.sandwich(&psi)?.re;
        nm += n_op.sandwich(&psi)?.re;
        hi += model.h_i.sandwich(&psi)?.re;
        tail += (0..2)
            .map(|q| psi[space.index(q, n - 1)].norm_sqr())
            .sum::<f64>();
    }
    let w = 1.0 / degeneracy as f64;
    let (sz, nm, hi, tail) = (sz * w, nm * w, hi * w, tail * w);

    // State at t₂: local ground states |g⟩ ⊗ |0⟩.
    let rho_a = gibbs_state(&model.h_a, Temperature::Zero)?;
    let rho_b = gibbs_state(&model.h_b, Temperature::Zero)?;
    let hi_t2 = expectation(&model.h_i, &tensor(rho_a.state(), rho_b.state()))?;

    let work = 0.5 * (1.0 + sz) + nm;
    Ok(RabiPoint {
        config: *config,
        ground_energy: e0,
        sz_mean: sz,
        n_mean: nm,
        hi_mean: hi,
        work,
        work_local_only: work,
        bound: hi_t2 - hi,
        mi_term: 0.0,
        efficiency: (hi.abs() > EFFICIENCY_EPS).then(|| -work / hi),
        top_level_population: tail,
        converged_cutoff: n,
    })
}

fn thermal_point(config: &RabiConfig, model: &RabiHamiltonian) -> Result<RabiPoint> {
    let n = config.fock_cutoff;
    let run = ProtocolRun::evaluate(&model.protocol_input(config.temperature)?)?;
    let r = run.report;
    Ok(RabiPoint {
        config: *config,
        ground_energy: run.global.ground_energy(),
        sz_mean: expectation(&Operator::pauli_z(), &run.reduced_a)?,
        n_mean: expectation(&Operator::number(n), &run.reduced_b)?,
        hi_mean: r.hi_t3,
        work: r.work,
        work_local_only: r.work_local_only,
        bound: r.bound,
        mi_term: r.mi_term,
        efficiency: r.efficiency,
        top_level_population: run.reduced_b.get(n - 1, n - 1).re,
        converged_cutoff: n,
    })
}

/// Doubles the cutoff from `config.fock_cutoff` until work and efficiency
/// change by at most `convergence_tol`, returning the larger evaluation.
pub fn auto_converge(config: &RabiConfig) -> Result<RabiPoint> {
    config.validate()?;
    if config.fock_cutoff * 2 > CUTOFF_CEILING {
        return Err(Error::ConvergenceCeiling {
            ceiling: CUTOFF_CEILING,
            delta: f64::INFINITY,
        });
    }
    let mut cutoff = config.fock_cutoff;
    let mut prev = evaluate_unchecked(config)?;
    let mut last_delta = f64::INFINITY;
    while cutoff * 2 <= CUTOFF_CEILING {
        cutoff *= 2;
        let next = evaluate_unchecked(&config.with_cutoff(cutoff))?;
        let dw = (next.work - prev.work).abs();
        let deta = match (prev.efficiency, next.efficiency) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        };
        if dw <= config.convergence_tol && deta <= config.convergence_tol {
            return Ok(next);
        }
        last_delta = dw;
        prev = next;
    }
    Err(Error::ConvergenceCeiling {
        ceiling: CUTOFF_CEILING,
        delta: last_delta,
    })
}

/// Second-order perturbation estimate `(W, η) ≈ (g²/2, 1/2)` for small `g/ω`.
pub fn perturbative_oracle(g_over_omega: f64) -> (f64, f64) {
    (0.5 * g_over_omega * g_over_omega, 0.5)
}

/// `g/ω ∈ {0.01, 0.02, …, 2.00}`.
pub fn default_grid() -> Vec<f64> {
    (1..=200).map(|k| k as f64 / 100.0).collect()
}

/// Converged points for every coupling in `grid`, in grid order.
pub fn sweep(grid: &[f64], template: &RabiConfig, exec: Execution) -> Vec<Result<RabiPoint>> {
    exec.map(grid, |&g| auto_converge(&template.with_coupling(g)))
}
