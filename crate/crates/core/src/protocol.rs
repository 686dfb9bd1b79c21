//! One run of the thermalization protocol.
//!
//! * `t₁`: A and B sit in their local Gibbs states, no interaction.
//! * `t₂`: `H_I` is switched on without touching the state, which is still
//!   `ρ_A^th ⊗ ρ_B^th`.
//! * `t₃`: the pair has relaxed to the Gibbs state of `H_A + H_B + H_I`.
//! * The interaction is switched off again. The local marginals of the `t₃`
//!   state carry the extracted work
//!   `W = ΔF(ρ_A^rth, H_A) + ΔF(ρ_B^rth, H_B) + T S(A:B)`,
//!   which never exceeds `⟨H_I⟩_{t₂} − ⟨H_I⟩_{t₃}`.
//!
//! The switching steps are instantaneous quenches and no dynamics are simulated.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::par::Execution;
use crate::qmath::{
    expectation, partial_trace, swap_parties, tensor, BipartiteSpace, Operator, Subsystem,
};
use crate::thermo::{
    gibbs_state, shannon_entropy, von_neumann_entropy, Temperature, ThermalEnsemble,
};
use crate::{Error, Result};

/// `|bound|` at or below this leaves the efficiency undefined.
pub const EFFICIENCY_EPS: f64 = 1e-12;

/// Slack on `work ≤ bound` and `efficiency ≤ 1`.
pub const BOUND_TOL: f64 = 1e-9;

/// Local Hamiltonians, interaction and bath temperature of one protocol run.
#[derive(Clone, Debug)]
pub struct ProtocolInput {
    h_a: Operator,
    h_b: Operator,
    h_i: Operator,
    temperature: Temperature,
    space: BipartiteSpace,
}

impl ProtocolInput {
    /// Validates dimensions and Hermiticity. The bipartition is read off
    /// `h_a` and `h_b`; `h_i` must live on the composite space.
    pub fn new(
        h_a: Operator,
        h_b: Operator,
        h_i: Operator,
        temperature: Temperature,
    ) -> Result<Self> {
        let space = BipartiteSpace::new(h_a.dim(), h_b.dim())?;
        if h_i.dim() != space.dim() {
            return Err(Error::InvalidBipartition {
                d_a: space.d_a(),
                d_b: space.d_b(),
                composite: h_i.dim(),
            });
        }
        h_a.ensure_hermitian()?;
        h_b.ensure_hermitian()?;
        h_i.ensure_hermitian()?;
        Ok(Self {
            h_a,
            h_b,
            h_i,
            temperature,
            space,
        })
    }

    pub fn h_a(&self) -> &Operator {
        &self.h_a
    }

    pub fn h_b(&self) -> &Operator {
        &self.h_b
    }

    pub fn h_i(&self) -> &Operator {
        &self.h_i
    }

    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    pub fn space(&self) -> BipartiteSpace {
        self.space
    }

    /// `H_A ⊗ 1 + 1 ⊗ H_B`.
    pub fn free_hamiltonian(&self) -> Operator {
        let a = tensor(&self.h_a, &Operator::identity(self.space.d_b()));
        let b = tensor(&Operator::identity(self.space.d_a()), &self.h_b);
        a.add(&b).expect("dimensions fixed by construction")
    }

    /// `H_A ⊗ 1 + 1 ⊗ H_B + H_I`.
    pub fn total_hamiltonian(&self) -> Operator {
        self.free_hamiltonian()
            .add(&self.h_i)
            .expect("dimensions fixed by construction")
    }

    /// Same physical setup with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            h_a: self.h_b.clone(),
            h_b: self.h_a.clone(),
            h_i: swap_parties(&self.h_i, self.space).expect("dimensions fixed by construction"),
            temperature: self.temperature,
            space: self.space.swapped(),
        }
    }

    /// Same input with `H_I` scaled by `s`.
    pub fn with_coupling_scale(&self, s: f64) -> Self {
        Self {
            h_i: self.h_i.scale(s),
            ..self.clone()
        }
    }

    pub fn with_temperature(&self, temperature: Temperature) -> Self {
        Self {
            temperature,
            ..self.clone()
        }
    }
}

/// Scalar outputs of one protocol run, energies in units of `ħω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolReport {
    pub work: f64,
    /// `work` without the mutual-information term.
    pub work_local_only: f64,
    /// `⟨H_I⟩_{t₂} − ⟨H_I⟩_{t₃}`.
    pub bound: f64,
    /// `work / bound`, absent when the bound vanishes.
    pub efficiency: Option<f64>,
    pub delta_f_a: f64,
    pub delta_f_b: f64,
    /// `T · S(A:B)`; exactly zero at `T = 0`.
    pub mi_term: f64,
    pub hi_t2: f64,
    pub hi_t3: f64,
}

/// A protocol run with the intermediate states kept around.
#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub report: ProtocolReport,
    pub local_a: ThermalEnsemble,
    pub local_b: ThermalEnsemble,
    /// Global Gibbs state at `t₃`.
    pub global: ThermalEnsemble,
    pub reduced_a: Operator,
    pub reduced_b: Operator,
}

impl ProtocolRun {
    pub fn evaluate(input: &ProtocolInput) -> Result<Self> {
        let t = input.temperature;
        let space = input.space;

        let local_a = gibbs_state(&input.h_a, t)?;
        let local_b = gibbs_state(&input.h_b, t)?;
        let rho_t2 = tensor(local_a.state(), local_b.state());

        let global = gibbs_state(&input.total_hamiltonian(), t)?;
        let reduced_a = partial_trace(global.state(), space, Subsystem::A)?;
        let reduced_b = partial_trace(global.state(), space, Subsystem::B)?;

        let delta_f_a = local_a.delta_f(&reduced_a)?;
        let delta_f_b = local_b.delta_f(&reduced_b)?;

        let mi_term = match t {
            Temperature::Zero => 0.0,
            Temperature::Positive(kt) => {
                // The global spectrum is known exactly from the Gibbs weights.
                let s_global = shannon_entropy(global.populations());
                let mi =
                    von_neumann_entropy(&reduced_a)? + von_neumann_entropy(&reduced_b)? - s_global;
                if mi < -crate::thermo::NONNEG_TOL {
                    return Err(Error::NegativeMutualInformation { value: mi });
                }
                kt * mi.max(0.0)
            }
        };

        let hi_t2 = expectation(&input.h_i, &rho_t2)?;
        let hi_t3 = expectation(&input.h_i, global.state())?;
        let bound = hi_t2 - hi_t3;
        let work_local_only = delta_f_a + delta_f_b;
        let work = work_local_only + mi_term;
        let efficiency = (bound.abs() > EFFICIENCY_EPS).then(|| work / bound);

        Ok(Self {
            report: ProtocolReport {
                work,
                work_local_only,
                bound,
                efficiency,
                delta_f_a,
                delta_f_b,
                mi_term,
                hi_t2,
                hi_t3,
            },
            local_a,
            local_b,
            global,
            reduced_a,
            reduced_b,
        })
    }
}

pub fn run_protocol(input: &ProtocolInput) -> Result<ProtocolReport> {
    ProtocolRun::evaluate(input).map(|run| run.report)
}

/// Outcome of checking `work ≤ bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    /// `bound − work`.
    pub margin: f64,
}

impl ProtocolReport {
    pub fn bound_check(&self) -> BoundCheck {
        let margin = self.bound - self.work;
        BoundCheck {
            holds: margin >= -BOUND_TOL,
            margin,
        }
    }

    /// True when the efficiency, if defined, does not exceed one.
    pub fn efficiency_capped(&self) -> bool {
        self.efficiency.is_none_or(|eta| eta <= 1.0 + BOUND_TOL)
    }
}

pub fn verify_bound(input: &ProtocolInput) -> Result<BoundCheck> {
    run_protocol(input).map(|r| r.bound_check())
}

/// Random Hermitian matrix with Gaussian entries, normalized to Frobenius
/// norm `norm` (which also bounds the operator norm).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, norm: f64) -> Operator {
    let raw = Operator::from_fn(dim, |_, _| {
        num_complex::Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = raw.hermitian_part();
    let frob = h.matrix().norm();
    if frob == 0.0 {
        return h;
    }
    h.scale(norm / frob)
}

/// Random full-rank density matrix `GG†/Tr(GG†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let g = Operator::from_fn(dim, |_, _| {
        num_complex::Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = g.mul(&g.adjoint()).expect("square");
    let tr = m.trace().re;
    m.scale(1.0 / tr).hermitian_part()
}

/// Settings for a randomized audit of the work bound.
#[derive(Clone, Copy, Debug)]
pub struct AuditConfig {
    pub count: usize,
    pub space: BipartiteSpace,
    pub temperature: Temperature,
    pub seed: u64,
    /// Upper limit on the Frobenius norm of the random `H_I`.
    pub max_coupling_norm: f64,
}

impl AuditConfig {
    pub fn new(count: usize, space: BipartiteSpace, temperature: Temperature, seed: u64) -> Self {
        Self {
            count,
            space,
            temperature,
            seed,
            max_coupling_norm: 2.0,
        }
    }

    /// The `index`-th sample. Each sample has its own ChaCha stream, so the
    /// draw does not depend on evaluation order.
    pub fn sample(&self, index: usize) -> ProtocolInput {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let (d_a, d_b) = (self.space.d_a(), self.space.d_b());
        let s_a = rng.random_range(0.5..=2.0);
        let s_b = rng.random_range(0.5..=2.0);
        let s_i = self.max_coupling_norm * (1.0 - rng.random::<f64>());
        let h_a = random_hermitian(&mut rng, d_a, s_a);
        let h_b = random_hermitian(&mut rng, d_b, s_b);
        let h_i = random_hermitian(&mut rng, d_a * d_b, s_i);
        ProtocolInput::new(h_a, h_b, h_i, self.temperature).expect("random Hermitian input")
    }
}

/// Per-sample audit record.
#[derive(Clone, Debug, PartialEq)]
pub enum AuditOutcome {
    Evaluated(ProtocolReport),
    Failed(Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditSummary {
    pub count: usize,
    pub min_margin: f64,
    pub median_margin: f64,
    pub max_efficiency: Option<f64>,
    /// `(sample index, margin)` for every bound violation beyond [`BOUND_TOL`].
    pub violations: Vec<(usize, f64)>,
    /// `(sample index, efficiency)` for every efficiency above `1 + BOUND_TOL`.
    pub efficiency_violations: Vec<(usize, f64)>,
    /// `(sample index, message)` for samples that failed to evaluate.
    pub failures: Vec<(usize, String)>,
}

impl AuditSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
            && self.efficiency_violations.is_empty()
            && self.failures.is_empty()
    }
}

impl fmt::Display for AuditSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples: {}", self.count)?;
        writeln!(f, "min_margin: {:.12e}", self.min_margin)?;
        writeln!(f, "median_margin: {:.12e}", self.median_margin)?;
        match self.max_efficiency {
            Some(eta) => writeln!(f, "max_efficiency: {eta:.12e}")?,
            None => writeln!(f, "max_efficiency: none")?,
        }
        writeln!(f, "violations: {}", self.violations.len())?;
        for (i, m) in &self.violations {
            writeln!(f, "  sample {i}: margin {m:.12e}")?;
        }
        writeln!(
            f,
            "efficiency_violations: {}",
            self.efficiency_violations.len()
        )?;
        for (i, eta) in &self.efficiency_violations {
            writeln!(f, "  sample {i}: efficiency {eta:.12e}")?;
        }
        writeln!(f, "failures: {}", self.failures.len())?;
        for (i, msg) in &self.failures {
            writeln!(f, "  sample {i}: {msg}")?;
        }
        Ok(())
    }
}

/// Evaluates every sample of `config`, in index order.
pub fn audit_outcomes(config: &AuditConfig, exec: Execution) -> Vec<AuditOutcome> {
    exec.map_range(config.count, |i| match run_protocol(&config.sample(i)) {
        Ok(r) => AuditOutcome::Evaluated(r),
        Err(e) => AuditOutcome::Failed(e),
    })
}

pub fn run_audit(config: &AuditConfig, exec: Execution) -> AuditSummary {
    summarize(&audit_outcomes(config, exec))
}

pub fn summarize(outcomes: &[AuditOutcome]) -> AuditSummary {
    let mut margins = Vec::with_capacity(outcomes.len());
    let mut violations = Vec::new();
    let mut efficiency_violations = Vec::new();
    let mut failures = Vec::new();
    let mut max_efficiency: Option<f64> = None;

    for (i, outcome) in outcomes.iter().enumerate() {
        match outcome {
            AuditOutcome::Evaluated(r) => {
                let check = r.bound_check();
                margins.push(check.margin);
                if !check.holds {
                    violations.push((i, check.margin));
                }
                if let Some(eta) = r.efficiency {
                    max_efficiency = Some(max_efficiency.map_or(eta, |m| m.max(eta)));
                }
                if !r.efficiency_capped() {
                    efficiency_violations.push((i, r.efficiency.unwrap_or(f64::NAN)));
                }
            }
            AuditOutcome::Failed(e) => failures.push((i, e.to_string())),
        }
    }

    margins.sort_by(f64::total_cmp);
    let min_margin = margins.first().copied().unwrap_or(f64::NAN);
    let median_margin = if margins.is_empty() {
        f64::NAN
    } else if margins.len() % 2 == 1 {
        margins[margins.len() / 2]
    } else {
        let k = margins.len() / 2;
        0.5 * (margins[k - 1] + margins[k])
    };

    AuditSummary {
        count: outcomes.len(),
        min_margin,
        median_margin,
        max_efficiency,
        violations,
        efficiency_violations,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_qubit(g: f64, kt: f64) -> ProtocolInput {
        let h = Operator::pauli_z().scale(0.5);
        let hi = tensor(&Operator::pauli_x(), &Operator::pauli_x()).scale(g);
        ProtocolInput::new(h.clone(), h, hi, Temperature::new(kt).unwrap()).unwrap()
    }

    #[test]
    fn no_interaction_is_a_no_op() {
        for kt in [0.0, 1.0] {
            let r = run_protocol(&two_qubit(0.0, kt)).unwrap();
            assert_abs_diff_eq!(r.work, 0.0, epsilon = 1e-12);
            assert_eq!(r.bound, 0.0);
            assert_eq!(r.efficiency, None);
            assert_abs_diff_eq!(
                verify_bound(&two_qubit(0.0, kt)).unwrap().margin,
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn input_validation() {
        let h = Operator::pauli_z();
        let bad_i = Operator::identity(3);
        assert!(matches!(
            ProtocolInput::new(h.clone(), h.clone(), bad_i, Temperature::Zero).unwrap_err(),
            Error::InvalidBipartition { composite: 3, .. }
        ));
        let non_herm = Operator::annihilation(4);
        assert!(matches!(
            ProtocolInput::new(h.clone(), h, non_herm, Temperature::Zero).unwrap_err(),
            Error::NotHermitian { .. }
        ));
    }

    #[test]
    fn zero_temperature_mi_term_is_exactly_zero() {
        let r = run_protocol(&two_qubit(0.5, 0.0)).unwrap();
        assert_eq!(r.mi_term, 0.0);
        assert_eq!(r.work, r.work_local_only);
        assert!(r.work > 0.0);
    }

    #[test]
    fn report_invariants_hold() {
        let r = run_protocol(&two_qubit(0.5, 1.0)).unwrap();
        assert_abs_diff_eq!(
            r.work,
            r.delta_f_a + r.delta_f_b + r.mi_term,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(r.bound, r.hi_t2 - r.hi_t3, epsilon = 1e-12);
        assert!(r.bound_check().holds);
        let eta = r.efficiency.unwrap();
        assert!(eta > 0.0 && eta <= 1.0);
    }

    #[test]
    fn audit_samples_are_reproducible() {
        let cfg = AuditConfig::new(4, BipartiteSpace::new(2, 3).unwrap(), Temperature::Zero, 9);
        assert_eq!(cfg.sample(2).h_i(), cfg.sample(2).h_i());
        assert_ne!(cfg.sample(1).h_i(), cfg.sample(2).h_i());
        assert!(cfg.sample(3).h_i().matrix().norm() <= 2.0 + 1e-12);
    }

    #[test]
    fn median_of_even_count() {
        let mk = |work: f64| {
            AuditOutcome::Evaluated(ProtocolReport {
                work,
                work_local_only: work,
                bound: 1.0,
                efficiency: Some(work),
                delta_f_a: work,
                delta_f_b: 0.0,
                mi_term: 0.0,
                hi_t2: 1.0,
                hi_t3: 0.0,
            })
        };
        let s = summarize(&[mk(0.1), mk(0.2), mk(0.3), mk(0.4)]);
        assert_abs_diff_eq!(s.median_margin, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(s.min_margin, 0.6, epsilon = 1e-15);
        assert_eq!(s.max_efficiency, Some(0.4));
        assert!(s.is_clean());
    }
}
