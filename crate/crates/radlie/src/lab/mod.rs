//! Seeded instance generators and one verifier per structural result,
//! producing deterministic machine-readable reports.
//!
//! Identical `(suite, spec, seed)` inputs give byte-identical reports
//! (excluding wall time): trials derive their RNG streams from
//! `(seed, trial index)`, run independently (possibly in parallel), and the
//! report is assembled in trial order.

pub mod gen;
pub mod oracle;
mod suites;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, TolerancePolicy};

/// Parameters of a verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Ambient matrix size (suites cap it further where stated).
    pub ambient_n: usize,
    /// Cap on generated Lie algebra dimensions.
    pub max_lie_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: TolerancePolicy,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            ambient_n: 6,
            max_lie_dim: 5,
            trials: 100,
            seed: 0,
            tol: TolerancePolicy::default(),
        }
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be >= 1".into()));
        }
        if self.ambient_n < 2 || self.ambient_n > 8 {
            return Err(Error::Precondition(
                "ambient size must lie in 2..=8 for the verification suites".into(),
            ));
        }
        if self.max_lie_dim == 0 || self.max_lie_dim > 6 {
            return Err(Error::Precondition(
                "Lie dimension cap must lie in 1..=6".into(),
            ));
        }
        Ok(())
    }
}

/// All verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteKind {
    T43,
    Prop42,
    Prop26,
    Lemma27,
    Lemma32,
    Lemma41,
    Ks,
    Rosenblum,
    Cor34,
    QuotientSpectrum,
    Radii,
    UnboundedExp,
    RadicalOracle,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 13] = [
        SuiteKind::T43,
        SuiteKind::Prop42,
        SuiteKind::Prop26,
        SuiteKind::Lemma27,
        SuiteKind::Lemma32,
        SuiteKind::Lemma41,
        SuiteKind::Ks,
        SuiteKind::Rosenblum,
        SuiteKind::Cor34,
        SuiteKind::QuotientSpectrum,
        SuiteKind::Radii,
        SuiteKind::UnboundedExp,
        SuiteKind::RadicalOracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::T43 => "t43",
            SuiteKind::Prop42 => "prop42",
            SuiteKind::Prop26 => "prop26",
            SuiteKind::Lemma27 => "lemma27",
            SuiteKind::Lemma32 => "lemma32",
            SuiteKind::Lemma41 => "lemma41",
            SuiteKind::Ks => "ks",
            SuiteKind::Rosenblum => "rosenblum",
            SuiteKind::Cor34 => "cor34",
            SuiteKind::QuotientSpectrum => "quotient-spectrum",
            SuiteKind::Radii => "radii",
            SuiteKind::UnboundedExp => "unbounded-exp",
            SuiteKind::RadicalOracle => "radical-oracle",
        }
    }

    pub fn parse(name: &str) -> Option<SuiteKind> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }
}

/// One violated assertion, reproducible from its seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub residual: f64,
    pub witness: Witness,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub family: String,
    pub n: usize,
    pub dims: Vec<usize>,
    pub detail: String,
}

/// Outcome of one suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub max_residual: f64,
    pub hypothesis_not_met: usize,
    pub tolerances: TolerancePolicy,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-trial accumulator used by the verifiers.
#[derive(Debug, Clone)]
pub(crate) struct TrialOutcome {
    pub witness_family: &'static str,
    pub n: usize,
    pub dims: Vec<usize>,
    pub violations: Vec<(f64, String)>,
    pub max_residual: f64,
    pub hypothesis_not_met: bool,
}

impl TrialOutcome {
    pub fn new(family: &'static str, n: usize) -> Self {
        Self {
            witness_family: family,
            n,
            dims: Vec::new(),
            violations: Vec::new(),
            max_residual: 0.0,
            hypothesis_not_met: false,
        }
    }

    /// Record a residual-style assertion: violated when above threshold.
    pub fn check(&mut self, residual: f64, threshold: f64, detail: impl FnOnce() -> String) {
        if residual.is_nan() || residual > threshold {
            self.violations.push((residual, detail()));
        }
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        }
    }

    /// Record a boolean assertion.
    pub fn require(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.violations.push((f64::INFINITY, detail()));
        }
    }
}

/// Run one suite with the given parameters.
pub fn run_suite(kind: SuiteKind, spec: &InstanceSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let start = std::time::Instant::now();

    let outcomes: Vec<(usize, Result<TrialOutcome>)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| (trial, suites::run_trial(kind, spec, trial)))
        .collect();

    let mut failures = Vec::new();
    let mut max_residual = 0.0f64;
    let mut hypothesis_not_met = 0usize;
    for (trial, outcome) in outcomes {
        let outcome = outcome.map_err(|e| {
            Error::NumericalFailure(format!(
                "suite {} trial {trial} (seed {}): {e}",
                kind.name(),
                gen::trial_seed(spec.seed, trial)
            ))
        })?;
        max_residual = max_residual.max(outcome.max_residual);
        if outcome.hypothesis_not_met {
            hypothesis_not_met += 1;
        }
        for (residual, detail) in outcome.violations {
            failures.push(Failure {
                trial,
                seed: gen::trial_seed(spec.seed, trial),
                residual,
                witness: Witness {
                    family: outcome.witness_family.to_string(),
                    n: outcome.n,
                    dims: outcome.dims.clone(),
                    detail,
                },
            });
        }
    }

    Ok(VerificationReport {
        suite: kind.name().to_string(),
        trials: spec.trials,
        failures,
        max_residual,
        hypothesis_not_met,
        tolerances: spec.tol,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Run every suite with the same parameters.
pub fn run_all(spec: &InstanceSpec) -> Result<Vec<VerificationReport>> {
    SuiteKind::ALL
        .iter()
        .map(|&kind| run_suite(kind, spec))
        .collect()
}
