//! Observables, error propagation, the quantum Cramér–Rao bound, and seeded
//! Monte Carlo estimation with feedback to the sweet spot.
//!
//! Each catalog observable comes with its spectral outcome model (eigenvalues
//! plus complete orthogonal projectors) so Born-rule sampling, moment
//! inversion and error propagation all share one description.

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::{output_derivative, output_state, PhaseScenario};
use crate::fisher::{golden_argmax, qfi_scenario};
use crate::matcore::CMat;
use crate::par;
use crate::qstate::{bell_basis, density, PureState};
use crate::rng::CounterRng;
use crate::{Error, Result};

/// Slopes below this are treated as stationary operating points.
const SLOPE_FLOOR: f64 = 1e-10;

/// Measurement observables with known saturation scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableId {
    /// O = Π_ψ + 2|Φ⁺⟩⟨Φ⁺| on probe ⊗ ancilla, with
    /// Π_ψ = |01⟩⟨01| + |10⟩⟨10|.
    AdAncilla,
    /// O = |+⟩⟨+| on a single probe.
    DepolarizingSingle,
    /// O = |Φ⁻⟩⟨Φ⁻| + |Ψ⁻⟩⟨Ψ⁻| on probe ⊗ ancilla.
    PauliAncilla,
    /// O = 2|N⟩⟨N| + Σ on two probes and two ancillas, with
    /// |N⟩ = (|0000⟩ − |1111⟩)/√2 and
    /// Σ = |0011⟩⟨0011| + |0111⟩⟨0111| + |1011⟩⟨1011|.
    AdNoon4,
}

impl ObservableId {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ad-ancilla" => Ok(ObservableId::AdAncilla),
            "depolarizing-single" => Ok(ObservableId::DepolarizingSingle),
            "pauli-ancilla" => Ok(ObservableId::PauliAncilla),
            "ad-noon4" => Ok(ObservableId::AdNoon4),
            other => Err(Error::UnknownObservable(other.to_string())),
        }
    }
}

/// A Hermitian observable with its spectral outcome model.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: CMat,
    eigenvalues: Vec<f64>,
    projectors: Vec<CMat>,
    /// Open interval of operating phases on which ⟨O⟩(φ) is monotone.
    branch: (f64, f64),
}

impl Observable {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[CMat] {
        &self.projectors
    }

    pub fn branch(&self) -> (f64, f64) {
        self.branch
    }

    pub fn n_outcomes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// ⟨O⟩ on a state.
    pub fn mean(&self, rho: &CMat) -> f64 {
        self.matrix.mul(rho).trace().re
    }

    /// ⟨O²⟩ − ⟨O⟩² on a state.
    pub fn variance(&self, rho: &CMat) -> f64 {
        let mean = self.mean(rho);
        let mean_sq: f64 = self
            .eigenvalues
            .iter()
            .zip(self.projectors.iter())
            .map(|(l, p)| l * l * p.mul(rho).trace().re)
            .sum();
        mean_sq - mean * mean
    }

    /// Born-rule outcome probabilities tr(Π_k ρ), clamped at zero.
    pub fn outcome_probabilities(&self, rho: &CMat) -> Vec<f64> {
        self.projectors
            .iter()
            .map(|p| p.mul(rho).trace().re.max(0.0))
            .collect()
    }
}

fn projector_of(states: &[&PureState]) -> CMat {
    let dim = states[0].dim();
    let mut acc = CMat::zeros(dim);
    for s in states {
        acc = acc.add(&density(s));
    }
    acc
}

/// Builds a catalog observable with its spectral decomposition.
pub fn observable_catalog(id: ObservableId) -> Observable {
    use std::f64::consts::PI;
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    match id {
        ObservableId::AdAncilla => {
            let [phi_plus, phi_minus, _, _] = bell_basis();
            let pi_psi = projector_of(&[&PureState::basis(2, 1), &PureState::basis(2, 2)]);
            let p2 = density(&phi_plus);
            let p0 = density(&phi_minus);
            let matrix = pi_psi.add(&p2.scale_re(2.0));
            Observable {
                matrix,
                eigenvalues: vec![0.0, 1.0, 2.0],
                projectors: vec![p0, pi_psi, p2],
                branch: (0.0, PI),
            }
        }
        ObservableId::DepolarizingSingle => {
            let c = |re: f64| Complex64::new(re, 0.0);
            let plus = PureState::new(1, vec![c(inv), c(inv)]).expect("unit state");
            let minus = PureState::new(1, vec![c(inv), c(-inv)]).expect("unit state");
            let p1 = density(&plus);
            let p0 = density(&minus);
            Observable {
                matrix: p1.clone(),
                eigenvalues: vec![0.0, 1.0],
                projectors: vec![p0, p1],
                branch: (0.0, PI),
            }
        }
        ObservableId::PauliAncilla => {
            let [phi_plus, phi_minus, psi_plus, psi_minus] = bell_basis();
            let p1 = projector_of(&[&phi_minus, &psi_minus]);
            let p0 = projector_of(&[&phi_plus, &psi_plus]);
            Observable {
                matrix: p1.clone(),
                eigenvalues: vec![0.0, 1.0],
                projectors: vec![p0, p1],
                branch: (0.0, PI),
            }
        }
        ObservableId::AdNoon4 => {
            let c = |re: f64| Complex64::new(re, 0.0);
            let mut amps = vec![c(0.0); 16];
            amps[0] = c(inv);
            amps[15] = c(-inv);
            let n_state = PureState::new(4, amps).expect("unit state");
            let p2 = density(&n_state);
            // Basis projectors flagging decayed probes: |0011⟩, |0111⟩, |1011⟩.
            let sigma = projector_of(&[
                &PureState::basis(4, 0b0011),
                &PureState::basis(4, 0b0111),
                &PureState::basis(4, 0b1011),
            ]);
            let p0 = CMat::identity(16).sub(&p2).sub(&sigma);
            let matrix = p2.scale_re(2.0).add(&sigma);
            Observable {
                matrix,
                eigenvalues: vec![0.0, 1.0, 2.0],
                projectors: vec![p0, sigma, p2],
                // ⟨O⟩ has period π in φ; the rising half-branch is (0, π/2).
                branch: (0.0, PI / 2.0),
            }
        }
    }
}

/// Single-shot variance Δφ² = ΔO² / (d⟨O⟩/dφ)² at the scenario's phase.
///
/// The slope is computed analytically as tr(O ρ'_φ). Operating points with
/// |slope| below 1e−10 are rejected as unusable.
pub fn error_propagation_variance(s: &PhaseScenario, o: &Observable) -> Result<f64> {
    let rho = output_state(s);
    let drho = output_derivative(s);
    let slope = o.matrix.mul(&drho).trace().re;
    if slope.abs() < SLOPE_FLOOR {
        return Err(Error::StationaryPoint(SLOPE_FLOOR));
    }
    Ok(o.variance(&rho) / (slope * slope))
}

/// Variance bound 1/(ν·J) of any unbiased estimator over ν repetitions.
pub fn qcr_bound(s: &PhaseScenario, nu: u64) -> Result<f64> {
    if nu == 0 {
        return Err(Error::Domain("ν must be at least 1".into()));
    }
    let j = qfi_scenario(s)?;
    if j <= 0.0 {
        return Err(Error::ZeroInformation);
    }
    Ok(1.0 / (nu as f64 * j))
}

/// Operating phase minimizing the error-propagation variance on the
/// observable's monotone branch.
///
/// When the variance landscape is flat (every operating point saturates,
/// e.g. a noiseless probe) the branch midpoint is returned as the
/// conventional operating point.
pub fn sweet_spot(template: &PhaseScenario, o: &Observable) -> f64 {
    let (a, b) = o.branch;
    // Stay clear of the branch ends: slopes vanish there and ΔO²/(slope)²
    // degenerates to cancellation noise.
    let margin = 1e-3 * (b - a);
    let neg_var = |phi: f64| match error_propagation_variance(&template.at_phi(phi), o) {
        Ok(v) => -v,
        Err(_) => f64::NEG_INFINITY,
    };
    let candidate = golden_argmax(&neg_var, a + margin, b - margin, 1e-10);
    let mid = 0.5 * (a + b);
    let at_candidate = neg_var(candidate);
    let at_mid = neg_var(mid);
    // Trace arithmetic leaves ~1e−10 relative noise on the variance, so a
    // candidate must beat the midpoint by more than that to displace it.
    if at_mid >= at_candidate - 1e-8 * at_candidate.abs().max(1.0) {
        mid
    } else {
        candidate
    }
}

/// ν Born-rule draws from tr(Π_k ρ_φ), reproducible for a fixed seed and
/// independent of the worker count.
pub fn sample_outcomes(s: &PhaseScenario, o: &Observable, nu: u64, seed: u64) -> Vec<u64> {
    sample_outcomes_with_workers(s, o, nu, seed, par::worker_count_from_env())
}

/// As `sample_outcomes`, with an explicit worker count.
pub fn sample_outcomes_with_workers(
    s: &PhaseScenario,
    o: &Observable,
    nu: u64,
    seed: u64,
    workers: usize,
) -> Vec<u64> {
    let probs = o.outcome_probabilities(&output_state(s));
    sample_from_probs(&probs, nu, CounterRng::new(seed), workers)
}

/// ν i.i.d. draws from an arbitrary finite outcome distribution.
pub fn sample_distribution(probs: &[f64], nu: u64, seed: u64) -> Vec<u64> {
    sample_from_probs(
        probs,
        nu,
        CounterRng::new(seed),
        par::worker_count_from_env(),
    )
}

/// Draw i of the stream is a pure function of (seed, i), so partial sums over
/// any index partition merge to the single-worker counts.
fn sample_from_probs(probs: &[f64], nu: u64, rng: CounterRng, workers: usize) -> Vec<u64> {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;

    let workers = workers.max(1);
    let chunk = nu.div_ceil(workers as u64).max(1);
    let n_chunks = nu.div_ceil(chunk) as usize;
    let partials = par::map_indexed(n_chunks, workers, |c| {
        let start = c as u64 * chunk;
        let end = ((c as u64 + 1) * chunk).min(nu);
        let mut counts = vec![0u64; probs.len()];
        for i in start..end {
            let u = rng.uniform(i) * total;
            let k = cumulative
                .iter()
                .position(|&edge| u < edge)
                .unwrap_or(probs.len() - 1);
            counts[k] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; probs.len()];
    for part in partials {
        for (slot, c) in counts.iter_mut().zip(part.iter()) {
            *slot += c;
        }
    }
    counts
}

/// Method-of-moments phase estimate from outcome counts.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiEstimate {
    pub phi: f64,
    /// Set when the empirical mean fell outside the range of ⟨O⟩ on the
    /// branch and the estimate was clipped to the nearest endpoint.
    pub clipped: bool,
}

/// Solves  empirical mean = ⟨O⟩(φ)  for φ by bisection on the observable's
/// monotone branch. Out-of-range means clip to the nearest endpoint and are
/// flagged.
pub fn invert_estimate(counts: &[u64], template: &PhaseScenario, o: &Observable) -> PhiEstimate {
    let nu: u64 = counts.iter().sum();
    let mean = counts
        .iter()
        .zip(o.eigenvalues.iter())
        .map(|(&c, &l)| c as f64 * l)
        .sum::<f64>()
        / nu.max(1) as f64;
    invert_mean(mean, template, o)
}

/// As `invert_estimate`, starting from an already-computed mean.
pub fn invert_mean(mean: f64, template: &PhaseScenario, o: &Observable) -> PhiEstimate {
    let (a, b) = o.branch;
    let f = |phi: f64| o.mean(&output_state(&template.at_phi(phi)));
    let fa = f(a);
    let fb = f(b);
    let (lo_val, hi_val) = if fa < fb { (fa, fb) } else { (fb, fa) };
    if mean <= lo_val {
        return PhiEstimate {
            phi: if fa < fb { a } else { b },
            clipped: mean < lo_val,
        };
    }
    if mean >= hi_val {
        return PhiEstimate {
            phi: if fa < fb { b } else { a },
            clipped: mean > hi_val,
        };
    }
    let (mut lo, mut hi) = (a, b);
    let increasing = fb > fa;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm > mean) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    PhiEstimate {
        phi: 0.5 * (lo + hi),
        clipped: false,
    }
}

/// Record of one seeded Monte Carlo estimation run.
#[derive(Debug, Clone, Serialize)]
pub struct EstimationRun {
    pub seed: u64,
    /// Total repetition count ν over all rounds.
    pub nu: u64,
    /// Outcome counts per round.
    pub counts: Vec<Vec<u64>>,
    /// Control phase applied in each round.
    pub feedback_phases: Vec<f64>,
    /// Pooled estimate of the true phase.
    pub estimate: f64,
    /// Variance of the pooled estimator (customary variance).
    pub sample_variance: f64,
}

/// Runs `rounds` measurement rounds of `shots_per_round` shots each against
/// the scenario's (hidden) true phase, steering the operating point toward
/// the observable's sweet spot with a damped feedback phase.
///
/// Round r measures at φ_true + c_r; its counts give a method-of-moments
/// estimate of φ_true, rounds are pooled by inverse-variance weighting, and
/// the control is updated as c ← c + 0.5·((φ* − estimate) − c) where φ* is
/// the sweet spot.
pub fn adaptive_run(
    s: &PhaseScenario,
    o: &Observable,
    rounds: usize,
    shots_per_round: u64,
    seed: u64,
) -> Result<EstimationRun> {
    if rounds == 0 || shots_per_round == 0 {
        return Err(Error::Domain(
            "adaptive run needs at least one round and one shot".into(),
        ));
    }
    let phi_true = s.phi;
    let target = sweet_spot(s, o);
    let rng = CounterRng::new(seed);
    let workers = par::worker_count_from_env();

    let mut control = 0.0f64;
    let mut counts_per_round = Vec::with_capacity(rounds);
    let mut controls = Vec::with_capacity(rounds);
    let mut weight_sum = 0.0;
    let mut weighted_estimate = 0.0;

    for round in 0..rounds {
        let operating = s.at_phi(phi_true + control);
        let round_rng = rng.derive(round as u64);
        let probs = o.outcome_probabilities(&output_state(&operating));
        let counts = sample_from_probs(&probs, shots_per_round, round_rng, workers);

        let est_op = invert_estimate(&counts, s, o);
        let est_true = est_op.phi - control;

        // Empirical outcome variance with the analytic slope at the
        // estimated operating point.
        let n = shots_per_round as f64;
        let mean: f64 = counts
            .iter()
            .zip(o.eigenvalues.iter())
            .map(|(&c, &l)| c as f64 * l)
            .sum::<f64>()
            / n;
        let mean_sq: f64 = counts
            .iter()
            .zip(o.eigenvalues.iter())
            .map(|(&c, &l)| c as f64 * l * l)
            .sum::<f64>()
            / n;
        let var_emp = (mean_sq - mean * mean).max(1e-12);
        let slope = o
            .matrix
            .mul(&output_derivative(&s.at_phi(est_op.phi)))
            .trace()
            .re;
        let weight = if slope.abs() < SLOPE_FLOOR {
            0.0
        } else {
            n * slope * slope / var_emp
        };
        if weight > 0.0 {
            weight_sum += weight;
            weighted_estimate += weight * est_true;
        }

        counts_per_round.push(counts);
        controls.push(control);

        let pooled = if weight_sum > 0.0 {
            weighted_estimate / weight_sum
        } else {
            est_true
        };
        control += 0.5 * ((target - pooled) - control);
    }

    let estimate = if weight_sum > 0.0 {
        weighted_estimate / weight_sum
    } else {
        f64::NAN
    };
    let sample_variance = if weight_sum > 0.0 {
        1.0 / weight_sum
    } else {
        f64::INFINITY
    };
    Ok(EstimationRun {
        seed,
        nu: rounds as u64 * shots_per_round,
        counts: counts_per_round,
        feedback_phases: controls,
        estimate,
        sample_variance,
    })
}
