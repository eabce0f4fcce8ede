//! Quantum Fisher information: the general mixed-state evaluation over the
//! eigendecomposition of ρ_φ, the pure-state shortcut, and the catalog of
//! closed-form values used as cross-checking oracles.

use num_complex::Complex64;

use crate::channel::{output_derivative, output_state, PhaseScenario};
use crate::matcore::{eigh, CMat};
use crate::qstate::PureState;
use crate::{Error, Result};

/// J(ρ_φ) = Σ_{j,k: λ_j+λ_k≠0} 2|⟨j|ρ'_φ|k⟩|² / (λ_j + λ_k).
///
/// Eigenvalue pairs enter only when λ_j + λ_k exceeds
/// `1e−12 · max(1, λ_max)`; rank-deficient outputs would otherwise divide
/// rounding noise by rounding noise.
pub fn qfi(rho: &CMat, drho: &CMat) -> Result<f64> {
    if rho.dim() != drho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ρ has dimension {}, ρ' has dimension {}",
            rho.dim(),
            drho.dim()
        )));
    }
    let eig = eigh(rho)?;
    let n = rho.dim();
    let lambda_max = eig.values.iter().cloned().fold(0.0, f64::max);
    let cutoff = 1e-12 * lambda_max.max(1.0);

    // ρ' in the eigenbasis: W = V† ρ' V.
    let w = eig.vectors.adjoint().mul(drho).mul(&eig.vectors);

    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            let denom = eig.values[j] + eig.values[k];
            if denom > cutoff {
                total += 2.0 * w.at(j, k).norm_sqr() / denom;
            }
        }
    }
    Ok(total)
}

/// Pure-state shortcut 4(⟨ψ'|ψ'⟩ − |⟨ψ|ψ'⟩|²), used for noiseless checks.
pub fn qfi_pure(psi: &PureState, dpsi: &[Complex64]) -> f64 {
    let dd: f64 = dpsi.iter().map(|a| a.norm_sqr()).sum();
    let overlap: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(dpsi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    4.0 * (dd - overlap.norm_sqr())
}

/// Convenience composition of Eq-style QFI with the channel pipeline.
pub fn qfi_scenario(s: &PhaseScenario) -> Result<f64> {
    qfi(&output_state(s), &output_derivative(s))
}

/// Closed-form QFI expressions (and one upper bound) for the supported
/// channels and input families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormId {
    /// Amplitude damping, optimal single-qubit probe: 1 − η.
    AdSingle { eta: f64 },
    /// Amplitude damping, probe-ancilla pair at γ = 1/√2: 2(1−η)/(2−η).
    AdGammaHalf { eta: f64 },
    /// Amplitude damping, probe-ancilla pair optimized over γ:
    /// 4(1−η)/(√(1−η)+1)².
    AdGammaOpt { eta: f64 },
    /// Amplitude damping on a four-qubit NOON state (two probes, two
    /// ancillas), carrying an explicit cos(8φ) dependence.
    AdNoon4 { eta: f64, phi: f64 },
    /// Dephasing, single probe or ancilla-assisted alike: (1 − 2p3)².
    Dephasing { p3: f64 },
    /// Depolarizing, optimal single-qubit probe: (1 − p)².
    DepolarizingSingle { p: f64 },
    /// Depolarizing, probe maximally entangled with an ancilla:
    /// 2(1−p)²/(2−p).
    DepolarizingAncilla { p: f64 },
    /// General Pauli channel, single probe ε|0⟩+√(1−ε²)e^{iα}|1⟩.
    PauliNoAncilla {
        p1: f64,
        p2: f64,
        p3: f64,
        eps: f64,
        alpha: f64,
        phi: f64,
    },
    /// General Pauli channel, probe maximally entangled with an ancilla.
    PauliAncilla { p1: f64, p2: f64, p3: f64 },
    /// Upper bound N(1−η)/η on ancilla-less N-probe strategies, achievable
    /// in the high-noise regime. A bound, not a QFI.
    DurkinBound { n: usize, eta: f64 },
}

impl ClosedFormId {
    /// Stable identifier used in reports and dataset headers.
    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormId::AdSingle { .. } => "ad-single",
            ClosedFormId::AdGammaHalf { .. } => "ad-gamma-half",
            ClosedFormId::AdGammaOpt { .. } => "ad-gamma-opt",
            ClosedFormId::AdNoon4 { .. } => "ad-noon4",
            ClosedFormId::Dephasing { .. } => "dephasing",
            ClosedFormId::DepolarizingSingle { .. } => "depolarizing-single",
            ClosedFormId::DepolarizingAncilla { .. } => "depolarizing-ancilla",
            ClosedFormId::PauliNoAncilla { .. } => "pauli-no-ancilla",
            ClosedFormId::PauliAncilla { .. } => "pauli-ancilla",
            ClosedFormId::DurkinBound { .. } => "durkin-bound",
        }
    }
}

/// Evaluates a closed-form expression at its parameters.
pub fn closed_form(id: ClosedFormId) -> Result<f64> {
    match id {
        ClosedFormId::AdSingle { eta } => {
            check_prob("η", eta)?;
            Ok(1.0 - eta)
        }
        ClosedFormId::AdGammaHalf { eta } => {
            check_prob("η", eta)?;
            Ok(2.0 * (1.0 - eta) / (2.0 - eta))
        }
        ClosedFormId::AdGammaOpt { eta } => {
            check_prob("η", eta)?;
            let root = (1.0 - eta).sqrt();
            Ok(4.0 * (1.0 - eta) / ((root + 1.0) * (root + 1.0)))
        }
        ClosedFormId::AdNoon4 { eta, phi } => {
            check_prob("η", eta)?;
            Ok(ad_noon4_formula(eta, phi))
        }
        ClosedFormId::Dephasing { p3 } => {
            check_prob("p3", p3)?;
            let d = 1.0 - 2.0 * p3;
            Ok(d * d)
        }
        ClosedFormId::DepolarizingSingle { p } => {
            check_prob("p", p)?;
            Ok((1.0 - p) * (1.0 - p))
        }
        ClosedFormId::DepolarizingAncilla { p } => {
            check_prob("p", p)?;
            Ok(2.0 * (1.0 - p) * (1.0 - p) / (2.0 - p))
        }
        ClosedFormId::PauliNoAncilla {
            p1,
            p2,
            p3,
            eps,
            alpha,
            phi,
        } => {
            check_simplex(p1, p2, p3)?;
            check_prob("ε", eps)?;
            Ok(pauli_no_ancilla_formula(p1, p2, p3, eps, alpha, phi))
        }
        ClosedFormId::PauliAncilla { p1, p2, p3 } => {
            check_simplex(p1, p2, p3)?;
            Ok(pauli_ancilla_formula(p1, p2, p3))
        }
        ClosedFormId::DurkinBound { n, eta } => {
            check_prob("η", eta)?;
            if n == 0 {
                return Err(Error::Domain("bound needs at least one probe".into()));
            }
            if eta == 0.0 {
                return Err(Error::InfiniteBound);
            }
            Ok(n as f64 * (1.0 - eta) / eta)
        }
    }
}

/// The four-qubit NOON closed form
/// 8(η−1)²(2(η−1)²cos(8φ) + (η−2)η((η−2)η+2) + 2) / ((η−2)η+2)³.
fn ad_noon4_formula(eta: f64, phi: f64) -> f64 {
    let em1 = eta - 1.0;
    let u = (eta - 2.0) * eta;
    8.0 * em1 * em1 * (2.0 * em1 * em1 * (8.0 * phi).cos() + u * (u + 2.0) + 2.0)
        / ((u + 2.0) * (u + 2.0) * (u + 2.0))
}

/// The single-probe Pauli closed form J^(na).
fn pauli_no_ancilla_formula(p1: f64, p2: f64, p3: f64, eps: f64, alpha: f64, phi: f64) -> f64 {
    let e2 = eps * eps;
    let bracket = p1 * (2.0 - 4.0 * p3) + 4.0 * p3
        - 4.0 * p3 * (p2 + p3)
        - 1.0
        - 2.0 * p1 * p1
        - 2.0 * (p2 - 1.0) * p2
        + 2.0 * (p1 - p2) * (2.0 * (alpha + phi)).cos() * (p1 + p2 + 2.0 * p3 - 1.0);
    4.0 * e2 * (e2 - 1.0) * bracket
}

/// The ancilla-assisted Pauli closed form J^(a); its two terms take
/// the limit 0 at p1+p2 = 0 and p1+p2 = 1 respectively.
fn pauli_ancilla_formula(p1: f64, p2: f64, p3: f64) -> f64 {
    let s = p1 + p2;
    let first = if s > 0.0 {
        (p1 - p2) * (p1 - p2) / s
    } else {
        0.0
    };
    let t = p1 + p2 + 2.0 * p3 - 1.0;
    let second = if 1.0 - s > 0.0 {
        t * t / (1.0 - s)
    } else {
        0.0
    };
    first + second
}

/// Maximum of J^(na) over the input phase α at ε = 1/√2.
///
/// The α-dependence is linear in cos(2(α+φ)), so the stationary points
/// cos = ±1 bracket the maximum; a golden-section pass over α confirms it.
pub fn pauli_no_ancilla_optimized(p1: f64, p2: f64, p3: f64, phi: f64) -> Result<f64> {
    check_simplex(p1, p2, p3)?;
    let eps = std::f64::consts::FRAC_1_SQRT_2;
    let eval = |alpha: f64| pauli_no_ancilla_formula(p1, p2, p3, eps, alpha, phi);
    // α values putting cos(2(α+φ)) at +1 and −1.
    let a_plus = -phi;
    let a_minus = std::f64::consts::FRAC_PI_2 - phi;
    let mut best = eval(a_plus).max(eval(a_minus));
    let refined = golden_max(&eval, 0.0, std::f64::consts::PI, 1e-10);
    if refined > best {
        best = refined;
    }
    Ok(best)
}

/// Golden-section search for the maximum of `f` on [a, b].
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Argument of the maximum of `f` on [a, b] by golden-section search.
pub(crate) fn golden_argmax<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn check_simplex(p1: f64, p2: f64, p3: f64) -> Result<()> {
    check_prob("p1", p1)?;
    check_prob("p2", p2)?;
    check_prob("p3", p3)?;
    if p1 + p2 + p3 > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "p1 + p2 + p3 = {} exceeds 1",
            p1 + p2 + p3
        )));
    }
    Ok(())
}

/// One row of the four-qubit NOON formula audit.
#[derive(Debug, Clone)]
pub struct Noon4AuditRow {
    pub eta: f64,
    pub phi: f64,
    pub numeric: f64,
    pub closed_form: f64,
    /// Set when |numeric − closed_form| exceeds 1e−6.
    pub flagged: bool,
}

/// Compares the numeric QFI of (|0000⟩+|1111⟩)/√2 under amplitude damping on
/// two probes against the cos(8φ) closed form, point by point.
///
/// Both values are reported side by side rather than assuming either;
/// rows that disagree beyond 1e−6 are flagged.
pub fn noon4_formula_audit(etas: &[f64], phis: &[f64]) -> Result<Vec<Noon4AuditRow>> {
    use crate::channel::{make_channel, Layout, NoiseModel};
    use crate::qstate::{make_state, StateFamily};

    let mut rows = Vec::with_capacity(etas.len() * phis.len());
    for &eta in etas {
        let channel = make_channel(NoiseModel::AmplitudeDamping { eta })?;
        let input = make_state(&StateFamily::FourQubitNoon)?;
        for &phi in phis {
            let s = PhaseScenario::new(
                channel.clone(),
                input.clone(),
                Layout::two_probes_two_ancillas(),
                phi,
            )?;
            let numeric = qfi_scenario(&s)?;
            let expression = ad_noon4_formula(eta, phi);
            rows.push(Noon4AuditRow {
                eta,
                phi,
                numeric,
                closed_form: expression,
                flagged: (numeric - expression).abs() > 1e-6,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_channel, Layout, NoiseModel};
    use crate::qstate::{make_state, StateFamily};
    use crate::rng::CounterRng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn scenario(model: NoiseModel, family: StateFamily, layout: Layout, phi: f64) -> PhaseScenario {
        PhaseScenario::new(
            make_channel(model).unwrap(),
            make_state(&family).unwrap(),
            layout,
            phi,
        )
        .unwrap()
    }

    #[test]
    fn amplitude_damped_plus_state_has_qfi_one_minus_eta() {
        let s = scenario(
            NoiseModel::AmplitudeDamping { eta: 0.36 },
            StateFamily::Plus,
            Layout::single_probe(),
            FRAC_PI_2,
        );
        let j = qfi_scenario(&s).unwrap();
        assert!((j - 0.64).abs() < 1e-12, "J = {j}");
    }

    #[test]
    fn depolarized_bell_pair_qfi_at_half_strength() {
        let s = scenario(
            NoiseModel::Depolarizing { p: 0.5 },
            StateFamily::MaxEntangled,
            Layout::probe_with_ancilla(),
            FRAC_PI_2,
        );
        let j = qfi_scenario(&s).unwrap();
        assert!((j - 1.0 / 3.0).abs() < 1e-12, "J = {j}");
    }

    #[test]
    fn orthogonal_noise_keeps_full_information_with_an_ancilla() {
        let s = scenario(
            NoiseModel::Pauli {
                p1: 0.0,
                p2: 0.0,
                p3: 1.0,
            },
            StateFamily::MaxEntangled,
            Layout::probe_with_ancilla(),
            0.7,
        );
        let j = qfi_scenario(&s).unwrap();
        assert!((j - 1.0).abs() < 1e-12, "J = {j}");
    }

    #[test]
    fn zero_derivative_gives_zero_information() {
        let s = scenario(
            NoiseModel::AmplitudeDamping { eta: 0.2 },
            StateFamily::MaxEntangled,
            Layout::probe_with_ancilla(),
            0.3,
        );
        let rho = output_state(&s);
        let zero = CMat::zeros(4);
        assert_eq!(qfi(&rho, &zero).unwrap(), 0.0);
    }

    #[test]
    fn qfi_dimension_mismatch_is_an_error() {
        let rho = CMat::identity(2).scale_re(0.5);
        let drho = CMat::zeros(4);
        assert!(qfi(&rho, &drho).is_err());
    }

    #[test]
    fn pure_state_shortcut_matches_known_noiseless_values() {
        // d/dφ of the encoded state at φ = 0 is i·G|ψ⟩.
        let cases = [
            (StateFamily::Plus, Layout::single_probe(), 1.0),
            (StateFamily::Noon { n: 2 }, Layout::two_probes(), 4.0),
            (
                StateFamily::Noon { n: 4 },
                Layout::new(4, &[0, 1, 2, 3]).unwrap(),
                16.0,
            ),
        ];
        for (family, layout, expect) in cases {
            let psi = make_state(&family).unwrap();
            let n = layout.n_total();
            let dpsi: Vec<Complex64> = psi
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(idx, a)| {
                    let w = layout
                        .probes()
                        .iter()
                        .map(|&q| ((idx >> (n - 1 - q)) & 1) as f64)
                        .sum::<f64>();
                    Complex64::new(0.0, w) * a
                })
                .collect();
            let j = qfi_pure(&psi, &dpsi);
            assert!((j - expect).abs() < 1e-12, "{family:?}: J = {j}");
        }
    }

    #[test]
    fn pure_state_shortcut_agrees_with_full_evaluation() {
        let phi = 0.9;
        let s = scenario(
            NoiseModel::Identity,
            StateFamily::Plus,
            Layout::single_probe(),
            phi,
        );
        let full = qfi_scenario(&s).unwrap();
        let psi = make_state(&StateFamily::Plus).unwrap();
        let amps: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i == 1 {
                    a * Complex64::from_polar(1.0, phi)
                } else {
                    *a
                }
            })
            .collect();
        let encoded = PureState::new(1, amps).unwrap();
        let dpsi: Vec<Complex64> = encoded
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i == 1 {
                    Complex64::new(0.0, 1.0) * a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let shortcut = qfi_pure(&encoded, &dpsi);
        assert!((full - shortcut).abs() <= 1e-10);
    }

    #[test]
    fn closed_form_values_match_hand_evaluations() {
        let v = closed_form(ClosedFormId::AdGammaOpt { eta: 0.75 }).unwrap();
        assert!((v - 4.0 * 0.25 / (1.5 * 1.5)).abs() < 1e-15);

        let v = closed_form(ClosedFormId::PauliAncilla {
            p1: 0.1,
            p2: 0.2,
            p3: 0.0,
        })
        .unwrap();
        assert!((v - (0.01 / 0.3 + 0.49 / 0.7)).abs() < 1e-15);

        let v = closed_form(ClosedFormId::DurkinBound { n: 2, eta: 0.8 }).unwrap();
        assert!((v - 0.5).abs() < 1e-15);

        // Symmetric Pauli parameters reduce to the depolarizing value.
        let p = 0.4;
        let v = closed_form(ClosedFormId::PauliNoAncilla {
            p1: p / 4.0,
            p2: p / 4.0,
            p3: p / 4.0,
            eps: FRAC_1_SQRT_2,
            alpha: 0.0,
            phi: 0.0,
        })
        .unwrap();
        assert!((v - 0.36).abs() < 1e-14, "J = {v}");
    }

    #[test]
    fn durkin_bound_diverges_at_zero_noise() {
        assert!(matches!(
            closed_form(ClosedFormId::DurkinBound { n: 2, eta: 0.0 }),
            Err(Error::InfiniteBound)
        ));
    }

    #[test]
    fn closed_form_rejects_out_of_domain_parameters() {
        assert!(closed_form(ClosedFormId::AdSingle { eta: -0.2 }).is_err());
        assert!(closed_form(ClosedFormId::PauliAncilla {
            p1: 0.7,
            p2: 0.7,
            p3: 0.0,
        })
        .is_err());
    }

    #[test]
    fn scenario_qfi_reproduces_the_gamma_half_formula() {
        for phi in [0.2, FRAC_PI_2, 2.5] {
            let s = scenario(
                NoiseModel::AmplitudeDamping { eta: 0.5 },
                StateFamily::AncillaPair {
                    gamma: FRAC_1_SQRT_2,
                },
                Layout::probe_with_ancilla(),
                phi,
            );
            let j = qfi_scenario(&s).unwrap();
            assert!((j - 2.0 / 3.0).abs() < 1e-12, "J = {j} at φ = {phi}");
        }
    }

    #[test]
    fn commuting_channels_have_phase_independent_qfi() {
        let cases = [
            (
                NoiseModel::AmplitudeDamping { eta: 0.4 },
                StateFamily::AncillaPair { gamma: 0.6 },
                Layout::probe_with_ancilla(),
            ),
            (
                NoiseModel::Depolarizing { p: 0.3 },
                StateFamily::MaxEntangled,
                Layout::probe_with_ancilla(),
            ),
            (
                NoiseModel::Dephasing { p3: 0.2 },
                StateFamily::Single {
                    eps: 0.8,
                    alpha: 0.0,
                },
                Layout::single_probe(),
            ),
        ];
        for (model, family, layout) in cases {
            let reference =
                qfi_scenario(&scenario(model, family.clone(), layout.clone(), 0.1)).unwrap();
            for i in 0..8 {
                let phi = 0.1 + i as f64 * (PI - 0.2) / 7.0;
                let j =
                    qfi_scenario(&scenario(model, family.clone(), layout.clone(), phi)).unwrap();
                assert!(
                    (j - reference).abs() <= 1e-9,
                    "{model:?} at φ = {phi}: {j} vs {reference}"
                );
            }
        }
    }

    #[test]
    fn dephasing_qfi_is_alpha_independent() {
        for alpha in [0.0, 0.8, 2.9] {
            let s = scenario(
                NoiseModel::Dephasing { p3: 0.25 },
                StateFamily::Single {
                    eps: FRAC_1_SQRT_2,
                    alpha,
                },
                Layout::single_probe(),
                1.3,
            );
            let j = qfi_scenario(&s).unwrap();
            assert!((j - 0.25).abs() < 1e-12, "J = {j} at α = {alpha}");
        }
    }

    #[test]
    fn noon4_scenario_matches_closed_form_at_quarter_pi_multiples() {
        for eta in [0.1, 0.5, 0.9] {
            for n in 1..4 {
                let phi = n as f64 * PI / 4.0;
                let s = scenario(
                    NoiseModel::AmplitudeDamping { eta },
                    StateFamily::FourQubitNoon,
                    Layout::two_probes_two_ancillas(),
                    phi,
                );
                let numeric = qfi_scenario(&s).unwrap();
                let expression = closed_form(ClosedFormId::AdNoon4 { eta, phi }).unwrap();
                assert!(
                    (numeric - expression).abs() < 1e-9,
                    "η={eta}, φ={phi}: numeric {numeric} vs closed form {expression}"
                );
            }
        }
    }

    #[test]
    fn noon4_audit_flags_the_phase_dependent_mismatch() {
        let rows = noon4_formula_audit(&[0.0, 0.4], &[PI / 4.0, PI / 8.0]).unwrap();
        // At φ = π/4 (cos 8φ = 1) the two agree; at φ = π/8 the closed form
        // dips while the numeric value is φ-independent.
        let agree = rows.iter().find(|r| r.phi == PI / 4.0).unwrap();
        assert!(!agree.flagged);
        let mismatch = rows.iter().find(|r| r.phi == PI / 8.0).unwrap();
        assert!(mismatch.flagged);
        assert!((rows[0].numeric - rows[1].numeric).abs() < 1e-9);
    }

    #[test]
    fn qfi_is_convex_under_phase_independent_mixing() {
        let rng = CounterRng::new(5);
        for k in 0..20u64 {
            let eta1 = rng.uniform(4 * k);
            let eta2 = rng.uniform(4 * k + 1);
            let lambda = rng.uniform(4 * k + 2);
            let phi = rng.uniform(4 * k + 3) * PI;
            let s1 = scenario(
                NoiseModel::AmplitudeDamping { eta: eta1 },
                StateFamily::MaxEntangled,
                Layout::probe_with_ancilla(),
                phi,
            );
            let s2 = scenario(
                NoiseModel::AmplitudeDamping { eta: eta2 },
                StateFamily::AncillaPair { gamma: 0.4 },
                Layout::probe_with_ancilla(),
                phi,
            );
            let rho = output_state(&s1)
                .scale_re(lambda)
                .add(&output_state(&s2).scale_re(1.0 - lambda));
            let drho = output_derivative(&s1)
                .scale_re(lambda)
                .add(&output_derivative(&s2).scale_re(1.0 - lambda));
            let mixed = qfi(&rho, &drho).unwrap();
            let sum =
                lambda * qfi_scenario(&s1).unwrap() + (1.0 - lambda) * qfi_scenario(&s2).unwrap();
            assert!(mixed <= sum + 1e-9, "mixture {mixed} vs {sum}");
        }
    }

    #[test]
    fn optimized_no_ancilla_value_sits_at_a_cosine_extreme() {
        let (p1, p2, p3) = (0.3, 0.1, 0.2);
        let phi = 0.4;
        let opt = pauli_no_ancilla_optimized(p1, p2, p3, phi).unwrap();
        let eps = FRAC_1_SQRT_2;
        let at_plus = pauli_no_ancilla_formula(p1, p2, p3, eps, -phi, phi);
        let at_minus = pauli_no_ancilla_formula(p1, p2, p3, eps, FRAC_PI_2 - phi, phi);
        assert!((opt - at_plus.max(at_minus)).abs() < 1e-9);
    }
}
