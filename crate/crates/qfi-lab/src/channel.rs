//! Qubit noise channels, phase encoding and the analytic φ-derivative of the
//! output state.
//!
//! A `PhaseScenario` bundles everything needed to produce the parametrized
//! state ρ_φ: an input pure state over probes and ancillas, the phase unitary
//! `U_φ = |0⟩⟨0| + e^{iφ}|1⟩⟨1|` acting on every probe qubit, and a Kraus
//! channel applied independently to each probe afterwards. Ancillas are left
//! untouched.

use num_complex::Complex64;

use crate::matcore::{consts, tensor_all, CMat};
use crate::qstate::{density, PureState};
use crate::{Error, Result};

/// Noise model tags with their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Decay |1⟩ → |0⟩ with probability η.
    AmplitudeDamping {
        eta: f64,
    },
    /// σ_x, σ_y, σ_z applied with probabilities p1, p2, p3.
    Pauli {
        p1: f64,
        p2: f64,
        p3: f64,
    },
    /// Pauli channel with p1 = p2 = 0.
    Dephasing {
        p3: f64,
    },
    /// Pauli channel with p1 = p2 = p3 = p/4.
    Depolarizing {
        p: f64,
    },
    Identity,
}

/// A single-qubit channel in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    model: NoiseModel,
    kraus: Vec<CMat>,
}

impl KrausChannel {
    pub fn model(&self) -> NoiseModel {
        self.model
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// `‖Σ A_i†A_i − I‖_max`, which must vanish for a trace-preserving map.
    pub fn completeness_defect(&self) -> f64 {
        let dim = self.kraus[0].dim();
        let mut acc = CMat::zeros(dim);
        for a in &self.kraus {
            acc = acc.add(&a.adjoint().mul(a));
        }
        acc.max_abs_diff(&CMat::identity(dim))
    }

    /// Applies the channel to a density matrix of matching dimension.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(rho.dim());
        for a in &self.kraus {
            out = out.add(&rho.conjugate_by(a));
        }
        out
    }
}

/// Builds the Kraus representation of a noise model, validating parameters.
pub fn make_channel(model: NoiseModel) -> Result<KrausChannel> {
    let c = |re: f64| Complex64::new(re, 0.0);
    let kraus = match model {
        NoiseModel::AmplitudeDamping { eta } => {
            check_prob("η", eta)?;
            let a0 = CMat::from_slice(2, &[c(1.0), c(0.0), c(0.0), c((1.0 - eta).max(0.0).sqrt())]);
            let a1 = CMat::from_slice(2, &[c(0.0), c(eta.max(0.0).sqrt()), c(0.0), c(0.0)]);
            vec![a0, a1]
        }
        NoiseModel::Pauli { p1, p2, p3 } => pauli_kraus(p1, p2, p3)?,
        NoiseModel::Dephasing { p3 } => {
            check_prob("p3", p3)?;
            pauli_kraus(0.0, 0.0, p3)?
        }
        NoiseModel::Depolarizing { p } => {
            check_prob("p", p)?;
            pauli_kraus(p / 4.0, p / 4.0, p / 4.0)?
        }
        NoiseModel::Identity => vec![CMat::identity(2)],
    };
    Ok(KrausChannel { model, kraus })
}

fn pauli_kraus(p1: f64, p2: f64, p3: f64) -> Result<Vec<CMat>> {
    check_prob("p1", p1)?;
    check_prob("p2", p2)?;
    check_prob("p3", p3)?;
    let p0 = 1.0 - p1 - p2 - p3;
    if p0 < -1e-12 {
        return Err(Error::Domain(format!(
            "p1 + p2 + p3 = {} exceeds 1",
            p1 + p2 + p3
        )));
    }
    Ok(vec![
        consts::identity2().scale_re(p0.max(0.0).sqrt()),
        consts::sigma_x().scale_re(p1.sqrt()),
        consts::sigma_y().scale_re(p2.sqrt()),
        consts::sigma_z().scale_re(p3.sqrt()),
    ])
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// Assignment of qubits to probe and ancilla roles.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    n_total: usize,
    probes: Vec<usize>,
    ancillas: Vec<usize>,
}

impl Layout {
    /// Builds a layout from the probe index set; the rest are ancillas.
    pub fn new(n_total: usize, probes: &[usize]) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::Domain("layout needs at least one qubit".into()));
        }
        let mut probes = probes.to_vec();
        probes.sort_unstable();
        probes.dedup();
        if probes.is_empty() {
            return Err(Error::Domain("layout needs at least one probe".into()));
        }
        if probes.iter().any(|&q| q >= n_total) {
            return Err(Error::Domain(format!(
                "probe index out of range for {n_total} qubits"
            )));
        }
        let ancillas = (0..n_total).filter(|q| !probes.contains(q)).collect();
        Ok(Layout {
            n_total,
            probes,
            ancillas,
        })
    }

    /// Single-qubit probe, no ancillas.
    pub fn single_probe() -> Self {
        Layout::new(1, &[0]).expect("valid layout")
    }

    /// Qubit 0 probes, qubit 1 is the ancilla.
    pub fn probe_with_ancilla() -> Self {
        Layout::new(2, &[0]).expect("valid layout")
    }

    /// Two probes, no ancillas.
    pub fn two_probes() -> Self {
        Layout::new(2, &[0, 1]).expect("valid layout")
    }

    /// Qubits 0 and 1 probe, qubits 2 and 3 are ancillas.
    pub fn two_probes_two_ancillas() -> Self {
        Layout::new(4, &[0, 1]).expect("valid layout")
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn probes(&self) -> &[usize] {
        &self.probes
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }
}

/// Everything needed to produce ρ_φ and ∂ρ_φ/∂φ.
#[derive(Debug, Clone)]
pub struct PhaseScenario {
    pub channel: KrausChannel,
    pub input: PureState,
    pub layout: Layout,
    pub phi: f64,
}

impl PhaseScenario {
    pub fn new(channel: KrausChannel, input: PureState, layout: Layout, phi: f64) -> Result<Self> {
        if input.n_qubits() != layout.n_total() {
            return Err(Error::DimensionMismatch(format!(
                "input has {} qubits, layout expects {}",
                input.n_qubits(),
                layout.n_total()
            )));
        }
        Ok(PhaseScenario {
            channel,
            input,
            layout,
            phi,
        })
    }

    /// The same scenario at a different phase.
    pub fn at_phi(&self, phi: f64) -> Self {
        let mut s = self.clone();
        s.phi = phi;
        s
    }

    pub fn dim(&self) -> usize {
        self.input.dim()
    }
}

/// Number of probe qubits in the |1⟩ state for a basis index.
fn probe_weight(index: usize, layout: &Layout) -> u32 {
    let n = layout.n_total();
    layout
        .probes()
        .iter()
        .map(|&q| ((index >> (n - 1 - q)) & 1) as u32)
        .sum()
}

/// Embeds a single-qubit operator at qubit `q` of an `n`-qubit register.
fn embed(op: &CMat, q: usize, n: usize) -> CMat {
    let mut factors: Vec<CMat> = Vec::with_capacity(3);
    if q > 0 {
        factors.push(CMat::identity(1 << q));
    }
    factors.push(op.clone());
    if q + 1 < n {
        factors.push(CMat::identity(1 << (n - 1 - q)));
    }
    let refs: Vec<&CMat> = factors.iter().collect();
    tensor_all(&refs)
}

/// Applies `U_φ` on the probe qubits: ρ_{jk} ← e^{iφ(w_j − w_k)} ρ_{jk}.
fn apply_phase(rho: &CMat, layout: &Layout, phi: f64) -> CMat {
    CMat::from_fn(rho.dim(), |j, k| {
        let dw = probe_weight(j, layout) as f64 - probe_weight(k, layout) as f64;
        rho.at(j, k) * Complex64::from_polar(1.0, phi * dw)
    })
}

/// i[G, ρ] with G = Σ_probes |1⟩⟨1|; G is diagonal, so the commutator is
/// an entrywise phase-weight difference.
fn phase_generator_commutator(rho: &CMat, layout: &Layout) -> CMat {
    CMat::from_fn(rho.dim(), |j, k| {
        let dw = probe_weight(j, layout) as f64 - probe_weight(k, layout) as f64;
        rho.at(j, k) * Complex64::new(0.0, dw)
    })
}

/// Applies the scenario channel independently to every probe qubit.
fn apply_noise(rho: &CMat, channel: &KrausChannel, layout: &Layout) -> CMat {
    let n = layout.n_total();
    let mut acc = rho.clone();
    for &q in layout.probes() {
        let embedded: Vec<CMat> = channel.kraus().iter().map(|a| embed(a, q, n)).collect();
        let mut next = CMat::zeros(acc.dim());
        for a in &embedded {
            next = next.add(&acc.conjugate_by(a));
        }
        acc = next;
    }
    acc
}

/// ρ_φ = E[U_φ ρ U_φ†] with the channel acting on each probe after the phase.
pub fn output_state(s: &PhaseScenario) -> CMat {
    let rho = density(&s.input);
    let rotated = apply_phase(&rho, &s.layout, s.phi);
    apply_noise(&rotated, &s.channel, &s.layout)
}

/// Analytic ∂ρ_φ/∂φ = E[ i[G, U_φ ρ U_φ†] ], using linearity and the
/// φ-independence of the noise map. Hermitian and traceless.
pub fn output_derivative(s: &PhaseScenario) -> CMat {
    let rho = density(&s.input);
    let rotated = apply_phase(&rho, &s.layout, s.phi);
    let comm = phase_generator_commutator(&rotated, &s.layout);
    apply_noise(&comm, &s.channel, &s.layout)
}

/// Central-difference derivative, the cross-check oracle for
/// `output_derivative`. Step h = 1e−6 balances truncation against round-off
/// at double precision.
pub fn output_derivative_fd(s: &PhaseScenario, h: f64) -> CMat {
    let plus = output_state(&s.at_phi(s.phi + h));
    let minus = output_state(&s.at_phi(s.phi - h));
    plus.sub(&minus).scale_re(0.5 / h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{eigh, tensor};
    use crate::qstate::{bell_basis, make_state, StateFamily};
    use crate::rng::CounterRng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn amplitude_damping_at_zero_noise_is_identity_plus_zero() {
        let ch = make_channel(NoiseModel::AmplitudeDamping { eta: 0.0 }).unwrap();
        assert_eq!(ch.kraus().len(), 2);
        assert!(ch.kraus()[0].max_abs_diff(&CMat::identity(2)) < 1e-15);
        assert!(ch.kraus()[1].max_abs() < 1e-15);
    }

    #[test]
    fn depolarizing_is_the_symmetric_pauli_channel() {
        let dep = make_channel(NoiseModel::Depolarizing { p: 0.4 }).unwrap();
        let pauli = make_channel(NoiseModel::Pauli {
            p1: 0.1,
            p2: 0.1,
            p3: 0.1,
        })
        .unwrap();
        for (a, b) in dep.kraus().iter().zip(pauli.kraus().iter()) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
    }

    #[test]
    fn kraus_completeness_holds_across_models() {
        let models = [
            NoiseModel::AmplitudeDamping { eta: 0.37 },
            NoiseModel::Pauli {
                p1: 0.0,
                p2: 0.0,
                p3: 0.8,
            },
            NoiseModel::Dephasing { p3: 0.25 },
            NoiseModel::Depolarizing { p: 0.9 },
            NoiseModel::Identity,
        ];
        for m in models {
            let ch = make_channel(m).unwrap();
            assert!(ch.completeness_defect() <= 1e-12, "{m:?}");
        }
    }

    #[test]
    fn channel_parameters_are_validated() {
        assert!(make_channel(NoiseModel::AmplitudeDamping { eta: 1.5 }).is_err());
        assert!(make_channel(NoiseModel::Pauli {
            p1: 0.5,
            p2: 0.4,
            p3: 0.3,
        })
        .is_err());
        assert!(make_channel(NoiseModel::Depolarizing { p: -0.1 }).is_err());
    }

    #[test]
    fn layouts_and_scenarios_validate_their_inputs() {
        assert!(Layout::new(2, &[]).is_err());
        assert!(Layout::new(2, &[2]).is_err());
        let layout = Layout::new(3, &[0, 2]).unwrap();
        assert_eq!(layout.probes(), &[0, 2]);
        assert_eq!(layout.ancillas(), &[1]);

        // A two-qubit state cannot ride a one-qubit layout.
        let err = PhaseScenario::new(
            make_channel(NoiseModel::Identity).unwrap(),
            make_state(&StateFamily::MaxEntangled).unwrap(),
            Layout::single_probe(),
            0.0,
        );
        assert!(err.is_err());
    }

    #[test]
    fn identity_channel_keeps_the_pure_phase_state() {
        let phi = 0.83;
        let s = PhaseScenario::new(
            make_channel(NoiseModel::Identity).unwrap(),
            make_state(&StateFamily::Plus).unwrap(),
            Layout::single_probe(),
            phi,
        )
        .unwrap();
        let rho = output_state(&s);
        let expect = CMat::from_fn(2, |i, j| {
            let a = [
                c(FRAC_1_SQRT_2, 0.0),
                Complex64::from_polar(FRAC_1_SQRT_2, phi),
            ];
            a[i] * a[j].conj()
        });
        assert!(rho.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn full_decay_collapses_the_probe() {
        let gamma: f64 = 0.6;
        let s = PhaseScenario::new(
            make_channel(NoiseModel::AmplitudeDamping { eta: 1.0 }).unwrap(),
            make_state(&StateFamily::AncillaPair { gamma }).unwrap(),
            Layout::probe_with_ancilla(),
            0.4,
        )
        .unwrap();
        let rho = output_state(&s);
        let zero = CMat::from_slice(2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let anc = CMat::from_diag(&[c(gamma * gamma, 0.0), c(1.0 - gamma * gamma, 0.0)]);
        assert!(rho.max_abs_diff(&tensor(&zero, &anc)) < 1e-14);
    }

    #[test]
    fn depolarized_bell_state_is_the_isotropic_mixture() {
        let p = 0.3;
        let s = PhaseScenario::new(
            make_channel(NoiseModel::Depolarizing { p }).unwrap(),
            make_state(&StateFamily::MaxEntangled).unwrap(),
            Layout::probe_with_ancilla(),
            0.0,
        )
        .unwrap();
        let rho = output_state(&s);
        let phi_plus = crate::qstate::density(&bell_basis()[0]);
        let expect = phi_plus
            .scale_re(1.0 - p)
            .add(&CMat::identity(4).scale_re(p / 4.0));
        assert!(rho.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn derivative_of_noiseless_plus_state_at_zero_phase() {
        let s = PhaseScenario::new(
            make_channel(NoiseModel::Identity).unwrap(),
            make_state(&StateFamily::Plus).unwrap(),
            Layout::single_probe(),
            0.0,
        )
        .unwrap();
        let drho = output_derivative(&s);
        // (i/2)(|1⟩⟨0| − |0⟩⟨1|)
        let expect = CMat::from_slice(2, &[c(0., 0.), c(0., -0.5), c(0., 0.5), c(0., 0.)]);
        assert!(drho.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn full_dephasing_freezes_the_state() {
        let s = PhaseScenario::new(
            make_channel(NoiseModel::Pauli {
                p1: 0.0,
                p2: 0.0,
                p3: 0.5,
            })
            .unwrap(),
            make_state(&StateFamily::Plus).unwrap(),
            Layout::single_probe(),
            1.1,
        )
        .unwrap();
        let drho = output_derivative(&s);
        assert!(drho.max_abs() < 1e-15);
        let rho = output_state(&s);
        assert!(rho.max_abs_diff(&CMat::identity(2).scale_re(0.5)) < 1e-14);
    }

    fn random_scenario(rng: &CounterRng, k: u64) -> PhaseScenario {
        let u = |off: u64| rng.uniform(16 * k + off);
        let model = match rng.value(16 * k + 15) % 4 {
            0 => NoiseModel::AmplitudeDamping { eta: u(0) },
            1 => {
                let (a, b, c3) = (u(0), u(1), u(2));
                let total = a + b + c3 + u(3);
                NoiseModel::Pauli {
                    p1: a / total,
                    p2: b / total,
                    p3: c3 / total,
                }
            }
            2 => NoiseModel::Dephasing { p3: u(0) },
            _ => NoiseModel::Depolarizing { p: u(0) },
        };
        let phi = u(4) * PI;
        let pick = rng.value(16 * k + 14) % 4;
        let (family, layout) = match pick {
            0 => (
                StateFamily::Single {
                    eps: u(5),
                    alpha: u(6) * 2.0 * PI * 0.999,
                },
                Layout::single_probe(),
            ),
            1 => (
                StateFamily::AncillaPair { gamma: u(5) },
                Layout::probe_with_ancilla(),
            ),
            2 => (
                StateFamily::GenericTwoQubit {
                    params: [
                        u(5) * PI / 2.0,
                        u(6) * PI / 2.0,
                        u(7) * PI / 2.0,
                        u(8) * 2.0 * PI,
                        u(9) * 2.0 * PI,
                        u(10) * 2.0 * PI,
                    ],
                },
                Layout::two_probes(),
            ),
            _ => (
                StateFamily::FourQubitNoon,
                Layout::two_probes_two_ancillas(),
            ),
        };
        PhaseScenario::new(
            make_channel(model).unwrap(),
            make_state(&family).unwrap(),
            layout,
            phi,
        )
        .unwrap()
    }

    #[test]
    fn outputs_are_trace_one_and_positive() {
        let rng = CounterRng::new(99);
        for k in 0..50 {
            let s = random_scenario(&rng, k);
            let rho = output_state(&s);
            assert!((rho.trace().re - 1.0).abs() <= 1e-12);
            assert!(rho.trace().im.abs() <= 1e-12);
            let eig = eigh(&rho).unwrap();
            assert!(eig.values[0] >= -1e-10);
            let drho = output_derivative(&s);
            assert!(drho.trace().norm() <= 1e-12);
            assert!(drho.hermiticity_defect() <= 1e-12);
        }
    }

    #[test]
    fn analytic_derivative_matches_central_difference() {
        let rng = CounterRng::new(7);
        for k in 0..200 {
            let s = random_scenario(&rng, k);
            let analytic = output_derivative(&s);
            let fd = output_derivative_fd(&s, 1e-6);
            assert!(
                analytic.max_abs_diff(&fd) <= 1e-8,
                "scenario {k}: {}",
                analytic.max_abs_diff(&fd)
            );
        }
    }

    #[test]
    fn commuting_channels_allow_noise_before_phase() {
        let rng = CounterRng::new(21);
        for k in 0..60 {
            let mut s = random_scenario(&rng, k);
            let commutes = matches!(
                s.channel.model(),
                NoiseModel::AmplitudeDamping { .. }
                    | NoiseModel::Dephasing { .. }
                    | NoiseModel::Depolarizing { .. }
                    | NoiseModel::Identity
            );
            if !commutes {
                s.channel = make_channel(NoiseModel::AmplitudeDamping { eta: 0.3 }).unwrap();
            }
            let after = output_state(&s);
            // Noise first, then the phase.
            let rho = density(&s.input);
            let noisy = apply_noise(&rho, &s.channel, &s.layout);
            let before = apply_phase(&noisy, &s.layout, s.phi);
            assert!(after.max_abs_diff(&before) <= 1e-12);
        }
    }
}
