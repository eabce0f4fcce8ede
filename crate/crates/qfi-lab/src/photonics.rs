//! Single-photon simulator of the polarization/path phase-estimation scheme.
//!
//! One photon carries two qubits: its polarization (H/V) plays the probe and
//! its path (a/b) the ancilla. A polarizing beam splitter transmits H and
//! reflects V, acting as an effective CNOT that prepares the entangled state
//! (|Ha⟩ + |Vb⟩)/√2 from (|H⟩+|V⟩)/√2. The phase and the noise act on
//! polarization only; interference at the output beam splitters projects onto
//! (|Ha⟩ ± |Vb⟩)/√2 and (|Va⟩ ± |Hb⟩)/√2, a complete Bell-type basis, so the
//! four detector click rates realize the probe-ancilla Bell measurement.
//!
//! Amplitudes are stored over the basis {Ha, Va, Hb, Vb}; the path bit is the
//! leading tensor factor and polarization the trailing one.

use num_complex::Complex64;

use crate::channel::{output_derivative, output_state, KrausChannel, Layout, PhaseScenario};
use crate::matcore::{tensor, CMat};
use crate::qstate::bell_basis;
use crate::Result;

/// Basis indices over {Ha, Va, Hb, Vb}.
pub const HA: usize = 0;
pub const VA: usize = 1;
pub const HB: usize = 2;
pub const VB: usize = 3;

/// Photon state: a pure amplitude vector before noise, a 4×4 density matrix
/// after.
#[derive(Debug, Clone)]
pub enum OpticalState {
    Pure(Vec<Complex64>),
    Density(CMat),
}

impl OpticalState {
    pub fn density(&self) -> CMat {
        match self {
            OpticalState::Pure(a) => CMat::from_fn(4, |i, j| a[i] * a[j].conj()),
            OpticalState::Density(rho) => rho.clone(),
        }
    }

    pub fn norm_defect(&self) -> f64 {
        (self.density().trace().re - 1.0).abs()
    }
}

/// Detector click probabilities in the order (BS1+, BS1−, BS2+, BS2−).
#[derive(Debug, Clone, Copy)]
pub struct ClickDistribution {
    pub p: [f64; 4],
}

/// The four Bell-type detection states, ordered to match `ClickDistribution`.
/// Conventions are fixed so that the noiseless photon at φ = 0 always exits
/// at BS1+.
fn detector_basis() -> [Vec<Complex64>; 4] {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    let zero = c(0.0);
    [
        vec![c(inv), zero, zero, c(inv)],  // (|Ha⟩ + |Vb⟩)/√2
        vec![c(inv), zero, zero, c(-inv)], // (|Ha⟩ − |Vb⟩)/√2
        vec![zero, c(inv), c(inv), zero],  // (|Va⟩ + |Hb⟩)/√2
        vec![zero, c(inv), c(-inv), zero], // (|Va⟩ − |Hb⟩)/√2
    ]
}

/// Photon after PBS1: (|Ha⟩ + |Vb⟩)/√2.
pub fn prepare() -> OpticalState {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    OpticalState::Pure(vec![c(inv), c(0.0), c(0.0), c(inv)])
}

/// Phase on the V polarization component.
fn polarization_phase(phi: f64) -> CMat {
    let one = Complex64::new(1.0, 0.0);
    let ph = Complex64::from_polar(1.0, phi);
    CMat::from_diag(&[one, ph, one, ph])
}

/// Applies U_φ and then the noise channel to the polarization qubit.
pub fn evolve(state: &OpticalState, phi: f64, noise: &KrausChannel) -> OpticalState {
    let rotated = state.density().conjugate_by(&polarization_phase(phi));
    let mut out = CMat::zeros(4);
    for a in noise.kraus() {
        let embedded = tensor(&CMat::identity(2), a);
        out = out.add(&rotated.conjugate_by(&embedded));
    }
    OpticalState::Density(out)
}

/// Click probabilities of the four Bell-type detector outputs.
pub fn detect(state: &OpticalState) -> ClickDistribution {
    let rho = state.density();
    let basis = detector_basis();
    let mut p = [0.0f64; 4];
    for (slot, b) in p.iter_mut().zip(basis.iter()) {
        *slot = rho.expectation(b).re.max(0.0);
    }
    ClickDistribution { p }
}

/// Classical Fisher information F = Σ_k (dp_k/dφ)² / p_k of the click
/// statistics; never exceeds the QFI of the equivalent probe-ancilla
/// scenario.
pub fn click_fisher(noise: &KrausChannel, phi: f64) -> Result<f64> {
    let s = equivalent_scenario(noise, phi)?;
    let rho = swap_probe_and_path(&output_state(&s));
    let drho = swap_probe_and_path(&output_derivative(&s));
    let basis = detector_basis();
    let mut fisher = 0.0;
    for b in &basis {
        let p = rho.expectation(b).re.max(0.0);
        let dp = drho.expectation(b).re;
        if p < 1e-12 && dp.abs() < 1e-12 {
            continue;
        }
        fisher += dp * dp / p;
    }
    Ok(fisher)
}

/// The abstract probe-ancilla scenario this experiment realizes: a maximally
/// entangled pair with the noise on the probe, under H↔0, V↔1, a↔0, b↔1.
pub fn equivalent_scenario(noise: &KrausChannel, phi: f64) -> Result<PhaseScenario> {
    PhaseScenario::new(
        noise.clone(),
        bell_basis()[0].clone(),
        Layout::probe_with_ancilla(),
        phi,
    )
}

/// Reorders a probe⊗ancilla matrix into the photonic path⊗polarization
/// ordering (and back; the permutation is its own inverse).
pub fn swap_probe_and_path(m: &CMat) -> CMat {
    let perm = [0usize, 2, 1, 3];
    CMat::from_fn(4, |i, j| m.at(perm[i], perm[j]))
}
