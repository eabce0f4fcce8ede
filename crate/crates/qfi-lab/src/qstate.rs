//! Probe and ancilla state catalog.
//!
//! The families here cover the inputs used throughout the crate: the
//! single-qubit `ε|0⟩ + √(1−ε²)e^{iα}|1⟩` family, the probe-ancilla pair
//! `γ|00⟩ + √(1−γ²)|11⟩`, NOON states over N qubits, the Bell basis, and a
//! six-parameter chart of the full two-qubit pure manifold used by the
//! numerical optimizer.

use num_complex::Complex64;

use crate::matcore::CMat;
use crate::{Error, Result};

/// A normalized multi-qubit amplitude vector (big-endian basis ordering).
#[derive(Debug, Clone)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps raw amplitudes; they must form a unit vector.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qubits",
                amplitudes.len(),
                n_qubits
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "state norm² = {norm_sq}, expected 1 within 1e-12"
            )));
        }
        Ok(PureState {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1 << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        PureState {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// Rank-1 density matrix |ψ⟩⟨ψ| of a pure state.
pub fn density(psi: &PureState) -> CMat {
    let a = psi.amplitudes();
    CMat::from_fn(psi.dim(), |i, j| a[i] * a[j].conj())
}

/// Named families of probe/ancilla input states.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// ε|0⟩ + √(1−ε²) e^{iα}|1⟩ with ε ∈ [0,1], α ∈ [0,2π).
    Single { eps: f64, alpha: f64 },
    /// γ|00⟩ + √(1−γ²)|11⟩ with γ ∈ [0,1]; qubit 0 is the probe.
    AncillaPair { gamma: f64 },
    /// (|00⟩ + |11⟩)/√2.
    MaxEntangled,
    /// (|0⟩ + |1⟩)/√2.
    Plus,
    /// (|0…0⟩ + |1…1⟩)/√2 over `n` qubits.
    Noon { n: usize },
    /// (|0000⟩ + |1111⟩)/√2.
    FourQubitNoon,
    /// Full two-qubit pure manifold: three hypersphere angles fix the four
    /// amplitude magnitudes, three phases fix the relative phases of
    /// amplitudes 1..3; amplitude 0 is real non-negative.
    GenericTwoQubit { params: [f64; 6] },
}

impl StateFamily {
    pub fn n_qubits(&self) -> usize {
        match self {
            StateFamily::Single { .. } | StateFamily::Plus => 1,
            StateFamily::AncillaPair { .. }
            | StateFamily::MaxEntangled
            | StateFamily::GenericTwoQubit { .. } => 2,
            StateFamily::Noon { n } => *n,
            StateFamily::FourQubitNoon => 4,
        }
    }
}

/// Builds the normalized state of a family, validating its parameters.
pub fn make_state(family: &StateFamily) -> Result<PureState> {
    let c = |re: f64| Complex64::new(re, 0.0);
    match family {
        StateFamily::Single { eps, alpha } => {
            check_unit_interval("ε", *eps)?;
            check_angle("α", *alpha)?;
            let a1 = Complex64::from_polar((1.0 - eps * eps).max(0.0).sqrt(), *alpha);
            PureState::new(1, vec![c(*eps), a1])
        }
        StateFamily::AncillaPair { gamma } => {
            check_unit_interval("γ", *gamma)?;
            let b = (1.0 - gamma * gamma).max(0.0).sqrt();
            PureState::new(2, vec![c(*gamma), c(0.0), c(0.0), c(b)])
        }
        StateFamily::MaxEntangled => make_state(&StateFamily::AncillaPair {
            gamma: std::f64::consts::FRAC_1_SQRT_2,
        }),
        StateFamily::Plus => make_state(&StateFamily::Single {
            eps: std::f64::consts::FRAC_1_SQRT_2,
            alpha: 0.0,
        }),
        StateFamily::Noon { n } => {
            if *n == 0 {
                return Err(Error::Domain("NOON state needs at least one qubit".into()));
            }
            let dim = 1usize << n;
            let inv = std::f64::consts::FRAC_1_SQRT_2;
            let mut amplitudes = vec![c(0.0); dim];
            amplitudes[0] = c(inv);
            amplitudes[dim - 1] = c(inv);
            PureState::new(*n, amplitudes)
        }
        StateFamily::FourQubitNoon => make_state(&StateFamily::Noon { n: 4 }),
        StateFamily::GenericTwoQubit { params } => {
            if params.iter().any(|p| !p.is_finite()) {
                return Err(Error::Domain("non-finite two-qubit parameter".into()));
            }
            let [t1, t2, t3, ph1, ph2, ph3] = *params;
            let mags = [
                t1.cos(),
                t1.sin() * t2.cos(),
                t1.sin() * t2.sin() * t3.cos(),
                t1.sin() * t2.sin() * t3.sin(),
            ];
            let mut amplitudes = vec![
                c(mags[0]),
                Complex64::from_polar(mags[1], ph1),
                Complex64::from_polar(mags[2], ph2),
                Complex64::from_polar(mags[3], ph3),
            ];
            // Angles outside [0, π/2] can make a magnitude negative; fold the
            // sign into the phase so amplitude 0 stays real non-negative.
            for a in amplitudes.iter_mut().skip(1) {
                if a.re == 0.0 && a.im == 0.0 {
                    *a = c(0.0);
                }
            }
            if amplitudes[0].re < 0.0 {
                for a in amplitudes.iter_mut() {
                    *a = -*a;
                }
            }
            PureState::new(2, amplitudes)
        }
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn check_angle(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..2.0 * std::f64::consts::PI).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} outside [0, 2π)")));
    }
    Ok(())
}

/// The Bell basis in the order Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
pub fn bell_basis() -> [PureState; 4] {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    let mk = |a: [f64; 4]| {
        PureState::new(2, a.iter().map(|&x| c(x * inv)).collect()).expect("unit Bell state")
    };
    [
        mk([1.0, 0.0, 0.0, 1.0]),
        mk([1.0, 0.0, 0.0, -1.0]),
        mk([0.0, 1.0, 1.0, 0.0]),
        mk([0.0, 1.0, -1.0, 0.0]),
    ]
}
