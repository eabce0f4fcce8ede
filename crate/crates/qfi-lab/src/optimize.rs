//! Numerical QFI maximization over probe-state families.
//!
//! Searches are deterministic: coarse seeding (full grids in one or two
//! dimensions, axis scans plus a fixed stratified lattice in six) followed by
//! derivative-free Nelder–Mead refinement from the best seeds. Ties between
//! equal-QFI parameter points resolve to the lexicographically smallest
//! vector so output is reproducible.

use crate::channel::{KrausChannel, Layout, PhaseScenario};
use crate::fisher::qfi_scenario;
use crate::qstate::{make_state, StateFamily};
use crate::rng::CounterRng;
use crate::{Error, Result};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Probe-state families the optimizer can search over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyShape {
    /// ε|0⟩ + √(1−ε²)e^{iα}|1⟩ with two parameters (ε, α).
    Single,
    /// γ|00⟩ + √(1−γ²)|11⟩ with one parameter (γ).
    AncillaPair,
    /// The full two-qubit pure manifold, six parameters.
    GenericTwoQubit,
}

impl FamilyShape {
    fn dimension(&self) -> usize {
        match self {
            FamilyShape::Single => 2,
            FamilyShape::AncillaPair => 1,
            FamilyShape::GenericTwoQubit => 6,
        }
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        match self {
            FamilyShape::Single => vec![(0.0, 1.0), (0.0, 2.0 * PI)],
            FamilyShape::AncillaPair => vec![(0.0, 1.0)],
            FamilyShape::GenericTwoQubit => vec![
                (0.0, FRAC_PI_2),
                (0.0, FRAC_PI_2),
                (0.0, FRAC_PI_2),
                (0.0, 2.0 * PI),
                (0.0, 2.0 * PI),
                (0.0, 2.0 * PI),
            ],
        }
    }

    /// Folds a free parameter vector into the family's domain.
    fn sanitize(&self, params: &[f64]) -> Vec<f64> {
        let two_pi = 2.0 * PI;
        match self {
            FamilyShape::Single => {
                vec![params[0].clamp(0.0, 1.0), params[1].rem_euclid(two_pi)]
            }
            FamilyShape::AncillaPair => vec![params[0].clamp(0.0, 1.0)],
            FamilyShape::GenericTwoQubit => {
                // The hyperspherical chart is well defined for any finite
                // angles; only the phases need wrapping for tidy output.
                let mut out = params.to_vec();
                for p in out.iter_mut().skip(3) {
                    *p = p.rem_euclid(two_pi);
                }
                out
            }
        }
    }

    fn family(&self, params: &[f64]) -> StateFamily {
        match self {
            FamilyShape::Single => StateFamily::Single {
                eps: params[0],
                alpha: params[1],
            },
            FamilyShape::AncillaPair => StateFamily::AncillaPair { gamma: params[0] },
            FamilyShape::GenericTwoQubit => StateFamily::GenericTwoQubit {
                params: [
                    params[0], params[1], params[2], params[3], params[4], params[5],
                ],
            },
        }
    }
}

/// Outcome of a QFI maximization.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_qfi: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Best {
    params: Vec<f64>,
    value: f64,
}

impl Best {
    fn offer(&mut self, params: &[f64], value: f64) {
        let improves =
            value > self.value || (value == self.value && lex_less(params, &self.params));
        if improves {
            self.params = params.to_vec();
            self.value = value;
        }
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Maximizes the scenario QFI over a probe-state family at a fixed phase.
///
/// Seeds from a coarse grid (at least 17 points per dimension), refines with
/// Nelder–Mead, and returns the best point found; `converged` reports whether
/// the winning simplex collapsed below the diameter tolerance rather than
/// hitting the evaluation cap.
pub fn optimize_family(
    channel: &KrausChannel,
    shape: FamilyShape,
    phi: f64,
    layout: &Layout,
) -> Result<OptResult> {
    optimize_family_with_offset(channel, shape, phi, layout, 0)
}

/// As `optimize_family`, with a seeding offset for robustness checks: the
/// offset shifts the coarse grids without changing the refinement.
pub fn optimize_family_with_offset(
    channel: &KrausChannel,
    shape: FamilyShape,
    phi: f64,
    layout: &Layout,
    offset: u64,
) -> Result<OptResult> {
    if shape.family(&vec![0.1; shape.dimension()]).n_qubits() != layout.n_total() {
        return Err(Error::DimensionMismatch(format!(
            "{shape:?} family does not fit a {}-qubit layout",
            layout.n_total()
        )));
    }

    let evaluations = std::cell::Cell::new(0usize);
    let objective = |params: &[f64]| -> f64 {
        let clean = shape.sanitize(params);
        evaluations.set(evaluations.get() + 1);
        let family = shape.family(&clean);
        make_state(&family)
            .and_then(|input| PhaseScenario::new(channel.clone(), input, layout.clone(), phi))
            .and_then(|s| qfi_scenario(&s))
            .unwrap_or(f64::NEG_INFINITY)
    };

    let bounds = shape.bounds();
    let dim = shape.dimension();
    let mut best = Best {
        params: vec![0.0; dim],
        value: f64::NEG_INFINITY,
    };

    // Grid seeds. The offset slides every grid by a fraction of its spacing.
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    let frac = (offset as f64 * 0.137).fract();
    match shape {
        FamilyShape::AncillaPair => {
            for i in 0..17 {
                let (lo, hi) = bounds[0];
                let t = ((i as f64 + frac) / 16.0).min(1.0);
                seeds.push(vec![lo + t * (hi - lo)]);
            }
        }
        FamilyShape::Single => {
            for i in 0..17 {
                for j in 0..17 {
                    let te = ((i as f64 + frac) / 16.0).min(1.0);
                    let ta = ((j as f64 + frac) / 17.0).fract();
                    seeds.push(vec![te, ta * 2.0 * PI]);
                }
            }
        }
        FamilyShape::GenericTwoQubit => {
            seeds.extend(generic_two_qubit_seeds());
            // Axis scans through the domain center, 17 points per dimension.
            let center: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
            for d in 0..dim {
                let (lo, hi) = bounds[d];
                for i in 0..17 {
                    let t = ((i as f64 + frac) / 16.0).min(1.0);
                    let mut p = center.clone();
                    p[d] = lo + t * (hi - lo);
                    seeds.push(p);
                }
            }
            // A fixed stratified lattice fills in the rest of the volume.
            let lattice = CounterRng::new(0x51D5_EEDC ^ offset);
            for k in 0..256u64 {
                let p: Vec<f64> = (0..dim as u64)
                    .map(|d| {
                        let (lo, hi) = bounds[d as usize];
                        lo + lattice.uniform(k * dim as u64 + d) * (hi - lo)
                    })
                    .collect();
                seeds.push(p);
            }
        }
    }

    let mut scored: Vec<(f64, Vec<f64>)> = seeds
        .into_iter()
        .map(|p| {
            let v = objective(&p);
            best.offer(&shape.sanitize(&p), v);
            (v, p)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Refine from the best seeds; one extra polishing run from the winner.
    let starts = match shape {
        FamilyShape::GenericTwoQubit => 6,
        _ => 3,
    };
    let mut winner_converged = false;
    for (_, start) in scored.iter().take(starts) {
        let steps: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.08 * (hi - lo)).collect();
        let run = nelder_mead_max(&objective, start, &steps, 10_000);
        let clean = shape.sanitize(&run.params);
        let prev = best.value;
        best.offer(&clean, run.value);
        if best.value > prev || run.value == best.value {
            winner_converged = run.converged;
        }
    }
    let polish_steps: Vec<f64> = bounds.iter().map(|(lo, hi)| 1e-3 * (hi - lo)).collect();
    let start = best.params.clone();
    let polish = nelder_mead_max(&objective, &start, &polish_steps, 10_000);
    best.offer(&shape.sanitize(&polish.params), polish.value);

    Ok(OptResult {
        best_params: best.params,
        best_qfi: best.value,
        evaluations: evaluations.get(),
        converged: polish.converged || winner_converged,
    })
}

/// Hand-picked seed states covering the corners of the two-qubit manifold:
/// the Bell states, computational basis states, the balanced product state,
/// and partially entangled |00⟩/|11⟩ superpositions.
fn generic_two_qubit_seeds() -> Vec<Vec<f64>> {
    let acos_inv_sqrt3 = (1.0 / 3.0f64.sqrt()).acos();
    vec![
        vec![FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0], // (|00⟩+|11⟩)/√2
        vec![FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, PI],  // (|00⟩−|11⟩)/√2
        vec![FRAC_PI_2, FRAC_PI_4, 0.0, 0.0, 0.0, 0.0],       // (|01⟩+|10⟩)/√2
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0],                   // |00⟩
        vec![FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0], // |11⟩
        vec![PI / 3.0, acos_inv_sqrt3, FRAC_PI_4, 0.0, 0.0, 0.0], // |+⟩|+⟩
        vec![PI / 3.0, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0],  // |00⟩/2 + √3|11⟩/2
        vec![PI / 8.0, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0],  // mostly |00⟩
        vec![3.0 * PI / 8.0, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0], // mostly |11⟩
    ]
}

/// Maximizes the QFI over generic two-qubit probes with the channel acting
/// independently on both qubits. The NOON state is among the seeds, so the
/// result is never worse than it.
pub fn optimize_two_probes(channel: &KrausChannel, phi: f64) -> Result<OptResult> {
    optimize_family(
        channel,
        FamilyShape::GenericTwoQubit,
        phi,
        &Layout::two_probes(),
    )
}

/// Bisects `advantage(η) = 0` on [lo, hi]; `advantage` must be positive at
/// `lo` and negative at `hi`. Used to locate the noise level where the
/// four-qubit NOON strategy stops beating the best two-qubit probe.
pub fn bisect_crossing<F>(mut advantage: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = advantage(lo)?;
    let f_hi = advantage(hi)?;
    if f_lo <= 0.0 || f_hi >= 0.0 {
        return Err(Error::Domain(format!(
            "bracket [{lo}, {hi}] does not straddle the crossing: f(lo) = {f_lo}, f(hi) = {f_hi}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if advantage(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

struct NmRun {
    params: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Nelder–Mead ascent: reflection, expansion, contraction and shrink on a
/// d+1 simplex, stopping when the simplex diameter falls below 1e−7 or the
/// evaluation budget runs out.
fn nelder_mead_max<F: Fn(&[f64]) -> f64>(
    f: &F,
    start: &[f64],
    steps: &[f64],
    max_evals: usize,
) -> NmRun {
    const DIAMETER_TOL: f64 = 1e-7;
    let dim = start.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |p: &[f64]| {
        evals.set(evals.get() + 1);
        f(p)
    };

    // Vertices carry (params, −f); we minimize −f.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = -eval(start);
    simplex.push((start.to_vec(), v0));
    for d in 0..dim {
        let mut p = start.to_vec();
        p[d] += if steps[d] != 0.0 { steps[d] } else { 0.05 };
        let v = -eval(&p);
        simplex.push((p, v));
    }

    let diameter = |s: &[(Vec<f64>, f64)]| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let d = s[i]
                    .0
                    .iter()
                    .zip(s[j].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(d);
            }
        }
        worst
    };

    let mut converged = false;
    while evals.get() < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&simplex) < DIAMETER_TOL {
            converged = true;
            break;
        }
        let worst = simplex[dim].clone();
        let second_worst = simplex[dim - 1].1;
        let best_val = simplex[0].1;

        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|(p, _)| p[d]).sum::<f64>() / dim as f64)
            .collect();
        let blend = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst.0.iter())
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = blend(1.0);
        let fr = -eval(&reflected);
        if fr < best_val {
            let expanded = blend(2.0);
            let fe = -eval(&expanded);
            simplex[dim] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < second_worst {
            simplex[dim] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 {
                blend(0.5) // outside
            } else {
                blend(-0.5) // inside
            };
            let fc = -eval(&contracted);
            if fc < worst.1.min(fr) {
                simplex[dim] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let p: Vec<f64> = vertex
                        .0
                        .iter()
                        .zip(anchor.iter())
                        .map(|(x, a)| a + 0.5 * (x - a))
                        .collect();
                    let v = -eval(&p);
                    *vertex = (p, v);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NmRun {
        params: simplex[0].0.clone(),
        value: -simplex[0].1,
        converged,
    }
}
