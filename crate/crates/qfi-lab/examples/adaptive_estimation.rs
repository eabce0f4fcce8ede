//! Adaptive Monte Carlo phase estimation: a feedback phase drives the
//! operating point to the sweet spot where the measurement saturates the
//! quantum Cramér–Rao bound.
//!
//! ```bash
//! cargo run --release --example adaptive_estimation
//! ```

use qfi_lab::channel::{make_channel, Layout, NoiseModel, PhaseScenario};
use qfi_lab::estimate::{
    adaptive_run, error_propagation_variance, observable_catalog, qcr_bound, sweet_spot,
    ObservableId,
};
use qfi_lab::qstate::{make_state, StateFamily};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

fn main() -> qfi_lab::Result<()> {
    let eta = 0.5;
    let true_phi = 1.0;
    let scenario = PhaseScenario::new(
        make_channel(NoiseModel::AmplitudeDamping { eta })?,
        make_state(&StateFamily::AncillaPair {
            gamma: FRAC_1_SQRT_2,
        })?,
        Layout::probe_with_ancilla(),
        true_phi,
    )?;
    let observable = observable_catalog(ObservableId::AdAncilla);

    let spot = sweet_spot(&scenario, &observable);
    let var_at_spot = error_propagation_variance(&scenario.at_phi(spot), &observable)?;
    println!("Amplitude damping eta = {eta}, true phase = {true_phi}");
    println!(
        "Sweet spot phi* = {spot:.6} (pi/2 = {FRAC_PI_2:.6}); single-shot variance there = {var_at_spot:.6}"
    );
    println!();

    let rounds = 10;
    let shots = 10_000;
    let run = adaptive_run(&scenario, &observable, rounds, shots, 42)?;

    println!("round   control c   operating point   |op - pi/2|");
    for (r, c) in run.feedback_phases.iter().enumerate() {
        let op = true_phi + c;
        println!(
            "  {:>2}    {c:+.5}      {op:.5}           {:.5}",
            r + 1,
            (op - FRAC_PI_2).abs()
        );
    }

    let bound = qcr_bound(&scenario, run.nu)?;
    println!();
    println!("estimate        = {:.6}  (true {true_phi})", run.estimate);
    println!("sample variance = {:.3e}", run.sample_variance);
    println!("QCR bound 1/(nu J) = {:.3e}", bound);
    println!("ratio           = {:.4}", run.sample_variance / bound);
    Ok(())
}
