//! Writes the three figure-reproduction datasets to ./datasets/ as CSV.
//! Equivalent to the `qfi-lab fig` subcommands.
//!
//! ```bash
//! cargo run --release --example figure_datasets
//! ```

use qfi_lab::cli::{fig2a, fig2b, fig3};

fn main() -> qfi_lab::Result<()> {
    std::fs::create_dir_all("datasets")?;
    for (name, doc) in [
        ("fig2a.csv", fig2a(None)?),
        ("fig2b.csv", fig2b(None)?),
        ("fig3.csv", fig3(None)?),
    ] {
        let path = format!("datasets/{name}");
        std::fs::write(&path, &doc)?;
        println!("wrote {path} ({} lines)", doc.lines().count());
    }
    println!("Columns: fig2a eta vs single/pair strategies; fig2b eta vs two-probe");
    println!("strategies and the upper bound; fig3 the p1 = 0 Pauli simplex slice.");
    Ok(())
}
