//! A qubit entangled with two pointer qubits, then traced down.
//!
//! Run with `cargo run --example premeasurement`.

use selfmeasure::hilbert::{build_premeasurement, mixture_of, DensityMatrix, StateVector};
use selfmeasure::polar_deg;

fn main() -> selfmeasure::Result<()> {
    let (a1, a2) = (polar_deg(0.6, 0.0), polar_deg(0.8, 30.0));
    let pairs = [
        (StateVector::up("s"), StateVector::down("s")),
        (StateVector::up("D"), StateVector::down("D")),
        (StateVector::up("O"), StateVector::down("O")),
    ];
    let branches = build_premeasurement(a1, a2, &pairs)?;
    let pure = DensityMatrix::from_pure(&branches.superposition());
    let mixed = mixture_of(&branches);

    println!("layout: {}", pure.layout());
    println!("purity of the global state:   {:.6}", pure.purity());
    println!("purity of the branch mixture: {:.6}", mixed.purity());

    for keep in [&["s"][..], &["s", "D"][..]] {
        let reduced = pure.partial_trace(keep)?;
        let from_mixture = mixed.partial_trace(keep)?;
        println!(
            "{:?}: purity {:.6}, differs from mixture by {:.2e}",
            keep,
            reduced.purity(),
            reduced.max_abs_diff(&from_mixture)?
        );
    }
    Ok(())
}
