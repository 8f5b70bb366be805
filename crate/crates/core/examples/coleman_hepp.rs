//! Step a particle through an N-atom chain and compare with the closed form.
//!
//! Usage: `cargo run --example coleman_hepp -- 5`

use selfmeasure::coleman_hepp::{derived_it_expectation, it_operator, ChainModel};
use selfmeasure::pauli::expectation;
use selfmeasure::polar_deg;

fn main() -> selfmeasure::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let model = ChainModel::new(n, polar_deg(0.6, 0.0), polar_deg(0.8, 45.0))?;
    let mut passage = model.passage();
    for atom in 1..=n {
        let state = passage.step(atom)?;
        println!("after atom {atom}: norm {:.15}", state.norm());
    }
    let fidelity = passage.state().fidelity(&model.closed_form_final())?;
    println!("fidelity with closed form: {fidelity:.15}");

    let b = it_operator(n);
    println!("B = {b}");
    println!(
        "<B> = {:+.6} (expected {:+.6})",
        expectation(&b, passage.state())?,
        derived_it_expectation(n, model.a1(), model.a2())
    );
    Ok(())
}
