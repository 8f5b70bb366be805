use selfmeasure::coleman_hepp::{full_passage, pointer_operator, strict_check, ChainModel};
use selfmeasure::pauli::{Pauli, PauliSum};
use selfmeasure::polar_deg;

/// The pointer reproduces the system's σ_z statistics after the passage.
fn main() -> selfmeasure::Result<()> {
    let z0 = PauliSum::single("0", Pauli::Z);
    println!("{:>3} {:>12} {:>12} {:>10}", "N", "<σz>", "<μz>", "Δ");
    for n in 1..=8 {
        let model = ChainModel::new(n, polar_deg(0.6, 10.0), polar_deg(0.8, -70.0))?;
        let r = strict_check(&z0, &pointer_operator(n), &full_passage(&model)?)?;
        println!("{n:>3} {:>12.8} {:>12.8} {:>10.1e}", r.q_expect, r.qo_expect, r.delta);
    }
    Ok(())
}
