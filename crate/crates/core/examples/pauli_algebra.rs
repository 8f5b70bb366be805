//! Pauli-string arithmetic with the textual notation.

use selfmeasure::pauli::{apply, commutator, format_sum, PauliString, PauliSum};
use selfmeasure::hilbert::StateVector;

fn main() -> selfmeasure::Result<()> {
    let a: PauliSum = "X0*Y1 + 0.5*Z0".parse()?;
    let b: PauliSum = "Z0*Z1".parse()?;
    println!("A        = {}", format_sum(&a));
    println!("B        = {}", format_sum(&b));
    println!("A B      = {}", a.product(&b));
    println!("[A, B]   = {}", commutator(&a, &b));
    println!("A is Hermitian: {}", a.is_hermitian(1e-12));

    let s: PauliString = "X0*Y1".parse()?;
    let t: PauliString = "Y0*X1".parse()?;
    println!("{s} and {t} commute: {}", s.commutes_with(&t));

    // Y|u> = i|d>
    let psi = StateVector::up("0");
    let y: PauliString = "Y0".parse()?;
    println!("Y0 |u> = {:?}", apply(&y, &psi)?.amplitudes());
    Ok(())
}
