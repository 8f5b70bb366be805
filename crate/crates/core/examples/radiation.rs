//! A lattice that remembers the particle's path by emitting photons.
//! Number-diagonal field observables never see the coherence; a quadrature does.

use selfmeasure::radiation::{
    check_c22, check_no_vacuum_interference, glauber_fields, glauber_generators,
    vacuum_connecting_observable, RadiationModel,
};

fn main() -> selfmeasure::Result<()> {
    let model = RadiationModel::default();
    for f in glauber_fields(&model) {
        println!("{:<10} vacuum interference {:.1e}", f.name, check_no_vacuum_interference(&f, &model)?);
    }

    let glauber = glauber_generators(&model)?;
    let blind = check_c22(&model, &glauber, 1e-12)?;
    println!("{} Glauber generators: distinguishable = {}", glauber.len(), blind.distinguishable);

    let widened = glauber.with(vacuum_connecting_observable(&model)?);
    let v = check_c22(&model, &widened, 1e-12)?;
    println!(
        "with a quadrature: distinguishable = {} via {} (deviation {:.4})",
        v.distinguishable,
        v.witness.unwrap_or_default(),
        v.max_deviation
    );
    Ok(())
}
