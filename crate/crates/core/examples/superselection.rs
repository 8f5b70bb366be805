//! Which Pauli strings can tell the post-passage state from its branch mixture?

use selfmeasure::coleman_hepp::{full_passage, pointer_operator, ChainModel};
use selfmeasure::hilbert::mixture_of;
use selfmeasure::superselection::{
    all_pauli_strings, discriminate, pointer_sectors, restricted_algebra, Observable, ObservableSet,
};
use selfmeasure::pauli::PauliSum;
use selfmeasure::polar_deg;

fn main() -> selfmeasure::Result<()> {
    let n = 2;
    let model = ChainModel::new(n, polar_deg(0.6, 0.0), polar_deg(0.8, 0.0))?;
    let layout = model.layout();
    let pure = full_passage(&model)?;
    let mixed = mixture_of(&model.final_branches());

    let sectors = pointer_sectors(&pointer_operator(n), layout)?;
    println!("{} pointer sectors over dimension {}", sectors.len(), sectors.dim());

    let labels: Vec<&str> = layout.labels().collect();
    let pool = ObservableSet::new(
        "all strings",
        all_pauli_strings(&labels)
            .into_iter()
            .map(|s| Observable::pauli(PauliSum::from(s)))
            .collect(),
        1,
        layout,
    )?;
    let preserving = restricted_algebra(&sectors, &pool, layout, 1e-12)?;
    println!("{} of {} strings preserve the sectors", preserving.len(), pool.len());

    for set in [&preserving, &pool] {
        let v = discriminate(&pure, &mixed, set, 1e-12)?;
        println!(
            "{:<20} max deviation {:.3e}, witness {:?}",
            set.name,
            v.max_deviation,
            v.witness.as_deref().unwrap_or("-")
        );
    }
    Ok(())
}
