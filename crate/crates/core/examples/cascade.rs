//! Observers built from several chains, each measuring the interference
//! term left by the chains before it.

use selfmeasure::cascade::{compare_b2, information_tradeoff, unmeasured_it_exists, CascadeModel};
use selfmeasure::polar_deg;

fn main() -> selfmeasure::Result<()> {
    let (a1, a2) = (polar_deg(0.6, 20.0), polar_deg(0.8, 65.0));

    let two = CascadeModel::uniform(2, a1, a2)?;
    let t = information_tradeoff(&two)?;
    println!("chain 1 pointer before/after: {:+.6} / {:+.6}", t.mu_before, t.mu_after);
    println!("B before, chain 2 pointer after: {:+.6} / {:+.6}", t.b_before, t.bprime_after);

    let b2 = compare_b2(&two)?;
    println!("second-generation IT (pure, mixed): {:+.6}, {:+.6}", b2.joint_pure, b2.joint_mixed);

    for chains in [vec![1, 1, 1], vec![2, 1, 3]] {
        let model = CascadeModel::new(chains.clone(), a1, a2)?;
        let (report, _) = unmeasured_it_exists(&model)?;
        println!(
            "chains {chains:?}: terminal witness on {} qubits, covers observer {}, deviation {:.4}",
            report.support.len(),
            report.covers_observer,
            report.deviation
        );
    }
    Ok(())
}
