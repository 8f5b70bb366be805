use selfmeasure::coleman_hepp::{
    detector_single_flip_state, detector_up_state, eigenstate_residual, heisenberg_hamiltonian,
};

fn main() -> selfmeasure::Result<()> {
    let j = 1.0;
    for n in 2..=6 {
        let h = heisenberg_hamiltonian(n, j)?;
        let up = eigenstate_residual(&h, &detector_up_state(n)?)?;
        let flip = eigenstate_residual(&h, &detector_single_flip_state(n)?)?;
        println!(
            "N={n}: all-up λ={:+.3} residual {:.1e}; one flip residual {:.3}",
            up.eigenvalue, up.residual, flip.residual
        );
    }
    Ok(())
}
