//! NOON-state qubits: the ideal beam-splitter-style rotations on the
//! {|N,0⟩, |0,N⟩} span are exactly unitary, and a two-mode nonlinear
//! Hamiltonian realizes the balanced gate with fidelity above 0.99 at
//! some scanned coupling ratio and evolution time.

use macrospin::experiments::run_noon;

fn main() -> macrospin::Result<()> {
    for n in [2usize, 5] {
        let report = run_noon(n, 24, 40)?;
        print!("{}", report.to_text());
        println!();
    }
    Ok(())
}
