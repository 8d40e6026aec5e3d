//! Timing of the irreversible pointer stage: interleaving site A's
//! collapse with remote setting unitaries at B and C in every order
//! leaves the final joint distribution unchanged to machine precision.

use macrospin::experiments::run_timing_invariance;

fn main() -> macrospin::Result<()> {
    let report = run_timing_invariance()?;
    print!("{}", report.to_text());
    Ok(())
}
