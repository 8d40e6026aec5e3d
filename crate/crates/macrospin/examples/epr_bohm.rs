//! Spin-1/2 EPR-Bohm steering: on the Bell singlet, site B's readout
//! predicts site A's outcome exactly in two incompatible axes, driving
//! the inference-variance sum to zero (bound 1); the product state shows
//! the separable floor of 2.

use macrospin::experiments::{run_epr_bohm_qubit, EprVersion};

fn main() -> macrospin::Result<()> {
    for version in [EprVersion::TwoSpin, EprVersion::ThreeSpin] {
        let report = run_epr_bohm_qubit(version)?;
        print!("{}", report.to_text());
        println!();
    }
    Ok(())
}
