//! One rotation is not enough to see nonlocality: the three-site state
//! prepared at settings (y, x, x) and its separable A–BC mixture give
//! identical statistics under the single further rotation at A (and even
//! under the B, C rotations to y); only a continuation that restores the
//! y setting at A separates them.

use macrospin::experiments::run_single_rotation_equivalence;

fn main() -> macrospin::Result<()> {
    let report = run_single_rotation_equivalence()?;
    print!("{}", report.to_text());
    Ok(())
}
