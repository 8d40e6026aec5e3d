//! The GHZ all-or-nothing contradiction: the four product moments
//! (−1, +1, +1, +1) admit no deterministic ±1 assignment (exhaustive
//! search over every candidate), yet a hidden-variable ledger that only
//! assigns values to pointer-prepared settings replays all the quantum
//! moments.

use macrospin::experiments::run_ghz;

fn main() -> macrospin::Result<()> {
    let report = run_ghz(1, 5000, 17)?;
    print!("{}", report.to_text());
    Ok(())
}
