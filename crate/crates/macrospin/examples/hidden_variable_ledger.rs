//! A direct look inside the hidden-variable ledger: prepare the Bell
//! singlet at settings (z, y), and inspect one trajectory's direct and
//! inferred λ values. The y anticorrelation pins site A's would-be y
//! outcome even while A carries a direct z value — both are present
//! simultaneously, with explicit provenance.

use rand::SeedableRng;

use macrospin::ledger::{ledger_apply_unitary, ledger_init, QubitPointerSystem};
use macrospin::qubit::{self, Axis, Setting};

fn show(ledger: &macrospin::ledger::Ledger) {
    for (site, record) in ledger.sites.iter().enumerate() {
        let name = ["A", "B", "C"][site];
        let direct = record
            .direct
            .map(|v| format!("{v:+}"))
            .unwrap_or_else(|| "-".into());
        print!(
            "  site {name}: setting {}, direct {direct}",
            record.pointer_setting.label()
        );
        for inf in &record.inferred {
            let cited: Vec<String> = inf
                .provenance
                .iter()
                .map(|p| format!("{}@epoch{}", ["A", "B", "C"][p.site], p.epoch))
                .collect();
            print!(
                ", inferred {} = {:+} (from {})",
                inf.setting.label(),
                inf.value,
                cited.join(", ")
            );
        }
        println!();
    }
}

fn main() -> macrospin::Result<()> {
    let system = QubitPointerSystem { state: qubit::bell_state() };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let mut ledger = ledger_init(
        &system,
        &[Setting::Axis(Axis::Z), Setting::Axis(Axis::Y)],
        &mut rng,
    )?;
    println!("prepared at (z, y):");
    show(&ledger);

    ledger_apply_unitary(&mut ledger, &system, 0, Setting::Axis(Axis::Y), &mut rng)?;
    println!("after the setting unitary A -> y (epoch {}):", ledger.epoch);
    show(&ledger);
    Ok(())
}
