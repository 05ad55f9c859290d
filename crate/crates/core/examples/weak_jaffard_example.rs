//! The weak Jaffard model: leaves with infinite residue fields accumulating at
//! one point with residue field `F_2`.

use ivp::spectra::{
    build_example_weakjaff, derived_sequence, localization_report, picpol_decomposition, Point,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = build_example_weakjaff(2)?;
    let seq = derived_sequence(&m);
    for step in &seq.steps {
        println!("njaff^{} = {}", step.alpha, step.njaff);
    }
    println!(
        "{:?}, rank {:?}, sharp {}",
        seq.classification, seq.rank, seq.sharp
    );
    for p in [Point::root(), Point(vec![0]), Point(vec![41])] {
        let r = localization_report(&m, &p)?;
        println!(
            "{:<8} localization {:?}: {}",
            r.point, r.localization, r.reason
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&picpol_decomposition(&m))?
    );
    Ok(())
}
