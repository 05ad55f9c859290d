//! Full scattered models of depth 0 to 3, and a model loaded from JSON.

use ivp::spectra::{
    derived_sequence, full_model, picpol_decomposition, AlmDedModel, Decomposition,
};

const MODEL: &str = r#"{
  "depth": 2,
  "labels": {"top": []},
  "rules": [
    {"select": "all", "residue_char": 3, "residue_size": "inf", "localization_ok": true},
    {"select": {"level": 2}, "residue_size": 9}
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 0..=3 {
        let m = full_model(k, 2, Some(true))?;
        let seq = derived_sequence(&m);
        println!("depth {k}: rank {:?}", seq.rank);
        match picpol_decomposition(&m) {
            Decomposition::Decomposed { summands, .. } => {
                for s in summands {
                    println!("  {} over {}", s.summand, s.points);
                }
            }
            Decomposition::Refused { message, .. } => println!("  refused: {message}"),
        }
    }

    let m = AlmDedModel::from_json(MODEL)?;
    let seq = derived_sequence(&m);
    println!(
        "loaded model: {:?}, rank {:?}",
        seq.classification, seq.rank
    );
    println!("finite residue points: {}", m.finite_residue());
    Ok(())
}
