//! The conductor criterion for `Int(Z)T = Int(T)` over a handful of overrings,
//! then a seeded sweep.
//!
//! ```text
//! cargo run --example localization_criterion -- [seed]
//! ```

use ivp::exactnum::OverringZ;
use ivp::intpoly::BinPoly;
use ivp::localize::{criterion_holds, noetherian_oracle, SampleSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map_or(Ok(1), |s| s.parse())?;

    let f: BinPoly = "[0, -1/5, 0, 0, 0, 1/5]".parse()?;
    println!("f = {f}");
    for t in ["Z_(5)", "Z_(2)", "Z[1/5]", "Q"] {
        let t: OverringZ = t.parse()?;
        let v = criterion_holds(&f, &t)?;
        println!(
            "  over {:<8} lhs {:<8} rhs {:<8} equal {}",
            t.to_string(),
            v.lhs,
            v.rhs,
            v.equal
        );
    }

    let sample = SampleSpec {
        degree_bound: 6,
        height_bound: 100,
        count: 200,
        seed,
    };
    for t in ["Z_(2)", "Z[1/6]"] {
        let report = noetherian_oracle(&sample, &t.parse()?)?;
        println!("{t}: {}/{} equal", report.equal, report.total);
    }
    Ok(())
}
