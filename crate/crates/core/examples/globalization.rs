//! From a vector of local classes to a global ideal of `Int(Z)` and back, and
//! the principal-ideal test on both sides of the kernel.

use ivp::globalpic::{
    divisorially_principal, exactness_report, globalize, pi_theta, ExactnessSpec, LocalClassVector,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v: LocalClassVector = "2:[0,1];3:[0,0,1]".parse()?;
    let i = globalize(&v)?;
    println!("globalize({v}) = ({i})");
    println!("read back: {}", pi_theta(&i)?);

    let verdict = divisorially_principal(&i)?;
    println!("principal: {}", verdict.principal);
    let trivial = i.mul(&globalize(&v.neg())?)?;
    let verdict = divisorially_principal(&trivial)?;
    println!(
        "times its inverse: principal {} generator {:?}",
        verdict.principal, verdict.generator
    );

    let report = exactness_report(&ExactnessSpec::new(5, 20))?;
    println!(
        "exactness on 20 vectors: surjectivity {:?} kernel {:?} nontrivial {:?}",
        report.surjectivity, report.kernel, report.nontrivial
    );
    Ok(())
}
