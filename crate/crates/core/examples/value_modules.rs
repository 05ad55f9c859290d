//! Value modules, conductors and fixed divisors of a few polynomials.

use ivp::exactnum::{format_rational, OverringZ};
use ivp::intpoly::BinPoly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = OverringZ::integers();
    for text in [
        "[0, -1, 0, 0, 0, 1]",
        "[0, 1, 1]",
        "[1/2, 0, 1/3]",
        "[0, 1/6, 1/2, 1/3]",
    ] {
        let f: BinPoly = text.parse()?;
        let binomial: Vec<String> = f.coeffs().iter().map(format_rational).collect();
        println!("f = {f}  (binomial basis [{}])", binomial.join(", "));
        println!("  f(Z)Z     = {}", f.value_module(&z)?);
        println!("  conductor = {}", f.conductor(&z)?);
        println!("  int-valued: {}", f.is_int_valued());
        if f.is_int_valued() {
            println!("  fixed divisor {}", f.fixed_divisor()?);
        }
    }
    Ok(())
}
