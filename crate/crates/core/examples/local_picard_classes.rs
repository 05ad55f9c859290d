//! Step-function classes in the local Picard group of `Int(Z_(p))`: realize a
//! class as an ideal, read it back, and multiply.

use ivp::picdvr::{class_of_ideal, realize_class, value_function, Ambient, IntIdeal, StepClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ideal = IntIdeal::parse("2; [-1, 1]", Ambient::Local(2))?;
    println!("I = ({ideal})");
    println!("  values mod 4: {:?}", value_function(&ideal, 2)?);
    println!("  class {}", class_of_ideal(&ideal)?);

    let a = StepClass::new(3, 1, vec![0, 2, 1])?;
    let b = StepClass::ball_indicator(3, 4, 2)?;
    let (ia, ib) = (realize_class(&a)?, realize_class(&b)?);
    println!(
        "a = {a} realized by {} generators",
        ia.poly_gens().len() + 1
    );
    println!(
        "b = {b} realized by {} generators",
        ib.poly_gens().len() + 1
    );
    let product = ia.mul(&ib)?;
    println!("class of the product: {}", class_of_ideal(&product)?);
    println!("a + b:                {}", a.add(&b)?);
    Ok(())
}
