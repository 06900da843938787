// Reading a fan document and running the report commands on it.

use std::error::Error;

use toric_core::cli::{cmd_analyze, cmd_cox, cmd_divisor, CoxEmit, DivisorCheck, FanDocument};

const DOC: &str = "\
toricfan 1
rank 2
ray 1 0
ray 0 1
ray 2 1
cone 1 2
cone 0 2
divisor W 0 1 0
subgroup N W
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let doc = FanDocument::parse(DOC)?;
    println!("{} rays, {} cones", doc.rays.len(), doc.cones.len());
    print!("{}", cmd_analyze(DOC).stdout);
    print!("{}", cmd_divisor(DOC, "W", DivisorCheck::Cartier).stdout);

    let lifted = cmd_cox(DOC, Some("N"), false, CoxEmit::Fan);
    print!("{}", lifted.stdout);
    FanDocument::parse(&lifted.stdout)?.to_fan()?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
