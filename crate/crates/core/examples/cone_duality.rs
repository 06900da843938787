// Dual cones, faces, multiplicities and fan validation.

use std::error::Error;

use toric_core::fan::{dual_cone, sigma_n_fan, validate_fan, Cone, Fan, LatticeVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let v = |x: &[i64]| LatticeVector::from_i64(x);
    let c = Cone::new(&[v(&[1, 0]), v(&[1, 2])])?;
    let dual: Vec<String> = dual_cone(&c).iter().map(ToString::to_string).collect();
    println!(
        "{c}: dual {}, multiplicity {}",
        dual.join(" "),
        c.multiplicity()?
    );
    println!("{} faces", c.faces().len());

    let s3 = sigma_n_fan(3)?;
    println!(
        "sigma_3 valid: {}, singular cones {:?}",
        validate_fan(&s3).is_valid(),
        s3.singular_cones()
    );

    // two cones overlapping in their interiors
    let bad = Fan::new(
        2,
        vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])],
        vec![vec![0, 1], vec![0, 2]],
    )?;
    for violation in validate_fan(&bad).violations {
        println!("violation: {violation}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
