// Log discrepancies, klt pairs and the canonical and terminal tests.

use std::error::Error;

use num_rational::BigRational;
use toric_core::fan::{affine_space, single_cone_fan, Cone, LatticeVector};
use toric_core::singularities::{
    is_canonical, is_terminal, klt_report, log_discrepancy, smooth_iff_factorial_check, ToricPair,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let v = |x: &[i64]| LatticeVector::from_i64(x);
    let a1 = single_cone_fan(&[v(&[0, 1]), v(&[2, 1])])?;
    let pair = ToricPair::without_boundary(a1.clone());
    println!("A1: a(1,1) = {}", log_discrepancy(&pair, &v(&[1, 1]))?);
    println!(
        "A1: canonical {}, terminal {}",
        is_canonical(&a1)?,
        is_terminal(&a1)?
    );
    println!("A3: terminal {}", is_terminal(&affine_space(3))?);

    let half = BigRational::new(1.into(), 2.into());
    let with_boundary =
        ToricPair::new(a1, vec![half.clone(), BigRational::from_integer(1.into())])?;
    let r = klt_report(&with_boundary);
    println!(
        "boundary (1/2, 1): klt {}, lc {}, reason {:?}",
        r.klt, r.lc, r.failure
    );

    let check =
        smooth_iff_factorial_check(&Cone::new(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 3])])?)?;
    println!(
        "smooth {}, factorial {}",
        check.is_smooth, check.is_factorial
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
