// Class groups, Cartier tests and Weil divisors modulo Cartier divisors.

use std::error::Error;

use toric_core::divisors::{
    cartier_index, class_group, is_cartier, local_class_group, principal_divisor, weil_mod_cartier,
    InvariantDivisor,
};
use toric_core::fan::{projective_plane, sigma_n_fan, single_cone_fan, LatticeVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p2 = projective_plane();
    let m = LatticeVector::from_i64(&[1, 0]);
    println!(
        "P^2: Cl = {}, div(x) = {}",
        class_group(&p2),
        principal_divisor(&p2, &m)?
    );

    let a1 = single_cone_fan(&[
        LatticeVector::from_i64(&[0, 1]),
        LatticeVector::from_i64(&[2, 1]),
    ])?;
    let d = InvariantDivisor::from_i64(&[1, 0]);
    println!(
        "A1 cone: Cl = {}, D cartier {}, index {:?}",
        class_group(&a1),
        is_cartier(&a1, &d)?,
        cartier_index(&a1, &d)?.map(|k| k.to_string())
    );

    for n in 2..=4 {
        let f = sigma_n_fan(n)?;
        let wmc = weil_mod_cartier(&f)?;
        println!(
            "sigma_{n}: local Cl of singular cone {}, WDiv/CaDiv {}, kernel = Cartier: {}",
            local_class_group(&f, 0)?,
            wmc.group,
            wmc.is_monomorphism()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
