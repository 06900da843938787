// Relative Cox spaces as lifted fans, with torsor and factoriality verdicts.

use std::error::Error;

use toric_core::cox::{is_factorial_cover, is_torsor, relative_cox_fan, smooth_full_cover};
use toric_core::divisors::{DivisorSubgroup, InvariantDivisor};
use toric_core::fan::{sigma_n_fan, single_cone_fan, LatticeVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a1 = single_cone_fan(&[
        LatticeVector::from_i64(&[1, 0]),
        LatticeVector::from_i64(&[1, 2]),
    ])?;
    for coeffs in [[1, 0], [2, 0]] {
        let n = DivisorSubgroup::new(&a1, vec![InvariantDivisor::from_i64(&coeffs)])?;
        let space = relative_cox_fan(&a1, &n)?;
        let rays: Vec<String> = space.total.rays().iter().map(ToString::to_string).collect();
        println!(
            "N = {n}: lifted rays {}, smooth {}, torsor {}, factorial {}",
            rays.join(" "),
            space.is_smooth(),
            is_torsor(&a1, &n)?.is_torsor(),
            is_factorial_cover(&a1, &n)?.is_factorial()
        );
    }

    let full = smooth_full_cover(&sigma_n_fan(3)?)?;
    println!(
        "full cover of sigma_3: rank {}, smooth {}",
        full.total.ambient_rank(),
        full.is_smooth()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
