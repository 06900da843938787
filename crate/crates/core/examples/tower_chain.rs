// An increasing chain of divisor subgroups and where it stabilizes.

use std::error::Error;

use toric_core::divisors::{DivisorSubgroup, InvariantDivisor};
use toric_core::fan::sigma_n_fan;
use toric_core::tower::run_tower;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = sigma_n_fan(3)?;
    let d = |c: &[i64]| InvariantDivisor::from_i64(c);
    let chain = vec![
        DivisorSubgroup::new(&f, vec![d(&[0, 0, 0, 2])])?,
        DivisorSubgroup::new(&f, vec![d(&[0, 0, 0, 2]), d(&[1, 0, 0, 0])])?,
        DivisorSubgroup::new(&f, vec![d(&[0, 0, 0, 1]), d(&[1, 0, 0, 0])])?,
        DivisorSubgroup::all(&f),
    ];
    let t = run_tower(&f, &chain)?;
    for (i, (img, v)) in t.images.iter().zip(&t.verdicts).enumerate() {
        println!("step {}: image {img}, torsor {}", i + 1, v.is_torsor());
    }
    println!("stabilization index {}", t.stabilization_index);
    assert!(t.post_stabilization_torsors());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
