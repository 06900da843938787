// Alternating finite covers and Cox steps over a Z/2 point.
//
// With the sparse label recipe every Cox step fails to be a torsor; adding all
// labels makes every step after the first a torsor.

use std::error::Error;

use toric_core::tower::{demo_iteration2, LabelRecipe};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sparse = demo_iteration2(2, &[2, 2, 2], LabelRecipe::Sparse)?;
    print!("{sparse}");
    println!("not-torsor Cox steps: {}", sparse.not_torsor_count());

    let full = demo_iteration2(2, &[2, 2, 2], LabelRecipe::FullLabels)?;
    print!("{full}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
