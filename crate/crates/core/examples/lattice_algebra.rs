// Smith forms, cokernels and images of group homomorphisms.

use std::error::Error;

use num_bigint::BigInt;
use toric_core::lattice::{cokernel, smith_normal_form, FgAbelianGroup, GroupHom, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let snf = smith_normal_form(&a);
    println!("A = {a}");
    println!("S = {}", snf.s);
    assert_eq!(&(&snf.u * &a) * &snf.v, snf.s);

    // the ray matrix of P^2 as a map M -> Z^3
    let rays = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]);
    println!("coker = {}", cokernel(&rays));

    let z4 = FgAbelianGroup::from_cyclic_orders(&[BigInt::from(4)]);
    let times_two = GroupHom::from_free(z4.clone(), &[vec![BigInt::from(2)]])?;
    println!("image of 1 -> 2 in {z4}: {}", times_two.image());
    assert!(!times_two.is_surjective());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
