pub mod cli;
pub mod cox;
pub mod divisors;
pub mod fan;
pub mod lattice;
pub mod singularities;
pub mod tower;
