pub mod affine;
pub mod borel;
pub mod hecke;
pub mod iwahori;
pub mod poset;
pub mod quiver;
pub mod scalar;
pub mod suites;
