pub mod algebra;
pub mod bilinear;
pub mod classify;
pub mod clifford;
pub mod dual;
pub mod error;
pub mod momentum;
pub mod rng;
pub mod spinor;
pub mod symmetry;
pub mod tolerance;
pub mod reference;
pub mod spinsum;
pub mod cli;
pub mod report;
