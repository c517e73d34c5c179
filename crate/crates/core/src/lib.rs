//! Symbolic-numeric kernel for the contiguity structure of Radon
//! hypergeometric functions on Grassmannians: exact Capelli/Cayley operator
//! identities, Jordan-group characters, integrand-level contiguity checks
//! (non-confluent symbolically, confluent numerically via jets), orbit
//! normal-form reductions, and Hermitian-matrix beta/gamma contiguity via
//! eigenvalue-reduced quadrature.

pub mod dd;
pub mod exact_algebra;
pub mod jets;
pub mod jordan;
pub mod matrix;
pub mod perm;
pub mod report;
pub mod scalar;
pub mod weyl;
