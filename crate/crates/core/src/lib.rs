//! Exact operator algebra for the metric of the PT-symmetric `−x⁴`
//! Hamiltonian, and numerical solvers showing the resulting Hermitian
//! Hamiltonian is isospectral to it.

pub mod metric;
pub mod spectra;
pub mod weyl;
