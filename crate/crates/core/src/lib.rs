//! Spectral spin geometry on flat tori and round spheres: exact Clifford
//! algebra representations, closed-form Dirac spectra, Fourier-Galerkin
//! discretization under conformal metric change, eigenvalue perturbation
//! formulas, and Bessel-based Green's functions with lattice image sums.

pub mod cmat;
pub mod util;

pub mod clifford;
pub mod lattice;
pub mod spectrum;
pub mod torus;
