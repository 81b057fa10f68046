//! Toric codes and their decoders, the quantum double of a finite group with
//! machine-checked Hopf algebra axioms, an exact state-vector oracle for the
//! group lattice model, and a virtual machine for magnetic vortex pairs.

pub mod group;
pub mod double;
pub mod toric;
pub mod decoder;
pub mod lattice;
pub mod vm;
pub mod cli;
