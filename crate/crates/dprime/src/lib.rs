//! Construction D' lattice toolkit.
//!
//! Builds lattices from nested QC-LDPC codes, encodes integer or per-level
//! binary messages onto them, decodes with multistage successive
//! cancellation, and shapes the result with Voronoi constellations of
//! low-dimensional lattices for power-constrained AWGN channels.

pub mod binmat;
pub mod decode;
pub mod encode;
pub mod exact;
pub mod lattice;
pub mod qc;
pub mod shaping;
pub mod sim;
