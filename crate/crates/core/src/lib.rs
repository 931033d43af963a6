//! Forces on a neutral atom near a shielded slab.
//!
//! The library computes the three families of forces relevant to a
//! short-range gravity experiment in a planar vacuum/gold/vacuum/silicon
//! geometry:
//!
//! * the Casimir-Polder force from the layered surface, evaluated by
//!   adaptive double quadrature over imaginary frequency and parallel
//!   wavevector ([`casimir_polder`]),
//! * Yukawa fifth-force contributions for infinite slabs (closed form)
//!   and finite cuboids (adaptive cubature) ([`yukawa`]),
//! * Newtonian terms and the conversion of force differences into
//!   Bloch-oscillation observables and exclusion boundaries
//!   ([`experiment`]).
//!
//! Sign conventions: potentials are negative for attractive
//! configurations; all reported force values are attraction magnitudes
//! (directed toward the surface for the Casimir-Polder and toward the
//! source body for the gravity-type terms). The direction is stated in
//! each function's documentation rather than encoded in the sign.

pub mod casimir_polder;
pub mod constants;
pub mod experiment;
pub mod materials;
pub mod multilayer;
pub mod quad;
pub mod yukawa;

pub use casimir_polder::{CpError, CpQuadratureSpec, CpResult};
pub use materials::{AtomModel, DielectricModel};
pub use multilayer::{Layer, LayerStack, Polarization, TransverseMode};
pub use yukawa::{Cuboid, CubatureSpec, YukawaParams};
