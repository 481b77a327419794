//! Closed C² space curves of constant curvature one, compiled from braid
//! words and numerically certified.
//!
//! The pipeline: a braid word is stacked into crossing components and closed
//! with arcs on the 4π lattice ([`braid`]), each lattice step becomes a stick
//! ([`blocks`]) made of spliced helix arcs ([`geometry`]), the lattice gate
//! ([`lattice`]) guards simplicity before any geometry is produced, and
//! [`verify`] certifies the result. [`export`] reads and writes the curve
//! document, OBJ and CSV formats.

pub mod blocks;
pub mod braid;
pub mod error;
pub mod export;
pub mod geometry;
pub mod lattice;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{FrenetFrame, HelixSegment, PiecewiseCurve, PlacedSegment, RigidMotion, Vec3};
