//! Exact enumeration toolkit for directed convex polyominoes.
//!
//! * [`lattice`]: normalized polyominoes, class predicates, statistics, and
//!   the completion/cut decomposition.
//! * [`enumerate`]: brute-force generators and the generic convexity-degree
//!   oracle.
//! * [`bounce`]: bounce paths, cell degrees, the crossing skeleton and the
//!   directed k-convexity test.
//! * [`forest`]: ordered trees and forests, the lighting map between
//!   parallelogram polyominoes and pairs of forests, triplets, and
//!   bilateral Dyck words.
//! * [`series`]: exact polynomial and truncated power-series arithmetic and
//!   every generating function the toolkit checks against enumeration.

pub mod bounce;
pub mod enumerate;
pub mod error;
pub mod forest;
pub mod lattice;
pub mod series;

pub use error::{Error, Result};
pub use lattice::{Cell, ClassReport, CutPath, Polyomino, StatRecord, Step};
