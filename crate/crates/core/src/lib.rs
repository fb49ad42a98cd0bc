//! Core of the random-cluster laboratory: lattice domains, the measure and its
//! exact enumeration, Markov chain samplers, connectivity events, the
//! parafermionic observable and discrete extremal length.
//!
//! The crate is `no_std` with `alloc`; IO, threading and the command line live
//! in the companion `rcmlab` crate.

#![no_std]

extern crate alloc;

pub mod arms;
pub mod connectivity;
pub mod domain;
pub mod enumerate;
pub mod error;
pub mod extremal;
pub mod flow;
pub mod measure;
pub mod medial;
pub mod parafermion;
pub mod sampler;
pub mod stats;
pub mod unionfind;

pub use domain::{Annulus, BoundaryLoop, Domain, Mask, Point, Quad};
pub use enumerate::{enumerate, exact_probability, ExactMeasure, Executor, Sequential};
pub use error::{Error, Result};
pub use extremal::extremal_distance;
pub use arms::{detect_arms, ArmSpec};
pub use measure::{cluster_count, critical_p, weight, BoundaryPartition, Configuration, Weights};
