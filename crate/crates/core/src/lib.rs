//! Computational core for isolators, root sets and separability witnesses in
//! finitely generated nilpotent groups given by consistent polycyclic
//! presentations.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function over immutable values; IO, file formats and the command line live
//! in the companion `nilsep` crate.
//!
//! The root class of groups a computation refers to is represented entirely by
//! its set of primes, see [`PrimeSet`].

#![no_std]

extern crate alloc;

mod error;
pub mod primes;
pub mod lattice;
pub mod pc;
pub mod subgroup;
pub mod series;
pub mod hom;
pub mod isolator;
pub mod separability;
pub mod criteria;

pub use error::{Error, Result};
pub use hom::{Homomorphism, SubgroupMap};
pub use isolator::{RootWitness, isolator, is_isolated, nth_root, nth_roots, root_witness, root_witnesses, torsion_isolator};
pub use lattice::IntMatrix;
pub use pc::{Element, GeneratorSpec, Int, PcPresentation, RelativeOrder, Word};
pub use primes::PrimeSet;
pub use subgroup::{Index, Subgroup};
