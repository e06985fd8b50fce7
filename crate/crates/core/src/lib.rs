//! Exact equivariant index multiplicities of prequantized Hamiltonian torus
//! spaces, computed from isolated fixed-point (GKM) data.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: rational vectors and matrices, integer lattices.
//! * [`root_lattice`]: weight lattices with an inner product, root systems and
//!   explicitly enumerated Weyl groups.
//! * [`character`]: finitely supported characters on the weight lattice.
//! * [`localization`]: the fixed-point formula expanded into vector partition
//!   functions, plus an independent truncated-series oracle.
//! * [`geometry`]: exact polytopes, the component enumeration of the GKM graph,
//!   the choice of the small dominant vector and the polytope/cone on which the
//!   multiplicity is quasi-polynomial.
//! * [`quasipoly`]: exact fitting and evaluation of quasi-polynomials.
//! * [`reduction`]: the reduced-space side in the dimension-zero case and the
//!   comparison certificates.
//! * [`corpus`], [`document`], [`cli`]: the example models, the JSON formats and
//!   the `qr` command line front end.
//!
//! No floating point is used anywhere: lattice coordinates are `i64`,
//! multiplicities are [`num_bigint::BigInt`] and everything else is
//! [`num_rational::BigRational`].

pub mod character;
pub mod cli;
pub mod corpus;
pub mod document;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod localization;
pub mod quasipoly;
pub mod reduction;
pub mod root_lattice;

pub use character::{FormalCharacter, LatticeBox};
pub use error::{Error, Result};
pub use geometry::{AffineSubspace, ComponentDatum, ConeConstruction, RationalPolytope};
pub use linalg::{QVec, Q};
pub use localization::{FixedPoint, FixedPointModel, Multiplicities, Polarization};
pub use quasipoly::{ConeRegion, QuasiPolynomial};
pub use reduction::{QrCertificate, ReducedLevelData};
pub use root_lattice::{RootSystem, WeightLattice, WeylElement};
