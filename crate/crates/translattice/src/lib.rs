//! Transcendental lattices of double planes by a Zariski-van Kampen method.
//!
//! Given a plane curve presented as a branch locus over an affine line, this
//! crate computes the braid monodromy of the branch points, the vanishing
//! cycles at the simple critical values, the second homology of the open
//! double cover as the kernel of a boundary map, and the induced intersection
//! lattice.  The radical quotient of that lattice is the transcendental
//! lattice of the associated projective surface, which is then classified as
//! an even positive-definite rank-2 lattice up to isomorphism and genus.
//!
//! The crate is organized in layers:
//!
//! * [`exact`] — exact arithmetic over `Q(sqrt d)`, multivariate polynomials,
//!   resultants, truncated power series, and integer matrix normal forms.
//! * [`lattice`] — rank-2 even lattice theory: Gauss reduction, realness,
//!   discriminant forms, genera.
//! * [`geometry`] — critical values, path planning in the base line, and
//!   certified tracking of branch points along loops and paths.
//! * [`fiber`] — homology of the base fiber and the braid action on it.
//! * [`chain`] — chain systems, the perturbed intersection pairing, and the
//!   transcendental lattice extraction.
//! * [`singular`] — recognition of simple singularities on plane curves.
//! * [`pipeline`] — problem files, the end-to-end computation, and reports.

pub mod chain;
pub mod error;
pub mod exact;
pub mod fiber;
pub mod geometry;
pub mod lattice;
pub mod pipeline;
pub mod singular;

pub use error::Error;
