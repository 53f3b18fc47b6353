//! Computational toolkit for projective Coxeter polytopes.
//!
//! The crate is organised in the order a typical pipeline runs:
//!
//! * [`diagram_core`]: Coxeter systems, the diagram text format, Gram matrices
//!   and classification against the spherical, affine and Lannér catalogs.
//! * [`cartan`]: Cartan matrices, type decomposition, cyclic products,
//!   symmetrization, special forms and the loop determinant reduction.
//! * [`polytope`]: combinatorial face lattices, labeled polytopes, vertex links,
//!   perfectness, Dehn filling, truncation, gluing and Cartan-driven face
//!   prediction.
//! * [`deform`]: deformation spaces of the `d + 2` facet families, their
//!   topology, μ-invariants and `m → ∞` limits.
//! * [`realize`]: realizations by linear forms and poles, reflections, vertex
//!   geometry, truncation, orbit exploration and Hilbert distances.
//! * [`relhyp`]: relative hyperbolicity via the Moussong–Caprace conditions.
//!
//! Shared types are re-exported at the crate root.

pub mod bits;
pub mod cartan;
pub mod deform;
pub mod diagram_core;
pub mod error;
pub mod linalg;
pub mod polytope;
pub mod realize;
pub mod relhyp;

pub use cartan::{CartanMatrix, ComponentType, SpecialForm, TypeDecomposition};
pub use deform::{DeformationKind, DeformationSpace, Family, MuInvariant};
pub use diagram_core::{ClassificationLabel, CoxeterSystem, DiagramTemplate, Kind, Order};
pub use error::{Error, Result};
pub use polytope::{FaceLattice, LabeledPolytope, PerfectnessReport, VertexLabel};
pub use realize::{Realization, ReflectionSet, VertexClass, VertexGeometry};
pub use relhyp::{PeripheralCollection, RelHypVerdict};

/// Default absolute tolerance for floating comparisons.
pub const TOL: f64 = 1e-9;
