//! Topological symmetry groups of embeddings of `K_{n,n}` in `S³`.
//!
//! The crate has three layers:
//!
//! * decision procedures: [`realizable`] matches single automorphisms against
//!   the nine cycle-structure templates and [`classify`] evaluates the
//!   congruence conditions for cyclic, dihedral and product groups;
//! * symbolic constructions: [`motion`] models the finite subgroups of SO(4)
//!   that are used exactly, with rational turns, and [`families`] builds the five
//!   named group actions together with their vertex placements;
//! * verifiers: [`edgecheck`] checks the edge embedding hypotheses and the
//!   subgroup witnesses, [`matrixcheck`] repeats the motion algebra with 4×4
//!   matrices, and [`oracle`] enumerates every automorphism of small `K_{n,n}`.

pub mod bipartite;
pub mod classify;
pub mod edgecheck;
pub mod families;
pub mod matrixcheck;
pub mod motion;
pub mod oracle;
pub mod realizable;

pub use bipartite::{BipartiteAutomorphism, CycleStructure, Part, VertexId};
pub use classify::{ClassificationVerdict, GroupSpec};
pub use families::{FamilyParams, Placement};
pub use motion::{FixedSet, Motion, MotionGroup, Point, Turn};
