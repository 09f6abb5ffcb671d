//! Finite projective planes, maximal arcs, and exact search for
//! nonincident point/line sets.
//!
//! The crate answers one family of questions about a projective plane of
//! order q: how large can a set of s points and s lines be if no chosen
//! point lies on any chosen line, and which configurations attain the
//! extreme? It provides:
//!
//! - [`gf`]: exact GF(p^k) arithmetic via exponent/log tables, with the
//!   characteristic-2 trace map and quadratic irreducibility tests.
//! - [`plane`]: construction of PG(2,q), validation of imported incidence
//!   matrices, and fast incidence queries over dense bit rows.
//! - [`bounds`]: every bound evaluated in exact integer/rational
//!   arithmetic — block-profile identities, the external-line bound
//!   (q³+q²+q-qs)/(q+s), its integer crossing point, and the
//!   Mullin-Vanstone block bound.
//! - [`arcs`]: Denniston maximal (s,2^u)-arcs in PG(2,2^v) and the
//!   extremal nonincident certificates they induce when u = v/2.
//! - [`search`]: exact branch-and-bound computation of the maximum
//!   nonincident size on small planes, an independent brute-force oracle,
//!   a seeded greedy heuristic, and certificate verification.
//!
//! File formats (incidence matrices and certificates) are bit-exact and
//! round-trip through the corresponding parse/serialize pairs.

mod bits;

pub mod arcs;
pub mod bounds;
pub mod gf;
pub mod plane;
pub mod search;

pub use arcs::{denniston_arc, nonincident_from_arc, verify_maximal_arc, MaximalArc};
pub use bounds::{
    block_profile, crossing_point, external_line_bound, mullin_vanstone_bound, nonincidence_bound,
};
pub use gf::{FieldElement, FieldSpec, FieldTable};
pub use plane::{LineSet, Plane, PointSet};
pub use search::{
    exact_f, greedy_heuristic, oracle_bruteforce, verify_certificate, NonincidenceCertificate,
    SearchConfig, SearchStatus,
};
