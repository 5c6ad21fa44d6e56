//! Lie point symmetries of implicit polynomial scalar ODEs.
//!
//! An equation `F(x, y, y1, y2) = 0` (or `F(x, y, y1) = 0`) with rational
//! polynomial `F` is parsed into a canonical [`Poly`](exprcore::Poly). Point
//! fields `xi(x,y) d/dx + eta(x,y) d/dy` are prolonged to the jet space, the
//! prolonged action on `F` is reduced modulo `F` by pseudo-division, and the
//! coefficients of the reduced defect give a homogeneous linear system whose
//! nullspace is the space of polynomial symmetries of bounded degree.
//!
//! Module map:
//! - [`exprcore`]: exact multivariate polynomials over the rationals.
//! - [`parse`]: equation and field grammar, canonical printing.
//! - [`jet`]: total derivative, prolongation, prolonged action.
//! - [`detsys`]: symmetry defect, verification, determining systems.
//! - [`linalg`]: fraction-free elimination, rank, nullspace, span comparison.
//! - [`liealg`]: brackets, structure constants, Killing form, derived series.
//! - [`cli`]: the `odesym` command-line front end and corpus audit.

pub mod cli;
pub mod detsys;
pub mod exprcore;
pub mod jet;
pub mod liealg;
pub mod linalg;
pub mod parse;

pub use detsys::{assemble_system, solve_symmetries, symmetry_defect, verify, VerifyResult};
pub use exprcore::{Poly, Rat, VarId};
pub use jet::{PointField, ProlongedField};
pub use liealg::{bracket, closure, AlgebraReport};
pub use parse::{parse_field, parse_ode, OdeInput};
