//! Explicit subspace-evasive sets over prime fields.
//!
//! A set `S ⊂ F_p^n` is built as a product of copies of a variety
//! `V ⊂ F_p^m` cut out by `k` equations in distinct powers of the
//! coordinates. Every affine subspace of dimension `r <= k` meets `S` in at
//! most `d_1^r` points, and [`intersect::intersect_set`] lists those points
//! block by block.

pub mod cli;
pub mod error;
pub mod evasive;
pub mod field;
pub mod intersect;
pub mod linalg;
pub mod listdec;
pub mod params;
pub mod poly;
pub mod variety;
pub mod verify;

pub use error::{Error, Result};
pub use evasive::{EvasiveSet, Message};
pub use field::{FieldCtx, FieldElement};
pub use intersect::{intersect_set, intersect_with, solve_block, triangularize, BlockSolver, SolverKind};
pub use linalg::{normalize, AffineSubspace, EchelonMap, Matrix, SubspaceFile};
pub use params::{gen_field_plan, gen_params, Coefficients, EvasiveParams, FieldPlan};
pub use variety::{BlockVariety, Point};
