//! Planning and validation of mapping schemas: assignments of
//! different-sized inputs to capacity-bounded reducers so that every
//! required pair of inputs meets in at least one reducer.
//!
//! The crate covers two problem kinds — A2A (every unordered pair of
//! inputs must meet) and X2Y (every cross pair between two lists must
//! meet) — and provides:
//!
//! * domain types, validators, and cost accounting ([`schema`]);
//! * the communication-cost and reducer-count lower bounds ([`bounds`]);
//! * FFD/BFD bin packing, the substrate of the approximations ([`binpack`]);
//! * optimal team constructions for unit inputs ([`equal`]);
//! * approximation algorithms for sized inputs and the strategy
//!   auto-selector ([`approx`]);
//! * exhaustive search oracles and partition-problem reductions
//!   ([`oracle`]).

pub mod approx;
pub mod binpack;
pub mod bounds;
pub mod equal;
mod error;
pub mod oracle;
pub mod schema;

pub use error::{Error, Result};
pub use schema::{
    cost_report, validate, validate_a2a, validate_x2y, CostReport, InputId, InputItem, Instance,
    MappingSchema, ProblemKind, Reducer, ValidationReport,
};
