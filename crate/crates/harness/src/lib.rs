//! Scenario runner, seeded suite and scalar crosscheck for `cstar-frames`.

// `!(a > b)` is used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod crosscheck;
pub mod error;
pub mod generators;
pub mod json;
pub mod report;
pub mod scenario;
pub mod suite;

pub const TOOL: &str = "cstar-check";
