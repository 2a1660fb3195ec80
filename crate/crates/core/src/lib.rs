//! Multi-QoS route optimization on wireless mesh topologies.
//!
//! Routes are evolved by an adaptive genetic algorithm that runs six
//! selection operators side by side each generation and keeps the best.
//! The three objectives (delay, bandwidth, hop count) are handled both by
//! weighted-sum scalarization and by NSGA non-dominated sorting, and small
//! instances can be checked against exhaustive enumeration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod genetic;
pub mod oracle;
pub mod pareto;
pub mod qos;
pub mod report;
pub mod topology;

pub use error::{Error, Result};
