// SPDX-License-Identifier: Apache-2.0

//! Support code for the `apsp` binary.

pub mod report;

pub use report::{AuditSummary, RunReport};
