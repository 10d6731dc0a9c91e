//! End-to-end identity verification: every identity family mapped to an
//! executable exact check with a structured report.

pub mod agchar;
pub mod belowline;
pub mod kr;
pub mod macdonald;
pub mod multisum;
pub mod principal;
pub mod report;
pub mod seed;

pub use report::{Mode, Outcome, ReportBuilder, VerificationReport, Witness};
