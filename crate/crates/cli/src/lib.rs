//! Library side of the `shiftlab` command: report assembly, the claims
//! registry and the analyze/transform/export drivers.

pub mod analyze;
pub mod claims;
pub mod report;
