pub mod eval;
pub mod gen;
pub mod label;
pub mod pipeline;
pub mod smooth;

/// Top-level `schema_version` of every JSON document the CLI writes.
pub const SCHEMA_VERSION: u32 = 1;
