//! Static analysis of cgo usage in Go code.
//!
//! The pipeline parses Go files into [`SyntaxFacts`], detects cgo features,
//! labels files with usage patterns, simulates `_cgoCheckPointer` insertion
//! and aggregates everything into corpus-level reports.

pub mod cnames;
pub mod corpus;
mod error;
pub mod features;
pub mod frontend;
pub mod metrics;
pub mod patterns;
pub mod ptrcheck;

pub use error::{Error, Result};

pub use frontend::{
    build_scope_table, parse_source, pointer_free, resolve_expr_type, PointerFree, ScopeTable, SyntaxFacts, TypeShape,
};
