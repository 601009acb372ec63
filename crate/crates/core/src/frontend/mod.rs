//! Go front end: parsing, scopes and static types.

mod parse;
mod scope;
pub mod syntax;
mod types;

pub use parse::{parse_bytes, parse_source};
pub use scope::{build_scope_table, build_unit_tables, DeclOrigin, Resolved, ScopeTable};
pub use syntax::*;
pub use types::{pointer_free, resolve_expr_type, resolve_type_expr, PointerFree, TypeShape};
