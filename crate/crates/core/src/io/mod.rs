//! Network documents, DOT export and run records.

pub mod document;
pub mod dot;
pub mod record;

pub use document::{parse_network, serialize_network, NetworkDocument, ParseError, ValidationKind};
pub use dot::{export_dot, DotAnnotations};
pub use record::{digest, RunRecord};
