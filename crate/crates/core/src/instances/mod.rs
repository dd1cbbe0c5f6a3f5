//! Built-in problem families, random instance generators and the JSON
//! instance/stream formats.

pub mod builtin;
pub mod files;
pub mod random;

pub use builtin::make_builtin;
pub use files::{instance_to_json, parse_instance, parse_stream, parse_stream_for, stream_to_json};
