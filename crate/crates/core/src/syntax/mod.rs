//! Text and JSON input/output.

pub mod parser;
pub mod wire;

pub use parser::{equation_to_text, infer_radix, parse_equation, parse_scalar};
