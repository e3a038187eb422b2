//! Text forms of the IR: nested-array bytecode and Gremlin-Groovy.

mod bytecode;
mod groovy;

pub use bytecode::{emit_bytecode, parse_bytecode, to_doc, BcStep, BcValue, BytecodeDoc, BytecodeError};
pub use groovy::emit_groovy;
