//! Front end for `formadj-core`: the Einstein-summation expression
//! language, canonical text and JSON formats, and the command-line driver.

pub mod cli;
pub mod elaborate;
pub mod json;
pub mod lex;
pub mod session;
pub mod syntax;
pub mod text;

pub use elaborate::{elaborate, parse_operator};
pub use lex::SyntaxError;
pub use session::SessionDecl;
pub use syntax::parse;
