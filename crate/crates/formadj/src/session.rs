//! Session configuration: dimension, fiber rank, declared symbols.

use formadj_core::Symbol;

/// Names that cannot be declared as coefficient symbols.
pub const RESERVED: &[&str] = &["D", "x", "E", "d", "dim", "rank", "sym", "symmetric", "matrix"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionDecl {
    pub dim: usize,
    pub rank: usize,
    pub symbols: Vec<Symbol>,
}

impl Default for SessionDecl {
    fn default() -> Self {
        SessionDecl { dim: 1, rank: 1, symbols: Vec::new() }
    }
}

impl SessionDecl {
    pub fn new(dim: usize, rank: usize) -> Self {
        SessionDecl { dim, rank, symbols: Vec::new() }
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name() == name)
    }

    /// Declares a symbol; returns it, or `None` if the name is taken or
    /// reserved.
    pub fn declare(&mut self, name: &str, arity: usize, symmetric: bool, matrix: bool) -> Option<Symbol> {
        if RESERVED.contains(&name) || self.lookup(name).is_some() {
            return None;
        }
        let s = Symbol::new(self.symbols.len() as u32, name, arity, symmetric, matrix);
        self.symbols.push(s.clone());
        Some(s)
    }

    /// The declarations as source text, each terminated by `;`.
    pub fn to_source(&self) -> String {
        let mut out = format!("dim {}; rank {};", self.dim, self.rank);
        for s in &self.symbols {
            out.push_str(&format!(" sym {}({})", s.name(), s.arity()));
            if s.is_symmetric() {
                out.push_str(" symmetric");
            }
            if s.is_matrix() {
                out.push_str(" matrix");
            }
            out.push(';');
        }
        out
    }
}
