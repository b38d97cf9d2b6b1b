//! Coefficient symbols, jet variables, and coordinate variables.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::multi_index::MultiIndex;

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct SymbolInfo {
    id: u32,
    name: String,
    arity: usize,
    symmetric: bool,
    matrix: bool,
}

/// A declared coefficient function.
///
/// Symbols order by declaration id. `arity` is the number of tensor slots;
/// a `symmetric` symbol stores one component per sorted slot tuple; a
/// `matrix` symbol carries an independent function per fiber entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<SymbolInfo>);

impl Symbol {
    pub fn new(id: u32, name: impl Into<String>, arity: usize, symmetric: bool, matrix: bool) -> Self {
        Symbol(Arc::new(SymbolInfo { id, name: name.into(), arity, symmetric, matrix }))
    }

    /// A plain scalar symbol with `arity` unsymmetrized slots.
    pub fn scalar(id: u32, name: impl Into<String>, arity: usize) -> Self {
        Self::new(id, name, arity, false, false)
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }
    pub fn name(&self) -> &str {
        &self.0.name
    }
    pub fn arity(&self) -> usize {
        self.0.arity
    }
    pub fn is_symmetric(&self) -> bool {
        self.0.symmetric
    }
    pub fn is_matrix(&self) -> bool {
        self.0.matrix
    }
}

/// A formal derivative `d^deriv` of one component of a coefficient symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    symbol: Symbol,
    slots: Vec<u16>,
    /// Fiber entry `(row, col)` for matrix-valued symbols.
    entry: Option<(u16, u16)>,
    deriv: MultiIndex,
}

impl JetVar {
    /// Component `slots` of `symbol`, differentiated `deriv` times.
    ///
    /// Slots of symmetric symbols are sorted here. Panics if the slot count
    /// disagrees with the declared arity or the entry presence disagrees
    /// with the matrix flag.
    pub fn new(symbol: &Symbol, slots: &[u16], entry: Option<(u16, u16)>, deriv: MultiIndex) -> Self {
        assert_eq!(slots.len(), symbol.arity(), "arity mismatch for `{}`", symbol.name());
        assert_eq!(entry.is_some(), symbol.is_matrix(), "fiber entry mismatch for `{}`", symbol.name());
        let mut slots = slots.to_vec();
        if symbol.is_symmetric() {
            slots.sort_unstable();
        }
        JetVar { symbol: symbol.clone(), slots, entry, deriv }
    }

    /// Undifferentiated component.
    pub fn base(symbol: &Symbol, slots: &[u16], entry: Option<(u16, u16)>, dim: usize) -> Self {
        Self::new(symbol, slots, entry, MultiIndex::zero(dim))
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }
    pub fn slots(&self) -> &[u16] {
        &self.slots
    }
    pub fn entry(&self) -> Option<(u16, u16)> {
        self.entry
    }
    pub fn deriv(&self) -> &MultiIndex {
        &self.deriv
    }

    pub fn derived(&self, direction: usize) -> Self {
        JetVar { deriv: self.deriv.with_increment(direction), ..self.clone() }
    }

    /// The same component with the derivative stripped.
    pub fn key(&self) -> JetVar {
        JetVar { deriv: MultiIndex::zero(self.deriv.dim()), ..self.clone() }
    }

    fn fmt_component(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol.name())?;
        if !self.slots.is_empty() {
            f.write_str("[")?;
            for (i, s) in self.slots.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str("]")?;
        }
        if let Some((r, c)) = self.entry {
            write!(f, "{{{r},{c}}}")?;
        }
        Ok(())
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deriv.is_zero() {
            self.fmt_component(f)
        } else {
            f.write_str("d(")?;
            self.fmt_component(f)?;
            write!(f, ",{})", self.deriv)
        }
    }
}

/// A polynomial variable: a coordinate `x[a]` or a jet.
///
/// Coordinates sort before every jet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Coord(u16),
    Jet(JetVar),
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Var::Coord(a), Var::Coord(b)) => a.cmp(b),
            (Var::Coord(_), Var::Jet(_)) => Ordering::Less,
            (Var::Jet(_), Var::Coord(_)) => Ordering::Greater,
            (Var::Jet(a), Var::Jet(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Coord(a) => write!(f, "x[{a}]"),
            Var::Jet(j) => j.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_slots_are_sorted() {
        let s = Symbol::new(0, "S", 2, true, false);
        let a = JetVar::base(&s, &[1, 0], None, 2);
        let b = JetVar::base(&s, &[0, 1], None, 2);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "S[0,1]");
    }

    #[test]
    fn ordering_is_declaration_then_slots_then_deriv() {
        let later = Symbol::scalar(1, "A", 1);
        let earlier = Symbol::scalar(0, "Z", 1);
        let z = Var::Jet(JetVar::base(&earlier, &[1], None, 1));
        let a = Var::Jet(JetVar::base(&later, &[0], None, 1));
        assert!(z < a);
        let z0 = JetVar::base(&earlier, &[0], None, 1);
        assert!(z0.derived(0) > z0);
        assert!(Var::Coord(3) < z);
    }

    #[test]
    fn display_forms() {
        let u = Symbol::new(0, "u", 0, false, true);
        let j = JetVar::base(&u, &[], Some((0, 1)), 2).derived(1);
        assert_eq!(j.to_string(), "d(u{0,1},[0,1])");
        assert_eq!(Var::Coord(1).to_string(), "x[1]");
    }
}
