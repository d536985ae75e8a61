use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator of the Laurent ring.
///
/// Identifiers are structural: the same `(kind, index)` always denotes the
/// same generator, so independently built polynomials can be combined without
/// a shared registry object. The derived order is the variable order used by
/// the lexicographic term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VariableId {
    /// Initial value `x_{n,t}` attached to a lattice site.
    Site { n: i32, t: i32 },
    /// Free sequence generator `a_j`.
    Free(i32),
    /// Scratch variable, used by tests and specialization helpers.
    Anonymous(u32),
}

/// Role of a variable with respect to the L-shaped initial frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `x_{m,0}`
    RowSeed,
    /// `x_{0,s}`, `s >= 1`
    ColumnSeed0,
    /// `x_{1,s}`, `s >= 1`
    ColumnSeed1,
    /// Any other lattice site.
    Site,
    Free,
    Anonymous,
}

impl VariableId {
    pub fn site(n: i64, t: i64) -> Self {
        VariableId::Site {
            n: n as i32,
            t: t as i32,
        }
    }

    pub fn kind(&self) -> VarKind {
        match *self {
            VariableId::Site { t: 0, .. } => VarKind::RowSeed,
            VariableId::Site { n: 0, .. } => VarKind::ColumnSeed0,
            VariableId::Site { n: 1, .. } => VarKind::ColumnSeed1,
            VariableId::Site { .. } => VarKind::Site,
            VariableId::Free(_) => VarKind::Free,
            VariableId::Anonymous(_) => VarKind::Anonymous,
        }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableId::Site { n, t } => write!(f, "x[{n},{t}]"),
            VariableId::Free(j) => write!(f, "a[{j}]"),
            VariableId::Anonymous(i) => write!(f, "v[{i}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_follow_the_l_frame() {
        assert_eq!(VariableId::site(4, 0).kind(), VarKind::RowSeed);
        assert_eq!(VariableId::site(0, 0).kind(), VarKind::RowSeed);
        assert_eq!(VariableId::site(0, 3).kind(), VarKind::ColumnSeed0);
        assert_eq!(VariableId::site(1, 3).kind(), VarKind::ColumnSeed1);
        assert_eq!(VariableId::site(2, 3).kind(), VarKind::Site);
    }

    #[test]
    fn display_is_deterministic() {
        assert_eq!(VariableId::site(-1, 2).to_string(), "x[-1,2]");
        assert_eq!(VariableId::Free(3).to_string(), "a[3]");
        assert_eq!(VariableId::Anonymous(0).to_string(), "v[0]");
    }
}
