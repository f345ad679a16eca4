use std::fmt;
use std::str::FromStr;

use super::BoundsError;

/// The integer invariants the engine reasons about. All are reduced
/// (a contractible space has TC 0 and cat 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantityKind {
    /// TC(X)
    TcSpace,
    /// cat(X)
    CatSpace,
    /// dim X
    DimSpace,
    /// TC(π) = TC(K(π,1))
    TcGroup,
    /// cd(π)
    CdGroup,
    /// cat(K(π,1))
    CatGroup,
    /// Colman–Grant equivariant TC_G(Y)
    Tcg,
    /// strongly equivariant TC*_G(Y)
    TcgStar,
    /// symmetric equivariant STC_G(Y)
    Stcg,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 9] = [
        QuantityKind::TcSpace,
        QuantityKind::CatSpace,
        QuantityKind::DimSpace,
        QuantityKind::TcGroup,
        QuantityKind::CdGroup,
        QuantityKind::CatGroup,
        QuantityKind::Tcg,
        QuantityKind::TcgStar,
        QuantityKind::Stcg,
    ];

    pub fn key(self) -> &'static str {
        match self {
            QuantityKind::TcSpace => "TC_space",
            QuantityKind::CatSpace => "cat_space",
            QuantityKind::DimSpace => "dim_space",
            QuantityKind::TcGroup => "TC_group",
            QuantityKind::CdGroup => "cd_group",
            QuantityKind::CatGroup => "cat_group",
            QuantityKind::Tcg => "TCG",
            QuantityKind::TcgStar => "TCGstar",
            QuantityKind::Stcg => "STCG",
        }
    }

    /// Equivariant kinds are indexed by a space and an acting group.
    pub fn is_equivariant(self) -> bool {
        matches!(self, QuantityKind::Tcg | QuantityKind::TcgStar | QuantityKind::Stcg)
    }
}

/// A quantity about a named subject; equivariant quantities also name the group.
///
/// Keys print as `TC_space(torus7)` or `TCGstar(F;G)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quantity {
    pub kind: QuantityKind,
    pub subject: String,
    pub group: Option<String>,
}

impl Quantity {
    pub fn new(kind: QuantityKind, subject: impl Into<String>) -> Self {
        debug_assert!(!kind.is_equivariant());
        Quantity { kind, subject: subject.into(), group: None }
    }

    pub fn equivariant(kind: QuantityKind, space: impl Into<String>, group: impl Into<String>) -> Self {
        debug_assert!(kind.is_equivariant());
        Quantity { kind, subject: space.into(), group: Some(group.into()) }
    }

    pub fn tc_space(space: &str) -> Self {
        Self::new(QuantityKind::TcSpace, space)
    }

    pub fn cat_space(space: &str) -> Self {
        Self::new(QuantityKind::CatSpace, space)
    }

    pub fn dim_space(space: &str) -> Self {
        Self::new(QuantityKind::DimSpace, space)
    }

    pub fn tc_group(group: &str) -> Self {
        Self::new(QuantityKind::TcGroup, group)
    }

    pub fn cd_group(group: &str) -> Self {
        Self::new(QuantityKind::CdGroup, group)
    }

    pub fn cat_group(group: &str) -> Self {
        Self::new(QuantityKind::CatGroup, group)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.group {
            Some(g) => write!(f, "{}({};{})", self.kind.key(), self.subject, g),
            None => write!(f, "{}({})", self.kind.key(), self.subject),
        }
    }
}

impl FromStr for Quantity {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BoundsError::BadQuantity(s.to_string());
        let (kind, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let kind = QuantityKind::ALL.into_iter().find(|k| k.key() == kind).ok_or_else(bad)?;
        if inner.is_empty() {
            return Err(bad());
        }
        if kind.is_equivariant() {
            let (space, group) = inner.rsplit_once(';').ok_or_else(bad)?;
            Ok(Quantity::equivariant(kind, space, group))
        } else {
            Ok(Quantity::new(kind, inner))
        }
    }
}
