use std::fmt;

/// A nonempty range `[lo, hi]` of nonnegative integers; `hi = None` is `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: u64,
    hi: Option<u64>,
}

impl Default for Interval {
    fn default() -> Self {
        Interval::UNBOUNDED
    }
}

impl Interval {
    pub const UNBOUNDED: Interval = Interval { lo: 0, hi: None };

    /// `None` when `lo > hi`.
    pub fn new(lo: u64, hi: Option<u64>) -> Option<Self> {
        match hi {
            Some(h) if lo > h => None,
            _ => Some(Interval { lo, hi }),
        }
    }

    pub fn exact(value: u64) -> Self {
        Interval { lo: value, hi: Some(value) }
    }

    pub fn at_least(lo: u64) -> Self {
        Interval { lo, hi: None }
    }

    pub fn at_most(hi: u64) -> Self {
        Interval { lo: 0, hi: Some(hi) }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> Option<u64> {
        self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        *self == Self::UNBOUNDED
    }

    pub fn is_exact(&self) -> bool {
        self.hi == Some(self.lo)
    }

    /// Intersection, or `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Interval::new(lo, hi)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        other.lo >= self.lo
            && match (self.hi, other.hi) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => b <= a,
            }
    }

    pub fn contains_value(&self, v: u64) -> bool {
        v >= self.lo && self.hi.is_none_or(|h| v <= h)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{}, {}]", self.lo, h),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}
