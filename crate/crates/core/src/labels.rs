//! Sets of marked-point labels `1..=64` packed in a bit mask.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub const MAX_LABELS: u32 = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    /// `{1, ..., n}`.
    pub fn full(n: u32) -> Result<Self> {
        if n > MAX_LABELS {
            return Err(Error::LabelOutOfRange { label: n, n: MAX_LABELS });
        }
        Ok(if n == 64 { LabelSet(u64::MAX) } else { LabelSet((1u64 << n) - 1) })
    }

    pub fn from_labels<I: IntoIterator<Item = u32>>(labels: I) -> Result<Self> {
        let mut s = LabelSet::EMPTY;
        for l in labels {
            s.insert(l)?;
        }
        Ok(s)
    }

    pub const fn from_bits(bits: u64) -> Self {
        LabelSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, label: u32) -> Result<()> {
        if label == 0 || label > MAX_LABELS {
            return Err(Error::LabelOutOfRange { label, n: MAX_LABELS });
        }
        self.0 |= 1u64 << (label - 1);
        Ok(())
    }

    pub fn contains(self, label: u32) -> bool {
        (1..=MAX_LABELS).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        LabelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest label present, if any.
    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros();
            bits &= bits - 1;
            Some(tz + 1)
        })
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Compact `{1,2}` style: labels concatenated when all are single digits.
impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.iter().all(|l| l < 10);
        let mut first = true;
        for l in self.iter() {
            if !first && !compact {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_ops() {
        let a = LabelSet::from_labels([1, 2, 5]).unwrap();
        assert_eq!(a.to_vec(), [1, 2, 5]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.max(), Some(5));
        let full = LabelSet::full(5).unwrap();
        assert_eq!(full.difference(a).to_vec(), [3, 4]);
        assert!(a.is_subset(full));
        assert!(LabelSet::from_labels([0]).is_err());
        assert_eq!(LabelSet::full(64).unwrap().len(), 64);
        assert_eq!(alloc::format!("{a}"), "125");
    }
}
