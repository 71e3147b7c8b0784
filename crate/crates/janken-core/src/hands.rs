//! Hand indices and bitset supports.
//!
//! Hands are plain `usize` indices `0..m`. A `HandSet` packs a set of hands
//! into a `u32` mask so supports can be hashed, ordered and enumerated
//! cheaply; the construction cap on `m` (default 16) keeps `2^m` support
//! enumeration tractable well below the 32-bit width.

use std::fmt;
use std::ops::{BitAnd, BitOr};

/// A set of hand indices, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HandSet(u32);

impl HandSet {
    /// The empty set.
    pub const EMPTY: HandSet = HandSet(0);

    /// Set containing the single hand `h`.
    pub fn singleton(h: usize) -> HandSet {
        debug_assert!(h < 32);
        HandSet(1 << h)
    }

    /// Set containing all of `0..m`.
    pub fn full(m: usize) -> HandSet {
        debug_assert!(m <= 32);
        if m == 32 {
            HandSet(u32::MAX)
        } else {
            HandSet((1u32 << m) - 1)
        }
    }

    /// Build from hand indices; duplicates are fine.
    pub fn from_hands<I: IntoIterator<Item = usize>>(hands: I) -> HandSet {
        let mut s = HandSet::EMPTY;
        for h in hands {
            s.insert(h);
        }
        s
    }

    /// The raw mask.
    pub fn mask(self) -> u32 {
        self.0
    }

    /// Rebuild from a raw mask.
    pub fn from_mask(mask: u32) -> HandSet {
        HandSet(mask)
    }

    pub fn insert(&mut self, h: usize) {
        debug_assert!(h < 32);
        self.0 |= 1 << h;
    }

    pub fn contains(self, h: usize) -> bool {
        h < 32 && self.0 & (1 << h) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: HandSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Hands in this set, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |h| mask & (1 << h) != 0)
    }

    /// All subsets of this set, including the empty set and the set itself.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, sub: 0, done: false }
    }

    /// Hands of `0..m` not in this set.
    pub fn complement_in(self, m: usize) -> HandSet {
        HandSet(HandSet::full(m).0 & !self.0)
    }

    /// Hand indices as a sorted vector.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Iterator over submasks in ascending mask order.
pub struct Subsets {
    mask: u32,
    sub: u32,
    done: bool,
}

impl Iterator for Subsets {
    type Item = HandSet;

    fn next(&mut self) -> Option<HandSet> {
        if self.done {
            return None;
        }
        let current = self.sub;
        if current == self.mask {
            self.done = true;
        } else {
            // Next submask of `mask` above `current`.
            self.sub = (current.wrapping_sub(self.mask)) & self.mask;
            // Equivalent to (current - mask) & mask, which steps through all
            // submasks in increasing order.
        }
        Some(HandSet(current))
    }
}

impl BitOr for HandSet {
    type Output = HandSet;
    fn bitor(self, rhs: HandSet) -> HandSet {
        HandSet(self.0 | rhs.0)
    }
}

impl BitAnd for HandSet {
    type Output = HandSet;
    fn bitand(self, rhs: HandSet) -> HandSet {
        HandSet(self.0 & rhs.0)
    }
}

impl fmt::Display for HandSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, h) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for HandSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> HandSet {
        HandSet::from_hands(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_membership() {
        let s = HandSet::from_hands([0, 2, 3]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(0) && s.contains(2) && s.contains(3));
        assert!(!s.contains(1));
        assert_eq!(s.to_vec(), vec![0, 2, 3]);
        assert_eq!(s.to_string(), "{0,2,3}");
    }

    #[test]
    fn full_and_complement() {
        let full = HandSet::full(5);
        assert_eq!(full.len(), 5);
        let s = HandSet::from_hands([1, 4]);
        assert_eq!(s.complement_in(5).to_vec(), vec![0, 2, 3]);
        assert!(s.is_subset_of(full));
        assert!(!full.is_subset_of(s));
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = HandSet::from_hands([0, 2, 3]);
        let subs: Vec<HandSet> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], HandSet::EMPTY);
        assert_eq!(subs[7], s);
        for sub in &subs {
            assert!(sub.is_subset_of(s));
        }
        // ascending and distinct
        for w in subs.windows(2) {
            assert!(w[0].mask() < w[1].mask());
        }
    }

    #[test]
    fn subsets_of_empty() {
        let subs: Vec<HandSet> = HandSet::EMPTY.subsets().collect();
        assert_eq!(subs, vec![HandSet::EMPTY]);
    }
}
