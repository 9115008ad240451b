//! Coframe blades e^I over the indices 1..=7, stored as bitmasks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of coframe directions. Index 7 is the contact direction.
pub const DIM: usize = 7;

/// Index of the Reeb direction in the coframe (e^7 = eta).
pub const REEB: usize = 7;

/// An ordered multi-index I = (i1 < ... < ik) encoding e^I.
///
/// Bit `i - 1` is set when index `i` is present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Blade(u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);
    pub const TOP: Blade = Blade(0x7f);

    /// Builds a blade from strictly increasing indices in 1..=7.
    pub fn new(indices: &[usize]) -> Option<Blade> {
        let mut bits = 0u8;
        let mut last = 0;
        for &i in indices {
            if i <= last || i > DIM {
                return None;
            }
            bits |= 1 << (i - 1);
            last = i;
        }
        Some(Blade(bits))
    }

    /// Sorts arbitrary indices, returning the blade and the permutation sign.
    /// Repeated indices give `None` since the wedge vanishes.
    pub fn from_unsorted(indices: &[usize]) -> Option<(Blade, i8)> {
        let mut out = Blade::SCALAR;
        let mut sign = 1i8;
        for &i in indices {
            if i == 0 || i > DIM {
                return None;
            }
            let s = out.wedge_sign(Blade::basis(i))?;
            sign *= s;
            out = Blade(out.0 | (1 << (i - 1)));
        }
        Some((out, sign))
    }

    pub fn basis(i: usize) -> Blade {
        assert!((1..=DIM).contains(&i), "coframe index out of range: {i}");
        Blade(1 << (i - 1))
    }

    pub fn from_bits(bits: u8) -> Blade {
        assert!(bits < 0x80, "blade bitmask out of range");
        Blade(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=DIM).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (1..=DIM).filter(move |&i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn is_horizontal(self) -> bool {
        !self.contains(REEB)
    }

    /// Sign of e^self ∧ e^other, or `None` if the blades overlap.
    pub fn wedge_sign(self, other: Blade) -> Option<i8> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each index j of `other` must move past every index of `self` above j.
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> j).count_ones();
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << (i - 1)))
    }

    pub fn complement(self) -> Blade {
        Blade(!self.0 & 0x7f)
    }

    /// All 128 blades in canonical order.
    pub fn all() -> Vec<Blade> {
        let mut v: Vec<Blade> = (0u8..0x80).map(Blade).collect();
        v.sort();
        v
    }

    /// The blades of one grade in canonical (lexicographic) order.
    pub fn of_grade(k: usize) -> Vec<Blade> {
        let mut v: Vec<Blade> = (0u8..0x80).map(Blade).filter(|b| b.grade() == k).collect();
        v.sort();
        v
    }

    /// Horizontal blades (no index 7) of one grade.
    pub fn horizontal_of_grade(k: usize) -> Vec<Blade> {
        Blade::of_grade(k).into_iter().filter(|b| b.is_horizontal()).collect()
    }

    /// Canonical label such as `e1247`, or `1` for the scalar blade.
    pub fn label(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let mut s = String::from("e");
        for i in self.indices() {
            s.push(char::from(b'0' + i as u8));
        }
        s
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_unsorted_and_out_of_range() {
        assert!(Blade::new(&[2, 1]).is_none());
        assert!(Blade::new(&[1, 1]).is_none());
        assert!(Blade::new(&[8]).is_none());
        assert_eq!(Blade::new(&[1, 4]).unwrap().label(), "e14");
    }

    #[test]
    fn wedge_signs_match_transposition_count() {
        let e1 = Blade::basis(1);
        let e2 = Blade::basis(2);
        assert_eq!(e1.wedge_sign(e2), Some(1));
        assert_eq!(e2.wedge_sign(e1), Some(-1));
        assert_eq!(e1.wedge_sign(e1), None);
        // e7 ∧ e123456 needs six transpositions
        let h = Blade::new(&[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(Blade::basis(7).wedge_sign(h), Some(1));
        // e45 ∧ e123 = e12345 after 6 swaps
        let a = Blade::new(&[4, 5]).unwrap();
        let b = Blade::new(&[1, 2, 3]).unwrap();
        assert_eq!(a.wedge_sign(b), Some(1));
        // e2 ∧ e13 = -e123
        assert_eq!(e2.wedge_sign(Blade::new(&[1, 3]).unwrap()), Some(-1));
    }

    #[test]
    fn unsorted_permutation_sign() {
        assert_eq!(Blade::from_unsorted(&[3, 1, 2]), Some((Blade::new(&[1, 2, 3]).unwrap(), 1)));
        assert_eq!(Blade::from_unsorted(&[2, 1, 3]), Some((Blade::new(&[1, 2, 3]).unwrap(), -1)));
        assert_eq!(Blade::from_unsorted(&[2, 2]), None);
    }

    #[test]
    fn canonical_order_is_grade_then_lexicographic() {
        let all = Blade::all();
        assert_eq!(all.len(), 128);
        assert_eq!(all[0], Blade::SCALAR);
        assert_eq!(all[1], Blade::basis(1));
        assert_eq!(all[8].label(), "e12");
        assert_eq!(all[127], Blade::TOP);
        for k in 0..=7 {
            let n = Blade::of_grade(k).len();
            let binom = (0..k).fold(1usize, |acc, i| acc * (7 - i) / (i + 1));
            assert_eq!(n, binom);
        }
    }
}
