//! Bundles of products encoded as fixed-width bitsets.
//!
//! Products are indexed 1..=n. A bundle is any subset of them; the grand
//! bundle holds all n products and the empty bundle is representable but
//! never offered for sale.

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the product count; bundle masks are stored in a `u16`.
pub const MAX_PRODUCTS: usize = 16;

/// A subset of the products `{1..n}`, stored as a bitmask.
///
/// Bit `i - 1` is set when product `i` is in the bundle, so product 1 is the
/// least-significant bit. Two bundles only interoperate when their product
/// counts match.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bundle {
    mask: u16,
    n: u8,
}

impl Bundle {
    /// The empty bundle over `n` products.
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_PRODUCTS, "product count out of range");
        Bundle { mask: 0, n: n as u8 }
    }

    /// The grand bundle holding all `n` products.
    pub fn grand(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_PRODUCTS, "product count out of range");
        Bundle {
            mask: if n == MAX_PRODUCTS { u16::MAX } else { (1u16 << n) - 1 },
            n: n as u8,
        }
    }

    /// Builds a bundle from a raw bitmask.
    pub fn from_mask(mask: u16, n: usize) -> Result<Self> {
        if n < 1 || n > MAX_PRODUCTS {
            return Err(Error::UnsupportedProducts { n, max: MAX_PRODUCTS });
        }
        let grand = Self::grand(n);
        if mask & !grand.mask != 0 {
            return Err(Error::Model(format!(
                "bundle mask {mask:#b} has bits outside the {n}-product universe"
            )));
        }
        Ok(Bundle { mask, n: n as u8 })
    }

    /// Builds a bundle from 1-based product indices.
    pub fn from_products(products: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u16;
        for &p in products {
            if p < 1 || p > n {
                return Err(Error::Model(format!(
                    "product index {p} outside 1..={n}"
                )));
            }
            mask |= 1 << (p - 1);
        }
        Self::from_mask(mask, n)
    }

    /// Parses a bitstring such as `"101"`; product 1 is the rightmost character.
    pub fn from_bitstring(s: &str, n: usize) -> Result<Self> {
        if s.len() != n || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Model(format!(
                "bundle key {s:?} is not a {n}-character bitstring"
            )));
        }
        let mask = u16::from_str_radix(s, 2)
            .map_err(|_| Error::Model(format!("bundle key {s:?} is not binary")))?;
        Self::from_mask(mask, n)
    }

    /// Bitstring form; product 1 is the rightmost character.
    pub fn bitstring(&self) -> String {
        (0..self.n)
            .rev()
            .map(|i| if self.mask >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn mask(&self) -> u16 {
        self.mask
    }

    pub fn product_count(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_grand(&self) -> bool {
        self.mask == Self::grand(self.n as usize).mask
    }

    /// Number of products in the bundle.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, product: usize) -> bool {
        product >= 1 && product <= self.n as usize && self.mask >> (product - 1) & 1 == 1
    }

    /// The complement `b̄ \ b` within the same product universe.
    pub fn complement(&self) -> Bundle {
        let grand = Self::grand(self.n as usize);
        Bundle { mask: grand.mask & !self.mask, n: self.n }
    }

    pub fn union(&self, other: Bundle) -> Bundle {
        debug_assert_eq!(self.n, other.n);
        Bundle { mask: self.mask | other.mask, n: self.n }
    }

    pub fn overlaps(&self, other: Bundle) -> bool {
        self.mask & other.mask != 0
    }

    pub fn is_subset_of(&self, other: Bundle) -> bool {
        self.mask & !other.mask == 0
    }

    /// 1-based indices of the products in the bundle, ascending.
    pub fn products(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.mask;
        (1..=self.n as usize).filter(move |p| mask >> (p - 1) & 1 == 1)
    }

    /// All nonempty bundles over `n` products, ascending by mask.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Bundle> {
        let top = Self::grand(n).mask;
        (1..=top).map(move |mask| Bundle { mask, n: n as u8 })
    }
}

impl serde::Serialize for Bundle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.bitstring())
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, p) in self.products().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bundle({} of n={})", self.bitstring(), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_matches_set_difference() {
        let b = Bundle::from_products(&[1], 2).unwrap();
        assert_eq!(b.complement(), Bundle::from_products(&[2], 2).unwrap());
        assert_eq!(Bundle::grand(2).complement(), Bundle::empty(2));
        let b = Bundle::from_products(&[1, 3], 3).unwrap();
        assert_eq!(b.complement(), Bundle::from_products(&[2], 3).unwrap());
    }

    #[test]
    fn complement_is_involutive() {
        for n in 1..=4 {
            for b in Bundle::all_nonempty(n) {
                assert_eq!(b.complement().complement(), b);
            }
        }
    }

    #[test]
    fn bitstring_round_trip_and_lsb_convention() {
        let b = Bundle::from_bitstring("01", 2).unwrap();
        assert!(b.contains(1));
        assert!(!b.contains(2));
        assert_eq!(b.bitstring(), "01");
        let b = Bundle::from_bitstring("110", 3).unwrap();
        assert_eq!(b.products().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn rejects_out_of_universe_masks() {
        assert!(Bundle::from_mask(0b100, 2).is_err());
        assert!(Bundle::from_products(&[3], 2).is_err());
        assert!(Bundle::from_bitstring("1", 2).is_err());
    }

    #[test]
    fn enumeration_counts_nonempty_subsets() {
        assert_eq!(Bundle::all_nonempty(3).count(), 7);
        assert_eq!(Bundle::all_nonempty(1).count(), 1);
    }
}
