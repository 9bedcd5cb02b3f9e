//! The minimal ring interface shared by every coefficient object in the crate.
//!
//! A [`Ring`] value is a *context*: it knows how to combine elements, which
//! are plain data. Contexts are cheap to clone (they hold `Arc`s internally).
//! Elements are kept in normal form, so `==` on elements is exact equality.
//! Rings need not be unital.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::Zero;

pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, k: &BigInt, a: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Left-to-right product of a nonempty list.
    fn product<'a, I>(&self, items: I) -> Option<Self::Elem>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut it = items.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, x| self.mul(&acc, x)))
    }
}

/// The integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn scale(&self, k: &BigInt, a: &BigInt) -> BigInt {
        k * a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

/// Rings whose additive group is free abelian on a known basis, so that
/// elements can be split into integer coordinates (used to solve linear
/// systems one basis direction at a time).
pub trait Coordinates: Ring {
    fn coordinates(&self, a: &Self::Elem) -> Vec<(Vec<u32>, BigInt)>;
    fn from_coordinates(&self, terms: Vec<(Vec<u32>, BigInt)>) -> Self::Elem;
}

impl Coordinates for Integers {
    fn coordinates(&self, a: &BigInt) -> Vec<(Vec<u32>, BigInt)> {
        if a.is_zero() {
            vec![]
        } else {
            vec![(vec![], a.clone())]
        }
    }
    fn from_coordinates(&self, terms: Vec<(Vec<u32>, BigInt)>) -> BigInt {
        terms.into_iter().map(|(_, c)| c).sum()
    }
}
