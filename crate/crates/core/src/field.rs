//! Field abstraction shared by the polynomial and group machinery.
//!
//! A `Field` value is a cheap handle describing the coefficient field;
//! elements are passed back in explicitly. The two implementations are
//! cyclotomic fields and finite fields of odd characteristic.

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// None for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Exact square root in the field, when one exists.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Every element, for finite fields small enough to list.
    fn enumerate(&self) -> Option<Vec<Self::Elem>>;
    /// Deterministic total order used for canonical sorting.
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;
    /// A primitive n-th root of unity, or a NeedsExtension error with
    /// a suggested larger field parameter.
    fn nth_root_of_unity(&self, n: u64) -> Result<Self::Elem>;
    /// Parameter to suggest when a value does not exist in this field
    /// (cyclotomic order, or finite-field extension degree).
    fn extension_hint(&self) -> u64;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

impl Field for CycField {
    type Elem = CycNum;

    fn zero(&self) -> CycNum {
        CycField::zero(self)
    }
    fn one(&self) -> CycNum {
        CycField::one(self)
    }
    fn add(&self, a: &CycNum, b: &CycNum) -> CycNum {
        a.add(b)
    }
    fn sub(&self, a: &CycNum, b: &CycNum) -> CycNum {
        a.sub(b)
    }
    fn mul(&self, a: &CycNum, b: &CycNum) -> CycNum {
        a.mul(b)
    }
    fn neg(&self, a: &CycNum) -> CycNum {
        a.neg()
    }
    fn inv(&self, a: &CycNum) -> Option<CycNum> {
        a.inv()
    }
    fn from_i64(&self, v: i64) -> CycNum {
        CycField::from_i64(self, v)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &CycNum) -> Option<CycNum> {
        crate::recognize::sqrt_exact(a)
    }
    fn enumerate(&self) -> Option<Vec<CycNum>> {
        None
    }
    fn cmp_elems(&self, a: &CycNum, b: &CycNum) -> Ordering {
        a.lex_cmp(b)
    }
    fn is_zero(&self, a: &CycNum) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &CycNum) -> bool {
        a.is_one()
    }
    fn nth_root_of_unity(&self, n: u64) -> Result<CycNum> {
        match n {
            1 => Ok(CycField::one(self)),
            2 => Ok(CycField::from_i64(self, -1)),
            _ => self.root_of_unity(n, 1).map_err(|_| Error::NeedsExtension {
                suggestion: num_integer::lcm(self.order(), n),
            }),
        }
    }
    fn extension_hint(&self) -> u64 {
        2 * self.order()
    }
}
