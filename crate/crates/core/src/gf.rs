//! Finite fields F_{p^r} of odd characteristic.
//!
//! Elements are polynomials of degree < r over F_p modulo a monic
//! irreducible modulus. When no modulus is supplied, the first monic
//! irreducible polynomial in lexicographic order is used, so field
//! construction is deterministic.

use crate::error::{Error, Result};
use crate::field::Field;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
struct GfData {
    p: u64,
    r: usize,
    /// Monic modulus, little-endian, length r+1.
    modulus: Vec<u64>,
}

/// Handle to a finite field F_{p^r}.
#[derive(Clone)]
pub struct GfField(Arc<GfData>);

/// Element of F_{p^r}: little-endian coordinates, length r.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GfElem(pub Vec<u64>);

impl fmt::Display for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| match k {
                0 => format!("{}", c),
                1 if *c == 1 => "t".to_string(),
                1 => format!("{}t", c),
                _ if *c == 1 => format!("t^{}", k),
                _ => format!("{}t^{}", c, k),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl fmt::Debug for GfField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.r)
    }
}

impl PartialEq for GfField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus
    }
}
impl Eq for GfField {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic on F_p[x] polynomials (little-endian, trimmed).
mod fppoly {
    pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        loop {
            r = trim(r);
            if r.len() <= dm {
                return r;
            }
            let k = r.len() - 1 - dm;
            let q = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
            for i in 0..=dm {
                let sub = q as u128 * m[i] as u128 % p as u128;
                r[k + i] = ((r[k + i] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let li = inv_mod(l, p);
            for c in a.iter_mut() {
                *c = (*c as u128 * li as u128 % p as u128) as u64;
            }
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        // extended Euclid on integers
        let (mut t, mut newt) = (0i128, 1i128);
        let (mut r, mut newr) = (p as i128, (a % p) as i128);
        while newr != 0 {
            let q = r / newr;
            (t, newt) = (newt, t - q * newt);
            (r, newr) = (newr, r - q * newr);
        }
        assert_eq!(r, 1, "not invertible mod p");
        t.rem_euclid(p as i128) as u64
    }

    /// x^(p^k) mod m, by repeated p-th powering.
    pub fn x_pow_p_pow(k: u32, m: &[u64], p: u64) -> Vec<u64> {
        let mut cur = vec![0, 1]; // x
        for _ in 0..k {
            cur = pow_mod(&cur, p, m, p);
        }
        cur
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            e >>= 1;
            if e > 0 {
                b = rem(&mul(&b, &b, p), m, p);
            }
        }
        acc
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Monic modulus irreducibility over F_p: x^(p^r) = x mod f, and
/// gcd(x^(p^(r/t)) - x, f) = 1 for every prime t | r.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let r = modulus.len() - 1;
    if r == 1 {
        return true;
    }
    let xpr = fppoly::x_pow_p_pow(r as u32, modulus, p);
    // x^(p^r) - x must be 0 mod f
    let mut diff = xpr;
    diff.resize(diff.len().max(2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    if !fppoly::trim(diff).is_empty() {
        return false;
    }
    for t in prime_divisors(r) {
        let mut g = fppoly::x_pow_p_pow((r / t) as u32, modulus, p);
        g.resize(g.len().max(2), 0);
        g[1] = (g[1] + p - 1) % p;
        let g = fppoly::gcd(&fppoly::trim(g), modulus, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Build F_{p^r}. With no modulus supplied, monic polynomials are
/// scanned in lexicographic order of their coefficient tuples and the
/// first irreducible one is taken.
pub fn gf_make(p: u64, r: usize, modulus: Option<Vec<u64>>) -> Result<GfField> {
    if p == 2 {
        return Err(Error::CharTwo);
    }
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    if r == 0 {
        return Err(Error::Precondition("extension degree must be >= 1".into()));
    }
    let modulus = match modulus {
        Some(m) => {
            let m: Vec<u64> = m.iter().map(|c| c % p).collect();
            if m.len() != r + 1 || m[r] != 1 {
                return Err(Error::Precondition(format!(
                    "modulus must be monic of degree {}",
                    r
                )));
            }
            if !is_irreducible(&m, p) {
                return Err(Error::ReducibleModulus { p });
            }
            m
        }
        None => {
            let total = (p as u128).pow(r as u32);
            let mut found = None;
            for k in 0..total {
                let mut c = Vec::with_capacity(r + 1);
                let mut k = k;
                for _ in 0..r {
                    c.push((k % p as u128) as u64);
                    k /= p as u128;
                }
                c.push(1);
                if is_irreducible(&c, p) {
                    found = Some(c);
                    break;
                }
            }
            found.expect("irreducible polynomial exists for every degree")
        }
    };
    Ok(GfField(Arc::new(GfData { p, r, modulus })))
}

impl GfField {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn extension_degree(&self) -> usize {
        self.0.r
    }

    pub fn size(&self) -> u64 {
        self.0.p.pow(self.0.r as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    fn elem(&self, mut coeffs: Vec<u64>) -> GfElem {
        coeffs = fppoly::rem(&coeffs, &self.0.modulus, self.0.p);
        coeffs.resize(self.0.r, 0);
        GfElem(coeffs)
    }

    /// Element from the base prime field.
    pub fn scalar(&self, v: i64) -> GfElem {
        let p = self.0.p as i64;
        self.elem(vec![v.rem_euclid(p) as u64])
    }

    /// The k-th element in the deterministic enumeration (base-p digits).
    pub fn element_by_index(&self, k: u64) -> GfElem {
        let mut c = Vec::with_capacity(self.0.r);
        let mut k = k;
        for _ in 0..self.0.r {
            c.push(k % self.0.p);
            k /= self.0.p;
        }
        GfElem(c)
    }

    /// Elements fixed by x -> x^(p^s): the subfield F_{p^s}, for s | r.
    pub fn subfield(&self, s: usize) -> Vec<GfElem> {
        assert!(self.0.r % s == 0);
        let q = self.0.p.pow(s as u32);
        self.enumerate()
            .unwrap()
            .into_iter()
            .filter(|x| self.pow(x, q) == *x)
            .collect()
    }

    /// An element of exact multiplicative order k, if one exists.
    pub fn element_of_order(&self, k: u64) -> Option<GfElem> {
        if (self.size() - 1) % k != 0 {
            return None;
        }
        for idx in 1..self.size() {
            let x = self.element_by_index(idx);
            if self.pow(&x, k) == self.one() && (1..k).all(|j| self.pow(&x, j) != self.one()) {
                return Some(x);
            }
        }
        None
    }
}

impl Field for GfField {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        GfElem(vec![0; self.0.r])
    }

    fn one(&self) -> GfElem {
        let mut c = vec![0; self.0.r];
        c[0] = 1;
        GfElem(c)
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.0.p)
                .collect(),
        )
    }

    fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + self.0.p - y) % self.0.p)
                .collect(),
        )
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        self.elem(fppoly::mul(&fppoly::trim(a.0.clone()), &fppoly::trim(b.0.clone()), self.0.p))
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        GfElem(a.0.iter().map(|x| (self.0.p - x) % self.0.p).collect())
    }

    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return None;
        }
        // x^(q-2)
        Some(self.pow(a, self.size() - 2))
    }

    fn from_i64(&self, v: i64) -> GfElem {
        self.scalar(v)
    }

    fn characteristic(&self) -> u64 {
        self.0.p
    }

    fn sqrt(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        // brute-force scan; fields here are desk-sized
        let mut best: Option<GfElem> = None;
        for idx in 0..self.size() {
            let x = self.element_by_index(idx);
            if self.mul(&x, &x) == *a {
                match &best {
                    Some(b) if self.cmp_elems(&x, b) != Ordering::Less => {}
                    _ => best = Some(x),
                }
            }
        }
        best
    }

    fn enumerate(&self) -> Option<Vec<GfElem>> {
        let q = self.size();
        if q > 1 << 20 {
            return None;
        }
        Some((0..q).map(|k| self.element_by_index(k)).collect())
    }

    fn cmp_elems(&self, a: &GfElem, b: &GfElem) -> Ordering {
        a.0.iter().rev().cmp(b.0.iter().rev())
    }

    fn is_zero(&self, a: &GfElem) -> bool {
        a.0.iter().all(|c| *c == 0)
    }

    fn nth_root_of_unity(&self, n: u64) -> crate::error::Result<GfElem> {
        if n == 1 {
            return Ok(self.one());
        }
        if n == 2 {
            return Ok(self.scalar(-1));
        }
        self.element_of_order(n).ok_or_else(|| {
            // smallest multiple of r whose field contains mu_n
            let r = self.0.r as u64;
            let mut s = 1;
            let mut q_mod = self.size() % n;
            while q_mod != 1 && s < 16 {
                s += 1;
                q_mod = (0..self.0.r).fold(q_mod, |acc, _| acc * (self.0.p % n) % n);
            }
            Error::NeedsExtension { suggestion: r * s }
        })
    }

    fn extension_hint(&self) -> u64 {
        2 * self.0.r as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = gf_make(3, 1, None).unwrap();
        assert_eq!(f.size(), 3);
        let two = f.scalar(2);
        assert_eq!(f.mul(&two, &two), f.one());
        assert_eq!(f.inv(&two), Some(two.clone()));
    }

    #[test]
    fn f9_first_lexicographic_modulus() {
        // Independent scan: x^2 is reducible, x^2+1 has no root mod 3,
        // so the first lexicographic irreducible monic quadratic is x^2+1.
        let f = gf_make(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.size(), 9);
        // t^2 = -1
        let t = f.element_by_index(3);
        assert_eq!(f.mul(&t, &t), f.scalar(-1));
    }

    #[test]
    fn char_two_rejected() {
        assert!(matches!(gf_make(2, 1, None), Err(Error::CharTwo)));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 - 1 = (x-1)(x+1)
        assert!(matches!(
            gf_make(5, 2, Some(vec![4, 0, 1])),
            Err(Error::ReducibleModulus { p: 5 })
        ));
    }

    #[test]
    fn frobenius_and_unit_group() {
        for (p, r) in [(3u64, 2usize), (5, 2), (7, 1)] {
            let f = gf_make(p, r, None).unwrap();
            let q = f.size();
            for x in f.enumerate().unwrap() {
                // Frobenius is additive and multiplicative; spot the
                // exponent identity x^(q-1) = 1 for x != 0.
                if !f.is_zero(&x) {
                    assert_eq!(f.pow(&x, q - 1), f.one());
                }
                let y = f.element_by_index(2 % q);
                let frob = |v: &GfElem| f.pow(v, p);
                assert_eq!(frob(&f.add(&x, &y)), f.add(&frob(&x), &frob(&y)));
                assert_eq!(frob(&f.mul(&x, &y)), f.mul(&frob(&x), &frob(&y)));
            }
        }
    }

    #[test]
    fn subfield_of_f9() {
        let f9 = gf_make(3, 2, None).unwrap();
        let sub = f9.subfield(1);
        assert_eq!(sub.len(), 3);
        assert!(sub.contains(&f9.zero()));
        assert!(sub.contains(&f9.one()));
        assert!(sub.contains(&f9.scalar(2)));
    }

    #[test]
    fn sqrt_scan() {
        let f = gf_make(7, 1, None).unwrap();
        // squares mod 7: 1, 4, 2
        assert!(f.sqrt(&f.scalar(2)).is_some());
        assert!(f.sqrt(&f.scalar(3)).is_none());
        let s = f.sqrt(&f.scalar(4)).unwrap();
        assert_eq!(f.mul(&s, &s), f.scalar(4));
    }
}
