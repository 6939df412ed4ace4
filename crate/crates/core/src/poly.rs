//! Exact univariate polynomials over any field from this crate.
//!
//! Coefficients are little-endian with a nonzero leading coefficient;
//! the zero polynomial is the empty vector. Homogenization at infinity
//! is always an explicit degree argument, never a sentinel value.

use crate::cyclotomic::{CycField, CycNum};
use crate::error::Result;
use crate::field::Field;
use crate::moebius::MoebiusMap;
use std::fmt;

#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl<F: Field> Eq for Poly<F> {}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(k, c)| match k {
                0 => format!("({})", c),
                1 => format!("({})*x", c),
                _ => format!("({})*x^{}", c, k),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map_or(false, |c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &F) -> Self {
        Poly { field: field.clone(), coeffs: vec![] }
    }

    pub fn one(field: &F) -> Self {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    /// c * x^k
    pub fn monomial(field: &F, c: F::Elem, k: usize) -> Self {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.field.add(&self.coeff(k), &other.coeff(k)));
        }
        Poly::new(&self.field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.field.sub(&self.coeff(k), &other.coeff(k)));
        }
        Poly::new(&self.field, out)
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|c| self.field.mul(c, s)).collect(),
        )
    }

    pub fn pow(&self, mut k: usize) -> Self {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let out: Vec<F::Elem> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| self.field.mul(c, &self.field.from_i64(k as i64)))
            .collect();
        Poly::new(&self.field, out)
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn div_rem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = den.coeffs.len() - 1;
        let lead_inv = f.inv(den.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = f.mul(rem.last().unwrap(), &lead_inv);
            if !f.is_zero(&q) {
                quot[k] = q.clone();
                for (i, c) in den.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(&rem[k + i], &f.mul(&q, c));
                }
            }
            rem.pop();
            while rem.len() > dd && f.is_zero(rem.last().unwrap()) {
                rem.pop();
            }
        }
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&self.field.inv(l).unwrap()),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm, with
    /// monic normalization at every step to control growth.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// True iff gcd(f, f') is constant.
    pub fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            // constant, or p-th power pattern in characteristic p
            return self.degree() == Some(0);
        }
        self.gcd(&d).degree() == Some(0)
    }

    /// Scalar lambda with self = lambda * other, when it exists.
    pub fn proportionality(&self, other: &Self) -> Option<F::Elem> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return None;
        }
        if self.degree() != other.degree() {
            return None;
        }
        let f = &self.field;
        let lambda = f.div(self.leading().unwrap(), other.leading().unwrap()).unwrap();
        if *self == other.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }

    pub fn map_coeffs(&self, g: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Poly::new(&self.field, self.coeffs.iter().map(g).collect())
    }
}

/// (cx + d)^D * f((ax + b)/(cx + d)), the homogenized pullback of f
/// along the Moebius map. The roots of the result are the preimages of
/// the roots of f, with M^-1(infinity) absorbing the degree gap when
/// D exceeds deg f.
pub fn moebius_pullback<F: Field>(f: &Poly<F>, m: &MoebiusMap<F>, d: usize) -> Poly<F> {
    let field = f.field().clone();
    let deg = f.degree().unwrap_or(0);
    assert!(d >= deg, "homogenization degree below deg f");
    let lin_num = Poly::new(&field, vec![m.b.clone(), m.a.clone()]); // a x + b
    let lin_den = Poly::new(&field, vec![m.d.clone(), m.c.clone()]); // c x + d
    // powers 0..=d of both linear forms
    let mut pnum: Vec<Poly<F>> = Vec::with_capacity(d + 1);
    let mut pden: Vec<Poly<F>> = Vec::with_capacity(d + 1);
    pnum.push(Poly::one(&field));
    pden.push(Poly::one(&field));
    for k in 1..=d {
        pnum.push(pnum[k - 1].mul(&lin_num));
        pden.push(pden[k - 1].mul(&lin_den));
    }
    let mut acc = Poly::zero(&field);
    for (k, c) in f.coeffs().iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        acc = acc.add(&pnum[k].mul(&pden[d - k]).scale(c));
    }
    acc
}

impl Poly<CycField> {
    /// Coefficient-wise complex conjugation.
    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// True iff every coefficient is fixed by conjugation.
    pub fn is_conj_fixed(&self) -> bool {
        self.coeffs().iter().all(CycNum::is_real)
    }

    /// Move coefficients into a larger cyclotomic field.
    pub fn embed_into(&self, target: &CycField) -> Result<Poly<CycField>> {
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| c.embed_into(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(target, coeffs))
    }
}

/// Convenience constructor used across the curve machinery.
pub fn poly_from_pairs<F: Field>(field: &F, pairs: &[(usize, F::Elem)]) -> Poly<F> {
    let top = pairs.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut v = vec![field.zero(); top + 1];
    for (k, c) in pairs {
        v[*k] = field.add(&v[*k], c);
    }
    Poly::new(field, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycField;

    fn qq() -> CycField {
        CycField::new(1)
    }

    #[test]
    fn gcd_examples() {
        let f = qq();
        // gcd(x^2 - 1, x^3 - 1) = x - 1
        let a = Poly::from_i64(&f, &[-1, 0, 1]);
        let b = Poly::from_i64(&f, &[-1, 0, 0, 1]);
        assert_eq!(a.gcd(&b), Poly::from_i64(&f, &[-1, 1]));
        // gcd(f, 0) = monic f
        let c = Poly::from_i64(&f, &[2, 0, 2]);
        assert_eq!(c.gcd(&Poly::zero(&f)), Poly::from_i64(&f, &[1, 0, 1]));
        // idempotence
        let d = Poly::from_i64(&f, &[1, 0, 1]);
        assert_eq!(d.gcd(&d), d);
    }

    #[test]
    fn squarefree_detection() {
        let f = qq();
        assert!(Poly::from_i64(&f, &[-1, 0, 1]).is_squarefree());
        // (x-1)^2
        assert!(!Poly::from_i64(&f, &[1, -2, 1]).is_squarefree());
        // (x-1)^2 (x+2)
        let p = Poly::from_i64(&f, &[1, -2, 1]).mul(&Poly::from_i64(&f, &[2, 1]));
        assert!(!p.is_squarefree());
    }

    #[test]
    fn pullback_examples() {
        let f = qq();
        let inv = MoebiusMap::from_i64(&f, 0, 1, 1, 0).unwrap(); // x -> 1/x
        // x^2 + 1 is symmetric under inversion
        let p = Poly::from_i64(&f, &[1, 0, 1]);
        assert_eq!(moebius_pullback(&p, &inv, 2), p);
        // identity pullback
        let id = MoebiusMap::identity(&f);
        let q = Poly::from_i64(&f, &[3, 1, 0, 2]);
        assert_eq!(moebius_pullback(&q, &id, 3), q);
        // x^6 f(1/x) for f = x^5 - x gives x - x^5, i.e. -f
        let x5x = Poly::from_i64(&f, &[0, -1, 0, 0, 0, 1]);
        let g = moebius_pullback(&x5x, &inv, 6);
        assert_eq!(g.proportionality(&x5x), Some(f.from_i64(-1)));
    }

    #[test]
    fn pullback_scaling_by_root_of_unity() {
        let f6 = CycField::new(6);
        // f = x^6 - 1, M = zeta_6 x: pullback equals f exactly
        let p = Poly::new(
            &f6,
            vec![
                f6.from_i64(-1),
                f6.zero(),
                f6.zero(),
                f6.zero(),
                f6.zero(),
                f6.zero(),
                f6.one(),
            ],
        );
        let m = MoebiusMap::new(&f6, f6.zeta(), f6.zero(), f6.zero(), f6.one()).unwrap();
        let g = moebius_pullback(&p, &m, 6);
        assert_eq!(g, p);
    }

    #[test]
    fn pullback_round_trip_property() {
        let f = CycField::new(4);
        let p = Poly::new(
            &f,
            vec![f.from_i64(2), f.zeta(), f.one(), f.from_i64(-3), f.one()],
        );
        let m = MoebiusMap::new(&f, f.zeta(), f.one(), f.one(), f.from_i64(-1)).unwrap();
        let d = 4;
        let g = moebius_pullback(&p, &m, d);
        let back = moebius_pullback(&g, &m.inverse(), d);
        assert!(back.proportionality(&p).is_some());
        // composition compatibility
        let m2 = MoebiusMap::new(&f, f.one(), f.zeta(), f.zero(), f.one()).unwrap();
        let via_two = moebius_pullback(&moebius_pullback(&p, &m, d), &m2, d);
        let via_one = moebius_pullback(&p, &m.compose(&m2), d);
        assert!(via_two.proportionality(&via_one).is_some());
    }

    #[test]
    fn proportionality_examples() {
        let f = qq();
        let a = Poly::from_i64(&f, &[2, 0, 2]);
        let b = Poly::from_i64(&f, &[1, 0, 1]);
        assert_eq!(a.proportionality(&b), Some(f.from_i64(2)));
        let c = Poly::from_i64(&f, &[0, 1, 1]);
        assert_eq!(c.proportionality(&b), None);
    }
}
