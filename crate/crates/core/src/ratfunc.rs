//! Rational functions in canonical form: gcd-reduced with a monic
//! denominator, so equality of rational functions is structural.

use crate::field::Field;
use crate::moebius::MoebiusMap;
use crate::poly::{moebius_pullback, Poly};
use std::fmt;

#[derive(Clone)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> PartialEq for RatFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}
impl<F: Field> Eq for RatFunc<F> {}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            let field = num.field().clone();
            return RatFunc { num, den: Poly::one(&field) };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let field = num.field().clone();
        let lead_inv = field.inv(den.leading().unwrap()).unwrap();
        RatFunc {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let field = p.field().clone();
        RatFunc { num: p, den: Poly::one(&field) }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        RatFunc::from_poly(Poly::constant(field, c))
    }

    /// The coordinate function x.
    pub fn x(field: &F) -> Self {
        RatFunc::from_poly(Poly::new(field, vec![field.zero(), field.one()]))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn field(&self) -> F {
        self.num.field().clone()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Degree as a map P1 -> P1: max(deg num, deg den).
    pub fn map_degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by the zero function");
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        RatFunc::new(self.num.scale(s), self.den.clone())
    }

    /// Value at a point, None at poles.
    pub fn eval(&self, x: &F::Elem) -> Option<F::Elem> {
        let field = self.num.field();
        let d = self.den.eval(x);
        if field.is_zero(&d) {
            return None;
        }
        field.div(&self.num.eval(x), &d)
    }

    /// Canonical form of R((ax+b)/(cx+d)).
    pub fn compose_moebius(&self, m: &MoebiusMap<F>) -> Self {
        let d = self.map_degree();
        RatFunc::new(
            moebius_pullback(&self.num, m, d),
            moebius_pullback(&self.den, m, d),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycField;
    use crate::moebius::MoebiusMap;

    #[test]
    fn canonical_form() {
        let f = CycField::new(1);
        // (x^2-1)/(2x-2) reduces to (x+1)/2 with monic denominator
        let r = RatFunc::new(
            Poly::from_i64(&f, &[-1, 0, 1]),
            Poly::from_i64(&f, &[-2, 2]),
        );
        assert_eq!(r.num(), &Poly::from_i64(&f, &[1, 1]).scale(&f.from_rat(
            crate::cyclotomic::Rat::new(1.into(), 2.into())
        )));
        assert_eq!(r.den(), &Poly::one(&f));
    }

    #[test]
    fn dihedral_invariant_fixed_by_rotation() {
        // t = x^3 + x^-3 as (x^6+1)/x^3 is fixed by x -> zeta_3 x
        let f = CycField::new(3);
        let t = RatFunc::new(
            Poly::new(&f, {
                let mut v = vec![f.zero(); 7];
                v[0] = f.one();
                v[6] = f.one();
                v
            }),
            Poly::monomial(&f, f.one(), 3),
        );
        let m = MoebiusMap::new(&f, f.zeta(), f.zero(), f.zero(), f.one()).unwrap();
        assert_eq!(t.compose_moebius(&m), t);
        // identity composition
        assert_eq!(t.compose_moebius(&MoebiusMap::identity(&f)), t);
    }

    #[test]
    fn composition_is_functorial() {
        let f = CycField::new(4);
        let r = RatFunc::new(
            Poly::from_i64(&f, &[1, 2, 0, 1]),
            Poly::from_i64(&f, &[0, -1, 1]),
        );
        let m1 = MoebiusMap::new(&f, f.zeta(), f.one(), f.zero(), f.one()).unwrap();
        let m2 = MoebiusMap::new(&f, f.one(), f.zero(), f.one(), f.from_i64(2)).unwrap();
        // R(M1(M2(x))) = (R o M1) o M2
        let lhs = r.compose_moebius(&m1).compose_moebius(&m2);
        let rhs = r.compose_moebius(&m1.compose(&m2));
        assert_eq!(lhs, rhs);
    }
}
