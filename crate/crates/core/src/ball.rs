//! Certified complex interval arithmetic on dyadic rationals.
//!
//! A [`Dyadic`] is an exact value `mant * 2^exp`. Addition and
//! multiplication are exact; only division, square roots and explicit
//! rounding introduce error, and every such error is returned to the
//! caller as an upper bound. A [`ComplexBall`] is a closed disk
//! `|z - center| <= radius` whose operations round the center and push
//! all rounding error outward into the radius, so the true value of any
//! computation is always contained in the resulting ball.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Exact dyadic rational `mant * 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

/// Bits kept in radius mantissas; radii only need an order of magnitude.
const RADIUS_BITS: u64 = 16;

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// 2^k.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    /// Exact decomposition of an f64 (must be finite).
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "dyadic from non-finite float");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant as i64), exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        // Keep 64 significant bits.
        let shift = bits - 64;
        let (m, e) = if shift > 0 {
            ((&self.mant >> shift as u64).to_string(), self.exp + shift)
        } else {
            (self.mant.to_string(), self.exp)
        };
        let m: f64 = m.parse().unwrap_or(0.0);
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exact sum. Exponent gaps are handled exactly; callers that care
    /// about mantissa growth round afterwards.
    pub fn add(&self, other: &Dyadic) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn shr(&self, k: i64) -> Self {
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp - k }
    }

    /// Truncate toward zero to at most `prec` mantissa bits. Returns the
    /// rounded value and an upper bound on the absolute error.
    pub fn round(&self, prec: u32) -> (Dyadic, Dyadic) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let drop = bits - prec as u64;
        let m = &self.mant >> drop;
        let err = Dyadic::pow2(self.exp + drop as i64);
        (Dyadic::new(m, self.exp + drop as i64), err)
    }

    /// Round the magnitude up to a short mantissa; used for radii.
    pub fn round_up(&self) -> Dyadic {
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mant.bits();
        if bits <= RADIUS_BITS {
            return self.abs();
        }
        let drop = bits - RADIUS_BITS;
        let m = (self.mant.abs() >> drop) + 1u32;
        Dyadic::new(m, self.exp + drop as i64)
    }

    /// Quotient with directed truncation toward zero; error <= one ulp
    /// of the result at `prec` bits. `other` must be nonzero.
    pub fn div(&self, other: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        assert!(!other.mant.is_zero(), "dyadic division by zero");
        if self.mant.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let na = self.mant.bits() as i64;
        let nb = other.mant.bits() as i64;
        // Shift so the quotient carries ~prec+2 significant bits.
        let shift = (nb - na + prec as i64 + 2).max(0) as u64;
        let q = (&self.mant << shift) / &other.mant;
        let exp = self.exp - other.exp - shift as i64;
        let err = Dyadic::pow2(exp);
        (Dyadic::new(q, exp), err)
    }

    /// Floor square root of a nonnegative dyadic at `prec` bits; error
    /// is at most one ulp of the result.
    pub fn sqrt(&self, prec: u32) -> (Dyadic, Dyadic) {
        assert!(!self.is_negative(), "dyadic sqrt of negative value");
        if self.mant.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let bits = self.mant.bits() as i64;
        // Want the shifted mantissa to have ~2*prec bits and even total exponent.
        let mut shift = (2 * prec as i64 - bits).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let r = m.sqrt();
        let exp = (self.exp - shift) / 2;
        let err = Dyadic::pow2(exp);
        (Dyadic::new(r, exp), err)
    }

    pub fn cmp_val(&self, other: &Dyadic) -> Ordering {
        let d = self.sub(other);
        match d.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn max_val(&self, other: &Dyadic) -> Dyadic {
        if self.cmp_val(other) == Ordering::Less { other.clone() } else { self.clone() }
    }

    pub fn min_val(&self, other: &Dyadic) -> Dyadic {
        if self.cmp_val(other) == Ordering::Greater { other.clone() } else { self.clone() }
    }
}

/// Closed disk `|z - (re + i*im)| <= rad` with exact dyadic center.
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
}

impl ComplexBall {
    pub fn exact(re: Dyadic, im: Dyadic) -> Self {
        ComplexBall { re, im, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        ComplexBall::exact(Dyadic::zero(), Dyadic::zero())
    }

    pub fn one() -> Self {
        ComplexBall::exact(Dyadic::one(), Dyadic::zero())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexBall::exact(Dyadic::from_f64(re), Dyadic::from_f64(im))
    }

    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(!rad.is_negative());
        ComplexBall { re, im, rad }
    }

    /// Upper bound on |center|.
    pub fn center_abs_upper(&self) -> Dyadic {
        self.re.abs().add(&self.im.abs()).round_up()
    }

    /// Lower bound on |center| (max-norm bound).
    pub fn center_abs_lower(&self) -> Dyadic {
        self.re.abs().max_val(&self.im.abs())
    }

    /// Lower bound on |z| over the whole ball, clamped at zero.
    pub fn abs_lower(&self) -> Dyadic {
        let l = self.center_abs_lower().sub(&self.rad);
        if l.is_negative() { Dyadic::zero() } else { l }
    }

    /// Upper bound on |z| over the whole ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.center_abs_upper().add(&self.rad).round_up()
    }

    fn rounded(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (re, e1) = re.round(prec);
        let (im, e2) = im.round(prec);
        let rad = rad.add(&e1).add(&e2).round_up();
        ComplexBall { re, im, rad }
    }

    pub fn add_ball(&self, other: &ComplexBall, prec: u32) -> Self {
        ComplexBall::rounded(
            self.re.add(&other.re),
            self.im.add(&other.im),
            self.rad.add(&other.rad),
            prec,
        )
    }

    pub fn sub_ball(&self, other: &ComplexBall, prec: u32) -> Self {
        ComplexBall::rounded(
            self.re.sub(&other.re),
            self.im.sub(&other.im),
            self.rad.add(&other.rad),
            prec,
        )
    }

    pub fn neg_ball(&self) -> Self {
        ComplexBall { re: self.re.neg(), im: self.im.neg(), rad: self.rad.clone() }
    }

    pub fn conj_ball(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg(), rad: self.rad.clone() }
    }

    pub fn mul_ball(&self, other: &ComplexBall, prec: u32) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        // |a*rb| + |b*ra| + ra*rb
        let rad = self
            .center_abs_upper()
            .mul(&other.rad)
            .add(&other.center_abs_upper().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        ComplexBall::rounded(re, im, rad, prec)
    }

    pub fn scale(&self, s: &Dyadic, prec: u32) -> Self {
        ComplexBall::rounded(
            self.re.mul(s),
            self.im.mul(s),
            self.rad.mul(&s.abs()),
            prec,
        )
    }

    /// True iff 0 may lie in the ball.
    pub fn contains_zero(&self) -> bool {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let r2 = self.rad.mul(&self.rad);
        n.cmp_val(&r2) != Ordering::Greater
    }

    /// True iff 0 certainly does not lie in the ball.
    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// True iff the two balls certainly do not intersect.
    pub fn disjoint(&self, other: &ComplexBall) -> bool {
        let dr = self.re.sub(&other.re);
        let di = self.im.sub(&other.im);
        let d2 = dr.mul(&dr).add(&di.mul(&di));
        let s = self.rad.add(&other.rad);
        d2.cmp_val(&s.mul(&s)) == Ordering::Greater
    }

    /// True iff the exact point (re, im) lies in the (closed) ball.
    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        let dr = self.re.sub(re);
        let di = self.im.sub(im);
        let d2 = dr.mul(&dr).add(&di.mul(&di));
        d2.cmp_val(&self.rad.mul(&self.rad)) != Ordering::Greater
    }

    /// Reciprocal. Fails (returns None) if the ball may contain zero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        let low = self.abs_lower();
        if low.is_zero() {
            return None;
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let (re, e1) = self.re.div(&n, prec);
        let (im_raw, e2) = self.im.div(&n, prec);
        let im = im_raw.neg();
        // |1/w - 1/c| <= rad / (|c|_low * |w|_low)
        let clow = self.center_abs_lower();
        let denom = clow.mul(&low);
        let (prop, e3) = self.rad.div(&denom, RADIUS_BITS as u32);
        let rad = prop.add(&e3).add(&e1).add(&e2).round_up();
        Some(ComplexBall { re, im, rad })
    }

    pub fn div_ball(&self, other: &ComplexBall, prec: u32) -> Option<Self> {
        Some(self.mul_ball(&other.recip(prec)?, prec))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut k: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexBall::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ball(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ball(&base, prec);
            }
        }
        acc
    }

    /// Interval of possible real parts, as (lo, hi).
    pub fn re_interval(&self) -> (Dyadic, Dyadic) {
        (self.re.sub(&self.rad), self.re.add(&self.rad))
    }

    pub fn im_interval(&self) -> (Dyadic, Dyadic) {
        (self.im.sub(&self.rad), self.im.add(&self.rad))
    }

    /// True iff every point of the ball has positive real part.
    pub fn re_definitely_positive(&self) -> bool {
        self.re.sub(&self.rad).is_positive()
    }

    /// True iff the imaginary part certainly avoids zero.
    pub fn im_excludes_zero(&self) -> bool {
        let (lo, hi) = self.im_interval();
        lo.is_positive() || hi.is_negative()
    }

    /// True iff `self` is certainly contained in the interior of `other`.
    pub fn inside(&self, other: &ComplexBall) -> bool {
        let dr = self.re.sub(&other.re);
        let di = self.im.sub(&other.im);
        let (d, e) = dr.mul(&dr).add(&di.mul(&di)).sqrt(64);
        let slack = other.rad.sub(&self.rad).sub(&d).sub(&e);
        slack.is_positive()
    }

    /// Principal square root. The ball must avoid the branch cut
    /// (-inf, 0]; callers resolve exactly-negative-real inputs
    /// themselves. Returns None when the cut cannot be excluded.
    pub fn sqrt_principal(&self, prec: u32) -> Option<Self> {
        let away_from_cut = self.re_definitely_positive() || self.im_excludes_zero();
        if !away_from_cut || !self.excludes_zero() {
            return None;
        }
        // Center square root by the stable half-angle formulas.
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let wp = prec + 8;
        let (m, _) = n.sqrt(wp);
        let two = Dyadic::from_i64(2);
        let (sre, sim) = if !self.re.is_negative() {
            let (t, _) = m.add(&self.re).div(&two, wp);
            let (t, _) = t.sqrt(wp);
            if t.is_zero() {
                return None;
            }
            let (u, _) = self.im.div(&t.mul(&two), wp);
            (t, u)
        } else {
            let (t, _) = m.sub(&self.re).div(&two, wp);
            let (t, _) = t.sqrt(wp);
            if t.is_zero() {
                return None;
            }
            let (u, _) = self.im.abs().div(&t.mul(&two), wp);
            if self.im.is_negative() {
                (u, t.neg())
            } else {
                (u, t)
            }
        };
        // Residual rho = s^2 - center, exactly.
        let rho_re = sre.mul(&sre).sub(&sim.mul(&sim)).sub(&self.re);
        let rho_im = two.mul(&sre).mul(&sim).sub(&self.im);
        let rho = rho_re.abs().add(&rho_im.abs()); // >= |rho|
        // Distance to the wrong root -sqrt(c) is at least
        // max(Re(s), |Im(s)| when the sign of Im is certain).
        let mut delta = if sre.is_positive() { sre.clone() } else { Dyadic::zero() };
        if self.im_excludes_zero() {
            delta = delta.max_val(&sim.abs());
        }
        if delta.is_zero() {
            return None;
        }
        let (center_err, e4) = rho.div(&delta, RADIUS_BITS as u32);
        // Propagate the input radius: |sqrt'| <= 1/(2 sqrt(|w|_low)).
        let low = self.abs_lower();
        let (sq_low, se) = low.sqrt(32);
        let sq_low = sq_low.sub(&se);
        if !sq_low.is_positive() {
            return None;
        }
        let (prop, e5) = self.rad.div(&two.mul(&sq_low), RADIUS_BITS as u32);
        let rad = center_err.add(&e4).add(&prop).add(&e5).round_up();
        let (sre, r1) = sre.round(prec);
        let (sim, r2) = sim.round(prec);
        Some(ComplexBall { re: sre, im: sim, rad: rad.add(&r1).add(&r2).round_up() })
    }

    /// Square root of a ball known to contain a positive real value;
    /// the imaginary part of the result is pinned to zero.
    pub fn sqrt_positive_real(&self, prec: u32) -> Option<Self> {
        let (lo, _hi) = self.re_interval();
        if !lo.is_positive() {
            return None;
        }
        let (s, e) = self.re.sqrt(prec);
        // |sqrt(x) - sqrt(c)| <= rad / (2 sqrt(lo))
        let (sl, sle) = lo.sqrt(32);
        let sl = sl.sub(&sle);
        if !sl.is_positive() {
            return None;
        }
        let (prop, e2) = self.rad.div(&Dyadic::from_i64(2).mul(&sl), RADIUS_BITS as u32);
        Some(ComplexBall {
            re: s,
            im: Dyadic::zero(),
            rad: e.add(&prop).add(&e2).round_up(),
        })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v)
    }

    #[test]
    fn dyadic_roundtrip_and_ops() {
        let a = d(1.5);
        let b = d(-0.25);
        assert_eq!(a.add(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), -0.375);
        assert_eq!(a.sub(&b).to_f64(), 1.75);
        assert_eq!(d(0.0).add(&a).to_f64(), 1.5);
    }

    #[test]
    fn dyadic_div_and_sqrt_bounds() {
        let (q, err) = d(1.0).div(&d(3.0), 64);
        let back = q.mul(&d(3.0));
        assert!(back.sub(&Dyadic::one()).abs().cmp_val(&err.mul(&d(4.0))) == Ordering::Less);
        let (s, serr) = d(2.0).sqrt(64);
        let diff = s.mul(&s).sub(&d(2.0)).abs();
        // |s^2 - 2| <= (2 s + err) * err, loosely 4 * err
        assert!(diff.cmp_val(&serr.mul(&d(8.0))) == Ordering::Less);
    }

    #[test]
    fn ball_mul_contains_true_product() {
        let prec = 64;
        let a = ComplexBall::new(d(1.0), d(2.0), d(1e-10));
        let b = ComplexBall::new(d(-0.5), d(0.25), d(1e-12));
        let p = a.mul_ball(&b, prec);
        // true center product
        let tre = 1.0 * -0.5 - 2.0 * 0.25;
        let tim = 1.0 * 0.25 + 2.0 * -0.5;
        assert!(p.contains_point(&d(tre), &d(tim)));
        assert!(p.rad.cmp_val(&d(1e-8)) == Ordering::Less);
    }

    #[test]
    fn ball_recip_certifies() {
        let prec = 96;
        let a = ComplexBall::new(d(3.0), d(4.0), d(1e-12));
        let r = a.recip(prec).unwrap();
        // 1/(3+4i) = (3-4i)/25
        assert!(r.contains_point(&d(0.12), &d(-0.16)));
        assert!(a.mul_ball(&r, prec).contains_point(&d(1.0), &d(0.0)));
        let z = ComplexBall::new(d(0.0), d(0.0), d(0.5));
        assert!(z.recip(prec).is_none());
    }

    #[test]
    fn ball_sqrt_principal() {
        let prec = 96;
        // sqrt(-4 + 0.0001 i) should be near 0.000025 + 2i
        let a = ComplexBall::new(d(-4.0), d(1e-4), d(1e-20));
        let s = a.sqrt_principal(prec).unwrap();
        let sq = s.mul_ball(&s, prec);
        assert!(sq.contains_point(&d(-4.0), &d(1e-4)));
        assert!(s.im.is_positive());
        // straddling the cut is rejected
        let bad = ComplexBall::new(d(-4.0), d(0.0), d(1e-3));
        assert!(bad.sqrt_principal(prec).is_none());
        // positive real root
        let p = ComplexBall::new(d(9.0), d(0.0), d(1e-12));
        let s = p.sqrt_positive_real(prec).unwrap();
        assert!(s.contains_point(&d(3.0), &d(0.0)));
    }

    #[test]
    fn ball_predicates() {
        let a = ComplexBall::new(d(1.0), d(0.0), d(0.1));
        let b = ComplexBall::new(d(1.05), d(0.0), d(0.01));
        let c = ComplexBall::new(d(2.0), d(0.0), d(0.1));
        assert!(!a.disjoint(&b));
        assert!(a.disjoint(&c));
        assert!(a.excludes_zero());
        assert!(ComplexBall::new(d(0.05), d(0.0), d(0.1)).contains_zero());
        assert!(b.inside(&ComplexBall::new(d(1.1), d(0.0), d(0.2))));
        assert!(!c.inside(&a));
    }
}
