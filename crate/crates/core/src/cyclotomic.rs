//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1)
//! and always kept reduced modulo the N-th cyclotomic polynomial, so
//! equality is coefficient-wise. The embedding convention is fixed once
//! and for all: zeta_N maps to exp(2*pi*i/N). Complex conjugation is the
//! coefficient permutation zeta -> zeta^(N-1) followed by reduction, and
//! agrees with conjugation of the embedded value.

use crate::ball::{ComplexBall, Dyadic};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub type Rat = BigRational;

pub fn rat_i64(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// Exact division of integer polynomials (little-endian), remainder
/// must vanish.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den.last().unwrap().clone();
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd && rem.iter().any(|c| !c.is_zero()) {
        while rem.last().map_or(false, |c| c.is_zero()) {
            rem.pop();
        }
        if rem.len() <= dd {
            break;
        }
        let k = rem.len() - 1 - dd;
        let q = rem.last().unwrap() / &lead;
        quot[k] = q.clone();
        for (i, c) in den.iter().enumerate() {
            let v = &rem[k + i] - &q * c;
            rem[k + i] = v;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// The N-th cyclotomic polynomial, little-endian integer coefficients.
///
/// Computed by dividing x^N - 1 by the product of Phi_d over the proper
/// divisors d of N.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    if n == 1 {
        return vec![BigInt::from(-1), BigInt::one()];
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        let mut prod = vec![BigInt::zero(); den.len() + phi_d.len() - 1];
        for (i, a) in den.iter().enumerate() {
            for (j, b) in phi_d.iter().enumerate() {
                let v = &prod[i + j] + a * b;
                prod[i + j] = v;
            }
        }
        den = prod;
    }
    int_poly_div_exact(&num, &den)
}

struct CycFieldData {
    n: u64,
    phi: usize,
    /// Monic modulus Phi_N as rationals, little-endian.
    modulus: Vec<Rat>,
    /// zeta^k reduced into the power basis, for k = 0..n.
    power_table: Vec<Vec<Rat>>,
}

/// Handle to a cyclotomic field Q(zeta_N). Cheap to clone.
#[derive(Clone)]
pub struct CycField(Arc<CycFieldData>);

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.n)
    }
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n
    }
}
impl Eq for CycField {}

impl CycField {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "cyclotomic order must be positive");
        let modulus: Vec<Rat> = cyclotomic_poly(n)
            .into_iter()
            .map(Rat::from_integer)
            .collect();
        let phi = modulus.len() - 1;
        debug_assert_eq!(phi as u64, euler_phi(n));
        // x^k mod Phi_N for k = 0..2n; products of reduced elements reach
        // exponent 2*phi - 2 which can exceed n when N is prime.
        let table_top = 2 * n.max(phi as u64);
        let mut power_table: Vec<Vec<Rat>> = Vec::with_capacity(table_top as usize + 1);
        let mut cur = vec![Rat::zero(); phi];
        cur[0] = Rat::one();
        power_table.push(cur.clone());
        for _ in 1..=table_top {
            // multiply by x
            let carry = cur[phi - 1].clone();
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rat::zero();
            if !carry.is_zero() {
                // x^phi = -(modulus minus leading term)
                for i in 0..phi {
                    let v = &cur[i] - &carry * &modulus[i];
                    cur[i] = v;
                }
            }
            power_table.push(cur.clone());
        }
        CycField(Arc::new(CycFieldData { n, phi, modulus, power_table }))
    }

    pub fn order(&self) -> u64 {
        self.0.n
    }

    pub fn degree(&self) -> usize {
        self.0.phi
    }

    pub fn modulus(&self) -> &[Rat] {
        &self.0.modulus
    }

    pub fn zero(&self) -> CycNum {
        CycNum { field: self.clone(), coeffs: vec![Rat::zero(); self.0.phi] }
    }

    pub fn one(&self) -> CycNum {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, q: Rat) -> CycNum {
        let mut c = vec![Rat::zero(); self.0.phi];
        c[0] = q;
        CycNum { field: self.clone(), coeffs: c }
    }

    pub fn from_i64(&self, v: i64) -> CycNum {
        self.from_rat(rat_i64(v))
    }

    /// zeta_N^k for any integer exponent.
    pub fn zeta_pow(&self, k: i64) -> CycNum {
        let n = self.0.n as i64;
        let k = k.rem_euclid(n) as usize;
        CycNum { field: self.clone(), coeffs: self.0.power_table[k].clone() }
    }

    pub fn zeta(&self) -> CycNum {
        self.zeta_pow(1)
    }

    /// zeta_k^j realized inside this field; requires k | N.
    pub fn root_of_unity(&self, k: u64, j: i64) -> Result<CycNum> {
        if k == 0 || self.0.n % k != 0 {
            return Err(Error::Divisibility { k, n: self.0.n });
        }
        let step = (self.0.n / k) as i64;
        Ok(self.zeta_pow(j.rem_euclid(k as i64) * step))
    }

    /// All k-th roots of unity in this field (k | N), deterministic order.
    pub fn all_roots_of_unity(&self, k: u64) -> Result<Vec<CycNum>> {
        (0..k as i64).map(|j| self.root_of_unity(k, j)).collect()
    }

    fn reduce(&self, raw: &[Rat]) -> Vec<Rat> {
        let phi = self.0.phi;
        let mut out = vec![Rat::zero(); phi];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < phi {
                let v = &out[k] + c;
                out[k] = v;
            } else {
                let row = &self.0.power_table[k];
                for i in 0..phi {
                    if !row[i].is_zero() {
                        let v = &out[i] + c * &row[i];
                        out[i] = v;
                    }
                }
            }
        }
        out
    }

    /// Certified ball containing exp(2*pi*i/N).
    pub fn zeta_ball(&self, prec: u32) -> ComplexBall {
        zeta_ball(self.0.n, prec)
    }

    /// Residues coprime to N, ascending: the Galois group indices.
    pub fn units(&self) -> Vec<u64> {
        (1..=self.0.n)
            .filter(|k| num_integer::gcd(*k, self.0.n) == 1)
            .collect()
    }
}

/// Certified enclosure of exp(2*pi*i*j/N). Refined by Newton iteration
/// on x^N - 1 from a double-precision seed and certified by a disk
/// Newton containment test, so the result is independent of the seed's
/// accuracy; a final proximity check against the libm seed pins down
/// which N-th root was certified.
pub fn zeta_ball(n: u64, prec: u32) -> ComplexBall {
    assert!(n >= 1);
    if n == 1 {
        return ComplexBall::one();
    }
    if n == 2 {
        return ComplexBall::exact(Dyadic::from_i64(-1), Dyadic::zero());
    }
    let wp = prec + 64;
    let theta = 2.0 * std::f64::consts::PI / n as f64;
    let mut z = ComplexBall::from_f64(theta.cos(), theta.sin());
    // Newton: z <- z - (z^n - 1)/(n z^(n-1)), centers only.
    let steps = 3 + (wp as f64 / 40.0).log2().ceil().max(0.0) as u32;
    for _ in 0..steps {
        let zn1 = z.pow(n - 1, wp);
        let zn = zn1.mul_ball(&z, wp);
        let f = zn.sub_ball(&ComplexBall::one(), wp);
        let df = zn1.scale(&Dyadic::from_i64(n as i64), wp);
        let corr = f.div_ball(&df, wp).expect("Newton derivative vanished");
        let znew = z.sub_ball(&corr, wp);
        z = ComplexBall::exact(znew.re, znew.im);
    }
    // Certify: the disk B = (z, r) contains exactly one root of x^n - 1
    // if m - f(m)/f'(B) is contained in the interior of B.
    let mut r = Dyadic::pow2(-(prec as i64) - 8);
    for _ in 0..8 {
        let b = ComplexBall::new(z.re.clone(), z.im.clone(), r.clone());
        let m = ComplexBall::exact(z.re.clone(), z.im.clone());
        let fm = m.pow(n, wp).sub_ball(&ComplexBall::one(), wp);
        let dfb = b.pow(n - 1, wp).scale(&Dyadic::from_i64(n as i64), wp);
        if let Some(q) = fm.div_ball(&dfb, wp) {
            let newton = m.sub_ball(&q, wp);
            if newton.inside(&b) {
                // Make sure we certified the principal root: it must be
                // within half the root separation 2*sin(pi/n) of the seed.
                let dr = z.re.to_f64() - theta.cos();
                let di = z.im.to_f64() - theta.sin();
                let sep = (std::f64::consts::PI / n as f64).sin();
                assert!(
                    (dr * dr + di * di).sqrt() < sep,
                    "Newton drifted off the principal root of unity"
                );
                return ComplexBall::new(z.re, z.im, r);
            }
        }
        r = r.mul(&Dyadic::from_i64(16));
    }
    panic!("failed to certify root of unity enclosure at {} bits", prec);
}

/// Ball containing an exact rational, with error below 2^-prec relative.
pub fn ball_from_rat(q: &Rat, prec: u32) -> ComplexBall {
    let num = Dyadic::new(q.numer().clone(), 0);
    let den = Dyadic::new(q.denom().clone(), 0);
    let (v, e) = num.div(&den, prec);
    ComplexBall::new(v, Dyadic::zero(), e)
}

/// Element of Q(zeta_N): exact rational coordinates in the power basis.
#[derive(Clone, PartialEq, Eq)]
pub struct CycNum {
    field: CycField,
    coeffs: Vec<Rat>,
}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for c in &self.coeffs {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let base = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{}", k),
            };
            let t = if base.is_empty() {
                format!("{}", c)
            } else if c.is_one() {
                base
            } else if *c == -Rat::one() {
                format!("-{}", base)
            } else {
                format!("{}*{}", c, base)
            };
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

impl CycNum {
    pub fn from_coeffs(field: &CycField, mut coeffs: Vec<Rat>) -> Self {
        assert!(coeffs.len() <= field.degree(), "coefficient vector too long");
        coeffs.resize(field.degree(), Rat::zero());
        CycNum { field: field.clone(), coeffs }
    }

    pub fn field(&self) -> &CycField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if this element is rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &CycNum) {
        assert!(self.field == other.field, "field mismatch: {:?} vs {:?}", self.field, other.field);
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycNum { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycNum { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        self.assert_same_field(other);
        let phi = self.field.degree();
        let mut raw = vec![Rat::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = &raw[i + j] + a * b;
                raw[i + j] = v;
            }
        }
        CycNum { field: self.field.clone(), coeffs: self.field.reduce(&raw) }
    }

    pub fn scale(&self, q: &Rat) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm
    /// against the (irreducible) modulus. None for zero.
    pub fn inv(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        // Work on rational polynomials (little-endian, trimmed).
        let trim = |mut v: Vec<Rat>| -> Vec<Rat> {
            while v.last().map_or(false, |c| c.is_zero()) {
                v.pop();
            }
            v
        };
        let mut r0: Vec<Rat> = self.field.modulus().to_vec();
        let mut r1: Vec<Rat> = trim(self.coeffs.clone());
        let mut t0: Vec<Rat> = vec![];
        let mut t1: Vec<Rat> = vec![Rat::one()];
        while !r1.is_empty() {
            // divide r0 by r1
            let mut rem = r0.clone();
            let mut quot = vec![Rat::zero(); rem.len().saturating_sub(r1.len()) + 1];
            let lead = r1.last().unwrap().clone();
            while rem.len() >= r1.len() && !rem.is_empty() {
                let k = rem.len() - r1.len();
                let q = rem.last().unwrap() / &lead;
                quot[k] = &quot[k] + &q;
                for (i, c) in r1.iter().enumerate() {
                    let v = &rem[k + i] - &q * c;
                    rem[k + i] = v;
                }
                rem = trim(rem);
            }
            // t_next = t0 - quot * t1
            let mut tn = t0.clone();
            tn.resize(tn.len().max(quot.len() + t1.len()), Rat::zero());
            for (i, a) in quot.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in t1.iter().enumerate() {
                    let v = &tn[i + j] - a * b;
                    tn[i + j] = v;
                }
            }
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = trim(tn);
        }
        // r0 is a nonzero constant gcd (modulus is irreducible).
        assert_eq!(r0.len(), 1, "cyclotomic modulus not coprime to element");
        let g = r0[0].clone();
        let coeffs: Vec<Rat> = t0.iter().map(|c| c / &g).collect();
        Some(CycNum::from_coeffs(&self.field, self.field.reduce(&coeffs)))
    }

    pub fn pow(&self, k: u64) -> CycNum {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut k = k;
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

    /// Galois action zeta -> zeta^k for k coprime to N.
    pub fn galois_apply(&self, k: u64) -> CycNum {
        let n = self.field.order();
        debug_assert_eq!(num_integer::gcd(k % n, n), 1);
        let mut raw = vec![Rat::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((j as u64) * (k % n) % n) as usize;
            let v = &raw[e] + c;
            raw[e] = v;
        }
        CycNum { field: self.field.clone(), coeffs: self.field.reduce(&raw) }
    }

    /// Complex conjugation: zeta -> zeta^(N-1), then reduce.
    pub fn conj(&self) -> CycNum {
        let n = self.field.order();
        if n <= 2 {
            return self.clone();
        }
        self.galois_apply(n - 1)
    }

    /// True iff the element is fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Certified ball containing the embedding under zeta -> exp(2 pi i/N).
    pub fn embed(&self, prec: u32) -> ComplexBall {
        let wp = prec + 32;
        let z = self.field.zeta_ball(wp);
        // Horner from the top coefficient.
        let mut acc = ComplexBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ball(&z, wp);
            if !c.is_zero() {
                acc = acc.add_ball(&ball_from_rat(c, wp), wp);
            }
        }
        acc
    }

    /// Move the element into a larger cyclotomic field (N | M).
    pub fn embed_into(&self, target: &CycField) -> Result<CycNum> {
        let n = self.field.order();
        let m = target.order();
        if m % n != 0 {
            return Err(Error::Divisibility { k: n, n: m });
        }
        let step = (m / n) as i64;
        let mut acc = target.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&target.zeta_pow(j as i64 * step).scale(c));
        }
        Ok(acc)
    }

    /// Exact textual form: "num/den" per power-basis coordinate.
    pub fn to_text(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    pub fn from_text(field: &CycField, rows: &[String]) -> Result<CycNum> {
        if rows.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                rows.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(rows.len());
        for row in rows {
            let (n, d) = row
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("bad rational '{}'", row)))?;
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator '{}'", row)))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator '{}'", row)))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator '{}'", row)));
            }
            coeffs.push(Rat::new(n, d));
        }
        Ok(CycNum::from_coeffs(field, coeffs))
    }

    /// Deterministic total order on elements (lexicographic on coords).
    pub fn lex_cmp(&self, other: &CycNum) -> std::cmp::Ordering {
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match a.cmp(b) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), int_poly(&[1, 0, 1]));
        // Phi_12 = x^4 - x^2 + 1, and the product of Phi_d over d | 12
        // must reproduce x^12 - 1.
        assert_eq!(cyclotomic_poly(12), int_poly(&[1, 0, -1, 0, 1]));
        let mut prod = vec![BigInt::one()];
        for d in [1u64, 2, 3, 4, 6, 12] {
            let phi = cyclotomic_poly(d);
            let mut next = vec![BigInt::zero(); prod.len() + phi.len() - 1];
            for (i, a) in prod.iter().enumerate() {
                for (j, b) in phi.iter().enumerate() {
                    let v = &next[i + j] + a * b;
                    next[i + j] = v;
                }
            }
            prod = next;
        }
        let mut expect = vec![BigInt::zero(); 13];
        expect[0] = BigInt::from(-1);
        expect[12] = BigInt::one();
        assert_eq!(prod, expect);
    }

    #[test]
    fn roots_of_unity_embedding_convention() {
        let f = CycField::new(12);
        // zeta_4 = zeta_12^3 is i
        let i = f.root_of_unity(4, 1).unwrap();
        assert_eq!(i, f.zeta_pow(3));
        assert_eq!(f.root_of_unity(6, 1).unwrap(), f.zeta_pow(2));
        assert_eq!(f.root_of_unity(1, 0).unwrap(), f.one());
        assert!(matches!(
            f.root_of_unity(5, 1),
            Err(Error::Divisibility { k: 5, n: 12 })
        ));
        // i^2 = -1
        assert_eq!(i.mul(&i), f.from_i64(-1));
        let b = i.embed(64);
        assert!(b.contains_point(&Dyadic::zero(), &Dyadic::one()));
    }

    #[test]
    fn root_of_unity_orders() {
        let f = CycField::new(20);
        for k in [1u64, 2, 4, 5, 10, 20] {
            let z = f.root_of_unity(k, 1).unwrap();
            assert!(z.pow(k).is_one());
            for j in 1..k {
                assert!(!z.pow(j).is_one(), "zeta_{} has order < {}", k, k);
            }
        }
    }

    #[test]
    fn conjugation_properties() {
        let f = CycField::new(12);
        let i = f.root_of_unity(4, 1).unwrap();
        assert_eq!(i.conj(), i.neg());
        let q = f.from_rat(Rat::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(q.conj(), q);
        assert!(q.is_real());
        assert!(!i.is_real());
        // zeta_5 + zeta_5^4 is real
        let f5 = CycField::new(5);
        let s = f5.zeta_pow(1).add(&f5.zeta_pow(4));
        assert!(s.is_real());
        // conjugation is an involution and a ring homomorphism
        let a = f.zeta_pow(1).add(&f.from_i64(2));
        let b = f.zeta_pow(5).scale(&Rat::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn conjugation_matches_embedding() {
        let f = CycField::new(12);
        let a = f.zeta_pow(1).add(&f.from_i64(2));
        let e = a.embed(96);
        let ec = a.conj().embed(96);
        // embedding of conjugate must overlap conjugate of embedding
        let conj_ball = e.conj_ball();
        assert!(!ec.disjoint(&conj_ball));
        // and the centers agree to ~2^-90
        assert!((ec.re.to_f64() - conj_ball.re.to_f64()).abs() < 1e-20);
        assert!((ec.im.to_f64() - conj_ball.im.to_f64()).abs() < 1e-20);
    }

    #[test]
    fn field_axioms_spot() {
        let f = CycField::new(7);
        let a = f.zeta_pow(3).add(&f.from_i64(2));
        let b = f.zeta_pow(5).sub(&f.from_rat(Rat::new(BigInt::from(1), BigInt::from(2))));
        let c = f.zeta_pow(1);
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let ai = a.inv().unwrap();
        assert!(a.mul(&ai).is_one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn embed_numeric_examples() {
        let f = CycField::new(12);
        let one = f.one().embed(64);
        assert!(one.contains_point(&Dyadic::one(), &Dyadic::zero()));
        assert!(one.rad.cmp_val(&Dyadic::pow2(-30)) == std::cmp::Ordering::Less);
        // zeta_3 ~ -1/2 + sqrt(3)/2 i
        let f3 = CycField::new(3);
        let z3 = f3.zeta().embed(96);
        let expect_re = -0.5;
        let expect_im = 0.75f64.sqrt();
        let (re, im) = z3.to_f64_pair();
        assert!((re - expect_re).abs() < 1e-12);
        assert!((im - expect_im).abs() < 1e-12);
    }

    #[test]
    fn embed_into_larger_field() {
        let f4 = CycField::new(4);
        let f12 = CycField::new(12);
        let i4 = f4.zeta();
        let i12 = i4.embed_into(&f12).unwrap();
        assert_eq!(i12, f12.zeta_pow(3));
        assert_eq!(i12.mul(&i12), f12.from_i64(-1));
    }

    #[test]
    fn text_roundtrip() {
        let f = CycField::new(12);
        let a = f.zeta_pow(5).scale(&Rat::new(BigInt::from(-7), BigInt::from(3)));
        let rows = a.to_text();
        let b = CycNum::from_text(&f, &rows).unwrap();
        assert_eq!(a, b);
        assert!(CycNum::from_text(&f, &["1".to_string()]).is_err());
    }
}
