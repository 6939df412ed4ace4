//! Hyperelliptic curves y^2 = f(x), their branch divisors, reduced
//! automorphism groups and exact isomorphism enumeration.
//!
//! The engine finds candidate Moebius maps numerically (a map is
//! determined by the images of three branch points), discards
//! candidates whose certified image balls miss the branch set, and
//! reconstructs every survivor exactly before verifying the pullback
//! identity (cx+d)^(2g+2) f'(Mx) = lambda f(x). Elements of the output
//! are therefore proved, not approximated: numerics only ever exclude.

use crate::ball::{ComplexBall, Dyadic};
use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::moebius::{closure, MoebiusMap, PGL2Group, CLOSURE_BOUND};
use crate::poly::{moebius_pullback, Poly};
use crate::recognize::{recognize_cyc, DEFAULT_HEIGHT_BOUND};
use crate::roots::roots_numeric;
use std::collections::HashSet;

/// Hyperelliptic curve y^2 = f(x) over a cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct HyperCurve {
    f: Poly<CycField>,
    genus: usize,
}

impl std::fmt::Debug for HyperCurve {
    fn fmt(&self, fo: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fo, "y^2 = {} (genus {})", self.f, self.genus)
    }
}

impl HyperCurve {
    /// Validated curve: f squarefree of degree >= 5.
    pub fn new(f: Poly<CycField>) -> Result<Self> {
        let deg = f.degree().unwrap_or(0);
        if deg >= 1 && !f.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        if deg < 5 {
            return Err(Error::GenusTooSmall { deg });
        }
        let genus = (deg + 1) / 2 - 1;
        Ok(HyperCurve { f, genus })
    }

    pub fn f(&self) -> &Poly<CycField> {
        &self.f
    }

    pub fn field(&self) -> CycField {
        self.f.field().clone()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// True iff deg f = 2g + 1, i.e. infinity is a branch point.
    pub fn branch_at_infinity(&self) -> bool {
        self.f.degree().unwrap() % 2 == 1
    }

    pub fn branch_count(&self) -> usize {
        2 * self.genus + 2
    }

    /// Coefficient-wise complex conjugate curve.
    pub fn conjugate(&self) -> HyperCurve {
        HyperCurve { f: self.f.conj(), genus: self.genus }
    }

    /// Certified branch divisor at the given precision.
    pub fn branch_divisor(&self, prec: u32) -> Result<BranchDivisor> {
        let mut points: Vec<HomogBall> = roots_numeric(&self.f, prec)?
            .into_iter()
            .map(HomogBall::finite)
            .collect();
        let has_infinity = self.branch_at_infinity();
        if has_infinity {
            points.push(HomogBall::infinity());
        }
        debug_assert_eq!(points.len(), self.branch_count());
        Ok(BranchDivisor { points, has_infinity })
    }
}

/// Projective point with certified ball coordinates (u : v).
#[derive(Clone, Debug)]
pub struct HomogBall {
    pub u: ComplexBall,
    pub v: ComplexBall,
}

impl HomogBall {
    fn finite(ball: ComplexBall) -> Self {
        HomogBall { u: ball, v: ComplexBall::one() }
    }

    fn infinity() -> Self {
        HomogBall { u: ComplexBall::one(), v: ComplexBall::zero() }
    }

    /// True iff this point can possibly equal the other (the projective
    /// cross product ball contains zero).
    fn may_equal(&self, other: &HomogBall, prec: u32) -> bool {
        let c = self
            .u
            .mul_ball(&other.v, prec)
            .sub_ball(&other.u.mul_ball(&self.v, prec), prec);
        c.contains_zero()
    }
}

/// The certified branch points of the degree-2 map to the line.
#[derive(Clone, Debug)]
pub struct BranchDivisor {
    pub points: Vec<HomogBall>,
    pub has_infinity: bool,
}

/// Ball-matrix analogue of the exact three-point interpolation.
fn ball_map_three(
    src: &[&HomogBall; 3],
    dst: &[&HomogBall; 3],
    prec: u32,
) -> [ComplexBall; 4] {
    let to_std = |p: &[&HomogBall; 3]| -> [ComplexBall; 4] {
        let k1 = p[1]
            .u
            .mul_ball(&p[2].v, prec)
            .sub_ball(&p[2].u.mul_ball(&p[1].v, prec), prec);
        let k2 = p[1]
            .u
            .mul_ball(&p[0].v, prec)
            .sub_ball(&p[0].u.mul_ball(&p[1].v, prec), prec);
        [
            k1.mul_ball(&p[0].v, prec),
            k1.mul_ball(&p[0].u, prec).neg_ball(),
            k2.mul_ball(&p[2].v, prec),
            k2.mul_ball(&p[2].u, prec).neg_ball(),
        ]
    };
    let s = to_std(src);
    let t = to_std(dst);
    // adj(T) * S
    [
        t[3].mul_ball(&s[0], prec)
            .sub_ball(&t[1].mul_ball(&s[2], prec), prec),
        t[3].mul_ball(&s[1], prec)
            .sub_ball(&t[1].mul_ball(&s[3], prec), prec),
        t[0].mul_ball(&s[2], prec)
            .sub_ball(&t[2].mul_ball(&s[0], prec), prec),
        t[0].mul_ball(&s[3], prec)
            .sub_ball(&t[2].mul_ball(&s[1], prec), prec),
    ]
}

fn apply_ball_matrix(m: &[ComplexBall; 4], p: &HomogBall, prec: u32) -> HomogBall {
    HomogBall {
        u: m[0]
            .mul_ball(&p.u, prec)
            .add_ball(&m[1].mul_ball(&p.v, prec), prec),
        v: m[2]
            .mul_ball(&p.u, prec)
            .add_ball(&m[3].mul_ball(&p.v, prec), prec),
    }
}

/// Recognize a ball matrix, normalized by its first certainly-nonzero
/// entry, as an exact Moebius map over the field.
fn recognize_matrix(
    field: &CycField,
    m: &[ComplexBall; 4],
    prec: u32,
    height_bound: u64,
) -> Option<MoebiusMap<CycField>> {
    let pivot = m.iter().position(|b| b.excludes_zero())?;
    let inv = m[pivot].recip(prec)?;
    let mut entries = Vec::with_capacity(4);
    for (k, b) in m.iter().enumerate() {
        if k < pivot {
            // earlier entries must be exactly zero for the pivot
            // normalization to be the canonical form
            if !b.contains_zero() {
                return None;
            }
            entries.push(field.zero());
        } else if k == pivot {
            entries.push(CycField::one(field));
        } else {
            let w = b.mul_ball(&inv, prec);
            entries.push(recognize_cyc(&w, field, prec, height_bound)?);
        }
    }
    MoebiusMap::new(
        field,
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        entries[3].clone(),
    )
    .ok()
}

/// Exact isomorphism (x, y) -> (Mx, e y / (cx+d)^(g+1)) between two
/// hyperelliptic curves. The matrix is canonical; lambda = e^2 is exact
/// and satisfies pullback(f_target, M, 2g+2) = lambda * f_source; the
/// sign of e is recorded against the principal square root of lambda
/// under the fixed embedding.
#[derive(Clone)]
pub struct CurveIso {
    pub source: HyperCurve,
    pub target: HyperCurve,
    m: MoebiusMap<CycField>,
    lambda: CycNum,
    e_sign: i8,
}

impl PartialEq for CurveIso {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.e_sign == other.e_sign
    }
}
impl Eq for CurveIso {}

impl std::fmt::Debug for CurveIso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CurveIso {{ m: {:?}, lambda: {}, e: {}sqrt(lambda) }}",
            self.m,
            self.lambda,
            if self.e_sign > 0 { "+" } else { "-" }
        )
    }
}

/// Sign of a nonzero real cyclotomic number, decided by a certified
/// ball at escalating precision.
pub fn real_sign(x: &CycNum) -> i8 {
    assert!(!x.is_zero() && x.is_real());
    let mut prec = 64;
    loop {
        let b = x.embed(prec);
        let (lo, hi) = b.re_interval();
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "sign of exact nonzero value undecided");
    }
}

/// Certified ball for the principal square root of a nonzero exact
/// value. Exactly-negative-real inputs take the convention
/// sqrt(-t) = i sqrt(t).
pub fn principal_sqrt_ball(x: &CycNum, prec: u32) -> ComplexBall {
    assert!(!x.is_zero());
    if x.is_real() && real_sign(x) < 0 {
        let s = principal_sqrt_ball(&x.neg(), prec);
        return ComplexBall::new(s.im.neg(), s.re.clone(), s.rad.clone());
    }
    let mut p = prec.max(64);
    loop {
        let b = x.embed(p);
        if let Some(s) = b.sqrt_principal(p) {
            return s;
        }
        p *= 2;
        assert!(p <= 1 << 20, "square root ball failed to certify");
    }
}

/// Decide a quantity known to be exactly +1 or -1 from any ball that
/// separates the two.
fn decide_sign(ball: &ComplexBall) -> Option<i8> {
    let one = Dyadic::one();
    let m_one = Dyadic::from_i64(-1);
    let zero = Dyadic::zero();
    let has_plus = ball.contains_point(&one, &zero);
    let has_minus = ball.contains_point(&m_one, &zero);
    match (has_plus, has_minus) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

impl CurveIso {
    fn build(
        source: &HyperCurve,
        target: &HyperCurve,
        m: MoebiusMap<CycField>,
        lambda: CycNum,
        e_sign: i8,
    ) -> Self {
        CurveIso {
            source: source.clone(),
            target: target.clone(),
            m,
            lambda,
            e_sign,
        }
    }

    pub fn identity(x: &HyperCurve) -> Self {
        let field = x.field();
        CurveIso::build(
            x,
            x,
            MoebiusMap::identity(&field),
            CycField::one(&field),
            1,
        )
    }

    /// The hyperelliptic involution (x, y) -> (x, -y).
    pub fn iota(x: &HyperCurve) -> Self {
        let field = x.field();
        CurveIso::build(
            x,
            x,
            MoebiusMap::identity(&field),
            CycField::one(&field),
            -1,
        )
    }

    pub fn matrix(&self) -> &MoebiusMap<CycField> {
        &self.m
    }

    pub fn lambda(&self) -> &CycNum {
        &self.lambda
    }

    pub fn e_sign(&self) -> i8 {
        self.e_sign
    }

    /// Certified ball for e itself.
    pub fn e_ball(&self, prec: u32) -> ComplexBall {
        let s = principal_sqrt_ball(&self.lambda, prec);
        if self.e_sign > 0 {
            s
        } else {
            s.neg_ball()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity() && self.e_sign > 0
    }

    pub fn is_iota(&self) -> bool {
        self.m.is_identity() && self.e_sign < 0
    }

    /// Composite with the hyperelliptic involution: flips e.
    pub fn compose_iota(&self) -> Self {
        let mut out = self.clone();
        out.e_sign = -out.e_sign;
        out
    }

    /// Composition: self after other (other: X -> X', self: X' -> X'').
    pub fn compose(&self, other: &CurveIso) -> Self {
        assert!(self.source == other.target, "composition mismatch");
        let field = self.m.field().clone();
        let d = 2 * other.source.genus() + 2;
        let gp1 = other.source.genus() as u64 + 1;
        // literal matrix product, before canonicalization
        let raw = raw_product(&field, &self.m, &other.m);
        // first nonzero entry is the canonicalization scalar
        let s = raw
            .iter()
            .find(|e| !e.is_zero())
            .expect("invertible product")
            .clone();
        let s_inv = s.inv().unwrap();
        let m = MoebiusMap::new(
            &field,
            raw[0].mul(&s_inv),
            raw[1].mul(&s_inv),
            raw[2].mul(&s_inv),
            raw[3].mul(&s_inv),
        )
        .expect("product of isomorphism matrices");
        // lambda for the raw product is the product of lambdas; scaling
        // the matrix by 1/s scales lambda by s^-(2g+2) and e by s^-(g+1)
        let lambda_raw = self.lambda.mul(&other.lambda);
        let s_pow = s.pow(d as u64);
        let lambda = lambda_raw.mul(&s_pow.inv().unwrap());
        // e_new = e_self * e_other / s^(g+1); decide its sign against
        // the principal root of the exact lambda
        let mut prec = 128;
        let e_sign = loop {
            let eb = self
                .e_ball(prec)
                .mul_ball(&other.e_ball(prec), prec);
            let s_gp1 = s.pow(gp1).embed(prec);
            let target = principal_sqrt_ball(&lambda, prec);
            let q = eb
                .div_ball(&s_gp1.mul_ball(&target, prec), prec)
                .unwrap_or_else(ComplexBall::zero);
            if let Some(sign) = decide_sign(&q) {
                break sign;
            }
            prec *= 2;
            assert!(prec <= 1 << 20, "sign of +-1 quantity undecided");
        };
        CurveIso::build(&other.source, &self.target, m, lambda, e_sign)
    }

    /// Coefficient-wise conjugate isomorphism X^c -> X'^c.
    pub fn conjugate(&self) -> Self {
        let lambda_c = self.lambda.conj();
        // conj commutes with the principal root except across the cut
        let flip = self.lambda.is_real() && real_sign(&self.lambda) < 0;
        let field = self.m.field().clone();
        let m = MoebiusMap::new(
            &field,
            self.m.a.conj(),
            self.m.b.conj(),
            self.m.c.conj(),
            self.m.d.conj(),
        )
        .expect("conjugate of invertible matrix");
        CurveIso::build(
            &self.source.conjugate(),
            &self.target.conjugate(),
            m,
            lambda_c,
            if flip { -self.e_sign } else { self.e_sign },
        )
    }

    pub fn inverse(&self) -> Self {
        let field = self.m.field().clone();
        let d = 2 * self.source.genus() + 2;
        let m_inv = self.m.inverse();
        let pb = moebius_pullback(self.source.f(), &m_inv, d);
        let lambda = pb
            .proportionality(self.target.f())
            .expect("inverse of isomorphism is an isomorphism");
        let tentative = CurveIso::build(&self.target, &self.source, m_inv, lambda, 1);
        let round = tentative.compose(self);
        debug_assert!(round.m.is_identity());
        if round.e_sign > 0 {
            tentative
        } else {
            tentative.compose_iota()
        }
    }

    /// Projective order of the full isomorphism (both M and e).
    pub fn iso_order(&self, cap: usize) -> Option<usize> {
        assert!(self.source == self.target);
        let mut cur = self.clone();
        for k in 1..=cap {
            if cur.is_identity() {
                return Some(k);
            }
            cur = cur.compose(self);
        }
        None
    }
}

fn raw_product(
    field: &CycField,
    m1: &MoebiusMap<CycField>,
    m2: &MoebiusMap<CycField>,
) -> [CycNum; 4] {
    let f = field;
    [
        f.add(&f.mul(&m1.a, &m2.a), &f.mul(&m1.b, &m2.c)),
        f.add(&f.mul(&m1.a, &m2.b), &f.mul(&m1.b, &m2.d)),
        f.add(&f.mul(&m1.c, &m2.a), &f.mul(&m1.d, &m2.c)),
        f.add(&f.mul(&m1.c, &m2.b), &f.mul(&m1.d, &m2.d)),
    ]
}

/// All isomorphisms X -> X', exactly verified. The empty result is a
/// certificate: every numeric candidate was excluded or disproved.
pub fn isomorphisms(x: &HyperCurve, xp: &HyperCurve, prec: u32) -> Result<Vec<CurveIso>> {
    let field = x.field();
    if field != xp.field() {
        return Err(Error::FieldMismatch);
    }
    if x.genus() != xp.genus() {
        return Ok(vec![]);
    }
    let d = 2 * x.genus() + 2;
    let src = x.branch_divisor(prec)?;
    let dst = xp.branch_divisor(prec)?;
    let n = src.points.len();
    let base = [&src.points[0], &src.points[1], &src.points[2]];
    let mut exact_matrices: Vec<MoebiusMap<CycField>> = Vec::new();
    let mut seen: HashSet<MoebiusMap<CycField>> = HashSet::new();
    let mut ambiguous: Vec<String> = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if q == p {
                continue;
            }
            'triple: for r in 0..n {
                if r == p || r == q {
                    continue;
                }
                let dst_triple = [&dst.points[p], &dst.points[q], &dst.points[r]];
                let mb = ball_map_three(&base, &dst_triple, prec);
                // numeric filter: every remaining source point must land
                // on some target ball
                for s in &src.points[3..] {
                    let img = apply_ball_matrix(&mb, s, prec);
                    if !dst.points.iter().any(|t| img.may_equal(t, prec)) {
                        continue 'triple;
                    }
                }
                // survivor: reconstruct exactly
                match recognize_matrix(&field, &mb, prec, DEFAULT_HEIGHT_BOUND) {
                    Some(m) => {
                        if !seen.insert(m.clone()) {
                            continue;
                        }
                        let pb = moebius_pullback(xp.f(), &m, d);
                        match pb.proportionality(x.f()) {
                            Some(_) => exact_matrices.push(m),
                            None => ambiguous.push(format!(
                                "triple ({},{},{}) recognized as {:?} but failed exact verification",
                                p, q, r, m
                            )),
                        }
                    }
                    None => ambiguous.push(format!(
                        "triple ({},{},{}) survived numerically, entries {:?}",
                        p, q, r, mb
                    )),
                }
            }
        }
    }
    if !ambiguous.is_empty() {
        return Err(Error::AmbiguousCandidate {
            prec,
            detail: ambiguous.join("; "),
        });
    }
    let mut isos = Vec::with_capacity(2 * exact_matrices.len());
    for m in exact_matrices {
        let pb = moebius_pullback(xp.f(), &m, d);
        let lambda = pb.proportionality(x.f()).unwrap();
        isos.push(CurveIso::build(x, xp, m.clone(), lambda.clone(), 1));
        isos.push(CurveIso::build(x, xp, m, lambda, -1));
    }
    isos.sort_by(|a, b| {
        let f = &field;
        f.cmp_elems(&a.m.a, &b.m.a)
            .then_with(|| f.cmp_elems(&a.m.b, &b.m.b))
            .then_with(|| f.cmp_elems(&a.m.c, &b.m.c))
            .then_with(|| f.cmp_elems(&a.m.d, &b.m.d))
            .then_with(|| a.e_sign.cmp(&b.e_sign).reverse())
    });
    Ok(isos)
}

/// The reduced automorphism group: Moebius maps M with the pullback of
/// f along M proportional to f. Every element is exactly verified.
pub fn reduced_aut(x: &HyperCurve, prec: u32) -> Result<PGL2Group<CycField>> {
    let field = x.field();
    let isos = isomorphisms(x, x, prec)?;
    let mut mats: Vec<MoebiusMap<CycField>> = Vec::new();
    let mut seen = HashSet::new();
    for iso in &isos {
        if seen.insert(iso.m.clone()) {
            mats.push(iso.m.clone());
        }
    }
    let found = mats.len();
    let group = closure(&field, &mats, CLOSURE_BOUND)?;
    if group.order() != found {
        // triple enumeration is exhaustive, so closure can never add
        // elements; if it does, some candidate was wrongly excluded
        return Err(Error::AmbiguousCandidate {
            prec,
            detail: format!(
                "closure grew a verified set from {} to {}",
                found,
                group.order()
            ),
        });
    }
    Ok(group)
}

/// Full automorphism group with lifted (M, e) structure.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub reduced: PGL2Group<CycField>,
    pub lifts: Vec<CurveIso>,
    pub iota: CurveIso,
    pub abstract_type: String,
}

/// Invariant-factor label for a finite abelian group given the counts
/// of elements x with x^k = 1; e.g. "C2 x C6".
fn abelian_label(orders: &[usize]) -> String {
    let n = orders.len();
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    // partition per prime: lambda^p_j sorted descending
    let mut partitions: Vec<(usize, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut counts = Vec::new(); // #elements of order dividing p^k
        let mut k = 0u32;
        loop {
            let pk = p.pow(k);
            let c = orders.iter().filter(|&&o| pk % o == 0).count();
            counts.push(c);
            if c == orders.iter().filter(|&&o| is_prime_power_of(o, p)).count() {
                break;
            }
            k += 1;
            if k > 30 {
                break;
            }
        }
        // m_k = log_p counts; d_k = m_k - m_(k-1) = #{i : lambda_i >= k}
        let mut ms = Vec::new();
        for c in &counts {
            let mut c = *c;
            let mut e = 0u32;
            while c > 1 {
                c /= p;
                e += 1;
            }
            ms.push(e);
        }
        let mut lambda = Vec::new();
        for k in 1..ms.len() {
            let d = ms[k] - ms[k - 1];
            for i in 0..d {
                if lambda.len() <= i as usize {
                    lambda.push(0u32);
                }
                lambda[i as usize] += 1;
            }
        }
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        partitions.push((p, lambda));
    }
    let rank = partitions
        .iter()
        .map(|(_, l)| l.len())
        .max()
        .unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..rank {
        let mut f = 1usize;
        for (p, l) in &partitions {
            if j < l.len() {
                f *= p.pow(l[j]);
            }
        }
        factors.push(f);
    }
    factors.sort_unstable();
    factors
        .iter()
        .map(|f| format!("C{}", f))
        .collect::<Vec<_>>()
        .join(" x ")
}

fn is_prime_power_of(mut o: usize, p: usize) -> bool {
    while o % p == 0 {
        o /= p;
    }
    o == 1
}

/// The automorphism group of X with its (M, e) lifts and an abstract
/// structure label computed from the exact composition law.
pub fn aut_group(x: &HyperCurve, prec: u32) -> Result<AutGroup> {
    let lifts = isomorphisms(x, x, prec)?;
    let field = x.field();
    let mut mats = Vec::new();
    let mut seen = HashSet::new();
    for iso in &lifts {
        if seen.insert(iso.m.clone()) {
            mats.push(iso.m.clone());
        }
    }
    let reduced = PGL2Group::from_elements(&field, mats)?;
    let iota = lifts
        .iter()
        .find(|i| i.is_iota())
        .expect("the hyperelliptic involution is always present")
        .clone();
    let n = lifts.len();
    let orders: Vec<usize> = lifts
        .iter()
        .map(|i| i.iso_order(n).expect("order divides group order"))
        .collect();
    let abelian = {
        let mut ab = true;
        'outer: for a in &lifts {
            for b in &lifts {
                if a.compose(b) != b.compose(a) {
                    ab = false;
                    break 'outer;
                }
            }
        }
        ab
    };
    let abstract_type = if abelian {
        abelian_label(&orders)
    } else {
        // dihedral detection: a cyclic half plus enough involutions
        let half = n / 2;
        let dihedral =
            orders.iter().any(|&o| o == half) && orders.iter().filter(|&&o| o == 2).count() >= half;
        if dihedral {
            format!("D{}", n)
        } else {
            let mut profile: Vec<usize> = orders.clone();
            profile.sort_unstable();
            format!("nonabelian of order {} (orders {:?})", n, profile)
        }
    };
    Ok(AutGroup {
        reduced,
        lifts,
        iota,
        abstract_type,
    })
}

/// Retry wrapper doubling precision on certification or ambiguity
/// failures, up to a cap.
pub fn with_prec_escalation<T>(
    start: u32,
    cap: u32,
    mut f: impl FnMut(u32) -> Result<T>,
) -> Result<T> {
    let mut prec = start;
    loop {
        match f(prec) {
            Err(Error::Precision { .. }) | Err(Error::AmbiguousCandidate { .. })
                if prec < cap =>
            {
                prec = (prec * 2).min(cap);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::identify;
    use crate::moebius::GroupLabel;

    fn curve_i64(field: &CycField, coeffs: &[i64]) -> HyperCurve {
        HyperCurve::new(Poly::from_i64(field, coeffs)).unwrap()
    }

    #[test]
    fn curve_validation() {
        let f = CycField::new(4);
        let x6m1 = curve_i64(&f, &[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(x6m1.genus(), 2);
        assert!(!x6m1.branch_at_infinity());
        let x5mx = curve_i64(&f, &[0, -1, 0, 0, 0, 1]);
        assert_eq!(x5mx.genus(), 2);
        assert!(x5mx.branch_at_infinity());
        // (x-1)^2 (x+2)
        let p = Poly::from_i64(&f, &[1, -2, 1]).mul(&Poly::from_i64(&f, &[2, 1]));
        assert!(matches!(HyperCurve::new(p), Err(Error::NotSquarefree)));
        let small = Poly::from_i64(&f, &[1, 0, 0, 1]);
        assert!(matches!(
            HyperCurve::new(small),
            Err(Error::GenusTooSmall { deg: 3 })
        ));
    }

    #[test]
    fn aut_of_x6_minus_1_is_d12() {
        let f = CycField::new(12);
        let x = curve_i64(&f, &[-1, 0, 0, 0, 0, 0, 1]);
        let g = reduced_aut(&x, 128).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(identify(&g), GroupLabel::D2n(6));
        let aut = aut_group(&x, 128).unwrap();
        assert_eq!(aut.lifts.len(), 24);
        assert!(aut.iota.is_iota());
    }

    #[test]
    fn aut_of_x5_minus_x_is_s4() {
        let f = CycField::new(4);
        let x = curve_i64(&f, &[0, -1, 0, 0, 0, 1]);
        let g = reduced_aut(&x, 128).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(identify(&g), GroupLabel::S4);
    }

    #[test]
    fn generic_curve_has_trivial_group() {
        let f = CycField::new(4);
        let x = curve_i64(&f, &[2, 1, 0, 0, 0, 0, 1]); // x^6 + x + 2
        let g = reduced_aut(&x, 128).unwrap();
        assert_eq!(g.order(), 1);
        let aut = aut_group(&x, 128).unwrap();
        assert_eq!(aut.lifts.len(), 2);
        assert_eq!(aut.abstract_type, "C2");
    }

    #[test]
    fn isomorphisms_scaling_example() {
        let f = CycField::new(12);
        let x = curve_i64(&f, &[-1, 0, 0, 0, 0, 0, 1]); // x^6 - 1
        // f(2x) = 64 x^6 - 1
        let xp = curve_i64(&f, &[-1, 0, 0, 0, 0, 0, 64]);
        // from the X' viewpoint: (x, y) -> (2x, y) is X' -> X, and the
        // (2x, e = 1) representative has lambda = 1, i.e. the canonical
        // representative 2x has lambda * 2^6 = 1
        let isos = isomorphisms(&xp, &x, 128).unwrap();
        assert_eq!(isos.len(), 24);
        let double = MoebiusMap::from_i64(&f, 2, 0, 0, 1).unwrap();
        let lam64 = f.from_rat(crate::cyclotomic::Rat::new(1.into(), 64.into()));
        assert!(isos
            .iter()
            .any(|i| *i.matrix() == double && *i.lambda() == lam64));
        // self-isomorphisms contain the identity
        let selfs = isomorphisms(&x, &x, 128).unwrap();
        assert!(selfs.iter().any(|i| i.is_identity()));
        // unrelated curve: certified empty
        let other = curve_i64(&f, &[2, 1, 0, 0, 0, 0, 1]);
        assert!(isomorphisms(&x, &other, 128).unwrap().is_empty());
    }

    #[test]
    fn composition_and_inverse_laws() {
        let f = CycField::new(12);
        let x = curve_i64(&f, &[-1, 0, 0, 0, 0, 0, 1]);
        let auts = isomorphisms(&x, &x, 128).unwrap();
        // closure under composition, exact identity round trips
        for a in auts.iter().take(6) {
            for b in auts.iter().take(6) {
                let c = a.compose(b);
                assert!(auts.iter().any(|k| *k == c), "composition left the group");
            }
            let inv = a.inverse();
            assert!(inv.compose(a).is_identity());
            assert!(a.compose(&inv).is_identity());
        }
        // iota is central of order 2
        let iota = CurveIso::iota(&x);
        assert_eq!(iota.iso_order(4), Some(2));
        for a in auts.iter().take(8) {
            assert_eq!(a.compose(&iota), iota.compose(a));
        }
    }

    #[test]
    fn conjugate_curve_and_equivariance() {
        // x^6 + i x; its rotation symmetries need zeta_5, so work in
        // Q(zeta_20) where i = zeta^5
        let f = CycField::new(20);
        let i = f.zeta_pow(5);
        let mut coeffs = vec![f.zero(); 7];
        coeffs[1] = i.clone();
        coeffs[6] = f.one();
        let x = HyperCurve::new(Poly::new(&f, coeffs)).unwrap();
        let xc = x.conjugate();
        assert_eq!(xc.f().coeff(1), i.neg());
        // a real curve is fixed
        let real = curve_i64(&f, &[2, 1, 0, 0, 0, 0, 1]);
        assert_eq!(real.conjugate(), real);
        // reduced_aut(X^c) = conj of reduced_aut(X)
        let g = reduced_aut(&x, 128).unwrap();
        let gc = reduced_aut(&xc, 128).unwrap();
        let conj_mats: Vec<_> = g
            .elements()
            .iter()
            .map(|m| {
                MoebiusMap::new(&f, m.a.conj(), m.b.conj(), m.c.conj(), m.d.conj()).unwrap()
            })
            .collect();
        let g_conj = PGL2Group::from_elements(&f, conj_mats).unwrap();
        assert!(gc.same_elements(&g_conj));
    }
}
