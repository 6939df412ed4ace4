//! Definability over the field of moduli for the extension C/R.
//!
//! The Galois group is {id, conj}, so Weil's cocycle condition for an
//! isomorphism phi: X -> X^c collapses to phi^c . phi = id. The search
//! enumerates all isomorphisms exactly; a solution yields a real model
//! through the averaging construction, and exhaustive failure yields an
//! obstruction certificate listing every composite.

use crate::curve::{isomorphisms, real_sign, CurveIso, HyperCurve};
use crate::cyclotomic::{CycField, CycNum, Rat};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::moebius::{map_three_points, GroupLabel, MoebiusMap, ProjPoint};
use crate::poly::{moebius_pullback, Poly};
use crate::ratfunc::RatFunc;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Verdict of the Weil-cocycle search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescentStatus {
    FieldOfModuliIsC,
    DefinableOverR,
    ObstructedOverR,
}

impl std::fmt::Display for DescentStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DescentStatus::FieldOfModuliIsC => "field of moduli is C",
            DescentStatus::DefinableOverR => "definable over R",
            DescentStatus::ObstructedOverR => "obstructed over R",
        };
        write!(f, "{}", s)
    }
}

/// Proof that no isomorphism X -> X^c satisfies the cocycle condition:
/// every one of the |Aut(X)| isomorphisms is listed with its exactly
/// computed composite phi^c . phi, none of which is the identity.
#[derive(Clone, Debug)]
pub struct ObstructionCert {
    pub pairs: Vec<(CurveIso, CurveIso)>,
}

impl ObstructionCert {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .pairs
            .iter()
            .map(|(phi, comp)| {
                json!({
                    "iso": moebius_json(phi.matrix()),
                    "lambda": phi.lambda().to_text(),
                    "composite": moebius_json(comp.matrix()),
                    "composite_e_sign": comp.e_sign(),
                    "composite_is_identity": comp.is_identity(),
                })
            })
            .collect();
        json!({ "isomorphisms": rows })
    }
}

pub fn moebius_json(m: &MoebiusMap<CycField>) -> Value {
    json!({
        "a": m.a.to_text(),
        "b": m.b.to_text(),
        "c": m.c.to_text(),
        "d": m.d.to_text(),
    })
}

/// Result of the descent decision.
#[derive(Clone, Debug)]
pub enum DescentResult {
    FieldOfModuliIsC,
    DefinableOverR {
        cocycle: CurveIso,
        coordinate_change: MoebiusMap<CycField>,
        real_model: Poly<CycField>,
    },
    ObstructedOverR(ObstructionCert),
}

impl DescentResult {
    pub fn status(&self) -> DescentStatus {
        match self {
            DescentResult::FieldOfModuliIsC => DescentStatus::FieldOfModuliIsC,
            DescentResult::DefinableOverR { .. } => DescentStatus::DefinableOverR,
            DescentResult::ObstructedOverR(_) => DescentStatus::ObstructedOverR,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DescentResult::FieldOfModuliIsC => json!({ "status": "FieldOfModuliIsC" }),
            DescentResult::DefinableOverR {
                cocycle,
                coordinate_change,
                real_model,
            } => json!({
                "status": "DefinableOverR",
                "cocycle": moebius_json(cocycle.matrix()),
                "coordinate_change": moebius_json(coordinate_change),
                "real_model": real_model
                    .coeffs()
                    .iter()
                    .map(|c| c.to_text())
                    .collect::<Vec<_>>(),
            }),
            DescentResult::ObstructedOverR(cert) => json!({
                "status": "ObstructedOverR",
                "certificate": cert.to_json(),
            }),
        }
    }
}

/// True (with a witness) iff X is isomorphic to its conjugate, i.e. the
/// field of moduli is R rather than C.
pub fn field_of_moduli_is_real(
    x: &HyperCurve,
    prec: u32,
) -> Result<(bool, Option<CurveIso>)> {
    let isos = isomorphisms(x, &x.conjugate(), prec)?;
    Ok((!isos.is_empty(), isos.into_iter().next()))
}

/// Exhaustive Weil-cocycle search for Gal(C/R).
pub fn weil_search(x: &HyperCurve, prec: u32) -> Result<DescentResult> {
    let isos = isomorphisms(x, &x.conjugate(), prec)?;
    if isos.is_empty() {
        return Ok(DescentResult::FieldOfModuliIsC);
    }
    let mut pairs = Vec::with_capacity(isos.len());
    let mut solutions = Vec::new();
    for phi in &isos {
        let composite = phi.conjugate().compose(phi);
        if composite.is_identity() {
            solutions.push(phi.clone());
        }
        pairs.push((phi.clone(), composite));
    }
    if solutions.is_empty() {
        return Ok(DescentResult::ObstructedOverR(ObstructionCert { pairs }));
    }
    let mut last_err = Error::NormalizationFailure;
    for phi in solutions {
        match real_model_from_cocycle(x, &phi) {
            Ok((p, model)) => {
                return Ok(DescentResult::DefinableOverR {
                    cocycle: phi,
                    coordinate_change: p,
                    real_model: model,
                })
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Deterministic sequence of integer averaging matrices.
fn averaging_matrices(field: &CycField) -> Vec<[CycNum; 4]> {
    let mut out = Vec::new();
    let mut push = |a: i64, b: i64, c: i64, d: i64, out: &mut Vec<[CycNum; 4]>| {
        out.push([
            field.from_i64(a),
            field.from_i64(b),
            field.from_i64(c),
            field.from_i64(d),
        ]);
    };
    push(1, 0, 0, 1, &mut out);
    push(1, 1, 0, 1, &mut out);
    push(1, 0, 1, 1, &mut out);
    push(0, 1, 1, 0, &mut out);
    push(1, 1, 1, 0, &mut out);
    push(0, 1, 1, 1, &mut out);
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    push(a, b, c, d, &mut out);
                    if out.len() >= 100 {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Construct a real model from a cocycle solution phi^c . phi = id.
///
/// The matrix part satisfies M^c M = lambda0 I with lambda0 real and
/// positive; after scaling M by the field square root of lambda0, the
/// averaged coordinate change P = A + M^c A satisfies P^c = M P, so the
/// pullback of f along P is proportional to a conjugation-fixed
/// polynomial. Returns P and that polynomial, monic and then scaled to
/// integral coordinates.
pub fn real_model_from_cocycle(
    x: &HyperCurve,
    phi: &CurveIso,
) -> Result<(MoebiusMap<CycField>, Poly<CycField>)> {
    let field = x.field();
    let m = phi.matrix();
    let mc = [m.a.conj(), m.b.conj(), m.c.conj(), m.d.conj()];
    // literal product M^c M must be lambda0 * I
    let p00 = mc[0].mul(&m.a).add(&mc[1].mul(&m.c));
    let p01 = mc[0].mul(&m.b).add(&mc[1].mul(&m.d));
    let p10 = mc[2].mul(&m.a).add(&mc[3].mul(&m.c));
    let p11 = mc[2].mul(&m.b).add(&mc[3].mul(&m.d));
    if !p01.is_zero() || !p10.is_zero() || p00 != p11 {
        return Err(Error::Precondition(
            "matrix part is not a projective cocycle".into(),
        ));
    }
    let lambda0 = p00;
    if !lambda0.is_real() {
        return Err(Error::Precondition("cocycle constant is not real".into()));
    }
    if real_sign(&lambda0) < 0 {
        return Err(Error::Precondition(
            "cocycle constant is negative (iota-type composite)".into(),
        ));
    }
    let s = crate::recognize::sqrt_exact(&lambda0).ok_or(Error::NormalizationFailure)?;
    let s_inv = s.inv().unwrap();
    // normalized matrix entries (not re-canonicalized: we need the
    // literal identity Mt^c Mt = I)
    let mt = [
        m.a.mul(&s_inv),
        m.b.mul(&s_inv),
        m.c.mul(&s_inv),
        m.d.mul(&s_inv),
    ];
    let mtc = [mt[0].conj(), mt[1].conj(), mt[2].conj(), mt[3].conj()];
    let attempts = averaging_matrices(&field);
    let total = attempts.len();
    for a in attempts {
        // P = A + Mt^c A
        let p = [
            a[0].add(&mtc[0].mul(&a[0]).add(&mtc[1].mul(&a[2]))),
            a[1].add(&mtc[0].mul(&a[1]).add(&mtc[1].mul(&a[3]))),
            a[2].add(&mtc[2].mul(&a[0]).add(&mtc[3].mul(&a[2]))),
            a[3].add(&mtc[2].mul(&a[1]).add(&mtc[3].mul(&a[3]))),
        ];
        let det = p[0].mul(&p[3]).sub(&p[1].mul(&p[2]));
        if det.is_zero() {
            continue;
        }
        let p_map = MoebiusMap::new(&field, p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone())
            .expect("nonzero determinant");
        let d = 2 * x.genus() + 2;
        let pulled = moebius_pullback(x.f(), &p_map, d);
        // proportional to a conjugation-fixed polynomial; dividing by the
        // leading coefficient must land exactly on it
        let monic = pulled.monic();
        if !monic.is_conj_fixed() {
            return Err(Error::VerificationFailure {
                clause: "averaged model is not conjugation-fixed".into(),
            });
        }
        let model = clear_denominators(&monic);
        return Ok((p_map, model));
    }
    Err(Error::AveragingFailure { attempts: total })
}

/// Multiply a monic polynomial by the least positive integer that makes
/// every power-basis coordinate integral.
fn clear_denominators(p: &Poly<CycField>) -> Poly<CycField> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        for q in c.coeffs() {
            l = l.lcm(q.denom());
        }
    }
    let l = Rat::from_integer(l.abs());
    p.scale(&p.field().from_rat(l))
}

/// Quotient coordinate data for one case of the atlas: the invariant
/// rational function t of degree |G|, the induced action of conjugation
/// on t once a curve is supplied, and a rational point of the canonical
/// quotient model when the case analysis produces one.
#[derive(Clone, Debug)]
pub struct QuotientData<F: Field> {
    pub label: GroupLabel,
    pub t: RatFunc<F>,
    pub sigma_star_t: Option<MoebiusMap<F>>,
    pub rational_point: Option<ProjPoint<F::Elem>>,
}

/// The explicit invariant coordinate of the quotient P1/G for the
/// supported standard groups.
pub fn quotient_coordinate<F: Field>(label: &GroupLabel, field: &F) -> Result<QuotientData<F>> {
    match label {
        GroupLabel::D2n(n) => {
            if *n <= 2 {
                return Err(Error::UnsupportedCase {
                    what: "dihedral case needs n > 2".into(),
                });
            }
            // t = x^n + x^-n
            let num = crate::poly::poly_from_pairs(
                field,
                &[(0, field.one()), (2 * *n as usize, field.one())],
            );
            let den = Poly::monomial(field, field.one(), *n as usize);
            Ok(QuotientData {
                label: label.clone(),
                t: RatFunc::new(num, den),
                sigma_star_t: None,
                rational_point: None,
            })
        }
        GroupLabel::V4 => {
            // t = x^2 + x^-2
            let num = crate::poly::poly_from_pairs(field, &[(0, field.one()), (4, field.one())]);
            let den = Poly::monomial(field, field.one(), 2);
            Ok(QuotientData {
                label: label.clone(),
                t: RatFunc::new(num, den),
                sigma_star_t: None,
                rational_point: None,
            })
        }
        GroupLabel::A4 => {
            // t = (x^12 - 33x^8 - 33x^4 + 1)/(-x^10 + 2x^6 - x^2)
            let num = Poly::from_i64(
                field,
                &[1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1],
            );
            let den = Poly::from_i64(field, &[0, 0, -1, 0, 0, 0, 2, 0, 0, 0, -1]);
            Ok(QuotientData {
                label: label.clone(),
                t: RatFunc::new(num, den),
                sigma_star_t: None,
                rational_point: None,
            })
        }
        GroupLabel::BetaA { d, a_size } => {
            let p = field.characteristic();
            if p == 0 {
                return Err(Error::UnsupportedCase {
                    what: "upper-triangular quotient needs positive characteristic".into(),
                });
            }
            let all = field.enumerate().ok_or(Error::UnsupportedCase {
                what: "field too large to enumerate".into(),
            })?;
            let a_set: Vec<F::Elem> = all
                .iter()
                .filter(|e| field.pow(e, *a_size) == **e)
                .cloned()
                .collect();
            if a_set.len() as u64 != *a_size {
                return Err(Error::NeedsExtension {
                    suggestion: field.extension_hint(),
                });
            }
            // t = prod_{alpha in A} (x - alpha)^d
            let mut t = Poly::one(field);
            for alpha in &a_set {
                let lin = Poly::new(field, vec![field.neg(alpha), field.one()]);
                t = t.mul(&lin);
            }
            let t = t.pow(*d as usize);
            Ok(QuotientData {
                label: label.clone(),
                t: RatFunc::from_poly(t),
                sigma_star_t: None,
                rational_point: Some(ProjPoint::Infinity),
            })
        }
        GroupLabel::Psl2 { q } => {
            let p = field.characteristic();
            if p == 0 {
                return Err(Error::UnsupportedCase {
                    what: "PSL2 quotient needs positive characteristic".into(),
                });
            }
            // g = ((x^q - x)^(q-1) + 1)^((q+1)/2) / (x^q - x)^((q^2-q)/2)
            let xq_minus_x = crate::poly::poly_from_pairs(
                field,
                &[(*q as usize, field.one()), (1, field.neg(&field.one()))],
            );
            let base = xq_minus_x.pow(*q as usize - 1).add(&Poly::one(field));
            let num = base.pow((*q as usize + 1) / 2);
            let den = xq_minus_x.pow((*q as usize * *q as usize - *q as usize) / 2);
            Ok(QuotientData {
                label: label.clone(),
                t: RatFunc::new(num, den),
                sigma_star_t: None,
                rational_point: Some(ProjPoint::Finite(field.zero())),
            })
        }
        GroupLabel::Cn(_) => Err(Error::UnsupportedCase {
            what: "cyclic groups have no canonical quotient coordinate".into(),
        }),
        _ => Err(Error::UnsupportedCase {
            what: format!("{} is handled by the N(G) = G route", label),
        }),
    }
}

/// The six fractional linear transformations occurring as sigma*(t) for
/// the Klein four case; they form a group isomorphic to S3.
pub fn six_quotient_maps<F: Field>(field: &F) -> Vec<MoebiusMap<F>> {
    vec![
        MoebiusMap::from_i64(field, 1, 0, 0, 1).unwrap(),
        MoebiusMap::from_i64(field, -1, 0, 0, 1).unwrap(),
        MoebiusMap::from_i64(field, 2, 12, 1, -2).unwrap(),
        MoebiusMap::from_i64(field, 2, -12, -1, -2).unwrap(),
        MoebiusMap::from_i64(field, 2, -12, 1, 2).unwrap(),
        MoebiusMap::from_i64(field, 2, 12, -1, 2).unwrap(),
    ]
}

/// Solve t . M = W(t) for the fractional linear map W in t, by
/// interpolation through sample values followed by an exact identity
/// check.
fn induced_map_on_t(
    t: &RatFunc<CycField>,
    m: &MoebiusMap<CycField>,
) -> Result<MoebiusMap<CycField>> {
    let field = t.field();
    let tm = t.compose_moebius(m);
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut x = 2i64;
    while src.len() < 3 && x < 200 {
        let xe = field.from_i64(x);
        if let (Some(p), Some(q)) = (t.eval(&xe), tm.eval(&xe)) {
            let pp = ProjPoint::Finite(p);
            if !src.contains(&pp) {
                src.push(pp);
                dst.push(ProjPoint::Finite(q));
            }
        }
        x += 1;
    }
    if src.len() < 3 {
        return Err(Error::Precondition(
            "could not sample three distinct values of t".into(),
        ));
    }
    let w = map_three_points(
        &field,
        &[src[0].clone(), src[1].clone(), src[2].clone()],
        &[dst[0].clone(), dst[1].clone(), dst[2].clone()],
    )?;
    // verify exactly: (alpha t + beta)/(gamma t + delta) = t . M
    let tn = RatFunc::from_poly(t.num().clone());
    let td = RatFunc::from_poly(t.den().clone());
    let wn = tn.scale(&w.a).add(&td.scale(&w.b));
    let wd = tn.scale(&w.c).add(&td.scale(&w.d));
    if wn.div(&wd) != tm {
        return Err(Error::VerificationFailure {
            clause: "interpolated sigma*(t) failed the exact identity".into(),
        });
    }
    Ok(w)
}

/// Fill sigma_star_t and the rational point of the quotient data for a
/// curve in standard position, by inducing the action of conjugation
/// through an isomorphism X -> X^c.
pub fn sigma_star(
    x_std: &HyperCurve,
    q: &QuotientData<CycField>,
    prec: u32,
) -> Result<QuotientData<CycField>> {
    let field = x_std.field();
    let (real_fom, witness) = field_of_moduli_is_real(x_std, prec)?;
    if !real_fom {
        return Err(Error::FieldOfModuliNotReal);
    }
    let phi = witness.unwrap();
    let w = induced_map_on_t(&q.t, phi.matrix())?;
    // sigma has order 2, so the induced map must be an involution
    if !w.compose(&w).is_identity() {
        return Err(Error::VerificationFailure {
            clause: "induced map on t is not an involution".into(),
        });
    }
    let table = six_quotient_maps(&field);
    let zero_pt = ProjPoint::Finite(field.zero());
    let rational_point = if w.is_identity() {
        // trivial action: the quotient model is P1 over R
        Some(zero_pt)
    } else if w == table[1] {
        Some(zero_pt)
    } else if w == table[2] {
        Some(ProjPoint::Finite(field.from_i64(6)))
    } else if w == table[3] {
        Some(ProjPoint::Finite(field.from_i64(-6)))
    } else {
        match q.label {
            // dihedral and tetrahedral cases only ever induce +-t
            GroupLabel::D2n(_) | GroupLabel::A4 => {
                return Err(Error::VerificationFailure {
                    clause: "unexpected sigma*(t) for a +-t case".into(),
                })
            }
            _ => None,
        }
    };
    Ok(QuotientData {
        label: q.label.clone(),
        t: q.t.clone(),
        sigma_star_t: Some(w),
        rational_point,
    })
}

/// The explicit family of curves with cyclic reduced group that are not
/// definable over the field of moduli.
#[derive(Clone, Debug)]
pub struct CounterexampleSpec {
    pub n: u64,
    pub m: u64,
    /// a_0, ..., a_m in Q(zeta_N).
    pub coefficients: Vec<CycNum>,
    pub cyclotomic_order: u64,
}

/// Coefficient source for generation: explicit Gaussian rationals
/// (re, im) for a_0..a_m, or a deterministic seed.
#[derive(Clone, Debug)]
pub enum CoeffSource {
    Explicit(Vec<(Rat, Rat)>),
    Seed(u64),
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl CounterexampleSpec {
    pub fn genus(&self) -> u64 {
        self.n * self.m - 1
    }

    /// Exact genericity check: a_r != (-1)^r beta^(-nr) a_r^c for all
    /// 2mn-th roots of unity beta and r = 1..m-1. Returns the violated
    /// clause, if any.
    pub fn genericity_violation(&self, field: &CycField) -> Result<Option<String>> {
        let two_mn = 2 * self.m * self.n;
        let roots = field.all_roots_of_unity(two_mn)?;
        for r in 1..self.m {
            let a_r = &self.coefficients[r as usize];
            let a_rc = a_r.conj();
            let sign = if r % 2 == 0 { 1 } else { -1 };
            for (j, beta) in roots.iter().enumerate() {
                // beta^(-nr)
                let bpow = beta.pow((self.n * r) % two_mn).inv().unwrap();
                let rhs = bpow.mul(&a_rc).scale(&Rat::from_integer(BigInt::from(sign)));
                if *a_r == rhs {
                    return Ok(Some(format!(
                        "a_{} = (-1)^{} beta^(-n r) conj(a_{}) for beta = zeta_{}^{}",
                        r, r, r, two_mn, j
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Assemble f = a_0 x^(nm) + sum_r (a_r x^(n(m+r)) + (-1)^r a_r^c x^(n(m-r))).
    pub fn polynomial(&self, field: &CycField) -> Poly<CycField> {
        let n = self.n as usize;
        let m = self.m as usize;
        let mut coeffs = vec![field.zero(); 2 * n * m + 1];
        coeffs[n * m] = self.coefficients[0].clone();
        for r in 1..=m {
            let a_r = &self.coefficients[r];
            coeffs[n * (m + r)] = coeffs[n * (m + r)].add(a_r);
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let term = a_r.conj().scale(&Rat::from_integer(BigInt::from(sign)));
            coeffs[n * (m - r)] = coeffs[n * (m - r)].add(&term);
        }
        Poly::new(field, coeffs)
    }
}

/// Build and fully validate a member of the counterexample family.
pub fn counterexample_generate(
    n: u64,
    m: u64,
    source: CoeffSource,
) -> Result<(CounterexampleSpec, HyperCurve)> {
    if n <= 5 {
        return Err(Error::Precondition("n must exceed 5".into()));
    }
    if m < 3 || m % 2 == 0 {
        return Err(Error::Precondition("m must be odd and at least 3".into()));
    }
    let big_n = num_integer::lcm(4, 2 * m * n);
    let field = CycField::new(big_n);
    let i = field.root_of_unity(4, 1)?;
    let build = |pairs: &[(Rat, Rat)]| -> Result<(CounterexampleSpec, HyperCurve)> {
        if pairs.len() != (m + 1) as usize {
            return Err(Error::SpecViolation {
                clause: format!("need {} coefficients a_0..a_m", m + 1),
            });
        }
        let coefficients: Vec<CycNum> = pairs
            .iter()
            .map(|(re, im)| field.from_rat(re.clone()).add(&i.scale(im)))
            .collect();
        let spec = CounterexampleSpec {
            n,
            m,
            coefficients,
            cyclotomic_order: big_n,
        };
        let a0 = &spec.coefficients[0];
        if a0.is_zero() || !a0.is_real() {
            return Err(Error::SpecViolation {
                clause: "a_0 must be a nonzero real".into(),
            });
        }
        if !spec.coefficients[m as usize].is_one() {
            return Err(Error::SpecViolation {
                clause: "a_m must equal 1".into(),
            });
        }
        if let Some(clause) = spec.genericity_violation(&field)? {
            return Err(Error::SpecViolation { clause });
        }
        let f = spec.polynomial(&field);
        if !f.is_squarefree() {
            return Err(Error::SpecViolation {
                clause: "f is not squarefree".into(),
            });
        }
        let curve = HyperCurve::new(f)?;
        debug_assert_eq!(curve.genus() as u64, spec.genus());
        Ok((spec, curve))
    };
    match source {
        CoeffSource::Explicit(pairs) => build(&pairs),
        CoeffSource::Seed(seed) => {
            let mut state = seed.wrapping_add(0xA5A5_A5A5);
            for _ in 0..64 {
                let mut pairs = Vec::with_capacity((m + 1) as usize);
                let a0 = 1 + (splitmix64(&mut state) % 3) as i64;
                pairs.push((Rat::from_integer(BigInt::from(a0)), Rat::zero()));
                for _ in 1..m {
                    let u = 1 + (splitmix64(&mut state) % 3) as i64;
                    let v = 1 + (splitmix64(&mut state) % 3) as i64;
                    pairs.push((
                        Rat::from_integer(BigInt::from(u)),
                        Rat::from_integer(BigInt::from(v)),
                    ));
                }
                pairs.push((Rat::one(), Rat::zero()));
                match build(&pairs) {
                    Ok(done) => return Ok(done),
                    Err(Error::SpecViolation { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::SpecViolation {
                clause: "no generic coefficient choice found from seed".into(),
            })
        }
    }
}

/// One verification clause with its exact witnesses.
#[derive(Clone, Debug)]
pub struct ClauseResult {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

/// Four-clause verification report for a counterexample instance.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub clauses: Vec<ClauseResult>,
}

impl CounterexampleReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .clauses
            .iter()
            .map(|c| json!({ "clause": c.name, "pass": c.pass, "detail": c.detail }))
            .collect::<Vec<_>>())
    }

    pub fn ensure_all_pass(&self) -> Result<()> {
        match self.clauses.iter().find(|c| !c.pass) {
            None => Ok(()),
            Some(c) => Err(Error::VerificationFailure {
                clause: c.name.clone(),
            }),
        }
    }
}

/// Verify the four structural claims for a counterexample instance:
/// cyclic reduced group C_n generated by x -> zeta_n x, automorphism
/// group generated by iota and the rotation lift, real field of moduli
/// with an antidiagonal witness, and total obstruction with every
/// composite of the form iota . nu^(2k + l).
pub fn counterexample_verify(
    spec: &CounterexampleSpec,
    x: &HyperCurve,
    prec: u32,
) -> Result<CounterexampleReport> {
    let field = x.field();
    let n = spec.n;
    let mut clauses = Vec::new();

    // clause 1: reduced group is the standard C_n
    let reduced = crate::curve::reduced_aut(x, prec)?;
    let standard_cn = crate::moebius::standard_group(&GroupLabel::Cn(n), &field)?;
    let pass1 = reduced.same_elements(&standard_cn);
    clauses.push(ClauseResult {
        name: "reduced group is C_n generated by x -> zeta_n x".into(),
        pass: pass1,
        detail: json!({ "order": reduced.order(), "expected": n }),
    });

    // clause 2: Aut(X) = <iota> + <nu>
    let aut = crate::curve::aut_group(x, prec)?;
    let nu_matrix = MoebiusMap::new(
        &field,
        field.root_of_unity(n, 1)?,
        CycField::zero(&field),
        CycField::zero(&field),
        CycField::one(&field),
    )?;
    let nu = aut
        .lifts
        .iter()
        .find(|l| *l.matrix() == nu_matrix && l.e_sign() > 0)
        .cloned();
    let pass2 = match &nu {
        None => false,
        Some(nu) => {
            let nu_order = nu.iso_order(aut.lifts.len()) == Some(n as usize);
            let iota_order = aut.iota.iso_order(4) == Some(2);
            // <nu> must avoid iota, so the sum is direct
            let mut disjoint = true;
            let mut cur = nu.clone();
            for _ in 1..n {
                if cur.is_iota() {
                    disjoint = false;
                }
                cur = cur.compose(nu);
            }
            let abelian_size = aut.lifts.len() == 2 * n as usize;
            nu_order && iota_order && disjoint && abelian_size
        }
    };
    clauses.push(ClauseResult {
        name: "Aut(X) is generated by iota and nu with trivial intersection".into(),
        pass: pass2,
        detail: json!({
            "aut_order": aut.lifts.len(),
            "abstract_type": aut.abstract_type,
        }),
    });

    // clause 3: field of moduli is R with an antidiagonal witness
    let (is_real, witness) = field_of_moduli_is_real(x, prec)?;
    let anti = witness
        .as_ref()
        .map(|w| w.matrix().is_antidiagonal())
        .unwrap_or(false);
    clauses.push(ClauseResult {
        name: "field of moduli is R with an antidiagonal witness".into(),
        pass: is_real && anti,
        detail: match &witness {
            Some(w) => json!({ "witness": moebius_json(w.matrix()) }),
            None => json!("no isomorphism to the conjugate curve"),
        },
    });

    // clause 4: obstructed, all composites iota . nu^(2k+l)
    let descent = weil_search(x, prec)?;
    let pass4 = match (&descent, &nu) {
        (DescentResult::ObstructedOverR(cert), Some(nu)) => {
            verify_obstruction_pattern(x, cert, nu, n, aut.lifts.len())
                .unwrap_or(false)
        }
        _ => false,
    };
    clauses.push(ClauseResult {
        name: "Weil cocycle obstructed with composites iota . nu^(2k+l)".into(),
        pass: pass4,
        detail: match &descent {
            DescentResult::ObstructedOverR(cert) => {
                json!({ "composites": cert.pairs.len() })
            }
            other => json!({ "status": format!("{}", other.status()) }),
        },
    });

    Ok(CounterexampleReport { clauses })
}

/// Check the exponent pattern of an obstruction certificate: writing
/// each isomorphism as mu0 . (iota^eps) . nu^k, its composite must be
/// iota . nu^(2k + l) for one fixed l.
fn verify_obstruction_pattern(
    x: &HyperCurve,
    cert: &ObstructionCert,
    nu: &CurveIso,
    n: u64,
    aut_order: usize,
) -> Result<bool> {
    if cert.pairs.len() != aut_order {
        return Ok(false);
    }
    // powers of nu as matrices
    let mut nu_pows = Vec::with_capacity(n as usize);
    let mut cur = CurveIso::identity(x);
    for _ in 0..n {
        nu_pows.push(cur.clone());
        cur = cur.compose(nu);
    }
    let mu0 = &cert.pairs[0].0;
    let mu0_inv = mu0.inverse();
    let mut l: Option<u64> = None;
    for (phi, composite) in &cert.pairs {
        if composite.is_identity() {
            return Ok(false);
        }
        // k from phi = mu0 . delta with delta = nu^k or iota nu^k
        let delta = mu0_inv.compose(phi);
        let k = nu_pows
            .iter()
            .position(|p| p.matrix() == delta.matrix())
            .ok_or(Error::VerificationFailure {
                clause: "isomorphism is not mu0 . nu^k up to iota".into(),
            })? as u64;
        // composite must be iota . nu^j exactly
        let j = nu_pows
            .iter()
            .position(|p| p.matrix() == composite.matrix())
            .ok_or(Error::VerificationFailure {
                clause: "composite is not a power of nu up to iota".into(),
            })? as u64;
        let with_iota = nu_pows[j as usize].compose_iota();
        if *composite != with_iota {
            // composite must include the hyperelliptic involution
            return Ok(false);
        }
        let this_l = (j + 2 * n - (2 * k) % n) % n;
        match l {
            None => l = Some(this_l),
            Some(l0) => {
                if l0 != this_l {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::closure;
    use crate::moebius::identify;

    fn curve_i64(field: &CycField, coeffs: &[i64]) -> HyperCurve {
        HyperCurve::new(Poly::from_i64(field, coeffs)).unwrap()
    }

    #[test]
    fn real_curve_is_definable() {
        let f = CycField::new(4);
        let x = curve_i64(&f, &[2, 1, 0, 0, 0, 0, 1]);
        let (is_real, w) = field_of_moduli_is_real(&x, 128).unwrap();
        assert!(is_real);
        assert!(w.unwrap().is_identity());
        match weil_search(&x, 128).unwrap() {
            DescentResult::DefinableOverR { real_model, .. } => {
                assert!(real_model.is_conj_fixed());
            }
            other => panic!("expected definable, got {:?}", other.status()),
        }
    }

    #[test]
    fn asymmetric_curve_has_moduli_field_c() {
        // y^2 = x^6 + (1 + zeta_7) x: no isomorphism onto the conjugate
        let f = CycField::new(7);
        let mut coeffs = vec![f.zero(); 7];
        coeffs[1] = f.one().add(&f.zeta());
        coeffs[6] = f.one();
        let x = HyperCurve::new(Poly::new(&f, coeffs)).unwrap();
        let (is_real, w) = field_of_moduli_is_real(&x, 128).unwrap();
        assert!(!is_real);
        assert!(w.is_none());
        assert!(matches!(
            weil_search(&x, 128).unwrap(),
            DescentResult::FieldOfModuliIsC
        ));
    }

    #[test]
    fn twist_round_trip() {
        // twist a real generic curve by x -> x + i
        let f = CycField::new(4);
        let base = Poly::from_i64(&f, &[2, 1, 0, 0, 0, 0, 1]);
        let shift = MoebiusMap::new(&f, f.one(), f.zeta(), f.zero(), f.one()).unwrap();
        let twisted = moebius_pullback(&base, &shift, 6);
        let x = HyperCurve::new(twisted).unwrap();
        match weil_search(&x, 128).unwrap() {
            DescentResult::DefinableOverR {
                real_model,
                coordinate_change,
                ..
            } => {
                assert!(real_model.is_conj_fixed());
                let y = HyperCurve::new(real_model).unwrap();
                let isos = isomorphisms(&x, &y, 128).unwrap();
                assert!(!isos.is_empty(), "model must be isomorphic to the twist");
                let _ = coordinate_change;
            }
            other => panic!("expected definable, got {:?}", other.status()),
        }
    }

    #[test]
    fn quotient_coordinates_degrees() {
        let f = CycField::new(4);
        let d6 = quotient_coordinate(&GroupLabel::D2n(3), &f).unwrap();
        assert_eq!(d6.t.map_degree(), 6);
        let a4 = quotient_coordinate(&GroupLabel::A4, &f).unwrap();
        assert_eq!(a4.t.map_degree(), 12);
        assert!(matches!(
            quotient_coordinate(&GroupLabel::Cn(5), &f),
            Err(Error::UnsupportedCase { .. })
        ));
        assert!(matches!(
            quotient_coordinate(&GroupLabel::S4, &f),
            Err(Error::UnsupportedCase { .. })
        ));
        // PSL2(F3): degree (27-3)/2 = 12
        let f3 = crate::gf::gf_make(3, 1, None).unwrap();
        let h = quotient_coordinate(&GroupLabel::Psl2 { q: 3 }, &f3).unwrap();
        assert_eq!(h.t.map_degree(), 12);
    }

    #[test]
    fn six_maps_form_s3() {
        let f = CycField::new(1);
        let maps = six_quotient_maps(&f);
        let g = closure(&f, &maps, 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(identify(&g), GroupLabel::D2n(3));
        for m in &maps {
            assert!(g.contains(m));
        }
    }

    #[test]
    fn case_d_product_formula() {
        // (1/4) t' ((2t'-12)/(t'+2)) ((2t'+12)/(-t'+2)) with t' = x^2+x^-2
        // equals the degree-12 tetrahedral invariant
        let f = CycField::new(1);
        let tp = RatFunc::new(
            Poly::from_i64(&f, &[1, 0, 0, 0, 1]),
            Poly::from_i64(&f, &[0, 0, 1]),
        );
        let two = RatFunc::constant(&f, f.from_i64(2));
        let twelve = RatFunc::constant(&f, f.from_i64(12));
        let quarter = RatFunc::constant(
            &f,
            f.from_rat(Rat::new(BigInt::from(1), BigInt::from(4))),
        );
        let factor1 = tp.scale(&f.from_i64(2)).sub(&twelve).div(&tp.add(&two));
        let factor2 = tp
            .scale(&f.from_i64(2))
            .add(&twelve)
            .div(&two.sub(&tp));
        letت = quarter.mul(&tp).mul(&factor1).mul(&factor2);
        let expect = quotient_coordinate(&GroupLabel::A4, &f).unwrap().t;
        assert_eq!(ت, expect);
    }

    #[test]
    fn counterexample_instance_6_3() {
        let pairs = vec![
            (Rat::one(), Rat::zero()),
            (Rat::one(), Rat::from_integer(2.into())),
            (Rat::one(), Rat::from_integer(2.into())),
            (Rat::one(), Rat::zero()),
        ];
        let (spec, x) = counterexample_generate(6, 3, CoeffSource::Explicit(pairs)).unwrap();
        assert_eq!(spec.cyclotomic_order, 36);
        assert_eq!(x.genus(), 17);
        // frozen polynomial: x^36 + (1+2i)x^30 + (1+2i)x^24 + x^18
        //                    - (1-2i)x^12 + (1-2i)x^6 - 1
        let field = x.field();
        let i = field.root_of_unity(4, 1).unwrap();
        let one_p_2i = field.one().add(&i.scale(&Rat::from_integer(2.into())));
        let one_m_2i = one_p_2i.conj();
        assert_eq!(x.f().coeff(36), field.one());
        assert_eq!(x.f().coeff(30), one_p_2i);
        assert_eq!(x.f().coeff(24), one_p_2i);
        assert_eq!(x.f().coeff(18), field.one());
        assert_eq!(x.f().coeff(12), one_m_2i.neg());
        assert_eq!(x.f().coeff(6), one_m_2i);
        assert_eq!(x.f().coeff(0), field.from_i64(-1));
    }

    #[test]
    fn counterexample_preconditions_and_genericity() {
        assert!(matches!(
            counterexample_generate(5, 3, CoeffSource::Seed(0)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            counterexample_generate(6, 1, CoeffSource::Seed(0)),
            Err(Error::Precondition(_))
        ));
        // a_1 = 1 violates genericity: beta^6 = -1 has solutions in mu_36
        let pairs = vec![
            (Rat::one(), Rat::zero()),
            (Rat::one(), Rat::zero()),
            (Rat::one(), Rat::from_integer(2.into())),
            (Rat::one(), Rat::zero()),
        ];
        assert!(matches!(
            counterexample_generate(6, 3, CoeffSource::Explicit(pairs)),
            Err(Error::SpecViolation { .. })
        ));
    }
}
