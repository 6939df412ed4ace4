//! Finite subgroups of PGL2 over an exact field: the standard atlas,
//! group closure, abstract recognition, fixed points, normalizers and
//! centralizers.
//!
//! A Moebius map is stored projectively: the matrix is scaled so that
//! its first nonzero entry in the order (a, b, c, d) equals one, which
//! makes PGL2 equality structural equality.

use crate::error::{Error, Result};
use crate::field::Field;
use std::collections::{HashMap, HashSet};
use std::fmt;

/// Default cap for group closure; anything larger is treated as
/// infinite or runaway.
pub const CLOSURE_BOUND: usize = 10080;

/// Point of the projective line over the field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ProjPoint<E> {
    Finite(E),
    Infinity,
}

impl<E: fmt::Display> fmt::Display for ProjPoint<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{}", x),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl<E> ProjPoint<E> {
    /// Homogeneous coordinates (u : v).
    pub fn homog<F: Field<Elem = E>>(&self, field: &F) -> (E, E)
    where
        E: Clone,
    {
        match self {
            ProjPoint::Finite(x) => (x.clone(), field.one()),
            ProjPoint::Infinity => (field.one(), field.zero()),
        }
    }
}

/// An element of PGL2 in canonical projective form.
#[derive(Clone)]
pub struct MoebiusMap<F: Field> {
    field: F,
    pub a: F::Elem,
    pub b: F::Elem,
    pub c: F::Elem,
    pub d: F::Elem,
}

impl<F: Field> fmt::Debug for MoebiusMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

impl<F: Field> PartialEq for MoebiusMap<F> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c && self.d == other.d
    }
}
impl<F: Field> Eq for MoebiusMap<F> {}

impl<F: Field> std::hash::Hash for MoebiusMap<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.c.hash(state);
        self.d.hash(state);
    }
}

impl<F: Field> MoebiusMap<F> {
    /// Canonicalize and validate a projective matrix.
    pub fn new(field: &F, a: F::Elem, b: F::Elem, c: F::Elem, d: F::Elem) -> Result<Self> {
        let det = field.sub(&field.mul(&a, &d), &field.mul(&b, &c));
        if field.is_zero(&det) {
            return Err(Error::Precondition("singular Moebius matrix".into()));
        }
        let entries = [a, b, c, d];
        let first = entries
            .iter()
            .find(|e| !field.is_zero(e))
            .expect("nonsingular matrix has a nonzero entry");
        let s = field.inv(first).expect("nonzero entry is invertible");
        let mut it = entries.iter().map(|e| field.mul(e, &s));
        let (a, b, c, d) = (
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        Ok(MoebiusMap { field: field.clone(), a, b, c, d })
    }

    pub fn from_i64(field: &F, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        MoebiusMap::new(
            field,
            field.from_i64(a),
            field.from_i64(b),
            field.from_i64(c),
            field.from_i64(d),
        )
    }

    pub fn identity(field: &F) -> Self {
        MoebiusMap {
            field: field.clone(),
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_identity(&self) -> bool {
        let f = &self.field;
        f.is_one(&self.a) && f.is_zero(&self.b) && f.is_zero(&self.c) && f.is_one(&self.d)
    }

    pub fn is_diagonal(&self) -> bool {
        self.field.is_zero(&self.b) && self.field.is_zero(&self.c)
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.field.is_zero(&self.a) && self.field.is_zero(&self.d)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.field.is_zero(&self.c)
    }

    pub fn det(&self) -> F::Elem {
        let f = &self.field;
        f.sub(&f.mul(&self.a, &self.d), &f.mul(&self.b, &self.c))
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        let f = &self.field;
        let a = f.add(&f.mul(&self.a, &other.a), &f.mul(&self.b, &other.c));
        let b = f.add(&f.mul(&self.a, &other.b), &f.mul(&self.b, &other.d));
        let c = f.add(&f.mul(&self.c, &other.a), &f.mul(&self.d, &other.c));
        let d = f.add(&f.mul(&self.c, &other.b), &f.mul(&self.d, &other.d));
        MoebiusMap::new(f, a, b, c, d).expect("product of invertible maps is invertible")
    }

    pub fn inverse(&self) -> Self {
        let f = &self.field;
        MoebiusMap::new(
            f,
            self.d.clone(),
            f.neg(&self.b),
            f.neg(&self.c),
            self.a.clone(),
        )
        .expect("inverse of invertible map")
    }

    pub fn apply_homog(&self, u: &F::Elem, v: &F::Elem) -> (F::Elem, F::Elem) {
        let f = &self.field;
        (
            f.add(&f.mul(&self.a, u), &f.mul(&self.b, v)),
            f.add(&f.mul(&self.c, u), &f.mul(&self.d, v)),
        )
    }

    pub fn apply(&self, p: &ProjPoint<F::Elem>) -> ProjPoint<F::Elem> {
        let f = &self.field;
        let (u, v) = p.homog(f);
        let (u, v) = self.apply_homog(&u, &v);
        if f.is_zero(&v) {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(f.div(&u, &v).unwrap())
        }
    }

    /// Projective order, up to `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut m = self.clone();
        for k in 1..=cap {
            if m.is_identity() {
                return Some(k);
            }
            m = m.compose(self);
        }
        None
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = MoebiusMap::identity(&self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// Conjugation self -> u . self . u^-1.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.compose(self).compose(&u.inverse())
    }

    /// Fixed points in P^1, as exact field elements or infinity.
    ///
    /// Solves c x^2 + (d - a) x - b = 0. When the discriminant has no
    /// square root in the field the error suggests a field enlargement.
    pub fn fixed_points(&self) -> Result<Vec<ProjPoint<F::Elem>>> {
        let f = &self.field;
        if self.is_identity() {
            return Err(Error::Precondition("identity fixes everything".into()));
        }
        let mut pts = Vec::new();
        if f.is_zero(&self.c) {
            pts.push(ProjPoint::Infinity);
            if self.a != self.d {
                let x = f.div(&self.b, &f.sub(&self.d, &self.a)).unwrap();
                pts.push(ProjPoint::Finite(x));
            }
        } else {
            let da = f.sub(&self.d, &self.a);
            let disc = f.add(
                &f.mul(&da, &da),
                &f.mul(&f.from_i64(4), &f.mul(&self.b, &self.c)),
            );
            let two_c = f.mul(&f.from_i64(2), &self.c);
            if f.is_zero(&disc) {
                let x = f.div(&f.neg(&da), &two_c).unwrap();
                pts.push(ProjPoint::Finite(x));
            } else {
                let s = f.sqrt(&disc).ok_or(Error::NeedsExtension {
                    suggestion: f.extension_hint(),
                })?;
                let neg_da = f.neg(&da);
                for root in [f.add(&neg_da, &s), f.sub(&neg_da, &s)] {
                    pts.push(ProjPoint::Finite(f.div(&root, &two_c).unwrap()));
                }
            }
        }
        sort_points(f, &mut pts);
        Ok(pts)
    }
}

/// Deterministic ordering of projective points: finite first by the
/// field's element order, infinity last.
pub fn sort_points<F: Field>(field: &F, pts: &mut [ProjPoint<F::Elem>]) {
    pts.sort_by(|p, q| match (p, q) {
        (ProjPoint::Infinity, ProjPoint::Infinity) => std::cmp::Ordering::Equal,
        (ProjPoint::Infinity, _) => std::cmp::Ordering::Greater,
        (_, ProjPoint::Infinity) => std::cmp::Ordering::Less,
        (ProjPoint::Finite(x), ProjPoint::Finite(y)) => field.cmp_elems(x, y),
    });
}

/// The unique Moebius map carrying one ordered triple of distinct
/// points to another, built from the homogeneous three-point form.
pub fn map_three_points<F: Field>(
    field: &F,
    src: &[ProjPoint<F::Elem>; 3],
    dst: &[ProjPoint<F::Elem>; 3],
) -> Result<MoebiusMap<F>> {
    // S(p1,p2,p3) sends (p1,p2,p3) to (0,1,inf).
    let to_std = |pts: &[ProjPoint<F::Elem>; 3]| -> [F::Elem; 4] {
        let (u1, v1) = pts[0].homog(field);
        let (u2, v2) = pts[1].homog(field);
        let (u3, v3) = pts[2].homog(field);
        let k1 = field.sub(&field.mul(&u2, &v3), &field.mul(&u3, &v2));
        let k2 = field.sub(&field.mul(&u2, &v1), &field.mul(&u1, &v2));
        [
            field.mul(&k1, &v1),
            field.neg(&field.mul(&k1, &u1)),
            field.mul(&k2, &v3),
            field.neg(&field.mul(&k2, &u3)),
        ]
    };
    let s = to_std(src);
    let t = to_std(dst);
    // M = adj(T) * S
    let (ta, tb, tc, td) = (&t[0], &t[1], &t[2], &t[3]);
    let adj = [
        td.clone(),
        field.neg(tb),
        field.neg(tc),
        ta.clone(),
    ];
    let a = field.add(&field.mul(&adj[0], &s[0]), &field.mul(&adj[1], &s[2]));
    let b = field.add(&field.mul(&adj[0], &s[1]), &field.mul(&adj[1], &s[3]));
    let c = field.add(&field.mul(&adj[2], &s[0]), &field.mul(&adj[3], &s[2]));
    let d = field.add(&field.mul(&adj[2], &s[1]), &field.mul(&adj[3], &s[3]));
    MoebiusMap::new(field, a, b, c, d)
}

/// Finite subgroup of PGL2, closed under composition and inverse.
#[derive(Clone, Debug)]
pub struct PGL2Group<F: Field> {
    field: F,
    elems: Vec<MoebiusMap<F>>,
}

impl<F: Field> PGL2Group<F> {
    /// Wrap a set that is already a group; sorts deterministically and
    /// verifies closure.
    pub fn from_elements(field: &F, elems: Vec<MoebiusMap<F>>) -> Result<Self> {
        let mut g = PGL2Group { field: field.clone(), elems };
        g.sort_dedup();
        if !g.is_closed() {
            return Err(Error::Precondition("element set is not a group".into()));
        }
        Ok(g)
    }

    fn sort_dedup(&mut self) {
        let field = self.field.clone();
        self.elems.sort_by(|m, n| {
            field
                .cmp_elems(&m.a, &n.a)
                .then_with(|| field.cmp_elems(&m.b, &n.b))
                .then_with(|| field.cmp_elems(&m.c, &n.c))
                .then_with(|| field.cmp_elems(&m.d, &n.d))
        });
        self.elems.dedup();
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[MoebiusMap<F>] {
        &self.elems
    }

    pub fn contains(&self, m: &MoebiusMap<F>) -> bool {
        self.elems.iter().any(|e| e == m)
    }

    fn elem_set(&self) -> HashSet<&MoebiusMap<F>> {
        self.elems.iter().collect()
    }

    pub fn is_closed(&self) -> bool {
        let set = self.elem_set();
        if !self.elems.iter().any(|m| m.is_identity()) {
            return false;
        }
        for g in &self.elems {
            if !set.contains(&g.inverse()) {
                return false;
            }
            for h in &self.elems {
                if !set.contains(&g.compose(h)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_abelian(&self) -> bool {
        for (i, g) in self.elems.iter().enumerate() {
            for h in &self.elems[i + 1..] {
                if g.compose(h) != h.compose(g) {
                    return false;
                }
            }
        }
        true
    }

    /// Multiset of element orders, as order -> count.
    pub fn order_profile(&self) -> HashMap<usize, usize> {
        let n = self.order();
        let mut profile = HashMap::new();
        for g in &self.elems {
            let o = g.order(n).expect("element order divides group order");
            *profile.entry(o).or_insert(0) += 1;
        }
        profile
    }

    pub fn max_element_order(&self) -> usize {
        self.order_profile().keys().copied().max().unwrap_or(1)
    }

    pub fn is_cyclic(&self) -> bool {
        self.max_element_order() == self.order()
    }

    /// Elements of projective order exactly 2.
    pub fn involutions(&self) -> Vec<MoebiusMap<F>> {
        self.elems
            .iter()
            .filter(|m| !m.is_identity() && m.compose(m).is_identity())
            .cloned()
            .collect()
    }

    pub fn conjugated_by(&self, u: &MoebiusMap<F>) -> Self {
        let mut g = PGL2Group {
            field: self.field.clone(),
            elems: self.elems.iter().map(|m| m.conjugate_by(u)).collect(),
        };
        g.sort_dedup();
        g
    }

    pub fn same_elements(&self, other: &Self) -> bool {
        self.elems == other.elems
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        let set = other.elem_set();
        self.elems.iter().all(|m| set.contains(m))
    }
}

/// Smallest group containing the generators, by breadth-first products
/// with canonicalization. Aborts above `bound`.
pub fn closure<F: Field>(
    field: &F,
    gens: &[MoebiusMap<F>],
    bound: usize,
) -> Result<PGL2Group<F>> {
    let mut seen: HashSet<MoebiusMap<F>> = HashSet::new();
    let mut elems: Vec<MoebiusMap<F>> = Vec::new();
    let id = MoebiusMap::identity(field);
    seen.insert(id.clone());
    elems.push(id);
    let mut frontier: Vec<MoebiusMap<F>> = Vec::new();
    for g in gens {
        if seen.insert(g.clone()) {
            elems.push(g.clone());
            frontier.push(g.clone());
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for h in elems.clone() {
                for prod in [g.compose(&h), h.compose(g)] {
                    if seen.insert(prod.clone()) {
                        elems.push(prod.clone());
                        next.push(prod);
                        if elems.len() > bound {
                            return Err(Error::InfiniteOrUnbounded { bound });
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    PGL2Group::from_elements(field, elems)
}

/// Label in the finite-subgroup atlas of PGL2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupLabel {
    Cn(u64),
    /// Dihedral of order 2n, n > 2.
    D2n(u64),
    V4,
    A4,
    S4,
    A5,
    /// Upper-triangular group of order d * a_size in characteristic p.
    BetaA { d: u64, a_size: u64 },
    Psl2 { q: u64 },
    Pgl2 { q: u64 },
    Unknown,
}

impl GroupLabel {
    pub fn expected_order(&self) -> Option<u64> {
        match self {
            GroupLabel::Cn(n) => Some(*n),
            GroupLabel::D2n(n) => Some(2 * n),
            GroupLabel::V4 => Some(4),
            GroupLabel::A4 => Some(12),
            GroupLabel::S4 => Some(24),
            GroupLabel::A5 => Some(60),
            GroupLabel::BetaA { d, a_size } => Some(d * a_size),
            GroupLabel::Psl2 { q } => Some((q * q * q - q) / 2),
            GroupLabel::Pgl2 { q } => Some(q * q * q - q),
            GroupLabel::Unknown => None,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Cn(n) => write!(f, "C{}", n),
            GroupLabel::D2n(n) => write!(f, "D{}", 2 * n),
            GroupLabel::V4 => write!(f, "V4"),
            GroupLabel::A4 => write!(f, "A4"),
            GroupLabel::S4 => write!(f, "S4"),
            GroupLabel::A5 => write!(f, "A5"),
            GroupLabel::BetaA { d, a_size } => write!(f, "BetaA(d={},|A|={})", d, a_size),
            GroupLabel::Psl2 { q } => write!(f, "PSL2(F{})", q),
            GroupLabel::Pgl2 { q } => write!(f, "PGL2(F{})", q),
            GroupLabel::Unknown => write!(f, "Unknown"),
        }
    }
}

/// Additive subgroup data for the upper-triangular case: a finite
/// additive group A containing 1 with beta A = A.
#[derive(Clone, Debug)]
pub struct AdditiveSubgroupSpec<F: Field> {
    pub gens: Vec<F::Elem>,
    pub beta: F::Elem,
}

impl<F: Field> AdditiveSubgroupSpec<F> {
    /// Expand A by additive closure; requires positive characteristic.
    pub fn expand(&self, field: &F) -> Result<(Vec<F::Elem>, u64)> {
        let p = field.characteristic();
        if p == 0 {
            return Err(Error::Precondition(
                "additive subgroups are finite only in positive characteristic".into(),
            ));
        }
        let mut set: HashSet<F::Elem> = HashSet::new();
        set.insert(field.zero());
        let mut gens = self.gens.clone();
        gens.push(field.one());
        let cap = 1 << 16;
        let mut frontier: Vec<F::Elem> = vec![field.zero()];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = field.add(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                    if set.len() > cap {
                        return Err(Error::InfiniteOrUnbounded { bound: cap });
                    }
                }
            }
        }
        // beta must stabilize A and be a root of unity
        let mut d = 1u64;
        let mut pw = self.beta.clone();
        while !field.is_one(&pw) {
            pw = field.mul(&pw, &self.beta);
            d += 1;
            if d > cap as u64 {
                return Err(Error::Precondition("beta is not a root of unity".into()));
            }
        }
        for a in &set {
            if !set.contains(&field.mul(&self.beta, a)) {
                return Err(Error::Precondition("beta does not stabilize A".into()));
            }
        }
        let mut a: Vec<F::Elem> = set.into_iter().collect();
        a.sort_by(|x, y| field.cmp_elems(x, y));
        Ok((a, d))
    }
}

/// The literal generating sets of the atlas, expanded to full element
/// sets. The field must contain the constants the case requires.
pub fn standard_group<F: Field>(label: &GroupLabel, field: &F) -> Result<PGL2Group<F>> {
    let one = field.one();
    let zero = field.zero();
    let mk = |a: &F::Elem, b: &F::Elem, c: &F::Elem, d: &F::Elem| {
        MoebiusMap::new(field, a.clone(), b.clone(), c.clone(), d.clone())
    };
    match label {
        GroupLabel::Cn(n) => {
            let z = field.nth_root_of_unity(*n)?;
            let mut elems = Vec::new();
            for r in 0..*n {
                elems.push(mk(&field.pow(&z, r), &zero, &zero, &one)?);
            }
            PGL2Group::from_elements(field, elems)
        }
        GroupLabel::D2n(n) => {
            if *n <= 2 {
                return Err(Error::Precondition("dihedral case needs n > 2".into()));
            }
            let z = field.nth_root_of_unity(*n)?;
            let mut elems = Vec::new();
            for r in 0..*n {
                let zr = field.pow(&z, r);
                elems.push(mk(&zr, &zero, &zero, &one)?);
                elems.push(mk(&zero, &zr, &one, &zero)?);
            }
            PGL2Group::from_elements(field, elems)
        }
        GroupLabel::V4 => {
            let m1 = field.from_i64(-1);
            let elems = vec![
                MoebiusMap::identity(field),
                mk(&m1, &zero, &zero, &one)?,
                mk(&zero, &one, &one, &zero)?,
                mk(&zero, &m1, &one, &zero)?,
            ];
            PGL2Group::from_elements(field, elems)
        }
        GroupLabel::A4 => {
            let i = field.nth_root_of_unity(4)?;
            let m1 = field.from_i64(-1);
            let mut elems = vec![
                MoebiusMap::identity(field),
                mk(&m1, &zero, &zero, &one)?,
                mk(&zero, &one, &one, &zero)?,
                mk(&zero, &m1, &one, &zero)?,
            ];
            for nu in [1u64, 3] {
                let inu = field.pow(&i, nu);
                let minu = field.neg(&inu);
                elems.push(mk(&inu, &inu, &one, &m1)?);
                elems.push(mk(&inu, &minu, &one, &one)?);
                elems.push(mk(&one, &inu, &one, &minu)?);
                elems.push(mk(&m1, &minu, &one, &minu)?);
            }
            PGL2Group::from_elements(field, elems)
        }
        GroupLabel::S4 => {
            let i = field.nth_root_of_unity(4)?;
            let mut elems = Vec::new();
            for nu in 0..4u64 {
                let inu = field.pow(&i, nu);
                elems.push(mk(&inu, &zero, &zero, &one)?);
                elems.push(mk(&zero, &inu, &one, &zero)?);
                for nup in 0..4u64 {
                    let inup = field.pow(&i, nup);
                    let minn = field.neg(&field.pow(&i, nu + nup));
                    elems.push(mk(&inu, &minn, &one, &inup)?);
                }
            }
            PGL2Group::from_elements(field, elems)
        }
        GroupLabel::A5 => {
            let eps = field.nth_root_of_unity(5)?;
            let omega = field.add(&eps, &field.pow(&eps, 4));
            let omega_bar = field.add(&field.pow(&eps, 2), &field.pow(&eps, 3));
            let m1 = field.from_i64(-1);
            let mut elems = Vec::new();
            for r in 0..5u64 {
                let er = field.pow(&eps, r);
                elems.push(mk(&er, &zero, &zero, &one)?);
                elems.push(mk(&zero, &er, &m1, &zero)?);
                for s in 0..5u64 {
                    let ers = field.pow(&eps, (r + 5 - s) % 5);
                    let mes = field.neg(&field.pow(&eps, (5 - s) % 5));
                    for w in [&omega, &omega_bar] {
                        elems.push(mk(
                            &field.mul(&er, w),
                            &ers,
                            &one,
                            &field.mul(&mes, w),
                        )?);
                    }
                }
            }
            PGL2Group::from_elements(field, elems)
        }
        GroupLabel::BetaA { d, a_size } => {
            // Reconstruct from the label: A is the subfield with a_size
            // elements and beta a deterministic element of order d in it.
            let p = field.characteristic();
            if p == 0 {
                return Err(Error::UnsupportedCase {
                    what: "upper-triangular case needs positive characteristic".into(),
                });
            }
            let all = field.enumerate().ok_or(Error::UnsupportedCase {
                what: "field too large to enumerate".into(),
            })?;
            let a: Vec<F::Elem> = all
                .iter()
                .filter(|x| field.pow(x, *a_size) == **x)
                .cloned()
                .collect();
            if a.len() as u64 != *a_size {
                return Err(Error::NeedsExtension {
                    suggestion: field.extension_hint(),
                });
            }
            let beta = a
                .iter()
                .find(|x| {
                    !field.is_zero(x)
                        && field.pow(x, *d) == field.one()
                        && (1..*d).all(|j| field.pow(x, j) != field.one())
                })
                .cloned()
                .ok_or(Error::NeedsExtension {
                    suggestion: field.extension_hint(),
                })?;
            let spec = AdditiveSubgroupSpec { gens: a.clone(), beta };
            standard_group_beta_a(&spec, field)
        }
        GroupLabel::Psl2 { q } | GroupLabel::Pgl2 { q } => {
            let p = field.characteristic();
            if p == 0 {
                return Err(Error::UnsupportedCase {
                    what: "PSL2/PGL2 cases live in positive characteristic".into(),
                });
            }
            let mut s = 0u32;
            let mut qq = *q;
            while qq % p == 0 {
                qq /= p;
                s += 1;
            }
            if qq != 1 || s == 0 {
                return Err(Error::Precondition(format!("{} is not a power of {}", q, p)));
            }
            let all = field.enumerate().ok_or(Error::UnsupportedCase {
                what: "field too large to enumerate".into(),
            })?;
            let sub: Vec<F::Elem> = all
                .iter()
                .filter(|x| field.pow(x, *q) == **x)
                .cloned()
                .collect();
            if sub.len() as u64 != *q {
                return Err(Error::NeedsExtension {
                    suggestion: field.extension_hint(),
                });
            }
            let squares: HashSet<F::Elem> = sub
                .iter()
                .filter(|x| !field.is_zero(x))
                .map(|x| field.mul(x, x))
                .collect();
            let want_psl = matches!(label, GroupLabel::Psl2 { .. });
            let mut set: HashSet<MoebiusMap<F>> = HashSet::new();
            for a in &sub {
                for b in &sub {
                    for c in &sub {
                        for d in &sub {
                            let det = field.sub(&field.mul(a, d), &field.mul(b, c));
                            if field.is_zero(&det) {
                                continue;
                            }
                            if want_psl && !squares.contains(&det) {
                                continue;
                            }
                            set.insert(
                                mk(a, b, c, d).expect("nonzero determinant"),
                            );
                        }
                    }
                }
            }
            PGL2Group::from_elements(field, set.into_iter().collect())
        }
        GroupLabel::Unknown => Err(Error::UnsupportedCase {
            what: "cannot construct an unknown group".into(),
        }),
    }
}

/// Upper-triangular group from explicit (beta, A) data.
pub fn standard_group_beta_a<F: Field>(
    spec: &AdditiveSubgroupSpec<F>,
    field: &F,
) -> Result<PGL2Group<F>> {
    let (a_set, d) = spec.expand(field)?;
    let mut elems = Vec::new();
    for k in 0..d {
        let bk = field.pow(&spec.beta, k);
        for a in &a_set {
            elems.push(MoebiusMap::new(
                field,
                bk.clone(),
                a.clone(),
                field.zero(),
                field.one(),
            )?);
        }
    }
    PGL2Group::from_elements(field, elems)
}

/// Abstract recognition from order, element-order multiset and
/// abelianness. In positive characteristic dividing the order the
/// Case II labels take precedence (PSL2(F_3) and A4 are abstractly
/// isomorphic but classified differently).
pub fn identify<F: Field>(g: &PGL2Group<F>) -> GroupLabel {
    let n = g.order() as u64;
    let p = g.field().characteristic();
    let profile = g.order_profile();
    let count = |k: usize| profile.get(&k).copied().unwrap_or(0);
    if n == 1 {
        return GroupLabel::Cn(1);
    }
    if p > 0 && n % p == 0 {
        // Case II first: q = p^s
        let mut q = p;
        while q * q * q - q <= 2 * n {
            if q * q * q - q == n {
                return GroupLabel::Pgl2 { q };
            }
            if (q * q * q - q) / 2 == n {
                return GroupLabel::Psl2 { q };
            }
            q *= p;
        }
        // Upper-triangular: n = d * p^k with the translations forming
        // an elementary abelian normal subgroup.
        let mut a_size = 1u64;
        let mut m = n;
        while m % p == 0 {
            a_size *= p;
            m /= p;
        }
        let translations = g
            .elements()
            .iter()
            .filter(|x| x.is_identity() || x.order(n as usize) == Some(p as usize))
            .count() as u64;
        if translations >= a_size {
            return GroupLabel::BetaA { d: m, a_size };
        }
        return GroupLabel::Unknown;
    }
    if g.is_abelian() {
        if g.is_cyclic() {
            return GroupLabel::Cn(n);
        }
        if n == 4 {
            return GroupLabel::V4;
        }
        return GroupLabel::Unknown;
    }
    if n == 12 && count(3) == 8 && count(2) == 3 {
        return GroupLabel::A4;
    }
    if n == 24 && count(2) == 9 && count(3) == 8 && count(4) == 6 {
        return GroupLabel::S4;
    }
    if n == 60 && count(2) == 15 && count(3) == 20 && count(5) == 24 {
        return GroupLabel::A5;
    }
    if n % 2 == 0 {
        let m = n / 2;
        let expected_involutions = if m % 2 == 0 { m + 1 } else { m };
        if m > 2
            && g.max_element_order() as u64 == m
            && count(2) as u64 == expected_involutions
        {
            return GroupLabel::D2n(m);
        }
    }
    GroupLabel::Unknown
}

/// Normalizers of cyclic groups are the diagonal/antidiagonal family
/// conjugated into position; everything else is finite.
#[derive(Clone, Debug)]
pub enum NormalizerShape<F: Field> {
    Finite(PGL2Group<F>),
    /// All maps u^-1 (alpha x) u and, when `with_antidiagonal`,
    /// u^-1 (alpha / x) u for alpha in the multiplicative group.
    Family {
        conjugator: MoebiusMap<F>,
        with_antidiagonal: bool,
    },
}

/// Fixed points of the involutions of G (or of all nontrivial elements
/// when there are fewer than three), the finite set any normalizing
/// element must permute.
fn anchor_points<F: Field>(g: &PGL2Group<F>) -> Result<Vec<ProjPoint<F::Elem>>> {
    let field = g.field().clone();
    let mut pts: HashSet<ProjPoint<F::Elem>> = HashSet::new();
    let involutions = g.involutions();
    for m in &involutions {
        for p in m.fixed_points()? {
            pts.insert(p);
        }
    }
    if pts.len() < 3 {
        for m in g.elements() {
            if m.is_identity() {
                continue;
            }
            for p in m.fixed_points()? {
                pts.insert(p);
            }
        }
    }
    let mut pts: Vec<_> = pts.into_iter().collect();
    sort_points(&field, &mut pts);
    if pts.len() < 3 {
        return Err(Error::UnsupportedCase {
            what: "fewer than three anchor points".into(),
        });
    }
    Ok(pts)
}

/// Normalizer of G in PGL2 over the field. Noncyclic groups are
/// handled exactly by enumerating the Moebius maps determined by
/// ordered triples of anchor points; cyclic groups return the
/// parametric family of the atlas.
pub fn normalizer<F: Field>(g: &PGL2Group<F>) -> Result<NormalizerShape<F>> {
    let field = g.field().clone();
    if g.order() < 2 {
        return Err(Error::Precondition("normalizer needs |G| >= 2".into()));
    }
    if g.is_cyclic() {
        let (u, _) = standardize_cyclic(g)?;
        return Ok(NormalizerShape::Family {
            conjugator: u,
            with_antidiagonal: true,
        });
    }
    let pts = anchor_points(g)?;
    let base = [pts[0].clone(), pts[1].clone(), pts[2].clone()];
    let pt_set: HashSet<&ProjPoint<F::Elem>> = pts.iter().collect();
    let mut found = Vec::new();
    for p in &pts {
        for q in &pts {
            if q == p {
                continue;
            }
            for r in &pts {
                if r == p || r == q {
                    continue;
                }
                let dst = [p.clone(), q.clone(), r.clone()];
                let u = match map_three_points(&field, &base, &dst) {
                    Ok(u) => u,
                    Err(_) => continue,
                };
                // quick filter: must permute the anchor set
                let mut ok = true;
                for s in &pts {
                    if !pt_set.contains(&u.apply(s)) {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                if g.conjugated_by(&u).same_elements(g) {
                    found.push(u);
                }
            }
        }
    }
    Ok(NormalizerShape::Finite(PGL2Group::from_elements(
        &field, found,
    )?))
}

/// Elements of the normalizer commuting with every element of G.
pub fn centralizer<F: Field>(g: &PGL2Group<F>) -> Result<NormalizerShape<F>> {
    if g.is_cyclic() {
        let n = g.order();
        let (u, _) = standardize_cyclic(g)?;
        // diagonal maps always commute with a standard cyclic group;
        // the antidiagonal ones only when n = 2.
        return Ok(NormalizerShape::Family {
            conjugator: u,
            with_antidiagonal: n == 2,
        });
    }
    match normalizer(g)? {
        NormalizerShape::Finite(n) => {
            let field = g.field().clone();
            let elems: Vec<_> = n
                .elements()
                .iter()
                .filter(|u| {
                    g.elements()
                        .iter()
                        .all(|m| u.compose(m) == m.compose(u))
                })
                .cloned()
                .collect();
            Ok(NormalizerShape::Finite(PGL2Group::from_elements(
                &field, elems,
            )?))
        }
        fam => Ok(fam),
    }
}

/// Deterministic map sending an ordered pair of distinct points to
/// (0, infinity).
fn pair_to_zero_inf<F: Field>(
    field: &F,
    p: &ProjPoint<F::Elem>,
    q: &ProjPoint<F::Elem>,
) -> MoebiusMap<F> {
    let one = field.one();
    let zero = field.zero();
    match (p, q) {
        (ProjPoint::Finite(x), ProjPoint::Finite(y)) => {
            MoebiusMap::new(field, one.clone(), field.neg(x), one, field.neg(y)).unwrap()
        }
        (ProjPoint::Finite(x), ProjPoint::Infinity) => {
            MoebiusMap::new(field, one.clone(), field.neg(x), zero, one).unwrap()
        }
        (ProjPoint::Infinity, ProjPoint::Finite(y)) => {
            MoebiusMap::new(field, zero, one.clone(), one, field.neg(y)).unwrap()
        }
        (ProjPoint::Infinity, ProjPoint::Infinity) => unreachable!("distinct points"),
    }
}

/// Conjugate a cyclic group onto the standard diagonal position.
fn standardize_cyclic<F: Field>(g: &PGL2Group<F>) -> Result<(MoebiusMap<F>, GroupLabel)> {
    let field = g.field().clone();
    let n = g.order();
    if n == 1 {
        return Ok((MoebiusMap::identity(&field), GroupLabel::Cn(1)));
    }
    let gen = g
        .elements()
        .iter()
        .find(|m| m.order(n) == Some(n))
        .expect("cyclic group has a generator");
    let pts = gen.fixed_points()?;
    if pts.len() != 2 {
        return Err(Error::UnsupportedCase {
            what: "cyclic generator without two fixed points".into(),
        });
    }
    for (p, q) in [(&pts[0], &pts[1]), (&pts[1], &pts[0])] {
        let u = pair_to_zero_inf(&field, p, q);
        let std = standard_group(&GroupLabel::Cn(n as u64), &field)?;
        if g.conjugated_by(&u).same_elements(&std) {
            return Ok((u, GroupLabel::Cn(n as u64)));
        }
    }
    Err(Error::UnsupportedCase {
        what: "cyclic group did not land on the diagonal model".into(),
    })
}

/// Find U with U G U^-1 equal to the standard group of G's label.
///
/// Maps the fixed pair of a suitable element to (0, infinity), then
/// adjusts by a diagonal scaling found through exact square roots.
pub fn conjugate_into_standard<F: Field>(
    g: &PGL2Group<F>,
) -> Result<(MoebiusMap<F>, GroupLabel)> {
    let field = g.field().clone();
    let label = identify(g);
    if label == GroupLabel::Unknown {
        return Err(Error::UnsupportedCase {
            what: "cannot standardize an unidentified group".into(),
        });
    }
    // Fast path: already standard.
    if let Ok(std) = standard_group(&label, &field) {
        if g.same_elements(&std) {
            return Ok((MoebiusMap::identity(&field), label));
        }
    }
    match label {
        GroupLabel::Cn(_) => {
            let (u, l) = standardize_cyclic(g)?;
            Ok((u, l))
        }
        GroupLabel::D2n(n) => {
            let u = standardize_dihedral_like(g, n)?;
            Ok((u, label))
        }
        GroupLabel::V4 => {
            let u = standardize_dihedral_like(g, 2)?;
            Ok((u, label))
        }
        GroupLabel::A4 | GroupLabel::S4 => {
            // Standardize the normal Klein four subgroup; the image then
            // sits inside N(V4) = S4 in standard position and is forced.
            let v4 = normal_klein_subgroup(g).ok_or(Error::UnsupportedCase {
                what: "no normal Klein four subgroup".into(),
            })?;
            let u = standardize_dihedral_like(&v4, 2)?;
            let conj = g.conjugated_by(&u);
            let std = standard_group(&label, &field)?;
            if conj.same_elements(&std) {
                Ok((u, label))
            } else {
                Err(Error::UnsupportedCase {
                    what: format!("{} did not land on the standard model", label),
                })
            }
        }
        GroupLabel::A5 => {
            let u = standardize_a5(g)?;
            Ok((u, label))
        }
        _ => Err(Error::UnsupportedCase {
            what: format!("no standardization implemented for {}", label),
        }),
    }
}

/// The subgroup {id, a, b, ab} of commuting involutions normal in G.
fn normal_klein_subgroup<F: Field>(g: &PGL2Group<F>) -> Option<PGL2Group<F>> {
    let field = g.field().clone();
    let invs = g.involutions();
    for (i, a) in invs.iter().enumerate() {
        for b in &invs[i + 1..] {
            if a.compose(b) != b.compose(a) {
                continue;
            }
            let ab = a.compose(b);
            if ab.is_identity() {
                continue;
            }
            let v4 = PGL2Group::from_elements(
                &field,
                vec![MoebiusMap::identity(&field), a.clone(), b.clone(), ab],
            )
            .ok()?;
            let normal = g
                .elements()
                .iter()
                .all(|u| v4.conjugated_by(u).same_elements(&v4));
            if normal {
                return Some(v4);
            }
        }
    }
    None
}

/// Standardize a group generated by a rotation of order n whose fixed
/// pair goes to {0, inf} plus a swapping involution scaled onto the
/// antidiagonal model; covers D2n and V4 (n = 2).
fn standardize_dihedral_like<F: Field>(g: &PGL2Group<F>, n: u64) -> Result<MoebiusMap<F>> {
    let field = g.field().clone();
    let target = if n == 2 {
        standard_group(&GroupLabel::V4, &field)?
    } else {
        standard_group(&GroupLabel::D2n(n), &field)?
    };
    let rot = g
        .elements()
        .iter()
        .filter(|m| m.order(g.order()) == Some(n as usize))
        .collect::<Vec<_>>();
    for r in rot {
        let pts = r.fixed_points()?;
        if pts.len() != 2 {
            continue;
        }
        for (p, q) in [(&pts[0], &pts[1]), (&pts[1], &pts[0])] {
            let u0 = pair_to_zero_inf(&field, p, q);
            let g1 = g.conjugated_by(&u0);
            // find an antidiagonal element x -> beta / x
            let anti = g1.elements().iter().find(|m| m.is_antidiagonal());
            let Some(anti) = anti else { continue };
            let beta = field.div(&anti.b, &anti.c).unwrap();
            // want delta^2 * beta to be an n-th root of unity (or -1 of it)
            let z = field.nth_root_of_unity(n)?;
            for rpow in 0..n {
                let targ = field.pow(&z, rpow);
                let Some(ratio) = field.div(&targ, &beta) else { continue };
                if let Some(delta) = field.sqrt(&ratio) {
                    if field.is_zero(&delta) {
                        continue;
                    }
                    let w = MoebiusMap::new(
                        &field,
                        delta,
                        field.zero(),
                        field.zero(),
                        field.one(),
                    )?;
                    let u = w.compose(&u0);
                    if g.conjugated_by(&u).same_elements(&target) {
                        return Ok(u);
                    }
                }
            }
        }
    }
    Err(Error::NeedsExtension {
        suggestion: field.extension_hint(),
    })
}

fn standardize_a5<F: Field>(g: &PGL2Group<F>) -> Result<MoebiusMap<F>> {
    let field = g.field().clone();
    let target = standard_group(&GroupLabel::A5, &field)?;
    let eps = field.nth_root_of_unity(5)?;
    let rot = g
        .elements()
        .iter()
        .filter(|m| m.order(60) == Some(5))
        .collect::<Vec<_>>();
    for r in rot {
        let pts = r.fixed_points()?;
        if pts.len() != 2 {
            continue;
        }
        for (p, q) in [(&pts[0], &pts[1]), (&pts[1], &pts[0])] {
            let u0 = pair_to_zero_inf(&field, p, q);
            let g1 = g.conjugated_by(&u0);
            let anti = g1.elements().iter().find(|m| m.is_antidiagonal());
            let Some(anti) = anti else { continue };
            let beta = field.div(&anti.b, &anti.c).unwrap();
            for rpow in 0..5u64 {
                let targ = field.neg(&field.pow(&eps, rpow));
                let Some(ratio) = field.div(&targ, &beta) else { continue };
                if let Some(delta) = field.sqrt(&ratio) {
                    if field.is_zero(&delta) {
                        continue;
                    }
                    let w = MoebiusMap::new(
                        &field,
                        delta,
                        field.zero(),
                        field.zero(),
                        field.one(),
                    )?;
                    let u = w.compose(&u0);
                    if g.conjugated_by(&u).same_elements(&target) {
                        return Ok(u);
                    }
                }
            }
        }
    }
    Err(Error::NeedsExtension {
        suggestion: field.extension_hint(),
    })
}
