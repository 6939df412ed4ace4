//! Certified complex root isolation for exact polynomials.
//!
//! Approximation is cheap and uncertified: Aberth-Ehrlich in double
//! precision, then per-root Newton refinement in dyadic arithmetic.
//! Certification is where the guarantees live: a disk Newton operator
//! containment proves each disk holds exactly one root, and pairwise
//! disjointness of deg(f) certified disks proves the set is complete.
//! Nothing downstream ever trusts a root without its certificate.

use crate::ball::{ComplexBall, Dyadic};
use crate::cyclotomic::CycField;
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Copy, Clone, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn eval_f64(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(*c);
    }
    acc
}

/// Horner evaluation of ball coefficients at a ball point.
pub fn eval_ball(coeffs: &[ComplexBall], z: &ComplexBall, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul_ball(z, prec).add_ball(c, prec);
    }
    acc
}

fn derivative_balls(coeffs: &[ComplexBall], prec: u32) -> Vec<ComplexBall> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&Dyadic::from_i64(k as i64), prec))
        .collect()
}

/// Aberth-Ehrlich simultaneous iteration in double precision.
fn aberth_seeds(coeffs: &[C64]) -> Result<Vec<C64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let mut radius: f64 = 0.0;
    for c in &coeffs[..d] {
        radius = radius.max((c.abs() / lead.abs()).powf(1.0 / (d as f64)));
    }
    let radius = (1.0 + radius).min(1e6).max(0.5);
    let mut z: Vec<C64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            C64::new(radius * theta.cos(), radius * theta.sin())
        })
        .collect();
    let deriv: Vec<C64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| C64::new(c.re * k as f64, c.im * k as f64))
        .collect();
    for _ in 0..400 {
        let mut moved: f64 = 0.0;
        for i in 0..d {
            let fz = eval_f64(coeffs, z[i]);
            let dfz = eval_f64(&deriv, z[i]);
            if dfz.abs() == 0.0 {
                z[i] = z[i].add(C64::new(1e-4, 2e-4));
                moved = f64::MAX;
                continue;
            }
            let w = fz.div(dfz);
            let mut s = C64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i].sub(*zj);
                    if diff.abs() == 0.0 {
                        continue;
                    }
                    s = s.add(C64::new(1.0, 0.0).div(diff));
                }
            }
            let denom = C64::new(1.0, 0.0).sub(w.mul(s));
            let step = if denom.abs() == 0.0 { w } else { w.div(denom) };
            z[i] = z[i].sub(step);
            moved = moved.max(step.abs());
            if !z[i].re.is_finite() || !z[i].im.is_finite() {
                return Err(Error::Precision { prec: 53 });
            }
        }
        if moved < 1e-13 {
            break;
        }
    }
    Ok(z)
}

/// Newton refinement of one seed in dyadic arithmetic.
fn refine(coeffs: &[ComplexBall], seed: C64, wp: u32) -> ComplexBall {
    let deriv = derivative_balls(coeffs, wp);
    let mut z = ComplexBall::from_f64(seed.re, seed.im);
    let steps = 3 + ((wp as f64) / 40.0).log2().ceil().max(1.0) as u32;
    for _ in 0..steps {
        let fz = eval_ball(coeffs, &z, wp);
        let dfz = eval_ball(&deriv, &z, wp);
        let Some(q) = fz.div_ball(&dfz, wp) else { break };
        let next = z.sub_ball(&q, wp);
        z = ComplexBall::exact(next.re, next.im);
    }
    z
}

/// Disk-Newton certification: the disk (center, r) contains exactly one
/// root if center - f(center)/f'(disk) lands strictly inside the disk.
fn certify(
    coeffs: &[ComplexBall],
    deriv: &[ComplexBall],
    center: &ComplexBall,
    prec: u32,
    wp: u32,
) -> Option<ComplexBall> {
    let mut r = Dyadic::pow2(-(prec as i64));
    for _ in 0..10 {
        let disk = ComplexBall::new(center.re.clone(), center.im.clone(), r.clone());
        let fm = eval_ball(coeffs, &ComplexBall::exact(center.re.clone(), center.im.clone()), wp);
        let dfd = eval_ball(deriv, &disk, wp);
        if let Some(q) = fm.div_ball(&dfd, wp) {
            let newton = ComplexBall::exact(center.re.clone(), center.im.clone()).sub_ball(&q, wp);
            if newton.inside(&disk) {
                return Some(disk);
            }
        }
        r = r.mul(&Dyadic::from_i64(16));
    }
    None
}

/// Certified, pairwise disjoint enclosures of all roots of a squarefree
/// polynomial, ordered by (real, imaginary) center coordinates.
pub fn roots_numeric(f: &Poly<CycField>, prec: u32) -> Result<Vec<ComplexBall>> {
    let d = f
        .degree()
        .ok_or_else(|| Error::Precondition("zero polynomial has no roots".into()))?;
    if d == 0 {
        return Ok(vec![]);
    }
    let wp = prec + 64;
    let coeff_balls: Vec<ComplexBall> = f.coeffs().iter().map(|c| c.embed(wp)).collect();
    let coeff_f64: Vec<C64> = coeff_balls
        .iter()
        .map(|b| {
            let (re, im) = b.to_f64_pair();
            C64::new(re, im)
        })
        .collect();
    if coeff_f64.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Precision { prec });
    }
    let seeds = aberth_seeds(&coeff_f64)?;
    let deriv = derivative_balls(&coeff_balls, wp);
    let mut balls = Vec::with_capacity(d);
    for s in seeds {
        let z = refine(&coeff_balls, s, wp);
        let ball = certify(&coeff_balls, &deriv, &z, prec, wp)
            .ok_or(Error::Precision { prec })?;
        balls.push(ball);
    }
    for i in 0..balls.len() {
        for j in (i + 1)..balls.len() {
            if !balls[i].disjoint(&balls[j]) {
                return Err(Error::Precision { prec });
            }
        }
    }
    balls.sort_by(|a, b| {
        a.re.cmp_val(&b.re)
            .then_with(|| a.im.cmp_val(&b.im))
    });
    Ok(balls)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let f = CycField::new(4);
        let p = Poly::from_i64(&f, &[1, 0, 1]); // x^2 + 1
        let roots = roots_numeric(&p, 96).unwrap();
        assert_eq!(roots.len(), 2);
        // sorted by (re, im): -i before +i
        assert!(roots[0].contains_point(&Dyadic::zero(), &Dyadic::from_i64(-1)));
        assert!(roots[1].contains_point(&Dyadic::zero(), &Dyadic::from_i64(1)));
    }

    #[test]
    fn sixth_roots_of_unity() {
        let f = CycField::new(1);
        let mut c = vec![0i64; 7];
        c[0] = -1;
        c[6] = 1;
        let p = Poly::from_i64(&f, &c);
        let roots = roots_numeric(&p, 128).unwrap();
        assert_eq!(roots.len(), 6);
        // each ball must contain one of the true roots
        for k in 0..6 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 6.0;
            let (re, im) = (theta.cos(), theta.sin());
            let hits = roots
                .iter()
                .filter(|b| {
                    let (br, bi) = b.to_f64_pair();
                    ((br - re).powi(2) + (bi - im).powi(2)).sqrt() < 1e-10
                })
                .count();
            assert_eq!(hits, 1, "root {} not isolated", k);
        }
    }

    #[test]
    fn sharp_radii() {
        let f = CycField::new(1);
        let p = Poly::from_i64(&f, &[-2, 0, 1]); // x^2 - 2
        let roots = roots_numeric(&p, 200).unwrap();
        for b in &roots {
            assert!(b.rad.cmp_val(&Dyadic::pow2(-180)) == std::cmp::Ordering::Less);
        }
    }
}
