//! Genus-one classical functions: Weierstrass `℘`, `g2`, `g3`, `j`, Fricke and Weber functions.

use num_traits::Zero;
use rug::Float;
use serde::Serialize;

use super::{theta_derivatives_g1, BigComplex, TorsionIndex, MIN_PREC};
use crate::error::{Error, Result};
use crate::intmath::Int;
use crate::numeric::{pi, up, Cx};
use crate::quadfield::Rat;

/// Case split for the Weber function by the CM field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WeberKind {
    /// `Q(i)`: `(g2^2 / Delta) ℘^2`.
    Gaussian,
    /// `Q(sqrt -3)`: `(g3 / Delta) ℘^3`.
    Eisenstein,
    /// Otherwise `-2^7 3^5 (g2 g3 / Delta) ℘`.
    Generic,
}

impl WeberKind {
    pub fn for_field(d: i64) -> Self {
        match d {
            1 => WeberKind::Gaussian,
            3 => WeberKind::Eisenstein,
            _ => WeberKind::Generic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassicalKind {
    WeierstrassP,
    G2,
    G3,
    J,
    Fricke,
    Weber(WeberKind),
}

/// The lattice `Z w1 + Z w2` with `w1 / w2` in the upper half plane.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub w1: Cx,
    pub w2: Cx,
}

/// `SL_2(Z)` element as `[[a, b], [c, d]]`.
pub type Sl2 = [[Int; 2]; 2];

fn sl2_mul(x: &Sl2, y: &Sl2) -> Sl2 {
    let mut r = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

/// `gamma` with `gamma tau` in the standard fundamental domain, found in double precision.
pub fn reduction_matrix(tau: (f64, f64)) -> Sl2 {
    let (mut x, mut y) = tau;
    let mut g: Sl2 = [[1, 0], [0, 1]];
    for _ in 0..200 {
        let n = x.round();
        x -= n;
        g = sl2_mul(&[[1, -(n as Int)], [0, 1]], &g);
        let r = x * x + y * y;
        if r >= 1.0 - 1e-12 {
            break;
        }
        x = -x / r;
        y /= r;
        g = sl2_mul(&[[0, -1], [1, 0]], &g);
    }
    g
}

fn mobius(g: &Sl2, tau: &Cx) -> Cx {
    let p = tau.prec();
    let num = tau.mul_int(g[0][0]).add(&Cx::from_int(p, g[0][1]));
    let den = tau.mul_int(g[1][0]).add(&Cx::from_int(p, g[1][1]));
    num.div(&den)
}

fn centered(r: &Rat) -> Rat {
    let f = r - r.floor();
    if f > Rat::new(1, 2) {
        f - Rat::from(1)
    } else {
        f
    }
}

/// Reduces `tau` into the fundamental domain and moves the torsion index with it: `a' = a gamma^{-1}`.
pub fn reduce_tau_index(tau: &Cx, a: &TorsionIndex) -> (Cx, TorsionIndex, Sl2) {
    let g = reduction_matrix(tau.to_f64());
    let inv = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]];
    let (a1, a2) = (a.a1[0], a.a2[0]);
    let b1 = a1 * Rat::from(inv[0][0]) + a2 * Rat::from(inv[1][0]);
    let b2 = a1 * Rat::from(inv[0][1]) + a2 * Rat::from(inv[1][1]);
    (mobius(&g, tau), TorsionIndex::new(vec![b1], vec![b2]), g)
}

impl Lattice {
    pub fn new(w1: Cx, w2: Cx) -> Result<Self> {
        let t = w1.div(&w2);
        if t.im.is_nan() || t.im <= 0 {
            return Err(Error::Invalid("w1 / w2 must lie in the upper half plane".into()));
        }
        Ok(Lattice { w1, w2 })
    }

    pub fn from_tau(tau: Cx) -> Result<Self> {
        let p = tau.prec();
        Lattice::new(tau, Cx::one(p))
    }

    pub fn tau(&self) -> Cx {
        self.w1.div(&self.w2)
    }

    pub fn prec(&self) -> u32 {
        self.w1.prec()
    }

    pub fn scale(&self, c: &Cx) -> Lattice {
        Lattice { w1: self.w1.mul(c), w2: self.w2.mul(c) }
    }

    /// A basis of the same lattice whose ratio lies in the fundamental domain, with the change of basis.
    pub fn reduced(&self) -> (Lattice, Sl2) {
        let g = reduction_matrix(self.tau().to_f64());
        let w1 = self.w1.mul_int(g[0][0]).add(&self.w2.mul_int(g[0][1]));
        let w2 = self.w1.mul_int(g[1][0]).add(&self.w2.mul_int(g[1][1]));
        (Lattice { w1, w2 }, g)
    }

    /// The point `a1 w1 + a2 w2`.
    pub fn point(&self, a: &TorsionIndex) -> Cx {
        let p = self.prec();
        self.w1.mul(&Cx::from_rat(p, &a.a1[0], &Rat::zero())).add(&self.w2.mul(&Cx::from_rat(p, &a.a2[0], &Rat::zero())))
    }
}

fn check_prec(prec: u32) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::PrecisionTooLow(prec));
    }
    Ok(())
}

fn f30(x: f64) -> Float {
    up(&Float::with_val(30, x))
}

/// `pi^2 csc^2(pi w) = -4 pi^2 x / (1 - x)^2` with `x = e^{2 pi i w}`, `Im w >= 0`; returns the value without `pi^2` and a radius.
fn csc2(w: &Cx) -> BigComplex {
    let w = if w.im.is_sign_negative() { w.neg() } else { w.clone() };
    let p = w.prec();
    let x = w.exp2pii();
    let one_minus = Cx::one(p).sub(&x);
    let v = x.div(&one_minus.sqr()).mul_int(-4);
    let (xf, df) = (x.abs().to_f64(), one_minus.abs().to_f64());
    let amp = (1.0 + 2.0 * xf / df) * (2.0 * std::f64::consts::PI * w.abs().to_f64() + 16.0);
    let mut err = Float::with_val(30, v.abs().to_f64() * amp * 2.0);
    err >>= p as i32;
    BigComplex::new(v, err)
}

/// `e^{-2 pi y}` geometric tail `4 t / (1 - t)^2 / (1 - e^{-2 pi im_tau})` with `t = e^{-2 pi y0}`.
fn csc_tail(y0: f64, im_tau: f64) -> f64 {
    let tp = 2.0 * std::f64::consts::PI;
    let t = (-tp * y0).exp();
    4.0 * t / (1.0 - t).powi(2) / (1.0 - (-tp * im_tau).exp())
}

/// `℘(z; Z tau + Z)` for reduced `tau` and `z` in the centered fundamental parallelogram.
fn wp_normalized(z: &Cx, tau: &Cx, prec: u32) -> Result<BigComplex> {
    let wp = prec + 40;
    let (z, tau) = (z.with_prec(wp), tau.with_prec(wp));
    let im_tau = tau.im.to_f64();
    let im_z = z.im.to_f64().abs();
    let target = -(prec as f64 + 10.0) * std::f64::consts::LN_2;
    let mut m: i64 = 1;
    while (csc_tail((m + 1) as f64 * im_tau - im_z, im_tau) * 2.0).ln() > target {
        m += 1;
    }
    let mut s = csc2(&z);
    if s.abs_lower().is_none() || z.abs() < Float::with_val(30, 1) >> (prec as i32 / 2) {
        return Err(Error::Pole);
    }
    let mut g2c = BigComplex::exact(Cx::zero(wp));
    for k in 1..=m {
        let mt = tau.mul_int(k as Int);
        s = s.add(&csc2(&z.add(&mt))).add(&csc2(&z.sub(&mt)));
        g2c = g2c.add(&csc2(&mt));
    }
    let tail = csc_tail((m + 1) as f64 * im_tau - im_z, im_tau) * 2.0 + csc_tail((m + 1) as f64 * im_tau, im_tau) * 2.0;
    let pi2 = BigComplex::new(Cx::real(Float::with_val(wp, pi(wp).square_ref())), Float::with_val(30, 1) >> (wp as i32 - 5));
    let third = BigComplex::new(Cx::from_rat(wp, &Rat::new(1, 3), &Rat::zero()), Float::with_val(30, 1) >> (wp as i32 - 1));
    let inner = s.sub(&g2c.mul_int(2)).sub(&third);
    let mut out = pi2.mul(&inner);
    out.err = up(&(Float::with_val(30, &out.err) + f30(tail * 10.0)));
    Ok(out.with_prec(prec))
}

/// Reduced form of a lattice point relative to `(w1, w2)`: `z / w2` moved into the centered parallelogram.
fn reduce_point(z: &Cx, tau: &Cx) -> Cx {
    let p = z.prec();
    let ny = Float::with_val(p, &z.im / &tau.im).to_f64().round() as Int;
    let zz = z.sub(&tau.mul_int(ny));
    let y = Float::with_val(p, &zz.im / &tau.im);
    let nx = Float::with_val(p, &zz.re - Float::with_val(p, &y * &tau.re)).to_f64().round() as Int;
    zz.sub(&Cx::from_int(p, nx))
}

/// `℘(z; L)` for an arbitrary lattice and point.
pub fn weierstrass_p(lattice: &Lattice, z: &Cx, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    let (red, _) = lattice.reduced();
    let tau = red.tau();
    let zn = reduce_point(&z.div(&red.w2), &tau);
    let v = wp_normalized(&zn, &tau, prec)?;
    let w2 = BigComplex::exact(red.w2.with_prec(prec + 40));
    Ok(v.with_prec(prec + 40).div(&w2.sqr())?.with_prec(prec))
}

/// `(g2, g3)` of `Z tau + Z` from the Eisenstein q-expansions.
fn g2g3_tau(tau: &Cx, prec: u32) -> (BigComplex, BigComplex) {
    let wp = prec + 40;
    let tau = tau.with_prec(wp);
    let q = tau.exp2pii();
    let qa = q.abs().to_f64();
    let target = -(prec as f64 + 20.0) * std::f64::consts::LN_2;
    let mut n_terms: u32 = 1;
    let tail = |m: u32, k: i32| {
        let r = ((m as f64 + 2.0) / (m as f64 + 1.0)).powi(k + 1) * qa;
        (m as f64 + 1.0).powi(k + 1) * qa.powi(m as i32 + 1) / (1.0 - r)
    };
    while (tail(n_terms, 5) * 504.0).ln() > target || tail(n_terms, 5) < 0.0 {
        n_terms += 1;
    }
    let (mut s3, mut s5) = (Cx::zero(wp), Cx::zero(wp));
    let mut qn = Cx::one(wp);
    for n in 1..=n_terms as Int {
        qn = qn.mul(&q);
        let (mut d3, mut d5) = (0i128, 0i128);
        for d in 1..=n {
            if n % d == 0 {
                d3 += d.pow(3);
                d5 += d.pow(5);
            }
        }
        s3 = s3.add(&qn.mul_int(d3));
        s5 = s5.add(&qn.mul_int(d5));
    }
    let round = Float::with_val(30, 1) >> (wp as i32 - 2 * (n_terms as f64).log2().ceil() as i32 - 40);
    let e4 = BigComplex::new(Cx::one(wp).add(&s3.mul_int(240)), f30(240.0 * tail(n_terms, 3)) + &round);
    let e6 = BigComplex::new(Cx::one(wp).sub(&s5.mul_int(504)), f30(504.0 * tail(n_terms, 5)) + &round);
    let p = pi(wp);
    let p4 = Float::with_val(wp, p.clone().square().square());
    let p6 = Float::with_val(wp, &p4 * p.clone().square());
    let tiny = Float::with_val(30, 1) >> (wp as i32 - 8);
    let c2 = BigComplex::new(Cx::real(Float::with_val(wp, &p4 * 4u32) / 3u32), tiny.clone());
    let c3 = BigComplex::new(Cx::real(Float::with_val(wp, &p6 * 8u32) / 27u32), tiny);
    (c2.mul(&e4), c3.mul(&e6))
}

/// `(g2(L), g3(L))`.
pub fn eisenstein_g2_g3(lattice: &Lattice, prec: u32) -> Result<(BigComplex, BigComplex)> {
    check_prec(prec)?;
    let (red, _) = lattice.reduced();
    let (g2, g3) = g2g3_tau(&red.tau(), prec);
    let w = BigComplex::exact(red.w2.with_prec(prec + 40));
    let w2 = w.sqr();
    let w4 = w2.sqr();
    let w6 = w4.mul(&w2);
    Ok((g2.div(&w4)?.with_prec(prec), g3.div(&w6)?.with_prec(prec)))
}

fn delta(g2: &BigComplex, g3: &BigComplex) -> BigComplex {
    g2.powu(3).sub(&g3.sqr().mul_int(27))
}

/// `j(L) = 1728 g2^3 / (g2^3 - 27 g3^2)`.
pub fn j_invariant(lattice: &Lattice, prec: u32) -> Result<BigComplex> {
    let (g2, g3) = eisenstein_g2_g3(lattice, prec + 32)?;
    Ok(g2.powu(3).mul_int(1728).div(&delta(&g2, &g3))?.with_prec(prec))
}

pub fn weber_combine(kind: ClassicalKind, g2: &BigComplex, g3: &BigComplex, p: &BigComplex) -> Result<BigComplex> {
    let d = delta(g2, g3);
    match kind {
        ClassicalKind::Fricke | ClassicalKind::Weber(WeberKind::Generic) => g2.mul(g3).mul(p).mul_int(-(1 << 7) * 243).div(&d),
        ClassicalKind::Weber(WeberKind::Gaussian) => g2.sqr().mul(&p.sqr()).div(&d),
        ClassicalKind::Weber(WeberKind::Eisenstein) => g3.mul(&p.powu(3)).div(&d),
        _ => Err(Error::Invalid(format!("{kind:?} is not a Fricke or Weber kind"))),
    }
}

/// Fricke or Weber value at an arbitrary point of `C / L`, through lattice sums.
pub fn weber_value(kind: ClassicalKind, lattice: &Lattice, z: &Cx, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    let wp = prec + 48;
    let lat = Lattice { w1: lattice.w1.with_prec(wp), w2: lattice.w2.with_prec(wp) };
    let p = weierstrass_p(&lat, &z.with_prec(wp), wp)?;
    let (g2, g3) = eisenstein_g2_g3(&lat, wp)?;
    Ok(weber_combine(kind, &g2, &g3, &p)?.with_prec(prec))
}

/// Evaluates a classical function of the lattice, at the torsion point `a1 w1 + a2 w2` when the kind needs one.
///
/// Fricke and Weber at `a = 0` raise `Pole`; the caller substitutes `j`.
pub fn classical_g1(kind: ClassicalKind, lattice: &Lattice, a: Option<&TorsionIndex>, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    let wp = prec + 48;
    let lat = Lattice { w1: lattice.w1.with_prec(wp), w2: lattice.w2.with_prec(wp) };
    let need_point = || a.ok_or_else(|| Error::Invalid(format!("{kind:?} needs a torsion index")));
    let out = match kind {
        ClassicalKind::G2 => eisenstein_g2_g3(&lat, wp)?.0,
        ClassicalKind::G3 => eisenstein_g2_g3(&lat, wp)?.1,
        ClassicalKind::J => j_invariant(&lat, wp)?,
        ClassicalKind::WeierstrassP | ClassicalKind::Fricke | ClassicalKind::Weber(_) => {
            let a = need_point()?;
            if a.is_zero() {
                return Err(Error::Pole);
            }
            let (red, g) = lat.reduced();
            let inv = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]];
            let (a1, a2) = (a.a1[0], a.a2[0]);
            let b1 = centered(&(a1 * Rat::from(inv[0][0]) + a2 * Rat::from(inv[1][0])));
            let b2 = centered(&(a1 * Rat::from(inv[0][1]) + a2 * Rat::from(inv[1][1])));
            let tau = red.tau();
            let zn = tau.mul(&Cx::from_rat(wp, &b1, &Rat::zero())).add(&Cx::from_rat(wp, &b2, &Rat::zero()));
            let pn = wp_normalized(&zn, &tau, wp)?;
            if kind == ClassicalKind::WeierstrassP {
                let w2 = BigComplex::exact(red.w2.clone());
                pn.div(&w2.sqr())?
            } else {
                let (g2, g3) = g2g3_tau(&tau, wp);
                weber_combine(kind, &g2, &g3, &pn)?
            }
        }
    };
    Ok(out.with_prec(prec))
}

/// `℘(z; Z tau + Z)` through `F(u) = theta^{1/2}(u + 1/2; tau)`: `℘ = -(log F)'' + F'''(0) / (3 F'(0))`.
pub fn weierstrass_p_theta(z: &Cx, tau: &Cx, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    let wp = prec + 40;
    let half = Rat::new(1, 2);
    let (tau, z) = (tau.with_prec(wp), z.with_prec(wp));
    let shift = Cx::from_rat(wp, &half, &Rat::zero());
    let at0 = theta_derivatives_g1(&half, &shift, &tau, wp, 3)?;
    let atz = theta_derivatives_g1(&half, &z.add(&shift), &tau, wp, 2)?;
    let (f, f1, f2) = (&atz[0], &atz[1], &atz[2]);
    let lg = f.mul(f2).sub(&f1.sqr()).div(&f.sqr())?;
    let c = at0[3].div(&at0[1].mul_int(3))?;
    Ok(c.sub(&lg).with_prec(prec))
}

/// `(g2, g3)` of `Z tau + Z` from half-period values of the theta-path `℘`.
pub fn g2g3_theta(tau: &Cx, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let wp = prec + 32;
    let tau = tau.with_prec(wp);
    let h = Cx::from_rat(wp, &Rat::new(1, 2), &Rat::zero());
    let t2 = tau.scale(&Float::with_val(wp, 0.5));
    let e1 = weierstrass_p_theta(&h, &tau, wp)?;
    let e2 = weierstrass_p_theta(&t2, &tau, wp)?;
    let e3 = weierstrass_p_theta(&h.add(&t2), &tau, wp)?;
    let g2 = e1.sqr().add(&e2.sqr()).add(&e3.sqr()).mul_int(2);
    let g3 = e1.mul(&e2).mul(&e3).mul_int(4);
    Ok((g2.with_prec(prec), g3.with_prec(prec)))
}

/// `j(tau) = 32 (theta_2^8 + theta_3^8 + theta_4^8)^3 / (theta_2 theta_3 theta_4)^8`.
pub fn j_from_theta(tau: &Cx, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    let wp = prec + 48;
    let tau = tau.with_prec(wp);
    let zero = Cx::zero(wp);
    let half = Cx::from_rat(wp, &Rat::new(1, 2), &Rat::zero());
    let t2 = theta_derivatives_g1(&Rat::new(1, 2), &zero, &tau, wp, 0)?.remove(0);
    let t3 = theta_derivatives_g1(&Rat::zero(), &zero, &tau, wp, 0)?.remove(0);
    let t4 = theta_derivatives_g1(&Rat::zero(), &half, &tau, wp, 0)?.remove(0);
    let num = t2.powu(8).add(&t3.powu(8)).add(&t4.powu(8)).powu(3).mul_int(32);
    let den = t2.mul(&t3).mul(&t4).powu(8);
    Ok(num.div(&den)?.with_prec(prec))
}

/// Weber or Fricke value at the torsion point `a1 tau + a2` computed entirely through theta functions.
pub fn weber_from_theta(kind: ClassicalKind, tau: &Cx, a: &TorsionIndex, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    if a.is_zero() {
        return Err(Error::Pole);
    }
    let wp = prec + 48;
    let (tr, ar, _) = reduce_tau_index(&tau.with_prec(wp), a);
    let b1 = centered(&ar.a1[0]);
    let b2 = centered(&ar.a2[0]);
    let z = tr.mul(&Cx::from_rat(wp, &b1, &Rat::zero())).add(&Cx::from_rat(wp, &b2, &Rat::zero()));
    let p = weierstrass_p_theta(&z, &tr, wp)?;
    let (g2, g3) = g2g3_theta(&tr, wp)?;
    Ok(weber_combine(kind, &g2, &g3, &p)?.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `j = E4^3 / (q prod (1 - q^n)^24)` with exact integer series.
    fn j_oracle(tau: &Cx, terms: usize) -> Cx {
        let p = tau.prec();
        let q = tau.exp2pii();
        let mut e4 = vec![0i128; terms];
        e4[0] = 1;
        for n in 1..terms {
            e4[n] = 240 * (1..=n as i128).filter(|d| n as i128 % d == 0).map(|d| d.pow(3)).sum::<i128>();
        }
        let mut pr: Vec<Int> = vec![0; terms];
        pr[0] = 1;
        for n in 1..terms {
            for _ in 0..24 {
                for k in (n..terms).rev() {
                    pr[k] -= pr[k - n];
                }
            }
        }
        let eval = |c: &[Int]| {
            let mut s = Cx::zero(p);
            let mut qn = Cx::one(p);
            for &x in c {
                s = s.add(&qn.mul_int(x));
                qn = qn.mul(&q);
            }
            s
        };
        eval(&e4).powu(3).div(&eval(&pr).mul(&q))
    }

    #[test]
    fn j_at_cm_points() {
        let p = 256;
        let i = Cx::i(p + 64);
        let j = j_invariant(&Lattice::from_tau(i.clone()).unwrap(), p).unwrap();
        assert!(j.overlaps(&BigComplex::from_int(p, 1728), &(Float::with_val(30, 1) >> 200)));
        let rho = Cx::new(Float::with_val(p + 64, 0.5), Float::with_val(p + 64, 3).sqrt() / 2u32);
        let j0 = j_invariant(&Lattice::from_tau(rho).unwrap(), p).unwrap();
        assert!(j0.v.abs() < Float::with_val(30, 1) >> 200);
        assert!(j.v.dist(&j_oracle(&i, 50)) < 1e-60);
    }

    #[test]
    fn j_oracle_generic_point() {
        let p = 192;
        let t = Cx::from_f64(p + 64, 0.21, 1.3);
        let a = j_invariant(&Lattice::from_tau(t.clone()).unwrap(), p).unwrap();
        let b = j_oracle(&t, 60);
        assert!(a.v.dist(&b) < Float::with_val(30, 1) >> 150);
        let c = j_from_theta(&t, p).unwrap();
        assert!(a.overlaps(&c, &(Float::with_val(30, 1) >> (p as i32 - 16))));
    }

    #[test]
    fn p_is_even_and_homothetic() {
        let p = 128;
        let lat = Lattice::new(Cx::from_f64(p, 0.4, 1.7), Cx::from_f64(p, 1.1, -0.2)).unwrap();
        let z = Cx::from_f64(p, 0.31, 0.22);
        let a = weierstrass_p(&lat, &z, p).unwrap();
        let b = weierstrass_p(&lat, &z.neg(), p).unwrap();
        assert!(a.overlaps(&b, &Float::new(30)));
        let c = Cx::from_f64(p, -0.7, 2.3);
        let sc = weierstrass_p(&lat.scale(&c), &z.mul(&c), p).unwrap();
        assert!(sc.overlaps(&a.mul(&BigComplex::exact(c.sqr().inv())), &(Float::with_val(30, 1) >> 100)));
        let shifted = weierstrass_p(&lat, &z.add(&lat.w1).sub(&lat.w2.mul_int(3)), p).unwrap();
        assert!(shifted.overlaps(&a, &(Float::with_val(30, 1) >> 100)));
    }

    #[test]
    fn theta_path_matches_lattice_path() {
        let p = 128;
        let tau = Cx::from_f64(p, 0.13, 1.05);
        let z = Cx::from_f64(p, 0.27, 0.4);
        let a = wp_normalized(&z, &tau, p).unwrap();
        let b = weierstrass_p_theta(&z, &tau, p).unwrap();
        assert!(a.overlaps(&b, &(Float::with_val(30, 1) >> 100)), "{a} vs {b}");
    }

    #[test]
    fn gaussian_weber_half_periods() {
        let p = 128;
        let lat = Lattice::from_tau(Cx::i(p)).unwrap();
        let k = ClassicalKind::Weber(WeberKind::Gaussian);
        let quarter = BigComplex::exact(Cx::from_rat(p, &Rat::new(1, 4), &Rat::zero()));
        let tol = Float::with_val(30, 1) >> 100;
        let a = TorsionIndex::new(vec![Rat::zero()], vec![Rat::new(1, 2)]);
        assert!(classical_g1(k, &lat, Some(&a), p).unwrap().overlaps(&quarter, &tol));
        let b = TorsionIndex::new(vec![Rat::new(1, 2)], vec![Rat::new(1, 2)]);
        assert!(classical_g1(k, &lat, Some(&b), p).unwrap().v.abs() < tol);
        assert_eq!(classical_g1(k, &lat, Some(&TorsionIndex::zero(1)), p), Err(Error::Pole));
        let t = weber_from_theta(k, &Cx::i(p), &a, p).unwrap();
        assert!(t.overlaps(&quarter, &tol));
    }

    #[test]
    fn reduction_moves_index() {
        let p = 96;
        let tau = Cx::from_f64(p, 3.3, 0.2);
        let a = TorsionIndex::new(vec![Rat::new(1, 3)], vec![Rat::new(1, 5)]);
        let (tr, ar, _) = reduce_tau_index(&tau, &a);
        assert!(tr.im.to_f64() > 0.8);
        let lat = Lattice::from_tau(tau).unwrap();
        let lr = Lattice::from_tau(tr).unwrap();
        let k = ClassicalKind::Fricke;
        let x = classical_g1(k, &lat, Some(&a), p).unwrap();
        let y = classical_g1(k, &lr, Some(&ar), p).unwrap();
        assert!(x.overlaps(&y, &(Float::with_val(30, 1) >> 60)));
    }
}
