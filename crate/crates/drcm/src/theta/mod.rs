//! Siegel theta functions with characteristics at arbitrary precision.

mod ball;
mod classical;

pub use ball::BigComplex;
pub use classical::{
    classical_g1, eisenstein_g2_g3, j_invariant, j_from_theta, reduce_tau_index, weierstrass_p, weierstrass_p_theta,
    weber_combine, weber_from_theta, weber_value, ClassicalKind, Lattice, WeberKind,
};

use num_traits::{ToPrimitive, Zero};
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmath::{lcm, Int};
use crate::numeric::{cholesky_min_pivot, min_eigenvalue, pi, up, CMat, Cx};
use crate::quadfield::Rat;
use crate::symplectic::{SiegelPoint, TypeDelta};

/// Smallest admissible eigenvalue of `Im tau`.
pub const DEFAULT_LAMBDA_FLOOR: f64 = 0.05;
pub const MIN_PREC: u32 = 32;

/// A characteristic `k in delta^{-1} Z^g / Z^g`, stored with entries in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaChar {
    pub k: Vec<Rat>,
}

fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

impl ThetaChar {
    pub fn new(k: Vec<Rat>, delta: &TypeDelta) -> Result<Self> {
        if k.len() != delta.genus() {
            return Err(Error::Invalid("characteristic has the wrong length".into()));
        }
        if k.iter().zip(&delta.d).any(|(x, &d)| !(*x * Rat::from(d)).is_integer()) {
            return Err(Error::Invalid(format!("delta * k is not integral for k = {k:?}")));
        }
        Ok(ThetaChar { k: k.iter().map(frac).collect() })
    }

    /// Any rational characteristic, without a type attached.
    pub fn free(k: Vec<Rat>) -> Self {
        ThetaChar { k: k.iter().map(frac).collect() }
    }

    pub fn zero(g: usize) -> Self {
        ThetaChar { k: vec![Rat::zero(); g] }
    }

    /// All characteristics for `delta`, lexicographic in `delta k`.
    pub fn all(delta: &TypeDelta) -> Vec<ThetaChar> {
        let mut out = vec![vec![]];
        for &d in &delta.d {
            out = out.into_iter().flat_map(|v: Vec<Rat>| (0..d).map(move |j| [v.clone(), vec![Rat::new(j, d)]].concat())).collect();
        }
        out.into_iter().map(|k| ThetaChar { k }).collect()
    }

    pub fn genus(&self) -> usize {
        self.k.len()
    }

    pub fn neg(&self) -> ThetaChar {
        ThetaChar::free(self.k.iter().map(|x| -x).collect())
    }
}

impl Serialize for ThetaChar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::numeric::rat_serde::vec(&self.k, s)
    }
}

/// A torsion index `a = (a1, a2) in Q^{2g}/Z^{2g}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionIndex {
    pub a1: Vec<Rat>,
    pub a2: Vec<Rat>,
}

impl TorsionIndex {
    pub fn new(a1: Vec<Rat>, a2: Vec<Rat>) -> Self {
        TorsionIndex { a1: a1.iter().map(frac).collect(), a2: a2.iter().map(frac).collect() }
    }

    pub fn zero(g: usize) -> Self {
        TorsionIndex { a1: vec![Rat::zero(); g], a2: vec![Rat::zero(); g] }
    }

    /// Common denominator `N` with `N a` integral.
    pub fn level(&self) -> Int {
        self.a1.iter().chain(&self.a2).fold(1, |acc, x| lcm(acc, *x.denom()))
    }

    pub fn is_zero(&self) -> bool {
        self.a1.iter().chain(&self.a2).all(|x| x.is_zero())
    }

    /// `a1 tau + a2 delta`.
    pub fn point(&self, tau: &SiegelPoint, delta: &TypeDelta) -> Vec<Cx> {
        let g = tau.genus();
        let p = tau.prec();
        (0..g)
            .map(|j| {
                let mut z = Cx::from_rat(p, &(self.a2[j] * Rat::from(delta.d[j])), &Rat::zero());
                for i in 0..g {
                    z = z.add(&tau.tau.rows[i][j].mul(&Cx::from_rat(p, &self.a1[i], &Rat::zero())));
                }
                z
            })
            .collect()
    }
}

impl Serialize for TorsionIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.a1.iter().chain(&self.a2).map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

/// Kernel settings.
#[derive(Debug, Clone, Copy)]
pub struct ThetaConfig {
    pub lambda_floor: f64,
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig { lambda_floor: DEFAULT_LAMBDA_FLOOR }
    }
}

/// Certified lower bound for the smallest eigenvalue of `Im tau`.
pub fn lambda_lower(tau: &SiegelPoint) -> f64 {
    let y = tau.tau.imag_part();
    let yf: Vec<Vec<f64>> = y.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
    let mut lam = min_eigenvalue(&yf) * (1.0 - 1e-6);
    while lam > 0.0 {
        let shifted: Vec<Vec<Float>> = y
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { Float::with_val(x.prec(), x - lam) } else { x.clone() }).collect())
            .collect();
        if cholesky_min_pivot(&shifted).is_some() {
            return lam;
        }
        lam /= 2.0;
    }
    0.0
}

/// `log2` of the tail `sum_{n >= r} (2n+4)^g (2 pi (n+1))^deriv exp(-pi lam n^2 + 2 pi c (n+1))`.
fn tail_log2(g: usize, lam: f64, c: f64, deriv: u32, r: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let log_a = |n: f64| {
        g as f64 * (2.0 * n + 4.0).ln() + deriv as f64 * (2.0 * pi * (n + 1.0)).ln() - pi * lam * n * n + 2.0 * pi * c * (n + 1.0)
    };
    let log_q = g as f64 * ((2.0 * r + 6.0) / (2.0 * r + 4.0)).ln() + deriv as f64 * ((r + 2.0) / (r + 1.0)).ln()
        - pi * lam * (2.0 * r + 1.0)
        + 2.0 * pi * c;
    if log_q >= -1e-3 || r < c / lam {
        return f64::INFINITY;
    }
    (log_a(r) - (1.0 - log_q.exp()).ln()) / std::f64::consts::LN_2 + 1.0
}

/// Smallest integer radius with tail below `2^{-target}`.
pub fn summation_radius(g: usize, lam: f64, c: f64, deriv: u32, target: u32) -> u64 {
    let mut r = 1u64;
    while tail_log2(g, lam, c, deriv, r as f64) > -(target as f64) {
        r += 1;
    }
    r
}

struct Prepared {
    g: usize,
    lam: f64,
    c: f64,
}

fn prepare(u: &[Cx], tau: &SiegelPoint, prec: u32, cfg: &ThetaConfig) -> Result<Prepared> {
    if prec < MIN_PREC {
        return Err(Error::PrecisionTooLow(prec));
    }
    let g = tau.genus();
    if u.len() != g {
        return Err(Error::Invalid("u has the wrong length".into()));
    }
    let lam = lambda_lower(tau);
    if lam < cfg.lambda_floor {
        return Err(Error::LambdaFloor { lambda: lam, floor: cfg.lambda_floor });
    }
    let c = u.iter().map(|z| z.im.to_f64().powi(2)).sum::<f64>().sqrt() * (1.0 + 1e-9) + 1e-300;
    Ok(Prepared { g, lam, c })
}

/// `sum_{w in k + Z^g, |w| <= R} (2 pi i w)^deriv exp(pi i w^t tau w + 2 pi i u.w)`, plus its error.
fn theta_sum(k: &ThetaChar, u: &[Cx], tau: &SiegelPoint, prec: u32, deriv: u32, radius: Option<u64>, cfg: &ThetaConfig) -> Result<BigComplex> {
    let pr = prepare(u, tau, prec, cfg)?;
    let g = pr.g;
    if deriv > 0 && g != 1 {
        return Err(Error::Invalid("u-derivatives are implemented for g = 1".into()));
    }
    let r = radius.unwrap_or_else(|| summation_radius(g, pr.lam, pr.c, deriv, prec + 8));
    let den = k.k.iter().fold(1, |acc, x| lcm(acc, *x.denom()));
    let kn: Vec<Int> = k.k.iter().map(|x| (x * Rat::from(den)).to_integer()).collect();
    let bound = r as Int + 1;
    let count_est = (2.0 * r as f64 + 3.0).powi(g as i32);
    let wp = prec + 24 + 2 * (count_est.log2().ceil() as u32) + 2 * deriv;
    let tau_w: Vec<Vec<Cx>> = tau.tau.rows.iter().map(|row| row.iter().map(|x| x.with_prec(wp)).collect()).collect();
    let u_w: Vec<Cx> = u.iter().map(|x| x.with_prec(wp)).collect();
    let pi_w = pi(wp);
    let two_pi = Float::with_val(wp, &pi_w * 2u32);
    let d2 = Float::with_val(wp, den * den);
    let dd = Float::with_val(wp, den);
    let rr = (r * r) as Int * den * den;
    let mut sum = Cx::zero(wp);
    let mut abs_sum = Float::new(30);
    let mut rounding = Float::new(30);
    let mut idx: Vec<Int> = vec![-bound; g];
    'outer: loop {
        let ws: Vec<Int> = (0..g).map(|i| kn[i] + den * idx[i]).collect();
        if ws.iter().map(|x| x * x).sum::<Int>() <= rr {
            let mut q = Cx::zero(wp);
            for i in 0..g {
                for j in 0..g {
                    let c = ws[i] * ws[j];
                    if c != 0 {
                        q = q.add(&tau_w[i][j].mul_int(c));
                    }
                }
            }
            let mut l = Cx::zero(wp);
            for i in 0..g {
                if ws[i] != 0 {
                    l = l.add(&u_w[i].mul_int(ws[i]));
                }
            }
            let e = Cx::new(
                Float::with_val(wp, &q.re / &d2) * &pi_w + Float::with_val(wp, &l.re / &dd) * &two_pi,
                Float::with_val(wp, &q.im / &d2) * &pi_w + Float::with_val(wp, &l.im / &dd) * &two_pi,
            );
            let ie = Cx::new(-e.im.clone(), e.re.clone());
            let mut term = ie.exp();
            if deriv > 0 {
                let f = Cx::new(Float::new(wp), Float::with_val(wp, &two_pi * ws[0]) / &dd);
                term = term.mul(&f.powu(deriv));
            }
            let tm = up(&term.abs());
            let emag = up(&(Float::with_val(wp, e.re.abs_ref()) + Float::with_val(wp, e.im.abs_ref())));
            let mut local = Float::with_val(30, &tm * (emag + 16 + 4 * (g * g) as u32 + 4 * deriv));
            local >>= wp as i32;
            rounding += local;
            abs_sum += &tm;
            sum = sum.add(&term);
        }
        let mut i = 0;
        loop {
            if i == g {
                break 'outer;
            }
            idx[i] += 1;
            if idx[i] <= bound {
                break;
            }
            idx[i] = -bound;
            i += 1;
        }
    }
    let mut acc = abs_sum.clone();
    acc *= count_est as f64 + 4.0;
    acc >>= wp as i32 - 2;
    let tail = Float::with_val(30, tail_log2(g, pr.lam, pr.c, deriv, r as f64)).exp2();
    let err = up(&(rounding + acc + up(&tail)));
    Ok(BigComplex::new(sum, err).with_prec(prec))
}

/// `theta^k(u; tau) = sum_{w in k + Z^g} exp(w^t tau w / 2 + u.w)` with `exp(t) = e^{2 pi i t}`.
pub fn theta(k: &ThetaChar, u: &[Cx], tau: &SiegelPoint, prec: u32) -> Result<BigComplex> {
    theta_sum(k, u, tau, prec, 0, None, &ThetaConfig::default())
}

pub fn theta_with(k: &ThetaChar, u: &[Cx], tau: &SiegelPoint, prec: u32, cfg: &ThetaConfig) -> Result<BigComplex> {
    theta_sum(k, u, tau, prec, 0, None, cfg)
}

/// Theta summed over an explicit radius, for truncation audits.
pub fn theta_radius(k: &ThetaChar, u: &[Cx], tau: &SiegelPoint, prec: u32, radius: u64) -> Result<BigComplex> {
    theta_sum(k, u, tau, prec, 0, Some(radius), &ThetaConfig::default())
}

/// The radius the kernel would choose.
pub fn default_radius(u: &[Cx], tau: &SiegelPoint, prec: u32) -> Result<u64> {
    let pr = prepare(u, tau, prec, &ThetaConfig::default())?;
    Ok(summation_radius(pr.g, pr.lam, pr.c, 0, prec + 8))
}

/// `d^r/du^r theta^k(u; tau)` for `r = 0..=order`, genus one.
pub fn theta_derivatives_g1(k: &Rat, u: &Cx, tau: &Cx, prec: u32, order: u32) -> Result<Vec<BigComplex>> {
    let t = SiegelPoint::scalar(tau.clone())?;
    let ch = ThetaChar::free(vec![*k]);
    (0..=order).map(|r| theta_sum(&ch, std::slice::from_ref(u), &t, prec, r, None, &ThetaConfig::default())).collect()
}

/// `theta^k(z) / theta^l(z)` at `z = a1 tau + a2 delta`.
pub fn theta_ratio(k: &ThetaChar, l: &ThetaChar, a: &TorsionIndex, tau: &SiegelPoint, delta: &TypeDelta, prec: u32) -> Result<BigComplex> {
    if k == l {
        return Ok(BigComplex::exact(Cx::one(prec)));
    }
    let z = a.point(tau, delta);
    let num = theta(k, &z, tau, prec)?;
    let den = theta(l, &z, tau, prec)?;
    num.div(&den)
}

/// `[theta^k(0; tau)]` over all characteristics of `delta`, lexicographic.
pub fn theta_null_vector(tau: &SiegelPoint, delta: &TypeDelta, prec: u32) -> Result<Vec<BigComplex>> {
    if !delta.embed_ok() {
        return Err(Error::Invalid(format!("type {:?} has d_1 < 3", delta.d)));
    }
    if tau.genus() != delta.genus() {
        return Err(Error::Invalid("tau and delta have different genus".into()));
    }
    let zero = vec![Cx::zero(prec); tau.genus()];
    ThetaChar::all(delta).iter().map(|k| theta(k, &zero, tau, prec)).collect()
}

/// Converts a `g x g` symmetric matrix of `f64` pairs into a Siegel point.
pub fn siegel_from_f64(m: &[Vec<(f64, f64)>], prec: u32) -> Result<SiegelPoint> {
    SiegelPoint::new(CMat::new(m.iter().map(|r| r.iter().map(|&(a, b)| Cx::from_f64(prec, a, b)).collect()).collect()))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
