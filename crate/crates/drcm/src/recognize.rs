//! Certification of numerical values as algebraic numbers through integer relations.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lll::lll_reduce;
use crate::numeric::Cx;
use crate::quadfield::QuadField;
use crate::theta::BigComplex;

/// Recognition budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecognitionConfig {
    pub prec: u32,
    pub maxdeg: usize,
    pub height_bits: u32,
    /// Largest number of root subsets examined by the irreducibility check.
    pub subset_budget: usize,
}

impl Default for RecognitionConfig {
    fn default() -> Self {
        RecognitionConfig { prec: 256, maxdeg: 24, height_bits: 128, subset_budget: 200_000 }
    }
}

/// A numerical value together with its certified minimal polynomial, when one was found.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicValue {
    pub approx: BigComplex,
    /// Ascending coefficients, primitive with positive leading coefficient; empty when unrecognized.
    pub minpoly: Vec<Integer>,
    /// `log2` of the bound on `|minpoly(approx)|`.
    pub residual_log2: f64,
    pub irreducible: bool,
}

impl AlgebraicValue {
    pub fn unrecognized(approx: BigComplex) -> Self {
        AlgebraicValue { approx, minpoly: vec![], residual_log2: f64::INFINITY, irreducible: false }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len().saturating_sub(1)
    }

    pub fn is_recognized(&self) -> bool {
        !self.minpoly.is_empty()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.minpoly.last()
    }

    /// Newton refinement of the approximation as a root of the minimal polynomial.
    pub fn refine(&self, prec: u32) -> Option<Cx> {
        if !self.is_recognized() {
            return None;
        }
        let coeffs: Vec<Cx> = self.minpoly.iter().map(|c| Cx::real(Float::with_val(prec, c))).collect();
        let deriv: Vec<Cx> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i128)).collect();
        let eval = |cs: &[Cx], z: &Cx| cs.iter().rev().fold(Cx::zero(prec), |acc, c| acc.mul(z).add(c));
        let mut z = self.approx.v.with_prec(prec);
        let mut bits = (-self.approx.err2exp()).clamp(8, i64::from(prec)) as u32;
        for _ in 0..64 {
            let d = eval(&deriv, &z);
            if d.is_zero() {
                return None;
            }
            z = z.sub(&eval(&coeffs, &z).div(&d));
            if bits >= prec {
                break;
            }
            bits *= 2;
        }
        (z.dist(&self.approx.v.with_prec(prec)) <= Float::with_val(30, &self.approx.err) * 2u32 + (Float::with_val(30, 1) >> 40)).then_some(z)
    }

    /// The value as an exact rational, when of degree one.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.degree() == 1).then(|| Rational::from((-self.minpoly[0].clone(), self.minpoly[1].clone())))
    }
}

pub fn int_json(x: &Integer) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for AlgebraicValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraicValue", 5)?;
        st.serialize_field("approx", &self.approx)?;
        st.serialize_field("minpoly", &self.minpoly.iter().map(int_json).collect::<Vec<_>>())?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("residual_log2", &(self.residual_log2.is_finite().then_some(self.residual_log2)))?;
        st.serialize_field("irreducible", &self.irreducible)?;
        st.end()
    }
}

/// `P(z)` as a ball.
pub fn eval_poly(poly: &[Integer], z: &BigComplex) -> BigComplex {
    let p = z.prec();
    let mut acc = BigComplex::exact(Cx::zero(p));
    for c in poly.iter().rev() {
        acc = acc.mul(z).add(&BigComplex::exact(Cx::real(Float::with_val(p, c))));
    }
    acc
}

fn height_log2(poly: &[Integer]) -> f64 {
    poly.iter().map(|c| c.significant_bits()).max().unwrap_or(0) as f64
}

fn upper_log2(b: &BigComplex) -> f64 {
    let m = b.v.abs().to_f64() + b.err.to_f64();
    if m == 0.0 {
        f64::NEG_INFINITY
    } else {
        m.log2()
    }
}

fn normalize(mut v: Vec<Integer>) -> Vec<Integer> {
    while v.last().is_some_and(|c| *c == 0) {
        v.pop();
    }
    let g = v.iter().fold(Integer::new(), |g, c| g.gcd(c));
    if g != 0 {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    if v.last().is_some_and(|c| *c < 0) {
        for c in v.iter_mut() {
            *c = -c.clone();
        }
    }
    v
}

/// Short integer relations among `1, z, ..., z^deg`, shortest first.
fn relations(z: &BigComplex, deg: usize, scale_bits: u32) -> Vec<Vec<Integer>> {
    let p = z.prec();
    let scale = Float::with_val(p, 1) << scale_bits as i32;
    let mut pw = Cx::one(p);
    let mut rows = Vec::with_capacity(deg + 1);
    for i in 0..=deg {
        let mut r = vec![Integer::new(); deg + 3];
        r[i] = Integer::from(1);
        r[deg + 1] = Float::with_val(p, &pw.re * &scale).to_integer().unwrap_or_default();
        r[deg + 2] = Float::with_val(p, &pw.im * &scale).to_integer().unwrap_or_default();
        rows.push(r);
        pw = pw.mul(&z.v);
    }
    lll_reduce(&mut rows);
    rows.into_iter().map(|r| r[..=deg].to_vec()).collect()
}

/// Finds the minimal polynomial of `z` by degree scan `1..=maxdeg`.
pub fn recognize(z: &BigComplex, cfg: &RecognitionConfig) -> Result<AlgebraicValue> {
    let certified = (-z.err2exp()).min(z.prec() as i64).max(16) as u32;
    let threshold = -(cfg.prec as f64) / 2.0;
    let mag = z.v.abs().to_f64().max(1.0).log2();
    for deg in 1..=cfg.maxdeg {
        let lost = (deg as f64 * mag).ceil() as u32 + 8;
        if certified <= lost + 16 {
            break;
        }
        let scale_bits = certified - lost;
        for cand in relations(z, deg, scale_bits).into_iter().take(2) {
            let poly = normalize(cand);
            if poly.len() != deg + 1 {
                continue;
            }
            let h = height_log2(&poly);
            if h > cfg.height_bits as f64 || (h + mag) * (deg + 1) as f64 + 32.0 > certified as f64 {
                continue;
            }
            let res = upper_log2(&eval_poly(&poly, z));
            if res < threshold + h {
                let irreducible = is_irreducible(&poly, cfg)?;
                if !irreducible {
                    continue;
                }
                return Ok(AlgebraicValue { approx: z.clone(), minpoly: poly, residual_log2: res, irreducible });
            }
        }
    }
    Err(Error::RecognitionFailed(format!("no relation up to degree {} for {}", cfg.maxdeg, z)))
}

/// Like [`recognize`], but keeps the value unrecognized on failure.
pub fn recognize_or_keep(z: &BigComplex, cfg: &RecognitionConfig) -> AlgebraicValue {
    recognize(z, cfg).unwrap_or_else(|_| AlgebraicValue::unrecognized(z.clone()))
}

/// Exact division over `Z`; `None` when the remainder is nonzero or the quotient is not integral.
pub fn div_exact(p: &[Integer], q: &[Integer]) -> Option<Vec<Integer>> {
    if q.len() > p.len() {
        return None;
    }
    let mut r = p.to_vec();
    let lq = q.last()?;
    let mut out = vec![Integer::new(); p.len() - q.len() + 1];
    for i in (0..out.len()).rev() {
        let top = &r[i + q.len() - 1];
        if !top.is_divisible(lq) {
            return None;
        }
        let c = Integer::from(top / lq);
        for (j, qj) in q.iter().enumerate() {
            r[i + j] -= Integer::from(&c * qj);
        }
        out[i] = c;
    }
    r.iter().all(|x| *x == 0).then_some(out)
}

fn derivative(p: &[Integer]) -> Vec<Integer> {
    p.iter().enumerate().skip(1).map(|(i, c)| Integer::from(c * i as u32)).collect()
}

fn rat_gcd(a: &[Integer], b: &[Integer]) -> usize {
    let to_q = |v: &[Integer]| v.iter().map(Rational::from).collect::<Vec<_>>();
    let (mut x, mut y) = (to_q(a), to_q(b));
    let trim = |v: &mut Vec<Rational>| {
        while v.last().is_some_and(|c| *c == 0) {
            v.pop();
        }
    };
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        while x.len() >= y.len() {
            let c = Rational::from(x.last().unwrap() / y.last().unwrap());
            let off = x.len() - y.len();
            for (j, yj) in y.iter().enumerate() {
                x[off + j] -= Rational::from(&c * yj);
            }
            trim(&mut x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len().saturating_sub(1)
}

/// Complex roots by simultaneous Weierstrass iteration.
pub fn complex_roots(poly: &[Integer], prec: u32) -> Vec<Cx> {
    let n = poly.len() - 1;
    let lead = Float::with_val(prec, &poly[n]);
    let monic: Vec<Cx> = poly.iter().map(|c| Cx::real(Float::with_val(prec, c) / &lead)).collect();
    let eval = |z: &Cx| monic.iter().rev().fold(Cx::zero(prec), |acc, c| acc.mul(z).add(c));
    let bound = 1.0 + monic[..n].iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max);
    let seed = Cx::from_f64(prec, 0.4 * bound.min(1e6) / bound.max(1.0), 0.9);
    let mut z: Vec<Cx> = (0..n).map(|k| seed.powu(k as u32).mul(&Cx::from_f64(prec, bound, 0.0))).collect();
    let tol = Float::with_val(prec, 1) >> (prec as i32 - 16);
    for _ in 0..5000 {
        let mut done = true;
        for i in 0..n {
            let mut den = Cx::one(prec);
            for j in 0..n {
                if j != i {
                    den = den.mul(&z[i].sub(&z[j]));
                }
            }
            if den.is_zero() {
                z[i] = z[i].add(&Cx::from_f64(prec, 1e-3, 1e-3));
                done = false;
                continue;
            }
            let step = eval(&z[i]).div(&den);
            if step.abs() > Float::with_val(prec, &tol * z[i].abs().max(&Float::with_val(prec, 1))) {
                done = false;
            }
            z[i] = z[i].sub(&step);
        }
        if done {
            break;
        }
    }
    z
}

/// Irreducibility over `Q`: squarefree, and no proper subset of roots yields an integral factor.
pub fn is_irreducible(poly: &[Integer], cfg: &RecognitionConfig) -> Result<bool> {
    let n = poly.len() - 1;
    if n <= 1 {
        return Ok(n == 1);
    }
    if rat_gcd(poly, &derivative(poly)) > 0 {
        return Ok(false);
    }
    let prec = cfg.prec.max(128) + 64 * n as u32;
    let roots = complex_roots(poly, prec);
    let lead = poly[n].clone();
    let mut seen = 0usize;
    for size in 1..=n / 2 {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            seen += 1;
            if seen > cfg.subset_budget {
                return Err(Error::RecognitionFailed(format!("irreducibility check exceeded {} subsets", cfg.subset_budget)));
            }
            let mut f = vec![Cx::real(Float::with_val(prec, &lead))];
            for &i in &idx {
                let mut next = vec![Cx::zero(prec); f.len() + 1];
                for (k, c) in f.iter().enumerate() {
                    next[k + 1] = next[k + 1].add(c);
                    next[k] = next[k].sub(&c.mul(&roots[i]));
                }
                f = next;
            }
            let near = f.iter().all(|c| {
                let r = Float::with_val(prec, c.re.round_ref());
                Float::with_val(prec, &c.re - &r).abs() < 1e-6 && c.im.clone().abs() < 1e-6
            });
            if near {
                let cand = normalize(f.iter().map(|c| c.re.to_integer().unwrap_or_default()).collect());
                if cand.len() == size + 1 && div_exact(poly, &cand).is_some() {
                    return Ok(false);
                }
            }
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < n - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
    Ok(true)
}

/// Best rational approximation with denominator at most `max_den`, by continued fractions.
pub fn best_rational(x: &Float, max_den: &Integer) -> Rational {
    let p = x.prec();
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut y = x.clone();
    for _ in 0..4 * p {
        let a = y.clone().floor().to_integer().unwrap_or_default();
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > *max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = Float::with_val(p, &y - &a);
        if frac.is_zero() || frac < Float::with_val(p, 1) >> (p as i32 - 8) {
            break;
        }
        y = Float::with_val(p, 1) / frac;
    }
    Rational::from((h1, k1))
}

/// An element `x + y omega` of `K` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KElement {
    pub x: Rational,
    pub y: Rational,
}

impl KElement {
    pub fn to_cx(&self, k: QuadField, prec: u32) -> Cx {
        let (wr, wi) = omega_parts(k, prec);
        let y = Float::with_val(prec, &self.y);
        Cx::new(Float::with_val(prec, &self.x) + Float::with_val(prec, &y * &wr), y * wi)
    }

    pub fn is_integral(&self) -> bool {
        *self.x.denom() == 1 && *self.y.denom() == 1
    }
}

impl Serialize for KElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

/// `(Re omega, Im omega)`.
pub fn omega_parts(k: QuadField, prec: u32) -> (Float, Float) {
    k.omega_float(prec)
}

/// Recognizes `z` as `x + y omega` with bounded denominators; returns the element and `log2` of the residual.
pub fn recognize_in_field(z: &BigComplex, k: QuadField, max_den: &Integer) -> Result<(KElement, f64)> {
    let p = z.prec();
    let (wr, wi) = omega_parts(k, p);
    let y = Float::with_val(p, &z.v.im / &wi);
    let x = Float::with_val(p, &z.v.re - Float::with_val(p, &y * &wr));
    let e = KElement { x: best_rational(&x, max_den), y: best_rational(&y, max_den) };
    let back = BigComplex::exact(e.to_cx(k, p));
    let res = upper_log2(&z.sub(&back));
    Ok((e, res))
}

/// `2^bits` as an integer.
pub fn pow2(bits: u32) -> Integer {
    Integer::from(2).pow(bits)
}
