//! Multiprecision complex scalars and small dense matrices.

use rug::float::{Constant, Round};
use rug::Float;

use crate::intmath::Int;
use crate::quadfield::Rat;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn rat_to_float(r: &Rat, prec: u32) -> Float {
    Float::with_val(prec, *r.numer()) / Float::with_val(prec, *r.denom())
}

/// Upper bound of `x` carried at low precision.
pub fn up(x: &Float) -> Float {
    Float::with_val_round(30, x, Round::Up).0
}

/// Serializes exact rationals as `"p/q"` strings.
pub mod rat_serde {
    use serde::Serializer;

    use crate::quadfield::Rat;

    pub fn vec<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn mat<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn one<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }
}

/// Complex number with `rug::Float` parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Cx::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Cx::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_int(prec: u32, re: Int) -> Self {
        Cx { re: Float::with_val(prec, re), im: Float::new(prec) }
    }

    pub fn from_rat(prec: u32, re: &Rat, im: &Rat) -> Self {
        Cx { re: rat_to_float(re, prec), im: rat_to_float(im, prec) }
    }

    pub fn real(x: Float) -> Self {
        let p = x.prec();
        Cx { re: x, im: Float::new(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Cx { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        Cx { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        Cx { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Cx {
        Cx { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn conj(&self) -> Cx {
        Cx { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        Cx { re: rr - ii, im: ri + ir }
    }

    pub fn sqr(&self) -> Cx {
        self.mul(self)
    }

    pub fn scale(&self, s: &Float) -> Cx {
        let p = self.prec().max(s.prec());
        Cx { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn mul_int(&self, n: Int) -> Cx {
        let p = self.prec();
        Cx { re: Float::with_val(p, &self.re * Float::with_val(p, n)), im: Float::with_val(p, &self.im * Float::with_val(p, n)) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn inv(&self) -> Cx {
        let n = self.norm_sqr();
        let p = self.prec();
        Cx { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) }
    }

    pub fn div(&self, o: &Cx) -> Cx {
        self.mul(&o.inv())
    }

    pub fn exp(&self) -> Cx {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let mut s = self.im.clone();
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        Cx { re: Float::with_val(p, &m * &c), im: m * s }
    }

    /// `e^{2 pi i z}`.
    pub fn exp2pii(&self) -> Cx {
        let p = self.prec();
        let tp = pi(p) * 2u32;
        Cx { re: -Float::with_val(p, &self.im * &tp), im: Float::with_val(p, &self.re * &tp) }.exp()
    }

    pub fn sin(&self) -> Cx {
        let p = self.prec();
        let mut s = self.re.clone();
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        let mut sh = self.im.clone();
        let mut ch = Float::new(p);
        sh.sinh_cosh_mut(&mut ch);
        Cx { re: s * ch, im: c * sh }
    }

    pub fn powu(&self, mut e: u32) -> Cx {
        let mut r = Cx::one(self.prec());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.sqr();
            e >>= 1;
        }
        r
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cx {
        let p = self.prec();
        let r = self.abs();
        let mut re = Float::with_val(p, &r + &self.re) / 2u32;
        re = re.sqrt();
        let mut im = Float::with_val(p, &r - &self.re) / 2u32;
        im = im.sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Cx { re, im }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `|self - o|_inf` over both parts.
    pub fn dist(&self, o: &Cx) -> Float {
        let d = self.sub(o);
        let a = d.re.abs();
        let b = d.im.abs();
        if a > b {
            a
        } else {
            b
        }
    }
}

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: Vec<Vec<Cx>>,
}

impl CMat {
    pub fn new(rows: Vec<Vec<Cx>>) -> Self {
        CMat { rows }
    }

    pub fn zeros(r: usize, c: usize, prec: u32) -> Self {
        CMat { rows: vec![vec![Cx::zero(prec); c]; r] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = CMat::zeros(n, n, prec);
        for i in 0..n {
            m.rows[i][i] = Cx::one(prec);
        }
        m
    }

    pub fn from_rat(m: &[Vec<Rat>], prec: u32) -> Self {
        let zero = Rat::from(0);
        CMat { rows: m.iter().map(|r| r.iter().map(|x| Cx::from_rat(prec, x, &zero)).collect()).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn prec(&self) -> u32 {
        self.rows.iter().flatten().map(|x| x.prec()).max().unwrap_or(53)
    }

    pub fn at(&self, i: usize, j: usize) -> &Cx {
        &self.rows[i][j]
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        let p = self.prec().max(o.prec());
        let mut out = CMat::zeros(self.nrows(), o.ncols(), p);
        for i in 0..self.nrows() {
            for j in 0..o.ncols() {
                let mut acc = Cx::zero(p);
                for k in 0..self.ncols() {
                    acc = acc.add(&self.rows[i][k].mul(&o.rows[k][j]));
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat { rows: self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect() }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat { rows: self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()).collect() }
    }

    pub fn neg(&self) -> CMat {
        CMat { rows: self.rows.iter().map(|r| r.iter().map(Cx::neg).collect()).collect() }
    }

    pub fn transpose(&self) -> CMat {
        CMat { rows: (0..self.ncols()).map(|j| (0..self.nrows()).map(|i| self.rows[i][j].clone()).collect()).collect() }
    }

    pub fn real_part(&self) -> Vec<Vec<Float>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.re.clone()).collect()).collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<Float>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.im.clone()).collect()).collect()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<CMat> {
        let n = self.nrows();
        let p = self.prec();
        let mut a = self.clone();
        let mut b = CMat::identity(n, p);
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a.rows[i][col].norm_sqr().partial_cmp(&a.rows[j][col].norm_sqr()).unwrap())?;
            if a.rows[piv][col].is_zero() {
                return None;
            }
            a.rows.swap(col, piv);
            b.rows.swap(col, piv);
            let inv = a.rows[col][col].inv();
            for j in 0..n {
                a.rows[col][j] = a.rows[col][j].mul(&inv);
                b.rows[col][j] = b.rows[col][j].mul(&inv);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a.rows[i][col].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = f.mul(&a.rows[col][j]);
                    a.rows[i][j] = a.rows[i][j].sub(&t);
                    let t = f.mul(&b.rows[col][j]);
                    b.rows[i][j] = b.rows[i][j].sub(&t);
                }
            }
        }
        Some(b)
    }

    /// Largest entrywise distance.
    pub fn dist(&self, o: &CMat) -> Float {
        let mut m = Float::new(self.prec());
        for (a, b) in self.rows.iter().flatten().zip(o.rows.iter().flatten()) {
            let d = a.dist(b);
            if d > m {
                m = d;
            }
        }
        m
    }

    pub fn to_f64(&self) -> Vec<Vec<(f64, f64)>> {
        self.rows.iter().map(|r| r.iter().map(Cx::to_f64).collect()).collect()
    }
}

/// Smallest Cholesky pivot of a symmetric real matrix, `None` if not positive definite.
pub fn cholesky_min_pivot(m: &[Vec<Float>]) -> Option<Float> {
    let n = m.len();
    let p = m.iter().flatten().map(|x| x.prec()).max().unwrap_or(53);
    let mut l = vec![vec![Float::new(p); n]; n];
    let mut min: Option<Float> = None;
    for i in 0..n {
        for j in 0..=i {
            let mut s = Float::with_val(p, &m[i][j]);
            for k in 0..j {
                s -= Float::with_val(p, &l[i][k] * &l[j][k]);
            }
            if i == j {
                if s <= 0 {
                    return None;
                }
                if min.as_ref().is_none_or(|mm| s < *mm) {
                    min = Some(s.clone());
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / &l[j][j];
            }
        }
    }
    min
}

/// Smallest eigenvalue of a symmetric real matrix (cyclic Jacobi in `f64`).
pub fn min_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i][j] * a[i][j];
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_ops() {
        let p = 128;
        let z = Cx::from_f64(p, 0.3, -1.2);
        let w = z.mul(&z.inv());
        assert!(w.dist(&Cx::one(p)) < 1e-35);
        let e = Cx::from_f64(p, 0.25, 0.0).exp2pii();
        assert!(e.dist(&Cx::i(p)) < 1e-35);
        let s = z.sqrt();
        assert!(s.sqr().dist(&z) < 1e-35);
        assert!(z.powu(5).dist(&z.mul(&z).mul(&z).mul(&z).mul(&z)) < 1e-35);
    }

    #[test]
    fn matrix_inverse_and_eigen() {
        let p = 128;
        let m = CMat::new(vec![
            vec![Cx::from_f64(p, 2.0, 1.0), Cx::from_f64(p, 0.5, 0.0)],
            vec![Cx::from_f64(p, -1.0, 0.25), Cx::from_f64(p, 0.0, 3.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).dist(&CMat::identity(2, p)) < 1e-35);
        let lam = min_eigenvalue(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((lam - 1.0).abs() < 1e-12);
        let y = vec![vec![Float::with_val(p, 2), Float::with_val(p, 1)], vec![Float::with_val(p, 1), Float::with_val(p, 2)]];
        assert!(cholesky_min_pivot(&y).is_some());
        let bad = vec![vec![Float::with_val(p, 1), Float::with_val(p, 2)], vec![Float::with_val(p, 2), Float::with_val(p, 1)]];
        assert!(cholesky_min_pivot(&bad).is_none());
    }
}
