use std::fmt;

use rug::float::Round;
use rug::Float;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{up, Cx};

/// A complex midpoint with a radius bounding the distance to the true value.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub v: Cx,
    pub err: Float,
}

fn add_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(30, a + b, Round::Up).0
}

fn mul_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(30, a * b, Round::Up).0
}

/// `|re| + |im|`, an upper bound for `|z|`, rounded up.
fn mag(z: &Cx) -> Float {
    add_up(&up(&z.re.clone().abs()), &up(&z.im.clone().abs()))
}

fn ulp_bound(m: &Float, prec: u32, extra: i32) -> Float {
    let mut r = m.clone();
    r >>= prec as i32 - extra;
    up(&r)
}

impl BigComplex {
    pub fn exact(v: Cx) -> Self {
        BigComplex { v, err: Float::new(30) }
    }

    pub fn new(v: Cx, err: Float) -> Self {
        BigComplex { v, err: up(&err) }
    }

    pub fn from_int(prec: u32, n: crate::intmath::Int) -> Self {
        BigComplex::exact(Cx::from_int(prec, n))
    }

    pub fn prec(&self) -> u32 {
        self.v.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let v = self.v.with_prec(prec);
        let r = ulp_bound(&mag(&v), prec, 2);
        BigComplex { v, err: add_up(&self.err, &r) }
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        let v = self.v.add(&o.v);
        let r = ulp_bound(&mag(&v), v.prec(), 1);
        BigComplex { err: add_up(&add_up(&self.err, &o.err), &r), v }
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex { v: self.v.neg(), err: self.err.clone() }
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        let (ma, mb) = (mag(&self.v), mag(&o.v));
        let v = self.v.mul(&o.v);
        let prop = add_up(&add_up(&mul_up(&ma, &o.err), &mul_up(&mb, &self.err)), &mul_up(&self.err, &o.err));
        let r = ulp_bound(&mul_up(&ma, &mb), v.prec(), 2);
        BigComplex { v, err: add_up(&prop, &r) }
    }

    pub fn sqr(&self) -> BigComplex {
        self.mul(self)
    }

    pub fn powu(&self, e: u32) -> BigComplex {
        let mut r = BigComplex::exact(Cx::one(self.prec()));
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn mul_int(&self, n: crate::intmath::Int) -> BigComplex {
        self.mul(&BigComplex::from_int(self.prec(), n))
    }

    /// Lower bound for `|z|` after subtracting the radius; `None` when the ball contains zero.
    pub fn abs_lower(&self) -> Option<Float> {
        let a = self.v.re.clone().abs();
        let b = self.v.im.clone().abs();
        let m = if a > b { a } else { b };
        let low = Float::with_val_round(30, &m - &self.err, Round::Down).0;
        (low > 0).then_some(low)
    }

    /// Division; fails with `Pole` unless `|o| > 2 err(o)`.
    pub fn div(&self, o: &BigComplex) -> Result<BigComplex> {
        let low = o.abs_lower().ok_or(Error::Pole)?;
        if low <= o.err {
            return Err(Error::Pole);
        }
        let v = self.v.div(&o.v);
        let mv = mag(&v);
        let num = add_up(&self.err, &mul_up(&mv, &o.err));
        let prop = Float::with_val_round(30, &num / &low, Round::Up).0;
        let r = ulp_bound(&mv, v.prec(), 4);
        Ok(BigComplex { v, err: add_up(&prop, &r) })
    }

    pub fn inv(&self) -> Result<BigComplex> {
        BigComplex::exact(Cx::one(self.prec())).div(self)
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex { v: self.v.conj(), err: self.err.clone() }
    }

    /// Whether the two balls are at distance at most `tol` plus both radii.
    pub fn overlaps(&self, o: &BigComplex, tol: &Float) -> bool {
        let d = self.v.dist(&o.v);
        d <= add_up(&add_up(&self.err, &o.err), tol)
    }

    /// `log2` of the radius, rounded up; `i64::MIN` for an exact value.
    pub fn err2exp(&self) -> i64 {
        if self.err.is_zero() {
            return i64::MIN;
        }
        let l = Float::with_val_round(30, self.err.log2_ref(), Round::Up).0;
        l.to_f64().ceil() as i64
    }

    /// Certified decimal digits of the larger part.
    pub fn certified_digits(&self) -> usize {
        if self.err.is_zero() {
            return (self.prec() as f64 * std::f64::consts::LOG10_2) as usize;
        }
        let m = mag(&self.v);
        if m.is_zero() || m <= self.err {
            return 1;
        }
        let q = Float::with_val(30, &m / &self.err).log10().to_f64().floor();
        (q.max(1.0) as usize).min((self.prec() as f64 * std::f64::consts::LOG10_2) as usize)
    }

    fn part_string(&self, x: &Float) -> String {
        let digits = self.certified_digits();
        x.to_string_radix(10, Some(digits.max(1)))
    }

    pub fn re_string(&self) -> String {
        self.part_string(&self.v.re)
    }

    pub fn im_string(&self) -> String {
        self.part_string(&self.v.im)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.v.to_f64()
    }
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("re", &self.re_string())?;
        m.serialize_entry("im", &self.im_string())?;
        let e = self.err2exp();
        m.serialize_entry("err2exp", &if e == i64::MIN { -(self.prec() as i64) } else { e })?;
        m.end()
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i (err 2^{})", self.re_string(), self.im_string(), self.err2exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_grows_and_contains() {
        let p = 64;
        let a = BigComplex::new(Cx::from_f64(p, 1.0, 2.0), Float::with_val(30, 1e-10));
        let b = BigComplex::new(Cx::from_f64(p, -0.5, 0.25), Float::with_val(30, 1e-12));
        let c = a.mul(&b);
        assert!(c.err > 0.5e-10 && c.err > b.err);
        let back = c.div(&b).unwrap();
        assert!(back.overlaps(&a, &Float::new(30)));
        let z = BigComplex::new(Cx::from_f64(p, 1e-20, 0.0), Float::with_val(30, 1e-10));
        assert_eq!(a.div(&z), Err(Error::Pole));
    }

    #[test]
    fn printing_respects_error() {
        let p = 128;
        let a = BigComplex::new(Cx::from_f64(p, 1.0 / 3.0, 0.0), Float::with_val(30, 1e-6));
        assert!(a.re_string().len() < 15);
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["err2exp"], -19);
    }
}
