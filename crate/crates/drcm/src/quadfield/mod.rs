//! Exact arithmetic in imaginary quadratic fields `K = Q(sqrt(-d))`.

mod classgroup;
mod ideal;
mod ray;
mod residue;

pub use classgroup::{reduce_form, reduced_forms, ClassGroup, Form};
pub use ideal::{enumerate_ideals, IdealEnumerator, QuadIdeal, DEFAULT_FACTOR_BOUND, DEFAULT_PRINCIPAL_BOUND};
pub use ray::RayClassGroup;
pub use residue::{Residue, ResidueRing, ResidueUnits};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmath::{is_squarefree, Int};

pub type Rat = Ratio<Int>;

/// An integral element `x + y*omega` given by its coordinates.
pub type OVec = (Int, Int);

/// `K = Q(sqrt(-d))` with ring of integers `Z[omega]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 || !is_squarefree(d as Int) {
            return Err(Error::BadField(d));
        }
        Ok(QuadField { d })
    }

    pub fn from_disc(disc: i64) -> Result<Self> {
        let d = if disc % 4 == 0 { -disc / 4 } else { -disc };
        let k = QuadField::new(d)?;
        if k.disc() != disc {
            return Err(Error::Invalid(format!("{disc} is not a fundamental discriminant")));
        }
        Ok(k)
    }

    pub fn gaussian() -> Self {
        QuadField { d: 1 }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        if self.d % 4 == 3 {
            -self.d
        } else {
            -4 * self.d
        }
    }

    /// Trace of omega (0 or 1).
    pub fn t(&self) -> Int {
        Int::from(self.d % 4 == 3)
    }

    /// Norm of omega; `omega^2 = t*omega - n`.
    pub fn n(&self) -> Int {
        if self.d % 4 == 3 {
            (1 + self.d as Int) / 4
        } else {
            self.d as Int
        }
    }

    pub fn unit_count(&self) -> usize {
        match self.d {
            1 => 4,
            3 => 6,
            _ => 2,
        }
    }

    /// The roots of unity in `O_K`, starting at 1 and ordered by powers of a generator.
    pub fn units(&self) -> Vec<OVec> {
        let gen: OVec = match self.d {
            1 => (0, 1),
            3 => (0, 1),
            _ => (-1, 0),
        };
        let mut out = vec![(1, 0)];
        let mut cur = gen;
        while cur != (1, 0) {
            out.push(cur);
            cur = self.omul(cur, gen);
        }
        out
    }

    pub fn omul(&self, a: OVec, b: OVec) -> OVec {
        let (t, n) = (self.t(), self.n());
        let yy = a.1 * b.1;
        (a.0 * b.0 - n * yy, a.0 * b.1 + a.1 * b.0 + t * yy)
    }

    pub fn onorm(&self, a: OVec) -> Int {
        a.0 * a.0 + self.t() * a.0 * a.1 + self.n() * a.1 * a.1
    }

    pub fn oconj(&self, a: OVec) -> OVec {
        (a.0 + self.t() * a.1, -a.1)
    }

    pub fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        let (t, n) = (Rat::from(self.t()), Rat::from(self.n()));
        let yy = a.y * b.y;
        QuadElem::new(a.x * b.x - n * yy, a.x * b.y + a.y * b.x + t * yy)
    }

    pub fn norm(&self, a: &QuadElem) -> Rat {
        a.x * a.x + Rat::from(self.t()) * a.x * a.y + Rat::from(self.n()) * a.y * a.y
    }

    pub fn trace(&self, a: &QuadElem) -> Rat {
        Rat::from(2) * a.x + Rat::from(self.t()) * a.y
    }

    pub fn conj(&self, a: &QuadElem) -> QuadElem {
        QuadElem::new(a.x + Rat::from(self.t()) * a.y, -a.y)
    }

    pub fn inv(&self, a: &QuadElem) -> Option<QuadElem> {
        let n = self.norm(a);
        if n.is_zero() {
            return None;
        }
        let c = self.conj(a);
        Some(QuadElem::new(c.x / n, c.y / n))
    }

    /// Complex embedding of omega with positive imaginary part, as `(re, im)` in f64.
    pub fn omega_f64(&self) -> (f64, f64) {
        let s = (self.d as f64).sqrt();
        if self.d % 4 == 3 {
            (0.5, s / 2.0)
        } else {
            (0.0, s)
        }
    }

    /// Complex embedding of omega at `prec` bits.
    pub fn omega_float(&self, prec: u32) -> (rug::Float, rug::Float) {
        let s = rug::Float::with_val(prec, self.d).sqrt();
        if self.d % 4 == 3 {
            (rug::Float::with_val(prec, 0.5), s / 2u32)
        } else {
            (rug::Float::with_val(prec, 0), s)
        }
    }

    pub fn name(&self) -> String {
        if self.d == 1 {
            "Q(i)".to_string()
        } else {
            format!("Q(sqrt(-{}))", self.d)
        }
    }
}

/// An element `x + y*omega` of `K` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub x: Rat,
    pub y: Rat,
}

impl QuadElem {
    pub fn new(x: Rat, y: Rat) -> Self {
        QuadElem { x, y }
    }

    pub fn from_ints(x: Int, y: Int) -> Self {
        QuadElem { x: Rat::from(x), y: Rat::from(y) }
    }

    pub fn one() -> Self {
        QuadElem { x: Rat::one(), y: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn as_ovec(&self) -> Option<OVec> {
        self.is_integral().then(|| (self.x.to_integer(), self.y.to_integer()))
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(&self, r: Rat) -> QuadElem {
        QuadElem::new(self.x * r, self.y * r)
    }

    /// Complex value at `prec` bits.
    pub fn to_float(&self, k: &QuadField, prec: u32) -> (rug::Float, rug::Float) {
        let (wr, wi) = k.omega_float(prec);
        let x = rat_float(&self.x, prec);
        let y = rat_float(&self.y, prec);
        (x + wr * &y, wi * y)
    }

    /// Parses `x + y*w` style literals; `w`, `omega` and `i` (for `d = 1`) denote the generator.
    pub fn parse(k: &QuadField, s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot parse field element {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with(['/', '*']) {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut out = QuadElem::new(Rat::zero(), Rat::zero());
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let gen = ["*omega", "omega", "*w", "w", "*i", "i"].iter().find_map(|g| body.strip_suffix(g).map(|c| (c, *g)));
            let (coef, is_gen) = match gen {
                Some((_, g)) if g.ends_with('i') && k.d() != 1 => return Err(bad()),
                Some((c, _)) => (c, true),
                None => (body, false),
            };
            let mut r = if coef.is_empty() {
                Rat::one()
            } else {
                coef.parse::<Rat>().map_err(|_| bad())?
            };
            if neg {
                r = -r;
            }
            let term = if is_gen { QuadElem::new(Rat::zero(), r) } else { QuadElem::new(r, Rat::zero()) };
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn display(&self, k: &QuadField) -> String {
        let w = if k.d() == 1 { "i" } else { "w" };
        match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => format!("{}", self.x),
            (true, false) => format!("{}*{}", self.y, w),
            _ => format!("{} + {}*{}", self.x, self.y, w),
        }
    }
}

pub fn rat_float(r: &Rat, prec: u32) -> rug::Float {
    let n = rug::Integer::from(*r.numer());
    let d = rug::Integer::from(*r.denom());
    rug::Float::with_val(prec, n) / rug::Float::with_val(prec, d)
}

pub fn ideal_mul(a: &QuadIdeal, b: &QuadIdeal) -> Result<QuadIdeal> {
    a.mul(b)
}

pub fn ideal_norm(a: &QuadIdeal) -> Rat {
    a.norm()
}

pub fn factor_ideal(a: &QuadIdeal) -> Result<Vec<(QuadIdeal, u32)>> {
    a.factor()
}

pub fn is_principal(a: &QuadIdeal) -> Result<Option<QuadElem>> {
    a.is_principal()
}

pub fn class_group(k: QuadField) -> ClassGroup {
    ClassGroup::new(k)
}

pub fn ray_class_group(f: &QuadIdeal) -> Result<RayClassGroup> {
    RayClassGroup::new(f)
}

pub fn residue_units(f: &QuadIdeal) -> Result<ResidueUnits> {
    ResidueUnits::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_invariants() {
        for d in [1, 2, 3, 5, 7, 11, 15, 23] {
            let k = QuadField::new(d).unwrap();
            let expected = if d % 4 == 3 { -d } else { -4 * d };
            assert_eq!(k.disc(), expected);
            assert_eq!(k.units().len(), k.unit_count());
            for u in k.units() {
                assert_eq!(k.onorm(u), 1);
            }
            assert_eq!(QuadField::from_disc(k.disc()).unwrap(), k);
        }
        assert!(QuadField::new(4).is_err());
        assert!(QuadField::new(0).is_err());
    }

    #[test]
    fn element_arithmetic() {
        let k = QuadField::new(5).unwrap();
        let a = QuadElem::from_ints(2, 3);
        let b = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &b), QuadElem::one());
        assert_eq!(k.norm(&a), Rat::from(4 + 45));
        assert_eq!(k.trace(&a), Rat::from(4));
    }
}
