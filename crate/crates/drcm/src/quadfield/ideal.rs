use std::cmp::Ordering;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{OVec, QuadElem, QuadField, Rat};
use crate::error::{Error, Result};
use crate::intmath::{factor_int, gcd, kronecker_prime, lcm, modinv, pow_mod, square_root_exact, xgcd, Int};

pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;
pub const DEFAULT_PRINCIPAL_BOUND: Int = 1_000_000_000_000_000_000;

/// A nonzero fractional ideal `(1/denom) * (Z*a + Z*(b + c*omega))` in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    field: QuadField,
    a: Int,
    b: Int,
    c: Int,
    denom: Int,
}

/// HNF `(a, b, c)` of the Z-lattice spanned by `vecs`; `None` when the rank is below 2.
pub(crate) fn hnf(vecs: &[OVec]) -> Option<(Int, Int, Int)> {
    let mut v: OVec = (0, 0);
    let mut xs: Int = 0;
    for &w in vecs {
        if w.1 == 0 {
            xs = gcd(xs, w.0);
        } else if v.1 == 0 {
            xs = gcd(xs, v.0);
            v = w;
        } else {
            let (g, s, t) = xgcd(v.1, w.1);
            let nv = (s * v.0 + t * w.0, g);
            let z = (w.1 / g) * v.0 - (v.1 / g) * w.0;
            xs = gcd(xs, z);
            v = nv;
        }
    }
    if v.1 < 0 {
        v = (-v.0, -v.1);
    }
    if xs == 0 || v.1 == 0 {
        return None;
    }
    Some((xs, v.0.rem_euclid(xs), v.1))
}

impl QuadIdeal {
    /// The ideal with the given HNF triple, validated.
    pub fn from_hnf(field: QuadField, a: Int, b: Int, c: Int, denom: Int) -> Result<Self> {
        if a <= 0 || c <= 0 || denom <= 0 || a % c != 0 || b % c != 0 || b < 0 || b >= a {
            return Err(Error::Invalid(format!("[{a},{b},{c}]/{denom} is not an HNF triple")));
        }
        let id = QuadIdeal { field, a, b, c, denom };
        let w = field.omul((b, c), (0, 1));
        if !id.lattice_contains((0, a)) || !id.lattice_contains(w) {
            return Err(Error::Invalid(format!("[{a},{b},{c}] is not closed under omega")));
        }
        Ok(id.normalized())
    }

    fn raw(field: QuadField, (a, b, c): (Int, Int, Int), denom: Int) -> Self {
        QuadIdeal { field, a, b, c, denom }.normalized()
    }

    fn normalized(mut self) -> Self {
        let g = gcd(gcd(self.a, self.b), gcd(self.c, self.denom));
        if g > 1 {
            self.a /= g;
            self.b /= g;
            self.c /= g;
            self.denom /= g;
        }
        self
    }

    pub fn unit(field: QuadField) -> Self {
        QuadIdeal { field, a: 1, b: 0, c: 1, denom: 1 }
    }

    /// The integral ideal generated by the given elements.
    pub fn from_generators(field: QuadField, gens: &[OVec]) -> Result<Self> {
        let mut vecs = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            vecs.push(g);
            vecs.push(field.omul(g, (0, 1)));
        }
        hnf(&vecs).map(|t| QuadIdeal::raw(field, t, 1)).ok_or(Error::ZeroIdeal)
    }

    pub fn principal(field: QuadField, e: &QuadElem) -> Result<Self> {
        if e.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let den = lcm(*e.x.denom(), *e.y.denom());
        let g = ((e.x * Rat::from(den)).to_integer(), (e.y * Rat::from(den)).to_integer());
        let mut id = QuadIdeal::from_generators(field, &[g])?;
        id.denom = den;
        Ok(id.normalized())
    }

    pub fn principal_int(field: QuadField, g: OVec) -> Result<Self> {
        QuadIdeal::from_generators(field, &[g])
    }

    pub fn rational(field: QuadField, n: Int) -> Self {
        QuadIdeal::principal_int(field, (n.abs(), 0)).expect("nonzero")
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn a(&self) -> Int {
        self.a
    }

    pub fn b(&self) -> Int {
        self.b
    }

    pub fn c(&self) -> Int {
        self.c
    }

    pub fn denom(&self) -> Int {
        self.denom
    }

    /// Z-basis `[a, b + c*omega]` of the numerator lattice.
    pub fn basis(&self) -> [OVec; 2] {
        [(self.a, 0), (self.b, self.c)]
    }

    pub fn is_integral(&self) -> bool {
        self.denom == 1
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.c == 1 && self.denom == 1
    }

    pub fn norm(&self) -> Rat {
        Rat::new(self.a * self.c, self.denom * self.denom)
    }

    /// Norm of an integral ideal as an integer.
    pub fn norm_int(&self) -> Int {
        debug_assert!(self.is_integral());
        self.a * self.c
    }

    fn check_field(&self, o: &QuadIdeal) -> Result<()> {
        if self.field != o.field {
            return Err(Error::MismatchedFields(self.field.disc(), o.field.disc()));
        }
        Ok(())
    }

    pub fn mul(&self, o: &QuadIdeal) -> Result<QuadIdeal> {
        self.check_field(o)?;
        let k = self.field;
        let mut vecs = Vec::with_capacity(4);
        for x in self.basis() {
            for y in o.basis() {
                vecs.push(k.omul(x, y));
            }
        }
        let t = hnf(&vecs).ok_or(Error::ZeroIdeal)?;
        Ok(QuadIdeal::raw(k, t, self.denom * o.denom))
    }

    pub fn pow(&self, e: u32) -> QuadIdeal {
        let mut r = QuadIdeal::unit(self.field);
        for _ in 0..e {
            r = r.mul(self).expect("same field");
        }
        r
    }

    pub fn conj(&self) -> QuadIdeal {
        let k = self.field;
        let t = hnf(&[(self.a, 0), k.oconj((self.b, self.c))]).expect("rank 2");
        QuadIdeal::raw(k, t, self.denom)
    }

    pub fn inverse(&self) -> QuadIdeal {
        let cj = self.conj();
        let n = self.a * self.c;
        let d = self.denom;
        QuadIdeal::raw(self.field, (cj.a * d, cj.b * d, cj.c * d), n * cj.denom)
    }

    /// `self * o^{-1}`.
    pub fn div(&self, o: &QuadIdeal) -> Result<QuadIdeal> {
        self.mul(&o.inverse())
    }

    /// Sum (gcd) of two ideals.
    pub fn add(&self, o: &QuadIdeal) -> Result<QuadIdeal> {
        self.check_field(o)?;
        let den = lcm(self.denom, o.denom);
        let (s1, s2) = (den / self.denom, den / o.denom);
        let vecs = [
            (self.a * s1, 0),
            (self.b * s1, self.c * s1),
            (o.a * s2, 0),
            (o.b * s2, o.c * s2),
        ];
        Ok(QuadIdeal::raw(self.field, hnf(&vecs).expect("rank 2"), den))
    }

    pub fn gcd(&self, o: &QuadIdeal) -> Result<QuadIdeal> {
        self.add(o)
    }

    fn lattice_contains(&self, v: OVec) -> bool {
        v.1 % self.c == 0 && (v.0 - (v.1 / self.c) * self.b) % self.a == 0
    }

    pub fn contains(&self, e: &QuadElem) -> bool {
        let x = e.x * Rat::from(self.denom);
        let y = e.y * Rat::from(self.denom);
        x.is_integer() && y.is_integer() && self.lattice_contains((x.to_integer(), y.to_integer()))
    }

    pub fn contains_int(&self, v: OVec) -> bool {
        self.is_integral() && self.lattice_contains(v)
    }

    /// `self | o`, i.e. `o ⊆ self`.
    pub fn divides(&self, o: &QuadIdeal) -> bool {
        self.field == o.field
            && o.basis().iter().all(|&v| {
                self.contains(&QuadElem::new(Rat::new(v.0, o.denom), Rat::new(v.1, o.denom)))
            })
    }

    pub fn is_coprime(&self, o: &QuadIdeal) -> bool {
        self.add(o).map(|s| s.is_one()).unwrap_or(false)
    }

    /// A generator when the ideal is principal, searching norm-form solutions in a bounded box.
    pub fn is_principal(&self) -> Result<Option<QuadElem>> {
        self.is_principal_bounded(DEFAULT_PRINCIPAL_BOUND)
    }

    pub fn is_principal_bounded(&self, bound: Int) -> Result<Option<QuadElem>> {
        let k = self.field;
        let n = self.a * self.c;
        if n > bound {
            return Err(Error::PrincipalBound(n.to_string()));
        }
        let dabs = -(k.disc() as Int);
        let t = k.t();
        let four_n = 4 * n;
        let mut kk: Int = 0;
        loop {
            let mut hit = None;
            for v in [self.c * kk, -self.c * kk] {
                let s = four_n - dabs * v * v;
                if s < 0 {
                    continue;
                }
                if let Some(r) = square_root_exact(s) {
                    for sr in [r, -r] {
                        let twice_u = sr - t * v;
                        if twice_u % 2 != 0 {
                            continue;
                        }
                        let u = twice_u / 2;
                        if self.lattice_contains((u, v)) {
                            hit = Some((u, v));
                            break;
                        }
                    }
                }
                if hit.is_some() || kk == 0 {
                    break;
                }
            }
            if let Some((u, v)) = hit {
                let den = Rat::from(self.denom);
                return Ok(Some(QuadElem::new(Rat::from(u) / den, Rat::from(v) / den)));
            }
            kk += 1;
            let v = self.c * kk;
            if dabs * v * v > four_n {
                return Ok(None);
            }
        }
    }

    /// Prime ideals above the rational prime `p`, sorted canonically.
    pub fn primes_above(field: QuadField, p: Int) -> Vec<QuadIdeal> {
        let disc = field.disc() as Int;
        match kronecker_prime(disc, p) {
            -1 => vec![QuadIdeal::rational(field, p)],
            s => {
                let roots = omega_roots_mod(field, p);
                let mut out: Vec<QuadIdeal> = roots
                    .iter()
                    .map(|&r| QuadIdeal::from_generators(field, &[(p, 0), (-r, 1)]).expect("nonzero"))
                    .collect();
                out.sort();
                out.dedup();
                debug_assert_eq!(out.len(), if s == 0 { 1 } else { 2 });
                out
            }
        }
    }

    pub fn factor(&self) -> Result<Vec<(QuadIdeal, u32)>> {
        self.factor_bounded(DEFAULT_FACTOR_BOUND)
    }

    /// Prime factorisation of an integral ideal.
    pub fn factor_bounded(&self, bound: u64) -> Result<Vec<(QuadIdeal, u32)>> {
        if !self.is_integral() {
            return Err(Error::Invalid("factor_ideal expects an integral ideal".into()));
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for (p, _) in factor_int(self.norm_int(), bound)? {
            for q in QuadIdeal::primes_above(self.field, p) {
                let qi = q.inverse();
                let mut e = 0;
                loop {
                    let t = rest.mul(&qi)?;
                    if !t.is_integral() {
                        break;
                    }
                    rest = t;
                    e += 1;
                }
                if e > 0 {
                    out.push((q, e));
                }
            }
        }
        debug_assert!(rest.is_one());
        out.sort();
        Ok(out)
    }

    /// All integral divisors of an integral ideal, sorted canonically.
    pub fn divisors(&self) -> Result<Vec<QuadIdeal>> {
        let fac = self.factor()?;
        let mut out = vec![QuadIdeal::unit(self.field)];
        for (p, e) in fac {
            let mut next = Vec::new();
            for d in &out {
                let mut cur = d.clone();
                for _ in 0..=e {
                    next.push(cur.clone());
                    cur = cur.mul(&p)?;
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Canonical sort key: norm first, then the HNF triple.
    pub fn sort_key(&self) -> (Rat, Int, Int, Int, Int) {
        (self.norm(), self.a, self.b, self.c, self.denom)
    }

    /// Literal "[a,b,c]" (or "[a,b,c]/denom").
    /// Parses `(g)`, `(g1, g2)` or the HNF literal `[a,b,c]` / `[a,b,c]/denom`.
    pub fn parse(field: QuadField, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot parse ideal {s:?}"));
        if let Some(body) = s.strip_prefix('[') {
            let (inner, denom) = match body.split_once(']') {
                Some((i, "")) => (i, 1),
                Some((i, d)) => (i, d.strip_prefix('/').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?),
                None => return Err(bad()),
            };
            let v: Vec<Int> = inner.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let [a, b, c] = v[..] else { return Err(bad()) };
            return QuadIdeal::from_hnf(field, a, b, c, denom);
        }
        let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
        let gens: Vec<QuadElem> = inner.split(',').map(|g| QuadElem::parse(&field, g)).collect::<Result<_>>()?;
        if gens.len() == 1 {
            return QuadIdeal::principal(field, &gens[0]);
        }
        let ints: Vec<OVec> = gens.iter().map(|g| g.as_ovec().ok_or_else(bad)).collect::<Result<_>>()?;
        QuadIdeal::from_generators(field, &ints)
    }

    pub fn literal(&self) -> String {
        if self.denom == 1 {
            format!("[{},{},{}]", self.a, self.b, self.c)
        } else {
            format!("[{},{},{}]/{}", self.a, self.b, self.c, self.denom)
        }
    }

    /// Reduces an integral element modulo this integral ideal to its canonical residue.
    pub fn reduce(&self, v: OVec) -> OVec {
        let y = v.1.rem_euclid(self.c);
        let q = (v.1 - y) / self.c;
        let x = (v.0 - q * self.b).rem_euclid(self.a);
        (x, y)
    }
}

/// Roots of `x^2 - t x + n` modulo the prime `p`.
fn omega_roots_mod(k: QuadField, p: Int) -> Vec<Int> {
    let (t, n) = (k.t(), k.n());
    if p == 2 {
        return (0..2).filter(|&x| (x * x - t * x + n).rem_euclid(2) == 0).collect();
    }
    let disc = (t * t - 4 * n).rem_euclid(p);
    let inv2 = modinv(2, p).expect("odd prime");
    let Some(s) = sqrt_mod(disc, p) else { return vec![] };
    let mut r: Vec<Int> = [s, p - s]
        .iter()
        .map(|&x| ((t + x) * inv2).rem_euclid(p))
        .collect();
    r.sort();
    r.dedup();
    r
}

/// Tonelli-Shanks square root modulo an odd prime.
fn sqrt_mod(a: Int, p: Int) -> Option<Int> {
    let a = a.rem_euclid(p);
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

impl PartialOrd for QuadIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    disc: i64,
    a: Int,
    b: Int,
    c: Int,
    denom: Int,
}

impl Serialize for QuadIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealJson { disc: self.field.disc(), a: self.a, b: self.b, c: self.c, denom: self.denom }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadIdeal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = IdealJson::deserialize(d)?;
        let k = QuadField::from_disc(j.disc).map_err(serde::de::Error::custom)?;
        QuadIdeal::from_hnf(k, j.a, j.b, j.c, j.denom).map_err(serde::de::Error::custom)
    }
}

/// Integral ideals of norm exactly `n`, in HNF order.
pub fn ideals_of_norm(k: QuadField, n: Int) -> Vec<QuadIdeal> {
    let mut out = Vec::new();
    let mut c = 1;
    while c * c <= n {
        if n % (c * c) == 0 {
            let a1 = n / (c * c);
            for b1 in 0..a1 {
                if k.onorm((b1, 1)) % a1 == 0 {
                    out.push(QuadIdeal { field: k, a: c * a1, b: c * b1, c, denom: 1 });
                }
            }
        }
        c += 1;
    }
    out.sort();
    out
}

/// Iterator over all integral ideals in canonical order (norm, then HNF).
pub struct IdealEnumerator {
    field: QuadField,
    norm: Int,
    buf: std::vec::IntoIter<QuadIdeal>,
}

impl Iterator for IdealEnumerator {
    type Item = QuadIdeal;
    fn next(&mut self) -> Option<QuadIdeal> {
        loop {
            if let Some(x) = self.buf.next() {
                return Some(x);
            }
            self.norm += 1;
            self.buf = ideals_of_norm(self.field, self.norm).into_iter();
        }
    }
}

impl IdealEnumerator {
    pub fn current_norm(&self) -> Int {
        self.norm
    }
}

pub fn enumerate_ideals(k: QuadField) -> IdealEnumerator {
    IdealEnumerator { field: k, norm: 0, buf: Vec::new().into_iter() }
}

impl QuadElem {
    /// True when the element is a unit of `O_K`.
    pub fn is_unit(&self, k: &QuadField) -> bool {
        self.is_integral() && k.norm(self).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi() -> QuadField {
        QuadField::gaussian()
    }

    #[test]
    fn literals_round_trip() {
        let k = QuadField::gaussian();
        let two = QuadIdeal::rational(k, 2);
        assert_eq!(QuadIdeal::parse(k, "(2)").unwrap(), two);
        assert_eq!(QuadIdeal::parse(k, &two.literal()).unwrap(), two);
        assert_eq!(QuadIdeal::parse(k, "(2+i)").unwrap(), QuadIdeal::principal_int(k, (2, 1)).unwrap());
        assert_eq!(QuadIdeal::parse(k, "(1 - i)").unwrap(), QuadIdeal::principal_int(k, (1, 1)).unwrap());
        let k5 = QuadField::new(5).unwrap();
        let p = QuadIdeal::parse(k5, "(2, 1+w)").unwrap();
        assert_eq!(p.norm_int(), 2);
        assert_eq!(QuadIdeal::parse(k5, &p.literal()).unwrap(), p);
        assert!(QuadIdeal::parse(k5, "(1+i)").is_err());
        assert!(QuadIdeal::parse(k, "[2,1]").is_err());
        let half = QuadIdeal::parse(k, "(1/2)").unwrap();
        assert_eq!(QuadIdeal::parse(k, &half.literal()).unwrap(), half);
    }

    #[test]
    fn product_examples() {
        let k = zi();
        let p = QuadIdeal::principal_int(k, (1, 1)).unwrap();
        assert_eq!(p.mul(&p).unwrap(), QuadIdeal::rational(k, 2));
        assert_eq!(p.norm(), Rat::from(2));
        assert_eq!(QuadIdeal::rational(k, 7).norm(), Rat::from(49));
        assert_eq!(QuadIdeal::unit(k).norm(), Rat::from(1));
        assert_eq!(p.mul(&QuadIdeal::unit(k)).unwrap(), p);
        assert_eq!(p.mul(&p.inverse()).unwrap(), QuadIdeal::unit(k));
    }

    #[test]
    fn factor_examples() {
        let k = zi();
        let f2 = QuadIdeal::rational(k, 2).factor().unwrap();
        assert_eq!(f2, vec![(QuadIdeal::principal_int(k, (1, 1)).unwrap(), 2)]);
        let f3 = QuadIdeal::rational(k, 3).factor().unwrap();
        assert_eq!(f3, vec![(QuadIdeal::rational(k, 3), 1)]);
        let f5 = QuadIdeal::rational(k, 5).factor().unwrap();
        assert_eq!(f5.len(), 2);
        let mut expected = vec![
            QuadIdeal::principal_int(k, (2, 1)).unwrap(),
            QuadIdeal::principal_int(k, (2, -1)).unwrap(),
        ];
        expected.sort();
        assert_eq!(f5.iter().map(|x| x.0.clone()).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn principality() {
        let k = zi();
        let p = QuadIdeal::principal_int(k, (1, 1)).unwrap();
        let g = p.is_principal().unwrap().unwrap();
        assert_eq!(QuadIdeal::principal(k, &g).unwrap(), p);
        let k5 = QuadField::new(5).unwrap();
        let q = QuadIdeal::from_generators(k5, &[(2, 0), (1, 1)]).unwrap();
        assert_eq!(q.norm(), Rat::from(2));
        assert!(q.is_principal().unwrap().is_none());
        assert!(q.mul(&q).unwrap().is_principal().unwrap().is_some());
        let g = q.mul(&q.inverse()).unwrap().is_principal().unwrap().unwrap();
        assert!(g.is_unit(&k5));
    }

    #[test]
    fn enumeration_counts() {
        // number of ideals of norm n in Z[i] is sum_{d|n} chi_{-4}(d)
        let k = zi();
        for n in 1..60 {
            let expected: Int = crate::intmath::divisors(n)
                .into_iter()
                .map(kronecker_prime_like)
                .sum();
            assert_eq!(ideals_of_norm(k, n).len() as Int, expected, "n = {n}");
        }
    }

    fn kronecker_prime_like(d: Int) -> Int {
        match d % 4 {
            1 => 1,
            3 => -1,
            _ => 0,
        }
    }

    #[test]
    fn json_round_trip() {
        let k = QuadField::new(5).unwrap();
        let q = QuadIdeal::from_generators(k, &[(2, 0), (1, 1)]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"disc":-20,"a":2,"b":1,"c":1,"denom":1}"#);
        let back: QuadIdeal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
