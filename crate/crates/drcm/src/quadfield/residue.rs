use super::{OVec, QuadField, QuadIdeal};
use crate::abelian::{AbelianGroupPresentation, EnumeratedGroup};
use crate::error::{Error, Result};
use crate::intmath::{modinv, Int};

/// A canonical residue class of `O_K / f`.
pub type Residue = OVec;

/// The finite ring `O_K / f`.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    field: QuadField,
    modulus: QuadIdeal,
}

impl ResidueRing {
    pub fn new(modulus: &QuadIdeal) -> Result<Self> {
        if !modulus.is_integral() {
            return Err(Error::Invalid("residue ring needs an integral modulus".into()));
        }
        Ok(ResidueRing { field: modulus.field(), modulus: modulus.clone() })
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.modulus
    }

    pub fn size(&self) -> Int {
        self.modulus.norm_int()
    }

    pub fn reduce(&self, v: OVec) -> Residue {
        self.modulus.reduce(v)
    }

    pub fn mul(&self, x: Residue, y: Residue) -> Residue {
        self.reduce(self.field.omul(x, y))
    }

    pub fn one(&self) -> Residue {
        self.reduce((1, 0))
    }

    pub fn zero(&self) -> Residue {
        (0, 0)
    }

    /// All residues in canonical order.
    pub fn elements(&self) -> Vec<Residue> {
        let (a, c) = (self.modulus.a(), self.modulus.c());
        let mut out = Vec::with_capacity((a * c) as usize);
        for y in 0..c {
            for x in 0..a {
                out.push((x, y));
            }
        }
        out
    }

    pub fn is_unit(&self, x: Residue) -> bool {
        if self.modulus.is_one() {
            return true;
        }
        if x == (0, 0) {
            return false;
        }
        let id = QuadIdeal::principal_int(self.field, x).expect("nonzero");
        id.is_coprime(&self.modulus)
    }

    /// Inverse of a unit residue.
    pub fn inverse(&self, x: Residue) -> Option<Residue> {
        let n = self.field.onorm(x);
        if let Some(ninv) = modinv(n, self.modulus.a()) {
            let c = self.field.oconj(x);
            return Some(self.reduce((c.0 * ninv, c.1 * ninv)));
        }
        let one = self.one();
        self.elements().into_iter().find(|&y| self.mul(x, y) == one)
    }
}

/// The unit group `(O_K / f)^x` with discrete logarithms.
#[derive(Debug, Clone)]
pub struct ResidueUnits {
    ring: ResidueRing,
    group: EnumeratedGroup<Residue>,
}

impl ResidueUnits {
    pub fn new(modulus: &QuadIdeal) -> Result<Self> {
        let ring = ResidueRing::new(modulus)?;
        let units: Vec<Residue> = ring.elements().into_iter().filter(|&x| ring.is_unit(x)).collect();
        let r2 = ring.clone();
        let group = EnumeratedGroup::build(ring.one(), units, move |x, y| r2.mul(*x, *y));
        Ok(ResidueUnits { ring, group })
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn divisors(&self) -> &[Int] {
        &self.group.divisors
    }

    /// Discrete logarithm of an integral element coprime to the modulus.
    pub fn dlog(&self, x: OVec) -> Option<Vec<Int>> {
        self.group.dlog(&self.ring.reduce(x)).cloned()
    }

    pub fn elements(&self) -> Vec<Residue> {
        let mut v: Vec<Residue> = self.group.elements().map(|(e, _)| *e).collect();
        v.sort_by_key(|&(x, y)| (y, x));
        v
    }

    pub fn presentation(&self) -> AbelianGroupPresentation<Residue> {
        self.group.presentation()
    }
}
