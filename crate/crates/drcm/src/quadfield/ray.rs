use std::collections::BTreeMap;

use super::{enumerate_ideals, ClassGroup, OVec, QuadField, QuadIdeal, ResidueUnits};
use crate::abelian::{AbelianGroupPresentation, SmithBasis};
use crate::error::{Error, Result};
use crate::intmath::Int;

/// Ideals enumerated when searching for ray class representatives.
const REP_SEARCH_BUDGET: usize = 400_000;

/// The ray class group `C_f`, assembled from the exact sequence
/// `(O/f)^x / O^x -> C_f -> Cl -> 1`. Imaginary quadratic fields have no real places, so
/// the strict and ordinary ray class groups agree.
#[derive(Debug, Clone)]
pub struct RayClassGroup {
    field: QuadField,
    modulus: QuadIdeal,
    cl: ClassGroup,
    res: ResidueUnits,
    cl_gens: Vec<QuadIdeal>,
    basis: SmithBasis,
    generators: Vec<QuadIdeal>,
}

impl RayClassGroup {
    pub fn new(modulus: &QuadIdeal) -> Result<Self> {
        let cl = ClassGroup::new(modulus.field());
        Self::with_class_group(modulus, cl)
    }

    pub fn with_class_group(modulus: &QuadIdeal, cl: ClassGroup) -> Result<Self> {
        let field = modulus.field();
        let res = ResidueUnits::new(modulus)?;
        let r = res.divisors().len();
        let hs: Vec<Int> = cl.divisors().to_vec();
        let s = hs.len();
        let mut cl_gens = Vec::with_capacity(s);
        for j in 0..s {
            let e: Vec<Int> = (0..s).map(|i| Int::from(i == j)).collect();
            cl_gens.push(cl.small_rep_coprime(&e, modulus)?);
        }
        let mut rel: Vec<Vec<Int>> = Vec::new();
        for (i, &m) in res.divisors().iter().enumerate() {
            let mut row = vec![0; r + s];
            row[i] = m;
            rel.push(row);
        }
        let zeta = *field.units().get(1).unwrap_or(&(1, 0));
        let mut row = res.dlog(zeta).expect("units are coprime to f");
        row.resize(r + s, 0);
        rel.push(row);
        for (j, g) in cl_gens.iter().enumerate() {
            let p = g.pow(hs[j] as u32);
            let alpha = p.is_principal()?.expect("g^h is principal").as_ovec().expect("integral generator");
            let mut row: Vec<Int> = res.dlog(alpha).expect("coprime").iter().map(|x| -x).collect();
            row.resize(r + s, 0);
            row[r + j] = hs[j];
            rel.push(row);
        }
        let basis = SmithBasis::new(&rel, r + s);
        let mut g = RayClassGroup { field, modulus: modulus.clone(), cl, res, cl_gens, basis, generators: vec![] };
        let targets: Vec<Vec<Int>> = (0..g.basis.divisors.len())
            .map(|i| (0..g.basis.divisors.len()).map(|j| Int::from(i == j)).collect())
            .collect();
        let reps = g.first_representatives(&targets)?;
        g.generators = targets.iter().map(|t| reps[t].clone()).collect();
        Ok(g)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.modulus
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.cl
    }

    pub fn residue_units(&self) -> &ResidueUnits {
        &self.res
    }

    pub fn divisors(&self) -> &[Int] {
        &self.basis.divisors
    }

    pub fn order(&self) -> usize {
        self.basis.divisors.iter().product::<Int>() as usize
    }

    /// `h * |(O/f)^x| / |image of O^x|`, the order predicted by the exact sequence.
    pub fn order_from_sequence(&self) -> usize {
        let ring = self.res.ring();
        let mut image: Vec<OVec> = self.field.units().iter().map(|&u| ring.reduce(u)).collect();
        image.sort();
        image.dedup();
        self.cl.order() * self.res.order() / image.len()
    }

    pub fn presentation(&self) -> AbelianGroupPresentation<QuadIdeal> {
        AbelianGroupPresentation {
            divisors: self.basis.divisors.iter().map(|&e| e as u64).collect(),
            generators: self.generators.clone(),
        }
    }

    /// Class of the principal ideal generated by a residue coprime to `f`.
    pub fn image_of_residue(&self, u: OVec) -> Vec<Int> {
        let mut raw = self.res.dlog(u).expect("coprime residue");
        raw.resize(raw.len() + self.cl_gens.len(), 0);
        self.basis.apply(&raw)
    }

    /// Discrete logarithm of a fractional ideal coprime to `f`.
    pub fn dlog(&self, id: &QuadIdeal) -> Result<Vec<Int>> {
        if id.field() != self.field {
            return Err(Error::MismatchedFields(id.field().disc(), self.field.disc()));
        }
        let num = QuadIdeal::from_hnf(self.field, id.a(), id.b(), id.c(), 1)?;
        let mut v = self.dlog_integral(&num)?;
        if id.denom() != 1 {
            let d = self.image_of_residue((id.denom(), 0));
            v = v.iter().zip(&d).map(|(x, y)| x - y).collect();
            v = v.iter().zip(&self.basis.divisors).map(|(x, e)| x.rem_euclid(*e)).collect();
        }
        Ok(v)
    }

    fn dlog_integral(&self, id: &QuadIdeal) -> Result<Vec<Int>> {
        if !id.is_coprime(&self.modulus) {
            return Err(Error::Invalid(format!("{id} is not coprime to {}", self.modulus)));
        }
        let v = self.cl.dlog(id);
        let hs = self.cl.divisors();
        let mut b = id.clone();
        let mut exps = Vec::with_capacity(v.len());
        for (j, g) in self.cl_gens.iter().enumerate() {
            let e = (hs[j] - v[j]).rem_euclid(hs[j]);
            b = b.mul(&g.pow(e as u32))?;
            exps.push(e);
        }
        let beta = b.is_principal()?.expect("trivial class").as_ovec().expect("integral generator");
        let mut raw = self.res.dlog(beta).expect("coprime generator");
        raw.extend(exps.iter().map(|e| -e));
        Ok(self.basis.apply(&raw))
    }

    /// Smallest integral ideals coprime to `f` hitting each requested class.
    pub fn first_representatives(&self, targets: &[Vec<Int>]) -> Result<BTreeMap<Vec<Int>, QuadIdeal>> {
        let mut out = BTreeMap::new();
        if targets.is_empty() {
            return Ok(out);
        }
        for id in enumerate_ideals(self.field).take(REP_SEARCH_BUDGET) {
            if !id.is_coprime(&self.modulus) {
                continue;
            }
            let v = self.dlog_integral(&id)?;
            if targets.contains(&v) && !out.contains_key(&v) {
                out.insert(v, id);
                if out.len() == targets.len() {
                    return Ok(out);
                }
            }
        }
        Err(Error::EnumerationBudget(format!("ray class representatives modulo {}", self.modulus)))
    }

    /// The first `count` integral ideals coprime to `f` in every class.
    pub fn representatives(&self, count: usize) -> Result<BTreeMap<Vec<Int>, Vec<QuadIdeal>>> {
        let total = self.order();
        let mut out: BTreeMap<Vec<Int>, Vec<QuadIdeal>> = BTreeMap::new();
        let mut full = 0;
        for id in enumerate_ideals(self.field).take(REP_SEARCH_BUDGET) {
            if !id.is_coprime(&self.modulus) {
                continue;
            }
            let v = self.dlog_integral(&id)?;
            let slot = out.entry(v).or_default();
            if slot.len() < count {
                slot.push(id);
                if slot.len() == count {
                    full += 1;
                    if full == total {
                        return Ok(out);
                    }
                }
            }
        }
        Err(Error::EnumerationBudget(format!("ray class representatives modulo {}", self.modulus)))
    }

    /// Image of a class under the projection `C_f -> C_g` for `g | f`.
    pub fn project_to(&self, other: &RayClassGroup, v: &[Int]) -> Result<Vec<Int>> {
        if !other.modulus.divides(&self.modulus) {
            return Err(Error::NonDivisible { small: other.modulus.to_string(), big: self.modulus.to_string() });
        }
        let reps = self.first_representatives(&[v.to_vec()])?;
        other.dlog(&reps[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_examples() {
        let k = QuadField::gaussian();
        let c2 = RayClassGroup::new(&QuadIdeal::rational(k, 2)).unwrap();
        assert_eq!(c2.order(), 1);
        let c3 = RayClassGroup::new(&QuadIdeal::rational(k, 3)).unwrap();
        assert_eq!(c3.divisors(), &[2]);
        assert_eq!(c3.order_from_sequence(), 2);
        let c1 = RayClassGroup::new(&QuadIdeal::unit(k)).unwrap();
        assert_eq!(c1.order(), 1);
    }

    #[test]
    fn trivial_modulus_is_class_group() {
        for d in [5, 23, 14] {
            let k = QuadField::new(d).unwrap();
            let c = RayClassGroup::new(&QuadIdeal::unit(k)).unwrap();
            let cl = ClassGroup::new(k);
            assert_eq!(c.divisors(), cl.divisors());
        }
    }

    #[test]
    fn orders_match_exact_sequence() {
        for d in [1, 2, 3, 5, 7, 23] {
            let k = QuadField::new(d).unwrap();
            for f in enumerate_ideals(k).take(25) {
                let c = RayClassGroup::new(&f).unwrap();
                assert_eq!(c.order(), c.order_from_sequence(), "d = {d}, f = {f}");
                for (i, g) in c.presentation().generators.iter().enumerate() {
                    let v = c.dlog(g).unwrap();
                    assert!(v.iter().enumerate().all(|(j, &x)| x == Int::from(i == j)));
                }
            }
        }
    }
}
