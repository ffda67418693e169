use std::collections::BTreeMap;

use serde::Serialize;

use super::{DRMonoidTable, MonoidCongruence};
use crate::abelian::AbelianGroupPresentation;
use crate::error::{Error, Result};
use crate::intmath::{modinv, Int};
use crate::quadfield::{ClassGroup, OVec, QuadField, QuadIdeal, RayClassGroup, Residue, ResidueUnits};

/// A point `[rho, s]` of `(O/N) x_{(O/N)^x} C_N`, stored in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdelicElement {
    pub rho: Residue,
    pub s: Vec<Int>,
}

/// Precomputed data for moving between `DR_{NO}` and the fiber product.
#[derive(Debug, Clone)]
pub struct AdelicContext {
    field: QuadField,
    n: Int,
    modulus: QuadIdeal,
    cl: ClassGroup,
    ray: RayClassGroup,
    units: ResidueUnits,
    unit_images: Vec<(Residue, Vec<Int>)>,
    class_reps: BTreeMap<Vec<Int>, QuadIdeal>,
    alt_reps: BTreeMap<Vec<Int>, QuadIdeal>,
}

impl AdelicContext {
    pub fn new(k: QuadField, n: Int) -> Result<Self> {
        if n < 1 {
            return Err(Error::Invalid(format!("level N = {n} must be positive")));
        }
        let modulus = QuadIdeal::rational(k, n);
        let cl = ClassGroup::new(k);
        let ray = RayClassGroup::with_class_group(&modulus, cl.clone())?;
        let units = ResidueUnits::new(&modulus)?;
        let unit_images = units.elements().into_iter().map(|u| (u, ray.image_of_residue(u))).collect();
        let mut class_reps = BTreeMap::new();
        let mut alt_reps = BTreeMap::new();
        for (v, r) in ray.representatives(2)? {
            class_reps.insert(v.clone(), r[0].clone());
            alt_reps.insert(v, r[1].clone());
        }
        Ok(AdelicContext { field: k, n, modulus, cl, ray, units, unit_images, class_reps, alt_reps })
    }

    /// Context matching a table whose conductor is `NO`.
    pub fn for_table(t: &DRMonoidTable) -> Result<Self> {
        let f = t.conductor();
        if f.b() != 0 || f.c() != f.a() {
            return Err(Error::Invalid(format!("conductor {f} is not of the form NO")));
        }
        Self::new(t.field(), f.a())
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn level(&self) -> Int {
        self.n
    }

    pub fn ray(&self) -> &RayClassGroup {
        &self.ray
    }

    pub fn residue_units(&self) -> &ResidueUnits {
        &self.units
    }

    pub fn unit_images(&self) -> &[(Residue, Vec<Int>)] {
        &self.unit_images
    }

    fn reduce_s(&self, s: &[Int]) -> Vec<Int> {
        s.iter().zip(self.ray.divisors()).map(|(x, e)| x.rem_euclid(*e)).collect()
    }

    /// Lexicographically smallest point of the orbit `(rho u, s + [u])`.
    pub fn canonical(&self, rho: Residue, s: &[Int]) -> AdelicElement {
        let ring = self.units.ring();
        self.unit_images
            .iter()
            .map(|(u, img)| {
                let s2: Vec<Int> = s.iter().zip(img).map(|(a, b)| a + b).collect();
                AdelicElement { rho: ring.mul(rho, *u), s: self.reduce_s(&s2) }
            })
            .min()
            .expect("unit group is nonempty")
    }

    pub fn mul(&self, x: &AdelicElement, y: &AdelicElement) -> AdelicElement {
        let s: Vec<Int> = x.s.iter().zip(&y.s).map(|(a, b)| a + b).collect();
        self.canonical(self.units.ring().mul(x.rho, y.rho), &s)
    }

    /// All points of the fiber product.
    pub fn elements(&self) -> Vec<AdelicElement> {
        let pres: AbelianGroupPresentation<()> =
            AbelianGroupPresentation { divisors: self.ray.divisors().iter().map(|&e| e as u64).collect(), generators: vec![] };
        let mut out: Vec<AdelicElement> = self
            .units
            .ring()
            .elements()
            .into_iter()
            .flat_map(|rho| pres.all_vectors().into_iter().map(move |s| (rho, s)))
            .map(|(rho, s)| self.canonical(rho, &s))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// A lift of `rho` to `O` that is nonzero.
    pub fn lift(&self, rho: Residue) -> OVec {
        if rho == (0, 0) {
            (self.n, 0)
        } else {
            rho
        }
    }

    /// `gcd((rho), NO)`.
    pub fn dbar(&self, rho: Residue) -> Result<QuadIdeal> {
        QuadIdeal::principal_int(self.field, self.lift(rho))?.add(&self.modulus)
    }

    /// Writes `A = gamma c^{-1}` with `c` coprime to `N`, giving `[gamma N(c)^{-1}, -[conj c]]`.
    pub fn encode(&self, a: &QuadIdeal) -> Result<AdelicElement> {
        if !a.is_integral() {
            return Err(Error::Invalid(format!("{a} is not integral")));
        }
        let v: Vec<Int> = self.cl.dlog(a).iter().zip(self.cl.divisors()).map(|(x, e)| (-x).rem_euclid(*e)).collect();
        let c = self.cl.small_rep_coprime(&v, &self.modulus)?;
        let gamma = a.mul(&c)?.is_principal()?.and_then(|g| g.as_ovec()).ok_or_else(|| {
            Error::Verification(format!("{a} * {c} has no integral generator"))
        })?;
        let m = modinv(c.norm_int(), self.n).expect("c is coprime to N");
        let ring = self.units.ring();
        let rho = ring.reduce((gamma.0 * m, gamma.1 * m));
        let s: Vec<Int> = self.ray.dlog(&c.conj())?.iter().map(|x| -x).collect();
        Ok(self.canonical(rho, &s))
    }

    /// The ideal `rho~ b` with `[b] = -s` in `C_N`.
    pub fn decode_ideal(&self, x: &AdelicElement) -> Result<QuadIdeal> {
        let neg = self.reduce_s(&x.s.iter().map(|v| -v).collect::<Vec<_>>());
        let b = self.class_reps.get(&neg).ok_or_else(|| Error::Invalid(format!("{:?} is not a class of C_N", x.s)))?;
        QuadIdeal::principal_int(self.field, self.lift(x.rho))?.mul(b)
    }

    /// Integral ideal coprime to `N` representing a class of `C_N`.
    pub fn class_rep(&self, s: &[Int]) -> &QuadIdeal {
        &self.class_reps[&self.reduce_s(s)]
    }

    /// The next smallest integral ideal coprime to `N` in the same class as [`Self::class_rep`].
    pub fn alt_class_rep(&self, s: &[Int]) -> &QuadIdeal {
        &self.alt_reps[&self.reduce_s(s)]
    }
}

pub fn adelic_encode(ctx: &AdelicContext, t: &DRMonoidTable, x: usize) -> Result<AdelicElement> {
    ctx.encode(t.rep(x))
}

pub fn adelic_decode(ctx: &AdelicContext, t: &DRMonoidTable, x: &AdelicElement) -> Result<usize> {
    t.index_of(&ctx.decode_ideal(x)?)
}

/// `Gal(K_{S_rho}/K)` modeled as `C_{NO dbar^{-1}}`.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionFieldGalois {
    pub n: Int,
    pub dbar: QuadIdeal,
    pub group: AbelianGroupPresentation<QuadIdeal>,
}

pub fn torsion_field_galois(k: QuadField, n: Int, rho: Residue) -> Result<TorsionFieldGalois> {
    let modulus = QuadIdeal::rational(k, n);
    let lift = if modulus.reduce(rho) == (0, 0) { (n, 0) } else { rho };
    let dbar = QuadIdeal::principal_int(k, lift)?.add(&modulus)?;
    let group = RayClassGroup::new(&modulus.div(&dbar)?)?.presentation();
    Ok(TorsionFieldGalois { n, dbar, group })
}

/// `[rho, s] ~_N [lambda, t]` iff some `u` has `rho u = lambda` and `s + [u] = t` in `C_{N/dbar}`.
pub fn sim_n_congruence(t: &DRMonoidTable) -> Result<MonoidCongruence> {
    let ctx = AdelicContext::for_table(t)?;
    let ring = ctx.residue_units().ring().clone();
    let enc = (0..t.len()).map(|x| adelic_encode(&ctx, t, x)).collect::<Result<Vec<_>>>()?;
    let n = t.len();
    let mut labels: Vec<usize> = (0..n).collect();
    for x in 0..n {
        let d = ctx.dbar(enc[x].rho)?;
        let di = t.divisors().iter().position(|q| *q == d).expect("dbar divides NO");
        let g = t.component_group(di);
        let proj = |s: &[Int]| g.dlog(ctx.class_rep(s));
        let sx = proj(&enc[x].s)?;
        for y in 0..x {
            if labels[y] != y {
                continue;
            }
            let sy = proj(&enc[y].s)?;
            let related = ctx.residue_units().elements().into_iter().any(|u| {
                ring.mul(enc[x].rho, u) == enc[y].rho && {
                    let img = g.image_of_residue(u);
                    sx.iter().zip(&img).zip(&sy).zip(g.divisors()).all(|(((a, b), c), e)| (a + b - c).rem_euclid(*e) == 0)
                }
            });
            if related {
                labels[x] = y;
                break;
            }
        }
    }
    Ok(MonoidCongruence::from_labels(&labels))
}
