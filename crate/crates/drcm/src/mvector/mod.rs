//! Modular vectors: special values of Fricke, Weber and theta-ratio functions as functions on DR monoids.

mod checks;

pub use checks::{
    compare_with_sim_n, congruence_of_vector, degree_audit, frobenius_congruence_check, lambda_action, level_family, value_labels,
    verify_equivariance, DegreeAudit, EquivarianceReport, FrobeniusReport, OrbitReport, SimNReport,
};

use num_traits::{One, Zero};
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::drmonoid::{adelic_encode, AdelicContext, AdelicElement, DRMonoidTable};
use crate::error::{Error, Result};
use crate::intmath::{lcm, Int};
use crate::numeric::Cx;
use crate::quadfield::{OVec, QuadElem, QuadField, QuadIdeal, Rat};
use crate::recognize::{recognize_or_keep, AlgebraicValue, RecognitionConfig};
use crate::symplectic::{decompose_idele_g1, gsp_act, mult_matrix, SiegelPoint, TypeDelta};
use crate::theta::{
    j_from_theta, j_invariant, theta, theta_ratio, weber_from_theta, weber_value, BigComplex, ClassicalKind, Lattice, ThetaChar,
    TorsionIndex, WeberKind,
};

/// `coeff * theta^k / theta^l` with characteristics in `n^{-1} Z / Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioTerm {
    #[serde(serialize_with = "crate::numeric::rat_serde::one")]
    pub coeff: Rat,
    #[serde(serialize_with = "crate::numeric::rat_serde::one")]
    pub k: Rat,
    #[serde(serialize_with = "crate::numeric::rat_serde::one")]
    pub l: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecFunction {
    Fricke,
    /// The Weber function of the field, case split by its unit group.
    Weber,
    /// A degree-zero combination of theta quotients for the type `delta = [n]`.
    ThetaRatio { n: Int, terms: Vec<RatioTerm> },
}

/// A torsion index together with a function selector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularVectorSpec {
    pub a: TorsionIndex,
    pub f: SpecFunction,
}

impl ModularVectorSpec {
    pub fn weber(a: TorsionIndex) -> Self {
        ModularVectorSpec { a, f: SpecFunction::Weber }
    }

    pub fn fricke(a: TorsionIndex) -> Self {
        ModularVectorSpec { a, f: SpecFunction::Fricke }
    }

    pub fn theta_ratio(a: TorsionIndex, n: Int, terms: Vec<RatioTerm>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Invalid("theta type must be positive".into()));
        }
        for t in &terms {
            if !(t.k * Rat::from(n)).is_integer() || !(t.l * Rat::from(n)).is_integer() {
                return Err(Error::Invalid(format!("characteristics of {t:?} are not in (1/{n})Z/Z")));
            }
        }
        Ok(ModularVectorSpec { a, f: SpecFunction::ThetaRatio { n, terms } })
    }

    /// `theta^k / theta^l`.
    pub fn single_ratio(a: TorsionIndex, n: Int, k: Rat, l: Rat) -> Result<Self> {
        Self::theta_ratio(a, n, vec![RatioTerm { coeff: Rat::one(), k, l }])
    }

    /// The level `N`: common denominator of `a`.
    pub fn level(&self) -> Int {
        self.a.level()
    }

    /// The spec whose index is `pi a`.
    pub fn translate(&self, k: QuadField, pi: OVec) -> Self {
        ModularVectorSpec { a: act_on_index(k, &self.a, pi), f: self.f.clone() }
    }

    pub fn classical_kind(&self, k: QuadField) -> Option<ClassicalKind> {
        match self.f {
            SpecFunction::Fricke => Some(ClassicalKind::Fricke),
            SpecFunction::Weber => Some(ClassicalKind::Weber(WeberKind::for_field(k.d()))),
            SpecFunction::ThetaRatio { .. } => None,
        }
    }

    fn a_elem(&self) -> QuadElem {
        QuadElem::new(self.a.a2[0], self.a.a1[0])
    }
}

/// `a M_v`: the coordinates of `v (a1 omega + a2)`.
pub fn act_on_index(k: QuadField, a: &TorsionIndex, v: OVec) -> TorsionIndex {
    act_by_matrix(a, &mult_matrix(k, v))
}

fn act_by_matrix(a: &TorsionIndex, m: &[[Int; 2]; 2]) -> TorsionIndex {
    let (a1, a2) = (a.a1[0], a.a2[0]);
    TorsionIndex::new(
        vec![a1 * Rat::from(m[0][0]) + a2 * Rat::from(m[1][0])],
        vec![a1 * Rat::from(m[0][1]) + a2 * Rat::from(m[1][1])],
    )
}

/// A component value with the conditions met while computing it.
#[derive(Debug, Clone)]
pub struct ComponentValue {
    pub value: BigComplex,
    /// The torsion point fell on the lattice and `j` was substituted.
    pub renormalized: bool,
}

fn elem_to_cx(k: QuadField, e: &QuadElem, prec: u32) -> Cx {
    let (x, y) = e.to_float(&k, prec);
    Cx::new(x, y)
}

/// `(w1, w2) = (b + c omega, a)` for the HNF `[a, b + c omega]` of an integral ideal.
pub fn ideal_lattice(s: &QuadIdeal, prec: u32) -> Result<Lattice> {
    let k = s.field();
    let w1 = elem_to_cx(k, &QuadElem::from_ints(s.b(), s.c()), prec);
    Lattice::new(w1, Cx::from_int(prec, s.a()))
}

fn ratio_sum(terms: &[RatioTerm], z: &Cx, tau: &Cx, prec: u32) -> Result<BigComplex> {
    let t = SiegelPoint::scalar(tau.clone())?;
    let mut acc = BigComplex::exact(Cx::zero(prec));
    for term in terms {
        let num = theta(&ThetaChar::free(vec![term.k]), std::slice::from_ref(z), &t, prec)?;
        let den = theta(&ThetaChar::free(vec![term.l]), std::slice::from_ref(z), &t, prec)?;
        let c = BigComplex::exact(Cx::from_rat(prec, &term.coeff, &Rat::zero()));
        acc = acc.add(&c.mul(&num.div(&den)?));
    }
    Ok(acc)
}

/// The value at `[rho~, s]` with `s` realized by the integral ideal `sfrak` coprime to `N`, through the lattice `sfrak`.
pub fn evaluate_at(spec: &ModularVectorSpec, n: Int, rho: OVec, sfrak: &QuadIdeal, prec: u32) -> Result<ComponentValue> {
    let k = sfrak.field();
    if n % spec.level() != 0 {
        return Err(Error::Invalid(format!("spec level {} does not divide {n}", spec.level())));
    }
    let dec = decompose_idele_g1(sfrak, n)?;
    let m = QuadElem::from_ints(dec.m.0, dec.m.1);
    let zk = k.mul(&k.mul(&m, &QuadElem::from_ints(rho.0, rho.1)), &spec.a_elem());
    let wp = prec + 32;
    let lat = ideal_lattice(sfrak, wp)?;
    let z = elem_to_cx(k, &zk, wp);
    let pole = sfrak.contains(&zk);
    let out = match (&spec.f, spec.classical_kind(k)) {
        (_, Some(kind)) => {
            if pole {
                return Ok(ComponentValue { value: j_invariant(&lat, prec)?, renormalized: true });
            }
            weber_value(kind, &lat, &z, wp)?
        }
        (SpecFunction::ThetaRatio { n: nd, terms }, None) => {
            let scale = Cx::from_int(wp, *nd).div(&lat.w2);
            ratio_sum(terms, &z.mul(&scale), &lat.w1.mul(&scale), wp)?
        }
        _ => unreachable!("classical kinds cover Fricke and Weber"),
    };
    Ok(ComponentValue { value: out.with_prec(prec), renormalized: false })
}

/// `f^_a(rho, s)` through the lattice of the class representative of `s`.
pub fn evaluate_component(spec: &ModularVectorSpec, ctx: &AdelicContext, x: &AdelicElement, prec: u32) -> Result<ComponentValue> {
    evaluate_at(spec, ctx.level(), ctx.lift(x.rho), ctx.class_rep(&x.s), prec)
}

/// Whether the theta denominators stay away from zero at `a rho` for every residue `rho`.
pub fn spec_defined(spec: &ModularVectorSpec, k: QuadField, prec: u32) -> Result<bool> {
    let SpecFunction::ThetaRatio { n: nd, terms } = &spec.f else {
        return Ok(true);
    };
    let n = spec.level();
    let delta = TypeDelta::new(vec![*nd])?;
    let (wr, wi) = k.omega_float(prec);
    let tau = SiegelPoint::scalar(Cx::new(wr, wi).mul_int(*nd))?;
    for x in 0..n {
        for y in 0..n {
            let a = act_on_index(k, &spec.a, (x, y));
            for t in terms {
                match theta_ratio(&ThetaChar::free(vec![t.k]), &ThetaChar::free(vec![t.l]), &a, &tau, &delta, prec) {
                    Err(Error::Pole) => return Ok(false),
                    Err(e) => return Err(e),
                    Ok(_) => {}
                }
            }
        }
    }
    Ok(true)
}

/// One component of a modular vector.
#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub class: usize,
    pub element: Option<AdelicElement>,
    pub value: AlgebraicValue,
    pub flags: Vec<String>,
}

/// A function on a DR monoid table with certified algebraic values.
#[derive(Debug, Clone, Serialize)]
pub struct WittVector {
    pub disc: i64,
    pub conductor: QuadIdeal,
    pub spec: Option<ModularVectorSpec>,
    pub prec: u32,
    pub components: Vec<Component>,
}

impl WittVector {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn values(&self) -> Vec<&AlgebraicValue> {
        self.components.iter().map(|c| &c.value).collect()
    }

    pub fn fully_recognized(&self) -> bool {
        self.components.iter().all(|c| c.value.is_recognized())
    }

    pub fn flagged(&self, flag: &str) -> Vec<usize> {
        self.components.iter().filter(|c| c.flags.iter().any(|f| f == flag)).map(|c| c.class).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "conductor": self.conductor,
            "disc": self.disc,
            "spec": self.spec,
            "prec": self.prec,
            "components": self.components.iter().map(|c| serde_json::json!({
                "class": c.class,
                "element": c.element,
                "minpoly": c.value.minpoly.iter().map(crate::recognize::int_json).collect::<Vec<_>>(),
                "degree": c.value.degree(),
                "approx": c.value.approx,
                "flags": c.flags,
            })).collect::<Vec<_>>(),
        })
    }

    /// Rows `class,orbit,degree,minpoly,flags` with the orbit given by its label ideal.
    pub fn to_csv(&self, t: &DRMonoidTable) -> String {
        let mut out = String::from("class,orbit,degree,minpoly,flags\n");
        for c in &self.components {
            let mp: Vec<String> = c.value.minpoly.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!(
                "{},\"{}\",{},\"{}\",\"{}\"\n",
                c.class,
                t.label_ideal(c.class).literal(),
                c.value.degree(),
                mp.join(" "),
                c.flags.join(" ")
            ));
        }
        out
    }
}

pub const FLAG_RENORMALIZED: &str = "pole-renormalized";
pub const FLAG_UNRECOGNIZED: &str = "unrecognized";
pub const FLAG_REP_DEPENDENT: &str = "representative-dependent";
pub const FLAG_DEGREE: &str = "degree-bound-exceeded";

/// Evaluates and recognizes every component of `f^_a` on a table of conductor `NO`.
pub fn build_modular_vector(spec: &ModularVectorSpec, t: &DRMonoidTable, prec: u32, recog: &RecognitionConfig) -> Result<WittVector> {
    let ctx = AdelicContext::for_table(t)?;
    let k = t.field();
    if !spec_defined(spec, k, prec)? {
        return Err(Error::Pole);
    }
    let n = ctx.level();
    let tol = Float::with_val(30, 1) >> (prec as i32 - 24);
    let components = (0..t.len())
        .into_par_iter()
        .map(|x| -> Result<Component> {
            let el = adelic_encode(&ctx, t, x)?;
            let rho = ctx.lift(el.rho);
            let sfrak = ctx.class_rep(&el.s);
            let v1 = evaluate_at(spec, n, rho, sfrak, prec)?;
            let v2 = evaluate_at(spec, n, rho, ctx.alt_class_rep(&el.s), prec)?;
            let mut flags = Vec::new();
            if v1.renormalized {
                flags.push(FLAG_RENORMALIZED.to_string());
            }
            let scale = Float::with_val(30, v1.value.v.abs().to_f64().max(1.0));
            if !v1.value.overlaps(&v2.value, &Float::with_val(30, &tol * &scale)) {
                flags.push(FLAG_REP_DEPENDENT.to_string());
            }
            let value = recognize_or_keep(&v1.value, recog);
            if !value.is_recognized() {
                flags.push(FLAG_UNRECOGNIZED.to_string());
            } else {
                let bound = 2 * t.component_group(t.label(x)).order();
                if value.degree() > bound || !bound.is_multiple_of(value.degree()) {
                    flags.push(FLAG_DEGREE.to_string());
                }
            }
            Ok(Component { class: x, element: Some(el), value, flags })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WittVector { disc: k.disc(), conductor: t.conductor().clone(), spec: Some(spec.clone()), prec, components })
}

/// Outcome of comparing the theta path with the lattice path at one class.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub class: Option<usize>,
    pub lattice: BigComplex,
    pub theta: BigComplex,
    /// `a''` from the idele decomposition.
    pub a_theta: TorsionIndex,
    /// Torsion coordinates of the lattice-path point in the basis of the ideal.
    pub a_lattice: TorsionIndex,
    pub coords_match: bool,
    pub diff_log2: f64,
    pub pass: bool,
}

/// Evaluates through `tau_s = alpha_s(tau_E)` and `a'' = a M_rho u_s`, and compares with the lattice path.
pub fn crosscheck_theta_path(spec: &ModularVectorSpec, ctx: &AdelicContext, x: &AdelicElement, prec: u32) -> Result<CrossCheckReport> {
    let k = ctx.field();
    let n = ctx.level();
    let rho = ctx.lift(x.rho);
    let sfrak = ctx.class_rep(&x.s);
    let dec = decompose_idele_g1(sfrak, n)?;
    let a_theta = act_by_matrix(&act_on_index(k, &spec.a, rho), &dec.u);

    let zk = k.mul(&k.mul(&QuadElem::from_ints(dec.m.0, dec.m.1), &QuadElem::from_ints(rho.0, rho.1)), &spec.a_elem());
    let t1 = zk.y / Rat::from(sfrak.c());
    let t2 = (zk.x - t1 * Rat::from(sfrak.b())) / Rat::from(sfrak.a());
    let a_lattice = TorsionIndex::new(vec![t1], vec![t2]);
    let coords_match = a_lattice == a_theta;

    let wp = prec + 32;
    let (wr, wi) = k.omega_float(wp);
    let omega = Cx::new(wr, wi);
    let lattice = evaluate_at(spec, n, rho, sfrak, wp)?.value;
    let theta_val = match (&spec.f, spec.classical_kind(k)) {
        (_, Some(kind)) => {
            let tau_s = gsp_act(&dec.alpha, &SiegelPoint::scalar(omega)?, &TypeDelta::principal(1))?.tau.rows[0][0].clone();
            if a_theta.is_zero() {
                j_from_theta(&tau_s, wp)?
            } else {
                weber_from_theta(kind, &tau_s, &a_theta, wp)?
            }
        }
        (SpecFunction::ThetaRatio { n: nd, terms }, None) => {
            let delta = TypeDelta::new(vec![*nd])?;
            let tau_e = SiegelPoint::scalar(omega.mul_int(*nd))?;
            let tau_s = gsp_act(&dec.alpha, &tau_e, &delta)?;
            let mut acc = BigComplex::exact(Cx::zero(wp));
            for term in terms {
                let r = theta_ratio(&ThetaChar::free(vec![term.k]), &ThetaChar::free(vec![term.l]), &a_theta, &tau_s, &delta, wp)?;
                acc = acc.add(&BigComplex::exact(Cx::from_rat(wp, &term.coeff, &Rat::zero())).mul(&r));
            }
            acc
        }
        _ => unreachable!("classical kinds cover Fricke and Weber"),
    };
    let diff = lattice.v.dist(&theta_val.v).to_f64();
    let diff_log2 = if diff == 0.0 { f64::NEG_INFINITY } else { diff.log2() };
    let scale = lattice.v.abs().to_f64().max(1.0).log2();
    let pass = coords_match && diff_log2 <= -(prec as f64) + 12.0 + scale;
    Ok(CrossCheckReport {
        class: None,
        lattice: lattice.with_prec(prec),
        theta: theta_val.with_prec(prec),
        a_theta,
        a_lattice,
        coords_match,
        diff_log2,
        pass,
    })
}

/// Level of a family of specs: the lcm of their levels.
pub fn family_level(specs: &[ModularVectorSpec]) -> Int {
    specs.iter().fold(1, |acc, s| lcm(acc, s.level()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drmonoid::build_dr_monoid;

    fn half(a1: Int, a2: Int, n: Int) -> TorsionIndex {
        TorsionIndex::new(vec![Rat::new(a1, n)], vec![Rat::new(a2, n)])
    }

    #[test]
    fn gaussian_level_two_weber_vector() {
        let k = QuadField::gaussian();
        let t = build_dr_monoid(k, &QuadIdeal::rational(k, 2)).unwrap();
        let v = build_modular_vector(&ModularVectorSpec::weber(half(0, 1, 2)), &t, 256, &RecognitionConfig::default()).unwrap();
        assert!(v.fully_recognized());
        let mut vals: Vec<String> = v.components.iter().map(|c| c.value.as_rational().unwrap().to_string()).collect();
        vals.sort();
        assert_eq!(vals, vec!["0", "1/4", "1728"]);
        assert!(v.flagged(FLAG_REP_DEPENDENT).is_empty());
    }

    #[test]
    fn half_period_matches_lattice_sum_oracle() {
        let k = QuadField::gaussian();
        let ctx = AdelicContext::new(k, 2).unwrap();
        let spec = ModularVectorSpec::weber(half(0, 1, 2));
        let x = ctx.canonical((1, 0), &[]);
        let v = evaluate_component(&spec, &ctx, &x, 128).unwrap().value;
        // direct lattice sum: g2(Z[i]) = 4 e1^2 and Weber = g2^2 ℘^2 / g2^3 = ℘(1/2)^2 / g2
        let lat = Lattice::from_tau(Cx::i(192)).unwrap();
        let p = crate::theta::weierstrass_p(&lat, &Cx::from_f64(192, 0.5, 0.0), 160).unwrap();
        let (g2, _) = crate::theta::eisenstein_g2_g3(&lat, 160).unwrap();
        let oracle = p.sqr().div(&g2).unwrap();
        assert!(v.overlaps(&oracle.with_prec(128), &(Float::with_val(30, 1) >> 120)));
    }

    #[test]
    fn zero_index_gives_j() {
        let k = QuadField::new(2).unwrap();
        let ctx = AdelicContext::new(k, 3).unwrap();
        let spec = ModularVectorSpec::fricke(TorsionIndex::zero(1));
        for x in ctx.elements() {
            let v = evaluate_component(&spec, &ctx, &x, 128).unwrap();
            assert!(v.renormalized);
            // j(sqrt -2) = 8000
            assert!(v.value.overlaps(&BigComplex::from_int(128, 8000), &(Float::with_val(30, 1) >> 100)));
        }
    }

    #[test]
    fn theta_path_agrees() {
        let k = QuadField::gaussian();
        let ctx = AdelicContext::new(k, 4).unwrap();
        let spec = ModularVectorSpec::weber(half(1, 2, 4));
        for x in ctx.elements().iter().step_by(3) {
            let r = crosscheck_theta_path(&spec, &ctx, x, 128).unwrap();
            assert!(r.pass, "{x:?}: {r:?}");
        }
    }
}
